#pragma once

// Linear-space wrapper around VebNode. Stored values are grouped into sorted
// clusters of C/2..2C consecutive values kept in a doubly linked list; the
// trie (the "directory") only holds each cluster's minimum.

#include <cstddef>
#include <cstdint>
#include <list>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lpred/core.hpp"
#include "lpred/veb_node.hpp"

namespace lpred {

/// max(4, ceil(log2 w))
unsigned default_cluster_capacity(unsigned w) noexcept;

class ClusteredVeb {
public:
    struct Cluster {
        std::vector<std::uint64_t> keys;
    };
    using ClusterList = std::list<Cluster>;

    ClusteredVeb(unsigned width, unsigned capacity, std::uint64_t hash_seed = kDefaultHashSeed);

    unsigned width() const noexcept { return width_; }
    unsigned capacity() const noexcept { return capacity_; }
    std::size_t size() const noexcept { return count_; }
    bool empty() const noexcept { return count_ == 0; }

    bool insert(std::uint64_t x, OpMetrics& m);
    bool erase(std::uint64_t x, OpMetrics& m);
    bool contains(std::uint64_t x) const;
    std::optional<std::uint64_t> predecessor(std::uint64_t x, OpMetrics& m) const;
    std::optional<std::uint64_t> successor(std::uint64_t x, OpMetrics& m) const;

    bool insert(std::uint64_t x) { OpMetrics m; return insert(x, m); }
    bool erase(std::uint64_t x) { OpMetrics m; return erase(x, m); }
    std::optional<std::uint64_t> predecessor(std::uint64_t x) const { OpMetrics m; return predecessor(x, m); }
    std::optional<std::uint64_t> successor(std::uint64_t x) const { OpMetrics m; return successor(x, m); }

    std::optional<std::uint64_t> min() const noexcept;
    std::optional<std::uint64_t> max() const noexcept;

    /// Replaces the contents with a strictly increasing sequence, packing
    /// clusters of exactly C values (the tail is merged if it would underflow).
    void assign_sorted(std::span<const std::uint64_t> sorted);
    void clear() noexcept;

    std::vector<std::uint64_t> elements() const;
    const ClusterList& clusters() const noexcept { return clusters_; }
    const VebNode& directory() const noexcept { return directory_; }

    /// Trie nodes + directory lookup entries + cluster headers + stored values.
    std::size_t entry_count() const noexcept;

    std::optional<std::string> check_invariants() const;

private:
    using ClusterIt = ClusterList::iterator;
    using ClusterCIt = ClusterList::const_iterator;

    std::size_t min_fill() const noexcept { return (capacity_ + 1) / 2; }
    std::size_t max_fill() const noexcept { return 2 * static_cast<std::size_t>(capacity_); }

    /// Cluster whose minimum is the largest one <= x.
    std::optional<ClusterCIt> floor_cluster(std::uint64_t x, OpMetrics& m) const;
    ClusterIt mutable_it(ClusterCIt it) { return clusters_.erase(it, it); }

    void link(ClusterIt it, OpMetrics& m);
    void unlink(ClusterIt it, OpMetrics& m);
    void split(ClusterIt it, OpMetrics& m);
    void rebalance(ClusterIt it, OpMetrics& m);

    unsigned width_;
    unsigned capacity_;
    std::uint64_t hash_seed_;
    std::size_t count_ = 0;
    ClusterList clusters_;
    VebNode directory_;
    std::unordered_map<std::uint64_t, ClusterIt, UniversalHash> by_min_;
};

}  // namespace lpred
