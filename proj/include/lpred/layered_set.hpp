#pragma once

// Predecessor set over w-bit keys split asymmetrically: the top p bits of each
// key go into a clustered hashed vEB trie, the remaining w-p bits into a small
// sorted bucket per distinct prefix. p follows split_width() of the set size
// and is refreshed by a full rebuild after every ceil(n0/4) modifications.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lpred/bucket.hpp"
#include "lpred/clustered_veb.hpp"
#include "lpred/core.hpp"

namespace lpred {

struct LayeredOptions {
    unsigned word_bits = 64;
    /// Known smoothness parameters; absent selects the log^2 n prefix width.
    std::optional<SmoothParams> params;
    /// Defaults to default_cluster_capacity(word_bits).
    std::optional<unsigned> cluster_capacity;
    std::uint64_t hash_seed = kDefaultHashSeed;
};

struct SpaceTimeReport {
    std::size_t size = 0;
    unsigned p = 0;
    std::uint64_t n0 = 0;
    std::uint64_t rebuilds = 0;

    /// bucket size -> number of buckets of that size
    std::map<std::size_t, std::size_t> bucket_histogram;
    std::size_t bucket_count = 0;
    double mean_bucket = 0.0;
    std::size_t max_bucket = 0;
    std::size_t p99_bucket = 0;

    std::uint64_t ops_measured = 0;
    double mean_levels = 0.0;
    unsigned max_levels = 0;
    /// Operations whose trie depth exceeded level_bound(p).
    std::uint64_t depth_violations = 0;

    std::size_t entries = 0;
    double entries_per_key = 0.0;
};

class LayeredSet {
public:
    explicit LayeredSet(LayeredOptions options = {});

    LayeredSet(LayeredSet&&) noexcept = default;
    LayeredSet& operator=(LayeredSet&&) noexcept = default;
    LayeredSet(const LayeredSet&) = delete;
    LayeredSet& operator=(const LayeredSet&) = delete;

    /// Keys must be below 2^w; out-of-range keys throw std::out_of_range.
    bool insert(Key key);
    bool erase(Key key);
    bool contains(Key key) const;

    std::optional<Key> predecessor(Key x) const;
    std::optional<Key> successor(Key x) const;

    std::optional<Key> min() const noexcept;
    std::optional<Key> max() const noexcept;

    /// Re-splits every key with p = split_width(params, size, w). Returns the new p.
    unsigned rebuild();

    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }
    unsigned prefix_bits() const noexcept { return cfg_.p; }
    unsigned word_bits() const noexcept { return cfg_.w; }
    const SplitConfig& config() const noexcept { return cfg_; }
    std::uint64_t rebuild_count() const noexcept { return rebuilds_; }
    const ClusteredVeb& top() const noexcept { return top_; }

    /// Metrics of the most recent operation.
    const OpMetrics& last_op() const noexcept { return last_; }
    void reset_metrics() noexcept;
    SpaceTimeReport stats() const;

    /// All keys in increasing order, read by walking the bucket list.
    std::vector<Key> keys() const;

    std::optional<std::string> check_invariants() const;

private:
    using BucketMap = std::unordered_map<std::uint64_t, Bucket, UniversalHash>;

    void require_key(Key key) const;
    void link_bucket(Bucket& b, OpMetrics& m);
    void unlink_bucket(Bucket& b) noexcept;
    void after_modification(OpMetrics& m);
    void record(const OpMetrics& m, unsigned p) const noexcept;
    void rebuild_from(const std::vector<Key>& sorted);
    /// Keys in order via the top layer and the bucket map, without the links.
    std::vector<Key> keys_by_prefix() const;

    SplitConfig cfg_;
    unsigned capacity_;
    std::uint64_t hash_seed_;
    ClusteredVeb top_;
    BucketMap buckets_;
    Bucket* head_ = nullptr;
    Bucket* tail_ = nullptr;
    std::size_t size_ = 0;
    std::uint64_t rebuilds_ = 0;

    // Instrumentation; queries are logically const.
    mutable OpMetrics last_;
    mutable std::uint64_t ops_ = 0;
    mutable std::uint64_t level_sum_ = 0;
    mutable unsigned level_max_ = 0;
    mutable std::uint64_t depth_violations_ = 0;
};

}  // namespace lpred
