#pragma once

/**
 * Hashed van Emde Boas trie over a universe of 2^width values.
 *
 * Node<width>
 * ┌──────────────────────────────────┐
 * | min, max                         | ← min is never stored below this node
 * | inner (only with >= 2 elements): |
 * |   summary : Node<ceil(width/2)>  | ← high halves of nonempty children
 * |   children: hash map high → Node<floor(width/2)>
 * └──────────────────────────────────┘
 * Nodes of width <= kBaseWidth keep a single 64-bit mask instead.
 *
 * Every operation makes at most one nontrivial recursive call per level, so
 * a traversal visits at most depth_for_width(width) levels.
 */

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lpred/core.hpp"

namespace lpred {

class VebNode {
public:
    static constexpr unsigned kBaseWidth = 6;

    explicit VebNode(unsigned width, std::uint64_t hash_seed = kDefaultHashSeed);
    ~VebNode();
    VebNode(VebNode&&) noexcept;
    VebNode& operator=(VebNode&&) noexcept;
    VebNode(const VebNode&) = delete;
    VebNode& operator=(const VebNode&) = delete;

    unsigned width() const noexcept { return width_; }
    bool empty() const noexcept;

    /// Mutators and queries throw std::out_of_range for x >= 2^width.
    bool insert(std::uint64_t x);
    bool insert(std::uint64_t x, OpMetrics& m);
    bool erase(std::uint64_t x);
    bool erase(std::uint64_t x, OpMetrics& m);
    bool contains(std::uint64_t x) const;

    /// Largest member strictly less than x.
    std::optional<std::uint64_t> predecessor(std::uint64_t x) const;
    std::optional<std::uint64_t> predecessor(std::uint64_t x, OpMetrics& m) const;
    /// Smallest member strictly greater than x.
    std::optional<std::uint64_t> successor(std::uint64_t x) const;
    std::optional<std::uint64_t> successor(std::uint64_t x, OpMetrics& m) const;

    std::optional<std::uint64_t> min() const noexcept;
    std::optional<std::uint64_t> max() const noexcept;

    void clear() noexcept;

    /// Members in increasing order.
    std::vector<std::uint64_t> elements() const;

    /// Members stored in the children of this node (excluding min), raw,
    /// as reconstructed keys. Used to check the min-not-recursed rule.
    std::vector<std::uint64_t> recursed_elements() const;

    /// High halves recorded in the summary (empty for base or single-member nodes).
    std::vector<std::uint64_t> summary_elements() const;

    /// Node objects across all levels, this one included.
    std::size_t node_count() const noexcept;

    /// Structural self-check; returns a description of the first violation.
    std::optional<std::string> check_invariants() const;

    /// Number of recursion levels a traversal of a width-w node can reach.
    static unsigned depth_for_width(unsigned width) noexcept;

private:
    struct Inner;

    bool is_base() const noexcept { return width_ <= kBaseWidth; }
    void require_in_universe(std::uint64_t x) const;
    unsigned low_bits() const noexcept { return width_ / 2; }
    std::uint64_t high(std::uint64_t x) const noexcept { return x >> low_bits(); }
    std::uint64_t low(std::uint64_t x) const noexcept { return x & universe_max(low_bits()); }
    std::uint64_t index(std::uint64_t h, std::uint64_t l) const noexcept { return (h << low_bits()) | l; }

    bool insert_at(std::uint64_t x, OpMetrics& m, unsigned level);
    bool erase_at(std::uint64_t x, OpMetrics& m, unsigned level);
    std::optional<std::uint64_t> pred_at(std::uint64_t x, OpMetrics& m, unsigned level) const;
    std::optional<std::uint64_t> succ_at(std::uint64_t x, OpMetrics& m, unsigned level) const;
    void collect(std::vector<std::uint64_t>& out, std::uint64_t base) const;

    std::uint64_t min_ = 0;
    std::uint64_t max_ = 0;
    // Membership mask for base nodes.
    std::uint64_t bits_ = 0;
    std::unique_ptr<Inner> inner_;
    std::uint64_t hash_seed_;
    std::uint8_t width_;
    bool empty_ = true;
};

}  // namespace lpred
