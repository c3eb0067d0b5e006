#include "lpred/veb_node.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace lpred {

struct VebNode::Inner {
    Inner(unsigned summary_width, std::uint64_t seed)
        : summary(summary_width, seed), children(4, UniversalHash(seed)) {}

    VebNode summary;
    std::unordered_map<std::uint64_t, VebNode, UniversalHash> children;
};

VebNode::VebNode(unsigned width, std::uint64_t hash_seed)
    : hash_seed_(hash_seed), width_(static_cast<std::uint8_t>(width)) {}

VebNode::~VebNode() = default;
VebNode::VebNode(VebNode&&) noexcept = default;
VebNode& VebNode::operator=(VebNode&&) noexcept = default;

bool VebNode::empty() const noexcept {
    return is_base() ? bits_ == 0 : empty_;
}

std::optional<std::uint64_t> VebNode::min() const noexcept {
    if (is_base()) {
        if (bits_ == 0) return std::nullopt;
        return static_cast<std::uint64_t>(std::countr_zero(bits_));
    }
    if (empty_) return std::nullopt;
    return min_;
}

std::optional<std::uint64_t> VebNode::max() const noexcept {
    if (is_base()) {
        if (bits_ == 0) return std::nullopt;
        return static_cast<std::uint64_t>(63 - std::countl_zero(bits_));
    }
    if (empty_) return std::nullopt;
    return max_;
}

void VebNode::clear() noexcept {
    bits_ = 0;
    empty_ = true;
    inner_.reset();
}

void VebNode::require_in_universe(std::uint64_t x) const {
    if (x > universe_max(width_)) {
        throw std::out_of_range("value outside the trie universe");
    }
}

bool VebNode::insert(std::uint64_t x) {
    require_in_universe(x);
    OpMetrics m;
    return insert_at(x, m, 1);
}

bool VebNode::insert(std::uint64_t x, OpMetrics& m) {
    require_in_universe(x);
    return insert_at(x, m, 1);
}

bool VebNode::erase(std::uint64_t x) {
    require_in_universe(x);
    OpMetrics m;
    return erase_at(x, m, 1);
}

bool VebNode::erase(std::uint64_t x, OpMetrics& m) {
    require_in_universe(x);
    return erase_at(x, m, 1);
}

std::optional<std::uint64_t> VebNode::predecessor(std::uint64_t x) const {
    require_in_universe(x);
    OpMetrics m;
    return pred_at(x, m, 1);
}

std::optional<std::uint64_t> VebNode::predecessor(std::uint64_t x, OpMetrics& m) const {
    require_in_universe(x);
    return pred_at(x, m, 1);
}

std::optional<std::uint64_t> VebNode::successor(std::uint64_t x) const {
    require_in_universe(x);
    OpMetrics m;
    return succ_at(x, m, 1);
}

std::optional<std::uint64_t> VebNode::successor(std::uint64_t x, OpMetrics& m) const {
    require_in_universe(x);
    return succ_at(x, m, 1);
}

bool VebNode::contains(std::uint64_t x) const {
    if (x > universe_max(width_)) return false;
    if (is_base()) {
        return (bits_ >> x) & 1;
    }
    if (empty_) return false;
    if (x == min_ || x == max_) return true;
    if (!inner_) return false;
    const auto it = inner_->children.find(high(x));
    return it != inner_->children.end() && it->second.contains(low(x));
}

bool VebNode::insert_at(std::uint64_t x, OpMetrics& m, unsigned level) {
    m.touch_level(level);
    if (is_base()) {
        const std::uint64_t bit = std::uint64_t{1} << x;
        if (bits_ & bit) return false;
        bits_ |= bit;
        return true;
    }
    if (empty_) {
        min_ = max_ = x;
        empty_ = false;
        return true;
    }
    if (x == min_) return false;
    if (x < min_) {
        // The new key becomes min; the old min moves down into a child.
        std::swap(x, min_);
    }
    if (!inner_) {
        inner_ = std::make_unique<Inner>(width_ - low_bits(), hash_seed_);
    }
    const std::uint64_t h = high(x);
    const std::uint64_t l = low(x);
    auto& children = inner_->children;
    bool changed = false;
    if (auto it = children.find(h); it != children.end()) {
        changed = it->second.insert_at(l, m, level + 1);
    } else {
        inner_->summary.insert_at(h, m, level + 1);
        auto [child, _] = children.emplace(h, VebNode(low_bits(), hash_seed_));
        child->second.insert_at(l, m, level + 1);
        changed = true;
    }
    if (changed && x > max_) {
        max_ = x;
    }
    return changed;
}

bool VebNode::erase_at(std::uint64_t x, OpMetrics& m, unsigned level) {
    m.touch_level(level);
    if (is_base()) {
        const std::uint64_t bit = std::uint64_t{1} << x;
        if (!(bits_ & bit)) return false;
        bits_ &= ~bit;
        return true;
    }
    if (empty_ || x < min_ || x > max_) return false;
    if (min_ == max_) {
        empty_ = true;
        return true;
    }
    auto& children = inner_->children;
    auto& summary = inner_->summary;
    if (x == min_) {
        // Pull the next smallest element up into min, then remove it below.
        const std::uint64_t first = *summary.min();
        x = index(first, *children.at(first).min());
        min_ = x;
    }
    const std::uint64_t h = high(x);
    auto it = children.find(h);
    if (it == children.end() || !it->second.erase_at(low(x), m, level + 1)) {
        return false;
    }
    if (it->second.empty()) {
        children.erase(it);
        summary.erase_at(h, m, level + 1);
        if (x == max_) {
            if (const auto last = summary.max()) {
                max_ = index(*last, *children.at(*last).max());
            } else {
                max_ = min_;
            }
        }
    } else if (x == max_) {
        max_ = index(h, *it->second.max());
    }
    if (summary.empty()) {
        inner_.reset();
    }
    return true;
}

std::optional<std::uint64_t> VebNode::pred_at(std::uint64_t x, OpMetrics& m, unsigned level) const {
    m.touch_level(level);
    if (is_base()) {
        const std::uint64_t below = bits_ & ((std::uint64_t{1} << x) - 1);
        if (below == 0) return std::nullopt;
        return static_cast<std::uint64_t>(63 - std::countl_zero(below));
    }
    if (empty_ || x <= min_) return std::nullopt;
    if (x > max_) return max_;
    // min_ < x <= max_ implies at least two members, so inner_ exists.
    const std::uint64_t h = high(x);
    const std::uint64_t l = low(x);
    const auto& children = inner_->children;
    if (auto it = children.find(h); it != children.end() && l > *it->second.min()) {
        return index(h, *it->second.pred_at(l, m, level + 1));
    }
    if (const auto ph = inner_->summary.pred_at(h, m, level + 1)) {
        return index(*ph, *children.at(*ph).max());
    }
    return min_;
}

std::optional<std::uint64_t> VebNode::succ_at(std::uint64_t x, OpMetrics& m, unsigned level) const {
    m.touch_level(level);
    if (is_base()) {
        const std::uint64_t upto = x >= 63 ? ~std::uint64_t{0} : (std::uint64_t{2} << x) - 1;
        const std::uint64_t above = bits_ & ~upto;
        if (above == 0) return std::nullopt;
        return static_cast<std::uint64_t>(std::countr_zero(above));
    }
    if (empty_ || x >= max_) return std::nullopt;
    if (x < min_) return min_;
    const std::uint64_t h = high(x);
    const std::uint64_t l = low(x);
    const auto& children = inner_->children;
    if (auto it = children.find(h); it != children.end() && l < *it->second.max()) {
        return index(h, *it->second.succ_at(l, m, level + 1));
    }
    // max_ lives in some child above h, so the summary has a successor.
    const std::uint64_t sh = *inner_->summary.succ_at(h, m, level + 1);
    return index(sh, *children.at(sh).min());
}

std::vector<std::uint64_t> VebNode::elements() const {
    std::vector<std::uint64_t> out;
    collect(out, 0);
    return out;
}

std::vector<std::uint64_t> VebNode::recursed_elements() const {
    std::vector<std::uint64_t> out;
    if (is_base() || !inner_) return out;
    for (const std::uint64_t h : inner_->summary.elements()) {
        for (const std::uint64_t l : inner_->children.at(h).elements()) {
            out.push_back(index(h, l));
        }
    }
    return out;
}

void VebNode::collect(std::vector<std::uint64_t>& out, std::uint64_t base) const {
    if (is_base()) {
        for (std::uint64_t bits = bits_; bits != 0; bits &= bits - 1) {
            out.push_back(base | static_cast<std::uint64_t>(std::countr_zero(bits)));
        }
        return;
    }
    if (empty_) return;
    out.push_back(base | min_);
    if (!inner_) return;
    for (const std::uint64_t h : inner_->summary.elements()) {
        inner_->children.at(h).collect(out, base | (h << low_bits()));
    }
}

std::optional<std::string> VebNode::check_invariants() const {
    if (is_base()) {
        if (width_ < 6 && (bits_ >> (1u << width_)) != 0) {
            return "base mask has bits outside the universe";
        }
        return std::nullopt;
    }
    const std::uint64_t top = universe_max(width_);
    if (empty_) {
        if (inner_) return "empty node owns children";
        return std::nullopt;
    }
    if (min_ > max_ || max_ > top) return "min/max out of order or out of universe";
    if (!inner_) {
        if (min_ != max_) return "two members but no children";
        return std::nullopt;
    }
    if (min_ == max_) return "single member but children allocated";
    const auto& summary = inner_->summary;
    const auto& children = inner_->children;
    if (auto bad = summary.check_invariants()) return "summary: " + *bad;
    const auto highs = summary.elements();
    if (highs.size() != children.size()) return "summary size differs from child count";
    for (const std::uint64_t h : highs) {
        const auto it = children.find(h);
        if (it == children.end()) return "summary names a missing child";
        if (it->second.empty()) return "empty child kept in hash map";
        if (auto bad = it->second.check_invariants()) return "child: " + *bad;
    }
    const auto below = recursed_elements();
    if (below.empty() || below.front() <= min_) return "min is stored recursively";
    if (below.back() != max_) return "max is not the largest recursed element";
    return std::nullopt;
}

std::vector<std::uint64_t> VebNode::summary_elements() const {
    if (is_base() || !inner_) return {};
    return inner_->summary.elements();
}

std::size_t VebNode::node_count() const noexcept {
    std::size_t count = 1;
    if (inner_) {
        count += inner_->summary.node_count();
        for (const auto& [h, child] : inner_->children) {
            count += child.node_count();
        }
    }
    return count;
}

unsigned VebNode::depth_for_width(unsigned width) noexcept {
    unsigned depth = 1;
    while (width > kBaseWidth) {
        width = width - width / 2;
        ++depth;
    }
    return depth;
}

}  // namespace lpred
