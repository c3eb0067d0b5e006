#include "lpred/clustered_veb.hpp"

#include <algorithm>
#include <bit>
#include <iterator>
#include <stdexcept>

#include "lpred/simd/search.hpp"

namespace lpred {

unsigned default_cluster_capacity(unsigned w) noexcept {
    const auto lg = static_cast<unsigned>(std::bit_width(w - 1u));  // ceil(log2 w)
    return std::max(4u, lg);
}

ClusteredVeb::ClusteredVeb(unsigned width, unsigned capacity, std::uint64_t hash_seed)
    : width_(width),
      capacity_(capacity),
      hash_seed_(hash_seed),
      directory_(width, hash_seed),
      by_min_(16, UniversalHash(hash_seed ^ 0x5bd1e995ULL)) {
    if (width < 1 || width > kMaxWordBits) {
        throw std::invalid_argument("clustered trie width must be in [1, 64]");
    }
    if (capacity < 2) {
        throw std::invalid_argument("cluster capacity must be at least 2");
    }
}

std::optional<ClusteredVeb::ClusterCIt> ClusteredVeb::floor_cluster(std::uint64_t x, OpMetrics& m) const {
    if (count_ == 0) return std::nullopt;
    const auto rep = x == universe_max(width_) ? directory_.max() : directory_.predecessor(x + 1, m);
    if (!rep) return std::nullopt;
    return ClusterCIt(by_min_.at(*rep));
}

void ClusteredVeb::link(ClusterIt it, OpMetrics& m) {
    const std::uint64_t rep = it->keys.front();
    directory_.insert(rep, m);
    by_min_.insert_or_assign(rep, it);
}

void ClusteredVeb::unlink(ClusterIt it, OpMetrics& m) {
    const std::uint64_t rep = it->keys.front();
    directory_.erase(rep, m);
    by_min_.erase(rep);
}

bool ClusteredVeb::insert(std::uint64_t x, OpMetrics& m) {
    if (x > universe_max(width_)) {
        throw std::out_of_range("value outside the trie universe");
    }
    if (count_ == 0) {
        clusters_.push_back(Cluster{{x}});
        link(clusters_.begin(), m);
        count_ = 1;
        return true;
    }
    ClusterIt it;
    if (const auto floor = floor_cluster(x, m)) {
        it = mutable_it(*floor);
        auto& keys = it->keys;
        const std::size_t idx = simd::rank_less(keys, x);
        if (idx < keys.size() && keys[idx] == x) return false;
        keys.insert(keys.begin() + static_cast<std::ptrdiff_t>(idx), x);
    } else {
        // Below every stored value: it becomes the first cluster's new minimum.
        it = clusters_.begin();
        unlink(it, m);
        it->keys.insert(it->keys.begin(), x);
        link(it, m);
    }
    ++count_;
    if (it->keys.size() > max_fill()) {
        split(it, m);
    }
    return true;
}

void ClusteredVeb::split(ClusterIt it, OpMetrics& m) {
    auto& keys = it->keys;
    const auto half = static_cast<std::ptrdiff_t>(keys.size() / 2);
    Cluster upper{std::vector<std::uint64_t>(keys.begin() + half, keys.end())};
    keys.erase(keys.begin() + half, keys.end());
    link(clusters_.insert(std::next(it), std::move(upper)), m);
}

bool ClusteredVeb::erase(std::uint64_t x, OpMetrics& m) {
    if (x > universe_max(width_)) {
        throw std::out_of_range("value outside the trie universe");
    }
    const auto floor = floor_cluster(x, m);
    if (!floor) return false;
    ClusterIt it = mutable_it(*floor);
    auto& keys = it->keys;
    const std::size_t idx = simd::rank_less(keys, x);
    if (idx == keys.size() || keys[idx] != x) return false;
    --count_;
    if (idx == 0) {
        unlink(it, m);
        keys.erase(keys.begin());
        if (keys.empty()) {
            clusters_.erase(it);
            return true;
        }
        link(it, m);
    } else {
        keys.erase(keys.begin() + static_cast<std::ptrdiff_t>(idx));
    }
    rebalance(it, m);
    return true;
}

void ClusteredVeb::rebalance(ClusterIt it, OpMetrics& m) {
    if (it->keys.size() >= min_fill() || clusters_.size() == 1) return;
    if (auto right = std::next(it); right != clusters_.end()) {
        unlink(right, m);
        if (right->keys.size() > min_fill()) {
            it->keys.push_back(right->keys.front());
            right->keys.erase(right->keys.begin());
            link(right, m);
        } else {
            it->keys.insert(it->keys.end(), right->keys.begin(), right->keys.end());
            clusters_.erase(right);
        }
        return;
    }
    auto left = std::prev(it);
    unlink(it, m);
    if (left->keys.size() > min_fill()) {
        it->keys.insert(it->keys.begin(), left->keys.back());
        left->keys.pop_back();
        link(it, m);
    } else {
        left->keys.insert(left->keys.end(), it->keys.begin(), it->keys.end());
        clusters_.erase(it);
    }
}

bool ClusteredVeb::contains(std::uint64_t x) const {
    if (x > universe_max(width_)) return false;
    OpMetrics m;
    const auto floor = floor_cluster(x, m);
    if (!floor) return false;
    const auto& keys = (*floor)->keys;
    const std::size_t idx = simd::rank_less(keys, x);
    return idx < keys.size() && keys[idx] == x;
}

std::optional<std::uint64_t> ClusteredVeb::predecessor(std::uint64_t x, OpMetrics& m) const {
    if (x > universe_max(width_)) {
        throw std::out_of_range("value outside the trie universe");
    }
    const auto floor = floor_cluster(x, m);
    if (!floor) return std::nullopt;
    const auto& keys = (*floor)->keys;
    if (const std::size_t idx = simd::rank_less(keys, x); idx > 0) {
        return keys[idx - 1];
    }
    // x is this cluster's minimum; the answer is the left neighbour's maximum.
    if (*floor == clusters_.begin()) return std::nullopt;
    return std::prev(*floor)->keys.back();
}

std::optional<std::uint64_t> ClusteredVeb::successor(std::uint64_t x, OpMetrics& m) const {
    if (x > universe_max(width_)) {
        throw std::out_of_range("value outside the trie universe");
    }
    if (count_ == 0) return std::nullopt;
    const auto floor = floor_cluster(x, m);
    if (!floor) return clusters_.front().keys.front();
    const auto& keys = (*floor)->keys;
    if (const std::size_t idx = simd::rank_less_equal(keys, x); idx < keys.size()) {
        return keys[idx];
    }
    const auto next = std::next(*floor);
    if (next == clusters_.end()) return std::nullopt;
    return next->keys.front();
}

std::optional<std::uint64_t> ClusteredVeb::min() const noexcept {
    if (count_ == 0) return std::nullopt;
    return clusters_.front().keys.front();
}

std::optional<std::uint64_t> ClusteredVeb::max() const noexcept {
    if (count_ == 0) return std::nullopt;
    return clusters_.back().keys.back();
}

void ClusteredVeb::assign_sorted(std::span<const std::uint64_t> sorted) {
    clear();
    OpMetrics m;
    const std::size_t cap = capacity_;
    std::size_t pos = 0;
    while (pos < sorted.size()) {
        std::size_t take = std::min(cap, sorted.size() - pos);
        const std::size_t rest = sorted.size() - pos - take;
        if (rest > 0 && rest < min_fill()) {
            take += rest;
        }
        clusters_.push_back(Cluster{{sorted.begin() + static_cast<std::ptrdiff_t>(pos),
                                     sorted.begin() + static_cast<std::ptrdiff_t>(pos + take)}});
        link(std::prev(clusters_.end()), m);
        pos += take;
    }
    count_ = sorted.size();
}

void ClusteredVeb::clear() noexcept {
    clusters_.clear();
    directory_.clear();
    by_min_.clear();
    count_ = 0;
}

std::vector<std::uint64_t> ClusteredVeb::elements() const {
    std::vector<std::uint64_t> out;
    out.reserve(count_);
    for (const auto& c : clusters_) {
        out.insert(out.end(), c.keys.begin(), c.keys.end());
    }
    return out;
}

std::size_t ClusteredVeb::entry_count() const noexcept {
    return directory_.node_count() + by_min_.size() + clusters_.size() + count_;
}

std::optional<std::string> ClusteredVeb::check_invariants() const {
    std::size_t total = 0;
    std::vector<std::uint64_t> minima;
    const std::uint64_t* last = nullptr;
    for (auto it = clusters_.begin(); it != clusters_.end(); ++it) {
        const auto& keys = it->keys;
        if (keys.empty()) return "empty cluster in list";
        if (keys.size() > max_fill()) return "cluster above 2C";
        if (clusters_.size() > 1 && keys.size() < min_fill()) return "cluster below C/2 with neighbours present";
        if (!std::is_sorted(keys.begin(), keys.end()) ||
            std::adjacent_find(keys.begin(), keys.end()) != keys.end()) {
            return "cluster not strictly sorted";
        }
        if (last && *last >= keys.front()) return "cluster ranges overlap or are out of order";
        if (keys.back() > universe_max(width_)) return "value outside universe";
        last = &keys.back();
        total += keys.size();
        minima.push_back(keys.front());
        const auto found = by_min_.find(keys.front());
        if (found == by_min_.end() || found->second != it) return "representative lookup is stale";
    }
    if (total != count_) return "count does not match cluster contents";
    if (by_min_.size() != clusters_.size()) return "representative lookup has extra entries";
    if (directory_.elements() != minima) return "directory differs from cluster minima";
    if (auto bad = directory_.check_invariants()) return "directory: " + *bad;
    return std::nullopt;
}

}  // namespace lpred
