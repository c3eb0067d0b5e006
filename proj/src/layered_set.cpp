#include "lpred/layered_set.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lpred {

LayeredSet::LayeredSet(LayeredOptions options)
    : cfg_(SplitConfig::make(options.word_bits, options.params)),
      capacity_(options.cluster_capacity.value_or(default_cluster_capacity(options.word_bits))),
      hash_seed_(options.hash_seed),
      top_(cfg_.p, capacity_, hash_seed_),
      buckets_(16, UniversalHash(hash_seed_)) {}

void LayeredSet::require_key(Key key) const {
    if (key > universe_max(cfg_.w)) {
        throw std::out_of_range("key does not fit in the configured word width");
    }
}

void LayeredSet::record(const OpMetrics& m, unsigned p) const noexcept {
    last_ = m;
    ++ops_;
    level_sum_ += m.veb_levels_touched;
    level_max_ = std::max(level_max_, m.veb_levels_touched);
    if (m.veb_levels_touched > level_bound(p)) {
        ++depth_violations_;
    }
}

void LayeredSet::reset_metrics() noexcept {
    last_ = {};
    ops_ = 0;
    level_sum_ = 0;
    level_max_ = 0;
    depth_violations_ = 0;
}

void LayeredSet::link_bucket(Bucket& b, OpMetrics& m) {
    const auto left_prefix = top_.predecessor(b.prefix, m);
    Bucket* left = left_prefix ? &buckets_.at(*left_prefix) : nullptr;
    Bucket* right = left ? left->next : head_;
    b.prev = left;
    b.next = right;
    (left ? left->next : head_) = &b;
    (right ? right->prev : tail_) = &b;
}

void LayeredSet::unlink_bucket(Bucket& b) noexcept {
    (b.prev ? b.prev->next : head_) = b.next;
    (b.next ? b.next->prev : tail_) = b.prev;
    b.prev = b.next = nullptr;
}

void LayeredSet::after_modification(OpMetrics& m) {
    if (cfg_.note_modification()) {
        rebuild();
        m.rebuild_triggered = true;
    }
}

bool LayeredSet::insert(Key key) {
    require_key(key);
    const unsigned p = cfg_.p;
    OpMetrics m;
    const auto [prefix, low] = split_key(key, p, cfg_.w);
    if (auto it = buckets_.find(prefix); it != buckets_.end()) {
        if (!it->second.insert(low)) {
            record(m, p);
            return false;
        }
    } else {
        top_.insert(prefix, m);
        Bucket& b = buckets_.emplace(prefix, Bucket{prefix, {low}}).first->second;
#ifndef LPRED_FAULT_SKIP_RELINK
        link_bucket(b, m);
#else
        (void)b;
#endif
    }
    ++size_;
    after_modification(m);
    record(m, p);
    return true;
}

bool LayeredSet::erase(Key key) {
    require_key(key);
    const unsigned p = cfg_.p;
    OpMetrics m;
    const auto [prefix, low] = split_key(key, p, cfg_.w);
    auto it = buckets_.find(prefix);
    if (it == buckets_.end() || !it->second.erase(low)) {
        record(m, p);
        return false;
    }
    if (it->second.empty()) {
        unlink_bucket(it->second);
        top_.erase(prefix, m);
        buckets_.erase(it);
    }
    --size_;
    after_modification(m);
    record(m, p);
    return true;
}

bool LayeredSet::contains(Key key) const {
    if (key > universe_max(cfg_.w)) return false;
    const auto [prefix, low] = split_key(key, cfg_.p, cfg_.w);
    const auto it = buckets_.find(prefix);
    if (it == buckets_.end()) return false;
    const auto& lows = it->second.lows;
    return std::binary_search(lows.begin(), lows.end(), low);
}

std::optional<Key> LayeredSet::predecessor(Key x) const {
    require_key(x);
    const unsigned p = cfg_.p;
    const unsigned w = cfg_.w;
    OpMetrics m;
    std::optional<Key> result;
    const auto [prefix, low] = split_key(x, p, w);
    if (const auto it = buckets_.find(prefix); it != buckets_.end()) {
        const Bucket& b = it->second;
        if (const auto y = b.pred(low, m)) {
            result = join_key(prefix, *y, p, w);
        } else if (b.prev) {
            result = join_key(b.prev->prefix, b.prev->max(), p, w);
        }
    } else if (const auto left = top_.predecessor(prefix, m)) {
        result = join_key(*left, buckets_.at(*left).max(), p, w);
    }
    record(m, p);
    return result;
}

std::optional<Key> LayeredSet::successor(Key x) const {
    require_key(x);
    const unsigned p = cfg_.p;
    const unsigned w = cfg_.w;
    OpMetrics m;
    std::optional<Key> result;
    const auto [prefix, low] = split_key(x, p, w);
    if (const auto it = buckets_.find(prefix); it != buckets_.end()) {
        const Bucket& b = it->second;
        if (const auto y = b.succ(low, m)) {
            result = join_key(prefix, *y, p, w);
        } else if (b.next) {
            result = join_key(b.next->prefix, b.next->min(), p, w);
        }
    } else if (const auto right = top_.successor(prefix, m)) {
        result = join_key(*right, buckets_.at(*right).min(), p, w);
    }
    record(m, p);
    return result;
}

std::optional<Key> LayeredSet::min() const noexcept {
    if (!head_) return std::nullopt;
    return join_key(head_->prefix, head_->min(), cfg_.p, cfg_.w);
}

std::optional<Key> LayeredSet::max() const noexcept {
    if (!tail_) return std::nullopt;
    return join_key(tail_->prefix, tail_->max(), cfg_.p, cfg_.w);
}

std::vector<Key> LayeredSet::keys() const {
    std::vector<Key> out;
    out.reserve(size_);
    for (const Bucket* b = head_; b; b = b->next) {
        for (const std::uint64_t low : b->lows) {
            out.push_back(join_key(b->prefix, low, cfg_.p, cfg_.w));
        }
    }
    return out;
}

std::vector<Key> LayeredSet::keys_by_prefix() const {
    std::vector<Key> out;
    out.reserve(size_);
    for (const std::uint64_t prefix : top_.elements()) {
        for (const std::uint64_t low : buckets_.at(prefix).lows) {
            out.push_back(join_key(prefix, low, cfg_.p, cfg_.w));
        }
    }
    return out;
}

unsigned LayeredSet::rebuild() {
    rebuild_from(keys_by_prefix());
    return cfg_.p;
}

void LayeredSet::rebuild_from(const std::vector<Key>& sorted) {
    ++rebuilds_;
    size_ = sorted.size();
    cfg_.reset(size_);
    const unsigned p = cfg_.p;
    const unsigned w = cfg_.w;

    buckets_.clear();
    head_ = tail_ = nullptr;
    std::vector<std::uint64_t> prefixes;
    Bucket* current = nullptr;
    for (const Key key : sorted) {
        const auto [prefix, low] = split_key(key, p, w);
        if (!current || current->prefix != prefix) {
            Bucket& b = buckets_.emplace(prefix, Bucket{prefix, {}}).first->second;
            b.prev = current;
            (current ? current->next : head_) = &b;
            current = &b;
            prefixes.push_back(prefix);
        }
        current->lows.push_back(low);
    }
    tail_ = current;

    top_ = ClusteredVeb(p, capacity_, hash_seed_);
    top_.assign_sorted(prefixes);
}

SpaceTimeReport LayeredSet::stats() const {
    SpaceTimeReport r;
    r.size = size_;
    r.p = cfg_.p;
    r.n0 = cfg_.n0;
    r.rebuilds = rebuilds_;
    for (const auto& [prefix, b] : buckets_) {
        ++r.bucket_histogram[b.size()];
    }
    r.bucket_count = buckets_.size();
    if (r.bucket_count > 0) {
        r.mean_bucket = static_cast<double>(size_) / static_cast<double>(r.bucket_count);
        r.max_bucket = r.bucket_histogram.rbegin()->first;
        const auto need = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(r.bucket_count)));
        std::size_t seen = 0;
        for (const auto& [bucket_size, count] : r.bucket_histogram) {
            seen += count;
            if (seen >= need) {
                r.p99_bucket = bucket_size;
                break;
            }
        }
    }
    r.ops_measured = ops_;
    r.mean_levels = ops_ ? static_cast<double>(level_sum_) / static_cast<double>(ops_) : 0.0;
    r.max_levels = level_max_;
    r.depth_violations = depth_violations_;
    r.entries = size_ == 0 ? 0 : top_.entry_count() + buckets_.size() + size_;
    r.entries_per_key = size_ ? static_cast<double>(r.entries) / static_cast<double>(size_) : 0.0;
    return r;
}

std::optional<std::string> LayeredSet::check_invariants() const {
    const unsigned p = cfg_.p;
    const unsigned w = cfg_.w;
    if (p != split_width(cfg_.params, cfg_.n0, w)) return "prefix width is stale for n0";
    if (cfg_.mods_since_rebuild >= cfg_.rebuild_threshold()) return "rebuild overdue";
    if (top_.width() != p) return "top layer width differs from p";

    std::size_t total = 0;
    std::vector<std::uint64_t> prefixes;
    for (const auto& [prefix, b] : buckets_) {
        if (b.prefix != prefix) return "bucket filed under the wrong prefix";
        if (b.empty()) return "empty bucket retained";
        if (std::adjacent_find(b.lows.begin(), b.lows.end(), std::greater_equal<>()) != b.lows.end()) {
            return "bucket lows not strictly sorted";
        }
        if (b.lows.back() > universe_max(w - p)) return "bucket low exceeds w-p bits";
        total += b.size();
        prefixes.push_back(prefix);
    }
    if (total != size_) return "size differs from bucket contents";
    std::sort(prefixes.begin(), prefixes.end());

    std::vector<std::uint64_t> walked;
    const Bucket* prev = nullptr;
    for (const Bucket* b = head_; b; b = b->next) {
        if (b->prev != prev) return "bucket back link is inconsistent";
        if (walked.size() > buckets_.size()) return "bucket list has a cycle";
        walked.push_back(b->prefix);
        prev = b;
    }
    if (prev != tail_) return "bucket list tail is stale";
    if (walked != prefixes) return "bucket list differs from bucket map";
    if (top_.elements() != prefixes) return "top layer differs from bucket map";
    if (auto bad = top_.check_invariants()) return "top layer: " + *bad;
    return std::nullopt;
}

}  // namespace lpred
