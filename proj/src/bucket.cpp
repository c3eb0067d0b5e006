#include "lpred/bucket.hpp"

#include <bit>

#include "lpred/simd/search.hpp"

namespace lpred {
namespace {

// Logical probe count of a binary search over n elements; independent of
// which search kernel is dispatched.
unsigned probes_for(std::size_t n) noexcept {
    return static_cast<unsigned>(std::bit_width(n));
}

}  // namespace

bool Bucket::insert(std::uint64_t low) {
    const std::size_t idx = simd::rank_less(lows, low);
    if (idx < lows.size() && lows[idx] == low) return false;
    lows.insert(lows.begin() + static_cast<std::ptrdiff_t>(idx), low);
    return true;
}

bool Bucket::erase(std::uint64_t low) {
    const std::size_t idx = simd::rank_less(lows, low);
    if (idx == lows.size() || lows[idx] != low) return false;
    lows.erase(lows.begin() + static_cast<std::ptrdiff_t>(idx));
    return true;
}

std::optional<std::uint64_t> Bucket::pred(std::uint64_t x, OpMetrics& m) const {
    m.bucket_probes += probes_for(lows.size());
    const std::size_t idx = simd::rank_less(lows, x);
    if (idx == 0) return std::nullopt;
    return lows[idx - 1];
}

std::optional<std::uint64_t> Bucket::succ(std::uint64_t x, OpMetrics& m) const {
    m.bucket_probes += probes_for(lows.size());
    const std::size_t idx = simd::rank_less_equal(lows, x);
    if (idx == lows.size()) return std::nullopt;
    return lows[idx];
}

}  // namespace lpred
