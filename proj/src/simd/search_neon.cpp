#include "lpred/simd/search.hpp"

#include <arm_neon.h>

namespace lpred::simd::neon {
namespace {

constexpr std::size_t kWindow = 16;

template <bool kInclusive>
std::size_t count_window(const std::uint64_t* a, std::size_t n, std::uint64_t x) {
    const uint64x2_t xs = vdupq_n_u64(x);
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const uint64x2_t v = vld1q_u64(a + i);
        const uint64x2_t m = kInclusive ? vcleq_u64(v, xs) : vcltq_u64(v, xs);
        // Each true lane is all ones; shifting down leaves 1 per lane.
        const uint64x2_t ones = vshrq_n_u64(m, 63);
        count += vgetq_lane_u64(ones, 0) + vgetq_lane_u64(ones, 1);
    }
    for (; i < n; ++i) {
        count += kInclusive ? (a[i] <= x) : (a[i] < x);
    }
    return count;
}

template <bool kInclusive>
std::size_t rank(std::span<const std::uint64_t> sorted, std::uint64_t x) {
    const std::uint64_t* a = sorted.data();
    std::size_t lo = 0;
    std::size_t n = sorted.size();
    while (n > kWindow) {
        const std::size_t half = n / 2;
        const bool right = kInclusive ? a[lo + half] <= x : a[lo + half] < x;
        if (right) {
            lo += half + 1;
            n -= half + 1;
        } else {
            n = half;
        }
    }
    return lo + count_window<kInclusive>(a + lo, n, x);
}

}  // namespace

std::size_t rank_less(std::span<const std::uint64_t> sorted, std::uint64_t x) noexcept {
    return rank<false>(sorted, x);
}

std::size_t rank_less_equal(std::span<const std::uint64_t> sorted, std::uint64_t x) noexcept {
    return rank<true>(sorted, x);
}

}  // namespace lpred::simd::neon
