// Compiled with -mavx2; only reached after a runtime CPU check.

#include "lpred/simd/search.hpp"

#include <bit>
#include <immintrin.h>

namespace lpred::simd::avx2 {
namespace {

constexpr std::size_t kWindow = 16;

// AVX2 has only signed 64-bit compares; flipping the sign bit maps unsigned
// order onto signed order.
inline __m256i bias(__m256i v) {
    return _mm256_xor_si256(v, _mm256_set1_epi64x(static_cast<long long>(0x8000000000000000ULL)));
}

inline unsigned lanes(__m256i mask) {
    return static_cast<unsigned>(std::popcount(static_cast<unsigned>(_mm256_movemask_pd(_mm256_castsi256_pd(mask)))));
}

// Counts elements a[i] < x (or <= x) in [0, n).
template <bool kInclusive>
std::size_t count_window(const std::uint64_t* a, std::size_t n, std::uint64_t x) {
    const __m256i xs = bias(_mm256_set1_epi64x(static_cast<long long>(x)));
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256i v = bias(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i)));
        if constexpr (kInclusive) {
            count += 4 - lanes(_mm256_cmpgt_epi64(v, xs));
        } else {
            count += lanes(_mm256_cmpgt_epi64(xs, v));
        }
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
    // Answer stays in [lo, lo + n].
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

}  // namespace lpred::simd::avx2
