#include "lpred/simd/search.hpp"

#include <algorithm>

namespace lpred::simd::scalar {

std::size_t rank_less(std::span<const std::uint64_t> sorted, std::uint64_t x) noexcept {
    return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
}

std::size_t rank_less_equal(std::span<const std::uint64_t> sorted, std::uint64_t x) noexcept {
    return static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
}

}  // namespace lpred::simd::scalar
