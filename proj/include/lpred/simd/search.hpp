#pragma once

// Rank search over small sorted arrays of 64-bit words. The scalar kernels are
// the reference; vector variants must return identical ranks and are picked
// once at startup from the host CPU (override with LPRED_SIMD=scalar|avx2|neon).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace lpred::simd {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa) noexcept;

/// Number of elements strictly less than x in a nondecreasing array.
std::size_t rank_less(std::span<const std::uint64_t> sorted, std::uint64_t x) noexcept;

/// Number of elements less than or equal to x in a nondecreasing array.
std::size_t rank_less_equal(std::span<const std::uint64_t> sorted, std::uint64_t x) noexcept;

Isa active_isa() noexcept;

/// True when the running CPU (and this build) can execute the given variant.
bool isa_supported(Isa isa) noexcept;

/// Switches the dispatched kernels. Returns false, leaving the current choice,
/// when the variant is unsupported. Not thread-safe against concurrent searches.
bool force_isa(Isa isa) noexcept;

namespace scalar {
std::size_t rank_less(std::span<const std::uint64_t> sorted, std::uint64_t x) noexcept;
std::size_t rank_less_equal(std::span<const std::uint64_t> sorted, std::uint64_t x) noexcept;
}  // namespace scalar

#if defined(LPRED_HAVE_AVX2)
namespace avx2 {
std::size_t rank_less(std::span<const std::uint64_t> sorted, std::uint64_t x) noexcept;
std::size_t rank_less_equal(std::span<const std::uint64_t> sorted, std::uint64_t x) noexcept;
}  // namespace avx2
#endif

#if defined(LPRED_HAVE_NEON)
namespace neon {
std::size_t rank_less(std::span<const std::uint64_t> sorted, std::uint64_t x) noexcept;
std::size_t rank_less_equal(std::span<const std::uint64_t> sorted, std::uint64_t x) noexcept;
}  // namespace neon
#endif

}  // namespace lpred::simd
