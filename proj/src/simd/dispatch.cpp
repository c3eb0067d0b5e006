#include "lpred/simd/search.hpp"

#include <cstdlib>
#include <string_view>

namespace lpred::simd {
namespace {

using RankFn = std::size_t (*)(std::span<const std::uint64_t>, std::uint64_t) noexcept;

struct Kernels {
    Isa isa;
    RankFn less;
    RankFn less_equal;
};

Kernels kernels_for(Isa isa) noexcept {
    switch (isa) {
#if defined(LPRED_HAVE_AVX2)
        case Isa::avx2:
            return {Isa::avx2, &avx2::rank_less, &avx2::rank_less_equal};
#endif
#if defined(LPRED_HAVE_NEON)
        case Isa::neon:
            return {Isa::neon, &neon::rank_less, &neon::rank_less_equal};
#endif
        default:
            return {Isa::scalar, &scalar::rank_less, &scalar::rank_less_equal};
    }
}

Isa detect() noexcept {
    if (const char* env = std::getenv("LPRED_SIMD")) {
        const std::string_view want(env);
        for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
            if (want == isa_name(isa) && isa_supported(isa)) {
                return isa;
            }
        }
    }
    if (isa_supported(Isa::avx2)) {
        return Isa::avx2;
    }
    if (isa_supported(Isa::neon)) {
        return Isa::neon;
    }
    return Isa::scalar;
}

Kernels& active() noexcept {
    static Kernels k = kernels_for(detect());
    return k;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::avx2:
            return "avx2";
        case Isa::neon:
            return "neon";
        case Isa::scalar:
            break;
    }
    return "scalar";
}

bool isa_supported(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
#if defined(LPRED_HAVE_AVX2)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::neon:
#if defined(LPRED_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

bool force_isa(Isa isa) noexcept {
    if (!isa_supported(isa)) {
        return false;
    }
    active() = kernels_for(isa);
    return true;
}

Isa active_isa() noexcept {
    return active().isa;
}

std::size_t rank_less(std::span<const std::uint64_t> sorted, std::uint64_t x) noexcept {
    return active().less(sorted, x);
}

std::size_t rank_less_equal(std::span<const std::uint64_t> sorted, std::uint64_t x) noexcept {
    return active().less_equal(sorted, x);
}

}  // namespace lpred::simd
