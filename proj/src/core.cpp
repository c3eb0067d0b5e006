#include "lpred/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace lpred {

SmoothParams SmoothParams::make(double alpha, double delta) {
    if (!(alpha > 0.0) || !(delta > 0.0)) {
        throw std::invalid_argument("smooth params require alpha > 0 and delta > 0");
    }
    return SmoothParams{alpha, delta};
}

unsigned split_width(const std::optional<SmoothParams>& params, std::uint64_t n0, unsigned w) {
    const double lg = std::log2(static_cast<double>(std::max<std::uint64_t>(n0, 2)));
    const double bits = params ? (params->alpha / params->delta) * lg : lg * lg;
    const double wanted = std::ceil(bits);
    if (!(wanted < static_cast<double>(w))) {
        return w;
    }
    return std::max(1u, static_cast<unsigned>(wanted));
}

SplitConfig SplitConfig::make(unsigned w, std::optional<SmoothParams> params) {
    if (w < 1 || w > kMaxWordBits) {
        throw std::invalid_argument("word width must be in [1, 64]");
    }
    SplitConfig cfg;
    cfg.w = w;
    cfg.params = params;
    cfg.reset(0);
    return cfg;
}

std::uint64_t SplitConfig::rebuild_threshold() const noexcept {
    return std::max<std::uint64_t>(1, (n0 + 3) / 4);
}

bool SplitConfig::note_modification() noexcept {
    ++mods_since_rebuild;
    return mods_since_rebuild >= rebuild_threshold();
}

void SplitConfig::reset(std::uint64_t new_n0) {
    n0 = new_n0;
    p = split_width(params, n0, w);
    mods_since_rebuild = 0;
}

unsigned level_bound(unsigned p) noexcept {
    // ceil(log2 p) == bit_width(p - 1) for p >= 1
    return static_cast<unsigned>(std::bit_width(p - 1u)) + 2;
}

namespace {

// splitmix64 step; nodes rebuild their hasher from a seed, so this must be cheap.
std::uint64_t next_word(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

unsigned __int128 draw128(std::uint64_t& state) noexcept {
    const auto hi = static_cast<unsigned __int128>(next_word(state));
    return (hi << 64) | next_word(state);
}

}  // namespace

UniversalHash::UniversalHash(std::uint64_t seed) noexcept {
    a_ = draw128(seed) | 1;
    b_ = draw128(seed);
}

}  // namespace lpred
