#pragma once

// Key arithmetic, prefix-width policy and rebuild scheduling shared by the
// layered predecessor structure and its parts.

#include <cstddef>
#include <cstdint>
#include <optional>

namespace lpred {

using Key = std::uint64_t;

inline constexpr unsigned kMaxWordBits = 64;

/// Largest value representable in `bits` bits (bits in [0, 64]).
constexpr std::uint64_t universe_max(unsigned bits) noexcept {
    return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

/// Parameters of an (s^alpha, s^(1-delta))-smooth density. Both must be > 0.
struct SmoothParams {
    double alpha = 1.0;
    double delta = 1.0;

    /// Throws std::invalid_argument unless alpha > 0 and delta > 0.
    static SmoothParams make(double alpha, double delta);
};

/// Number of leading key bits handled by the trie, for a set of size n0.
///
/// With known params this is ceil((alpha/delta) * log2 n0), otherwise
/// ceil(log2(n0)^2). Logs are base 2 and n0 is floored at 2; the result is
/// clamped to [1, w]. Hitting w means the whole key goes into the trie.
unsigned split_width(const std::optional<SmoothParams>& params, std::uint64_t n0, unsigned w);

struct SplitKey {
    std::uint64_t prefix = 0;
    std::uint64_t low = 0;

    friend bool operator==(const SplitKey&, const SplitKey&) = default;
};

/// Splits a w-bit key into its top p bits and bottom w-p bits.
constexpr SplitKey split_key(Key key, unsigned p, unsigned w) noexcept {
    const unsigned low_bits = w - p;
    if (low_bits == 0) {
        return {key, 0};
    }
    return {key >> low_bits, key & universe_max(low_bits)};
}

constexpr Key join_key(std::uint64_t prefix, std::uint64_t low, unsigned p, unsigned w) noexcept {
    const unsigned low_bits = w - p;
    return low_bits == 0 ? prefix : (prefix << low_bits) | low;
}

/// Prefix width plus the bookkeeping that decides when it is recomputed.
struct SplitConfig {
    unsigned w = 64;
    std::optional<SmoothParams> params;
    unsigned p = 1;
    std::uint64_t n0 = 0;
    std::uint64_t mods_since_rebuild = 0;

    static SplitConfig make(unsigned w, std::optional<SmoothParams> params);

    /// max(1, ceil(n0 / 4))
    std::uint64_t rebuild_threshold() const noexcept;

    /// Counts one successful insert or erase. Returns true once the counter
    /// reaches the rebuild threshold.
    bool note_modification() noexcept;

    /// Adopts a new n0, recomputes p and clears the counter.
    void reset(std::uint64_t new_n0);
};

/// Per-operation instrumentation.
struct OpMetrics {
    /// Deepest recursion level reached by any single trie traversal.
    unsigned veb_levels_touched = 0;
    unsigned bucket_probes = 0;
    bool rebuild_triggered = false;

    void touch_level(unsigned level) noexcept {
        if (level > veb_levels_touched) {
            veb_levels_touched = level;
        }
    }
};

/// Hard per-operation cap on veb_levels_touched: ceil(log2 p) + 2.
unsigned level_bound(unsigned p) noexcept;

inline constexpr std::uint64_t kDefaultHashSeed = 0x9E3779B97F4A7C15ULL;

/// Multiply-add-shift hashing of 64-bit keys into 64 bits (128-bit a, b);
/// the seed selects a member of the family.
class UniversalHash {
public:
    explicit UniversalHash(std::uint64_t seed = kDefaultHashSeed) noexcept;

    std::size_t operator()(std::uint64_t x) const noexcept {
        const unsigned __int128 v = static_cast<unsigned __int128>(a_) * x + b_;
        return static_cast<std::size_t>(v >> 64);
    }

private:
    unsigned __int128 a_;
    unsigned __int128 b_;
};

}  // namespace lpred
