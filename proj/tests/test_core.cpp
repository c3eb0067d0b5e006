#include "doctest.h"

#include <random>
#include <stdexcept>

#include "lpred/core.hpp"

using lpred::SmoothParams;
using lpred::split_key;
using lpred::split_width;

TEST_CASE("split_width follows the known-params and log-squared policies") {
    CHECK(split_width(SmoothParams{1, 1}, 1024, 64) == 10);
    CHECK(split_width(std::nullopt, 256, 64) == 64);
    CHECK(split_width(SmoothParams{2, 1}, std::uint64_t{1} << 40, 64) == 64);
    CHECK(split_width(std::nullopt, 0, 64) == 1);
    CHECK(split_width(std::nullopt, 1, 64) == 1);
    CHECK(split_width(std::nullopt, 3, 64) == 3);     // ceil(1.585^2) = ceil(2.51)
    CHECK(split_width(SmoothParams{1, 2}, 1000, 64) == 5);  // ceil(9.97 / 2)
    CHECK(split_width(SmoothParams{1, 1}, 1025, 64) == 11);
    CHECK(split_width(SmoothParams{1, 1}, 1024, 8) == 8);
}

TEST_CASE("split_width stays in [1, w] and is monotone in n0") {
    std::mt19937_64 rng(7);
    const std::optional<SmoothParams> policies[] = {std::nullopt, SmoothParams{1, 1}, SmoothParams{0.25, 3},
                                                    SmoothParams{3, 0.5}};
    for (unsigned w : {1u, 8u, 16u, 33u, 64u}) {
        for (const auto& params : policies) {
            unsigned prev = 0;
            for (std::uint64_t n = 0; n < 5000; n += 1 + n / 8) {
                const unsigned p = split_width(params, n, w);
                CHECK(p >= 1);
                CHECK(p <= w);
                CHECK(p >= prev);
                prev = p;
            }
        }
    }
}

TEST_CASE("known params with alpha/delta <= 1 never split more than log^2 n") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ratio(0.05, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double delta = 1.0 + ratio(rng);
        const SmoothParams params{ratio(rng) * delta, delta};
        const std::uint64_t n0 = 2 + (rng() % 1'000'000);
        CHECK(split_width(params, n0, 64) <= split_width(std::nullopt, n0, 64));
    }
}

TEST_CASE("split_key examples") {
    CHECK(split_key(0xFF00000000000000ULL, 8, 64) == lpred::SplitKey{0xFF, 0});
    CHECK(split_key(0, 10, 64) == lpred::SplitKey{0, 0});
    CHECK(split_key((std::uint64_t{1} << 63) + 5, 1, 64) == lpred::SplitKey{1, 5});
    CHECK(split_key(0xDEADBEEF, 32, 32) == lpred::SplitKey{0xDEADBEEF, 0});
}

TEST_CASE("split_key is a bijection onto (prefix, low) pairs") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20000; ++i) {
        const unsigned w = 1 + static_cast<unsigned>(rng() % 64);
        const unsigned p = 1 + static_cast<unsigned>(rng() % w);
        const lpred::Key key = rng() & lpred::universe_max(w);
        const auto [prefix, low] = split_key(key, p, w);
        REQUIRE(prefix <= lpred::universe_max(p));
        REQUIRE(low <= lpred::universe_max(w - p));
        REQUIRE(lpred::join_key(prefix, low, p, w) == key);
    }
}

TEST_CASE("note_modification fires at ceil(n0/4) with a floor of one") {
    auto cfg = lpred::SplitConfig::make(64, SmoothParams{1, 1});
    cfg.reset(100);
    for (int i = 0; i < 24; ++i) {
        CHECK_FALSE(cfg.note_modification());
    }
    CHECK(cfg.mods_since_rebuild == 24);
    CHECK(cfg.note_modification());

    cfg.reset(100);
    CHECK_FALSE(cfg.note_modification());

    auto fresh = lpred::SplitConfig::make(64, std::nullopt);
    CHECK(fresh.n0 == 0);
    CHECK(fresh.note_modification());

    cfg.reset(101);
    CHECK(cfg.rebuild_threshold() == 26);
}

TEST_CASE("SplitConfig rejects word widths outside [1, 64]") {
    CHECK_THROWS_AS(lpred::SplitConfig::make(0, std::nullopt), std::invalid_argument);
    CHECK_THROWS_AS(lpred::SplitConfig::make(65, std::nullopt), std::invalid_argument);
    CHECK_THROWS_AS(SmoothParams::make(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SmoothParams::make(1.0, -2.0), std::invalid_argument);
}

TEST_CASE("level_bound is ceil(log2 p) + 2") {
    CHECK(lpred::level_bound(1) == 2);
    CHECK(lpred::level_bound(2) == 3);
    CHECK(lpred::level_bound(3) == 4);
    CHECK(lpred::level_bound(4) == 4);
    CHECK(lpred::level_bound(10) == 6);
    CHECK(lpred::level_bound(64) == 8);
}

TEST_CASE("UniversalHash is a deterministic function of its seed") {
    const lpred::UniversalHash a(42), b(42), c(43);
    int differ = 0;
    for (std::uint64_t x = 0; x < 1000; ++x) {
        CHECK(a(x) == b(x));
        differ += a(x) != c(x);
    }
    CHECK(differ > 990);
}
