#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "lpred/dist_lab.hpp"
#include "lpred/layered_set.hpp"

using lpred::Key;
using lpred::LayeredOptions;
using lpred::LayeredSet;
using lpred::SmoothParams;

namespace {

LayeredOptions options(unsigned w, std::optional<SmoothParams> params, std::uint64_t seed = 1) {
    LayeredOptions o;
    o.word_bits = w;
    o.params = params;
    o.hash_seed = seed;
    return o;
}

std::optional<Key> oracle_pred(const std::set<Key>& s, Key x) {
    auto it = s.lower_bound(x);
    if (it == s.begin()) return std::nullopt;
    return *std::prev(it);
}

std::optional<Key> oracle_succ(const std::set<Key>& s, Key x) {
    auto it = s.upper_bound(x);
    if (it == s.end()) return std::nullopt;
    return *it;
}

void require_same(const LayeredSet& ls, const std::set<Key>& s) {
    REQUIRE(ls.check_invariants() == std::nullopt);
    REQUIRE(ls.size() == s.size());
    REQUIRE(ls.keys() == std::vector<Key>(s.begin(), s.end()));
}

}  // namespace

TEST_CASE("insert and erase examples") {
    LayeredSet ls(options(64, SmoothParams{1, 1}));
    CHECK(ls.insert(5));
    CHECK(ls.size() == 1);
    CHECK(ls.stats().bucket_count == 1);
    const auto prefix = lpred::split_key(5, ls.prefix_bits(), 64).prefix;
    CHECK(ls.top().contains(prefix));

    const auto mods = ls.config().mods_since_rebuild;
    const auto rebuilds = ls.rebuild_count();
    CHECK_FALSE(ls.insert(5));
    CHECK(ls.size() == 1);
    CHECK(ls.config().mods_since_rebuild == mods);
    CHECK(ls.rebuild_count() == rebuilds);

    CHECK_FALSE(ls.erase(6));
    CHECK(ls.config().mods_since_rebuild == mods);
    CHECK(ls.erase(5));
    CHECK(ls.empty());
    CHECK(ls.top().empty());
    CHECK(ls.stats().bucket_count == 0);
    CHECK(ls.check_invariants() == std::nullopt);
}

TEST_CASE("predecessor examples") {
    LayeredSet empty(options(64, std::nullopt));
    CHECK_FALSE(empty.predecessor(0).has_value());
    CHECK_FALSE(empty.predecessor(~Key{0}).has_value());
    CHECK_FALSE(empty.successor(12345).has_value());

    // Two keys: n0 stays small, so p is tiny and 5 and 9 share prefix 0.
    LayeredSet ls(options(64, SmoothParams{1, 1}));
    ls.insert(5);
    ls.insert(9);
    REQUIRE(lpred::split_key(5, ls.prefix_bits(), 64).prefix == lpred::split_key(9, ls.prefix_bits(), 64).prefix);
    CHECK(ls.predecessor(9) == 5u);
    CHECK(ls.successor(5) == 9u);
    CHECK(ls.last_op().veb_levels_touched == 0);
    CHECK(ls.min() == 5u);
    CHECK(ls.max() == 9u);
}

TEST_CASE("out-of-range keys throw") {
    LayeredSet ls(options(16, std::nullopt));
    CHECK_THROWS_AS(ls.insert(1u << 16), std::out_of_range);
    CHECK_THROWS_AS(LayeredSet(options(0, std::nullopt)), std::invalid_argument);
}

TEST_CASE("10^5 uniform inserts match the oracle") {
    LayeredSet ls(options(64, std::nullopt, 3));
    std::set<Key> s;
    lpred::Rng rng(3);
    const auto d = lpred::Distribution::uniform();
    for (int i = 0; i < 100000; ++i) {
        const Key k = lpred::sample_key(d, rng, 64);
        REQUIRE(ls.insert(k) == s.insert(k).second);
    }
    require_same(ls, s);
    for (Key k : s) REQUIRE(ls.contains(k));
    CHECK(ls.stats().depth_violations == 0);
}

TEST_CASE("10^5 interleaved inserts, deletes and queries match the oracle") {
    for (const auto& params : {std::optional<SmoothParams>{}, std::optional(SmoothParams{1, 1})}) {
        LayeredSet ls(options(64, params, 9));
        std::set<Key> s;
        std::vector<Key> live;
        lpred::Rng rng(9);
        const auto d = lpred::Distribution::ramp();
        for (int i = 0; i < 100000; ++i) {
            const auto r = rng() % 4;
            if (r < 2 || live.empty()) {
                const Key k = lpred::sample_key(d, rng, 64);
                if (ls.insert(k)) live.push_back(k);
                REQUIRE(s.insert(k).second == (live.back() == k));
            } else if (r == 2) {
                const std::size_t j = rng() % live.size();
                REQUIRE(ls.erase(live[j]));
                s.erase(live[j]);
                live[j] = live.back();
                live.pop_back();
            } else {
                const Key x = lpred::sample_key(d, rng, 64);
                REQUIRE(ls.predecessor(x) == oracle_pred(s, x));
                REQUIRE(ls.successor(x) == oracle_succ(s, x));
            }
            if (i % 10000 == 0) require_same(ls, s);
        }
        require_same(ls, s);
        CHECK(ls.stats().depth_violations == 0);
    }
}

TEST_CASE("w=16: every query point across bucket boundaries") {
    lpred::Rng rng(16);
    for (const auto& params : {std::optional<SmoothParams>{}, std::optional(SmoothParams{1, 1}),
                               std::optional(SmoothParams{0.5, 1})}) {
        for (int round = 0; round < 4; ++round) {
            LayeredSet ls(options(16, params, rng()));
            std::set<Key> s;
            const int n = 50 + static_cast<int>(rng() % 400);
            for (int i = 0; i < n; ++i) {
                const Key k = rng() % (1u << 16);
                ls.insert(k);
                s.insert(k);
            }
            require_same(ls, s);
            for (Key x = 0; x < (1u << 16); ++x) {
                REQUIRE(ls.predecessor(x) == oracle_pred(s, x));
                REQUIRE(ls.successor(x) == oracle_succ(s, x));
            }
        }
    }
}

TEST_CASE("rebuilds that change p keep membership intact") {
    LayeredSet ls(options(64, SmoothParams{1, 1}, 4));
    std::set<Key> s;
    lpred::Rng rng(4);
    std::set<unsigned> widths_seen;
    unsigned last_p = ls.prefix_bits();
    std::uint64_t last_rebuilds = ls.rebuild_count();
    while (s.size() < 1200) {
        const Key k = rng();
        ls.insert(k);
        s.insert(k);
        if (ls.rebuild_count() != last_rebuilds) {
            last_rebuilds = ls.rebuild_count();
            require_same(ls, s);
            if (ls.prefix_bits() != last_p) widths_seen.insert(ls.prefix_bits());
            last_p = ls.prefix_bits();
        }
    }
    // p climbs through 7 up to 10 as n0 passes 64 and 512.
    CHECK(widths_seen.count(7) == 1);
    CHECK(widths_seen.count(10) == 1);

    const auto before = ls.keys();
    const unsigned p = ls.rebuild();
    CHECK(p == lpred::split_width(SmoothParams{1, 1}, s.size(), 64));
    CHECK(ls.keys() == before);
}

TEST_CASE("rebuild on an empty set") {
    for (const auto& params : {std::optional<SmoothParams>{}, std::optional(SmoothParams{1, 1})}) {
        LayeredSet ls(options(64, params));
        CHECK(ls.rebuild() == lpred::split_width(params, 0, 64));
        CHECK(ls.stats().bucket_count == 0);
        CHECK(ls.check_invariants() == std::nullopt);
    }
}

TEST_CASE("growing from 16 to 4096 uniform keys raises p and keeps buckets small") {
    LayeredSet ls(options(64, SmoothParams{1, 1}, 5));
    lpred::Rng rng(5);
    const auto d = lpred::Distribution::uniform();
    while (ls.size() < 16) ls.insert(lpred::sample_key(d, rng, 64));
    const unsigned p_start = ls.prefix_bits();
    std::uint64_t last_rebuilds = ls.rebuild_count();
    while (ls.size() < 4096) {
        ls.insert(lpred::sample_key(d, rng, 64));
        if (ls.rebuild_count() != last_rebuilds) {
            last_rebuilds = ls.rebuild_count();
            CHECK(ls.stats().mean_bucket <= 2.0);
        }
    }
    CHECK(ls.prefix_bits() > p_start);
    CHECK(ls.stats().mean_bucket <= 2.0);
}

TEST_CASE("stats on empty and populated structures") {
    LayeredSet ls(options(64, SmoothParams{1, 1}, 6));
    auto r = ls.stats();
    CHECK(r.size == 0);
    CHECK(r.entries == 0);
    CHECK(r.entries_per_key == 0.0);

    lpred::Rng rng(6);
    const auto d = lpred::Distribution::uniform();
    while (ls.size() < (1u << 14)) ls.insert(lpred::sample_key(d, rng, 64));
    r = ls.stats();
    CHECK(r.size == (1u << 14));
    std::size_t keys = 0, buckets = 0;
    for (const auto& [bucket_size, count] : r.bucket_histogram) {
        keys += bucket_size * count;
        buckets += count;
    }
    CHECK(keys == r.size);
    CHECK(buckets == r.bucket_count);
    CHECK(r.entries_per_key > 1.0);
    CHECK(r.entries_per_key < 4.0);
    CHECK(r.p99_bucket <= r.max_bucket);
}

TEST_CASE("after 10^5 ops the deepest trie traversal respects ceil(log2 p) + 2") {
    for (const auto& name : {"uniform", "normal", "atoms"}) {
        const auto d = lpred::Distribution::from_name(name);
        LayeredSet ls(options(64, std::nullopt, 7));
        lpred::Rng rng(7);
        std::vector<Key> live;
        for (int i = 0; i < 100000; ++i) {
            const auto r = rng() % 4;
            if (r < 2 || live.empty()) {
                const Key k = lpred::sample_key(d, rng, 64);
                if (ls.insert(k)) live.push_back(k);
            } else if (r == 2) {
                const std::size_t j = rng() % live.size();
                ls.erase(live[j]);
                live[j] = live.back();
                live.pop_back();
            } else {
                ls.predecessor(lpred::sample_key(d, rng, 64));
            }
            REQUIRE(ls.last_op().veb_levels_touched <= lpred::level_bound(ls.prefix_bits()));
        }
        const auto r = ls.stats();
        CHECK(r.depth_violations == 0);
        CHECK(r.max_levels <= lpred::level_bound(r.p));
        CHECK(r.ops_measured == 100000);
    }
}

TEST_CASE("smooth input keeps mean bucket size at most 2 at power-of-two sizes") {
    for (const auto& name : {"uniform", "ramp", "normal"}) {
        const auto d = lpred::Distribution::from_name(name);
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            LayeredSet ls(options(64, SmoothParams{1, 1}, seed));
            lpred::Rng rng(seed);
            for (std::size_t n : {std::size_t{1} << 12, std::size_t{1} << 14, std::size_t{1} << 16}) {
                while (ls.size() < n) ls.insert(lpred::sample_key(d, rng, 64));
                const auto r = ls.stats();
                CHECK(r.mean_bucket <= 2.0);
                CHECK(r.p99_bucket <= 10);
            }
        }
    }
}

TEST_CASE("mean occupied bucket size stays under the Poisson bound at every size") {
    // Keys per prefix interval are at most Poisson(lambda) with
    // lambda = (n / 2^p) * max density <= 1.25 * max density between rebuilds;
    // the mean over occupied intervals is then at most lambda / (1 - e^-lambda).
    for (const auto& name : {"uniform", "ramp", "normal"}) {
        const auto d = lpred::Distribution::from_name(name);
        const double lambda = 1.25 * d.max_density();
        const double bound = lambda / (1.0 - std::exp(-lambda));
        LayeredSet ls(options(64, SmoothParams{1, 1}, 12));
        lpred::Rng rng(12);
        while (ls.size() < 50000) {
            ls.insert(lpred::sample_key(d, rng, 64));
            if (ls.size() % 997 == 0) REQUIRE(ls.stats().mean_bucket <= bound);
        }
    }
}
