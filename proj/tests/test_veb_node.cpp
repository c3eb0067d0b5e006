#include "doctest.h"

#include <algorithm>
#include <bit>
#include <random>
#include <stdexcept>
#include <set>

#include "lpred/veb_node.hpp"

using lpred::OpMetrics;
using lpred::VebNode;

namespace {

unsigned hard_depth(unsigned width) { return lpred::level_bound(width); }

std::optional<std::uint64_t> oracle_pred(const std::set<std::uint64_t>& s, std::uint64_t x) {
    auto it = s.lower_bound(x);
    if (it == s.begin()) return std::nullopt;
    return *std::prev(it);
}

std::optional<std::uint64_t> oracle_succ(const std::set<std::uint64_t>& s, std::uint64_t x) {
    auto it = s.upper_bound(x);
    if (it == s.end()) return std::nullopt;
    return *it;
}

void check_queries(const VebNode& v, const std::set<std::uint64_t>& s, std::uint64_t x) {
    OpMetrics mp, ms;
    const auto p = v.predecessor(x, mp);
    const auto q = v.successor(x, ms);
    REQUIRE(p == oracle_pred(s, x));
    REQUIRE(q == oracle_succ(s, x));
    REQUIRE(mp.veb_levels_touched <= hard_depth(v.width()));
    REQUIRE(ms.veb_levels_touched <= hard_depth(v.width()));
    REQUIRE(v.contains(x) == (s.count(x) == 1));
    // Duality: the successor of the predecessor never skips past x.
    if (p) {
        const auto back = v.successor(*p);
        REQUIRE(back.has_value() == (s.lower_bound(x) != s.end()));
        if (back) REQUIRE(*back >= x);
    }
    if (q) {
        const auto back = v.predecessor(*q);
        REQUIRE(back.has_value() == (s.upper_bound(x) != s.begin()));
        if (back) REQUIRE(*back <= x);
    }
}

}  // namespace

TEST_CASE("insert and erase examples") {
    VebNode v(16);
    CHECK(v.insert(5));
    CHECK(v.min() == 5u);
    CHECK(v.max() == 5u);
    CHECK(v.node_count() == 1);
    CHECK_FALSE(v.insert(5));

    CHECK(v.erase(5));
    CHECK(v.empty());
    CHECK_FALSE(v.min().has_value());
    CHECK_FALSE(v.max().has_value());
    CHECK_FALSE(v.erase(7));
}

TEST_CASE("erasing the min pulls the successor up") {
    VebNode v(16);
    for (auto x : {3, 300, 301}) v.insert(x);
    CHECK(v.erase(3));
    CHECK(v.min() == 300u);
    CHECK(v.elements() == std::vector<std::uint64_t>{300, 301});
    CHECK(v.check_invariants() == std::nullopt);
    const auto below = v.recursed_elements();
    CHECK(std::find(below.begin(), below.end(), 300u) == below.end());
}

TEST_CASE("pred, succ, min and max examples") {
    VebNode v(16);
    CHECK_FALSE(v.predecessor(9).has_value());
    CHECK_FALSE(v.min().has_value());
    v.insert(5);
    CHECK_FALSE(v.successor(5).has_value());
    v.insert(9);
    CHECK(v.predecessor(9) == 5u);
    CHECK(v.successor(5) == 9u);

    VebNode w(16);
    w.insert(3);
    w.insert(300);
    CHECK(w.min() == 3u);
    CHECK(w.max() == 300u);
    // The min lives only at the root, so the summary sees the high half of 300 alone.
    CHECK(w.summary_elements() == std::vector<std::uint64_t>{300 >> 8});
    CHECK(w.recursed_elements() == std::vector<std::uint64_t>{300});
}

TEST_CASE("out-of-universe arguments are rejected") {
    VebNode v(8);
    CHECK_THROWS_AS(v.insert(256), std::out_of_range);
    CHECK_THROWS_AS(v.predecessor(300), std::out_of_range);
    CHECK_FALSE(v.contains(256));
    VebNode full(64);
    CHECK(full.insert(~std::uint64_t{0}));
    CHECK(full.predecessor(~std::uint64_t{0}) == std::nullopt);
    CHECK(full.successor(0) == ~std::uint64_t{0});
}

TEST_CASE("width 16, 200 random members, 10^4 random queries against a sorted oracle") {
    std::mt19937_64 rng(16);
    VebNode v(16);
    std::set<std::uint64_t> s;
    while (s.size() < 200) {
        const std::uint64_t x = rng() & 0xFFFF;
        CHECK(v.insert(x) == s.insert(x).second);
    }
    std::vector<std::uint64_t> sorted(s.begin(), s.end());
    for (int i = 0; i < 10000; ++i) {
        const std::uint64_t x = rng() & 0xFFFF;
        auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
        const auto want = it == sorted.begin() ? std::nullopt : std::optional(*std::prev(it));
        REQUIRE(v.predecessor(x) == want);
    }
    CHECK(v.elements() == sorted);
}

TEST_CASE("exhaustive random sequences agree with the oracle for widths 1..10") {
    std::mt19937_64 rng(1);
    for (unsigned width = 1; width <= 10; ++width) {
        const std::uint64_t u = std::uint64_t{1} << width;
        for (int round = 0; round < 6; ++round) {
            VebNode v(width, rng());
            std::set<std::uint64_t> s;
            for (int step = 0; step < 400; ++step) {
                const std::uint64_t x = rng() % u;
                OpMetrics m;
                if (rng() % 3 == 0) {
                    REQUIRE(v.erase(x, m) == (s.erase(x) == 1));
                } else {
                    REQUIRE(v.insert(x, m) == s.insert(x).second);
                }
                REQUIRE(m.veb_levels_touched <= hard_depth(width));
                if (step % 40 == 0) {
                    REQUIRE(v.check_invariants() == std::nullopt);
                    for (std::uint64_t y = 0; y < u; ++y) check_queries(v, s, y);
                }
            }
            REQUIRE(v.check_invariants() == std::nullopt);
            for (std::uint64_t y = 0; y < u; ++y) check_queries(v, s, y);
            // Drain to empty and confirm no children linger.
            for (auto x : std::vector<std::uint64_t>(s.begin(), s.end())) REQUIRE(v.erase(x));
            REQUIRE(v.empty());
            REQUIRE(v.node_count() == 1);
        }
    }
}

TEST_CASE("every subset of a width-4 universe builds and answers correctly") {
    for (std::uint32_t mask = 0; mask < (1u << 16); ++mask) {
        VebNode v(4);
        std::set<std::uint64_t> s;
        for (unsigned b = 0; b < 16; ++b) {
            if (mask >> b & 1) {
                v.insert(b);
                s.insert(b);
            }
        }
        for (std::uint64_t x = 0; x < 16; ++x) {
            REQUIRE(v.predecessor(x) == oracle_pred(s, x));
            REQUIRE(v.successor(x) == oracle_succ(s, x));
        }
    }
}

TEST_CASE("random width-64 workload against the oracle with the depth bound on every op") {
    std::mt19937_64 rng(64);
    for (unsigned width : {11u, 13u, 20u, 33u, 64u}) {
        const std::uint64_t mask = lpred::universe_max(width);
        VebNode v(width, rng());
        std::set<std::uint64_t> s;
        std::vector<std::uint64_t> live;
        for (int step = 0; step < 20000; ++step) {
            OpMetrics m;
            const auto r = rng() % 10;
            if (r < 5 || live.empty()) {
                // Clustered keys share high halves and reach the deep levels.
                const std::uint64_t x = (rng() % 4 == 0 ? (rng() & 0xFF) : rng()) & mask;
                if (v.insert(x, m)) live.push_back(x);
                s.insert(x);
            } else if (r < 7) {
                const std::size_t i = rng() % live.size();
                REQUIRE(v.erase(live[i], m));
                s.erase(live[i]);
                live[i] = live.back();
                live.pop_back();
            } else {
                check_queries(v, s, rng() & mask);
                if (!live.empty()) check_queries(v, s, live[rng() % live.size()]);
            }
            REQUIRE(m.veb_levels_touched <= hard_depth(width));
        }
        REQUIRE(v.check_invariants() == std::nullopt);
        REQUIRE(v.elements() == std::vector<std::uint64_t>(s.begin(), s.end()));
        // Min is never duplicated below the root.
        const auto below = v.recursed_elements();
        if (v.min()) REQUIRE(std::find(below.begin(), below.end(), *v.min()) == below.end());
        REQUIRE(below.size() + (s.empty() ? 0 : 1) == s.size());
    }
}

TEST_CASE("depth_for_width never exceeds ceil(log2 width) + 2") {
    for (unsigned w = 1; w <= 64; ++w) {
        CHECK(VebNode::depth_for_width(w) <= lpred::level_bound(w));
    }
    CHECK(VebNode::depth_for_width(6) == 1);
    CHECK(VebNode::depth_for_width(7) == 2);
}
