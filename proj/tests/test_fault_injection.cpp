// Linked against the build that skips neighbour relinking on new buckets;
// the equivalence checker must notice.
#include "doctest.h"

#include "lpred/workload.hpp"

TEST_CASE("the checker reports the first divergence at a boundary query") {
    lpred::WorkloadSpec spec;
    spec.dist = lpred::Distribution::uniform();
    spec.n_ops = 5000;
    spec.mix = lpred::Mix{50, 25, 25};
    spec.seed = 1;
    lpred::LayeredOptions opt;
    opt.params = lpred::SmoothParams{1, 1};
    const auto seq = lpred::gen_workload(spec);
    const auto verdict = lpred::run_equivalence(seq, opt);
    CHECK_FALSE(verdict.pass);
    CHECK(verdict.op_index < seq.size());
    CHECK(seq[verdict.op_index].kind == lpred::OpKind::predecessor);
    MESSAGE("first divergence at op ", verdict.op_index, ": ", verdict.detail);
}

TEST_CASE("every seed and distribution exposes the mutant") {
    for (const char* dist : {"uniform", "ramp", "normal", "atoms"}) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            lpred::WorkloadSpec spec;
            spec.dist = lpred::Distribution::from_name(dist);
            spec.n_ops = 20000;
            spec.mix = lpred::Mix{50, 25, 25};
            spec.seed = seed;
            lpred::LayeredOptions opt;
            opt.hash_seed = seed;
            CHECK_FALSE(lpred::run_equivalence(lpred::gen_workload(spec), opt).pass);
        }
    }
}
