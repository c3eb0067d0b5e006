// lpred: benchmark, verify and experiment driver.
//
// Exit codes: 0 success, 1 divergence or violated assertion, 2 bad arguments.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lpred/dist_lab.hpp"
#include "lpred/layered_set.hpp"
#include "lpred/simd/search.hpp"
#include "lpred/workload.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kBadArgs = 2;

const std::vector<std::string> kDistNames = {"uniform", "ramp", "normal", "atoms"};

std::optional<std::ofstream> open_csv(const std::string& path, bool& fresh) {
    {
        std::ifstream probe(path);
        fresh = !probe.good() || probe.peek() == std::ifstream::traits_type::eof();
    }
    std::ofstream out(path, std::ios::app);
    if (!out) return std::nullopt;
    return out;
}

struct BenchArgs {
    std::string dist = "uniform";
    std::uint64_t n_ops = 100000;
    std::string mix = "50,25,25";
    std::uint64_t seed = 1;
    unsigned bits = 64;
    std::optional<double> alpha;
    std::optional<double> delta;
    bool unknown = false;
    std::optional<unsigned> cluster_cap;
    std::string out;
    std::string query_dist = "same";
    double warmup = 0.0;
};

int run_bench_cmd(const BenchArgs& a) {
    lpred::BenchConfig cfg;
    cfg.workload.dist = lpred::Distribution::from_name(a.dist);
    cfg.workload.n_ops = a.n_ops;
    cfg.workload.mix = lpred::Mix::parse(a.mix);
    cfg.workload.seed = a.seed;
    cfg.workload.bits = a.bits;
    cfg.workload.query = a.query_dist == "uniform" ? lpred::QueryDist::uniform : lpred::QueryDist::same;
    cfg.set.word_bits = a.bits;
    cfg.set.cluster_capacity = a.cluster_cap;
    cfg.set.hash_seed = a.seed;
    if (a.alpha || a.delta) {
        if (!a.alpha || !a.delta) throw std::invalid_argument("--alpha and --delta go together");
        cfg.set.params = lpred::SmoothParams::make(*a.alpha, *a.delta);
    }
    cfg.warmup_fraction = a.warmup;
    if (auto warn = cfg.workload.mix.warning()) {
        std::cerr << "warning: " << *warn << '\n';
    }

    const auto seq = lpred::gen_workload(cfg.workload);
    const lpred::RunReport report = lpred::run_bench(seq, cfg);

    if (!a.out.empty()) {
        bool fresh = false;
        auto file = open_csv(a.out, fresh);
        if (!file) {
            std::cerr << "cannot open " << a.out << '\n';
            return kFailed;
        }
        if (fresh) lpred::write_bench_csv_header(*file);
        lpred::write_bench_csv_row(*file, report);
    } else {
        lpred::write_bench_csv_header(std::cout);
        lpred::write_bench_csv_row(std::cout, report);
    }
    if (report.depth_violations > 0) {
        std::cerr << "depth bound exceeded on " << report.depth_violations << " operations\n";
        return kFailed;
    }
    return kOk;
}

int run_verify_cmd(unsigned bits, std::uint64_t ops, std::uint64_t seeds) {
    bool ok = true;
    const std::optional<lpred::SmoothParams> policies[] = {std::nullopt, lpred::SmoothParams{1.0, 1.0}};
    const auto policy_name = [](const std::optional<lpred::SmoothParams>& p) {
        return p ? "alpha=delta=1" : "unknown-params";
    };

    if (bits <= 10) {
        const auto pool = lpred::default_key_pool(bits);
        for (const auto& params : policies) {
            lpred::LayeredOptions opt;
            opt.word_bits = bits;
            opt.params = params;
            const auto res = lpred::verify_exhaustive(bits, pool, opt);
            std::cout << "exhaustive w=" << bits << " pool=" << pool.size() << " " << policy_name(params) << ": "
                      << res.sequences << " triples " << (res.verdict.pass ? "pass" : "FAIL") << '\n';
            if (!res.verdict.pass) {
                std::cout << "  " << res.verdict.detail << '\n';
                ok = false;
            }
        }
    }

    for (const auto& name : kDistNames) {
        for (const auto& params : policies) {
            std::uint64_t divergences = 0;
            for (std::uint64_t s = 1; s <= seeds; ++s) {
                lpred::WorkloadSpec spec;
                spec.dist = lpred::Distribution::from_name(name);
                spec.n_ops = ops;
                spec.mix = lpred::Mix{50, 25, 25};
                spec.seed = s;
                spec.bits = bits;
                lpred::LayeredOptions opt;
                opt.word_bits = bits;
                opt.params = params;
                opt.hash_seed = s;
                const auto verdict = lpred::run_equivalence(lpred::gen_workload(spec), opt);
                if (!verdict.pass) {
                    ++divergences;
                    std::cout << "  seed " << s << " op " << verdict.op_index << ": " << verdict.detail << '\n';
                }
            }
            std::cout << "random w=" << bits << " dist=" << name << " " << policy_name(params) << ": " << seeds
                      << " seeds x " << ops << " ops, " << divergences << " divergences\n";
            ok = ok && divergences == 0;
        }
    }
    return ok ? kOk : kFailed;
}

int run_lemma_cmd(const std::string& dist_name, std::uint64_t n, std::optional<std::uint64_t> k, std::uint64_t seeds,
                  const std::string& out) {
    const auto dist = lpred::Distribution::from_name(dist_name);
    std::uint64_t intervals = 0;
    if (k) {
        intervals = *k;
        if (const auto need = lpred::lemma_interval_count(dist, n); need && intervals < *need) {
            std::cerr << "note: k below ceil(n^(alpha/delta)) = " << *need << "; plain binning\n";
        }
    } else if (const auto need = lpred::lemma_interval_count(dist, n)) {
        intervals = *need;
    } else {
        std::cerr << dist_name << " declares no smoothness params; pass --k for plain binning\n";
        return kBadArgs;
    }

    std::ofstream file;
    std::ostream* os = &std::cout;
    bool fresh = true;
    if (!out.empty()) {
        auto opened = open_csv(out, fresh);
        if (!opened) {
            std::cerr << "cannot open " << out << '\n';
            return kFailed;
        }
        file = std::move(*opened);
        os = &file;
    }
    if (fresh) lpred::write_lemma_csv_header(*os);
    for (std::uint64_t s = 1; s <= seeds; ++s) {
        lpred::Rng rng(s);
        const auto report = lpred::occupancy_experiment(dist, n, intervals, rng);
        lpred::write_lemma_csv_row(*os, s, dist.name(), report);
    }
    return kOk;
}

int run_smoothness_cmd(const std::string& dist_name, double alpha, double delta, std::size_t trials,
                       std::size_t samples, std::uint64_t seed) {
    const auto dist = lpred::Distribution::from_name(dist_name);
    lpred::SmoothnessOptions opt;
    opt.alpha = alpha;
    opt.delta = delta;
    opt.trials = trials;
    opt.samples = samples;
    lpred::Rng rng(seed);
    try {
        const double beta = lpred::smoothness_estimate(dist, opt, rng);
        std::cout << "dist=" << dist_name << " alpha=" << alpha << " delta=" << delta << " trials=" << trials
                  << " samples=" << samples << " beta_hat=" << beta << '\n';
    } catch (const lpred::InsufficientMass& e) {
        std::cerr << e.what() << '\n';
        return kFailed;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Layered predecessor structure: benchmarks, verification and distribution experiments"};
    app.require_subcommand(1);
    app.add_flag_callback("--simd-info", [] {
        std::cout << "search kernels: " << lpred::simd::isa_name(lpred::simd::active_isa()) << '\n';
    }, "Print the dispatched search kernel");

    BenchArgs bench;
    auto* b = app.add_subcommand("bench", "Run a workload and append one CSV row");
    b->add_option("--dist", bench.dist)->check(CLI::IsMember(kDistNames));
    b->add_option("--n-ops", bench.n_ops)->check(CLI::PositiveNumber);
    b->add_option("--mix", bench.mix, "insert,delete,query percentages");
    b->add_option("--seed", bench.seed);
    b->add_option("--bits", bench.bits)->check(CLI::Range(1u, 64u));
    auto* alpha = b->add_option("--alpha", bench.alpha);
    auto* delta = b->add_option("--delta", bench.delta);
    auto* unknown = b->add_flag("--unknown-params", bench.unknown, "Use the log^2 n prefix width (default)");
    unknown->excludes(alpha)->excludes(delta);
    alpha->needs(delta);
    delta->needs(alpha);
    b->add_option("--cluster-cap", bench.cluster_cap)->check(CLI::Range(2u, 1u << 20));
    b->add_option("--out", bench.out, "CSV file to append to (stdout when absent)");
    b->add_option("--query-dist", bench.query_dist)->check(CLI::IsMember({"same", "uniform"}));
    b->add_option("--warmup", bench.warmup, "Fraction of ops excluded from timing")->check(CLI::Range(0.0, 1.0));

    unsigned verify_bits = 8;
    std::uint64_t verify_ops = 100000;
    std::uint64_t verify_seeds = 10;
    auto* v = app.add_subcommand("verify", "Check the structure against the reference oracle");
    v->add_option("--universe-bits", verify_bits)->check(CLI::Range(1u, 64u));
    v->add_option("--ops", verify_ops)->check(CLI::PositiveNumber);
    v->add_option("--seeds", verify_seeds);

    std::string lemma_dist = "uniform";
    std::uint64_t lemma_n = 4096;
    std::optional<std::uint64_t> lemma_k;
    std::uint64_t lemma_seeds = 30;
    std::string lemma_out;
    auto* l = app.add_subcommand("lemma", "Interval occupancy experiment");
    l->add_option("--dist", lemma_dist)->check(CLI::IsMember(kDistNames));
    l->add_option("--n", lemma_n)->check(CLI::PositiveNumber);
    l->add_option("--k", lemma_k, "Interval count (default: ceil(n^(alpha/delta)))");
    l->add_option("--seeds", lemma_seeds);
    l->add_option("--out", lemma_out);

    std::string sm_dist = "uniform";
    double sm_alpha = 1.0;
    double sm_delta = 1.0;
    std::size_t sm_trials = 100;
    std::size_t sm_samples = 100000;
    std::uint64_t sm_seed = 1;
    auto* s = app.add_subcommand("smoothness", "Monte Carlo lower bound on the smoothness constant beta");
    s->add_option("--dist", sm_dist)->check(CLI::IsMember(kDistNames));
    s->add_option("--alpha", sm_alpha)->check(CLI::PositiveNumber);
    s->add_option("--delta", sm_delta)->check(CLI::PositiveNumber);
    s->add_option("--trials", sm_trials)->check(CLI::PositiveNumber);
    s->add_option("--samples", sm_samples)->check(CLI::PositiveNumber);
    s->add_option("--seed", sm_seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kBadArgs;
    }

    try {
        if (*b) return run_bench_cmd(bench);
        if (*v) return run_verify_cmd(verify_bits, verify_ops, verify_seeds);
        if (*l) {
            if (lemma_k && *lemma_k == 0) throw std::invalid_argument("--k must be positive");
            return run_lemma_cmd(lemma_dist, lemma_n, lemma_k, lemma_seeds, lemma_out);
        }
        if (*s) return run_smoothness_cmd(sm_dist, sm_alpha, sm_delta, sm_trials, sm_samples, sm_seed);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadArgs;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailed;
    }
    return kOk;
}
