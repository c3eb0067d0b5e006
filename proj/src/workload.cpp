#include "lpred/workload.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lpred {

// ---------------------------------------------------------------------------
// Mix

Mix Mix::parse(std::string_view text) {
    unsigned parts[3] = {0, 0, 0};
    std::size_t field = 0;
    const char* p = text.data();
    const char* end = text.data() + text.size();
    while (field < 3) {
        const auto [next, ec] = std::from_chars(p, end, parts[field]);
        if (ec != std::errc{}) {
            throw std::invalid_argument("mix must look like I,D,Q");
        }
        p = next;
        ++field;
        if (field < 3) {
            if (p == end || *p != ',') throw std::invalid_argument("mix must look like I,D,Q");
            ++p;
        }
    }
    if (p != end) throw std::invalid_argument("mix must look like I,D,Q");
    Mix mix{parts[0], parts[1], parts[2]};
    if (mix.insert + mix.erase + mix.query != 100) {
        throw std::invalid_argument("mix percentages must sum to 100");
    }
    return mix;
}

std::string Mix::to_string(char sep) const {
    std::ostringstream os;
    os << insert << sep << erase << sep << query;
    return os.str();
}

std::optional<std::string> Mix::warning() const {
    if (erase > insert) {
        return "delete share exceeds insert share; most deletes will find an empty set";
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Generation

std::vector<WorkloadOp> gen_workload(const WorkloadSpec& spec) {
    if (spec.n_ops == 0) {
        throw std::invalid_argument("workload must have at least one op");
    }
    if (spec.mix.insert + spec.mix.erase + spec.mix.query != 100) {
        throw std::invalid_argument("mix percentages must sum to 100");
    }
    if (spec.bits < 1 || spec.bits > kMaxWordBits) {
        throw std::invalid_argument("bits must be in [1, 64]");
    }
    const Distribution query_dist = spec.query == QueryDist::same ? spec.dist : Distribution::uniform();
    Rng rng(spec.seed);
    std::vector<WorkloadOp> seq;
    seq.reserve(spec.n_ops);
    for (std::uint64_t i = 0; i < spec.n_ops; ++i) {
        const auto roll = static_cast<unsigned>(victim_index(rng(), 100));
        WorkloadOp op;
        if (roll < spec.mix.insert) {
            op.kind = OpKind::insert;
            op.key = sample_key(spec.dist, rng, spec.bits);
        } else if (roll < spec.mix.insert + spec.mix.erase) {
            op.kind = OpKind::erase_random;
            op.draw = rng();
        } else {
            op.kind = OpKind::predecessor;
            op.key = sample_key(query_dist, rng, spec.bits);
        }
        seq.push_back(op);
    }
    return seq;
}

// ---------------------------------------------------------------------------
// Oracle and live pool

bool Oracle::insert(Key key) {
    const auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
    if (it != keys_.end() && *it == key) return false;
    keys_.insert(it, key);
    return true;
}

bool Oracle::erase(Key key) {
    const auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
    if (it == keys_.end() || *it != key) return false;
    keys_.erase(it);
    return true;
}

bool Oracle::contains(Key key) const {
    return std::binary_search(keys_.begin(), keys_.end(), key);
}

std::optional<Key> Oracle::predecessor(Key x) const {
    const auto it = std::lower_bound(keys_.begin(), keys_.end(), x);
    if (it == keys_.begin()) return std::nullopt;
    return *std::prev(it);
}

std::optional<Key> Oracle::successor(Key x) const {
    const auto it = std::upper_bound(keys_.begin(), keys_.end(), x);
    if (it == keys_.end()) return std::nullopt;
    return *it;
}

void LivePool::add(Key key) {
    where_.emplace(key, keys_.size());
    keys_.push_back(key);
}

void LivePool::remove(Key key) {
    const auto it = where_.find(key);
    if (it == where_.end()) return;
    const std::size_t idx = it->second;
    where_.erase(it);
    if (idx + 1 != keys_.size()) {
        keys_[idx] = keys_.back();
        where_[keys_[idx]] = idx;
    }
    keys_.pop_back();
}

// ---------------------------------------------------------------------------
// Equivalence

namespace {

std::string show(const std::optional<Key>& v) {
    return v ? std::to_string(*v) : std::string("none");
}

Verdict diverged(std::size_t index, std::string detail) {
    Verdict v;
    v.pass = false;
    v.op_index = index;
    v.detail = std::move(detail);
    return v;
}

}  // namespace

Verdict run_equivalence(std::span<const WorkloadOp> seq, const LayeredOptions& options) {
    LayeredSet set(options);
    Oracle oracle;
    LivePool pool;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const WorkloadOp& op = seq[i];
        switch (op.kind) {
            case OpKind::insert: {
                const bool got = set.insert(op.key);
                const bool want = oracle.insert(op.key);
                if (got != want) {
                    return diverged(i, "insert(" + std::to_string(op.key) + ") returned " + std::to_string(got));
                }
                if (want) pool.add(op.key);
                break;
            }
            case OpKind::erase_random: {
                if (pool.empty()) break;
                const Key victim = pool.pick(op.draw);
                const bool got = set.erase(victim);
                const bool want = oracle.erase(victim);
                if (got != want) {
                    return diverged(i, "erase(" + std::to_string(victim) + ") returned " + std::to_string(got));
                }
                pool.remove(victim);
                break;
            }
            case OpKind::predecessor: {
                const auto got = set.predecessor(op.key);
                const auto want = oracle.predecessor(op.key);
                if (got != want) {
                    return diverged(i, "predecessor(" + std::to_string(op.key) + ") = " + show(got) +
                                           ", expected " + show(want));
                }
                const auto got_s = set.successor(op.key);
                const auto want_s = oracle.successor(op.key);
                if (got_s != want_s) {
                    return diverged(i, "successor(" + std::to_string(op.key) + ") = " + show(got_s) +
                                           ", expected " + show(want_s));
                }
                break;
            }
        }
        if (set.size() != oracle.size()) {
            return diverged(i, "size " + std::to_string(set.size()) + ", expected " + std::to_string(oracle.size()));
        }
        if (set.last_op().rebuild_triggered) {
            if (auto bad = set.check_invariants()) return diverged(i, "after rebuild: " + *bad);
            if (set.keys() != oracle.keys()) return diverged(i, "key set differs after rebuild");
        }
    }
    if (auto bad = set.check_invariants()) return diverged(seq.size(), "at end: " + *bad);
    if (set.keys() != oracle.keys()) return diverged(seq.size(), "key set differs at end");
    Verdict ok;
    ok.ops_checked = seq.size();
    return ok;
}

std::vector<Key> default_key_pool(unsigned bits) {
    const Key top = universe_max(bits);
    const double fractions[] = {0.0, 1.0 / 16, 1.0 / 8, 1.0 / 4, 0.39, 0.5, 0.78, 1.0};
    std::vector<Key> pool;
    for (const double f : fractions) {
        Key a = static_cast<Key>(std::floor(f * static_cast<double>(top)));
        a = std::min(a, top == 0 ? 0 : top - 1);
        pool.push_back(a);
        pool.push_back(std::min(a + 1, top));
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    return pool;
}

ExhaustiveResult verify_exhaustive(unsigned bits, std::span<const Key> pool, const LayeredOptions& options) {
    enum class Kind { insert, erase, pred, succ };
    struct Step {
        Kind kind;
        Key key;
    };
    std::vector<Step> alphabet;
    for (const Key k : pool) {
        for (Kind kind : {Kind::insert, Kind::erase, Kind::pred, Kind::succ}) {
            alphabet.push_back({kind, k});
        }
    }
    std::vector<Key> sweep;
    if (bits <= 10) {
        for (Key x = 0; x <= universe_max(bits); ++x) sweep.push_back(x);
    } else {
        for (const Key k : pool) {
            if (k > 0) sweep.push_back(k - 1);
            sweep.push_back(k);
            if (k < universe_max(bits)) sweep.push_back(k + 1);
        }
    }
    static constexpr const char* kNames[] = {"insert", "erase", "pred", "succ"};

    ExhaustiveResult result;
    const std::size_t a = alphabet.size();
    for (std::size_t i0 = 0; i0 < a; ++i0) {
        for (std::size_t i1 = 0; i1 < a; ++i1) {
            for (std::size_t i2 = 0; i2 < a; ++i2) {
                const Step triple[3] = {alphabet[i0], alphabet[i1], alphabet[i2]};
                const auto describe = [&] {
                    std::string s;
                    for (const Step& st : triple) {
                        s += std::string(kNames[static_cast<int>(st.kind)]) + "(" + std::to_string(st.key) + ") ";
                    }
                    return s;
                };
                LayeredSet set(options);
                Oracle oracle;
                for (std::size_t j = 0; j < 3; ++j) {
                    const Step& st = triple[j];
                    bool same = true;
                    switch (st.kind) {
                        case Kind::insert:
                            same = set.insert(st.key) == oracle.insert(st.key);
                            break;
                        case Kind::erase:
                            same = set.erase(st.key) == oracle.erase(st.key);
                            break;
                        case Kind::pred:
                            same = set.predecessor(st.key) == oracle.predecessor(st.key);
                            break;
                        case Kind::succ:
                            same = set.successor(st.key) == oracle.successor(st.key);
                            break;
                    }
                    if (!same) {
                        result.verdict = diverged(j, describe() + "step " + std::to_string(j));
                        return result;
                    }
                }
                for (const Key x : sweep) {
                    if (set.predecessor(x) != oracle.predecessor(x) || set.successor(x) != oracle.successor(x)) {
                        result.verdict = diverged(3, describe() + "sweep at " + std::to_string(x));
                        return result;
                    }
                }
                if (auto bad = set.check_invariants()) {
                    result.verdict = diverged(3, describe() + *bad);
                    return result;
                }
                ++result.sequences;
            }
        }
    }
    result.verdict.ops_checked = result.sequences * 3;
    return result;
}

// ---------------------------------------------------------------------------
// Benchmark

namespace {

// Keeps query results observable so the timed loop is not optimised away.
volatile std::uint64_t g_sink = 0;

double nearest_rank(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
    return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

}  // namespace

std::string make_run_id(const BenchConfig& config) {
    const WorkloadSpec& w = config.workload;
    std::ostringstream key;
    key << w.dist.name() << '|' << w.n_ops << '|' << w.mix.to_string() << '|' << w.bits << '|' << w.seed << '|'
        << (w.query == QueryDist::same ? "same" : "uniform") << '|' << config.set.cluster_capacity.value_or(0) << '|'
        << config.warmup_fraction;
    if (config.set.params) {
        key << '|' << config.set.params->alpha << '|' << config.set.params->delta;
    }
    // FNV-1a
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : key.str()) {
        h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
    }
    std::ostringstream id;
    id << std::hex << std::setw(16) << std::setfill('0') << h;
    return id.str();
}

RunReport run_bench(std::span<const WorkloadOp> seq, const BenchConfig& config) {
    using Clock = std::chrono::steady_clock;
    RunReport r;
    r.run_id = make_run_id(config);
    r.seed = config.workload.seed;
    r.dist = std::string(config.workload.dist.name());
    r.n_ops = seq.size();
    r.mix = config.workload.mix.to_string(':');
    r.bits = config.set.word_bits;
    r.params = config.set.params;

    LayeredSet set(config.set);
    LivePool pool;
    const std::size_t warmup = static_cast<std::size_t>(
        std::floor(std::clamp(config.warmup_fraction, 0.0, 1.0) * static_cast<double>(seq.size())));
    const std::size_t batch = std::max<std::size_t>(1, config.batch);
    std::vector<double> per_op_ns;
    std::uint64_t sink = 0;

    const auto execute = [&](const WorkloadOp& op) {
        switch (op.kind) {
            case OpKind::insert:
                ++r.inserts;
                if (set.insert(op.key)) pool.add(op.key);
                break;
            case OpKind::erase_random:
                ++r.erases;
                if (!pool.empty()) {
                    const Key victim = pool.pick(op.draw);
                    set.erase(victim);
                    pool.remove(victim);
                }
                break;
            case OpKind::predecessor:
                ++r.queries;
                sink += set.predecessor(op.key).value_or(0);
                break;
        }
    };

    std::size_t i = 0;
    for (; i < warmup; ++i) execute(seq[i]);
    set.reset_metrics();
    while (i < seq.size()) {
        const std::size_t stop = std::min(seq.size(), i + batch);
        const auto start = Clock::now();
        for (std::size_t j = i; j < stop; ++j) execute(seq[j]);
        const auto elapsed = std::chrono::duration<double, std::nano>(Clock::now() - start).count();
        per_op_ns.push_back(elapsed / static_cast<double>(stop - i));
        i = stop;
    }
    g_sink = sink;

    std::sort(per_op_ns.begin(), per_op_ns.end());
    r.p50_ns = nearest_rank(per_op_ns, 0.50);
    r.p99_ns = nearest_rank(per_op_ns, 0.99);
    r.max_ns = per_op_ns.empty() ? 0.0 : per_op_ns.back();

    const SpaceTimeReport st = set.stats();
    r.mean_levels = st.mean_levels;
    r.max_levels = st.max_levels;
    r.depth_violations = st.depth_violations;
    r.mean_bucket = st.mean_bucket;
    r.max_bucket = st.max_bucket;
    r.p99_bucket = st.p99_bucket;
    r.entries_per_key = st.entries_per_key;
    r.rebuilds = st.rebuilds;
    r.p_final = st.p;
    r.n_final = st.size;
    return r;
}

void write_bench_csv_header(std::ostream& os) {
    os << "run_id,seed,dist,n_ops,mix,bits,alpha,delta,p_final,n_final,rebuilds,p50_ns,p99_ns,max_ns,"
          "mean_levels,max_levels,mean_bucket,max_bucket,p99_bucket,entries_per_key\n";
}

void write_bench_csv_row(std::ostream& os, const RunReport& r) {
    std::ostringstream row;
    row << std::setprecision(10);
    row << r.run_id << ',' << r.seed << ',' << r.dist << ',' << r.n_ops << ',' << r.mix << ',' << r.bits << ',';
    if (r.params) {
        row << r.params->alpha << ',' << r.params->delta << ',';
    } else {
        row << ",,";
    }
    row << r.p_final << ',' << r.n_final << ',' << r.rebuilds << ',' << std::fixed << std::setprecision(1) << r.p50_ns
        << ',' << r.p99_ns << ',' << r.max_ns << ',' << std::setprecision(6) << r.mean_levels << ',' << r.max_levels
        << ',' << r.mean_bucket << ',' << r.max_bucket << ',' << r.p99_bucket << ',' << r.entries_per_key << '\n';
    os << row.str();
}

void write_lemma_csv_header(std::ostream& os) {
    os << "seed,dist,n,k,mean,max,p99\n";
}

void write_lemma_csv_row(std::ostream& os, std::uint64_t seed, std::string_view dist, const OccupancyReport& r) {
    std::ostringstream row;
    row << seed << ',' << dist << ',' << r.n << ',' << r.k << ',' << std::fixed << std::setprecision(6) << r.mean
        << ',' << r.max << ',' << r.p99 << '\n';
    os << row.str();
}

}  // namespace lpred
