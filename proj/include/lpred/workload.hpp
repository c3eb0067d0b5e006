#pragma once

// Workloads in the i.i.d.-insert / uniform-delete input model, a sorted-array
// reference oracle, lockstep equivalence checking and the benchmark runner.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lpred/dist_lab.hpp"
#include "lpred/layered_set.hpp"

namespace lpred {

enum class OpKind : std::uint8_t { insert, erase_random, predecessor };

/// Erase ops carry no key: `draw` picks the victim uniformly among the keys
/// live when the op executes.
struct WorkloadOp {
    OpKind kind = OpKind::insert;
    Key key = 0;
    std::uint64_t draw = 0;
};

struct Mix {
    unsigned insert = 100;
    unsigned erase = 0;
    unsigned query = 0;

    /// "I,D,Q" percentages summing to 100. Throws std::invalid_argument.
    static Mix parse(std::string_view text);
    std::string to_string(char sep = ',') const;
    /// Set when deletes outpace inserts (the live set drains to empty).
    std::optional<std::string> warning() const;
};

enum class QueryDist { same, uniform };

struct WorkloadSpec {
    Distribution dist = Distribution::uniform();
    std::uint64_t n_ops = 0;
    Mix mix;
    std::uint64_t seed = 1;
    unsigned bits = 64;
    QueryDist query = QueryDist::same;
};

/// Deterministic in the spec. Throws std::invalid_argument for n_ops == 0,
/// a mix not summing to 100 or bits outside [1, 64].
std::vector<WorkloadOp> gen_workload(const WorkloadSpec& spec);

/// Maps a 64-bit draw onto [0, n) by multiply-high.
constexpr std::size_t victim_index(std::uint64_t draw, std::size_t n) noexcept {
    return static_cast<std::size_t>((static_cast<unsigned __int128>(draw) * n) >> 64);
}

/// Sorted-array reference set.
class Oracle {
public:
    bool insert(Key key);
    bool erase(Key key);
    bool contains(Key key) const;
    std::optional<Key> predecessor(Key x) const;
    std::optional<Key> successor(Key x) const;
    std::size_t size() const noexcept { return keys_.size(); }
    const std::vector<Key>& keys() const noexcept { return keys_; }

private:
    std::vector<Key> keys_;
};

/// Live keys with O(1) uniform selection and removal.
class LivePool {
public:
    void add(Key key);
    void remove(Key key);
    Key pick(std::uint64_t draw) const { return keys_[victim_index(draw, keys_.size())]; }
    bool empty() const noexcept { return keys_.empty(); }
    std::size_t size() const noexcept { return keys_.size(); }
    const std::vector<Key>& keys() const noexcept { return keys_; }

private:
    std::vector<Key> keys_;
    std::unordered_map<Key, std::size_t> where_;
};

struct Verdict {
    bool pass = true;
    /// First diverging op; meaningful only when !pass.
    std::size_t op_index = 0;
    std::string detail;
    std::uint64_t ops_checked = 0;
};

/// Runs seq against a LayeredSet and the Oracle in lockstep. Predecessor ops
/// also compare successor answers. Structure invariants are checked at every
/// rebuild and at the end.
Verdict run_equivalence(std::span<const WorkloadOp> seq, const LayeredOptions& options);

/// All op triples over a key pool, each from an empty set, with a full query
/// sweep afterwards (every x when bits <= 10, else pool keys and neighbours).
/// Ops are insert/erase/predecessor/successor of a pool key.
struct ExhaustiveResult {
    Verdict verdict;
    std::uint64_t sequences = 0;
};
ExhaustiveResult verify_exhaustive(unsigned bits, std::span<const Key> pool, const LayeredOptions& options);

/// 16 keys for exhaustive runs: adjacent pairs at spread-out anchors,
/// including both ends of the universe.
std::vector<Key> default_key_pool(unsigned bits);

struct BenchConfig {
    WorkloadSpec workload;
    LayeredOptions set;
    double warmup_fraction = 0.0;
    std::size_t batch = 1024;
};

struct RunReport {
    std::string run_id;
    std::uint64_t seed = 0;
    std::string dist;
    std::uint64_t n_ops = 0;
    std::string mix;
    unsigned bits = 64;
    std::optional<SmoothParams> params;

    std::uint64_t inserts = 0;
    std::uint64_t erases = 0;
    std::uint64_t queries = 0;

    double p50_ns = 0.0;
    double p99_ns = 0.0;
    double max_ns = 0.0;

    double mean_levels = 0.0;
    unsigned max_levels = 0;
    std::uint64_t depth_violations = 0;

    double mean_bucket = 0.0;
    std::size_t max_bucket = 0;
    std::size_t p99_bucket = 0;
    double entries_per_key = 0.0;

    std::uint64_t rebuilds = 0;
    unsigned p_final = 0;
    std::uint64_t n_final = 0;
};

/// Executes seq once on a fresh LayeredSet. Latency is measured per batch of
/// `batch` ops and reported per op; the first warmup_fraction of ops is run
/// but neither timed nor counted in the level statistics.
RunReport run_bench(std::span<const WorkloadOp> seq, const BenchConfig& config);

/// Deterministic id from the configuration (not the timings).
std::string make_run_id(const BenchConfig& config);

void write_bench_csv_header(std::ostream& os);
void write_bench_csv_row(std::ostream& os, const RunReport& r);

void write_lemma_csv_header(std::ostream& os);
void write_lemma_csv_row(std::ostream& os, std::uint64_t seed, std::string_view dist, const OccupancyReport& r);

}  // namespace lpred
