#pragma once

// Input distributions over [0, 1), their rounding to w-bit keys, and two
// experiments on them: interval occupancy and a Monte Carlo smoothness probe.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lpred/core.hpp"

namespace lpred {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
double unit_double(Rng& rng) noexcept;

enum class DistKind { uniform, ramp, truncated_normal, atom_cluster };

struct Distribution {
    DistKind kind = DistKind::uniform;
    std::optional<SmoothParams> declared;

    // ramp: density proportional to 1 + slope * x
    double ramp_slope = 1.0;
    // truncated_normal
    double normal_mean = 0.5;
    double normal_stddev = 0.2;
    // atom_cluster: `atom_mass` spread uniformly over
    // [atom_center - atom_width/2, atom_center + atom_width/2), the rest uniform on [0, 1)
    double atom_center = 0.3;
    double atom_width = 0x1p-20;
    double atom_mass = 0.5;

    static Distribution uniform();
    static Distribution ramp(double slope = 1.0);
    static Distribution truncated_normal(double mean = 0.5, double stddev = 0.2);
    static Distribution atom_cluster(double center = 0.3, double width = 0x1p-20, double mass = 0.5);

    /// CLI names: uniform, ramp, normal, atoms. Throws std::invalid_argument.
    static Distribution from_name(std::string_view name);
    std::string_view name() const noexcept;

    /// A draw in [0, 1).
    double sample(Rng& rng) const;
    /// Analytic CDF on [0, 1].
    double cdf(double x) const;
    /// Supremum of the density on [0, 1].
    double max_density() const;
};

/// floor(x * 2^w), x in [0, 1).
Key to_key(double x, unsigned w) noexcept;

Key sample_key(const Distribution& d, Rng& rng, unsigned w);

struct OccupancyReport {
    std::uint64_t n = 0;
    std::uint64_t k = 0;
    double mean = 0.0;
    std::uint64_t max = 0;
    std::uint64_t p99 = 0;
    /// histogram[c] = number of intervals holding exactly c samples
    std::vector<std::uint64_t> histogram;
};

/// Draws n samples and counts them in k equal intervals of [0, 1).
/// Throws std::invalid_argument for k == 0.
OccupancyReport occupancy_experiment(const Distribution& d, std::uint64_t n, std::uint64_t k, Rng& rng);

/// Smallest interval count the occupancy lemma asks for: ceil(n^(alpha/delta))
/// with the declared params. Absent when the distribution declares none.
std::optional<std::uint64_t> lemma_interval_count(const Distribution& d, std::uint64_t n);

/// Raised when no trial saw any sample inside its conditioning interval.
class InsufficientMass : public std::runtime_error {
public:
    InsufficientMass() : std::runtime_error("insufficient conditional mass") {}
};

struct SmoothnessOptions {
    double alpha = 1.0;
    double delta = 1.0;
    std::size_t trials = 100;
    std::size_t samples = 100000;
    /// s is drawn as 2^e with e uniform in [1, max_log_s].
    unsigned max_log_s = 20;
    /// z of the lower confidence bound put on each conditional probability.
    double z = 3.0;
};

/// Empirical lower bound on the beta of an (s^alpha, s^(1-delta))-smooth
/// density. Each trial picks c1 < c2 <= c3 and s, estimates
///   P[X in [c2 - (c3 - c1)/s^alpha, c2] | X in [c1, c3]]
/// from fresh samples, lower-bounds it at confidence z and divides by s^-delta.
/// The maximum over trials is returned. Half the trials take c2 from the
/// distribution itself so that concentrated mass is found.
double smoothness_estimate(const Distribution& d, const SmoothnessOptions& opt, Rng& rng);

/// Kolmogorov-Smirnov distance between sorted samples in [0, 1] and d's CDF.
double ks_statistic(std::span<const double> sorted, const Distribution& d);

/// Wilson score lower bound for a binomial proportion.
double wilson_lower(std::uint64_t successes, std::uint64_t trials, double z);

}  // namespace lpred
