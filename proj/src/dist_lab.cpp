#include "lpred/dist_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lpred {
namespace {

constexpr double kBelowOne = 1.0 - 0x1p-53;

double std_normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double clamp_unit(double x) {
    return std::clamp(x, 0.0, kBelowOne);
}

}  // namespace

double unit_double(Rng& rng) noexcept {
    return static_cast<double>(rng() >> 11) * 0x1p-53;
}

Distribution Distribution::uniform() {
    Distribution d;
    d.kind = DistKind::uniform;
    d.declared = SmoothParams{1.0, 1.0};
    return d;
}

Distribution Distribution::ramp(double slope) {
    if (!(slope > -1.0)) {
        throw std::invalid_argument("ramp slope must exceed -1 to keep the density positive");
    }
    Distribution d;
    d.kind = DistKind::ramp;
    d.declared = SmoothParams{1.0, 1.0};
    d.ramp_slope = slope;
    return d;
}

Distribution Distribution::truncated_normal(double mean, double stddev) {
    if (!(stddev > 0.0)) {
        throw std::invalid_argument("normal stddev must be positive");
    }
    Distribution d;
    d.kind = DistKind::truncated_normal;
    d.declared = SmoothParams{1.0, 1.0};
    d.normal_mean = mean;
    d.normal_stddev = stddev;
    return d;
}

Distribution Distribution::atom_cluster(double center, double width, double mass) {
    if (!(width > 0.0) || !(mass >= 0.0 && mass <= 1.0) || center - width / 2 < 0.0 || center + width / 2 > 1.0) {
        throw std::invalid_argument("atom must lie inside [0, 1) with mass in [0, 1]");
    }
    Distribution d;
    d.kind = DistKind::atom_cluster;
    d.declared = std::nullopt;
    d.atom_center = center;
    d.atom_width = width;
    d.atom_mass = mass;
    return d;
}

Distribution Distribution::from_name(std::string_view name) {
    if (name == "uniform") return uniform();
    if (name == "ramp") return ramp();
    if (name == "normal") return truncated_normal();
    if (name == "atoms") return atom_cluster();
    throw std::invalid_argument("unknown distribution: " + std::string(name));
}

std::string_view Distribution::name() const noexcept {
    switch (kind) {
        case DistKind::uniform:
            return "uniform";
        case DistKind::ramp:
            return "ramp";
        case DistKind::truncated_normal:
            return "normal";
        case DistKind::atom_cluster:
            return "atoms";
    }
    return "uniform";
}

double Distribution::sample(Rng& rng) const {
    switch (kind) {
        case DistKind::uniform:
            return unit_double(rng);
        case DistKind::ramp: {
            const double u = unit_double(rng);
            const double s = ramp_slope;
            if (std::abs(s) < 1e-12) return u;
            // Inverse of F(x) = (x + s x^2 / 2) / (1 + s / 2).
            const double x = (-1.0 + std::sqrt(1.0 + 2.0 * s * u * (1.0 + s / 2.0))) / s;
            return clamp_unit(x);
        }
        case DistKind::truncated_normal: {
            std::normal_distribution<double> normal(normal_mean, normal_stddev);
            for (;;) {
                const double x = normal(rng);
                if (x >= 0.0 && x < 1.0) return x;
            }
        }
        case DistKind::atom_cluster: {
            if (unit_double(rng) < atom_mass) {
                return clamp_unit(atom_center - atom_width / 2 + atom_width * unit_double(rng));
            }
            return unit_double(rng);
        }
    }
    return 0.0;
}

double Distribution::cdf(double x) const {
    x = std::clamp(x, 0.0, 1.0);
    switch (kind) {
        case DistKind::uniform:
            return x;
        case DistKind::ramp:
            return (x + ramp_slope * x * x / 2.0) / (1.0 + ramp_slope / 2.0);
        case DistKind::truncated_normal: {
            const double lo = std_normal_cdf((0.0 - normal_mean) / normal_stddev);
            const double hi = std_normal_cdf((1.0 - normal_mean) / normal_stddev);
            return (std_normal_cdf((x - normal_mean) / normal_stddev) - lo) / (hi - lo);
        }
        case DistKind::atom_cluster: {
            const double lo = atom_center - atom_width / 2;
            return (1.0 - atom_mass) * x + atom_mass * std::clamp((x - lo) / atom_width, 0.0, 1.0);
        }
    }
    return x;
}

double Distribution::max_density() const {
    switch (kind) {
        case DistKind::uniform:
            return 1.0;
        case DistKind::ramp:
            return std::max(1.0, 1.0 + ramp_slope) / (1.0 + ramp_slope / 2.0);
        case DistKind::truncated_normal: {
            const double peak_at = std::clamp(normal_mean, 0.0, 1.0);
            const double z = (peak_at - normal_mean) / normal_stddev;
            const double pdf = std::exp(-z * z / 2.0) / (normal_stddev * std::sqrt(2.0 * std::numbers::pi));
            const double mass = std_normal_cdf((1.0 - normal_mean) / normal_stddev) -
                                 std_normal_cdf(-normal_mean / normal_stddev);
            return pdf / mass;
        }
        case DistKind::atom_cluster:
            return (1.0 - atom_mass) + atom_mass / atom_width;
    }
    return 1.0;
}

Key to_key(double x, unsigned w) noexcept {
    const double scaled = std::floor(std::ldexp(clamp_unit(x), static_cast<int>(w)));
    return std::min(static_cast<Key>(scaled), universe_max(w));
}

Key sample_key(const Distribution& d, Rng& rng, unsigned w) {
    return to_key(d.sample(rng), w);
}

OccupancyReport occupancy_experiment(const Distribution& d, std::uint64_t n, std::uint64_t k, Rng& rng) {
    if (k == 0) {
        throw std::invalid_argument("interval count must be positive");
    }
    std::vector<std::uint32_t> counts(k, 0);
    const auto kd = static_cast<double>(k);
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto bin = static_cast<std::uint64_t>(d.sample(rng) * kd);
        ++counts[std::min(bin, k - 1)];
    }

    OccupancyReport r;
    r.n = n;
    r.k = k;
    r.mean = static_cast<double>(n) / kd;
    r.max = *std::max_element(counts.begin(), counts.end());
    r.histogram.assign(r.max + 1, 0);
    for (const std::uint32_t c : counts) {
        ++r.histogram[c];
    }
    const auto need = static_cast<std::uint64_t>(std::ceil(0.99 * kd));
    std::uint64_t seen = 0;
    for (std::uint64_t c = 0; c < r.histogram.size(); ++c) {
        seen += r.histogram[c];
        if (seen >= need) {
            r.p99 = c;
            break;
        }
    }
    return r;
}

std::optional<std::uint64_t> lemma_interval_count(const Distribution& d, std::uint64_t n) {
    if (!d.declared) return std::nullopt;
    const double exponent = d.declared->alpha / d.declared->delta;
    const double k = std::ceil(std::pow(static_cast<double>(std::max<std::uint64_t>(n, 1)), exponent));
    if (!(k < 0x1p63)) {
        throw std::overflow_error("lemma interval count does not fit in 63 bits");
    }
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(k));
}

double wilson_lower(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) return 0.0;
    const auto n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double center = phat + z2 / (2.0 * n);
    const double margin = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
    return std::max(0.0, (center - margin) / (1.0 + z2 / n));
}

double smoothness_estimate(const Distribution& d, const SmoothnessOptions& opt, Rng& rng) {
    if (opt.trials == 0 || opt.samples == 0) {
        throw std::invalid_argument("smoothness estimate needs at least one trial and one sample");
    }
    SmoothParams::make(opt.alpha, opt.delta);
    if (opt.max_log_s < 1 || opt.max_log_s > 62) {
        throw std::invalid_argument("max_log_s must be in [1, 62]");
    }
    std::uniform_int_distribution<unsigned> log_s(1, opt.max_log_s);

    double best = 0.0;
    std::size_t usable = 0;
    for (std::size_t t = 0; t < opt.trials; ++t) {
        double c2 = 0.0;
        while (c2 <= 0.0) {
            c2 = (t % 2 == 1) ? d.sample(rng) : unit_double(rng);
        }
        const double c1 = unit_double(rng) * c2;
        const double c3 = c2 + unit_double(rng) * (1.0 - c2);
        const double s = std::ldexp(1.0, static_cast<int>(log_s(rng)));
        const double lo = std::max(c1, c2 - (c3 - c1) / std::pow(s, opt.alpha));

        std::uint64_t in_range = 0;
        std::uint64_t in_window = 0;
        for (std::size_t i = 0; i < opt.samples; ++i) {
            const double x = d.sample(rng);
            if (x >= c1 && x <= c3) {
                ++in_range;
                in_window += (x >= lo && x <= c2);
            }
        }
        if (in_range == 0) continue;
        ++usable;
        const double ratio = wilson_lower(in_window, in_range, opt.z) * std::pow(s, opt.delta);
        best = std::max(best, ratio);
    }
    if (usable == 0) {
        throw InsufficientMass();
    }
    return best;
}

double ks_statistic(std::span<const double> sorted, const Distribution& d) {
    const auto n = static_cast<double>(sorted.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = d.cdf(sorted[i]);
        worst = std::max({worst, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return worst;
}

}  // namespace lpred
