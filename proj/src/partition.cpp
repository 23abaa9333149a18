#include "hopmem/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "hopmem/error.hpp"
#include "hopmem/numerics.hpp"
#include "hopmem/rng.hpp"

namespace hopmem {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kE = 2.71828182845904523536028747135266250;

void check_ball_args(int n, double r, const char* op) {
    if (n < 1) {
        throw std::invalid_argument(std::string(op) + ": dimension must be >= 1");
    }
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw std::invalid_argument(std::string(op) + ": radius must be positive");
    }
}

struct BatchMoments {
    double sum = 0.0;
    double sum_sq = 0.0;
};

} // namespace

double log_gaussian_ball_integral(int n, double r) {
    check_ball_args(n, r, "gaussian_ball_integral");
    const double half = 0.5 * static_cast<double>(n);
    return half * std::log(kPi) + log_regularized_gamma_p(half, r * r);
}

double gaussian_ball_integral(int n, double r) {
    return std::exp(log_gaussian_ball_integral(n, r));
}

IntegralBounds ball_integral_bounds(int n, double r) {
    check_ball_args(n, r, "ball_integral_bounds");
    const double v = ball_volume(n, r);
    return {std::exp(-r * r) * v, v};
}

double ball_integral_lower_loose(int n, double r) {
    check_ball_args(n, r, "ball_integral_bounds");
    return std::exp(-r) * ball_volume(n, r);
}

McEstimate mc_ball_integral(int n, double r, std::uint64_t samples, std::uint64_t seed,
                            Exec exec) {
    check_ball_args(n, r, "mc_ball_integral");
    if (n > 10000) {
        throw std::invalid_argument("mc_ball_integral: dimension too large for the sampler");
    }
    if (samples < 1000) {
        throw std::invalid_argument("mc_ball_integral: need at least 1000 samples");
    }

    const std::uint64_t batch = 8192;
    const std::uint64_t batches = (samples + batch - 1) / batch;
    std::vector<BatchMoments> partial(batches);

    const double inv_n = 1.0 / static_cast<double>(n);
    const double inv_samples = 1.0 / static_cast<double>(samples);

    auto run_batch = [&](std::uint64_t b) {
        const std::uint64_t begin = b * batch;
        const std::uint64_t end = std::min(samples, begin + batch);
        BatchMoments m;
        std::vector<double> y(static_cast<std::size_t>(n));
        for (std::uint64_t k = begin; k < end; ++k) {
            Rng rng(seed, k);
            double norm_sq = 0.0;
            do {
                norm_sq = 0.0;
                for (double& c : y) {
                    c = rng.next_gaussian();
                    norm_sq += c * c;
                }
            } while (norm_sq == 0.0);
            // Stratify the radial variate over the sample index.
            const double u = (static_cast<double>(k) + rng.next_unit()) * inv_samples;
            const double radius = r * std::pow(u, inv_n);
            const double scale = radius / std::sqrt(norm_sq);
            double point_sq = 0.0;
            for (double c : y) {
                const double yc = c * scale;
                point_sq += yc * yc;
            }
            const double f = std::exp(-point_sq);
            m.sum += f;
            m.sum_sq += f * f;
        }
        partial[b] = m;
    };

    const std::int64_t bcount = static_cast<std::int64_t>(batches);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t b = 0; b < bcount; ++b) {
            run_batch(static_cast<std::uint64_t>(b));
        }
    } else {
        for (std::int64_t b = 0; b < bcount; ++b) {
            run_batch(static_cast<std::uint64_t>(b));
        }
    }

    double sum = 0.0;
    double sum_sq = 0.0;
    for (const BatchMoments& m : partial) {
        sum += m.sum;
        sum_sq += m.sum_sq;
    }
    const double count = static_cast<double>(samples);
    const double mean_f = sum / count;
    const double var_f = std::max(0.0, (sum_sq - count * mean_f * mean_f) / (count - 1.0));
    const double volume = ball_volume(n, r);

    McEstimate est;
    est.mean = volume * mean_f;
    est.standard_error = volume * std::sqrt(var_f / count);
    est.samples = samples;
    return est;
}

PartitionEstimate layer_partition(const PatternSet& set, std::span<const double> radii) {
    const BallSystem sys = check_storage_geometry(set, radii);
    if (!sys.separation_ok) {
        throw PreconditionError(
            "layer_partition: balls overlap, the integral does not split over the union");
    }
    const int n = static_cast<int>(set.dim());
    PartitionEstimate est;
    est.method = PartitionMethod::Analytic;
    for (std::size_t i = 0; i < set.count(); ++i) {
        est.value += gaussian_ball_integral(n, radii[i]);
        const IntegralBounds b = ball_integral_bounds(n, radii[i]);
        est.lower_bound += b.lower;
        est.upper_bound += b.upper;
    }
    return est;
}

double critical_radius(int n) {
    if (n < 1) {
        throw std::invalid_argument("critical_radius: dimension must be >= 1");
    }
    return std::sqrt(static_cast<double>(n) / (2.0 * kPi * kE));
}

double loss_from_partition(double z) {
    if (!(z > 0.0) || !std::isfinite(z)) {
        throw std::domain_error("loss_from_partition: partition value must be positive");
    }
    return std::log(z) + 1.0 / z;
}

double radius_for_unit_partition(int n, std::size_t d) {
    if (d < 1) {
        throw std::invalid_argument("radius_for_unit_partition: need at least one ball");
    }
    const double target = 1.0 / static_cast<double>(d);
    double lo = 0.0;
    double hi = 1.0;
    while (gaussian_ball_integral(n, hi) < target) {
        hi *= 2.0;
        if (hi > 1e8) {
            throw std::domain_error("radius_for_unit_partition: no radius reaches the target");
        }
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-10 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (gaussian_ball_integral(n, mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

LossModelResult cross_entropy_loss(const PatternSet& set, const ValidationSet& validation,
                                   const LayerAssignment& layers,
                                   const PartitionEstimate& z_theta) {
    const std::size_t l = layers.layer_count();
    if (l == 0) {
        throw std::invalid_argument("cross_entropy_loss: empty layer assignment");
    }
    if (!(z_theta.value > 0.0) || !std::isfinite(z_theta.value)) {
        throw std::invalid_argument("cross_entropy_loss: partition value must be positive");
    }
    for (const auto& layer : layers.members) {
        if (layer.empty()) {
            throw std::invalid_argument("cross_entropy_loss: empty layer");
        }
    }

    const double z = z_theta.value;
    const double log_l = std::log(static_cast<double>(l));

    LossModelResult res;
    res.layer_count = l;
    res.log_partition = std::log(z);
    res.inverse_partition = 1.0 / z;
    res.gap_c_min = std::numeric_limits<double>::infinity();
    res.gap_c_max = -std::numeric_limits<double>::infinity();

    double energy_sum = 0.0;
    double c_sum = 0.0;
    double distance_energy_sum = 0.0;
    std::vector<double> layer_values(l);

    for (std::size_t idx : validation.indices()) {
        const auto x = set.row(idx);
        for (std::size_t t = 0; t < l; ++t) {
            double g_t = std::numeric_limits<double>::infinity();
            for (std::size_t j : layers.members[t]) {
                g_t = std::min(g_t, squared_euclidean(x, set.row(j)));
            }
            layer_values[t] = std::exp(-g_t) / z;
        }
        const double e_global = smooth_min(layer_values);
        const double e_min = *std::min_element(layer_values.begin(), layer_values.end());
        const double c = e_global - (e_min - log_l);
        energy_sum += e_global;
        c_sum += c;
        res.gap_c_min = std::min(res.gap_c_min, c);
        res.gap_c_max = std::max(res.gap_c_max, c);

        std::vector<double> dists(set.count());
        for (std::size_t j = 0; j < set.count(); ++j) {
            dists[j] = squared_euclidean(x, set.row(j));
        }
        distance_energy_sum += smooth_min(dists);
    }

    const double count = static_cast<double>(validation.indices().size());
    res.gap_c_used = c_sum / count;
    res.mean_distance_energy = distance_energy_sum / count;
    res.loss = res.log_partition + energy_sum / count;
    return res;
}

} // namespace hopmem
