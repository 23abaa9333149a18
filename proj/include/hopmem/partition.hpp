#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "hopmem/exec.hpp"
#include "hopmem/patterns.hpp"

namespace hopmem {

// Integral of exp(-||y||^2) over the n-ball of radius r, in closed form
// pi^{n/2} * gamma(n/2, r^2) / Gamma(n/2). Increasing in r with limit
// pi^{n/2}. The log variant survives dimensions where the value itself
// under- or overflows.
double gaussian_ball_integral(int n, double r);
double log_gaussian_ball_integral(int n, double r);

struct IntegralBounds {
    double lower; // exp(-r^2) * V_n(r), the integrand minimum on the ball
    double upper; // V_n(r)
};

IntegralBounds ball_integral_bounds(int n, double r);

// The looser exp(-r) * V_n(r) variant, emitted in diagnostics alongside the
// tight exp(-r^2) form.
double ball_integral_lower_loose(int n, double r);

struct McEstimate {
    double mean = 0.0;           // estimate of the integral
    double standard_error = 0.0; // i.i.d.-formula standard error
    std::uint64_t samples = 0;
};

// Monte Carlo oracle: uniform samples in the n-ball (normalized Gaussian
// direction, radius r * U^{1/n} with the uniform variate stratified over
// the sample index), merged in fixed batch order so serial and parallel
// runs agree bitwise.
McEstimate mc_ball_integral(int n, double r, std::uint64_t samples, std::uint64_t seed,
                            Exec exec = Exec::Parallel);

enum class PartitionMethod { Analytic, MonteCarlo, BoundsOnly };

struct PartitionEstimate {
    double value = 0.0;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    std::optional<McEstimate> mc;
    PartitionMethod method = PartitionMethod::Analytic;
};

// Partition function over the disjoint union of pattern balls: the integral
// splits into per-ball Gaussian integrals. Overlapping balls are rejected.
PartitionEstimate layer_partition(const PatternSet& set, std::span<const double> radii);

// sqrt(n / (2 pi e)), the radius at which the n-ball keeps Theta(1) volume.
double critical_radius(int n);

// log z + 1/z, >= 1 for z > 0 with equality exactly at z = 1.
double loss_from_partition(double z);

// Radius r such that d equal balls give partition value 1, by bisection.
double radius_for_unit_partition(int n, std::size_t d);

struct LossModelResult {
    double loss = 0.0;
    double log_partition = 0.0;
    double inverse_partition = 0.0;
    double gap_c_used = 0.0; // mean of c(x) over validation points
    std::size_t layer_count = 0;
    double gap_c_min = 0.0;
    double gap_c_max = 0.0;
    // Mean of the distance-based layer energy at the validation patterns;
    // lies in [-log d, 0] when the validation points are stored patterns.
    double mean_distance_energy = 0.0;
};

// Cross-entropy model for validation patterns drawn from the stored set:
//   loss = log Z + mean_i E~(rho_sigma(i)),
// where E~ is the smooth minimum over layers of exp(-g_t(x)) / Z, the
// per-layer density value at x. For a single layer evaluated at stored
// patterns this reduces exactly to log Z + 1/Z.
LossModelResult cross_entropy_loss(const PatternSet& set, const ValidationSet& validation,
                                   const LayerAssignment& layers,
                                   const PartitionEstimate& z_theta);

} // namespace hopmem
