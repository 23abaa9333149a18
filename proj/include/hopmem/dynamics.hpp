#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hopmem/energy.hpp"
#include "hopmem/exec.hpp"
#include "hopmem/patterns.hpp"

namespace hopmem {

// One retrieval update: the softmax-weighted pattern average
//   x' = sum_i softmax(-beta d(x, rho_i))_i rho_i.
// Fixed points coincide with stationary points of the distance energy.
// weights_out, when given, receives the softmax weights.
std::vector<double> soft_retrieval_step(std::span<const double> x, const PatternSet& set,
                                        double beta, std::vector<double>* weights_out = nullptr);

struct RetrievalParams {
    double beta = 1.0;
    double tol = 1e-8;       // step-norm convergence threshold
    std::size_t max_iter = 500;
    double epsilon = 1e-4;   // attractor proximity for the retrieval test
};

struct RetrievalResult {
    std::vector<double> final_point;
    std::size_t iterations = 0;
    bool converged = false;
    std::optional<std::size_t> attractor_index; // set when epsilon-close to a pattern
    double final_step_norm = 0.0;
};

// Called after each update with (iteration, new point, softmax weights).
using StepObserver =
    std::function<void(std::size_t, std::span<const double>, std::span<const double>)>;

RetrievalResult retrieve(std::span<const double> x0, const PatternSet& set,
                         const RetrievalParams& params, const StepObserver& observer = {});

struct LayeredTrajectory {
    std::vector<std::vector<double>> points; // x^(0) .. x^(l)
    std::vector<RetrievalResult> per_layer;
    bool trust_radii_respected = true;
    std::vector<double> global_energy_trace; // global energy at each x^(t)
};

// Per layer: retrieve against that layer's patterns, then radially project
// onto the trust ball d(x, x^(t-1)) <= delta_t (squared-Euclidean d).
LayeredTrajectory layered_retrieve(std::span<const double> x0, const PatternSet& set,
                                   const LayerAssignment& layers, const RetrievalParams& params);

enum class BinaryUpdateMode { Synchronous, AsynchronousSweep };

// Classical rule: sign(W s + b), zero field keeps the spin. Asynchronous
// sweeps update in index order; synchronous applies all updates from the
// same snapshot.
BinaryState binary_update(const BinaryState& s, const HebbianWeights& w, BinaryUpdateMode mode);

// Dense / exponential rule: flip a spin whenever that strictly lowers the
// energy of the given spec.
BinaryState binary_update(const BinaryState& s, const EnergySpec& spec, const PatternSet& set,
                          BinaryUpdateMode mode);

struct BallReport {
    std::size_t pattern_index = 0;
    bool pass = false;
    std::size_t samples = 0;
    std::size_t converged_to_pattern = 0;
    double max_pairwise_final = 0.0; // largest distance between final points
    double displacement = 0.0;       // ||rho_i* - rho_i||
};

// Samples uniform points in each ball, retrieves, and checks that all of a
// ball's samples land on one attractor epsilon-close to the ball's pattern.
std::vector<BallReport> storage_check(const PatternSet& set, std::span<const double> radii,
                                      std::size_t samples_per_ball, const RetrievalParams& params,
                                      std::uint64_t seed, Exec exec = Exec::Parallel);

struct CapacityCurve {
    std::size_t dimension = 0;
    std::vector<std::size_t> counts;
    std::vector<double> success_rates;
    std::size_t threshold_dstar = 0; // largest count with success rate >= 0.9
};

// Stores `d` random patterns per trial, corrupts the cue, runs the variant's
// retrieval dynamics, and measures exact-recovery rates. Binary variants
// flip a `corruption` fraction of spins; continuous variants perturb inside
// the pattern's ball.
CapacityCurve capacity_sweep(const EnergySpec& spec, std::size_t n,
                             std::span<const std::size_t> counts, std::size_t trials,
                             double corruption, std::uint64_t seed, Exec exec = Exec::Parallel);

} // namespace hopmem
