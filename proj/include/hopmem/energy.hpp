#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "hopmem/exec.hpp"
#include "hopmem/patterns.hpp"

namespace hopmem {

// Nearest-neighbor objective: min_i ||x - rho_i||^2.
double g_energy(std::span<const double> x, const PatternSet& set);

// Distance-based energy -(1/beta) log sum_i exp(-beta ||x - rho_i||^2),
// evaluated through the max-shifted smooth min.
double layer_energy(std::span<const double> x, const PatternSet& set, double beta = 1.0);

// Same, restricted to a subset of the patterns.
double layer_energy_subset(std::span<const double> x, const PatternSet& set,
                           std::span<const std::size_t> members, double beta = 1.0);

// Modern continuous Hopfield energy:
//   -(1/beta) log sum_i exp(beta rho_i . x) + x.x/2 + log(d)/beta + max_i ||rho_i||^2 / 2.
double mchn_energy(std::span<const double> x, const PatternSet& set, double beta);

// Pieces of the Hopfield energy, exposed for landscape emission; the sum of
// the two equals mchn_energy. include_quadratic=false drops the x.x/2 term
// (fault-injection hook for the verification harness).
double mchn_lse_term(std::span<const double> x, const PatternSet& set, double beta);
double mchn_regularizer(std::span<const double> x, const PatternSet& set, double beta,
                        bool include_quadratic = true);

// Spin configuration over {-1, +1}^n.
class BinaryState {
public:
    explicit BinaryState(std::vector<double> spins);
    std::size_t size() const { return spins_.size(); }
    const std::vector<double>& spins() const { return spins_; }
    std::vector<double>& spins() { return spins_; }

private:
    std::vector<double> spins_;
};

// Symmetric zero-diagonal couplings W = (1/n) sum_i rho_i rho_i^T plus bias.
struct HebbianWeights {
    std::size_t n = 0;
    std::vector<double> w; // row-major n*n
    std::vector<double> bias;

    static HebbianWeights from_patterns(const PatternSet& set);
};

double classical_energy(const BinaryState& s, const HebbianWeights& w);
double dense_energy(const BinaryState& s, const PatternSet& set, int order);
double exponential_energy(const BinaryState& s, const PatternSet& set);

struct GlobalEnergyResult {
    double value = 0.0;
    std::vector<double> layer_energies;
    std::size_t active_layer = 0; // argmin layer energy, lowest index on ties
    double gap_c = 0.0;           // value - (min_t E_t - log l), in [0, log l)
};

GlobalEnergyResult global_energy(std::span<const double> x, const PatternSet& set,
                                 const LayerAssignment& layers, double beta = 1.0);

// The third bound is the one the first two actually imply:
//   (min^2 - max^2) - log d <= g - 2 E_mchn <= max^2 - min^2.
struct PropositionReport {
    double p1_lower_slack; // E - (g - log d)
    double p1_upper_slack; // g - E
    double p2_gap;         // |E - (2 E_mchn(beta=2) - log d)|
    double p2_bound;       // max ||rho||^2 - min ||rho||^2
    double p3_lower_slack; // (g - 2 E_mchn) - (min^2 - max^2 - log d)
    double p3_upper_slack; // (max^2 - min^2) - (g - 2 E_mchn)
};

PropositionReport proposition_report(std::span<const double> x, const PatternSet& set);

enum class LandscapeVariant { LseOnly, Regularizers, Mchn, Distance };

struct LandscapeTable {
    std::size_t dim = 0;        // 1 or 2
    std::size_t resolution = 0; // points per axis
    std::vector<double> coords; // dim values per point, row-major
    std::vector<double> energy; // one value per point

    std::size_t points() const { return energy.size(); }
};

// Row-major evaluation over [lo, hi]^dim at `resolution` points per axis.
LandscapeTable landscape_grid(const PatternSet& set, LandscapeVariant variant, double beta,
                              std::span<const double> lo, std::span<const double> hi,
                              std::size_t resolution, Exec exec = Exec::Parallel);

// Header `x[,y],energy`, 17 significant digits.
void write_landscape_csv(std::ostream& out, const LandscapeTable& table);

// Parameters of one energy family, used by the capacity sweep.
struct EnergySpec {
    enum class Variant { ClassicalBinary, DensePolynomial, ExponentialBinary, Mchn, Distance };
    Variant variant = Variant::ClassicalBinary;
    double beta = 1.0; // mchn / distance
    int poly_order = 2; // dense
};

} // namespace hopmem
