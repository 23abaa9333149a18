#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hopmem/exec.hpp"
#include "hopmem/matrix.hpp"

namespace hopmem {

// Stored memory contents: d distinct finite rows in R^n.
class PatternSet {
public:
    static PatternSet from_matrix(Matrix m);

    std::size_t dim() const { return mat_.dim(); }
    std::size_t count() const { return mat_.rows(); }
    std::span<const double> row(std::size_t i) const { return mat_.row(i); }
    const Matrix& mat() const { return mat_; }

private:
    explicit PatternSet(Matrix m) : mat_(std::move(m)) {}
    Matrix mat_;
};

enum class PatternFormat { Csv, Amv1 };

PatternSet load_patterns(std::istream& in, PatternFormat format);

// Rejection-sampled points in a cube with pairwise Euclidean distance
// >= min_gap. cube_side = 0 picks a side from the packing volume heuristic.
// Throws CapacityError when the packing does not fit.
PatternSet generate_separated_patterns(std::size_t d, std::size_t n, double min_gap,
                                       std::uint64_t seed, double cube_side = 0.0);

struct NearestHit {
    std::size_t index;
    double sq_distance;
};

// Exact scan; ties go to the lowest index.
NearestHit nearest_pattern(std::span<const double> x, const PatternSet& set);

struct Ball {
    std::vector<double> center;
    double radius;
};

struct BallSystem {
    std::vector<Ball> balls;
    bool separation_ok;
    // Every (i, j), i < j, with center distance <= r_i + r_j.
    std::vector<std::pair<std::size_t, std::size_t>> violations;
};

BallSystem check_storage_geometry(const PatternSet& set, std::span<const double> radii);

struct LayerAssignment {
    std::vector<std::vector<std::size_t>> members;
    std::vector<double> trust_radii;

    std::size_t layer_count() const { return members.size(); }
};

enum class LayerStrategy { RoundRobin, Contiguous };

LayerAssignment partition_layers(const PatternSet& set, std::size_t layers,
                                 LayerStrategy strategy, std::span<const double> trust_radii);

struct Histogram {
    double bin_width = 0.0;
    std::vector<std::uint64_t> counts; // bin k covers [k*w, (k+1)*w)
};

struct NnStats {
    std::vector<double> distances; // Euclidean, one per row
    double mean = 0.0;
    double median = 0.0;
    Histogram histogram;
};

// Per-row Euclidean distance to the nearest other row. Duplicate rows give
// distance 0. bin_width = 0 auto-sizes to max/50.
NnStats nn_distance_stats(const Matrix& m, double bin_width = 0.0, Exec exec = Exec::Parallel);
NnStats nn_distance_stats(const PatternSet& set, double bin_width = 0.0, Exec exec = Exec::Parallel);

// Kernel behind nn_distance_stats; serial and parallel are bit-identical.
std::vector<double> nn_distances(const Matrix& m, Exec exec);

// Distinct-index subset of [0, count).
class ValidationSet {
public:
    ValidationSet(std::vector<std::size_t> indices, std::size_t pattern_count);
    const std::vector<std::size_t>& indices() const { return indices_; }

private:
    std::vector<std::size_t> indices_;
};

} // namespace hopmem
