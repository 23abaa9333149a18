#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "hopmem/exec.hpp"
#include "hopmem/patterns.hpp"

namespace hopmem {

// Uniform-cell spatial hash with expanding-ring lookup. Queries return
// exactly what nearest_pattern returns, including the lowest-index tie rule;
// the ring radius at which a cell can still hold a closer point bounds the
// search, and degenerate cases fall back to the exhaustive scan.
class GridIndex {
public:
    GridIndex(const PatternSet& set, double cell_size);

    NearestHit query(std::span<const double> x) const;
    std::vector<NearestHit> query_batch(const Matrix& queries, Exec exec = Exec::Parallel) const;

    std::size_t dim() const { return points_.dim(); }
    std::size_t occupied_cells() const { return cells_.size(); }

private:
    struct CellHash {
        std::size_t operator()(const std::vector<std::int64_t>& c) const;
    };

    std::vector<std::int64_t> cell_of(std::span<const double> x) const;
    void scan_cell(const std::vector<std::int64_t>& cell, std::span<const double> x,
                   NearestHit& best) const;
    NearestHit brute_force(std::span<const double> x) const;

    Matrix points_;
    double cell_size_;
    std::unordered_map<std::vector<std::int64_t>, std::vector<std::uint32_t>, CellHash> cells_;
    std::vector<std::int64_t> cell_min_;
    std::vector<std::int64_t> cell_max_;
};

} // namespace hopmem
