#include "hopmem/grid_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hopmem/numerics.hpp"

namespace hopmem {

namespace {

// Enumerate offsets in {-k..k}^n with Chebyshev norm exactly k, invoking fn
// on each absolute cell coordinate.
template <typename Fn>
void for_each_ring_cell(const std::vector<std::int64_t>& center, std::int64_t k,
                        std::vector<std::int64_t>& scratch, std::size_t d, bool boundary_used,
                        Fn&& fn) {
    const std::size_t n = center.size();
    if (d == n) {
        if (boundary_used || k == 0) {
            fn(scratch);
        }
        return;
    }
    const bool last = (d + 1 == n);
    for (std::int64_t off = -k; off <= k; ++off) {
        const bool on_boundary = (off == k || off == -k);
        if (last && !boundary_used && !on_boundary) {
            continue; // at least one coordinate must sit on the ring boundary
        }
        scratch[d] = center[d] + off;
        for_each_ring_cell(center, k, scratch, d + 1, boundary_used || on_boundary, fn);
    }
}

double ring_cell_count_estimate(std::int64_t k, std::size_t n) {
    // (2k+1)^n - (2k-1)^n, saturating.
    double outer = 1.0;
    double inner = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        outer *= static_cast<double>(2 * k + 1);
        inner *= static_cast<double>(std::max<std::int64_t>(2 * k - 1, 0));
        if (outer > 1e18) {
            return 1e18;
        }
    }
    return outer - inner;
}

} // namespace

std::size_t GridIndex::CellHash::operator()(const std::vector<std::int64_t>& c) const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::int64_t v : c) {
        h = (h ^ static_cast<std::uint64_t>(v)) * 0x100000001b3ull;
        h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
}

GridIndex::GridIndex(const PatternSet& set, double cell_size)
    : points_(set.mat()), cell_size_(cell_size) {
    if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
        throw std::invalid_argument("grid index: cell size must be positive");
    }
    cell_min_.assign(points_.dim(), std::numeric_limits<std::int64_t>::max());
    cell_max_.assign(points_.dim(), std::numeric_limits<std::int64_t>::min());
    for (std::size_t i = 0; i < points_.rows(); ++i) {
        auto cell = cell_of(points_.row(i));
        for (std::size_t k = 0; k < cell.size(); ++k) {
            cell_min_[k] = std::min(cell_min_[k], cell[k]);
            cell_max_[k] = std::max(cell_max_[k], cell[k]);
        }
        cells_[std::move(cell)].push_back(static_cast<std::uint32_t>(i));
    }
}

std::vector<std::int64_t> GridIndex::cell_of(std::span<const double> x) const {
    std::vector<std::int64_t> cell(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        cell[k] = static_cast<std::int64_t>(std::floor(x[k] / cell_size_));
    }
    return cell;
}

void GridIndex::scan_cell(const std::vector<std::int64_t>& cell, std::span<const double> x,
                          NearestHit& best) const {
    const auto it = cells_.find(cell);
    if (it == cells_.end()) {
        return;
    }
    for (std::uint32_t idx : it->second) {
        const double d = squared_euclidean(x, points_.row(idx));
        if (d < best.sq_distance || (d == best.sq_distance && idx < best.index)) {
            best = {idx, d};
        }
    }
}

NearestHit GridIndex::brute_force(std::span<const double> x) const {
    NearestHit best{0, std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < points_.rows(); ++i) {
        const double d = squared_euclidean(x, points_.row(i));
        if (d < best.sq_distance) {
            best = {i, d};
        }
    }
    return best;
}

NearestHit GridIndex::query(std::span<const double> x) const {
    if (x.size() != points_.dim()) {
        throw std::invalid_argument("grid index: dimension mismatch");
    }
    const auto center = cell_of(x);
    // Rings beyond the bounding box of occupied cells are empty.
    std::int64_t k_last = 0;
    for (std::size_t d = 0; d < center.size(); ++d) {
        k_last = std::max(k_last, static_cast<std::int64_t>(std::llabs(center[d] - cell_min_[d])));
        k_last = std::max(k_last, static_cast<std::int64_t>(std::llabs(center[d] - cell_max_[d])));
    }
    NearestHit best{points_.rows(), std::numeric_limits<double>::infinity()};
    std::vector<std::int64_t> scratch(center.size());
    for (std::int64_t k = 0; k <= k_last; ++k) {
        if (best.sq_distance < std::numeric_limits<double>::infinity()) {
            // Points in ring k sit at least (k-1)*cell away.
            const double reach = static_cast<double>(k - 1) * cell_size_;
            if (k >= 1 && reach * reach > best.sq_distance) {
                break;
            }
        }
        if (ring_cell_count_estimate(k, center.size()) >
            static_cast<double>(cells_.size()) * 4.0 + 64.0) {
            return brute_force(x);
        }
        for_each_ring_cell(center, k, scratch, 0, false,
                           [&](const std::vector<std::int64_t>& cell) { scan_cell(cell, x, best); });
    }
    return best;
}

std::vector<NearestHit> GridIndex::query_batch(const Matrix& queries, Exec exec) const {
    if (queries.dim() != points_.dim()) {
        throw std::invalid_argument("grid index: dimension mismatch");
    }
    std::vector<NearestHit> out(queries.rows());
    const std::int64_t rows = static_cast<std::int64_t>(queries.rows());
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 32)
        for (std::int64_t i = 0; i < rows; ++i) {
            out[static_cast<std::size_t>(i)] = query(queries.row(static_cast<std::size_t>(i)));
        }
    } else {
        for (std::int64_t i = 0; i < rows; ++i) {
            out[static_cast<std::size_t>(i)] = query(queries.row(static_cast<std::size_t>(i)));
        }
    }
    return out;
}

} // namespace hopmem
