#include "hopmem/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "hopmem/error.hpp"
#include "hopmem/numerics.hpp"
#include "hopmem/rng.hpp"

namespace hopmem {

namespace {

std::uint64_t row_hash(std::span<const double> row) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (double x : row) {
        // Normalize -0.0 so numerically equal rows hash equally.
        const double y = (x == 0.0) ? 0.0 : x;
        std::uint64_t bits;
        static_assert(sizeof bits == sizeof y);
        __builtin_memcpy(&bits, &y, sizeof bits);
        h = (h ^ bits) * 0x100000001b3ull;
    }
    return h;
}

bool rows_equal(std::span<const double> a, std::span<const double> b) {
    return std::equal(a.begin(), a.end(), b.begin());
}

double partial_sq_distance(std::span<const double> a, std::span<const double> b, double cutoff) {
    double acc = 0.0;
    const std::size_t n = a.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const double d0 = a[i] - b[i];
        const double d1 = a[i + 1] - b[i + 1];
        const double d2 = a[i + 2] - b[i + 2];
        const double d3 = a[i + 3] - b[i + 3];
        acc += d0 * d0 + d1 * d1 + d2 * d2 + d3 * d3;
        if (acc > cutoff) {
            return acc;
        }
    }
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double nearest_other_distance(const Matrix& m, std::size_t i) {
    double best = std::numeric_limits<double>::infinity();
    const auto xi = m.row(i);
    for (std::size_t j = 0; j < m.rows(); ++j) {
        if (j == i) {
            continue;
        }
        const double d = partial_sq_distance(xi, m.row(j), best);
        if (d < best) {
            best = d;
        }
    }
    return std::sqrt(best);
}

} // namespace

PatternSet PatternSet::from_matrix(Matrix m) {
    if (m.rows() == 0) {
        throw std::invalid_argument("pattern set: need at least one pattern");
    }
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> seen;
    seen.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto& bucket = seen[row_hash(m.row(i))];
        for (std::size_t j : bucket) {
            if (rows_equal(m.row(i), m.row(j))) {
                throw IngestError(0, "duplicate patterns at rows " + std::to_string(j) + " and " +
                                         std::to_string(i));
            }
        }
        bucket.push_back(i);
    }
    return PatternSet(std::move(m));
}

PatternSet load_patterns(std::istream& in, PatternFormat format) {
    Matrix m = (format == PatternFormat::Csv) ? load_matrix_csv(in) : load_matrix_amv1(in);
    return PatternSet::from_matrix(std::move(m));
}

PatternSet generate_separated_patterns(std::size_t d, std::size_t n, double min_gap,
                                       std::uint64_t seed, double cube_side) {
    if (d < 1 || n < 1) {
        throw std::invalid_argument("generate_separated_patterns: d and n must be >= 1");
    }
    if (!(min_gap > 0.0)) {
        throw std::invalid_argument("generate_separated_patterns: min_gap must be positive");
    }
    double side = cube_side;
    if (side <= 0.0) {
        // Volume heuristic: room for roughly 4*d exclusion balls of radius
        // min_gap, never below 2 gaps on edge.
        const double log_vol =
            std::log(4.0 * static_cast<double>(d)) + log_ball_volume(static_cast<int>(n), min_gap);
        side = std::max(std::exp(log_vol / static_cast<double>(n)), 2.0 * min_gap);
    }
    const double gap_sq = min_gap * min_gap;
    std::vector<double> data;
    data.reserve(d * n);
    Rng rng(seed);
    const std::size_t max_attempts_per_point = 10000;
    for (std::size_t i = 0; i < d; ++i) {
        bool placed = false;
        for (std::size_t attempt = 0; attempt < max_attempts_per_point; ++attempt) {
            std::vector<double> cand(n);
            for (double& c : cand) {
                c = rng.next_uniform(0.0, side);
            }
            bool ok = true;
            for (std::size_t j = 0; j < i; ++j) {
                const std::span<const double> prev{data.data() + j * n, n};
                if (partial_sq_distance(cand, prev, gap_sq) < gap_sq) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                data.insert(data.end(), cand.begin(), cand.end());
                placed = true;
                break;
            }
        }
        if (!placed) {
            throw CapacityError("generate_separated_patterns: packing failed after " +
                                std::to_string(max_attempts_per_point) + " rejections at point " +
                                std::to_string(i) + "; use a larger cube or fewer patterns");
        }
    }
    return PatternSet::from_matrix(Matrix(n, std::move(data)));
}

NearestHit nearest_pattern(std::span<const double> x, const PatternSet& set) {
    if (x.size() != set.dim()) {
        throw std::invalid_argument("nearest_pattern: dimension mismatch");
    }
    NearestHit best{0, std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < set.count(); ++i) {
        const double d = partial_sq_distance(x, set.row(i), best.sq_distance);
        if (d < best.sq_distance) {
            best = {i, d};
        }
    }
    return best;
}

BallSystem check_storage_geometry(const PatternSet& set, std::span<const double> radii) {
    if (radii.size() != set.count()) {
        throw std::invalid_argument("check_storage_geometry: one radius per pattern");
    }
    for (double r : radii) {
        if (!(r > 0.0) || !std::isfinite(r)) {
            throw std::invalid_argument("check_storage_geometry: radii must be positive");
        }
    }
    BallSystem sys;
    sys.balls.reserve(set.count());
    for (std::size_t i = 0; i < set.count(); ++i) {
        const auto row = set.row(i);
        sys.balls.push_back(Ball{{row.begin(), row.end()}, radii[i]});
    }
    sys.separation_ok = true;
    for (std::size_t i = 0; i < set.count(); ++i) {
        for (std::size_t j = i + 1; j < set.count(); ++j) {
            const double dist = std::sqrt(squared_euclidean(set.row(i), set.row(j)));
            if (!(dist > radii[i] + radii[j])) {
                sys.separation_ok = false;
                sys.violations.emplace_back(i, j);
            }
        }
    }
    return sys;
}

LayerAssignment partition_layers(const PatternSet& set, std::size_t layers,
                                 LayerStrategy strategy, std::span<const double> trust_radii) {
    const std::size_t d = set.count();
    if (layers < 1 || layers > d) {
        throw std::invalid_argument("partition_layers: need 1 <= layers <= pattern count");
    }
    if (trust_radii.size() != layers) {
        throw std::invalid_argument("partition_layers: one trust radius per layer");
    }
    for (double t : trust_radii) {
        if (std::isnan(t) || t < 0.0) {
            throw std::invalid_argument("partition_layers: trust radii must be non-negative");
        }
    }
    LayerAssignment out;
    out.members.resize(layers);
    out.trust_radii.assign(trust_radii.begin(), trust_radii.end());
    if (strategy == LayerStrategy::RoundRobin) {
        for (std::size_t i = 0; i < d; ++i) {
            out.members[i % layers].push_back(i);
        }
    } else {
        // Contiguous slices; the first d % layers slices get the extra item.
        const std::size_t base = d / layers;
        const std::size_t extra = d % layers;
        std::size_t next = 0;
        for (std::size_t t = 0; t < layers; ++t) {
            const std::size_t len = base + (t < extra ? 1 : 0);
            for (std::size_t k = 0; k < len; ++k) {
                out.members[t].push_back(next++);
            }
        }
    }
    return out;
}

std::vector<double> nn_distances(const Matrix& m, Exec exec) {
    if (m.rows() < 2) {
        throw std::invalid_argument("nn_distances: need at least two rows");
    }
    std::vector<double> out(m.rows());
    const std::int64_t rows = static_cast<std::int64_t>(m.rows());
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::int64_t i = 0; i < rows; ++i) {
            out[static_cast<std::size_t>(i)] = nearest_other_distance(m, static_cast<std::size_t>(i));
        }
    } else {
        for (std::int64_t i = 0; i < rows; ++i) {
            out[static_cast<std::size_t>(i)] = nearest_other_distance(m, static_cast<std::size_t>(i));
        }
    }
    return out;
}

NnStats nn_distance_stats(const Matrix& m, double bin_width, Exec exec) {
    NnStats stats;
    stats.distances = nn_distances(m, exec);

    double sum = 0.0;
    double maxd = 0.0;
    for (double d : stats.distances) {
        sum += d;
        maxd = std::max(maxd, d);
    }
    stats.mean = sum / static_cast<double>(stats.distances.size());

    std::vector<double> sorted = stats.distances;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t k = sorted.size();
    stats.median = (k % 2 == 1) ? sorted[k / 2] : 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]);

    double w = bin_width;
    if (w <= 0.0) {
        w = (maxd > 0.0) ? maxd / 50.0 : 1.0;
    }
    stats.histogram.bin_width = w;
    const std::size_t bins = static_cast<std::size_t>(std::floor(maxd / w)) + 1;
    stats.histogram.counts.assign(bins, 0);
    for (double d : stats.distances) {
        std::size_t b = static_cast<std::size_t>(std::floor(d / w));
        if (b >= bins) {
            b = bins - 1;
        }
        ++stats.histogram.counts[b];
    }
    return stats;
}

NnStats nn_distance_stats(const PatternSet& set, double bin_width, Exec exec) {
    return nn_distance_stats(set.mat(), bin_width, exec);
}

ValidationSet::ValidationSet(std::vector<std::size_t> indices, std::size_t pattern_count)
    : indices_(std::move(indices)) {
    if (indices_.empty()) {
        throw std::invalid_argument("validation set: empty index list");
    }
    std::vector<std::size_t> sorted = indices_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("validation set: duplicate indices");
    }
    if (sorted.back() >= pattern_count) {
        throw std::invalid_argument("validation set: index out of range");
    }
}

} // namespace hopmem
