#include "hopmem/energy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "hopmem/numerics.hpp"

namespace hopmem {

namespace {

void check_dim(std::span<const double> x, const PatternSet& set, const char* op) {
    if (x.size() != set.dim()) {
        throw std::invalid_argument(std::string(op) + ": dimension mismatch");
    }
}

void check_binary(const std::vector<double>& v, const char* what) {
    for (double s : v) {
        if (s != 1.0 && s != -1.0) {
            throw std::domain_error(std::string(what) + ": entries must be +1 or -1");
        }
    }
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

struct NormRange {
    double min_sq;
    double max_sq;
};

NormRange norm_range(const PatternSet& set) {
    NormRange r{std::numeric_limits<double>::infinity(), 0.0};
    for (std::size_t i = 0; i < set.count(); ++i) {
        const double nsq = dot(set.row(i), set.row(i));
        r.min_sq = std::min(r.min_sq, nsq);
        r.max_sq = std::max(r.max_sq, nsq);
    }
    return r;
}

} // namespace

double g_energy(std::span<const double> x, const PatternSet& set) {
    check_dim(x, set, "g_energy");
    return nearest_pattern(x, set).sq_distance;
}

double layer_energy(std::span<const double> x, const PatternSet& set, double beta) {
    check_dim(x, set, "layer_energy");
    if (!(beta > 0.0)) {
        throw std::invalid_argument("layer_energy: beta must be positive");
    }
    std::vector<double> scaled(set.count());
    for (std::size_t i = 0; i < set.count(); ++i) {
        scaled[i] = beta * squared_euclidean(x, set.row(i));
    }
    return smooth_min(scaled) / beta;
}

double layer_energy_subset(std::span<const double> x, const PatternSet& set,
                           std::span<const std::size_t> members, double beta) {
    check_dim(x, set, "layer_energy");
    if (members.empty()) {
        throw std::invalid_argument("layer_energy: empty layer");
    }
    std::vector<double> scaled(members.size());
    for (std::size_t k = 0; k < members.size(); ++k) {
        scaled[k] = beta * squared_euclidean(x, set.row(members[k]));
    }
    return smooth_min(scaled) / beta;
}

double mchn_lse_term(std::span<const double> x, const PatternSet& set, double beta) {
    check_dim(x, set, "mchn_energy");
    if (!(beta > 0.0)) {
        throw std::invalid_argument("mchn_energy: beta must be positive");
    }
    std::vector<double> scores(set.count());
    for (std::size_t i = 0; i < set.count(); ++i) {
        scores[i] = beta * dot(set.row(i), x);
    }
    return -log_sum_exp(scores) / beta;
}

double mchn_regularizer(std::span<const double> x, const PatternSet& set, double beta,
                        bool include_quadratic) {
    check_dim(x, set, "mchn_energy");
    const double quad = include_quadratic ? 0.5 * dot(x, x) : 0.0;
    return quad + std::log(static_cast<double>(set.count())) / beta + 0.5 * norm_range(set).max_sq;
}

double mchn_energy(std::span<const double> x, const PatternSet& set, double beta) {
    return mchn_lse_term(x, set, beta) + mchn_regularizer(x, set, beta);
}

BinaryState::BinaryState(std::vector<double> spins) : spins_(std::move(spins)) {
    if (spins_.empty()) {
        throw std::invalid_argument("binary state: empty");
    }
    check_binary(spins_, "binary state");
}

HebbianWeights HebbianWeights::from_patterns(const PatternSet& set) {
    for (std::size_t i = 0; i < set.count(); ++i) {
        const auto row = set.row(i);
        check_binary({row.begin(), row.end()}, "hebbian weights");
    }
    const std::size_t n = set.dim();
    HebbianWeights hw;
    hw.n = n;
    hw.w.assign(n * n, 0.0);
    hw.bias.assign(n, 0.0);
    for (std::size_t p = 0; p < set.count(); ++p) {
        const auto row = set.row(p);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                hw.w[i * n + j] += row[i] * row[j];
            }
        }
    }
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            hw.w[i * n + j] *= scale;
        }
        hw.w[i * n + i] = 0.0;
    }
    return hw;
}

double classical_energy(const BinaryState& s, const HebbianWeights& w) {
    if (s.size() != w.n) {
        throw std::invalid_argument("classical_energy: dimension mismatch");
    }
    const auto& spins = s.spins();
    double quad = 0.0;
    for (std::size_t i = 0; i < w.n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < w.n; ++j) {
            row += w.w[i * w.n + j] * spins[j];
        }
        quad += spins[i] * row;
    }
    double lin = 0.0;
    for (std::size_t i = 0; i < w.n; ++i) {
        lin += w.bias[i] * spins[i];
    }
    return -0.5 * quad - lin;
}

double dense_energy(const BinaryState& s, const PatternSet& set, int order) {
    if (s.size() != set.dim()) {
        throw std::invalid_argument("dense_energy: dimension mismatch");
    }
    if (order < 2) {
        throw std::invalid_argument("dense_energy: polynomial order must be >= 2");
    }
    check_binary(s.spins(), "dense_energy");
    double acc = 0.0;
    for (std::size_t i = 0; i < set.count(); ++i) {
        const auto row = set.row(i);
        check_binary({row.begin(), row.end()}, "dense_energy patterns");
        acc += std::pow(dot(row, s.spins()), static_cast<double>(order));
    }
    return -acc;
}

double exponential_energy(const BinaryState& s, const PatternSet& set) {
    if (s.size() != set.dim()) {
        throw std::invalid_argument("exponential_energy: dimension mismatch");
    }
    check_binary(s.spins(), "exponential_energy");
    std::vector<double> scores(set.count());
    for (std::size_t i = 0; i < set.count(); ++i) {
        const auto row = set.row(i);
        check_binary({row.begin(), row.end()}, "exponential_energy patterns");
        scores[i] = dot(row, s.spins());
    }
    return -log_sum_exp(scores);
}

GlobalEnergyResult global_energy(std::span<const double> x, const PatternSet& set,
                                 const LayerAssignment& layers, double beta) {
    check_dim(x, set, "global_energy");
    const std::size_t l = layers.layer_count();
    if (l == 0) {
        throw std::invalid_argument("global_energy: empty layer assignment");
    }
    std::vector<bool> seen(set.count(), false);
    std::size_t covered = 0;
    for (const auto& layer : layers.members) {
        if (layer.empty()) {
            throw std::invalid_argument("global_energy: empty layer");
        }
        for (std::size_t idx : layer) {
            if (idx >= set.count() || seen[idx]) {
                throw std::invalid_argument("global_energy: invalid layer assignment");
            }
            seen[idx] = true;
            ++covered;
        }
    }
    if (covered != set.count()) {
        throw std::invalid_argument("global_energy: layers must cover every pattern");
    }

    GlobalEnergyResult res;
    res.layer_energies.resize(l);
    for (std::size_t t = 0; t < l; ++t) {
        res.layer_energies[t] = layer_energy_subset(x, set, layers.members[t], beta);
    }
    res.value = smooth_min(res.layer_energies);
    res.active_layer = static_cast<std::size_t>(
        std::min_element(res.layer_energies.begin(), res.layer_energies.end()) -
        res.layer_energies.begin());
    const double layer_min = res.layer_energies[res.active_layer];
    res.gap_c = res.value - (layer_min - std::log(static_cast<double>(l)));
    return res;
}

PropositionReport proposition_report(std::span<const double> x, const PatternSet& set) {
    check_dim(x, set, "proposition_report");
    const double g = g_energy(x, set);
    const double e = layer_energy(x, set, 1.0);
    const double m2 = mchn_energy(x, set, 2.0);
    const double logd = std::log(static_cast<double>(set.count()));
    const NormRange norms = norm_range(set);
    const double bound = norms.max_sq - norms.min_sq;

    PropositionReport r;
    r.p1_lower_slack = e - (g - logd);
    r.p1_upper_slack = g - e;
    r.p2_gap = std::fabs(e - (2.0 * m2 - logd));
    r.p2_bound = bound;
    const double diff = g - 2.0 * m2;
    r.p3_lower_slack = diff - (norms.min_sq - norms.max_sq - logd);
    r.p3_upper_slack = bound - diff;
    return r;
}

LandscapeTable landscape_grid(const PatternSet& set, LandscapeVariant variant, double beta,
                              std::span<const double> lo, std::span<const double> hi,
                              std::size_t resolution, Exec exec) {
    const std::size_t dim = set.dim();
    if (dim != 1 && dim != 2) {
        throw std::invalid_argument(
            "landscape_grid: only 1- and 2-dimensional pattern sets; slice higher dimensions first");
    }
    if (lo.size() != dim || hi.size() != dim) {
        throw std::invalid_argument("landscape_grid: box does not match dimension");
    }
    for (std::size_t k = 0; k < dim; ++k) {
        if (!(lo[k] < hi[k])) {
            throw std::invalid_argument("landscape_grid: box must have positive extent");
        }
    }
    if (resolution < 2) {
        throw std::invalid_argument("landscape_grid: resolution must be >= 2");
    }

    const std::size_t total = (dim == 1) ? resolution : resolution * resolution;
    LandscapeTable table;
    table.dim = dim;
    table.resolution = resolution;
    table.coords.resize(total * dim);
    table.energy.resize(total);

    auto axis_value = [&](std::size_t axis, std::size_t i) {
        return lo[axis] +
               (hi[axis] - lo[axis]) * static_cast<double>(i) / static_cast<double>(resolution - 1);
    };

    auto evaluate = [&](std::size_t point) {
        double xy[2];
        if (dim == 1) {
            xy[0] = axis_value(0, point);
        } else {
            xy[0] = axis_value(0, point / resolution);
            xy[1] = axis_value(1, point % resolution);
        }
        const std::span<const double> x{xy, dim};
        double e = 0.0;
        switch (variant) {
        case LandscapeVariant::LseOnly:
            e = mchn_lse_term(x, set, beta);
            break;
        case LandscapeVariant::Regularizers:
            e = mchn_regularizer(x, set, beta);
            break;
        case LandscapeVariant::Mchn:
            e = mchn_energy(x, set, beta);
            break;
        case LandscapeVariant::Distance:
            e = layer_energy(x, set, beta);
            break;
        }
        for (std::size_t k = 0; k < dim; ++k) {
            table.coords[point * dim + k] = xy[k];
        }
        table.energy[point] = e;
    };

    const std::int64_t count = static_cast<std::int64_t>(total);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t p = 0; p < count; ++p) {
            evaluate(static_cast<std::size_t>(p));
        }
    } else {
        for (std::int64_t p = 0; p < count; ++p) {
            evaluate(static_cast<std::size_t>(p));
        }
    }
    return table;
}

void write_landscape_csv(std::ostream& out, const LandscapeTable& table) {
    out << (table.dim == 1 ? "x,energy\n" : "x,y,energy\n");
    char buf[32];
    for (std::size_t p = 0; p < table.points(); ++p) {
        for (std::size_t k = 0; k < table.dim; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", table.coords[p * table.dim + k]);
            out << buf << ',';
        }
        std::snprintf(buf, sizeof buf, "%.17g", table.energy[p]);
        out << buf << '\n';
    }
}

} // namespace hopmem
