#include "hopmem/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hopmem/error.hpp"
#include "hopmem/numerics.hpp"
#include "hopmem/rng.hpp"

namespace hopmem {

namespace {

double step_norm(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_euclidean(a, b));
}

std::vector<double> sample_in_ball(Rng& rng, std::span<const double> center, double radius) {
    const std::size_t n = center.size();
    std::vector<double> dir(n);
    double norm_sq = 0.0;
    do {
        norm_sq = 0.0;
        for (double& d : dir) {
            d = rng.next_gaussian();
            norm_sq += d * d;
        }
    } while (norm_sq == 0.0);
    const double r = radius * std::pow(rng.next_unit(), 1.0 / static_cast<double>(n));
    const double scale = r / std::sqrt(norm_sq);
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = center[k] + dir[k] * scale;
    }
    return out;
}

PatternSet subset_patterns(const PatternSet& set, const std::vector<std::size_t>& members) {
    std::vector<double> data;
    data.reserve(members.size() * set.dim());
    for (std::size_t idx : members) {
        const auto row = set.row(idx);
        data.insert(data.end(), row.begin(), row.end());
    }
    return PatternSet::from_matrix(Matrix(set.dim(), std::move(data)));
}

// Asynchronous single-spin descent for the dense/exponential energies,
// tracked through the pattern overlaps m_i = rho_i . s.
struct OverlapDynamics {
    const PatternSet& set;
    EnergySpec::Variant variant;
    int order;
    std::vector<double> overlaps;

    OverlapDynamics(const PatternSet& s, EnergySpec::Variant v, int ord,
                    const std::vector<double>& spins)
        : set(s), variant(v), order(ord), overlaps(s.count(), 0.0) {
        for (std::size_t i = 0; i < set.count(); ++i) {
            const auto row = set.row(i);
            double acc = 0.0;
            for (std::size_t k = 0; k < row.size(); ++k) {
                acc += row[k] * spins[k];
            }
            overlaps[i] = acc;
        }
    }

    double energy_of(const std::vector<double>& m) const {
        if (variant == EnergySpec::Variant::DensePolynomial) {
            double acc = 0.0;
            for (double v : m) {
                acc += std::pow(v, static_cast<double>(order));
            }
            return -acc;
        }
        return -log_sum_exp(m);
    }

    double energy() const { return energy_of(overlaps); }

    // Energy after flipping spin k from value s_k.
    double flipped_energy(std::size_t k, double s_k, std::vector<double>& scratch) const {
        scratch = overlaps;
        for (std::size_t i = 0; i < set.count(); ++i) {
            scratch[i] -= 2.0 * s_k * set.row(i)[k];
        }
        return energy_of(scratch);
    }

    void apply_flip(std::size_t k, double s_k_old) {
        for (std::size_t i = 0; i < set.count(); ++i) {
            overlaps[i] -= 2.0 * s_k_old * set.row(i)[k];
        }
    }
};

std::vector<double> classical_field(const HebbianWeights& w, const std::vector<double>& spins) {
    std::vector<double> field(w.n, 0.0);
    for (std::size_t i = 0; i < w.n; ++i) {
        double acc = w.bias[i];
        const double* row = w.w.data() + i * w.n;
        for (std::size_t j = 0; j < w.n; ++j) {
            acc += row[j] * spins[j];
        }
        field[i] = acc;
    }
    return field;
}

bool binary_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return std::equal(a.begin(), a.end(), b.begin());
}

// One capacity trial for the binary families; returns exact recovery.
bool binary_capacity_trial(EnergySpec spec, std::size_t n, std::size_t d, double corruption,
                           Rng& rng) {
    std::vector<double> pats(d * n);
    for (double& v : pats) {
        v = rng.next_sign() ? 1.0 : -1.0;
    }
    std::vector<double> target(pats.begin(), pats.begin() + static_cast<std::ptrdiff_t>(n));
    std::vector<double> s = target;
    const std::size_t flips =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(corruption * static_cast<double>(n))));
    // Partial Fisher-Yates over the index range picks distinct positions.
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) {
        idx[i] = i;
    }
    for (std::size_t i = 0; i < flips; ++i) {
        const std::size_t j = i + rng.next_below(n - i);
        std::swap(idx[i], idx[j]);
        s[idx[i]] = -s[idx[i]];
    }

    const std::size_t max_sweeps = 60;
    if (spec.variant == EnergySpec::Variant::ClassicalBinary) {
        // W = (1/n) sum rho rho^T with zero diagonal; the field is tracked
        // through the overlaps m_p = rho_p . s so a spin costs O(d).
        std::vector<double> overlaps(d, 0.0);
        for (std::size_t p = 0; p < d; ++p) {
            const double* row = pats.data() + p * n;
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                acc += row[j] * s[j];
            }
            overlaps[p] = acc;
        }
        for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
            bool changed = false;
            for (std::size_t i = 0; i < n; ++i) {
                double field = 0.0;
                for (std::size_t p = 0; p < d; ++p) {
                    const double ri = pats[p * n + i];
                    field += ri * (overlaps[p] - ri * s[i]);
                }
                field /= static_cast<double>(n);
                const double next = field > 0.0 ? 1.0 : (field < 0.0 ? -1.0 : s[i]);
                if (next != s[i]) {
                    for (std::size_t p = 0; p < d; ++p) {
                        overlaps[p] += pats[p * n + i] * (next - s[i]);
                    }
                    s[i] = next;
                    changed = true;
                }
            }
            if (!changed) {
                break;
            }
        }
        return binary_equal(s, target);
    }

    PatternSet set = [&] {
        // Random +-1 rows can collide for tiny n; nudge duplicates apart by
        // resampling the whole trial instead of deduplicating.
        for (int attempt = 0; attempt < 100; ++attempt) {
            try {
                return PatternSet::from_matrix(Matrix(n, pats));
            } catch (const IngestError&) {
                for (double& v : pats) {
                    v = rng.next_sign() ? 1.0 : -1.0;
                }
                target.assign(pats.begin(), pats.begin() + static_cast<std::ptrdiff_t>(n));
                s = target;
                for (std::size_t i = 0; i < flips; ++i) {
                    const std::size_t j = rng.next_below(n);
                    s[j] = -s[j];
                }
            }
        }
        throw CapacityError("capacity_sweep: could not draw distinct binary patterns");
    }();

    OverlapDynamics dyn(set, spec.variant, spec.poly_order, s);
    std::vector<double> scratch;
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        bool changed = false;
        for (std::size_t k = 0; k < n; ++k) {
            const double e_now = dyn.energy();
            const double e_flip = dyn.flipped_energy(k, s[k], scratch);
            if (e_flip < e_now - 1e-12) {
                dyn.apply_flip(k, s[k]);
                s[k] = -s[k];
                changed = true;
            }
        }
        if (!changed) {
            break;
        }
    }
    return binary_equal(s, target);
}

// Continuous families: separated patterns, perturbed cue, softmax dynamics.
bool continuous_capacity_trial(const EnergySpec& spec, std::size_t n, std::size_t d, Rng& rng) {
    const double gap = 8.0;
    const double radius = 1.0;
    PatternSet set = generate_separated_patterns(d, n, gap, rng.next_u64());
    const std::size_t target = rng.next_below(d);
    std::vector<double> x0 = sample_in_ball(rng, set.row(target), radius);

    if (spec.variant == EnergySpec::Variant::Distance) {
        RetrievalParams params;
        params.beta = spec.beta;
        params.epsilon = 1e-3;
        const RetrievalResult res = retrieve(x0, set, params);
        return res.converged && res.attractor_index == target;
    }

    // Attention update x' = sum_i softmax(beta rho_i . x)_i rho_i.
    std::vector<double> x = x0;
    std::vector<double> scores(d);
    for (std::size_t iter = 0; iter < 500; ++iter) {
        for (std::size_t i = 0; i < d; ++i) {
            double acc = 0.0;
            const auto row = set.row(i);
            for (std::size_t k = 0; k < n; ++k) {
                acc += row[k] * x[k];
            }
            scores[i] = spec.beta * acc;
        }
        const std::vector<double> w = softmax(scores);
        std::vector<double> next(n, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            const auto row = set.row(i);
            for (std::size_t k = 0; k < n; ++k) {
                next[k] += w[i] * row[k];
            }
        }
        const double moved = step_norm(next, x);
        x = std::move(next);
        if (moved <= 1e-8) {
            break;
        }
    }
    return step_norm(x, set.row(target)) <= 1e-3 * 10.0;
}

} // namespace

std::vector<double> soft_retrieval_step(std::span<const double> x, const PatternSet& set,
                                        double beta, std::vector<double>* weights_out) {
    if (x.size() != set.dim()) {
        throw std::invalid_argument("soft_retrieval_step: dimension mismatch");
    }
    if (!(beta > 0.0)) {
        throw std::invalid_argument("soft_retrieval_step: beta must be positive");
    }
    std::vector<double> scores(set.count());
    for (std::size_t i = 0; i < set.count(); ++i) {
        scores[i] = -beta * squared_euclidean(x, set.row(i));
    }
    std::vector<double> weights = softmax(scores);
    std::vector<double> out(set.dim(), 0.0);
    for (std::size_t i = 0; i < set.count(); ++i) {
        const auto row = set.row(i);
        const double w = weights[i];
        for (std::size_t k = 0; k < out.size(); ++k) {
            out[k] += w * row[k];
        }
    }
    if (weights_out != nullptr) {
        *weights_out = std::move(weights);
    }
    return out;
}

RetrievalResult retrieve(std::span<const double> x0, const PatternSet& set,
                         const RetrievalParams& params, const StepObserver& observer) {
    if (!(params.tol > 0.0) || !(params.epsilon > 0.0) || params.max_iter < 1) {
        throw std::invalid_argument("retrieve: tol, epsilon and max_iter must be positive");
    }
    std::vector<double> x(x0.begin(), x0.end());
    std::vector<double> weights;
    RetrievalResult res;
    for (std::size_t iter = 1; iter <= params.max_iter; ++iter) {
        std::vector<double> next = soft_retrieval_step(x, set, params.beta, &weights);
        const double moved = step_norm(next, x);
        x = std::move(next);
        res.iterations = iter;
        res.final_step_norm = moved;
        if (observer) {
            observer(iter, x, weights);
        }
        if (moved <= params.tol) {
            res.converged = true;
            break;
        }
    }
    res.final_point = std::move(x);
    const NearestHit hit = nearest_pattern(res.final_point, set);
    if (std::sqrt(hit.sq_distance) <= params.epsilon) {
        res.attractor_index = hit.index;
    }
    return res;
}

LayeredTrajectory layered_retrieve(std::span<const double> x0, const PatternSet& set,
                                   const LayerAssignment& layers, const RetrievalParams& params) {
    const std::size_t l = layers.layer_count();
    if (l == 0 || layers.trust_radii.size() != l) {
        throw std::invalid_argument("layered_retrieve: one trust radius per layer");
    }
    for (double delta : layers.trust_radii) {
        if (std::isnan(delta) || delta < 0.0) {
            throw std::invalid_argument("layered_retrieve: trust radii must be non-negative");
        }
    }

    LayeredTrajectory traj;
    traj.points.emplace_back(x0.begin(), x0.end());
    traj.global_energy_trace.push_back(global_energy(x0, set, layers, params.beta).value);

    for (std::size_t t = 0; t < l; ++t) {
        const std::vector<double>& prev = traj.points.back();
        const PatternSet layer_set = subset_patterns(set, layers.members[t]);
        const double delta = layers.trust_radii[t];

        std::vector<double> next;
        if (delta == 0.0) {
            RetrievalResult res;
            res.final_point = prev;
            res.converged = true;
            res.iterations = 0;
            traj.per_layer.push_back(std::move(res));
            next = prev;
        } else {
            RetrievalResult res = retrieve(prev, layer_set, params);
            next = res.final_point;
            const double dsq = squared_euclidean(next, prev);
            if (std::isfinite(delta) && dsq > delta) {
                const double scale = std::sqrt(delta / dsq);
                for (std::size_t k = 0; k < next.size(); ++k) {
                    next[k] = prev[k] + (next[k] - prev[k]) * scale;
                }
            }
            traj.per_layer.push_back(std::move(res));
        }
        if (squared_euclidean(next, prev) > delta + 1e-9) {
            traj.trust_radii_respected = false;
        }
        traj.global_energy_trace.push_back(global_energy(next, set, layers, params.beta).value);
        traj.points.push_back(std::move(next));
    }
    return traj;
}

BinaryState binary_update(const BinaryState& s, const HebbianWeights& w, BinaryUpdateMode mode) {
    if (s.size() != w.n) {
        throw std::invalid_argument("binary_update: dimension mismatch");
    }
    std::vector<double> spins = s.spins();
    if (mode == BinaryUpdateMode::Synchronous) {
        const std::vector<double> field = classical_field(w, spins);
        for (std::size_t i = 0; i < w.n; ++i) {
            spins[i] = field[i] > 0.0 ? 1.0 : (field[i] < 0.0 ? -1.0 : spins[i]);
        }
    } else {
        for (std::size_t i = 0; i < w.n; ++i) {
            double acc = w.bias[i];
            const double* row = w.w.data() + i * w.n;
            for (std::size_t j = 0; j < w.n; ++j) {
                acc += row[j] * spins[j];
            }
            spins[i] = acc > 0.0 ? 1.0 : (acc < 0.0 ? -1.0 : spins[i]);
        }
    }
    return BinaryState(std::move(spins));
}

BinaryState binary_update(const BinaryState& s, const EnergySpec& spec, const PatternSet& set,
                          BinaryUpdateMode mode) {
    if (spec.variant != EnergySpec::Variant::DensePolynomial &&
        spec.variant != EnergySpec::Variant::ExponentialBinary) {
        throw std::domain_error("binary_update: spec must name a binary energy");
    }
    if (s.size() != set.dim()) {
        throw std::invalid_argument("binary_update: dimension mismatch");
    }
    std::vector<double> spins = s.spins();
    std::vector<double> scratch;
    if (mode == BinaryUpdateMode::Synchronous) {
        OverlapDynamics dyn(set, spec.variant, spec.poly_order, spins);
        const double e_now = dyn.energy();
        std::vector<double> out = spins;
        for (std::size_t k = 0; k < spins.size(); ++k) {
            if (dyn.flipped_energy(k, spins[k], scratch) < e_now - 1e-12) {
                out[k] = -spins[k];
            }
        }
        return BinaryState(std::move(out));
    }
    OverlapDynamics dyn(set, spec.variant, spec.poly_order, spins);
    for (std::size_t k = 0; k < spins.size(); ++k) {
        const double e_now = dyn.energy();
        if (dyn.flipped_energy(k, spins[k], scratch) < e_now - 1e-12) {
            dyn.apply_flip(k, spins[k]);
            spins[k] = -spins[k];
        }
    }
    return BinaryState(std::move(spins));
}

std::vector<BallReport> storage_check(const PatternSet& set, std::span<const double> radii,
                                      std::size_t samples_per_ball, const RetrievalParams& params,
                                      std::uint64_t seed, Exec exec) {
    if (samples_per_ball < 1) {
        throw std::invalid_argument("storage_check: need at least one sample per ball");
    }
    const BallSystem sys = check_storage_geometry(set, radii);
    if (!sys.separation_ok) {
        throw PreconditionError("storage_check: balls overlap; separation is required");
    }

    const std::size_t d = set.count();
    std::vector<BallReport> reports(d);
    const std::int64_t balls = static_cast<std::int64_t>(d);

    auto run_ball = [&](std::size_t i) {
        BallReport rep;
        rep.pattern_index = i;
        rep.samples = samples_per_ball;

        std::vector<std::vector<double>> finals(samples_per_ball);
        bool all_converged = true;
        for (std::size_t k = 0; k < samples_per_ball; ++k) {
            Rng rng(seed, static_cast<std::uint64_t>(i) * samples_per_ball + k);
            const std::vector<double> x0 = sample_in_ball(rng, set.row(i), radii[i]);
            RetrievalResult res = retrieve(x0, set, params);
            all_converged = all_converged && res.converged;
            if (res.attractor_index == i) {
                ++rep.converged_to_pattern;
            }
            finals[k] = std::move(res.final_point);
        }
        double max_pair = 0.0;
        for (std::size_t a = 0; a < samples_per_ball; ++a) {
            for (std::size_t b = a + 1; b < samples_per_ball; ++b) {
                max_pair = std::max(max_pair, squared_euclidean(finals[a], finals[b]));
            }
        }
        rep.max_pairwise_final = std::sqrt(max_pair);

        const RetrievalResult from_center = retrieve(set.row(i), set, params);
        rep.displacement = step_norm(from_center.final_point, set.row(i));

        rep.pass = all_converged && rep.converged_to_pattern == samples_per_ball &&
                   rep.max_pairwise_final <= 2.0 * params.epsilon;
        reports[i] = std::move(rep);
    };

    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < balls; ++i) {
            run_ball(static_cast<std::size_t>(i));
        }
    } else {
        for (std::int64_t i = 0; i < balls; ++i) {
            run_ball(static_cast<std::size_t>(i));
        }
    }
    return reports;
}

CapacityCurve capacity_sweep(const EnergySpec& spec, std::size_t n,
                             std::span<const std::size_t> counts, std::size_t trials,
                             double corruption, std::uint64_t seed, Exec exec) {
    if (trials < 1) {
        throw std::invalid_argument("capacity_sweep: trials must be >= 1");
    }
    if (!(corruption >= 0.0) || corruption >= 0.5) {
        throw std::invalid_argument("capacity_sweep: corruption must be in [0, 0.5)");
    }
    if (counts.empty()) {
        throw std::invalid_argument("capacity_sweep: empty count list");
    }

    const bool continuous = spec.variant == EnergySpec::Variant::Mchn ||
                            spec.variant == EnergySpec::Variant::Distance;

    CapacityCurve curve;
    curve.dimension = n;
    curve.counts.assign(counts.begin(), counts.end());
    curve.success_rates.resize(counts.size());

    for (std::size_t ci = 0; ci < counts.size(); ++ci) {
        const std::size_t d = counts[ci];
        if (d < 1) {
            throw std::invalid_argument("capacity_sweep: counts must be >= 1");
        }
        std::vector<unsigned char> success(trials, 0);
        const std::int64_t t_count = static_cast<std::int64_t>(trials);

        auto run_trial = [&](std::size_t t) {
            Rng rng(seed, static_cast<std::uint64_t>(ci) * trials + t);
            const bool ok = continuous ? continuous_capacity_trial(spec, n, d, rng)
                                       : binary_capacity_trial(spec, n, d, corruption, rng);
            success[t] = ok ? 1 : 0;
        };

        if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
            for (std::int64_t t = 0; t < t_count; ++t) {
                run_trial(static_cast<std::size_t>(t));
            }
        } else {
            for (std::int64_t t = 0; t < t_count; ++t) {
                run_trial(static_cast<std::size_t>(t));
            }
        }
        std::size_t hits = 0;
        for (unsigned char b : success) {
            hits += b;
        }
        curve.success_rates[ci] = static_cast<double>(hits) / static_cast<double>(trials);
        if (curve.success_rates[ci] >= 0.9) {
            curve.threshold_dstar = std::max(curve.threshold_dstar, d);
        }
    }
    return curve;
}

} // namespace hopmem
