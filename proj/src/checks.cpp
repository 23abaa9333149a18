#include "hopmem/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

#include "hopmem/energy.hpp"
#include "hopmem/numerics.hpp"
#include "hopmem/partition.hpp"
#include "hopmem/patterns.hpp"
#include "hopmem/rng.hpp"

namespace hopmem {

namespace {

constexpr double kRoundingSlack = 1e-9;

struct Instance {
    PatternSet set;
    std::vector<double> x;
};

Instance make_instance(const CheckConfig& cfg, std::uint64_t stream) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        Rng rng(cfg.seed, stream * 1000003ull + attempt);
        const std::size_t n = 1 + rng.next_below(cfg.max_dim);
        const std::size_t d = 1 + rng.next_below(cfg.max_count);
        std::vector<double> data(n * d);
        for (double& v : data) {
            v = rng.next_uniform(-cfg.entry_range, cfg.entry_range);
        }
        std::vector<double> x(n);
        for (double& v : x) {
            v = rng.next_uniform(-cfg.entry_range, cfg.entry_range);
        }
        try {
            return Instance{PatternSet::from_matrix(Matrix(n, std::move(data))), std::move(x)};
        } catch (const std::exception&) {
            // duplicate rows are measure-zero; retry with a shifted stream
        }
    }
}

double mchn_for_checks(std::span<const double> x, const PatternSet& set, double beta,
                       bool corrupt) {
    return mchn_lse_term(x, set, beta) + mchn_regularizer(x, set, beta, !corrupt);
}

template <typename Fn>
double min_over_instances(const CheckConfig& cfg, std::size_t count, Fn&& per_instance) {
    std::vector<double> slack(count, std::numeric_limits<double>::infinity());
    const std::int64_t total = static_cast<std::int64_t>(count);
    if (cfg.exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t k = 0; k < total; ++k) {
            slack[static_cast<std::size_t>(k)] = per_instance(static_cast<std::uint64_t>(k));
        }
    } else {
        for (std::int64_t k = 0; k < total; ++k) {
            slack[static_cast<std::size_t>(k)] = per_instance(static_cast<std::uint64_t>(k));
        }
    }
    return *std::min_element(slack.begin(), slack.end());
}

class Timer {
public:
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

SuiteResult finish(std::string name, std::size_t instances, double worst, const Timer& timer,
                   double allowance = kRoundingSlack) {
    SuiteResult r;
    r.name = std::move(name);
    r.instances = instances;
    r.worst_slack = worst;
    r.pass = worst >= -allowance;
    r.seconds = timer.elapsed();
    return r;
}

std::vector<double> random_vector(Rng& rng, std::size_t min_len, std::size_t max_len,
                                  double range) {
    const std::size_t len = min_len + rng.next_below(max_len - min_len + 1);
    std::vector<double> v(len);
    for (double& x : v) {
        x = rng.next_uniform(-range, range);
    }
    return v;
}

} // namespace

SuiteResult check_distance_energy_brackets(const CheckConfig& cfg) {
    Timer timer;
    const double worst = min_over_instances(cfg, cfg.instances, [&](std::uint64_t k) {
        const Instance inst = make_instance(cfg, k);
        const double g = g_energy(inst.x, inst.set);
        const double e = layer_energy(inst.x, inst.set, 1.0);
        const double logd = std::log(static_cast<double>(inst.set.count()));
        return std::min(e - (g - logd), g - e);
    });
    return finish("distance energy brackets nn objective", cfg.instances, worst, timer);
}

SuiteResult check_hopfield_gap_bound(const CheckConfig& cfg) {
    Timer timer;
    const double worst = min_over_instances(cfg, cfg.instances, [&](std::uint64_t k) {
        const Instance inst = make_instance(cfg, k);
        const double e = layer_energy(inst.x, inst.set, 1.0);
        const double m = mchn_for_checks(inst.x, inst.set, 2.0, cfg.corrupt_mchn);
        const double logd = std::log(static_cast<double>(inst.set.count()));
        double min_sq = std::numeric_limits<double>::infinity();
        double max_sq = 0.0;
        for (std::size_t i = 0; i < inst.set.count(); ++i) {
            double nsq = 0.0;
            for (double v : inst.set.row(i)) {
                nsq += v * v;
            }
            min_sq = std::min(min_sq, nsq);
            max_sq = std::max(max_sq, nsq);
        }
        return (max_sq - min_sq) - std::fabs(e - (2.0 * m - logd));
    });
    return finish("hopfield energy gap bounded by norm spread", cfg.instances, worst, timer);
}

SuiteResult check_hopfield_gap_equal_norms(const CheckConfig& cfg) {
    Timer timer;
    const double worst = min_over_instances(cfg, cfg.instances, [&](std::uint64_t k) {
        Rng rng(cfg.seed, 811 + k);
        const std::size_t n = 2 + rng.next_below(cfg.max_dim - 1);
        const std::size_t d = 1 + rng.next_below(cfg.max_count);
        const double norm = rng.next_uniform(0.5, cfg.entry_range);
        std::vector<double> data(n * d);
        for (std::size_t i = 0; i < d; ++i) {
            double nsq = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                data[i * n + j] = rng.next_gaussian();
                nsq += data[i * n + j] * data[i * n + j];
            }
            const double scale = norm / std::sqrt(nsq);
            for (std::size_t j = 0; j < n; ++j) {
                data[i * n + j] *= scale;
            }
        }
        PatternSet set = PatternSet::from_matrix(Matrix(n, std::move(data)));
        std::vector<double> x(n);
        for (double& v : x) {
            v = rng.next_uniform(-cfg.entry_range, cfg.entry_range);
        }
        const double e = layer_energy(x, set, 1.0);
        const double m = mchn_for_checks(x, set, 2.0, cfg.corrupt_mchn);
        const double logd = std::log(static_cast<double>(set.count()));
        const double gap = std::fabs(e - (2.0 * m - logd));
        return kRoundingSlack - gap;
    });
    return finish("hopfield gap collapses for equal norms", cfg.instances, worst, timer, 0.0);
}

SuiteResult check_two_sided_bound(const CheckConfig& cfg) {
    Timer timer;
    const double worst = min_over_instances(cfg, cfg.instances, [&](std::uint64_t k) {
        const Instance inst = make_instance(cfg, k);
        const PropositionReport rep = proposition_report(inst.x, inst.set);
        return std::min(rep.p3_lower_slack, rep.p3_upper_slack);
    });
    return finish("two sided bound on nn minus hopfield energy", cfg.instances, worst, timer);
}

SuiteResult check_global_energy_bounds(const CheckConfig& cfg) {
    Timer timer;
    const std::size_t layer_counts[3] = {1, 2, 4};
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t l : layer_counts) {
        const double suite = min_over_instances(cfg, cfg.eglob_instances, [&, l](std::uint64_t k) {
            CheckConfig local = cfg;
            local.seed = cfg.seed + 7919 * l;
            Instance inst = make_instance(local, k);
            if (inst.set.count() < l) {
                return std::numeric_limits<double>::infinity(); // cannot split, skip
            }
            std::vector<double> radii(l, 1.0);
            const LayerAssignment layers =
                partition_layers(inst.set, l, LayerStrategy::RoundRobin, radii);
            const GlobalEnergyResult res = global_energy(inst.x, inst.set, layers, 1.0);
            const double layer_min =
                *std::min_element(res.layer_energies.begin(), res.layer_energies.end());
            const double logl = std::log(static_cast<double>(l));
            const double lower = res.value - (layer_min - logl);
            if (l == 1) {
                // Degenerate case: the bound collapses to equality.
                return kRoundingSlack - std::fabs(res.value - layer_min);
            }
            const double upper = layer_min - res.value; // strict in exact arithmetic
            const double gap_c_ok = std::min(res.gap_c, logl - res.gap_c);
            return std::min({lower, upper, gap_c_ok});
        });
        worst = std::min(worst, suite);
    }
    return finish("global energy bracketed by layer minimum", 3 * cfg.eglob_instances, worst,
                  timer);
}

SuiteResult check_lse_bounds(const CheckConfig& cfg) {
    Timer timer;
    const double worst = min_over_instances(cfg, cfg.lemma_vectors, [&](std::uint64_t k) {
        Rng rng(cfg.seed, 101 + k);
        const std::vector<double> v = random_vector(rng, 2, 32, cfg.entry_range);
        const double m = *std::max_element(v.begin(), v.end());
        const double lse = log_sum_exp(v);
        const double strict_lower = lse - m; // must stay strictly positive
        const double upper = m + std::log(static_cast<double>(v.size())) - lse;
        return std::min(strict_lower > 0.0 ? strict_lower : -1.0, upper);
    });
    return finish("lse between max and max plus log n", cfg.lemma_vectors, worst, timer);
}

SuiteResult check_smooth_min_bounds(const CheckConfig& cfg) {
    Timer timer;
    const double worst = min_over_instances(cfg, cfg.lemma_vectors, [&](std::uint64_t k) {
        Rng rng(cfg.seed, 211 + k);
        const std::vector<double> v = random_vector(rng, 2, 32, cfg.entry_range);
        const double m = *std::min_element(v.begin(), v.end());
        const double sm = smooth_min(v);
        const double lower = sm - (m - std::log(static_cast<double>(v.size())));
        const double strict_upper = m - sm;
        return std::min(lower, strict_upper > 0.0 ? strict_upper : -1.0);
    });
    return finish("smooth min between min minus log n and min", cfg.lemma_vectors, worst, timer);
}

SuiteResult check_lse_lipschitz(const CheckConfig& cfg) {
    Timer timer;
    const double worst = min_over_instances(cfg, cfg.lemma_vectors, [&](std::uint64_t k) {
        Rng rng(cfg.seed, 307 + k);
        const std::vector<double> x = random_vector(rng, 1, 32, cfg.entry_range);
        std::vector<double> y(x.size());
        for (double& v : y) {
            v = rng.next_uniform(-cfg.entry_range, cfg.entry_range);
        }
        double inf_norm = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            inf_norm = std::max(inf_norm, std::fabs(x[i] - y[i]));
        }
        return inf_norm - std::fabs(log_sum_exp(x) - log_sum_exp(y));
    });
    return finish("lse is 1-lipschitz in the sup norm", cfg.lemma_vectors, worst, timer);
}

SuiteResult check_lse_convexity(const CheckConfig& cfg) {
    Timer timer;
    const double worst = min_over_instances(cfg, cfg.lemma_vectors, [&](std::uint64_t k) {
        Rng rng(cfg.seed, 401 + k);
        const std::vector<double> x = random_vector(rng, 1, 32, cfg.entry_range);
        std::vector<double> y(x.size());
        for (double& v : y) {
            v = rng.next_uniform(-cfg.entry_range, cfg.entry_range);
        }
        const double t = rng.next_unit();
        std::vector<double> mix(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            mix[i] = t * x[i] + (1.0 - t) * y[i];
        }
        return t * log_sum_exp(x) + (1.0 - t) * log_sum_exp(y) - log_sum_exp(mix);
    });
    return finish("lse convexity inequality", cfg.lemma_vectors, worst, timer);
}

SuiteResult check_softmax_gradient(const CheckConfig& cfg) {
    Timer timer;
    const double tolerance = 1e-6;
    const double step = 1e-5;
    const double worst = min_over_instances(cfg, cfg.lemma_vectors, [&](std::uint64_t k) {
        Rng rng(cfg.seed, 503 + k);
        std::vector<double> v = random_vector(rng, 1, 16, cfg.entry_range);
        const std::vector<double> w = softmax(v);
        double max_diff = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double keep = v[i];
            v[i] = keep + step;
            const double hi = log_sum_exp(v);
            v[i] = keep - step;
            const double lo = log_sum_exp(v);
            v[i] = keep;
            max_diff = std::max(max_diff, std::fabs((hi - lo) / (2.0 * step) - w[i]));
        }
        return tolerance - max_diff;
    });
    return finish("softmax equals lse gradient", cfg.lemma_vectors, worst, timer, 0.0);
}

SuiteResult check_gamma_bounds(const CheckConfig& cfg) {
    Timer timer;
    (void)cfg;
    const double radii[4] = {0.1, 1.0, 5.0, 20.0};
    double worst = std::numeric_limits<double>::infinity();
    std::size_t cases = 0;
    for (int n = 1; n <= 20; ++n) {
        for (double r : radii) {
            const double g = lower_incomplete_gamma(static_cast<double>(n), r);
            const double cap = std::pow(r, n) / static_cast<double>(n);
            const double floor = std::exp(-r) * cap;
            const double scale = std::max(1.0, cap);
            worst = std::min(worst, (g - floor) / scale);
            worst = std::min(worst, (cap - g) / scale);
            ++cases;
        }
    }
    return finish("incomplete gamma between integrand bounds", cases, worst, timer);
}

SuiteResult check_gamma_complement(const CheckConfig& cfg) {
    Timer timer;
    const double radii[4] = {0.1, 1.0, 5.0, 20.0};
    double worst = std::numeric_limits<double>::infinity();
    std::size_t cases = 0;
    for (int n = 1; n <= 20; ++n) {
        for (double r : radii) {
            const double total = gamma_function(static_cast<double>(n));
            const double sum = lower_incomplete_gamma(static_cast<double>(n), r) +
                               upper_incomplete_gamma(static_cast<double>(n), r);
            worst = std::min(worst, 1e-10 - std::fabs(sum / total - 1.0));
            ++cases;
        }
    }
    (void)cfg;
    return finish("lower plus upper gamma recovers gamma", cases, worst, timer, 0.0);
}

SuiteResult check_stirling_accuracy(const CheckConfig& cfg) {
    Timer timer;
    (void)cfg;
    const double exact = gamma_function(11.0); // 10! = 3628800
    const double approx = stirling_gamma(11.0);
    const double worst = 0.01 - std::fabs(approx / exact - 1.0);
    return finish("stirling within one percent at z = 11", 1, worst, timer, 0.0);
}

SuiteResult check_loss_bound(const CheckConfig& cfg) {
    Timer timer;
    (void)cfg;
    double worst = std::numeric_limits<double>::infinity();
    const int steps = 601;
    for (int i = 0; i < steps; ++i) {
        const double z =
            std::pow(10.0, -3.0 + 6.0 * static_cast<double>(i) / static_cast<double>(steps - 1));
        const double f = loss_from_partition(z);
        worst = std::min(worst, f - 1.0);
        if (std::fabs(z - 1.0) > 1e-6) {
            worst = std::min(worst, f - 1.0 > 0.0 ? f - 1.0 : -1.0);
        }
    }
    worst = std::min(worst, 1e-12 - std::fabs(loss_from_partition(1.0) - 1.0));
    return finish("partition loss floor at one", steps, worst, timer, 1e-12);
}

std::vector<SuiteResult> run_all_checks(const CheckConfig& cfg) {
    return {
        check_distance_energy_brackets(cfg),
        check_hopfield_gap_bound(cfg),
        check_hopfield_gap_equal_norms(cfg),
        check_two_sided_bound(cfg),
        check_global_energy_bounds(cfg),
        check_lse_bounds(cfg),
        check_smooth_min_bounds(cfg),
        check_lse_lipschitz(cfg),
        check_lse_convexity(cfg),
        check_softmax_gradient(cfg),
        check_gamma_bounds(cfg),
        check_gamma_complement(cfg),
        check_stirling_accuracy(cfg),
        check_loss_bound(cfg),
    };
}

} // namespace hopmem
