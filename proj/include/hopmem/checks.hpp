#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hopmem/exec.hpp"

namespace hopmem {

struct CheckConfig {
    std::size_t instances = 500;       // random (x, pattern set) instances
    std::size_t eglob_instances = 200; // per layer count
    std::size_t lemma_vectors = 1000;
    std::size_t max_dim = 16;
    std::size_t max_count = 64;
    double entry_range = 10.0; // entries drawn from [-range, range]
    std::uint64_t seed = 20240817;
    bool corrupt_mchn = false; // fault injection: drop the x.x/2 term
    Exec exec = Exec::Parallel;
};

struct SuiteResult {
    std::string name;
    std::size_t instances = 0;
    // Most binding margin across all checked inequalities; pass requires it
    // to clear the suite's rounding allowance (and strict inequalities to
    // stay strictly positive).
    double worst_slack = 0.0;
    bool pass = false;
    double seconds = 0.0;
};

SuiteResult check_distance_energy_brackets(const CheckConfig& cfg); // g-logd <= E <= g
SuiteResult check_hopfield_gap_bound(const CheckConfig& cfg);       // |E-(2M-logd)| <= spread
SuiteResult check_hopfield_gap_equal_norms(const CheckConfig& cfg); // spread 0 => equality
SuiteResult check_two_sided_bound(const CheckConfig& cfg);          // bounds on g - 2M
SuiteResult check_global_energy_bounds(const CheckConfig& cfg);     // l in {1,2,4}
SuiteResult check_lse_bounds(const CheckConfig& cfg);
SuiteResult check_smooth_min_bounds(const CheckConfig& cfg);
SuiteResult check_lse_lipschitz(const CheckConfig& cfg);
SuiteResult check_lse_convexity(const CheckConfig& cfg);
SuiteResult check_softmax_gradient(const CheckConfig& cfg);
SuiteResult check_gamma_bounds(const CheckConfig& cfg);
SuiteResult check_gamma_complement(const CheckConfig& cfg);
SuiteResult check_stirling_accuracy(const CheckConfig& cfg);
SuiteResult check_loss_bound(const CheckConfig& cfg);

std::vector<SuiteResult> run_all_checks(const CheckConfig& cfg);

} // namespace hopmem
