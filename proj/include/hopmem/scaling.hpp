#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace hopmem {

struct ModelShape {
    std::uint64_t layers = 0;
    std::uint64_t d_emb = 0;
    std::uint64_t n_heads = 0;
    std::uint64_t d_ff = 0;
    std::uint64_t t_max = 0;
    std::uint64_t vocab = 0;
};

struct ParamBreakdown {
    std::uint64_t attention = 0;      // 3 l d^2
    std::uint64_t dense_and_norm = 0; // l d^2 + 2 l d
    std::uint64_t feed_forward = 0;   // l (2 d d_ff + d + d_ff)
    std::uint64_t embedding = 0;      // vocab * d
    std::uint64_t transformer_total = 0;
    double effective_a = 0.0; // transformer_total / (l d^2)
};

ParamBreakdown count_parameters(const ModelShape& shape);

struct KaplanFit {
    double n_c;
    double d_c;
    double alpha_n;
    double alpha_d;
};

struct ChinchillaFit {
    double e;
    double a;
    double b;
    double alpha;
    double beta;
};

// L(N, D) = ((N_c/N)^{alpha_N/alpha_D} + D_c/D)^{alpha_D}
double kaplan_loss(double n_params, double d_tokens, const KaplanFit& fit);

// L(N, D) = E + A / N^alpha + B / D^beta
double chinchilla_loss(double n_params, double d_tokens, const ChinchillaFit& fit);

// D* = sqrt(N / kappa) and its inverse kappa = N / D^2.
double optimal_data_balance(double n_params, double kappa);
double balance_ratio(double n_params, double d_tokens);

struct LossCurve {
    std::vector<std::uint64_t> steps; // strictly increasing
    std::vector<double> train_loss;
    std::vector<double> val_loss;
    double model_size = 0.0; // N
    double data_size = 0.0;  // D
};

// CSV `step,train_loss,val_loss` with optional '#' comments.
LossCurve load_loss_curve_csv(std::istream& in, double model_size, double data_size);

struct DstarSelection {
    bool found = false;
    double d_star = 0.0;
    std::size_t index = 0;             // into the curve list when found
    std::vector<double> per_curve_mse; // one per curve
};

// Per curve: locate the step of minimum validation loss, average the squared
// train-loss gap to that minimum over the following `window` samples
// (clipped at the end), and pick the smallest D with MSE <= sigma^2.
DstarSelection select_dstar(std::span<const LossCurve> curves, double sigma_sq,
                            std::size_t window);

} // namespace hopmem
