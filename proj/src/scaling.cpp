#include "hopmem/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hopmem/error.hpp"

namespace hopmem {

ParamBreakdown count_parameters(const ModelShape& shape) {
    if (shape.layers == 0 || shape.d_emb == 0 || shape.n_heads == 0 || shape.d_ff == 0 ||
        shape.t_max == 0 || shape.vocab == 0) {
        throw std::invalid_argument("count_parameters: all shape fields must be positive");
    }
    if (shape.d_emb % shape.n_heads != 0) {
        throw std::invalid_argument("count_parameters: d_emb must divide evenly across heads");
    }
    const std::uint64_t l = shape.layers;
    const std::uint64_t d = shape.d_emb;
    ParamBreakdown out;
    out.attention = 3 * l * d * d;
    out.dense_and_norm = l * d * d + 2 * l * d;
    out.feed_forward = l * (2 * d * shape.d_ff + d + shape.d_ff);
    out.embedding = shape.vocab * d;
    out.transformer_total = out.attention + out.dense_and_norm + out.feed_forward;
    out.effective_a =
        static_cast<double>(out.transformer_total) / (static_cast<double>(l) * static_cast<double>(d) * static_cast<double>(d));
    return out;
}

double kaplan_loss(double n_params, double d_tokens, const KaplanFit& fit) {
    if (!(n_params > 0.0) || !(d_tokens > 0.0)) {
        throw std::domain_error("kaplan_loss: N and D must be positive");
    }
    if (!(fit.alpha_n > 0.0) || !(fit.alpha_d > 0.0) || !(fit.n_c > 0.0) || !(fit.d_c >= 0.0)) {
        throw std::invalid_argument("kaplan_loss: invalid fit constants");
    }
    const double term = std::pow(fit.n_c / n_params, fit.alpha_n / fit.alpha_d) + fit.d_c / d_tokens;
    return std::pow(term, fit.alpha_d);
}

double chinchilla_loss(double n_params, double d_tokens, const ChinchillaFit& fit) {
    if (!(n_params > 0.0) || !(d_tokens > 0.0)) {
        throw std::domain_error("chinchilla_loss: N and D must be positive");
    }
    if (!(fit.alpha > 0.0) || !(fit.beta > 0.0) || fit.e < 0.0) {
        throw std::invalid_argument("chinchilla_loss: invalid fit constants");
    }
    return fit.e + fit.a / std::pow(n_params, fit.alpha) + fit.b / std::pow(d_tokens, fit.beta);
}

double optimal_data_balance(double n_params, double kappa) {
    if (!(n_params > 0.0) || !(kappa > 0.0)) {
        throw std::domain_error("optimal_data_balance: inputs must be positive");
    }
    return std::sqrt(n_params / kappa);
}

double balance_ratio(double n_params, double d_tokens) {
    if (!(n_params > 0.0) || !(d_tokens > 0.0)) {
        throw std::domain_error("balance_ratio: inputs must be positive");
    }
    return n_params / (d_tokens * d_tokens);
}

LossCurve load_loss_curve_csv(std::istream& in, double model_size, double data_size) {
    LossCurve curve;
    curve.model_size = model_size;
    curve.data_size = data_size;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') {
            continue;
        }
        std::istringstream row(line);
        std::string cell;
        double vals[3];
        for (int k = 0; k < 3; ++k) {
            if (!std::getline(row, cell, ',')) {
                throw IngestError(lineno, "expected step,train_loss,val_loss");
            }
            try {
                vals[k] = std::stod(cell);
            } catch (const std::exception&) {
                throw IngestError(lineno, "malformed number '" + cell + "'");
            }
        }
        if (std::getline(row, cell, ',')) {
            throw IngestError(lineno, "trailing fields");
        }
        const auto step = static_cast<std::uint64_t>(vals[0]);
        if (!curve.steps.empty() && step <= curve.steps.back()) {
            throw IngestError(lineno, "steps must be strictly increasing");
        }
        curve.steps.push_back(step);
        curve.train_loss.push_back(vals[1]);
        curve.val_loss.push_back(vals[2]);
    }
    if (curve.steps.empty()) {
        throw IngestError(lineno, "no data rows");
    }
    return curve;
}

DstarSelection select_dstar(std::span<const LossCurve> curves, double sigma_sq,
                            std::size_t window) {
    if (curves.empty()) {
        throw std::invalid_argument("select_dstar: empty curve list");
    }
    if (!(sigma_sq > 0.0)) {
        throw std::invalid_argument("select_dstar: threshold must be positive");
    }
    if (window < 1) {
        throw std::invalid_argument("select_dstar: window must be >= 1");
    }
    for (std::size_t i = 1; i < curves.size(); ++i) {
        if (!(curves[i].data_size > curves[i - 1].data_size)) {
            throw std::invalid_argument("select_dstar: curves must be sorted by increasing D");
        }
    }

    DstarSelection sel;
    sel.per_curve_mse.reserve(curves.size());
    for (const LossCurve& curve : curves) {
        if (curve.val_loss.empty() || curve.val_loss.size() != curve.train_loss.size()) {
            throw std::invalid_argument("select_dstar: malformed curve");
        }
        const std::size_t min_at = static_cast<std::size_t>(
            std::min_element(curve.val_loss.begin(), curve.val_loss.end()) -
            curve.val_loss.begin());
        const double min_val = curve.val_loss[min_at];
        const std::size_t end = std::min(curve.train_loss.size(), min_at + window);
        double acc = 0.0;
        std::size_t used = 0;
        for (std::size_t k = min_at; k < end; ++k) {
            const double diff = curve.train_loss[k] - min_val;
            acc += diff * diff;
            ++used;
        }
        sel.per_curve_mse.push_back(acc / static_cast<double>(used));
    }
    for (std::size_t i = 0; i < curves.size(); ++i) {
        if (sel.per_curve_mse[i] <= sigma_sq) {
            sel.found = true;
            sel.index = i;
            sel.d_star = curves[i].data_size;
            break;
        }
    }
    return sel;
}

} // namespace hopmem
