#include "hopmem/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hopmem {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

double checked_max(std::span<const double> v, const char* op) {
    if (v.empty()) {
        throw std::invalid_argument(std::string(op) + ": empty input");
    }
    double m = -std::numeric_limits<double>::infinity();
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument(std::string(op) + ": non-finite entry");
        }
        m = std::max(m, x);
    }
    return m;
}

// Series for P(a,x) = gamma(a,x)/Gamma(a), valid for x < a + 1.
// Returns log P to keep large-a cases representable.
double log_gamma_p_series(double a, double x) {
    if (x <= 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 1000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-17) {
            break;
        }
    }
    return std::log(sum) + a * std::log(x) - x - std::lgamma(a);
}

// Lentz continued fraction for Q(a,x) = Gamma(a,x)/Gamma(a), x >= a + 1.
double log_gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) {
            break;
        }
    }
    return std::log(h) + a * std::log(x) - x - std::lgamma(a);
}

void check_gamma_args(double n, double r) {
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw std::domain_error("incomplete gamma: shape must be positive");
    }
    if (!(r >= 0.0)) {
        throw std::domain_error("incomplete gamma: cutoff must be non-negative");
    }
}

} // namespace

double log_sum_exp(std::span<const double> v) {
    const double m = checked_max(v, "log_sum_exp");
    double sum = 0.0;
    for (double x : v) {
        sum += std::exp(x - m);
    }
    return m + std::log(sum);
}

double smooth_min(std::span<const double> v) {
    if (v.empty()) {
        throw std::invalid_argument("smooth_min: empty input");
    }
    double lo = std::numeric_limits<double>::infinity();
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument("smooth_min: non-finite entry");
        }
        lo = std::min(lo, x);
    }
    double sum = 0.0;
    for (double x : v) {
        sum += std::exp(lo - x);
    }
    return lo - std::log(sum);
}

std::vector<double> softmax(std::span<const double> v) {
    const double m = checked_max(v, "softmax");
    std::vector<double> out(v.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = std::exp(v[i] - m);
        sum += out[i];
    }
    for (double& w : out) {
        w /= sum;
    }
    return out;
}

double squared_euclidean(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("squared_euclidean: length mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        acc += d * d;
    }
    return acc;
}

double regularized_gamma_p(double a, double x) {
    check_gamma_args(a, x);
    if (x == 0.0) {
        return 0.0;
    }
    if (x < a + 1.0) {
        return std::exp(log_gamma_p_series(a, x));
    }
    return 1.0 - std::exp(log_gamma_q_cf(a, x));
}

double regularized_gamma_q(double a, double x) {
    check_gamma_args(a, x);
    if (x == 0.0) {
        return 1.0;
    }
    if (x < a + 1.0) {
        return 1.0 - std::exp(log_gamma_p_series(a, x));
    }
    return std::exp(log_gamma_q_cf(a, x));
}

double log_regularized_gamma_p(double a, double x) {
    check_gamma_args(a, x);
    if (x == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    if (x < a + 1.0) {
        return log_gamma_p_series(a, x);
    }
    return std::log1p(-std::exp(log_gamma_q_cf(a, x)));
}

double lower_incomplete_gamma(double n, double r) {
    check_gamma_args(n, r);
    if (r == 0.0) {
        return 0.0;
    }
    if (r < n + 1.0) {
        // gamma(n,r) = sum * r^n e^{-r}, from the series for P without the
        // 1/Gamma(n) factor.
        return std::exp(log_gamma_p_series(n, r) + std::lgamma(n));
    }
    return gamma_function(n) - upper_incomplete_gamma(n, r);
}

double upper_incomplete_gamma(double n, double r) {
    check_gamma_args(n, r);
    if (r == 0.0) {
        return gamma_function(n);
    }
    if (r < n + 1.0) {
        return gamma_function(n) - lower_incomplete_gamma(n, r);
    }
    return std::exp(log_gamma_q_cf(n, r) + std::lgamma(n));
}

double gamma_function(double z) {
    if (!(z > 0.0) || !std::isfinite(z)) {
        throw std::domain_error("gamma_function: argument must be positive");
    }
    // Lanczos, g = 7, 9 terms.
    static const double coeff[9] = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    };
    if (z < 0.5) {
        // Reflection keeps the approximation in its accurate range.
        return kPi / (std::sin(kPi * z) * gamma_function(1.0 - z));
    }
    const double zz = z - 1.0;
    double x = coeff[0];
    for (int i = 1; i < 9; ++i) {
        x += coeff[i] / (zz + static_cast<double>(i));
    }
    const double t = zz + 7.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, zz + 0.5) * std::exp(-t) * x;
}

double stirling_gamma(double z) {
    if (!(z > 0.0) || !std::isfinite(z)) {
        throw std::domain_error("stirling_gamma: argument must be positive");
    }
    return std::sqrt(2.0 * kPi / z) * std::pow(z / std::exp(1.0), z);
}

double log_stirling_gamma(double z) {
    if (!(z > 0.0) || !std::isfinite(z)) {
        throw std::domain_error("log_stirling_gamma: argument must be positive");
    }
    return 0.5 * std::log(2.0 * kPi / z) + z * (std::log(z) - 1.0);
}

double log_ball_volume(int n, double r) {
    if (n < 1) {
        throw std::invalid_argument("ball_volume: dimension must be >= 1");
    }
    if (!(r >= 0.0)) {
        throw std::invalid_argument("ball_volume: radius must be non-negative");
    }
    if (r == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    const double half = 0.5 * static_cast<double>(n);
    return half * std::log(kPi) + static_cast<double>(n) * std::log(r) - std::lgamma(half + 1.0);
}

double ball_volume(int n, double r) {
    if (r == 0.0) {
        if (n < 1) {
            throw std::invalid_argument("ball_volume: dimension must be >= 1");
        }
        return 0.0;
    }
    return std::exp(log_ball_volume(n, r));
}

double log_sphere_area(int n) {
    if (n < 1) {
        throw std::invalid_argument("sphere_area: dimension must be >= 1");
    }
    const double half = 0.5 * static_cast<double>(n);
    return std::log(2.0) + half * std::log(kPi) - std::lgamma(half);
}

double sphere_area(int n) {
    return std::exp(log_sphere_area(n));
}

} // namespace hopmem
