#pragma once

// Test-side reference computations, kept independent of the library paths
// they are used to check.

#include <cmath>
#include <cstddef>
#include <functional>

namespace oracle {

// Adaptive Simpson quadrature.
inline double simpson_slice(const std::function<double(double)>& f, double a, double b, double fa,
                            double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson_slice(f, a, m, fa, flm, fm);
    const double right = simpson_slice(f, m, b, fm, frm, fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = simpson_slice(f, a, b, fa, fm, fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Direct high-precision-ish sums for small inputs.
inline double direct_log_sum_exp(const double* v, std::size_t n) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        acc += std::exp(static_cast<long double>(v[i]));
    }
    return static_cast<double>(std::log(acc));
}

} // namespace oracle
