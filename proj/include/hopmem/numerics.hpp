#pragma once

#include <span>
#include <vector>

namespace hopmem {

// log(sum_i exp(v[i])), max-shifted so entries up to the representable
// maximum cannot overflow. Rejects empty and non-finite input.
double log_sum_exp(std::span<const double> v);

// -log_sum_exp(-v); satisfies min(v) - log(len) <= result <= min(v), the
// upper bound strict for len >= 2.
double smooth_min(std::span<const double> v);

// Gradient of log_sum_exp: positive entries summing to 1, shift-invariant.
std::vector<double> softmax(std::span<const double> v);

double squared_euclidean(std::span<const double> x, std::span<const double> y);

// Lower/upper incomplete gamma with the e^{-t} integrand: series expansion
// for r < n + 1, Lentz continued fraction otherwise. n > 0, r >= 0.
double lower_incomplete_gamma(double n, double r);
double upper_incomplete_gamma(double n, double r);

// Regularized forms P = gamma(a,x)/Gamma(a), Q = 1 - P. The log variant
// stays meaningful when P underflows (large a, x << a).
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);
double log_regularized_gamma_p(double a, double x);

// Gamma function for z > 0 (Lanczos, relative error well under 1e-10 on
// [0.5, 170]) and the leading Stirling form sqrt(2*pi/z) * (z/e)^z.
double gamma_function(double z);
double stirling_gamma(double z);
double log_stirling_gamma(double z);

// Volume of the n-ball of radius r and surface measure of the unit sphere
// in R^n. Computed through log space; the log variants stay finite where
// the value itself under/overflows double.
double ball_volume(int n, double r);
double log_ball_volume(int n, double r);
double sphere_area(int n);
double log_sphere_area(int n);

} // namespace hopmem
