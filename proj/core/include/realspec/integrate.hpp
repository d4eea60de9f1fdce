#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace realspec::integrate {

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Integrand receiving the abscissa x together with the exact distances
/// x - a and b - x to the interval ends. Near an endpoint singularity the
/// distance is far more accurate than x - a computed in floating point.
using EndpointFunction = std::function<double(double x, double from_a, double to_b)>;

/// Double-exponential (tanh-sinh) rule on [a, b]. Levels halve the step;
/// the error estimate is the difference of the last two levels. Integrable
/// endpoint singularities are handled. Stops when error <= max(abs_tol,
/// rel_tol * |value|) or max_level is reached (converged = false).
Result tanh_sinh(const EndpointFunction& f, double a, double b, double abs_tol,
                 double rel_tol = 0.0, int max_level = 10);

Result tanh_sinh(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 double rel_tol = 0.0, int max_level = 10);

/// [a, inf) via x = a + t / (1 - t) followed by tanh-sinh on t in [0, 1].
/// The callback receives x and the distance x - a.
Result tanh_sinh_upper(const std::function<double(double x, double from_a)>& f, double a,
                       double abs_tol, double rel_tol = 0.0, int max_level = 10);

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton iteration on P_n).
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int n);

/// Fixed n-point Gauss-Legendre rule on [a, b].
double gauss_legendre(const std::function<double(double)>& f, double a, double b, int n);

/// Levin u-transform of a sequence of partial sums. Uses the last order + 1
/// terms (order + 2 partial sums). Returns {estimate, error}, the error
/// being the change against the transform one term earlier.
std::pair<double, double> levin_u(const std::vector<double>& partial_sums, int order);

}  // namespace realspec::integrate
