#pragma once

// Special functions used by the numeric core. Everything here is implemented
// in-repo; accuracy targets are stated per function and checked in
// tests/test_special.cpp against independent implementations.

namespace realspec::special {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kLn2 = 0.693147180559945309417232121458176568;
inline constexpr double kEulerGamma = 0.577215664901532860606512090082402431;

/// ln Gamma(x) for x > 0. Lanczos (g = 7, 9 terms) below 15, Stirling series
/// above. Relative error below 1e-14 away from the zeros at x = 1, 2.
double log_gamma(double x);

/// Gamma(x) for x > 0 (overflows to +inf beyond x ~ 171.6).
double gamma_fn(double x);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), without cancellation.
double gamma_q(double a, double x);

/// Modified Bessel function K_0(x), x > 0. Ascending series for x <= 2,
/// asymptotic expansion for x >= 25, exponentially convergent trapezoidal
/// rule on K_0(x) = int_0^inf exp(-x cosh t) dt in between. Relative error
/// <= 1e-10 (observed ~1e-15).
double bessel_k0(double x);

/// ln K_nu(x) for real nu and x > 0. Half-integer orders use the terminating
/// closed form; all other orders the trapezoidal rule on the integral
/// representation, evaluated in log space so large orders do not overflow.
double log_bessel_k(double nu, double x);

/// K_nu(x) = exp(log_bessel_k(nu, x)).
double bessel_k(double nu, double x);

}  // namespace realspec::special
