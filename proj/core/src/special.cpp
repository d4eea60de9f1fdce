#include "realspec/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "realspec/error.hpp"

namespace realspec::special {
namespace {

constexpr double kHalfLog2Pi = 0.918938533204672741780329736405617640;

// Lanczos coefficients, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_log_gamma(double x) {
  // valid for x >= 0.5
  const double xm1 = x - 1.0;
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (xm1 + static_cast<double>(i));
  const double t = xm1 + kLanczosG + 0.5;
  return kHalfLog2Pi + (xm1 + 0.5) * std::log(t) - t + std::log(a);
}

double stirling_log_gamma(double x) {
  // Bernoulli-number series B_{2k} / (2k (2k-1) x^{2k-1}), truncated after
  // eight terms; remainder < 1e-17 for x >= 15.
  constexpr std::array<double, 8> c = {1.0 / 12.0,          -1.0 / 360.0,       1.0 / 1260.0,
                                       -1.0 / 1680.0,       1.0 / 1188.0,       -691.0 / 360360.0,
                                       1.0 / 156.0,         -3617.0 / 122400.0};
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 0.0;
  double p = inv;
  for (double ck : c) {
    series += ck * p;
    p *= inv2;
  }
  return (x - 0.5) * std::log(x) - x + kHalfLog2Pi + series;
}

// ln of sum of exp(values) accumulated incrementally.
struct LogSumExp {
  double max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;

  void add(double v) {
    if (v == -std::numeric_limits<double>::infinity()) return;
    if (v <= max) {
      sum += std::exp(v - max);
    } else {
      sum = sum * std::exp(max - v) + 1.0;
      max = v;
    }
  }
  double value() const { return max + std::log(sum); }
};

double log_cosh(double y) {
  const double a = std::abs(y);
  return a + std::log1p(std::exp(-2.0 * a)) - kLn2;
}

// Trapezoidal rule for ln int_0^inf exp(-x cosh t) cosh(nu t) dt.
double log_bessel_k_trapezoid(double nu, double x) {
  const double anu = std::abs(nu);
  const double h = std::min(0.125, 0.5 / std::sqrt(std::max({1.0, x, anu})));
  auto g = [&](double t) { return -x * std::cosh(t) + log_cosh(anu * t); };

  LogSumExp acc;
  double peak = g(0.0);
  acc.add(peak + std::log(0.5));  // trapezoid end weight at t = 0
  for (int i = 1;; ++i) {
    const double t = h * i;
    const double v = g(t);
    acc.add(v);
    if (v > peak) peak = v;
    // past the peak (integrand decreasing) and negligible
    if (v < peak - 46.0 && x * std::sinh(t) > anu) break;
    if (i > 200000) break;
  }
  return acc.value() + std::log(h);
}

double log_factorial(int n) {
  double s = 0.0;
  if (n < 30) {
    for (int i = 2; i <= n; ++i) s += std::log(static_cast<double>(i));
    return s;
  }
  return stirling_log_gamma(n + 1.0);
}

double log_bessel_k_half_integer(int n, double x) {
  // K_{n+1/2}(x) = sqrt(pi / 2x) e^{-x} sum_k (n+k)! / (k! (n-k)! (2x)^k)
  LogSumExp acc;
  const double l2x = std::log(2.0 * x);
  for (int k = 0; k <= n; ++k) {
    acc.add(log_factorial(n + k) - log_factorial(k) - log_factorial(n - k) - k * l2x);
  }
  return 0.5 * std::log(kPi / (2.0 * x)) - x + acc.value();
}

double bessel_i0_series(double x) {
  const double y = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= y / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

double bessel_k0_series(double x) {
  // K0 = -(ln(x/2) + gamma) I0 + sum_{k>=1} (x^2/4)^k / (k!)^2 H_k
  const double y = 0.25 * x * x;
  double term = 1.0;
  double harmonic = 0.0;
  double tail = 0.0;
  for (int k = 1; k < 60; ++k) {
    term *= y / (static_cast<double>(k) * k);
    harmonic += 1.0 / k;
    tail += term * harmonic;
    if (term * harmonic < 1e-17 * std::abs(tail)) break;
  }
  return -(std::log(0.5 * x) + kEulerGamma) * bessel_i0_series(x) + tail;
}

double bessel_k0_asymptotic(double x) {
  // sqrt(pi/2x) e^{-x} sum_k (-1)^k [(2k-1)!!]^2 / (k! (8x)^k), stopped at the
  // smallest term.
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * odd * odd / (8.0 * k * x);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17) break;
  }
  return std::sqrt(kPi / (2.0 * x)) * std::exp(-x) * sum;
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw ParameterDomainError("log_gamma: argument must be positive");
  if (x < 0.5) {
    // reflection
    return std::log(kPi / std::sin(kPi * x)) - lanczos_log_gamma(1.0 - x);
  }
  if (x < 15.0) return lanczos_log_gamma(x);
  return stirling_log_gamma(x);
}

double gamma_fn(double x) { return std::exp(log_gamma(x)); }

double gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw ParameterDomainError("gamma_p: need a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int n = 0; n < 10000; ++n) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-17) break;
    }
    return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
  }
  return 1.0 - gamma_q(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw ParameterDomainError("gamma_q: need a > 0, x >= 0");
  if (x < a + 1.0) return 1.0 - gamma_p(a, x);
  // modified Lentz continued fraction
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
}

double bessel_k0(double x) {
  if (!(x > 0.0)) {
    if (x == 0.0) return std::numeric_limits<double>::infinity();
    throw ParameterDomainError("bessel_k0: argument must be positive");
  }
  if (x <= 2.0) return bessel_k0_series(x);
  if (x >= 25.0) return bessel_k0_asymptotic(x);
  return std::exp(log_bessel_k_trapezoid(0.0, x));
}

double log_bessel_k(double nu, double x) {
  if (!(x > 0.0)) throw ParameterDomainError("log_bessel_k: argument must be positive");
  const double anu = std::abs(nu);
  const double twice = 2.0 * anu;
  if (twice == std::floor(twice) && static_cast<long>(twice) % 2 == 1 && anu < 400.0) {
    return log_bessel_k_half_integer(static_cast<int>(anu - 0.5), x);
  }
  if (anu == 0.0 && x <= 2.0) return std::log(bessel_k0_series(x));
  return log_bessel_k_trapezoid(anu, x);
}

double bessel_k(double nu, double x) { return std::exp(log_bessel_k(nu, x)); }

}  // namespace realspec::special
