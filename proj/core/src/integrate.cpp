#include "realspec/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <vector>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace realspec::integrate {
namespace {

constexpr double kHalfPi = 1.57079632679489661923;
constexpr double kBaseStep = 0.5;

struct Node {
  double from_a;
  double to_b;
  double x;
  double weight;
  bool valid;
};

// Unit-interval nodes on the finest grid t_j = j h_min, j >= 0: distance
// of the abscissa to the nearer endpoint and the weight, both for [-1, 1].
constexpr int kMaxLevel = 12;
constexpr int kBaseSteps = 64;
constexpr int kFine = 1 << kMaxLevel;

struct UnitNode {
  double d;
  double w;
};

const std::vector<UnitNode>& unit_nodes() {
  static const std::vector<UnitNode> nodes = [] {
    std::vector<UnitNode> v(static_cast<std::size_t>(kBaseSteps) * kFine + 1);
    const double h = kBaseStep / kFine;
    for (std::size_t j = 0; j < v.size(); ++j) {
      const double t = h * static_cast<double>(j);
      const double s = kHalfPi * std::sinh(t);
      const double e = std::exp(-2.0 * s);
      const double c = std::cosh(s);
      v[j].d = 2.0 * e / (1.0 + e);
      v[j].w = kHalfPi * std::cosh(t) / (c * c);
    }
    return v;
  }();
  return nodes;
}

}  // namespace

Result tanh_sinh(const EndpointFunction& f, double a, double b, double abs_tol, double rel_tol,
                 int max_level) {
  Result r;
  if (a == b) {
    r.converged = true;
    return r;
  }
  if (b < a) {
    r = tanh_sinh([&](double x, double fa, double tb) { return f(x, tb, fa); }, b, a, abs_tol,
                  rel_tol, max_level);
    r.value = -r.value;
    return r;
  }
  max_level = std::clamp(max_level, 3, kMaxLevel);
  const auto& nodes = unit_nodes();
  const double half = 0.5 * (b - a);

  // j indexes the finest grid; sign selects the side (+ toward b)
  auto valid = [&](std::size_t j) { return half * nodes[j].d > 0.0 && std::isfinite(nodes[j].w); };
  auto eval = [&](std::size_t j, bool upper) {
    const UnitNode& n = nodes[j];
    const double near = half * n.d;
    if (!(near > 0.0)) return 0.0;
    const double far = half * (2.0 - n.d);
    ++r.evaluations;
    const double v = upper ? f(b - near, far, near) : f(a + near, near, far);
    return std::isfinite(v) ? v * half * n.w : 0.0;
  };

  // level 0: march outward on both sides until terms are negligible or the
  // nodes collapse onto the endpoints; this fixes the truncation range.
  double sum = eval(0, true);
  std::size_t j_max[2] = {0, 0};
  for (int side = 0; side < 2; ++side) {
    int small_run = 0;
    for (int k = 1; k < kBaseSteps; ++k) {
      const std::size_t j = static_cast<std::size_t>(k) * kFine;
      if (!valid(j)) break;
      const double term = eval(j, side == 0);
      sum += term;
      j_max[side] = j;
      if (std::abs(term) <= 1e-20 * std::abs(sum)) {
        if (++small_run >= 2) break;
      } else {
        small_run = 0;
      }
    }
  }
  double h = kBaseStep;
  double estimate = h * sum;
  double error = std::abs(estimate);

  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    const std::size_t stride = static_cast<std::size_t>(kFine) >> level;
    double fresh = 0.0;
    for (int side = 0; side < 2; ++side) {
      for (std::size_t j = stride; j < j_max[side]; j += 2 * stride) fresh += eval(j, side == 0);
    }
    sum += fresh;
    const double next = h * sum;
    error = std::abs(next - estimate);
    estimate = next;
    if (level >= 3 && error <= std::max(abs_tol, rel_tol * std::abs(estimate))) {
      r.converged = true;
      break;
    }
  }
  r.value = estimate;
  r.error = error;
  return r;
}

Result tanh_sinh(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 double rel_tol, int max_level) {
  return tanh_sinh([&](double x, double, double) { return f(x); }, a, b, abs_tol, rel_tol,
                   max_level);
}

Result tanh_sinh_upper(const std::function<double(double, double)>& f, double a, double abs_tol,
                       double rel_tol, int max_level) {
  return tanh_sinh(
      [&](double, double t, double one_minus_t) {
        const double d = t / one_minus_t;
        if (!std::isfinite(d)) return 0.0;
        return f(a + d, d) / (one_minus_t * one_minus_t);
      },
      0.0, 1.0, abs_tol, rel_tol, max_level);
}

const GaussLegendre& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");

  GaussLegendre g;
  g.nodes.resize(n);
  g.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    g.nodes[i] = -x;
    g.nodes[n - 1 - i] = x;
    g.weights[i] = w;
    g.weights[n - 1 - i] = w;
  }
  return cache.emplace(n, std::move(g)).first->second;
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b, int n) {
  const auto& g = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += g.weights[i] * f(mid + half * g.nodes[i]);
  return half * sum;
}

namespace {

double levin_at(const std::vector<double>& s, std::size_t last, int order) {
  // u-transform with beta = 1 on s[last - order .. last]
  const std::size_t n = last - static_cast<std::size_t>(order);
  double num = 0.0;
  double den = 0.0;
  double binom = 1.0;
  const double ref = static_cast<double>(n + order) + 1.0;
  for (int j = 0; j <= order; ++j) {
    const std::size_t m = n + static_cast<std::size_t>(j);
    const double term = m == 0 ? s[0] : s[m] - s[m - 1];
    if (term == 0.0) return s[last];
    const double omega = (static_cast<double>(m) + 1.0) * term;
    const double c = (j % 2 == 0 ? 1.0 : -1.0) * binom *
                     std::pow((static_cast<double>(m) + 1.0) / ref, order - 1);
    num += c * s[m] / omega;
    den += c / omega;
    binom = binom * (order - j) / (j + 1);
  }
  return num / den;
}

}  // namespace

std::pair<double, double> levin_u(const std::vector<double>& partial_sums, int order) {
  const std::size_t m = partial_sums.size();
  if (m == 0) return {0.0, 0.0};
  if (m < 3) return {partial_sums.back(), std::abs(partial_sums.back())};
  const int k = std::min<int>(order, static_cast<int>(m) - 2);
  const double now = levin_at(partial_sums, m - 1, k);
  const double before = levin_at(partial_sums, m - 2, k);
  return {now, std::abs(now - before)};
}

}  // namespace realspec::integrate
