#include "realspec/panel_table.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "realspec/integrate.hpp"

namespace realspec {
namespace {

// P_0 .. P_{n-1} at x
void legendre_values(double x, int n, double* out) {
  out[0] = 1.0;
  if (n > 1) out[1] = x;
  for (int k = 1; k + 1 < n; ++k) out[k + 1] = ((2.0 * k + 1.0) * x * out[k] - k * out[k - 1]) / (k + 1.0);
}

double grade(double t) {
  const double a = t * t * t;
  const double b = (1.0 - t) * (1.0 - t) * (1.0 - t);
  return a / (a + b);
}

}  // namespace

PanelTable::PanelTable(std::function<double(double)> f, std::vector<double> boundaries, Options opt)
    : f_(std::move(f)), nodes_(opt.nodes) {
  if (boundaries.size() < 2) throw std::invalid_argument("PanelTable: need at least one panel");
  const auto& gl = integrate::gauss_legendre(nodes_);
  std::vector<double> vals(nodes_);
  std::vector<double> leg(nodes_);
  std::vector<double> c(nodes_);
  double running = 0.0;
  bounds_.push_back(boundaries.front());

  // tail of the Legendre expansion relative to the panel magnitude
  auto fit = [&](double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::fill(c.begin(), c.end(), 0.0);
    double magnitude = 1.0;
    for (int j = 0; j < nodes_; ++j) {
      vals[j] = f_(mid + half * gl.nodes[j]);
      if (!std::isfinite(vals[j])) return std::numeric_limits<double>::infinity();
      magnitude = std::max(magnitude, std::abs(vals[j]));
    }
    for (int j = 0; j < nodes_; ++j) {
      legendre_values(gl.nodes[j], nodes_, leg.data());
      for (int n = 0; n < nodes_; ++n) c[n] += gl.weights[j] * vals[j] * leg[n];
    }
    for (int n = 0; n < nodes_; ++n) c[n] *= (2.0 * n + 1.0) / 2.0;
    return (std::abs(c[nodes_ - 1]) + std::abs(c[nodes_ - 2])) / magnitude;
  };

  auto keep_fit = [&](double b, double tail) {
    coeffs_.insert(coeffs_.end(), c.begin(), c.end());
    direct_.push_back(0);
    max_error_ = std::max(max_error_, tail * std::max(1.0, std::abs(c[0])));
    running += (b - bounds_.back()) * c[0];
    bounds_.push_back(b);
    cumulative_.push_back(running);
  };
  auto keep_direct = [&](double b) {
    const double a = bounds_.back();
    coeffs_.insert(coeffs_.end(), nodes_, 0.0);
    ++direct_count_;
    auto r = integrate::tanh_sinh(f_, a, b, 1e-15, 1e-13, 12);
    const bool linear = std::abs(r.value) <= opt.negligible;
    direct_.push_back(linear ? 2 : 1);
    max_error_ = std::max(max_error_, linear ? r.error + std::abs(r.value) : r.error);
    running += r.value;
    bounds_.push_back(b);
    cumulative_.push_back(running);
  };

  // Panels that miss the target are bisected toward the offending point.
  // A singular point sits in one half only; when both halves fail the
  // panel is noise-limited and is kept for direct evaluation instead.
  std::function<void(double, double, int)> add = [&](double a, double b, int depth) {
    const double tail = fit(a, b);
    if (tail <= opt.target) return keep_fit(b, tail);
    if (depth >= opt.max_depth) return keep_direct(b);
    const double m = 0.5 * (a + b);
    const double left = fit(a, m);
    const double right = fit(m, b);
    if (left > opt.target && right > opt.target && depth > 0) return keep_direct(b);
    add(a, m, depth + 1);
    add(m, b, depth + 1);
  };
  for (std::size_t i = 0; i + 1 < boundaries.size(); ++i) add(boundaries[i], boundaries[i + 1], 0);
}

std::size_t PanelTable::locate(double z) const {
  auto it = std::upper_bound(bounds_.begin(), bounds_.end(), z);
  std::size_t i = static_cast<std::size_t>(it - bounds_.begin());
  if (i == 0) return 0;
  return std::min(i - 1, panels() - 1);
}

double PanelTable::operator()(double z) const {
  if (z < lo() || z > hi()) return f_(z);
  const std::size_t i = locate(z);
  if (direct_[i]) return f_(z);
  const double a = bounds_[i];
  const double b = bounds_[i + 1];
  const double x = (2.0 * z - a - b) / (b - a);
  double p0 = 1.0;
  double p1 = x;
  const double* c = &coeffs_[i * nodes_];
  double sum = c[0] + c[1] * x;
  for (int k = 1; k + 1 < nodes_; ++k) {
    const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
    sum += c[k + 1] * p2;
    p0 = p1;
    p1 = p2;
  }
  return sum;
}

double PanelTable::panel_integral_direct(std::size_t i, double z) const {
  return integrate::tanh_sinh(f_, bounds_[i], z, 1e-15, 1e-13, 12).value;
}

double PanelTable::integral(double z) const {
  if (z <= lo()) return 0.0;
  if (z >= hi()) return total();
  const std::size_t i = locate(z);
  const double before = i == 0 ? 0.0 : cumulative_[i - 1];
  if (direct_[i] == 2) {
    const double t = (z - bounds_[i]) / (bounds_[i + 1] - bounds_[i]);
    return before + t * (cumulative_[i] - before);
  }
  if (direct_[i]) return before + panel_integral_direct(i, z);
  const double a = bounds_[i];
  const double b = bounds_[i + 1];
  const double half = 0.5 * (b - a);
  const double s = (2.0 * z - a - b) / (b - a);
  const double* c = &coeffs_[i * nodes_];
  // int_{-1}^{s} P_n = (P_{n+1}(s) - P_{n-1}(s)) / (2n + 1), n >= 1
  double p_prev = 1.0;  // P_{n-1}
  double p_cur = s;     // P_n
  double sum = c[0] * (s + 1.0);
  for (int n = 1; n < nodes_; ++n) {
    const double p_next = ((2.0 * n + 1.0) * s * p_cur - n * p_prev) / (n + 1.0);
    sum += c[n] * (p_next - p_prev) / (2.0 * n + 1.0);
    p_prev = p_cur;
    p_cur = p_next;
  }
  return before + half * sum;
}

std::vector<double> graded_boundaries(const std::vector<double>& knots, int panels) {
  if (knots.size() < 2) throw std::invalid_argument("graded_boundaries: need two knots");
  const double length = knots.back() - knots.front();
  std::vector<double> out{knots.front()};
  for (std::size_t s = 0; s + 1 < knots.size(); ++s) {
    const double a = knots[s];
    const double b = knots[s + 1];
    if (!(b > a)) continue;
    const int n = std::max(16, static_cast<int>(std::lround(panels * (b - a) / length)));
    for (int k = 1; k < n; ++k) out.push_back(a + (b - a) * grade(static_cast<double>(k) / n));
    out.push_back(b);
  }
  return out;
}

std::vector<double> half_line_boundaries(double s, double z_max, int panels) {
  const double tau_max = z_max / (s + z_max);
  std::vector<double> out{0.0};
  for (int k = 1; k < panels; ++k) {
    const double tau = tau_max * grade(static_cast<double>(k) / panels);
    out.push_back(s * tau / (1.0 - tau));
  }
  out.push_back(z_max);
  return out;
}

}  // namespace realspec
