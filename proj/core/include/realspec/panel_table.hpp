#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace realspec {

/// Piecewise Legendre representation of a function on [b_0, b_n]. Each
/// panel stores the Legendre coefficients obtained from an n-point
/// Gauss-Legendre projection, which gives interpolation and an exact
/// running integral. Panels whose trailing coefficients exceed the target
/// are bisected; the sliver left touching a singularity after max_depth
/// bisections keeps no fit and is evaluated and integrated directly.
class PanelTable {
 public:
  struct Options {
    int nodes = 16;
    double target = 1e-11;  // pointwise error target relative to max(1, |f|) on the panel
    int max_depth = 20;     // bisections of a panel that misses the target
    double negligible = 1e-10;  // direct panels below this mass interpolate linearly
  };

  PanelTable() = default;
  PanelTable(std::function<double(double)> f, std::vector<double> boundaries, Options opt);

  double operator()(double z) const;
  /// int_{lo}^{z} f for lo <= z <= hi.
  double integral(double z) const;
  double total() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

  double lo() const { return bounds_.front(); }
  double hi() const { return bounds_.back(); }
  std::size_t panels() const { return bounds_.size() - 1; }
  std::size_t direct_panels() const { return direct_count_; }
  /// Largest per-panel error estimate among fitted panels plus the
  /// quadrature error of the directly integrated ones.
  double max_error_estimate() const { return max_error_; }

 private:
  std::size_t locate(double z) const;
  double panel_integral_direct(std::size_t i, double z) const;

  std::function<double(double)> f_;
  std::vector<double> bounds_;
  std::vector<double> coeffs_;  // nodes_ per panel
  std::vector<char> direct_;
  std::vector<double> cumulative_;  // integral up to the start of panel i + 1
  int nodes_ = 16;
  std::size_t direct_count_ = 0;
  double max_error_ = 0.0;
};

/// Panel boundaries on [knots.front(), knots.back()]: panels are shared
/// between the segments in proportion to length and, inside each segment,
/// graded cubically toward both ends so kinks and endpoint singularities
/// are resolved.
std::vector<double> graded_boundaries(const std::vector<double>& knots, int panels);

/// Boundaries for [0, z_max] on a half line: graded in tau with
/// z = s tau / (1 - tau), which spreads panels geometrically into the tail.
std::vector<double> half_line_boundaries(double s, double z_max, int panels);

}  // namespace realspec
