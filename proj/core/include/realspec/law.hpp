#pragma once

#include <functional>
#include <string>

#include "realspec/distributions.hpp"

namespace realspec {

/// Positive-half view of a symmetric density at unit scale, shared by the
/// convolution builder and both quadrature routes. Physical quantities are
/// recovered through `scale`.
struct SymmetricLaw {
  std::string label;
  double u = 1.0;      // support bound at unit scale (1 or +inf)
  double scale = 1.0;  // x_physical = scale * x_unit
  std::function<double(double)> pdf;      // p(x), x >= 0
  std::function<double(double)> edge;    // p(u - gap) for bounded laws
  std::function<double(double)> product;  // density of x*y at s >= 0 (two draws), if closed
  bool discrete = false;

  bool bounded() const { return u < 1e300; }
  bool has_product() const { return static_cast<bool>(product); }
  /// Density at distance `gap` below u when bounded, else at x = gap.
  double at_edge(double gap) const { return edge ? edge(gap) : pdf(bounded() ? u - gap : gap); }
  /// Smallest t with P(|x| > t) < eps (bounded laws return u).
  double tail_quantile(double eps) const;
};

SymmetricLaw symmetric_law(const DistributionSpec& spec);
SymmetricLaw symmetric_law(const ProductMarginal& pm);

/// Density of x*y for two independent draws from `law`, at s > 0, from the
/// hyperbolic-coordinate integral 4 int_0^{ln(u/sqrt s)} p(sqrt(s) e^w) p(sqrt(s) e^-w) dw.
double numeric_product_density(const SymmetricLaw& law, double s, double tol = 1e-13);

}  // namespace realspec
