#pragma once

#include <cstddef>
#include <string_view>

#include "realspec/analytic.hpp"
#include "realspec/distributions.hpp"

namespace realspec {

enum class QuadratureMethod { ConvolutionRoute, CharacteristicRoute };

std::string_view method_name(QuadratureMethod m);

/// P_{2,2} for one 2x2 matrix computed by deterministic integration.
struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
  QuadratureMethod method = QuadratureMethod::ConvolutionRoute;
  /// true when the (x, y) double integral was reduced to one radial
  /// integral through the density of x*y
  bool reduced = false;
};

enum class Reduction { Auto, Tensor };

/// P = 1/2 + 4 int_0^u int_0^u p(x) p(y) T(2 sqrt(xy)) dx dy with T the
/// upper tail of the self-convolution q. When the density of x*y is known
/// in closed form the double integral collapses to
/// P = 1/2 + 4 int_0^u t p_2(t^2) T(2t) dt. tol <= 0 picks 1e-6 for closed
/// convolutions and 1e-4 for tabulated ones. Throws UnsupportedRouteError
/// for laws without density and ConvergenceError when tol is missed.
QuadratureResult prob_real_convolution_route(const DistributionSpec& spec, double tol = 0.0,
                                             Reduction reduction = Reduction::Auto);

/// P = 1 - (4/pi) int_0^inf |p~(w)|^2 / w G(w) dw with
/// G(w) = int_0^u t p_2(t^2) sin(2 w t) dt. Oscillatory pieces are summed
/// over half periods and extrapolated with the Levin u transform.
QuadratureResult prob_real_cf_route(const DistributionSpec& spec, double tol = 1e-6);

/// Convolution route applied to the marginal of a K-fold Hadamard product.
/// Throws DensityUnknownError when the marginal has no closed density.
QuadratureResult prob_real_product_law(const ProductMarginal& pm, double tol = 0.0,
                                       Reduction reduction = Reduction::Auto);

/// Convolution route for an arbitrary law with a prepared convolution.
QuadratureResult prob_real_convolution_route(const SymmetricLaw& law, const ConvolutionDensity& q,
                                             double tol, Reduction reduction = Reduction::Auto);

}  // namespace realspec
