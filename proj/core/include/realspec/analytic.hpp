#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "realspec/distributions.hpp"
#include "realspec/law.hpp"

namespace realspec {

/// Self-convolution q(z) = int p(v) p(v - z) dv of a symmetric law, i.e. the
/// density of the difference of two independent entries.
class ConvolutionDensity {
 public:
  enum class Form { ClosedForm, NumericTable };

  struct Impl;
  explicit ConvolutionDensity(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  Form form() const;
  const std::string& source_label() const;
  /// 2u, or +inf for unbounded sources.
  double support() const;

  double operator()(double z) const;
  /// int_0^t q for t >= 0.
  double half_cdf(double t) const;
  /// int_t^inf q for t >= 0, evaluated without cancellation.
  double upper_tail(double t) const;
  double cdf(double z) const;

  /// Worst pointwise error estimate of the table (0 for closed forms with
  /// a closed CDF).
  double max_error_estimate() const;
  std::size_t table_panels() const;
  /// End of the tabulated range; upper_tail beyond it integrates q directly.
  /// +inf when the tail is closed or the source is bounded.
  double tabulated_limit() const;
  std::size_t direct_panels() const;

 private:
  std::shared_ptr<const Impl> impl_;
};

struct ConvolutionOptions {
  int panels = 256;
  int nodes = 16;
  double point_tol = 1e-13;   // pointwise quadrature tolerance of q
  double accept_tol = 1e-6;   // build fails above this error estimate
  bool force_numeric = false; // skip closed forms (used to cross-check them)
};

/// Closed form when one is known (uniform, tent, Beta(0, 2k) for
/// k <= 4, Gaussian, symmetric Gamma, smooth family eta = 1, 2) plus the
/// Cauchy law; otherwise a numeric table of the convolution integral on a
/// graded grid. Throws ConvergenceError when the table misses accept_tol.
ConvolutionDensity convolution(const DistributionSpec& spec, const ConvolutionOptions& opt = {});

/// Convolution of a product marginal; Gaussian K = 2 has the Laplace law
/// e^{-|z|}/2 as its convolution, everything else is tabulated.
ConvolutionDensity convolution(const ProductMarginal& pm, const ConvolutionOptions& opt = {});

/// Numeric convolution of an arbitrary symmetric law.
ConvolutionDensity numeric_convolution(const SymmetricLaw& law, const ConvolutionOptions& opt = {});

enum class SeriesPrecision { Auto, Double, High };

/// P_{2,2} for SymmetricBeta(0, 2k) from the finite double sum. Double
/// precision uses magnitude-sorted compensated summation and raises
/// PrecisionLossError when the estimated loss exceeds 1e-9; High uses MPFR
/// with enough bits to hold every partial sum exactly; Auto tries double
/// first. Requires 1 <= k <= 200.
double beta_series_probability(int k, SeriesPrecision precision = SeriesPrecision::Auto);

/// Estimated absolute rounding error of the double-precision evaluation.
double beta_series_loss_estimate(int k);

/// P_{2,2} = 1/2 + A1 + A2 for integer gamma >= 1, terms in log space.
double gamma_sum_probability(int gamma);

/// 5/8 + 1 / (16 sqrt(2 pi gamma)), gamma >= 1.
double gamma_asymptotic(double gamma);

}  // namespace realspec
