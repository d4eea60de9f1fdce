#pragma once

#include <string>
#include <string_view>

#include "realspec/random_stream.hpp"

namespace realspec {

enum class Family {
  Uniform,
  Gaussian,
  Laplace,
  SymmetricGamma,
  SymmetricBeta,
  SmoothBounded,
  Cauchy,
  PowerLaw,
  BernoulliPM1,
  LogNormalProduct,
};

/// Canonical lower-case name ("uniform", "symmetric_gamma", ...).
std::string_view family_name(Family f);
/// Inverse of family_name; also accepts the aliases "gamma", "beta",
/// "powerlaw", "bernoulli", "lognormal" and "normal". Throws ConfigError.
Family family_from_name(std::string_view name);

/// One symmetric entry law p(x). Only the parameters of the selected family
/// are meaningful. All laws are centred; `scale` stretches x.
struct DistributionSpec {
  Family family = Family::Gaussian;
  double gamma = 1.0;      // SymmetricGamma shape
  double mu = 0.0;         // SymmetricBeta (1 - |x|)^mu
  double nu = 0.0;         // SymmetricBeta |x|^nu
  double eta = 0.0;        // SmoothBounded (1 - x^2)^eta
  double a = 1.0;          // PowerLaw 1 / (1 + |x|^{2a})
  double mu_log = 0.0;     // LogNormalProduct, per-factor mean of log|x|
  double sigma_log = 1.0;  // LogNormalProduct, per-factor sd of log|x|
  int K = 1;               // LogNormalProduct number of factors
  double scale = 1.0;

  static DistributionSpec uniform(double scale = 1.0);
  static DistributionSpec gaussian(double scale = 1.0);
  static DistributionSpec laplace(double scale = 1.0);
  static DistributionSpec symmetric_gamma(double gamma, double scale = 1.0);
  static DistributionSpec symmetric_beta(double mu, double nu, double scale = 1.0);
  static DistributionSpec smooth_bounded(double eta, double scale = 1.0);
  static DistributionSpec cauchy(double scale = 1.0);
  static DistributionSpec power_law(double a, double scale = 1.0);
  static DistributionSpec bernoulli_pm1(double scale = 1.0);
  static DistributionSpec lognormal_product(double mu_log, double sigma_log, int K,
                                            double scale = 1.0);

  /// Throws ParameterDomainError when a parameter is out of range.
  void validate() const;

  /// Support bound u (scale for bounded families, +inf otherwise).
  double support_bound() const;
  bool bounded() const;
  bool discrete() const { return family == Family::BernoulliPM1; }

  /// "gamma=0.25", "mu=0;nu=1", "" for parameter-free families. Scale is
  /// appended when it differs from 1.
  std::string params_string() const;
  /// family name followed by the parameter string, e.g. "symmetric_gamma(gamma=0.25)".
  std::string label() const;

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

/// p(x); zero outside the support. Throws DensityUnknownError for the
/// two-point law.
double pdf(const DistributionSpec& spec, double x);

/// p at |x| = u - gap for bounded families, accurate when gap is tiny
/// (densities with (1 - |x|)^mu or (1 - x^2)^eta factors).
double pdf_near_edge(const DistributionSpec& spec, double gap);

/// Distribution function F(x). Closed form where one exists, otherwise
/// numeric integration of the density.
double cdf(const DistributionSpec& spec, double x);

/// One draw from the law.
double sample(const DistributionSpec& spec, RandomStream& stream);

/// True when characteristic_function uses a closed form.
bool has_closed_characteristic_function(const DistributionSpec& spec);

/// Real characteristic function E[cos(omega x)]. Families without a closed
/// form fall back to oscillatory quadrature; ConvergenceError is thrown when
/// `tol` cannot be met.
double characteristic_function(const DistributionSpec& spec, double omega, double tol = 1e-11);

/// Law of the product x_1 ... x_K of K independent draws from `base`.
struct ProductMarginal {
  DistributionSpec base;
  int K = 1;
};

/// Whether product_marginal_pdf has a closed form for this (base, K).
bool has_product_density(const ProductMarginal& pm);

/// Density of the K-fold product. Closed forms: K = 1 (the base law),
/// SymmetricBeta(0, nu) and Uniform for any K, Gaussian, Laplace, symmetric
/// Gamma and Cauchy for K = 2. Anything else throws DensityUnknownError.
double product_marginal_pdf(const ProductMarginal& pm, double z);

/// One draw of the product x_1 ... x_K.
double sample_product(const ProductMarginal& pm, RandomStream& stream);

/// Mean and standard deviation of log|x| under `base`, estimated once from
/// 10^7 draws with a fixed seed and cached.
struct LogMoments {
  double mean = 0.0;
  double sd = 0.0;
};
LogMoments log_abs_moments(const DistributionSpec& base);

/// Symmetrized log-normal stand-in for the K-fold product of `base`.
DistributionSpec lognormal_surrogate(const DistributionSpec& base, int K);

}  // namespace realspec
