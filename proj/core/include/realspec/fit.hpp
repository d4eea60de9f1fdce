#pragma once

#include <optional>
#include <vector>

namespace realspec {

struct SeriesPoint {
  int K = 1;
  double phat = 0.0;
  double std_error = 0.0;
};

/// P(K) = P_inf - C / K^theta.
struct PowerLawFit {
  double P_inf = 0.0;
  double C = 0.0;
  double theta = 0.0;
  /// weighted sum of squared residuals of log(P_inf - P) on log K
  double residual = 0.0;
  bool P_inf_fixed = false;

  double operator()(double K) const;
};

/// Weighted least squares of log(P_inf - P) on log K with weights
/// (P_inf - P)^2 / stderr^2 (equal weights when any stderr is zero). Without
/// fix_Pinf, P_inf is profiled over a 1e-3 grid above the largest P.
/// Throws ConfigError for fewer than 5 points or K not strictly increasing
/// and ModelViolationError when P >= P_inf or the fitted theta is not
/// positive.
PowerLawFit fit_saturation(const std::vector<SeriesPoint>& series,
                           std::optional<double> fix_Pinf = std::nullopt);

}  // namespace realspec
