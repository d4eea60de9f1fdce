#include "realspec/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "realspec/error.hpp"

namespace realspec {
namespace {

constexpr double kGrid = 1e-3;

PowerLawFit fit_at(const std::vector<SeriesPoint>& series, double P_inf) {
  const bool equal = std::any_of(series.begin(), series.end(),
                                 [](const SeriesPoint& p) { return !(p.std_error > 0.0); });
  double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::vector<double> x, y, w;
  for (const auto& p : series) {
    const double gap = P_inf - p.phat;
    if (!(gap > 0.0))
      throw ModelViolationError("fit_saturation: P(" + std::to_string(p.K) + ") = " +
                                std::to_string(p.phat) + " is not below P_inf = " +
                                std::to_string(P_inf));
    x.push_back(std::log(static_cast<double>(p.K)));
    y.push_back(std::log(gap));
    w.push_back(equal ? 1.0 : gap * gap / (p.std_error * p.std_error));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  const double mx = sx / sw;
  const double my = sy / sw;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  PowerLawFit f;
  f.P_inf = P_inf;
  f.theta = -slope;
  f.C = std::exp(my - slope * mx);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + slope * (x[i] - mx));
    f.residual += w[i] * r * r;
  }
  return f;
}

}  // namespace

double PowerLawFit::operator()(double K) const { return P_inf - C * std::pow(K, -theta); }

PowerLawFit fit_saturation(const std::vector<SeriesPoint>& series, std::optional<double> fix_Pinf) {
  if (series.size() < 5) throw ConfigError("fit_saturation: need at least 5 points");
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series[i].K < 1) throw ConfigError("fit_saturation: K must be positive");
    if (i > 0 && series[i].K <= series[i - 1].K)
      throw ConfigError("fit_saturation: K must be strictly increasing");
  }

  PowerLawFit best;
  if (fix_Pinf) {
    best = fit_at(series, *fix_Pinf);
    best.P_inf_fixed = true;
  } else {
    double top = 0.0;
    for (const auto& p : series) top = std::max(top, p.phat);
    best.residual = std::numeric_limits<double>::infinity();
    for (long long g = static_cast<long long>(std::floor(top / kGrid)) + 1; g * kGrid <= 1.0; ++g) {
      const double P_inf = static_cast<double>(g) * kGrid;
      if (!(P_inf > top)) continue;
      const PowerLawFit f = fit_at(series, P_inf);
      if (f.residual < best.residual) best = f;
    }
    if (!std::isfinite(best.residual))
      throw ModelViolationError("fit_saturation: no admissible P_inf below 1");
  }
  if (!(best.theta > 0.0))
    throw ModelViolationError("fit_saturation: fitted theta = " + std::to_string(best.theta) +
                              " is not positive");
  return best;
}

}  // namespace realspec
