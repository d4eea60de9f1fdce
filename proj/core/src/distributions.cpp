#include "realspec/distributions.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <vector>

#include "realspec/error.hpp"
#include "realspec/integrate.hpp"
#include "realspec/special.hpp"

namespace realspec {
namespace {

using special::kPi;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double gamma_shape(const DistributionSpec& s) {
  return s.family == Family::Laplace ? 1.0 : s.gamma;
}

double beta_mu(const DistributionSpec& s) { return s.family == Family::Uniform ? 0.0 : s.mu; }
double beta_nu(const DistributionSpec& s) { return s.family == Family::Uniform ? 0.0 : s.nu; }

double log_beta_norm(double mu, double nu) {
  using special::log_gamma;
  return log_gamma(mu + nu + 2.0) - special::kLn2 - log_gamma(mu + 1.0) - log_gamma(nu + 1.0);
}

double log_smooth_norm(double eta) {
  using special::log_gamma;
  return log_gamma(eta + 1.5) - 0.5 * std::log(kPi) - log_gamma(eta + 1.0);
}

double power_law_norm(double a) { return a * std::sin(kPi / (2.0 * a)) / kPi; }

// Density of the unit-scale law at t = |x| >= 0.
double unit_pdf(const DistributionSpec& s, double t) {
  switch (s.family) {
    case Family::Uniform:
      return t <= 1.0 ? 0.5 : 0.0;
    case Family::Gaussian:
      return std::exp(-0.5 * t * t) / std::sqrt(2.0 * kPi);
    case Family::Laplace:
      return 0.5 * std::exp(-t);
    case Family::SymmetricGamma: {
      if (t == 0.0) {
        if (s.gamma < 1.0) return kInf;
        return s.gamma == 1.0 ? 0.5 : 0.0;
      }
      return std::exp((s.gamma - 1.0) * std::log(t) - t - special::log_gamma(s.gamma)) * 0.5;
    }
    case Family::SymmetricBeta: {
      if (t > 1.0) return 0.0;
      const double c = log_beta_norm(s.mu, s.nu);
      if (t == 0.0) {
        if (s.nu < 0.0) return kInf;
        return s.nu == 0.0 ? std::exp(c) : 0.0;
      }
      if (t == 1.0) {
        if (s.mu < 0.0) return kInf;
        return s.mu == 0.0 ? std::exp(c) : 0.0;
      }
      return std::exp(c + s.mu * std::log1p(-t) + s.nu * std::log(t));
    }
    case Family::SmoothBounded: {
      if (t > 1.0) return 0.0;
      if (t == 1.0) {
        if (s.eta < 0.0) return kInf;
        return s.eta == 0.0 ? std::exp(log_smooth_norm(s.eta)) : 0.0;
      }
      return std::exp(log_smooth_norm(s.eta) + s.eta * std::log1p(-t * t));
    }
    case Family::Cauchy:
      return 1.0 / (kPi * (1.0 + t * t));
    case Family::PowerLaw:
      return power_law_norm(s.a) / (1.0 + std::pow(t, 2.0 * s.a));
    case Family::BernoulliPM1:
      throw DensityUnknownError("bernoulli_pm1 has no density (two atoms at +-1)");
    case Family::LogNormalProduct: {
      if (t == 0.0) return 0.0;
      const double var = s.K * s.sigma_log * s.sigma_log;
      const double d = std::log(t) - s.K * s.mu_log;
      return std::exp(-d * d / (2.0 * var)) / (2.0 * t * std::sqrt(2.0 * kPi * var));
    }
  }
  return 0.0;
}

double unit_cdf_magnitude_numeric(const DistributionSpec& s, double t) {
  // P(|x| <= t) = 2 int_0^t p, split at 1, 2, 4, ... so the bulk is resolved
  if (t <= 0.0) return 0.0;
  if (s.bounded() && t >= 1.0) return 1.0;
  auto f = [&](double x) { return 2.0 * unit_pdf(s, x); };
  double total = 0.0;
  double lo = 0.0;
  double hi = std::min(t, 1.0);
  while (true) {
    total += integrate::tanh_sinh(f, lo, hi, 1e-15, 1e-14, 12).value;
    if (hi >= t) break;
    lo = hi;
    hi = std::min(t, 2.0 * hi);
  }
  return std::min(1.0, total);
}

double unit_cdf_magnitude(const DistributionSpec& s, double t) {
  switch (s.family) {
    case Family::Uniform:
      return std::min(t, 1.0);
    case Family::Gaussian:
      return std::erf(t / std::sqrt(2.0));
    case Family::Laplace:
      return -std::expm1(-t);
    case Family::SymmetricGamma:
      return special::gamma_p(s.gamma, t);
    case Family::SymmetricBeta:
      if (t >= 1.0) return 1.0;
      if (s.mu == 0.0) return std::pow(t, s.nu + 1.0);
      if (s.nu == 0.0) return -std::expm1((s.mu + 1.0) * std::log1p(-t));
      return unit_cdf_magnitude_numeric(s, t);
    case Family::SmoothBounded:
      if (t >= 1.0) return 1.0;
      if (s.eta == 0.0) return t;
      return unit_cdf_magnitude_numeric(s, t);
    case Family::Cauchy:
      return 2.0 * std::atan(t) / kPi;
    case Family::PowerLaw:
      if (s.a == 1.0) return 2.0 * std::atan(t) / kPi;
      return unit_cdf_magnitude_numeric(s, t);
    case Family::BernoulliPM1:
      return t >= 1.0 ? 1.0 : 0.0;
    case Family::LogNormalProduct: {
      if (t <= 0.0) return 0.0;
      const double sd = s.sigma_log * std::sqrt(static_cast<double>(s.K));
      return 0.5 * std::erfc(-(std::log(t) - s.K * s.mu_log) / (sd * std::sqrt(2.0)));
    }
  }
  return 0.0;
}

// 2 int_0^L p(x) cos(omega x) dx for the unit law, with L = 1 or infinity.
double numeric_cf(const DistributionSpec& s, double omega, double tol) {
  const double w = std::abs(omega);
  if (w == 0.0) return 1.0;
  const double half_period = kPi / w;

  auto piece = [&](double lo, double hi, bool at_edge) {
    double sum = 0.0;
    double err = 0.0;
    // a long first half period is split at 1, 2, 4, ... to resolve the bulk
    double a = lo;
    while (a < hi) {
      double b = hi;
      if (a == 0.0 && hi > 1.0) b = 1.0;
      else if (a > 0.0 && hi > 2.0 * a) b = 2.0 * a;
      const bool edge = at_edge && b == hi;
      auto g = [&](double x, double, double to_b) {
        const double p = edge && to_b < 0.5 ? pdf_near_edge(s, to_b) : unit_pdf(s, x);
        return 2.0 * p * std::cos(w * x);
      };
      auto r = integrate::tanh_sinh(g, a, b, 0.1 * tol, 1e-14, 12);
      sum += r.value;
      err += r.error;
      a = b;
    }
    return std::pair{sum, err};
  };

  if (s.bounded()) {
    double total = 0.0;
    double err = 0.0;
    for (double lo = 0.0; lo < 1.0; lo += half_period) {
      const double hi = std::min(1.0, lo + half_period);
      auto [v, e] = piece(lo, hi, hi == 1.0);
      total += v;
      err += e;
    }
    if (err > tol) throw ConvergenceError("characteristic_function: tolerance not met", total, err);
    return total;
  }

  std::vector<double> partial;
  double total = 0.0;
  double best = 0.0;
  double best_err = kInf;
  for (int k = 0; k < 400; ++k) {
    auto [v, e] = piece(k * half_period, (k + 1) * half_period, false);
    total += v;
    partial.push_back(total);
    if (std::abs(v) < 1e-17 && k > 2) return total;
    if (partial.size() >= 4) {
      auto [est, lerr] = integrate::levin_u(partial, 8);
      if (lerr < best_err) {
        best = est;
        best_err = lerr;
      }
      if (lerr < tol && partial.size() >= 6) return est;
    }
  }
  throw ConvergenceError("characteristic_function: oscillatory tail did not converge", best,
                         best_err);
}

}  // namespace

std::string_view family_name(Family f) {
  switch (f) {
    case Family::Uniform: return "uniform";
    case Family::Gaussian: return "gaussian";
    case Family::Laplace: return "laplace";
    case Family::SymmetricGamma: return "symmetric_gamma";
    case Family::SymmetricBeta: return "symmetric_beta";
    case Family::SmoothBounded: return "smooth_bounded";
    case Family::Cauchy: return "cauchy";
    case Family::PowerLaw: return "power_law";
    case Family::BernoulliPM1: return "bernoulli_pm1";
    case Family::LogNormalProduct: return "lognormal_product";
  }
  return "unknown";
}

Family family_from_name(std::string_view name) {
  static const std::map<std::string_view, Family> names = {
      {"uniform", Family::Uniform},
      {"gaussian", Family::Gaussian},
      {"normal", Family::Gaussian},
      {"laplace", Family::Laplace},
      {"symmetric_gamma", Family::SymmetricGamma},
      {"gamma", Family::SymmetricGamma},
      {"symmetric_beta", Family::SymmetricBeta},
      {"beta", Family::SymmetricBeta},
      {"smooth_bounded", Family::SmoothBounded},
      {"smooth", Family::SmoothBounded},
      {"cauchy", Family::Cauchy},
      {"power_law", Family::PowerLaw},
      {"powerlaw", Family::PowerLaw},
      {"bernoulli_pm1", Family::BernoulliPM1},
      {"bernoulli", Family::BernoulliPM1},
      {"lognormal_product", Family::LogNormalProduct},
      {"lognormal", Family::LogNormalProduct},
  };
  auto it = names.find(name);
  if (it == names.end()) throw ConfigError("unknown distribution family '" + std::string(name) + "'");
  return it->second;
}

DistributionSpec DistributionSpec::uniform(double scale) {
  DistributionSpec s;
  s.family = Family::Uniform;
  s.scale = scale;
  return s;
}

DistributionSpec DistributionSpec::gaussian(double scale) {
  DistributionSpec s;
  s.family = Family::Gaussian;
  s.scale = scale;
  return s;
}

DistributionSpec DistributionSpec::laplace(double scale) {
  DistributionSpec s;
  s.family = Family::Laplace;
  s.scale = scale;
  return s;
}

DistributionSpec DistributionSpec::symmetric_gamma(double gamma, double scale) {
  DistributionSpec s;
  s.family = Family::SymmetricGamma;
  s.gamma = gamma;
  s.scale = scale;
  return s;
}

DistributionSpec DistributionSpec::symmetric_beta(double mu, double nu, double scale) {
  DistributionSpec s;
  s.family = Family::SymmetricBeta;
  s.mu = mu;
  s.nu = nu;
  s.scale = scale;
  return s;
}

DistributionSpec DistributionSpec::smooth_bounded(double eta, double scale) {
  DistributionSpec s;
  s.family = Family::SmoothBounded;
  s.eta = eta;
  s.scale = scale;
  return s;
}

DistributionSpec DistributionSpec::cauchy(double scale) {
  DistributionSpec s;
  s.family = Family::Cauchy;
  s.scale = scale;
  return s;
}

DistributionSpec DistributionSpec::power_law(double a, double scale) {
  DistributionSpec s;
  s.family = Family::PowerLaw;
  s.a = a;
  s.scale = scale;
  return s;
}

DistributionSpec DistributionSpec::bernoulli_pm1(double scale) {
  DistributionSpec s;
  s.family = Family::BernoulliPM1;
  s.scale = scale;
  return s;
}

DistributionSpec DistributionSpec::lognormal_product(double mu_log, double sigma_log, int K,
                                                     double scale) {
  DistributionSpec s;
  s.family = Family::LogNormalProduct;
  s.mu_log = mu_log;
  s.sigma_log = sigma_log;
  s.K = K;
  s.scale = scale;
  return s;
}

void DistributionSpec::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw ParameterDomainError("scale must be a positive finite number");
  switch (family) {
    case Family::SymmetricGamma:
      if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw ParameterDomainError("symmetric_gamma: gamma must be > 0");
      break;
    case Family::SymmetricBeta:
      if (!(mu > -1.0) || !(nu > -1.0) || !std::isfinite(mu) || !std::isfinite(nu))
        throw ParameterDomainError("symmetric_beta: mu and nu must be > -1");
      break;
    case Family::SmoothBounded:
      if (!(eta > -1.0) || !std::isfinite(eta))
        throw ParameterDomainError("smooth_bounded: eta must be > -1");
      break;
    case Family::PowerLaw:
      if (!(a >= 1.0) || !std::isfinite(a)) throw ParameterDomainError("power_law: a must be >= 1");
      break;
    case Family::LogNormalProduct:
      if (!(sigma_log > 0.0) || !std::isfinite(sigma_log) || !std::isfinite(mu_log))
        throw ParameterDomainError("lognormal_product: sigma_log must be > 0");
      if (K < 1) throw ParameterDomainError("lognormal_product: K must be >= 1");
      break;
    default:
      break;
  }
}

bool DistributionSpec::bounded() const {
  return family == Family::Uniform || family == Family::SymmetricBeta ||
         family == Family::SmoothBounded || family == Family::BernoulliPM1;
}

double DistributionSpec::support_bound() const { return bounded() ? scale : kInf; }

std::string DistributionSpec::params_string() const {
  std::string out;
  auto add = [&](const char* key, double v) {
    if (!out.empty()) out += ';';
    out += key;
    out += '=';
    out += format_number(v);
  };
  switch (family) {
    case Family::SymmetricGamma: add("gamma", gamma); break;
    case Family::SymmetricBeta: add("mu", mu); add("nu", nu); break;
    case Family::SmoothBounded: add("eta", eta); break;
    case Family::PowerLaw: add("a", a); break;
    case Family::LogNormalProduct:
      add("mu_log", mu_log);
      add("sigma_log", sigma_log);
      add("K", K);
      break;
    default: break;
  }
  if (scale != 1.0) add("scale", scale);
  return out;
}

std::string DistributionSpec::label() const {
  std::string out(family_name(family));
  const std::string p = params_string();
  if (!p.empty()) out += "(" + p + ")";
  return out;
}

double pdf(const DistributionSpec& spec, double x) {
  spec.validate();
  if (!std::isfinite(x)) return 0.0;
  return unit_pdf(spec, std::abs(x) / spec.scale) / spec.scale;
}

double pdf_near_edge(const DistributionSpec& spec, double gap) {
  const double g = gap / spec.scale;
  if (g < 0.0) return 0.0;
  double unit = 0.0;
  if (spec.family == Family::SymmetricBeta || spec.family == Family::Uniform) {
    const double mu = beta_mu(spec);
    const double nu = beta_nu(spec);
    if (g == 0.0) {
      unit = mu < 0.0 ? kInf : (mu == 0.0 ? std::exp(log_beta_norm(mu, nu)) : 0.0);
    } else {
      unit = std::exp(log_beta_norm(mu, nu) + mu * std::log(g) + nu * std::log1p(-g));
    }
  } else if (spec.family == Family::SmoothBounded) {
    if (g == 0.0) {
      unit = spec.eta < 0.0 ? kInf : (spec.eta == 0.0 ? std::exp(log_smooth_norm(spec.eta)) : 0.0);
    } else {
      unit = std::exp(log_smooth_norm(spec.eta) + spec.eta * std::log(g * (2.0 - g)));
    }
  } else {
    const double t = spec.bounded() ? 1.0 - g : g;
    unit = unit_pdf(spec, t);
  }
  return unit / spec.scale;
}

double cdf(const DistributionSpec& spec, double x) {
  spec.validate();
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  const double t = std::abs(x) / spec.scale;
  const double m = unit_cdf_magnitude(spec, t);
  if (spec.family == Family::BernoulliPM1) {
    if (x < -spec.scale) return 0.0;
    if (x < spec.scale) return 0.5;
    return 1.0;
  }
  return x >= 0.0 ? 0.5 + 0.5 * m : 0.5 - 0.5 * m;
}

double sample(const DistributionSpec& spec, RandomStream& rng) {
  double v = 0.0;
  switch (spec.family) {
    case Family::Uniform:
      v = 2.0 * rng.uniform() - 1.0;
      break;
    case Family::Gaussian:
      v = rng.normal();
      break;
    case Family::Laplace:
      v = rng.sign() * rng.exponential();
      break;
    case Family::SymmetricGamma:
      v = rng.sign() * rng.gamma(spec.gamma);
      break;
    case Family::SymmetricBeta:
      if (spec.mu == 0.0) {
        v = rng.sign() * std::pow(rng.uniform(), 1.0 / (spec.nu + 1.0));
      } else {
        // |x| ~ Beta(nu + 1, mu + 1) as a ratio of Gamma variates
        const double g1 = rng.gamma(spec.nu + 1.0);
        const double g2 = rng.gamma(spec.mu + 1.0);
        v = rng.sign() * g1 / (g1 + g2);
      }
      break;
    case Family::SmoothBounded: {
      // x^2 ~ Beta(1/2, eta + 1)
      const double g1 = rng.gamma(0.5);
      const double g2 = rng.gamma(spec.eta + 1.0);
      v = rng.sign() * std::sqrt(g1 / (g1 + g2));
      break;
    }
    case Family::Cauchy:
      v = std::tan(kPi * (rng.uniform() - 0.5));
      break;
    case Family::PowerLaw: {
      // Cauchy envelope with M = 2 pi c_a; acceptance 1 / (2a sin(pi / 2a)) >= 1 / pi
      for (;;) {
        const double c = std::tan(kPi * (rng.uniform() - 0.5));
        const double x2 = c * c;
        const double accept = (1.0 + x2) / (2.0 * (1.0 + std::pow(x2, spec.a)));
        if (rng.uniform() < accept) {
          v = c;
          break;
        }
      }
      break;
    }
    case Family::BernoulliPM1:
      v = rng.sign();
      break;
    case Family::LogNormalProduct:
      v = rng.sign() * std::exp(spec.K * spec.mu_log +
                                spec.sigma_log * std::sqrt(static_cast<double>(spec.K)) * rng.normal());
      break;
  }
  return spec.scale * v;
}

bool has_closed_characteristic_function(const DistributionSpec& spec) {
  switch (spec.family) {
    case Family::Uniform:
    case Family::Gaussian:
    case Family::Laplace:
    case Family::SymmetricGamma:
    case Family::Cauchy:
    case Family::BernoulliPM1:
      return true;
    case Family::SymmetricBeta:
      return spec.mu == 0.0 && spec.nu == 0.0;
    case Family::SmoothBounded:
      return spec.eta == 0.0;
    case Family::PowerLaw:
      return spec.a == 1.0;
    default:
      return false;
  }
}

double characteristic_function(const DistributionSpec& spec, double omega, double tol) {
  spec.validate();
  const double w = std::abs(omega) * spec.scale;
  if (w == 0.0) return 1.0;
  const bool uniform_like = spec.family == Family::Uniform ||
                            (spec.family == Family::SymmetricBeta && spec.mu == 0.0 && spec.nu == 0.0) ||
                            (spec.family == Family::SmoothBounded && spec.eta == 0.0);
  if (uniform_like) return std::sin(w) / w;
  switch (spec.family) {
    case Family::Gaussian:
      return std::exp(-0.5 * w * w);
    case Family::Laplace:
      return 1.0 / (1.0 + w * w);
    case Family::SymmetricGamma:
      return std::exp(-0.5 * spec.gamma * std::log1p(w * w)) * std::cos(spec.gamma * std::atan(w));
    case Family::Cauchy:
      return std::exp(-w);
    case Family::PowerLaw:
      if (spec.a == 1.0) return std::exp(-w);
      break;
    case Family::BernoulliPM1:
      return std::cos(w);
    default:
      break;
  }
  DistributionSpec unit = spec;
  unit.scale = 1.0;
  return numeric_cf(unit, w, tol);
}

bool has_product_density(const ProductMarginal& pm) {
  if (pm.K < 1) return false;
  if (pm.base.family == Family::BernoulliPM1) return false;
  if (pm.K == 1) return true;
  const auto& b = pm.base;
  if (b.family == Family::Uniform) return true;
  if (b.family == Family::SymmetricBeta && b.mu == 0.0) return true;
  if (pm.K == 2) {
    return b.family == Family::Gaussian || b.family == Family::Laplace ||
           b.family == Family::SymmetricGamma || b.family == Family::Cauchy ||
           (b.family == Family::PowerLaw && b.a == 1.0);
  }
  return false;
}

double product_marginal_pdf(const ProductMarginal& pm, double z) {
  pm.base.validate();
  if (pm.K < 1) throw ParameterDomainError("product_marginal_pdf: K must be >= 1");
  if (!has_product_density(pm))
    throw DensityUnknownError("no closed-form product density for " + pm.base.label() +
                              " with K=" + std::to_string(pm.K) + "; use Monte Carlo");
  if (pm.K == 1) return pdf(pm.base, z);

  const int K = pm.K;
  const double scale_k = std::pow(pm.base.scale, K);
  const double t = std::abs(z) / scale_k;
  const auto& b = pm.base;
  double unit = 0.0;
  if (b.family == Family::Uniform || b.family == Family::SymmetricBeta) {
    const double nu = beta_nu(b);
    if (t >= 1.0) return 0.0;
    if (t == 0.0) return (nu < 0.0 || K > 1) ? kInf : 0.0;
    const double l = -std::log(t);
    unit = std::exp(K * std::log1p(nu) + nu * std::log(t) + (K - 1) * std::log(l) - special::kLn2 -
                    special::log_gamma(static_cast<double>(K)));
  } else if (b.family == Family::Gaussian) {
    unit = special::bessel_k0(t) / kPi;
  } else if (b.family == Family::Laplace || b.family == Family::SymmetricGamma) {
    const double g = gamma_shape(b);
    if (t == 0.0) return kInf;
    unit = std::exp((g - 1.0) * std::log(t) - 2.0 * special::log_gamma(g)) *
           special::bessel_k0(2.0 * std::sqrt(t));
  } else {
    // Cauchy: ln(t^2) / (pi^2 (t^2 - 1))
    if (t == 0.0) return kInf;
    const double w = t * t - 1.0;
    const double ratio = std::abs(w) < 1e-8 ? 1.0 - 0.5 * w : std::log1p(w) / w;
    unit = ratio / (kPi * kPi);
  }
  return unit / scale_k;
}

double sample_product(const ProductMarginal& pm, RandomStream& rng) {
  double v = 1.0;
  for (int i = 0; i < pm.K; ++i) v *= sample(pm.base, rng);
  return v;
}

LogMoments log_abs_moments(const DistributionSpec& base) {
  base.validate();
  static std::mutex mutex;
  static std::map<std::string, LogMoments> cache;
  const std::string key = base.label();
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  RandomStream rng(0x5EEDF00DULL);
  constexpr long kDraws = 10'000'000;
  double mean = 0.0;
  double m2 = 0.0;
  long n = 0;
  for (long i = 0; i < kDraws; ++i) {
    const double v = std::abs(sample(base, rng));
    if (v == 0.0) continue;
    const double l = std::log(v);
    ++n;
    const double d = l - mean;
    mean += d / n;
    m2 += d * (l - mean);
  }
  LogMoments m{mean, std::sqrt(m2 / (n - 1))};
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(key, m);
  return m;
}

DistributionSpec lognormal_surrogate(const DistributionSpec& base, int K) {
  const LogMoments m = log_abs_moments(base);
  return DistributionSpec::lognormal_product(m.mean, m.sd, K);
}

}  // namespace realspec
