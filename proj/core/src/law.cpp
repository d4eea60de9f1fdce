#include "realspec/law.hpp"

#include <cmath>
#include <limits>

#include "realspec/error.hpp"
#include "realspec/integrate.hpp"
#include "realspec/special.hpp"

namespace realspec {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DistributionSpec unit(DistributionSpec s) {
  s.scale = 1.0;
  return s;
}

// Unit-scale p(t), t >= 0, with the normalization hoisted out of the
// per-call path for the families the quadratures hit hardest.
std::function<double(double)> fast_pdf(const DistributionSpec& s) {
  using special::log_gamma;
  if (s.family == Family::SymmetricGamma && s.gamma != 1.0) {
    const double g = s.gamma;
    const double c = -std::log(2.0) - log_gamma(g);
    return [g, c](double t) {
      if (t == 0.0) return g < 1.0 ? kInf : 0.0;
      return std::exp((g - 1.0) * std::log(t) - t + c);
    };
  }
  if (s.family == Family::SymmetricBeta) {
    const double mu = s.mu;
    const double nu = s.nu;
    const double c = log_gamma(mu + nu + 2.0) - std::log(2.0) - log_gamma(mu + 1.0) -
                     log_gamma(nu + 1.0);
    return [mu, nu, c](double t) {
      if (t > 1.0) return 0.0;
      if (t == 0.0) return nu < 0.0 ? kInf : (nu == 0.0 ? std::exp(c) : 0.0);
      if (t == 1.0) return mu < 0.0 ? kInf : (mu == 0.0 ? std::exp(c) : 0.0);
      return std::exp(c + mu * std::log1p(-t) + nu * std::log(t));
    };
  }
  if (s.family == Family::Uniform) return [](double t) { return t <= 1.0 ? 0.5 : 0.0; };
  if (s.family == Family::Gaussian) {
    const double c = 1.0 / std::sqrt(2.0 * special::kPi);
    return [c](double t) { return c * std::exp(-0.5 * t * t); };
  }
  return [s](double x) { return pdf(s, x); };
}

}  // namespace

double SymmetricLaw::tail_quantile(double eps) const {
  if (bounded()) return u;
  // 2 int_t^inf p, doubling t until it drops below eps
  double t = 1.0;
  for (int i = 0; i < 200; ++i) {
    auto r = integrate::tanh_sinh_upper([&](double x, double) { return 2.0 * pdf(x); }, t, 1e-18,
                                        1e-6, 8);
    if (r.value < eps) return t;
    t *= 2.0;
  }
  return t;
}

SymmetricLaw symmetric_law(const DistributionSpec& spec) {
  spec.validate();
  SymmetricLaw law;
  const DistributionSpec s = unit(spec);
  law.label = spec.label();
  law.scale = spec.scale;
  law.u = spec.bounded() ? 1.0 : kInf;
  law.discrete = spec.discrete();
  if (law.discrete) return law;
  law.pdf = fast_pdf(s);
  if (spec.bounded()) law.edge = [s](double gap) { return pdf_near_edge(s, gap); };
  ProductMarginal two{s, 2};
  if (has_product_density(two)) law.product = [two](double z) { return product_marginal_pdf(two, z); };
  return law;
}

SymmetricLaw symmetric_law(const ProductMarginal& pm) {
  if (pm.K == 1) return symmetric_law(pm.base);
  if (!has_product_density(pm))
    throw DensityUnknownError("no closed-form product density for " + pm.base.label() +
                              " with K=" + std::to_string(pm.K) + "; use Monte Carlo");
  SymmetricLaw law;
  const DistributionSpec b = unit(pm.base);
  law.label = pm.base.label() + "^K=" + std::to_string(pm.K);
  law.scale = std::pow(pm.base.scale, pm.K);
  law.u = pm.base.bounded() ? 1.0 : kInf;
  ProductMarginal one{b, pm.K};
  law.pdf = [one](double x) { return product_marginal_pdf(one, x); };
  if (pm.base.bounded()) law.edge = [one](double gap) { return product_marginal_pdf(one, 1.0 - gap); };
  // the product of two K-fold products is a 2K-fold product
  ProductMarginal twice{b, 2 * pm.K};
  if (has_product_density(twice))
    law.product = [twice](double z) { return product_marginal_pdf(twice, z); };
  return law;
}

double numeric_product_density(const SymmetricLaw& law, double s, double tol) {
  if (!(s > 0.0)) return kInf;
  const double r = std::sqrt(s);
  auto f = [&](double w) { return law.pdf(r * std::exp(w)) * law.pdf(r * std::exp(-w)); };
  if (law.bounded()) {
    if (s >= law.u * law.u) return 0.0;
    const double W = std::log(law.u / r);
    // near w = W the first factor sits at the support edge
    auto g = [&](double w, double, double to_b) {
      const double gap = -law.u * std::expm1(-to_b);
      const double first = gap < 0.5 * law.u ? law.at_edge(gap) : law.pdf(r * std::exp(w));
      return first * law.pdf(r * std::exp(-w));
    };
    return 4.0 * integrate::tanh_sinh(g, 0.0, W, tol, 1e-12, 10).value;
  }
  // split at w = 1, 2, 4, ... then the upper tail
  double total = 0.0;
  double lo = 0.0;
  for (double hi = 1.0; hi <= 8.0; hi *= 2.0) {
    total += integrate::tanh_sinh(f, lo, hi, tol, 1e-12, 10).value;
    lo = hi;
  }
  total += integrate::tanh_sinh_upper([&](double w, double) { return f(w); }, lo, tol, 1e-12, 10).value;
  return 4.0 * total;
}

}  // namespace realspec
