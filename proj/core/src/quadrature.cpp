#include "realspec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "realspec/error.hpp"
#include "realspec/integrate.hpp"
#include "realspec/law.hpp"

namespace realspec {
namespace {

constexpr double kPi = std::numbers::pi;

struct Accumulator {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;

  void add(const integrate::Result& r) {
    value += r.value;
    error += r.error;
    evaluations += r.evaluations;
    converged = converged && r.converged;
  }
};

// [0, b_0], [b_0, b_1], ..., [b_last, inf)
void integrate_half_line(Accumulator& acc, const std::function<double(double)>& f,
                         std::vector<double> breaks, double tol) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  double a = 0.0;
  const double piece_tol = tol / static_cast<double>(breaks.size() + 1);
  for (double b : breaks) {
    if (!(b > a) || !std::isfinite(b)) continue;
    acc.add(integrate::tanh_sinh(f, a, b, piece_tol, 1e-13, 10));
    a = b;
  }
  acc.add(integrate::tanh_sinh_upper([&](double x, double) { return f(x); }, a, piece_tol, 1e-13, 10));
}

DistributionSpec unit_spec(DistributionSpec s) {
  s.scale = 1.0;
  return s;
}

void check_quadrature_domain(const DistributionSpec& spec) {
  spec.validate();
  if (spec.family == Family::SmoothBounded && spec.eta < -0.6)
    throw UnsupportedRouteError("quadrature is unstable for smooth_bounded with eta < -0.6; use Monte Carlo");
}

QuadratureResult finish(const Accumulator& acc, double value, double error, double tol,
                        QuadratureMethod method, bool reduced, const std::string& what) {
  QuadratureResult r;
  r.value = value;
  r.abs_error_estimate = error;
  r.evaluations = acc.evaluations;
  r.method = method;
  r.reduced = reduced;
  if (!acc.converged || !(error <= tol)) {
    throw ConvergenceError(what + ": error estimate " + std::to_string(error) +
                               " exceeds tolerance " + std::to_string(tol),
                           value, error);
  }
  return r;
}

double default_tolerance(const ConvolutionDensity& q) {
  return q.form() == ConvolutionDensity::Form::ClosedForm ? 1e-6 : 1e-4;
}

// ---------------------------------------------------------------------------
// convolution route

QuadratureResult reduced_convolution_route(const SymmetricLaw& law, const ConvolutionDensity& q,
                                           double tol) {
  Accumulator acc;
  auto g = [&](double t) { return t * law.product(t * t) * q.upper_tail(2.0 * t); };
  if (law.bounded()) {
    const double u = law.u;
    acc.add(integrate::tanh_sinh(g, 0.0, 0.5 * u, tol / 16.0, 1e-13, 10));
    acc.add(integrate::tanh_sinh(g, 0.5 * u, u, tol / 16.0, 1e-13, 10));
  } else {
    integrate_half_line(acc, g, {0.5, 1.0, 2.0, 4.0, 8.0}, tol / 8.0);
  }
  const double error = 4.0 * acc.error + q.max_error_estimate();
  return finish(acc, 0.5 + 4.0 * acc.value, error, tol, QuadratureMethod::ConvolutionRoute, true,
                "convolution route (" + law.label + ")");
}

QuadratureResult tensor_convolution_route(const SymmetricLaw& law, const ConvolutionDensity& q,
                                          double tol) {
  Accumulator acc;
  std::size_t inner_evals = 0;
  double inner_error = 0.0;
  bool inner_ok = true;
  const double inner_tol = tol / 4.0;
  const double outer_tol = tol / 8.0;

  // beyond the table the tail is below 1e-15 and is dropped (added to the
  // error estimate below)
  const double t_cap = q.tabulated_limit();
  const double dropped = std::isfinite(t_cap) ? q.upper_tail(t_cap) : 0.0;
  auto T = [&](double t) { return t >= t_cap ? 0.0 : q.upper_tail(t); };

  auto note = [&](const integrate::Result& r) {
    inner_evals += r.evaluations;
    inner_error = std::max(inner_error, r.error);
    inner_ok = inner_ok && r.converged;
    return r.value;
  };

  if (law.bounded()) {
    const double u = law.u;
    // I(x) = int_0^u p(y) T(2 sqrt(xy)) dy, kink where 2 sqrt(xy) = u
    auto inner = [&](double x) {
      auto to_edge = [&](double y, double, double to_b) {
        return (to_b < 0.5 * u ? law.at_edge(to_b) : law.pdf(y)) * T(2.0 * std::sqrt(x * y));
      };
      auto plain = [&](double y) { return law.pdf(y) * T(2.0 * std::sqrt(x * y)); };
      const double split = u * u / (4.0 * x);
      if (split >= u) return note(integrate::tanh_sinh(to_edge, 0.0, u, inner_tol, 1e-13, 10));
      return note(integrate::tanh_sinh(plain, 0.0, split, inner_tol / 2.0, 1e-13, 10)) +
             note(integrate::tanh_sinh(to_edge, split, u, inner_tol / 2.0, 1e-13, 10));
    };
    acc.add(integrate::tanh_sinh([&](double x) { return law.pdf(x) * inner(x); }, 0.0, 0.25 * u,
                                 outer_tol / 2.0, 1e-13, 10));
    acc.add(integrate::tanh_sinh(
        [&](double x, double, double to_b) {
          return (to_b < 0.5 * u ? law.at_edge(to_b) : law.pdf(x)) * inner(x);
        },
        0.25 * u, u,
        outer_tol / 2.0, 1e-13, 10));
  } else {
    auto inner = [&](double x) {
      Accumulator in;
      auto h = [&](double y) { return law.pdf(y) * T(2.0 * std::sqrt(x * y)); };
      integrate_half_line(in, h, {0.25 / x, 1.0 / x, 4.0 / x, 1.0, 4.0, 16.0}, inner_tol);
      inner_evals += in.evaluations;
      inner_error = std::max(inner_error, in.error);
      inner_ok = inner_ok && in.converged;
      return in.value;
    };
    integrate_half_line(acc, [&](double x) { return law.pdf(x) * inner(x); }, {1.0, 2.0, 4.0, 8.0},
                        outer_tol);
  }
  acc.evaluations += inner_evals;
  acc.converged = acc.converged && inner_ok;
  const double error = 4.0 * (acc.error + 0.5 * inner_error) + q.max_error_estimate() + dropped;
  return finish(acc, 0.5 + 4.0 * acc.value, error, tol, QuadratureMethod::ConvolutionRoute, false,
                "convolution route (" + law.label + ")");
}

// ---------------------------------------------------------------------------
// characteristic-function route

struct RadialLaw {
  SymmetricLaw law;
  std::function<double(double)> radial;  // t p_2(t^2)
};

RadialLaw radial_law(const SymmetricLaw& law) {
  RadialLaw r{law, {}};
  if (law.has_product()) {
    r.radial = [p = law.product](double t) { return t * p(t * t); };
  } else {
    r.radial = [law](double t) { return t * numeric_product_density(law, t * t, 1e-13); };
  }
  return r;
}

// G(w) = int_0^u f(t) sin(2 w t) dt, summed over half periods of the sine
double radial_sine_transform(const RadialLaw& rl, double w, double tol, Accumulator& acc) {
  const double half = kPi / (2.0 * w);
  auto f = [&](double t) { return rl.radial(t) * std::sin(2.0 * w * t); };
  if (rl.law.bounded()) {
    const double u = rl.law.u;
    const int full = static_cast<int>(std::floor(u / half));
    const double piece_tol = tol / (full + 1.0);
    double sum = 0.0;
    for (int k = 0; k < full; ++k) {
      const auto r = integrate::tanh_sinh(f, k * half, (k + 1) * half, piece_tol, 1e-13, 10);
      sum += r.value;
      acc.evaluations += r.evaluations;
      acc.error += r.error;
      acc.converged = acc.converged && r.converged;
    }
    if (full * half < u) {
      const auto r = integrate::tanh_sinh(f, full * half, u, piece_tol, 1e-13, 10);
      sum += r.value;
      acc.evaluations += r.evaluations;
      acc.error += r.error;
      acc.converged = acc.converged && r.converged;
    }
    return sum;
  }

  std::vector<double> partial;
  double sum = 0.0;
  int negligible = 0;
  // the first half period can dwarf the scale of the law; split it geometrically
  auto first_panel = [&]() {
    integrate::Result out;
    out.converged = true;
    double a = 0.0;
    for (double b = std::min(half, 0.25);; b = std::min(2.0 * b, half)) {
      const auto r = integrate::tanh_sinh(f, a, b, 0.01 * tol, 1e-13, 10);
      out.value += r.value;
      out.error += r.error;
      out.evaluations += r.evaluations;
      out.converged = out.converged && r.converged;
      a = b;
      if (b >= half) break;
    }
    return out;
  };
  for (int k = 0; k < 4000; ++k) {
    const auto r = k == 0 ? first_panel()
                          : integrate::tanh_sinh(f, k * half, (k + 1) * half, 0.1 * tol, 1e-13, 10);
    acc.evaluations += r.evaluations;
    acc.converged = acc.converged && r.converged;
    sum += r.value;
    partial.push_back(sum);
    if (std::abs(r.value) <= 1e-18 * std::max(1.0, std::abs(sum))) {
      if (++negligible >= 2 && k >= 3) return sum;
    } else {
      negligible = 0;
    }
    if (k >= 12) {
      const auto [est, change] = integrate::levin_u(partial, 8);
      if (change <= tol) {
        acc.error += change;
        return est;
      }
    }
  }
  acc.converged = false;
  return sum;
}

}  // namespace

std::string_view method_name(QuadratureMethod m) {
  return m == QuadratureMethod::ConvolutionRoute ? "conv" : "cf";
}

QuadratureResult prob_real_convolution_route(const SymmetricLaw& law, const ConvolutionDensity& q,
                                             double tol, Reduction reduction) {
  if (law.discrete) throw UnsupportedRouteError("convolution route: " + law.label + " has no density");
  if (tol <= 0.0) tol = default_tolerance(q);
  if (reduction == Reduction::Auto && law.has_product()) return reduced_convolution_route(law, q, tol);
  return tensor_convolution_route(law, q, tol);
}

QuadratureResult prob_real_convolution_route(const DistributionSpec& spec, double tol,
                                             Reduction reduction) {
  check_quadrature_domain(spec);
  if (spec.discrete())
    throw UnsupportedRouteError("convolution route: " + spec.label() + " has no density");
  const DistributionSpec unit = unit_spec(spec);
  const SymmetricLaw law = symmetric_law(unit);
  const ConvolutionDensity q = convolution(unit);
  return prob_real_convolution_route(law, q, tol, reduction);
}

QuadratureResult prob_real_product_law(const ProductMarginal& pm, double tol, Reduction reduction) {
  ProductMarginal unit{unit_spec(pm.base), pm.K};
  check_quadrature_domain(unit.base);
  const SymmetricLaw law = symmetric_law(unit);  // throws DensityUnknownError
  const ConvolutionDensity q = convolution(unit);
  return prob_real_convolution_route(law, q, tol, reduction);
}

QuadratureResult prob_real_cf_route(const DistributionSpec& spec, double tol) {
  check_quadrature_domain(spec);
  if (tol <= 0.0) tol = 1e-6;
  const DistributionSpec unit = unit_spec(spec);
  const SymmetricLaw law = symmetric_law(unit);

  Accumulator acc;
  Accumulator inner;
  std::function<double(double, double)> G;
  if (law.discrete) {
    // atoms at +-1: x = y = 1 with probability 1/4 in the positive quadrant
    G = [](double w, double) { return 0.25 * std::sin(2.0 * w); };
  } else {
    auto rl = std::make_shared<RadialLaw>(radial_law(law));
    G = [rl, &inner](double w, double g_tol) { return radial_sine_transform(*rl, w, g_tol, inner); };
  }
  const double cf_tol = 1e-13;
  auto h = [&](double w) {
    if (!(w > 0.0)) return 0.0;
    const double c = characteristic_function(unit, w, cf_tol);
    const double c2 = c * c;
    if (c2 == 0.0) return 0.0;
    ++acc.evaluations;
    return c2 / w * G(w, 0.1 * tol * std::min(w, 1.0));
  };

  // P = 1 - (4/pi) I
  const double outer_tol = kPi * tol / 8.0;
  double integral = 0.0;
  double error = 0.0;

  if (law.bounded() || law.discrete) {
    // tail components oscillate at multiples of 2u; full periods pi/u leave
    // panel sums that decay smoothly in k, which suits the Levin u transform
    const double period = kPi / (law.u > 0.0 ? law.u : 1.0);
    const auto& g24 = integrate::gauss_legendre(24);
    const auto& g16 = integrate::gauss_legendre(16);
    std::vector<double> partial;
    std::vector<double> changes;
    double sum = 0.0;
    double panel_error = 0.0;
    bool done = false;
    for (int k = 0; k < 200 && !done; ++k) {
      const double mid = (k + 0.5) * period;
      double s24 = 0.0;
      double s16 = 0.0;
      for (int i = 0; i < 24; ++i) s24 += g24.weights[i] * h(mid + 0.5 * period * g24.nodes[i]);
      for (int i = 0; i < 16; ++i) s16 += g16.weights[i] * h(mid + 0.5 * period * g16.nodes[i]);
      s24 *= 0.5 * period;
      s16 *= 0.5 * period;
      panel_error += std::abs(s24 - s16);
      sum += s24;
      partial.push_back(sum);
      if (k >= 8) {
        const auto [est, change] = integrate::levin_u(partial, 8);
        changes.push_back(change);
        // changes decaying like k^-q leave about change k / (q - 1) to come
        double drift = change * (k + 1);
        if (changes.size() > 4) {
          const double back = changes[changes.size() - 5];
          const double q = std::log(back / change) / std::log((k + 1.0) / (k - 3.0));
          if (std::isfinite(q) && q > 1.0) drift = change * std::max(1.0, (k + 1.0) / (q - 1.0));
          if (drift <= 0.5 * outer_tol) {
            integral = est;
            error = drift + panel_error;
            done = true;
          }
        }
      }
    }
    if (!done) {
      integral = sum;
      error = std::numeric_limits<double>::infinity();
      acc.converged = false;
    }
  } else {
    Accumulator outer;
    double a = 0.0;
    int quiet = 0;
    bool closed = false;
    std::vector<double> pieces;
    for (double b = 0.5; b <= 1073741824.0; b *= 2.0) {
      const auto r = integrate::tanh_sinh(h, a, b, outer_tol / 32.0, 1e-13, 10);
      outer.add(r);
      pieces.push_back(r.value);
      a = b;
      if (b >= 4.0 && std::abs(r.value) <= 1e-4 * outer_tol) {
        if (++quiet >= 2) {
          closed = true;
          break;
        }
      } else {
        quiet = 0;
      }
      // algebraic decay makes the doubling pieces geometric: close the tail
      // once two successive ratios agree
      const std::size_t m = pieces.size();
      if (b >= 64.0 && m >= 3) {
        const double rho = pieces[m - 1] / pieces[m - 2];
        const double rho_before = pieces[m - 2] / pieces[m - 3];
        if (rho > 0.0 && rho < 0.9 && rho_before > 0.0 && rho_before < 0.9) {
          const double tail = pieces[m - 1] * rho / (1.0 - rho);
          const double spread = std::abs(tail - pieces[m - 1] * rho_before / (1.0 - rho_before));
          if (spread <= 0.125 * outer_tol) {
            outer.value += tail;
            outer.error += 2.0 * spread;
            closed = true;
            break;
          }
        }
      }
    }
    if (!closed) outer.converged = false;
    integral = outer.value;
    error = outer.error;
    acc.converged = outer.converged;
    acc.evaluations += outer.evaluations;
  }
  acc.evaluations += inner.evaluations;
  acc.converged = acc.converged && inner.converged;
  const double total_error = (4.0 / kPi) * error + 0.5 * tol * (inner.converged ? 0.0 : 1.0);
  return finish(acc, 1.0 - (4.0 / kPi) * integral, total_error, tol,
                QuadratureMethod::CharacteristicRoute, !law.discrete,
                "characteristic-function route (" + spec.label() + ")");
}

}  // namespace realspec
