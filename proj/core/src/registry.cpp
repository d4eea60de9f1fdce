#include "realspec/registry.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <sstream>

#include "realspec/error.hpp"

namespace realspec {
namespace {

using B = ExactTerm::Basis;

ExactTerm rat(long long num, long long den = 1) { return {num, den, B::One, 0, 1}; }
ExactTerm pi(long long num, long long den = 1) { return {num, den, B::Pi, 0, 1}; }
ExactTerm inv_pi(long long num, long long den = 1) { return {num, den, B::InvPi, 0, 1}; }
ExactTerm ln2(long long num, long long den = 1) { return {num, den, B::Ln2, 0, 1}; }
ExactTerm pow2(long long exp_num, long long exp_den) {
  const long long g = std::gcd(exp_num, exp_den);
  return {1, 1, B::Pow2, exp_num / g, exp_den / g};
}

// reference values quoted to six decimals
ExactValue quoted(std::string label, long long micro, long long scale = 1000000,
                  double tol = 1e-6) {
  ExactValue v;
  v.label = std::move(label);
  v.provenance = "reference";
  v.tolerance = tol;
  v.terms = {rat(micro, scale)};
  return v;
}

ExactValue exact(std::string label, std::vector<ExactTerm> terms) {
  ExactValue v;
  v.label = std::move(label);
  v.provenance = "exact";
  v.terms = std::move(terms);
  return v;
}

std::vector<ExactValue> build() {
  std::vector<ExactValue> r;
  r.push_back(exact("uniform", {rat(49, 72)}));
  r.push_back(exact("beta_nu_0", {rat(49, 72)}));
  r.push_back(exact("laplace", {rat(11, 15)}));
  r.push_back(exact("gamma_1", {rat(11, 15)}));
  {
    ExactValue c = exact("cauchy", {rat(3, 4)});
    c.provenance = "exact_numerical";
    c.tolerance = 1e-6;
    r.push_back(c);
  }
  r.push_back(exact("gaussian", {pow2(-1, 2)}));
  r.push_back(exact("bernoulli_pm1", {rat(5, 8)}));
  r.push_back(exact("tent", {rat(16143, 22400), ln2(-23, 1008)}));
  r.push_back(exact("beta_mu_1", {rat(16143, 22400), ln2(-23, 1008)}));
  r.push_back(exact("beta_nu_1", {rat(3653, 5760), ln2(1, 240)}));
  r.push_back(exact("beta_nu_2", {rat(8905, 14112)}));
  r.push_back(exact("beta_nu_4", {rat(45332489, 72144072)}));
  r.push_back(exact("beta_nu_-0.5", {rat(41, 48), pi(-1, 48), ln2(-1, 24)}));
  r.push_back(exact("smooth_eta_1", {rat(489341, 705600)}));
  r.push_back(exact("smooth_eta_2", {rat(180521487191LL, 258564354048LL)}));
  r.push_back(exact("gamma_0.5", {inv_pi(1, 2), rat(5, 8)}));
  r.push_back(exact("gamma_2", {rat(10259, 15015)}));
  r.push_back(exact("gamma_3", {rat(640561, 969969)}));
  r.push_back(exact("product_gaussian_K2", {pi(1, 4)}));
  r.push_back(exact("decorrelated_gaussian_K2", {rat(11, 15)}));
  for (long long n = 2; n <= 8; ++n) {
    ExactValue g = exact("ginibre_all_real_n" + std::to_string(n), {pow2(-n * (n - 1), 4)});
    g.n = static_cast<int>(n);
    r.push_back(g);
  }

  for (auto [label, value] : {std::pair{"limit_nu_to_infinity", 5LL}, {"limit_gamma_to_infinity", 5LL},
                              {"limit_eta_to_minus_one", 5LL}}) {
    ExactValue v = exact(label, {rat(value, 8)});
    v.provenance = "limit";
    r.push_back(v);
  }
  {
    ExactValue v = exact("limit_nu_to_minus_one", {rat(7, 8)});
    v.provenance = "limit";
    r.push_back(v);
  }

  // symmetric Beta, mu = 0
  r.push_back(quoted("beta_nu_-4095/4096", 874959));
  r.push_back(quoted("beta_nu_-7/8", 849868));
  r.push_back(quoted("beta_nu_3/2", 632888));
  r.push_back(quoted("beta_nu_3", 629280));
  r.push_back(quoted("beta_nu_200", 625078));
  r.push_back(quoted("beta_nu_400", 625039));
  // symmetric Beta, nu = 0
  r.push_back(quoted("beta_mu_-1/2", 654534));
  r.push_back(quoted("beta_mu_1/2", 695759));
  r.push_back(quoted("beta_mu_3/4", 700850));
  // symmetric Gamma
  r.push_back(quoted("gamma_1/4", 824051));
  r.push_back(quoted("gamma_10", 633238));
  r.push_back(quoted("gamma_100", 627494));
  // smooth family
  r.push_back(quoted("smooth_eta_5", 702769));
  r.push_back(quoted("smooth_eta_10", 704785));
  r.push_back(quoted("smooth_eta_20", 705906));
  r.push_back(quoted("smooth_eta_50", 706616));
  {
    ExactValue v = quoted("arcsine", 662, 1000, 1e-3);
    v.provenance = "approximate";
    r.push_back(v);
  }
  // power law 1 / (1 + |x|^{2a})
  r.push_back(quoted("power_law_a2", 7076005, 10000000, 1e-7));
  r.push_back(quoted("power_law_a3", 694185));
  // Hadamard products
  r.push_back(quoted("hadamard_gaussian_K2", 757164));
  r.push_back(quoted("hadamard_laplace_K2", 773849));
  const long long uniform_k[] = {738779, 767331, 782558, 792032, 798561, 803376};
  for (int k = 2; k <= 7; ++k)
    r.push_back(quoted("hadamard_uniform_K" + std::to_string(k), uniform_k[k - 2]));

  for (auto& v : r) {
    v.value = 0.0;
    for (const auto& t : v.terms) v.value += t.evaluate();
  }
  return r;
}

}  // namespace

double ExactTerm::evaluate() const {
  const double c = static_cast<double>(num) / static_cast<double>(den);
  switch (basis) {
    case B::One:
      return c;
    case B::Pi:
      return c * std::numbers::pi;
    case B::InvPi:
      return c * std::numbers::inv_pi;
    case B::Ln2:
      return c * std::numbers::ln2;
    case B::Pow2:
      return c * std::exp2(static_cast<double>(exp_num) / static_cast<double>(exp_den));
  }
  return 0.0;
}

std::string ExactTerm::to_string() const {
  std::string s = std::to_string(num);
  if (den != 1) s += "/" + std::to_string(den);
  switch (basis) {
    case B::One:
      return s;
    case B::Pi:
      return s + "*pi";
    case B::InvPi:
      return num == 1 && den != 1 ? "1/(" + std::to_string(den) + "*pi)" : s + "/pi";
    case B::Ln2:
      return s + "*ln2";
    case B::Pow2: {
      std::string e = std::to_string(exp_num);
      if (exp_den != 1) e += "/" + std::to_string(exp_den);
      return (num == 1 && den == 1 ? "" : s + "*") + "2^(" + e + ")";
    }
  }
  return s;
}

std::string ExactValue::expression() const {
  std::string s;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    std::string t = terms[i].to_string();
    if (i > 0) s += (t.front() == '-') ? " - " + t.substr(1) : " + " + t;
    else s = t;
  }
  return s;
}

const std::vector<ExactValue>& registry() {
  static const std::vector<ExactValue> entries = build();
  return entries;
}

const ExactValue& exact_probability(std::string_view label) {
  for (const auto& v : registry())
    if (v.label == label) return v;
  throw LookupError("unknown registry label: " + std::string(label));
}

std::string registry_csv() {
  std::ostringstream out;
  out << "label,value,tolerance,provenance,expression\n";
  char buf[64];
  for (const auto& v : registry()) {
    std::snprintf(buf, sizeof buf, "%.17g", v.value);
    out << v.label << ',' << buf << ',';
    std::snprintf(buf, sizeof buf, "%.3g", v.tolerance);
    out << buf << ',' << v.provenance << ',' << v.expression() << '\n';
  }
  return out.str();
}

}  // namespace realspec
