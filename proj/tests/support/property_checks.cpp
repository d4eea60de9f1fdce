#include "support/property_checks.hpp"

#include <Eigen/QR>

#include <cmath>
#include <sstream>
#include <vector>

#include "realspec/analytic.hpp"
#include "realspec/distributions.hpp"
#include "realspec/matrix_lab.hpp"
#include "realspec/registry.hpp"

using namespace realspec;

namespace checks {
namespace {

ExperimentConfig single(const DistributionSpec& spec, long long samples, std::uint64_t seed) {
  ExperimentConfig c;
  c.n = 2;
  c.K = 1;
  c.spec = spec;
  c.samples = samples;
  c.seed = seed;
  return c;
}

Matrix random_orthogonal(int n, RandomStream& rng) {
  const Matrix g = random_matrix(n, DistributionSpec::gaussian(), rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) *= -1.0;
  return q;
}

}  // namespace

Outcome scale_invariance() {
  Outcome o;
  std::ostringstream d;
  const DistributionSpec families[] = {DistributionSpec::gaussian(), DistributionSpec::laplace(),
                                       DistributionSpec::cauchy(), DistributionSpec::symmetric_gamma(0.5),
                                       DistributionSpec::power_law(2.0)};
  std::uint64_t seed = 100;
  for (auto s : families) {
    const auto a = estimate_Pnk(single(s, 200000, seed++));
    s.scale = 10.0;
    const auto b = estimate_Pnk(single(s, 200000, seed++));
    const double joint = std::hypot(a.std_error(2), b.std_error(2));
    ++o.checked;
    if (std::abs(a.phat(2) - b.phat(2)) > 3 * joint) {
      ++o.violations;
      d << s.label() << ": " << a.phat(2) << " vs " << b.phat(2) << "; ";
    }
  }
  RandomStream rng(42);
  for (int t = 0; t < 2000; ++t) {
    const int n = 2 + t % 5;
    const Matrix m = random_matrix(n, DistributionSpec::gaussian(), rng);
    const int k = count_real_eigenvalues(m);
    for (double c : {1e-3, 0.5, 3.0, 1e5}) {
      ++o.checked;
      if (count_real_eigenvalues(c * m) != k) {
        ++o.violations;
        d << "count changed under scaling by " << c << "; ";
      }
    }
  }
  o.detail = d.str();
  return o;
}

Outcome symmetry() {
  Outcome o;
  std::ostringstream d;
  const DistributionSpec families[] = {
      DistributionSpec::uniform(),          DistributionSpec::gaussian(),
      DistributionSpec::laplace(),          DistributionSpec::symmetric_gamma(0.25),
      DistributionSpec::symmetric_beta(0.5, -0.5), DistributionSpec::smooth_bounded(2.0),
      DistributionSpec::cauchy(),           DistributionSpec::power_law(3.0),
      DistributionSpec::lognormal_product(-0.6, 1.1, 3)};
  for (const auto& s : families) {
    const auto q = convolution(s);
    for (double x = 0.0137; x < 5.0; x *= 1.3) {
      o.checked += 2;
      if (pdf(s, x) != pdf(s, -x)) {
        ++o.violations;
        d << s.label() << " pdf at " << x << "; ";
      }
      if (q(x) != q(-x)) {
        ++o.violations;
        d << s.label() << " q at " << x << "; ";
      }
    }
  }
  const ProductMarginal marginals[] = {{DistributionSpec::uniform(), 4},
                                       {DistributionSpec::gaussian(), 2},
                                       {DistributionSpec::laplace(), 2},
                                       {DistributionSpec::cauchy(), 2}};
  for (const auto& pm : marginals) {
    for (double z = 0.0137; z < 5.0; z *= 1.3) {
      ++o.checked;
      if (product_marginal_pdf(pm, z) != product_marginal_pdf(pm, -z)) {
        ++o.violations;
        d << pm.base.label() << " K=" << pm.K << " at " << z << "; ";
      }
    }
  }
  o.detail = d.str();
  return o;
}

Outcome discriminant_schur_agreement() {
  Outcome o;
  std::ostringstream d;
  const double eig_tol = 1e-9;
  long long ties = 0;
  RandomStream rng(42);
  const DistributionSpec families[] = {DistributionSpec::gaussian(), DistributionSpec::uniform(),
                                       DistributionSpec::laplace(), DistributionSpec::cauchy()};
  for (const auto& s : families) {
    for (int t = 0; t < 2500; ++t) {
      const Matrix m = random_matrix(2, s, rng);
      const double a = m(0, 0), b = m(0, 1), c = m(1, 0), dd = m(1, 1);
      const double disc = (a - dd) * (a - dd) + 4 * b * c;
      const double scale2 = m.squaredNorm();
      const bool tie = std::abs(disc) < eig_tol * scale2;
      ++o.checked;
      if (tie) {
        ++ties;
        continue;
      }
      if (count_real_eigenvalues(m) != count_real_eigenvalues_schur(m, eig_tol)) {
        ++o.violations;
        d << s.label() << " disagreement at disc " << disc << "; ";
      }
    }
  }
  if (ties * 10000 >= o.checked) {
    ++o.violations;
    d << ties << " ties exceed 0.01%; ";
  }
  d << ties << " ties in " << o.checked;
  o.detail = d.str();
  return o;
}

Outcome similarity_invariance() {
  Outcome o;
  std::ostringstream d;
  RandomStream rng(42);
  for (int t = 0; t < 1000; ++t) {
    const int n = 2 + t % 6;
    const Matrix m = random_matrix(n, DistributionSpec::gaussian(), rng);
    const Matrix q = random_orthogonal(n, rng);
    ++o.checked;
    const int k = count_real_eigenvalues(m);
    const int kq = count_real_eigenvalues(q * m * q.transpose());
    if (k != kq) {
      ++o.violations;
      d << "n=" << n << " trial " << t << ": " << k << " vs " << kq << "; ";
    }
  }
  o.detail = d.str();
  return o;
}

Outcome lower_bound() {
  Outcome o;
  std::ostringstream d;
  const DistributionSpec families[] = {
      DistributionSpec::uniform(),           DistributionSpec::gaussian(),
      DistributionSpec::laplace(),           DistributionSpec::cauchy(),
      DistributionSpec::bernoulli_pm1(),     DistributionSpec::symmetric_gamma(0.25),
      DistributionSpec::symmetric_gamma(10.0), DistributionSpec::symmetric_beta(0.0, 8.0),
      DistributionSpec::symmetric_beta(0.0, -0.9), DistributionSpec::symmetric_beta(2.0, 0.0),
      DistributionSpec::smooth_bounded(20.0),  DistributionSpec::smooth_bounded(-0.9),
      DistributionSpec::power_law(3.0)};
  std::uint64_t seed = 200;
  for (const auto& s : families) {
    for (auto mode : {ProductMode::Ordinary, ProductMode::Hadamard, ProductMode::Decorrelated}) {
      for (int K : {1, 3}) {
        auto c = single(s, 100000, seed++);
        c.mode = mode;
        c.K = K;
        const auto t = estimate_Pnk(c);
        ++o.checked;
        if (t.phat(2) < 0.625 - 3 * t.std_error(2)) {
          ++o.violations;
          d << s.label() << " " << mode_name(mode) << " K=" << K << ": " << t.phat(2) << "; ";
        }
      }
    }
  }
  o.detail = d.str();
  return o;
}

Outcome registry_interval() {
  Outcome o;
  std::ostringstream d;
  for (const auto& e : registry()) {
    if (e.n != 2) continue;
    ++o.checked;
    if (e.value < 0.625 - 1e-12 || e.value > 0.875 + 1e-12) {
      ++o.violations;
      d << e.label << " = " << e.value << "; ";
    }
  }
  o.detail = d.str();
  return o;
}

}  // namespace checks
