#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "realspec/analytic.hpp"
#include "realspec/error.hpp"
#include "realspec/integrate.hpp"
#include "realspec/registry.hpp"
#include "support/oracle.hpp"

using namespace realspec;

TEST(Convolution, Examples) {
  EXPECT_NEAR(convolution(DistributionSpec::uniform())(0.0), 0.5, 1e-15);
  EXPECT_NEAR(convolution(DistributionSpec::gaussian())(0.0), 1.0 / (2.0 * std::sqrt(std::numbers::pi)), 1e-15);
  const auto tent = convolution(DistributionSpec::symmetric_beta(1.0, 0.0));
  EXPECT_NEAR(tent(1.0), 1.0 / 6.0, 1e-14);
  EXPECT_NEAR(tent(std::nextafter(1.0, 0.0)), 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(tent(std::nextafter(1.0, 2.0)), 1.0 / 6.0, 1e-12);
}

TEST(Convolution, ClosedFormsMatchNumeric) {
  const DistributionSpec cases[] = {DistributionSpec::uniform(),
                                    DistributionSpec::symmetric_beta(1.0, 0.0),
                                    DistributionSpec::symmetric_beta(0.0, 2.0),
                                    DistributionSpec::symmetric_beta(0.0, 4.0),
                                    DistributionSpec::gaussian(),
                                    DistributionSpec::laplace(),
                                    DistributionSpec::symmetric_gamma(0.5),
                                    DistributionSpec::symmetric_gamma(3.0),
                                    DistributionSpec::smooth_bounded(1.0),
                                    DistributionSpec::smooth_bounded(2.0),
                                    DistributionSpec::cauchy()};
  ConvolutionOptions numeric;
  numeric.force_numeric = true;
  for (const auto& s : cases) {
    const auto closed = convolution(s);
    const auto table = convolution(s, numeric);
    ASSERT_EQ(closed.form(), ConvolutionDensity::Form::ClosedForm) << s.label();
    ASSERT_EQ(table.form(), ConvolutionDensity::Form::NumericTable) << s.label();
    const double zmax = s.bounded() ? 2.0 : 12.0;
    double worst = 0.0;
    for (int i = 1; i <= 1000; ++i) {
      const double z = zmax * i / 1001.0;
      worst = std::max(worst, std::abs(closed(z) - table(z)));
    }
    EXPECT_LE(worst, 1e-6) << s.label();
    EXPECT_NEAR(closed.half_cdf(0.8), table.half_cdf(0.8), 1e-6) << s.label();
  }
}

TEST(Convolution, SymmetricNormalizedAndSupported) {
  const DistributionSpec cases[] = {DistributionSpec::symmetric_beta(0.0, -0.5),
                                    DistributionSpec::symmetric_beta(0.5, 0.0),
                                    DistributionSpec::smooth_bounded(-0.5),
                                    DistributionSpec::power_law(2.0),
                                    DistributionSpec::uniform(),
                                    DistributionSpec::symmetric_gamma(0.25)};
  for (const auto& s : cases) {
    const auto q = convolution(s);
    const double tol = q.form() == ConvolutionDensity::Form::ClosedForm ? 1e-8 : 1e-5;
    EXPECT_NEAR(2.0 * q.upper_tail(0.0), 1.0, tol) << s.label();
    EXPECT_NEAR(q.half_cdf(3.0) + q.upper_tail(3.0), 0.5, tol) << s.label();
    EXPECT_NEAR(q.cdf(0.0), 0.5, tol) << s.label();
    EXPECT_NEAR(q.cdf(1e6), 1.0, tol) << s.label();
    EXPECT_EQ(q(0.37), q(-0.37)) << s.label();
    if (s.bounded()) {
      EXPECT_EQ(q.support(), 2.0) << s.label();
      EXPECT_EQ(q(2.0001), 0.0) << s.label();
    }
  }
}

TEST(Convolution, TableReportsErrorEstimate) {
  const auto q = convolution(DistributionSpec::symmetric_beta(0.0, -0.5));
  EXPECT_EQ(q.form(), ConvolutionDensity::Form::NumericTable);
  EXPECT_LE(q.max_error_estimate(), 1e-6);
  EXPECT_GT(q.table_panels(), 0u);
}

TEST(Registry, Examples) {
  EXPECT_NEAR(exact_probability("uniform").value, 49.0 / 72.0, 1e-16);
  EXPECT_NEAR(exact_probability("ginibre_all_real_n3").value, std::pow(2.0, -1.5), 1e-16);
  EXPECT_NEAR(exact_probability("gamma_2").value, 10259.0 / 15015.0, 1e-16);
  EXPECT_NEAR(exact_probability("cauchy").value, 0.75, 0);
  EXPECT_NEAR(exact_probability("beta_nu_-0.5").value,
              (41.0 - std::numbers::pi - 2.0 * std::numbers::ln2) / 48.0, 1e-16);
  EXPECT_NEAR(exact_probability("tent").value, 16143.0 / 22400.0 - 23.0 * std::numbers::ln2 / 1008.0, 1e-16);
  EXPECT_NEAR(exact_probability("gamma_0.5").value, 1.0 / (2.0 * std::numbers::pi) + 0.625, 1e-16);
  EXPECT_NEAR(exact_probability("laplace").value, 0.733333, 5e-7);
  EXPECT_NEAR(exact_probability("beta_nu_0").value, 0.680556, 5e-7);
  EXPECT_EQ(exact_probability("arcsine").tolerance, 1e-3);
  EXPECT_THROW(exact_probability("no_such_law"), LookupError);
}

TEST(Registry, CsvHasEveryLabel) {
  const std::string csv = registry_csv();
  EXPECT_EQ(csv.rfind("label,value,tolerance,provenance,expression\n", 0), 0u);
  for (const auto& e : registry()) EXPECT_NE(csv.find("\n" + e.label + ","), std::string::npos) << e.label;
  EXPECT_NE(csv.find("\ncauchy,0.75,"), std::string::npos);
}

TEST(BetaSeries, MatchesExactRationals) {
  for (auto [k, ref] : oracle::kBetaSeries) {
    EXPECT_NEAR(beta_series_probability(k, SeriesPrecision::High), ref, 1e-15) << k;
    EXPECT_NEAR(beta_series_probability(k), ref, std::max(4e-15, beta_series_loss_estimate(k))) << k;
  }
  EXPECT_NEAR(beta_series_probability(1), 8905.0 / 14112.0, 4e-15);
  EXPECT_NEAR(beta_series_probability(2), 0.628361, 5e-7);
  EXPECT_NEAR(beta_series_probability(100), 0.625078, 5e-7);
}

TEST(BetaSeries, DoubleAndHighPrecisionAgree) {
  for (int k = 1; k <= 20; ++k) {
    double d = 0.0;
    try {
      d = beta_series_probability(k, SeriesPrecision::Double);
    } catch (const PrecisionLossError&) {
      continue;
    }
    EXPECT_NEAR(d, beta_series_probability(k, SeriesPrecision::High), 1e-9) << k;
  }
}

TEST(BetaSeries, LargeKNeedsHighPrecision) {
  EXPECT_GT(beta_series_loss_estimate(200), 1e-9);
  EXPECT_THROW(beta_series_probability(200, SeriesPrecision::Double), PrecisionLossError);
  EXPECT_NEAR(beta_series_probability(200), 0.625039, 5e-7);
  EXPECT_THROW(beta_series_probability(0), ParameterDomainError);
  EXPECT_THROW(beta_series_probability(201), ParameterDomainError);
}

TEST(GammaSum, MatchesReference) {
  for (auto [g, ref] : oracle::kGammaSum) EXPECT_NEAR(gamma_sum_probability(g), ref, 1e-13) << g;
  EXPECT_NEAR(gamma_sum_probability(3), 640561.0 / 969969.0, 1e-15);
  EXPECT_NEAR(gamma_sum_probability(100), 0.627494, 5e-7);
  EXPECT_TRUE(std::isfinite(gamma_sum_probability(2000)));
}

TEST(GammaAsymptotic, Examples) {
  EXPECT_NEAR(gamma_asymptotic(1e12), 0.625, 1e-7);
  EXPECT_NEAR(gamma_asymptotic(100.0), 0.627493, 5e-7);
  EXPECT_NEAR(gamma_asymptotic(10.0), 0.632884789131313, 1e-12);
  EXPECT_NEAR(gamma_sum_probability(100) - gamma_asymptotic(100.0), 0.0, 1e-5);
  EXPECT_THROW(gamma_asymptotic(0.5), ParameterDomainError);
}
