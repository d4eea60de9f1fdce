#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <map>
#include <string_view>

#include "realspec/distributions.hpp"
#include "realspec/random_stream.hpp"

namespace realspec {

using Matrix = Eigen::MatrixXd;

enum class ProductMode { Ordinary, Hadamard, Decorrelated };

std::string_view mode_name(ProductMode m);
/// "ordinary", "hadamard" or "decorrelated". Throws ConfigError.
ProductMode mode_from_name(std::string_view name);

struct ExperimentConfig {
  int n = 2;
  int K = 1;
  DistributionSpec spec;
  ProductMode mode = ProductMode::Ordinary;
  long long samples = 100000;
  std::uint64_t seed = 42;
  double eig_tol = 1e-9;
  /// Worker threads; 0 reads REALSPEC_THREADS and falls back to the
  /// hardware concurrency.
  int threads = 0;

  /// Throws ConfigError for n < 2, K < 1, samples < 1 or eig_tol <= 0 and
  /// ParameterDomainError for an invalid spec.
  void validate() const;
};

/// Worker count used for a config (threads, REALSPEC_THREADS or hardware).
int resolve_threads(int requested);

/// n x n matrix of independent draws.
Matrix random_matrix(int n, const DistributionSpec& spec, RandomStream& rng);

struct ChainStats {
  long long resampled = 0;  // chains redrawn after overflow or a zero product
};

/// Product of K fresh matrices. Ordinary: left multiplication with
/// Frobenius renormalization after every step. Hadamard: entrywise product.
/// Decorrelated: entry (i, j) taken from the (i n + j)-th of n^2 independent
/// ordinary chains. The result is divided by its Frobenius norm; positive
/// rescaling never changes which eigenvalues are real.
Matrix chain_product(const ExperimentConfig& cfg, RandomStream& rng, ChainStats* stats = nullptr);

/// sign of (a - d)^2 + 4 b c evaluated without rounding error.
int discriminant_sign(const Matrix& m);

struct CountDetail {
  bool tie = false;        // a 2x2 Schur block sat within eig_tol of the real/complex boundary
  bool converged = true;   // QR iteration finished inside the cap
};

/// Number of real eigenvalues. n = 2 uses the exact discriminant; larger n
/// the real Schur form. Throws ConvergenceError when the QR iteration does
/// not converge.
int count_real_eigenvalues(const Matrix& m, double eig_tol = 1e-9, CountDetail* detail = nullptr);

/// Real Schur path for any n (used to cross-check the discriminant).
int count_real_eigenvalues_schur(const Matrix& m, double eig_tol = 1e-9,
                                 CountDetail* detail = nullptr);

struct RealCountTally {
  std::map<int, long long> counts;
  long long samples = 0;
  long long discarded = 0;  // QR nonconvergence
  long long resampled = 0;  // chains redrawn
  long long ties = 0;
  int workers = 1;

  double phat(int k) const;
  double std_error(int k) const;
  /// E_n = sum_k k P_{n,k} and its Monte Carlo standard error.
  double expected_real() const;
  double expected_real_stderr() const;
  bool discard_warning() const { return discarded * 1000 > samples + discarded; }

  void merge(const RealCountTally& other);
};

/// Tally over cfg.samples independent chain products. Samples are drawn in
/// fixed blocks, block b from seed stream b, so the tally depends on the
/// seed only and not on the worker count.
RealCountTally estimate_Pnk(const ExperimentConfig& cfg);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

Estimate expected_real(const ExperimentConfig& cfg);

struct CorrelationOptions {
  /// Frobenius renormalization after each multiplication.
  bool renormalized = false;
  /// Divide the covariance by K before taking the K-th root.
  bool divide_by_K = true;
  int batches = 20;
};

/// C_i = (cov(x_1, x_i) [/ K])^{1/K} for the row-major entries of a 2x2
/// ordinary product; stderr from batch means.
struct CorrelationReport {
  std::array<double, 4> C{};
  std::array<double, 4> std_error{};
  std::array<double, 4> covariance{};
  /// false when the covariance is negative and K is even
  std::array<bool, 4> defined{};
  int K = 1;
  long long samples = 0;
  CorrelationOptions options;
};

CorrelationReport correlation_metric(int K, const DistributionSpec& spec, long long samples,
                                     RandomStream rng, const CorrelationOptions& opt = {});

}  // namespace realspec
