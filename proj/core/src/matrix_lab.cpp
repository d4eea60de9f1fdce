#include "realspec/matrix_lab.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "realspec/error.hpp"

namespace realspec {
namespace {

constexpr long long kBlock = 1024;
constexpr int kMaxRedraws = 1000;

// error-free transformations
void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}

void two_prod(double a, double b, double& p, double& e) {
  p = a * b;
  e = std::fma(a, b, -p);
}

// Sign of a sum of doubles, exact: the terms are merged into a
// nonoverlapping expansion whose largest nonzero component carries the sign.
template <std::size_t N>
int exact_sign(const std::array<double, N>& terms) {
  std::array<double, N> h{};
  std::size_t len = 0;
  for (double b : terms) {
    double q = b;
    for (std::size_t i = 0; i < len; ++i) {
      double s, e;
      two_sum(q, h[i], s, e);
      h[i] = e;
      q = s;
    }
    h[len++] = q;
  }
  for (std::size_t i = len; i-- > 0;) {
    if (h[i] > 0.0) return 1;
    if (h[i] < 0.0) return -1;
  }
  return 0;
}

int block_discriminant_sign(double a, double b, double c, double d) {
  double s, e;
  int shift = 0;
  two_sum(a, -d, s, e);
  if (!std::isfinite(s)) {
    two_sum(a / 2, -d / 2, s, e);
    shift = 1;
  }
  const int sign_bc = (b == 0.0 || c == 0.0) ? 0 : ((b > 0) == (c > 0) ? 1 : -1);
  if (s == 0.0) return sign_bc;
  if (sign_bc >= 0) return 1;

  // (s + e)^2 2^{2 shift} against 4 |b c|, both sides brought to unit scale
  int eb, ec, es;
  double mb = std::frexp(std::abs(b), &eb);
  const double mc = std::frexp(std::abs(c), &ec);
  int total = eb + ec;
  if (total % 2 != 0) {
    mb *= 2.0;
    --total;
  }
  std::frexp(s, &es);
  const int rel = es + shift - total / 2;
  if (rel > 4) return 1;
  if (rel < -4) return -1;
  const int f = total / 2 - shift;
  const double sp = std::ldexp(s, -f);
  const double ep = std::ldexp(e, -f);
  std::array<double, 8> t{};
  two_prod(sp, sp, t[0], t[1]);
  two_prod(2.0 * sp, ep, t[2], t[3]);
  two_prod(ep, ep, t[4], t[5]);
  two_prod(mb, mc, t[6], t[7]);
  t[6] *= -4.0;
  t[7] *= -4.0;
  const int sign = exact_sign(t);
  if (sign != 0 || e == 0.0) return sign;
  return (s > 0) == (e > 0) ? 1 : -1;
}

// divides by the Frobenius norm and records the factor; false for a zero or
// non-finite matrix
bool renormalize(Matrix& m, double& log_scale) {
  const double big = m.cwiseAbs().maxCoeff();
  if (!(big > 0.0) || !std::isfinite(big)) return false;
  m /= big;
  const double f = m.norm();
  m /= f;
  log_scale += std::log(big) + std::log(f);
  return true;
}

// keeps entrywise products inside the double range
bool rescale_if_needed(Matrix& m, double& log_scale) {
  const double big = m.cwiseAbs().maxCoeff();
  if (!(big > 0.0) || !std::isfinite(big)) return false;
  if (big > 1e100 || big < 1e-100) {
    m /= big;
    log_scale += std::log(big);
  }
  return true;
}

struct Scaled {
  Matrix m;
  double log_scale = 0.0;
};

Scaled ordinary_chain(int n, int K, const DistributionSpec& spec, RandomStream& rng,
                      ChainStats* stats) {
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    Scaled out{random_matrix(n, spec, rng), 0.0};
    bool ok = renormalize(out.m, out.log_scale);
    for (int i = 1; ok && i < K; ++i) {
      out.m = random_matrix(n, spec, rng) * out.m;
      ok = renormalize(out.m, out.log_scale);
    }
    if (ok) return out;
    if (stats) ++stats->resampled;
  }
  throw ConvergenceError("chain_product: " + std::to_string(kMaxRedraws) +
                             " consecutive degenerate chains",
                         0.0, 0.0);
}

Scaled hadamard_chain(int n, int K, const DistributionSpec& spec, RandomStream& rng,
                      ChainStats* stats) {
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    Scaled out{random_matrix(n, spec, rng), 0.0};
    bool ok = rescale_if_needed(out.m, out.log_scale);
    for (int i = 1; ok && i < K; ++i) {
      out.m = out.m.cwiseProduct(random_matrix(n, spec, rng));
      ok = rescale_if_needed(out.m, out.log_scale);
    }
    if (ok && renormalize(out.m, out.log_scale)) return out;
    if (stats) ++stats->resampled;
  }
  throw ConvergenceError("chain_product: " + std::to_string(kMaxRedraws) +
                             " consecutive degenerate chains",
                         0.0, 0.0);
}

Matrix decorrelated_product(int n, int K, const DistributionSpec& spec, RandomStream& rng,
                            ChainStats* stats) {
  std::vector<Scaled> chains;
  chains.reserve(static_cast<std::size_t>(n) * n);
  for (int c = 0; c < n * n; ++c) chains.push_back(ordinary_chain(n, K, spec, rng, stats));
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& ch : chains) top = std::max(top, ch.log_scale);
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    Matrix out(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Scaled& ch = chains[static_cast<std::size_t>(i) * n + j];
        out(i, j) = ch.m(i, j) * std::exp(ch.log_scale - top);
      }
    }
    double ignored = 0.0;
    if (renormalize(out, ignored)) return out;
    if (stats) ++stats->resampled;
    for (auto& ch : chains) ch = ordinary_chain(n, K, spec, rng, stats);
    top = -std::numeric_limits<double>::infinity();
    for (const auto& ch : chains) top = std::max(top, ch.log_scale);
  }
  throw ConvergenceError("chain_product: degenerate decorrelated assembly", 0.0, 0.0);
}

}  // namespace

std::string_view mode_name(ProductMode m) {
  switch (m) {
    case ProductMode::Ordinary: return "ordinary";
    case ProductMode::Hadamard: return "hadamard";
    case ProductMode::Decorrelated: return "decorrelated";
  }
  return "ordinary";
}

ProductMode mode_from_name(std::string_view name) {
  if (name == "ordinary") return ProductMode::Ordinary;
  if (name == "hadamard") return ProductMode::Hadamard;
  if (name == "decorrelated") return ProductMode::Decorrelated;
  throw ConfigError("unknown product mode '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (n < 2) throw ConfigError("n must be at least 2");
  if (K < 1) throw ConfigError("K must be at least 1");
  if (samples < 1) throw ConfigError("samples must be positive");
  if (!(eig_tol > 0.0)) throw ConfigError("eig_tol must be positive");
  if (threads < 0) throw ConfigError("threads must be nonnegative");
  spec.validate();
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("REALSPEC_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

Matrix random_matrix(int n, const DistributionSpec& spec, RandomStream& rng) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = sample(spec, rng);
  return m;
}

Matrix chain_product(const ExperimentConfig& cfg, RandomStream& rng, ChainStats* stats) {
  switch (cfg.mode) {
    case ProductMode::Ordinary: return ordinary_chain(cfg.n, cfg.K, cfg.spec, rng, stats).m;
    case ProductMode::Hadamard: return hadamard_chain(cfg.n, cfg.K, cfg.spec, rng, stats).m;
    case ProductMode::Decorrelated: return decorrelated_product(cfg.n, cfg.K, cfg.spec, rng, stats);
  }
  return {};
}

int discriminant_sign(const Matrix& m) {
  if (m.rows() != 2 || m.cols() != 2) throw std::invalid_argument("discriminant_sign: need a 2x2 matrix");
  return block_discriminant_sign(m(0, 0), m(0, 1), m(1, 0), m(1, 1));
}

int count_real_eigenvalues_schur(const Matrix& m, double eig_tol, CountDetail* detail) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("count_real_eigenvalues: matrix must be square");
  if (!m.allFinite()) throw std::invalid_argument("count_real_eigenvalues: non-finite entry");
  Eigen::RealSchur<Matrix> schur(n);
  schur.setMaxIterations(30 * n);
  schur.compute(m, false);
  if (schur.info() != Eigen::Success) {
    if (detail) detail->converged = false;
    throw ConvergenceError("real Schur iteration did not converge", 0.0, 0.0);
  }
  const Matrix& T = schur.matrixT();
  int k = 0;
  Eigen::Index i = 0;
  while (i < n) {
    if (i + 1 < n && T(i + 1, i) != 0.0) {
      const double a = T(i, i), b = T(i, i + 1), c = T(i + 1, i), d = T(i + 1, i + 1);
      const double disc = (a - d) * (a - d) + 4.0 * b * c;
      const double scale2 = a * a + b * b + c * c + d * d;
      const int sign = block_discriminant_sign(a, b, c, d);
      if (std::abs(disc) < eig_tol * scale2 && detail) detail->tie = true;
      if (sign >= 0 || disc >= -eig_tol * scale2) k += 2;
      i += 2;
    } else {
      ++k;
      ++i;
    }
  }
  if ((k - n) % 2 != 0) throw std::logic_error("count_real_eigenvalues: parity violated");
  return k;
}

int count_real_eigenvalues(const Matrix& m, double eig_tol, CountDetail* detail) {
  if (m.rows() == 2 && m.cols() == 2) {
    if (!m.allFinite()) throw std::invalid_argument("count_real_eigenvalues: non-finite entry");
    return discriminant_sign(m) >= 0 ? 2 : 0;
  }
  return count_real_eigenvalues_schur(m, eig_tol, detail);
}

double RealCountTally::phat(int k) const {
  auto it = counts.find(k);
  if (samples == 0 || it == counts.end()) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(samples);
}

double RealCountTally::std_error(int k) const {
  if (samples == 0) return 0.0;
  const double p = phat(k);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
}

double RealCountTally::expected_real() const {
  if (samples == 0) return 0.0;
  double e = 0.0;
  for (const auto& [k, c] : counts) e += k * static_cast<double>(c);
  return e / static_cast<double>(samples);
}

double RealCountTally::expected_real_stderr() const {
  if (samples < 2) return 0.0;
  const double e = expected_real();
  double v = 0.0;
  for (const auto& [k, c] : counts) v += (k - e) * (k - e) * static_cast<double>(c);
  v /= static_cast<double>(samples - 1);
  return std::sqrt(v / static_cast<double>(samples));
}

void RealCountTally::merge(const RealCountTally& other) {
  for (const auto& [k, c] : other.counts) counts[k] += c;
  samples += other.samples;
  discarded += other.discarded;
  resampled += other.resampled;
  ties += other.ties;
}

RealCountTally estimate_Pnk(const ExperimentConfig& cfg) {
  cfg.validate();
  const long long blocks = (cfg.samples + kBlock - 1) / kBlock;
  const int workers = static_cast<int>(std::min<long long>(resolve_threads(cfg.threads), blocks));
  const RandomStream master(cfg.seed);
  std::vector<RealCountTally> per_block(static_cast<std::size_t>(blocks));
  std::atomic<long long> next{0};

  auto run = [&]() {
    for (long long b = next++; b < blocks; b = next++) {
      RandomStream rng = master.split(static_cast<std::uint64_t>(b));
      RealCountTally& t = per_block[static_cast<std::size_t>(b)];
      const long long count = std::min(kBlock, cfg.samples - b * kBlock);
      ChainStats stats;
      for (long long s = 0; s < count; ++s) {
        const Matrix m = chain_product(cfg, rng, &stats);
        CountDetail detail;
        try {
          const int k = count_real_eigenvalues(m, cfg.eig_tol, &detail);
          ++t.counts[k];
          ++t.samples;
          if (detail.tie) ++t.ties;
        } catch (const ConvergenceError&) {
          ++t.discarded;
        }
      }
      t.resampled = stats.resampled;
    }
  };

  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& th : pool) th.join();
  }

  RealCountTally total;
  for (const auto& t : per_block) total.merge(t);
  total.workers = std::max(workers, 1);
  return total;
}

Estimate expected_real(const ExperimentConfig& cfg) {
  const RealCountTally t = estimate_Pnk(cfg);
  return {t.expected_real(), t.expected_real_stderr()};
}

namespace {

// running means and co-moments of (x_1, x_i)
struct CoMoments {
  long long n = 0;
  std::array<double, 4> mean{};
  std::array<double, 4> comoment{};

  void add(const std::array<double, 4>& x) {
    ++n;
    const double d1 = x[0] - mean[0];
    for (int i = 0; i < 4; ++i) mean[i] += (x[i] - mean[i]) / static_cast<double>(n);
    for (int i = 0; i < 4; ++i) comoment[i] += d1 * (x[i] - mean[i]);
  }

  double covariance(int i) const { return n > 1 ? comoment[i] / static_cast<double>(n - 1) : 0.0; }
};

double signed_root(double base, int K) {
  return std::copysign(std::pow(std::abs(base), 1.0 / K), base);
}

}  // namespace

CorrelationReport correlation_metric(int K, const DistributionSpec& spec, long long samples,
                                     RandomStream rng, const CorrelationOptions& opt) {
  if (K < 1) throw ConfigError("K must be at least 1");
  if (opt.batches < 2 || samples < 2LL * opt.batches)
    throw ConfigError("correlation_metric: need at least two samples per batch");
  spec.validate();

  const double divisor = opt.divide_by_K ? static_cast<double>(K) : 1.0;
  CoMoments all;
  std::vector<CoMoments> batch(static_cast<std::size_t>(opt.batches));
  for (long long s = 0; s < samples; ++s) {
    Matrix p = random_matrix(2, spec, rng);
    double ignored = 0.0;
    for (int i = 1; i < K; ++i) {
      p = random_matrix(2, spec, rng) * p;
      if (opt.renormalized) renormalize(p, ignored);
    }
    const std::array<double, 4> x{p(0, 0), p(0, 1), p(1, 0), p(1, 1)};
    all.add(x);
    batch[static_cast<std::size_t>(s % opt.batches)].add(x);
  }

  CorrelationReport r;
  r.K = K;
  r.samples = samples;
  r.options = opt;
  for (int i = 0; i < 4; ++i) {
    const double base = all.covariance(i) / divisor;
    r.covariance[i] = all.covariance(i);
    r.defined[i] = base >= 0.0 || K % 2 == 1;
    r.C[i] = r.defined[i] ? signed_root(base, K) : std::numeric_limits<double>::quiet_NaN();
    double m = 0.0;
    double m2 = 0.0;
    for (int b = 0; b < opt.batches; ++b) {
      const double v = signed_root(batch[static_cast<std::size_t>(b)].covariance(i) / divisor, K);
      m += v;
      m2 += v * v;
    }
    m /= opt.batches;
    const double var = std::max(0.0, (m2 / opt.batches - m * m) * opt.batches / (opt.batches - 1.0));
    r.std_error[i] = std::sqrt(var / opt.batches);
  }
  return r;
}

}  // namespace realspec
