#pragma once

#include <cstdint>
#include <random>

namespace realspec {

/// Seeded stream over std::mt19937_64. Child streams are seeded through
/// std::seed_seq from (master seed, index), so a stream depends only on its
/// index and parallel Monte Carlo runs stay reproducible.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed = 42);

  /// Independent child stream number `index`.
  RandomStream split(std::uint64_t index) const;

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t operator()() { return engine_(); }
  static constexpr std::uint64_t min() { return std::mt19937_64::min(); }
  static constexpr std::uint64_t max() { return std::mt19937_64::max(); }

  /// Uniform on the open interval (0, 1).
  double uniform();
  /// +1 or -1 with equal probability.
  double sign();
  double normal();
  double exponential();
  /// Gamma(shape, 1).
  double gamma(double shape);

 private:
  RandomStream(std::uint64_t seed, std::seed_seq& seq);

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
  std::exponential_distribution<double> exponential_;
};

}  // namespace realspec
