#include "realspec/random_stream.hpp"

namespace realspec {

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

RandomStream::RandomStream(std::uint64_t seed, std::seed_seq& seq) : seed_(seed), engine_(seq) {}

RandomStream RandomStream::split(std::uint64_t index) const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return RandomStream(seed_ ^ (index * 0x9E3779B97F4A7C15ULL), seq);
}

double RandomStream::uniform() {
  for (;;) {
    const double u = std::generate_canonical<double, 53>(engine_);
    if (u > 0.0) return u;
  }
}

double RandomStream::sign() { return (engine_() >> 63) ? 1.0 : -1.0; }

double RandomStream::normal() { return normal_(engine_); }

double RandomStream::exponential() { return exponential_(engine_); }

double RandomStream::gamma(double shape) {
  return std::gamma_distribution<double>(shape, 1.0)(engine_);
}

}  // namespace realspec
