#pragma once

#include <cstdint>
#include <random>

namespace minharm {

// splitmix64 finalizer. Used to spread user seeds and derive sub-streams.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Independent deterministic stream for sub-task `index` of a base seed.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64(index + 1));
}

// Deterministic random stream. The std:: distributions are
// implementation-defined, so uniforms and gaussians are produced here
// directly from the engine's raw bits; the sequence depends only on the seed.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1), 53-bit mantissa.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Standard normal via Marsaglia's polar method (cached spare).
  double gaussian();

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Van der Corput radical inverse in the given base, index >= 1.
double radical_inverse(std::uint64_t index, std::uint32_t base);

// Inverse of the standard normal CDF (Acklam's rational approximation,
// refined by one Halley step); |error| < 1e-15 on (0,1).
double inverse_normal_cdf(double p);

}  // namespace minharm
