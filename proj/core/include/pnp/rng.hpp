#pragma once

#include <cstdint>

#include "pnp/image.hpp"

namespace pnp {

// xoshiro256++ with splitmix64 seeding. The generator and the Gaussian
// transform (Box-Muller) are frozen so that a seed identifies one stream
// everywhere; std::mt19937 + std::normal_distribution would not give that
// (the distribution is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  // uniform on (0,1], 53-bit resolution; never 0 so log() is safe
  double uniform01();
  // standard normal; generates pairs and caches the second sample
  double normal();

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t s_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Stable per-run seed derivation for sweeps: mixes a base seed with a run index.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// i.i.d. N(0, sigma^2) buffer; deterministic given the rng state. sigma >= 0.
ImageBuffer gaussian_noise(int height, int width, int channels, double sigma, Rng& rng);

}  // namespace pnp
