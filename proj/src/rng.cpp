#include "ncwishart/rng.hpp"

namespace ncwishart {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_engine_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) + stream * 0x9E3779B97F4A7C15ULL);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : state_{RngState{}.algorithm, seed, stream},
      engine_(derive_engine_seed(seed, stream)) {}

double Rng::normal() { return normal_(engine_); }

double Rng::gamma(double shape, double scale) {
  if (shape <= 0.0) return 0.0;
  std::gamma_distribution<double> dist(shape, scale);
  return dist(engine_);
}

}  // namespace ncwishart
