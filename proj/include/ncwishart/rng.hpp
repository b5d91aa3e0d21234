#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace ncwishart {

// (seed, stream) identifies a reproducible draw sequence. Streams with
// distinct indices are seeded through derive_engine_seed and are treated as
// independent.
struct RngState {
  std::string algorithm = "mt19937_64/splitmix64";
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

// engine seed = splitmix64(splitmix64(seed) + stream * 0x9E3779B97F4A7C15)
std::uint64_t derive_engine_seed(std::uint64_t seed, std::uint64_t stream);

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  const RngState& state() const { return state_; }
  Rng substream(std::uint64_t stream) const { return Rng(state_.seed, stream); }

  double normal();
  // Gamma(shape, scale); shape <= 0 is the point mass at 0.
  double gamma(double shape, double scale);

  std::mt19937_64& engine() { return engine_; }

 private:
  RngState state_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace ncwishart
