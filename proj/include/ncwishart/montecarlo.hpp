#pragma once

// Sampling of Wishart laws and Wishart process paths, plus the empirical
// transform harness used to check samplers against the analytic transform.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ncwishart/distribution.hpp"
#include "ncwishart/errors.hpp"
#include "ncwishart/existence.hpp"
#include "ncwishart/process.hpp"
#include "ncwishart/rng.hpp"
#include "ncwishart/symcone.hpp"

namespace ncwishart {

// Raised when a sampler is asked for a law whose existence verdict is not
// Exists.
class RefusalError : public Error {
 public:
  RefusalError(const std::string& what, GindikinVerdict verdict)
      : Error(what), verdict_(std::move(verdict)) {}
  const GindikinVerdict& verdict() const { return verdict_; }

 private:
  GindikinVerdict verdict_;
};

// Y ~ N(mean, covariance) with covariance = sigma / 2; Y Y^T ~
// Gamma(1/2, mean mean^T; sigma).
struct GaussianFactor {
  Vector mean;
  PsdMatrix covariance;

  static GaussianFactor for_scale(Vector mean, const PsdMatrix& sigma);
};

enum class SampleMethod { Exact, EulerApproximate };
std::string to_string(SampleMethod m);

struct Sample {
  PsdMatrix value;
  SampleMethod method;
};

PsdMatrix sample_rank_one(const GaussianFactor& factor, Rng& rng);

// 2p integer and rank(omega) <= 2p: sum of 2p independent rank-one draws
// whose means split omega along its eigenvectors.
PsdMatrix sample_halfinteger(const WishartParams& params, Rng& rng);

// Central Gamma(q; sigma) for q >= (d-1)/2 by the Bartlett construction.
PsdMatrix sample_central_bartlett(double q, const PsdMatrix& sigma, Rng& rng);

inline constexpr int kDefaultEulerStepsPerUnitTime = 400;

// Prepared sampler for one parameter set. p = n/2 + q with n = rank(omega):
// the n non-central rank-one factors are combined with an exact central part
// when one is available (q = 0, q >= (rank(sigma)-1)/2 via Bartlett in the
// range of sigma, or 2q integer via centred rank-ones). Otherwise the law is
// the time-1 transition of the process (p, sigma/2, 0) started at omega and
// is approximated by Euler-Maruyama.
class WishartSampler {
 public:
  explicit WishartSampler(const WishartParams& params,
                          int euler_steps = kDefaultEulerStepsPerUnitTime);

  SampleMethod method() const { return method_; }
  const WishartParams& params() const { return params_; }
  const GindikinVerdict& verdict() const { return verdict_; }

  PsdMatrix draw(Rng& rng) const;

 private:
  enum class Central { None, Bartlett, RankOnes };

  WishartParams params_;
  GindikinVerdict verdict_;
  SampleMethod method_ = SampleMethod::Exact;
  int euler_steps_;
  std::vector<Vector> means_;
  GeneralMatrix factor_;  // chol_psd(sigma / 2)
  Central central_ = Central::None;
  int central_rank_ones_ = 0;
  double central_shape_ = 0.0;
  GeneralMatrix range_factor_;  // d x r, range_factor range_factor^T = sigma/2
};

Sample sample_noncentral(const WishartParams& params, Rng& rng,
                         int euler_steps = kDefaultEulerStepsPerUnitTime);

// n draws split into fixed-size chunks; chunk c uses substream c of seed, so
// the result does not depend on how many worker threads run.
inline constexpr std::size_t kChunkSize = 4096;
std::vector<PsdMatrix> draw_batch(const WishartSampler& sampler, std::size_t n,
                                  std::uint64_t seed);

struct SamplePath {
  std::vector<double> times;
  std::vector<PsdMatrix> states;
  PsdMatrix x0;
  double step = 0.0;
};

// Euler-Maruyama for the Wishart SDE with eigenvalue clipping onto the cone
// after every step. Needs p >= (d-1)/2.
SamplePath sde_euler_path(const WishartProcessParams& params,
                          const PsdMatrix& x0, double horizon, int steps,
                          Rng& rng);

// Same scheme, keeping only the terminal state.
PsdMatrix sde_euler_terminal(const WishartProcessParams& params,
                             const PsdMatrix& x0, double horizon, int steps,
                             Rng& rng);

struct EmpiricalEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Sample mean and standard error of exp(-<u, xi_i>).
EmpiricalEstimate empirical_laplace(std::span<const PsdMatrix> samples,
                                    const PsdMatrix& u);

// Transform evaluation points: for each scale, `directions` seeded random PSD
// directions of unit trace multiplied by the scale. Point id = scale index *
// directions + direction index.
std::vector<PsdMatrix> psd_grid(int d, int directions,
                                std::span<const double> scales,
                                std::uint64_t seed);

struct GridPointResult {
  int u_id = 0;
  double analytic = 0.0;
  double empirical = 0.0;
  double std_error = 0.0;
  double z = 0.0;  // (empirical - analytic) / stderr; 0 when both agree exactly
};

std::vector<GridPointResult> compare_transform(
    const WishartParams& params, std::span<const PsdMatrix> samples,
    std::span<const PsdMatrix> grid);

}  // namespace ncwishart
