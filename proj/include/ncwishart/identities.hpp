#pragma once

// Deterministic identity suites. Each suite draws `count` random auxiliary
// objects (congruence matrices, transform arguments, partner laws, times)
// around the supplied base laws and checks an identity between two
// independently evaluated transform expressions.

#include <span>
#include <string>
#include <vector>

#include "ncwishart/distribution.hpp"
#include "ncwishart/process.hpp"
#include "ncwishart/rng.hpp"

namespace ncwishart {

inline constexpr double kTransformIdentityTol = 1e-10;
inline constexpr double kClosedVsOdeTol = 1e-8;
inline constexpr int kClosedVsOdeSteps = 1000;

struct IdentityResult {
  std::string name;
  int instances = 0;
  int failures = 0;
  double max_deviation = 0.0;
  double tolerance = 0.0;

  bool passed() const { return instances > 0 && failures == 0; }
};

// laplace(pushforward(x, g), u) == laplace(x, g^T u g)
IdentityResult pushforward_suite(std::span<const WishartParams> bases,
                                 int count, Rng& rng);
// L0(u + v) / L0(v) == laplace(tilted, u), and L0(v) == det(sigma)^p e^c,
// for the sigma = I version L0 of each base.
IdentityResult tilt_suite(std::span<const WishartParams> bases, int count,
                          Rng& rng);
// laplace(a * b, u) == laplace(a, u) laplace(b, u)
IdentityResult convolution_suite(std::span<const WishartParams> bases,
                                 int count, Rng& rng);
// from_letac(to_letac(x)) == x and the two transform formulas agree.
IdentityResult letac_suite(std::span<const WishartParams> bases, int count,
                           Rng& rng);
// Gupta-Nagar transform == laplace(from_gupta_nagar(.)).
IdentityResult gupta_nagar_suite(std::span<const WishartParams> bases,
                                 int count, Rng& rng);
// psi(t+s, u) == psi(t, psi(s, u)), phi(t+s, u) == phi(s, u) + phi(t, psi(s, u)).
IdentityResult semigroup_suite(std::span<const WishartParams> bases, int count,
                               Rng& rng);
// laplace(transition_params(t, x), u) == exp(-phi(t, u) - <psi(t, u), x>).
IdentityResult transition_suite(std::span<const WishartParams> bases,
                                int count, Rng& rng);
// Closed-form exponents vs RK4 with kClosedVsOdeSteps steps.
IdentityResult closed_vs_ode_suite(std::span<const WishartParams> bases,
                                   int count, Rng& rng);

std::vector<IdentityResult> run_identity_suites(
    std::span<const WishartParams> bases, int count, std::uint64_t seed);

// Process instance derived from a base law: alpha = sigma / 2, random beta
// with |beta|_F <= 1, formal mode.
WishartProcessParams process_from_base(const WishartParams& base, Rng& rng);

struct OrderCheck {
  int steps = 0;             // coarse step count
  double coarse_error = 0.0;
  double fine_error = 0.0;   // with 2 * steps
  double ratio = 0.0;
};

// RK4 error against the closed form at `steps` and 2 * steps.
OrderCheck rk_order_check(const WishartProcessParams& params, double t,
                          const PsdMatrix& u, int steps);

// Error ratios only approach 2^4 once the coarse error is in the asymptotic
// range and the fine error is still above roundoff. Starting from 8 steps,
// doubles (or halves) the coarse step count until the coarse relative error
// lies in [kOrderWindowLow, kOrderWindowHigh], then measures the ratio there.
inline constexpr double kOrderWindowHigh = 1e-6;
inline constexpr double kOrderWindowLow = 1e-10;
inline constexpr int kOrderMaxSteps = 1 << 14;
OrderCheck calibrated_order_check(const WishartProcessParams& params, double t,
                                  const PsdMatrix& u);

}  // namespace ncwishart
