#pragma once

// Existence decisions for Gamma(p, omega; sigma). Works on ranks only; rank
// computation and its tolerance live in symcone.

#include <string>

namespace ncwishart {

class WishartParams;

enum class VerdictStatus { Exists, NotExists, OpenProblem, Trivial };

std::string to_string(VerdictStatus s);

struct GindikinVerdict {
  VerdictStatus status;
  std::string rule;  // machine-readable tag of the deciding statement

  bool operator==(const GindikinVerdict&) const = default;
};

// Rule tags.
namespace rule {
inline constexpr const char* kTrivial = "trivial-point-mass";
inline constexpr const char* kLargeShape = "large-shape";
inline constexpr const char* kRankBelowShape = "rank-within-shape";
inline constexpr const char* kNotGindikin = "outside-gindikin";
inline constexpr const char* kRankTooLarge = "rank-too-large";
inline constexpr const char* kOpenRank = "open-rank-boundary";
inline constexpr const char* kDegenerateCentral = "degenerate-central";
inline constexpr const char* kDegenerateGap = "gap-degenerate-noncentral";
inline constexpr const char* kZeroShapeGap = "gap-zero-shape";
}  // namespace rule

// Absolute tolerance on 2p when testing for half-integers.
inline constexpr double kHalfIntegerTol = 1e-9;

// True when 2p is within kHalfIntegerTol of an integer; writes that integer.
bool twice_is_integer(double p, int* twice = nullptr);

// p in {j/2 : j = 1..d-2} U [(d-1)/2, inf).
bool gindikin_contains(int d, double p);

GindikinVerdict existence_verdict(int d, double p, int rank_omega,
                                  int rank_sigma, bool omega_is_zero);

// Convenience: ranks taken from the matrices with the default rank tolerance.
GindikinVerdict existence_verdict(const WishartParams& params);

// Central law Gamma(p; sigma): infinitely divisible iff rank(sigma) == 1.
bool infinitely_divisible_central(int d, int rank_sigma);

// Wishart process existence: p >= (d-1)/2.
bool drift_condition_check(int d, double p);

}  // namespace ncwishart
