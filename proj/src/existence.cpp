#include "ncwishart/existence.hpp"

#include <cmath>
#include <sstream>

#include "ncwishart/distribution.hpp"
#include "ncwishart/errors.hpp"

namespace ncwishart {

namespace {

bool at_least_threshold(int d, double p) {
  return 2.0 * p >= (d - 1) - kHalfIntegerTol;
}

}  // namespace

std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Exists: return "Exists";
    case VerdictStatus::NotExists: return "NotExists";
    case VerdictStatus::OpenProblem: return "OpenProblem";
    case VerdictStatus::Trivial: return "Trivial";
  }
  return "?";
}

bool twice_is_integer(double p, int* twice) {
  const double j = std::round(2.0 * p);
  if (std::abs(2.0 * p - j) > kHalfIntegerTol) return false;
  if (twice) *twice = static_cast<int>(j);
  return true;
}

bool gindikin_contains(int d, double p) {
  if (d < 1) throw ValidationError("dimension must be >= 1");
  if (!(p >= 0.0)) throw ValidationError("shape p must be >= 0");
  if (at_least_threshold(d, p)) return true;
  int j = 0;
  return twice_is_integer(p, &j) && j >= 1 && j <= d - 2;
}

GindikinVerdict existence_verdict(int d, double p, int rank_omega,
                                  int rank_sigma, bool omega_is_zero) {
  if (d < 1) throw ValidationError("dimension must be >= 1");
  if (!(p >= 0.0) || !std::isfinite(p)) {
    throw ValidationError("shape p must be finite and >= 0");
  }
  if (rank_omega < 0 || rank_omega > d || rank_sigma < 0 || rank_sigma > d) {
    std::ostringstream os;
    os << "ranks must lie in [0, " << d << "], got rank(omega)=" << rank_omega
       << ", rank(sigma)=" << rank_sigma;
    throw ValidationError(os.str());
  }
  if (omega_is_zero != (rank_omega == 0)) {
    throw ValidationError("omega_is_zero disagrees with rank(omega)");
  }

  if (p == 0.0 && omega_is_zero) return {VerdictStatus::Trivial, rule::kTrivial};
  if (at_least_threshold(d, p)) {
    return {VerdictStatus::Exists, rule::kLargeShape};
  }
  int twice_p = 0;
  const bool half_integer = twice_is_integer(p, &twice_p);
  if (half_integer && twice_p >= 1 && twice_p <= d - 2 &&
      rank_omega <= twice_p) {
    return {VerdictStatus::Exists, rule::kRankBelowShape};
  }

  if (rank_sigma == d) {
    // The necessity statement assumes p > 0.
    if (p == 0.0) return {VerdictStatus::OpenProblem, rule::kZeroShapeGap};
    if (!gindikin_contains(d, p)) {
      return {VerdictStatus::NotExists, rule::kNotGindikin};
    }
    if (rank_omega > twice_p + 1) {
      return {VerdictStatus::NotExists, rule::kRankTooLarge};
    }
    return {VerdictStatus::OpenProblem, rule::kOpenRank};
  }

  if (omega_is_zero) {
    const bool ok = rank_sigma == 0 || gindikin_contains(rank_sigma, p);
    return {ok ? VerdictStatus::Exists : VerdictStatus::NotExists,
            rule::kDegenerateCentral};
  }
  return {VerdictStatus::OpenProblem, rule::kDegenerateGap};
}

GindikinVerdict existence_verdict(const WishartParams& params) {
  const int rank_omega = rank_psd(params.omega());
  return existence_verdict(params.dim(), params.p(), rank_omega,
                           rank_psd(params.sigma()), rank_omega == 0);
}

bool infinitely_divisible_central(int d, int rank_sigma) {
  if (rank_sigma < 0 || rank_sigma > d) {
    throw ValidationError("rank(sigma) must lie in [0, d]");
  }
  return rank_sigma == 1;
}

bool drift_condition_check(int d, double p) {
  return p >= 0.5 * (d - 1) - 1e-12;
}

}  // namespace ncwishart
