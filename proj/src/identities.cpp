#include "ncwishart/identities.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "ncwishart/errors.hpp"
#include "ncwishart/instances.hpp"

namespace ncwishart {

namespace {

using instances::random_pd;
using instances::random_psd;
using instances::uniform;

PsdMatrix random_argument(int d, Rng& rng) {
  return random_psd(d, d, rng, uniform(rng, 0.1, 3.0));
}

bool positive_definite(const PsdMatrix& m) { return rank_psd(m) == m.dim(); }

PsdMatrix invertible_scale(const WishartParams& base, Rng& rng) {
  return positive_definite(base.sigma()) ? base.sigma()
                                         : random_pd(base.dim(), rng);
}

IdentityResult run_suite(
    const std::string& name, double tol, std::span<const WishartParams> bases,
    int count,
    const std::function<double(const WishartParams&)>& deviation_of) {
  if (bases.empty()) throw ValidationError("identity suite needs base laws");
  IdentityResult r{name, 0, 0, 0.0, tol};
  for (int i = 0; i < count; ++i) {
    const WishartParams& base = bases[static_cast<std::size_t>(i) % bases.size()];
    double dev = 0.0;
    try {
      dev = deviation_of(base);
    } catch (const Error&) {
      dev = std::numeric_limits<double>::infinity();
    }
    ++r.instances;
    if (!(dev <= tol)) ++r.failures;
    r.max_deviation = std::max(r.max_deviation, dev);
  }
  return r;
}

}  // namespace

WishartProcessParams process_from_base(const WishartParams& base, Rng& rng) {
  const int d = base.dim();
  PsdMatrix alpha = 0.5 * base.sigma();
  if (alpha.mat().isZero(0.0)) alpha = random_pd(d, rng);
  return WishartProcessParams(base.p(), alpha,
                              instances::random_beta(d, 1.0, rng),
                              ProcessMode::Formal);
}

IdentityResult pushforward_suite(std::span<const WishartParams> bases,
                                 int count, Rng& rng) {
  return run_suite("pushforward", kTransformIdentityTol, bases, count,
                   [&](const WishartParams& base) {
                     const int d = base.dim();
                     const GeneralMatrix g = instances::random_invertible(d, rng);
                     const PsdMatrix u = random_argument(d, rng);
                     const double lhs =
                         laplace(pushforward_congruence(base, g), u);
                     const double rhs =
                         laplace(base, congruence(GeneralMatrix(g.transpose()), u));
                     return relative_deviation(lhs, rhs);
                   });
}

IdentityResult tilt_suite(std::span<const WishartParams> bases, int count,
                          Rng& rng) {
  return run_suite(
      "tilt", kTransformIdentityTol, bases, count,
      [&](const WishartParams& base) {
        const int d = base.dim();
        const WishartParams unit(base.p(), base.omega(), PsdMatrix::identity(d));
        const PsdMatrix target = invertible_scale(base, rng);
        const TiltResult tilted = tilt_from_identity_scale(unit, target);
        const PsdMatrix u = random_argument(d, rng);
        const double at_v = transform_value(unit, tilted.tilt.v);
        const double lhs = transform_value(unit, u + tilted.tilt.v) / at_v;
        const double rhs = laplace(tilted.params, u);
        const double normaliser =
            std::pow(target.mat().determinant(), base.p()) *
            std::exp(tilted.tilt.c);
        return std::max(relative_deviation(lhs, rhs),
                        relative_deviation(at_v, normaliser));
      });
}

IdentityResult convolution_suite(std::span<const WishartParams> bases,
                                 int count, Rng& rng) {
  return run_suite("convolution", kTransformIdentityTol, bases, count,
                   [&](const WishartParams& base) {
                     const int d = base.dim();
                     const WishartParams other(
                         uniform(rng, 0.0, 3.0),
                         random_psd(d, instances::uniform_int(rng, 0, d), rng),
                         base.sigma());
                     const PsdMatrix u = random_argument(d, rng);
                     const double lhs = laplace(convolve(base, other), u);
                     const double rhs = laplace(base, u) * laplace(other, u);
                     return relative_deviation(lhs, rhs);
                   });
}

IdentityResult letac_suite(std::span<const WishartParams> bases, int count,
                           Rng& rng) {
  return run_suite(
      "letac", kTransformIdentityTol, bases, count,
      [&](const WishartParams& base) {
        const WishartParams x(base.p(), base.omega(),
                              invertible_scale(base, rng));
        const LetacParams lp = to_letac(x);
        const WishartParams back = from_letac(lp);
        const PsdMatrix u = random_argument(x.dim(), rng);
        const double round_trip =
            std::max(relative_deviation(back.omega().mat(), x.omega().mat()),
                     relative_deviation(back.sigma().mat(), x.sigma().mat()));
        return std::max(
            {round_trip, relative_deviation(back.p(), x.p()),
             relative_deviation(letac_laplace(lp, u), laplace(x, u))});
      });
}

IdentityResult gupta_nagar_suite(std::span<const WishartParams> bases,
                                 int count, Rng& rng) {
  return run_suite(
      "gupta-nagar", kTransformIdentityTol, bases, count,
      [&](const WishartParams& base) {
        const int d = base.dim();
        const PsdMatrix sigma = invertible_scale(base, rng);
        // Theta solving (Theta sigma + sigma Theta) / 4 = omega, computed in
        // the eigenbasis of sigma.
        const auto eig = sym_eig(sigma);
        const GeneralMatrix& v = eig.vectors;
        const GeneralMatrix w = v.transpose() * base.omega().mat() * v;
        GeneralMatrix theta_rot(d, d);
        for (int i = 0; i < d; ++i) {
          for (int j = 0; j < d; ++j) {
            theta_rot(i, j) = 4.0 * w(i, j) / (eig.values(i) + eig.values(j));
          }
        }
        const GuptaNagarParams gp{2.0 * base.p(), 0.5 * sigma,
                                  SymMatrix(v * theta_rot * v.transpose())};
        const WishartParams converted = from_gupta_nagar(gp);
        const PsdMatrix u = random_argument(d, rng);
        return std::max(
            relative_deviation(converted.omega().mat(), base.omega().mat()),
            relative_deviation(gupta_nagar_laplace(gp, u),
                               laplace(converted, u)));
      });
}

IdentityResult semigroup_suite(std::span<const WishartParams> bases, int count,
                               Rng& rng) {
  return run_suite("semigroup", kTransformIdentityTol, bases, count,
                   [&](const WishartParams& base) {
                     const WishartProcessParams proc =
                         process_from_base(base, rng);
                     const double t = uniform(rng, 0.0, 1.0);
                     const double s = uniform(rng, 0.0, 1.0);
                     const PsdMatrix u = random_argument(base.dim(), rng);
                     return semigroup_check(proc, t, s, u)
                         .max_relative_deviation;
                   });
}

IdentityResult transition_suite(std::span<const WishartParams> bases,
                                int count, Rng& rng) {
  return run_suite(
      "transition", kTransformIdentityTol, bases, count,
      [&](const WishartParams& base) {
        const int d = base.dim();
        const WishartProcessParams proc = process_from_base(base, rng);
        const double t = uniform(rng, 0.05, 2.0);
        const PsdMatrix x = random_psd(d, instances::uniform_int(rng, 0, d), rng,
                                       uniform(rng, 0.1, 3.0));
        const PsdMatrix u = random_argument(d, rng);
        const WishartParams law = transition_params(proc, t, x, true);
        const CharExponents ce = char_exponents_closed(proc, t, u);
        return relative_deviation(laplace(law, u),
                                  std::exp(-ce.phi - inner(ce.psi, x)));
      });
}

IdentityResult closed_vs_ode_suite(std::span<const WishartParams> bases,
                                   int count, Rng& rng) {
  return run_suite(
      "closed-vs-rk4", kClosedVsOdeTol, bases, count,
      [&](const WishartParams& base) {
        const WishartProcessParams proc = process_from_base(base, rng);
        const double t = uniform(rng, 0.05, 2.0);
        const PsdMatrix u = random_argument(base.dim(), rng);
        const CharExponents closed = char_exponents_closed(proc, t, u);
        const CharExponents ode =
            riccati_integrate(proc, t, u, kClosedVsOdeSteps);
        return std::max(relative_deviation(closed.phi, ode.phi),
                        relative_deviation(closed.psi.mat(), ode.psi.mat()));
      });
}

std::vector<IdentityResult> run_identity_suites(
    std::span<const WishartParams> bases, int count, std::uint64_t seed) {
  using Suite = IdentityResult (*)(std::span<const WishartParams>, int, Rng&);
  constexpr Suite kSuites[] = {pushforward_suite, tilt_suite,
                               convolution_suite, letac_suite,
                               gupta_nagar_suite, semigroup_suite,
                               transition_suite,  closed_vs_ode_suite};
  std::vector<IdentityResult> out;
  std::uint64_t stream = 0x1D0000;
  for (Suite suite : kSuites) {
    Rng rng(seed, stream++);
    out.push_back(suite(bases, count, rng));
  }
  return out;
}

OrderCheck rk_order_check(const WishartProcessParams& params, double t,
                          const PsdMatrix& u, int steps) {
  const CharExponents exact = char_exponents_closed(params, t, u);
  auto error_at = [&](int n) {
    const CharExponents ode = riccati_integrate(params, t, u, n);
    return std::abs(ode.phi - exact.phi) + (ode.psi.mat() - exact.psi.mat()).norm();
  };
  OrderCheck c;
  c.steps = steps;
  c.coarse_error = error_at(steps);
  c.fine_error = error_at(2 * steps);
  c.ratio = c.fine_error > 0.0 ? c.coarse_error / c.fine_error : 0.0;
  return c;
}

OrderCheck calibrated_order_check(const WishartProcessParams& params, double t,
                                  const PsdMatrix& u) {
  const CharExponents exact = char_exponents_closed(params, t, u);
  const double scale =
      std::max(1.0, std::abs(exact.phi) + exact.psi.mat().norm());
  auto rel_coarse = [&](int n) {
    return rk_order_check(params, t, u, n).coarse_error / scale;
  };
  int n = 8;
  while (n < kOrderMaxSteps) {
    double e = 0.0;
    try {
      e = rel_coarse(n);
    } catch (const NumericalFailure&) {
      e = std::numeric_limits<double>::infinity();  // too coarse to be stable
    }
    if (e <= kOrderWindowHigh) break;
    n *= 2;
  }
  while (n > 1 && rel_coarse(n) < kOrderWindowLow) {
    double e = 0.0;
    try {
      e = rel_coarse(n / 2);
    } catch (const NumericalFailure&) {
      break;
    }
    if (e > kOrderWindowHigh) break;
    n /= 2;
  }
  return rk_order_check(params, t, u, n);
}

}  // namespace ncwishart
