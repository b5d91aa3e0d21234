#pragma once

// Non-central Wishart laws Gamma(p, omega; sigma) on the PSD cone, given by
// the Laplace transform
//
//   L(u) = det(I + sigma u)^{-p} exp(-tr(u (I + sigma u)^{-1} omega)).
//
// Everything here is a formula on parameters; whether a probability law with
// that transform exists is decided in existence.hpp.

#include <complex>
#include <optional>
#include <utility>

#include "ncwishart/symcone.hpp"

namespace ncwishart {

class WishartParams {
 public:
  WishartParams(double p, PsdMatrix omega, PsdMatrix sigma);

  // Central law Gamma(p; sigma).
  static WishartParams central(double p, PsdMatrix sigma);

  int dim() const { return sigma_.dim(); }
  double p() const { return p_; }
  const PsdMatrix& omega() const { return omega_; }
  const PsdMatrix& sigma() const { return sigma_; }

  // p = 0 and omega = 0: the point mass at zero.
  bool is_trivial() const;

 private:
  double p_;
  PsdMatrix omega_;
  PsdMatrix sigma_;
};

// z = u + i v; v absent means a real argument.
struct TransformArgument {
  PsdMatrix real_part;
  std::optional<SymMatrix> imag_part;
};

struct NaturalExponentialTilt {
  SymMatrix v;
  double c = 0.0;  // tr((sigma - I) omega)
};

struct TiltResult {
  WishartParams params;
  NaturalExponentialTilt tilt;
};

// gamma(p, a; sigma) with a = sigma^{-1} omega sigma^{-1}.
struct LetacParams {
  double p;
  PsdMatrix a;
  PsdMatrix sigma;  // positive definite
};

// W_d(k, Sigma, Theta), transform det(I + 2 Sigma u)^{-k/2}
// exp(-tr(Theta (I + 2 Sigma u)^{-1} Sigma u)).
struct GuptaNagarParams {
  double k;
  PsdMatrix Sigma;  // positive definite
  SymMatrix Theta;
};

double laplace(const WishartParams& params, const PsdMatrix& u);

// The same formula on the whole domain {u symmetric : I + sqrt(sigma) u
// sqrt(sigma) positive definite}, which is where tilted transforms live.
double transform_value(const WishartParams& params, const SymMatrix& u);

std::complex<double> fourier_laplace(const WishartParams& params,
                                     const TransformArgument& z);

// Membership of v in the mgf domain -sigma^{-1} + S_d^{++}. Needs invertible
// sigma (UnsupportedParameterError otherwise).
bool mgf_domain_contains(const WishartParams& params, const SymMatrix& v);

// E[X] = p sigma + omega.
SymMatrix mean(const WishartParams& params);

// Law of g X g^T: (p, g omega g^T, g sigma g^T).
WishartParams pushforward_congruence(const WishartParams& params,
                                     const GeneralMatrix& g);

// Exponential tilt of Gamma(p, omega; I) by v = target^{-1} - I, which is
// Gamma(p, target omega target; target).
TiltResult tilt_from_identity_scale(const WishartParams& params,
                                    const PsdMatrix& target_sigma);

WishartParams convolve(const WishartParams& a, const WishartParams& b);

WishartParams scale_noncentrality(const WishartParams& params, double t);

LetacParams to_letac(const WishartParams& params);
WishartParams from_letac(const LetacParams& lp);
double letac_laplace(const LetacParams& lp, const PsdMatrix& u);

WishartParams from_gupta_nagar(const GuptaNagarParams& gp);
double gupta_nagar_laplace(const GuptaNagarParams& gp, const PsdMatrix& u);

// For sigma = diag(0_{d-r}, sigma_r) with rank r, the leading (d-r) block of
// every sample is the constant given by the same block of omega.
SymMatrix project_degenerate(const WishartParams& params, int r);

}  // namespace ncwishart
