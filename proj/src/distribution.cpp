#include "ncwishart/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ncwishart/errors.hpp"

namespace ncwishart {

namespace {

using ComplexMatrix = Eigen::MatrixXcd;

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw ValidationError(os.str());
  }
}

bool is_positive_definite(const PsdMatrix& m) {
  return rank_psd(m) == m.dim();
}

// tr(u (I + sigma u)^{-1} omega), with u (I + sigma u)^{-1} formed as
// (I + u sigma)^{-1} u so u is never inverted.
double noncentral_exponent(const GeneralMatrix& sigma, const GeneralMatrix& u,
                           const GeneralMatrix& omega) {
  const int d = static_cast<int>(u.rows());
  const GeneralMatrix lhs = GeneralMatrix::Identity(d, d) + u * sigma;
  const GeneralMatrix y = lhs.partialPivLu().solve(u);
  return y.cwiseProduct(omega.transpose()).sum();
}

GeneralMatrix spd_inverse(const PsdMatrix& m) {
  Eigen::LLT<GeneralMatrix> llt(m.mat());
  if (llt.info() != Eigen::Success || !is_positive_definite(m)) {
    throw UnsupportedParameterError("matrix must be positive definite");
  }
  return llt.solve(GeneralMatrix::Identity(m.dim(), m.dim()));
}

}  // namespace

WishartParams::WishartParams(double p, PsdMatrix omega, PsdMatrix sigma)
    : p_(p), omega_(std::move(omega)), sigma_(std::move(sigma)) {
  if (!(p >= 0.0) || !std::isfinite(p)) {
    throw ValidationError("shape p must be finite and >= 0");
  }
  require_same_dim(omega_.dim(), sigma_.dim(), "WishartParams");
  if (sigma_.dim() < 1) throw ValidationError("dimension must be >= 1");
}

WishartParams WishartParams::central(double p, PsdMatrix sigma) {
  const int d = sigma.dim();
  return WishartParams(p, PsdMatrix::zero(d), std::move(sigma));
}

bool WishartParams::is_trivial() const {
  return p_ == 0.0 && omega_.mat().isZero(0.0);
}

double transform_value(const WishartParams& params, const SymMatrix& u) {
  require_same_dim(params.dim(), u.dim(), "transform");
  const double logdet = logdet_shifted(params.sigma(), u);
  const double expo = noncentral_exponent(params.sigma().mat(), u.mat(),
                                          params.omega().mat());
  return std::exp(-params.p() * logdet - expo);
}

double laplace(const WishartParams& params, const PsdMatrix& u) {
  require_same_dim(params.dim(), u.dim(), "laplace");
  // Both terms are >= 0 on the PSD cone; clamp rounding below zero.
  const double logdet = std::max(0.0, logdet_shifted(params.sigma(), u));
  const double expo = std::max(
      0.0, noncentral_exponent(params.sigma().mat(), u.mat(),
                               params.omega().mat()));
  return std::exp(-params.p() * logdet - expo);
}

std::complex<double> fourier_laplace(const WishartParams& params,
                                     const TransformArgument& z) {
  const int d = params.dim();
  require_same_dim(d, z.real_part.dim(), "fourier_laplace");
  if (!z.imag_part) {
    return {laplace(params, z.real_part), 0.0};
  }
  require_same_dim(d, z.imag_part->dim(), "fourier_laplace");
  const std::complex<double> logdet =
      logdet_shifted_c(params.sigma(), z.real_part, *z.imag_part);

  const std::complex<double> i(0.0, 1.0);
  const ComplexMatrix zc = z.real_part.mat().cast<std::complex<double>>() +
                           i * z.imag_part->mat().cast<std::complex<double>>();
  const ComplexMatrix sigma = params.sigma().mat().cast<std::complex<double>>();
  const ComplexMatrix lhs = ComplexMatrix::Identity(d, d) + zc * sigma;
  Eigen::FullPivLU<ComplexMatrix> lu(lhs);
  if (!lu.isInvertible()) {
    throw SingularityError("I + z sigma is singular");
  }
  const ComplexMatrix y = lu.solve(zc);
  const std::complex<double> expo =
      (y.cwiseProduct(params.omega().mat().cast<std::complex<double>>()))
          .sum();
  return std::exp(-params.p() * logdet - expo);
}

bool mgf_domain_contains(const WishartParams& params, const SymMatrix& v) {
  require_same_dim(params.dim(), v.dim(), "mgf_domain_contains");
  if (!is_positive_definite(params.sigma())) {
    throw UnsupportedParameterError(
        "mgf domain membership needs an invertible scale sigma");
  }
  const int d = params.dim();
  const GeneralMatrix root = psd_sqrt(params.sigma()).mat();
  const SymMatrix shifted(GeneralMatrix::Identity(d, d) +
                          root * v.mat() * root);
  const auto eig = sym_eig(shifted);
  return eig.values(d - 1) > 1e-10;
}

SymMatrix mean(const WishartParams& params) {
  return params.p() * static_cast<const SymMatrix&>(params.sigma()) +
         params.omega();
}

WishartParams pushforward_congruence(const WishartParams& params,
                                     const GeneralMatrix& g) {
  require_same_dim(params.dim(), static_cast<int>(g.rows()), "pushforward");
  if (!is_invertible(g)) {
    throw ValidationError("pushforward needs an invertible matrix g");
  }
  return WishartParams(params.p(), congruence(g, params.omega()),
                       congruence(g, params.sigma()));
}

TiltResult tilt_from_identity_scale(const WishartParams& params,
                                    const PsdMatrix& target_sigma) {
  const int d = params.dim();
  require_same_dim(d, target_sigma.dim(), "tilt");
  const GeneralMatrix eye = GeneralMatrix::Identity(d, d);
  if ((params.sigma().mat() - eye).cwiseAbs().maxCoeff() > 1e-12) {
    throw UnsupportedParameterError(
        "tilting is defined from a base with sigma = I; push forward first");
  }
  const GeneralMatrix inv = spd_inverse(target_sigma);
  const GeneralMatrix& s = target_sigma.mat();
  NaturalExponentialTilt tilt{
      SymMatrix(inv - eye),
      ((s - eye) * params.omega().mat()).trace(),
  };
  WishartParams tilted(params.p(), congruence(s, params.omega()),
                       target_sigma);
  return {std::move(tilted), std::move(tilt)};
}

WishartParams convolve(const WishartParams& a, const WishartParams& b) {
  require_same_dim(a.dim(), b.dim(), "convolve");
  if ((a.sigma().mat() - b.sigma().mat()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ValidationError("convolution needs a common scale sigma");
  }
  return WishartParams(a.p() + b.p(), a.omega() + b.omega(), a.sigma());
}

WishartParams scale_noncentrality(const WishartParams& params, double t) {
  if (!(t > 0.0)) throw ValidationError("scale factor t must be > 0");
  return WishartParams(params.p(), t * params.omega(), params.sigma());
}

LetacParams to_letac(const WishartParams& params) {
  const GeneralMatrix inv = spd_inverse(params.sigma());
  return {params.p(), congruence(inv, params.omega()), params.sigma()};
}

WishartParams from_letac(const LetacParams& lp) {
  require_same_dim(lp.a.dim(), lp.sigma.dim(), "from_letac");
  if (!is_positive_definite(lp.sigma)) {
    throw UnsupportedParameterError("Letac-Massam form needs invertible sigma");
  }
  return WishartParams(lp.p, congruence(lp.sigma.mat(), lp.a), lp.sigma);
}

double letac_laplace(const LetacParams& lp, const PsdMatrix& u) {
  const GeneralMatrix& s = lp.sigma.mat();
  const double logdet = logdet_shifted(lp.sigma, u);
  const GeneralMatrix sas = s * lp.a.mat() * s;
  return std::exp(-lp.p * logdet - noncentral_exponent(s, u.mat(), sas));
}

WishartParams from_gupta_nagar(const GuptaNagarParams& gp) {
  require_same_dim(gp.Sigma.dim(), gp.Theta.dim(), "from_gupta_nagar");
  if (!(gp.k >= 0.0)) throw ValidationError("shape k must be >= 0");
  if (!is_positive_definite(gp.Sigma)) {
    throw UnsupportedParameterError("Gupta-Nagar form needs invertible Sigma");
  }
  const PsdMatrix sigma = 2.0 * gp.Sigma;
  const GeneralMatrix& th = gp.Theta.mat();
  const GeneralMatrix& s = sigma.mat();
  const SymMatrix omega(0.25 * (th * s + s * th));
  try {
    return WishartParams(0.5 * gp.k, PsdMatrix(omega), sigma);
  } catch (const NotPsdError& e) {
    throw NotPsdError(
        std::string("(Theta sigma + sigma Theta)/4 is not positive "
                    "semidefinite, so this W_d(k, Sigma, Theta) has no "
                    "PSD non-centrality: ") +
        e.what());
  }
}

double gupta_nagar_laplace(const GuptaNagarParams& gp, const PsdMatrix& u) {
  const int d = u.dim();
  require_same_dim(gp.Sigma.dim(), d, "gupta_nagar_laplace");
  const PsdMatrix two_sigma = 2.0 * gp.Sigma;
  const double logdet = logdet_shifted(two_sigma, u);
  const GeneralMatrix lhs =
      GeneralMatrix::Identity(d, d) + two_sigma.mat() * u.mat();
  const GeneralMatrix y = lhs.partialPivLu().solve(gp.Sigma.mat() * u.mat());
  const double expo = (gp.Theta.mat() * y).trace();
  return std::exp(-0.5 * gp.k * logdet - expo);
}

SymMatrix project_degenerate(const WishartParams& params, int r) {
  const int d = params.dim();
  if (r < 0 || r > d) throw ValidationError("rank r must lie in [0, d]");
  const int k = d - r;
  const GeneralMatrix& s = params.sigma().mat();
  const double tol = 1e-10 * std::max(1.0, s.norm());
  const bool block_form =
      k == 0 || (s.topRows(k).cwiseAbs().maxCoeff() <= tol &&
                 s.leftCols(k).cwiseAbs().maxCoeff() <= tol);
  if (!block_form || rank_psd(params.sigma()) != r) {
    throw ValidationError(
        "sigma is not of the form diag(0, sigma_r) with rank r; conjugate "
        "sigma by an orthogonal matrix into that block form first");
  }
  return SymMatrix(params.omega().mat().topLeftCorner(k, k));
}

}  // namespace ncwishart
