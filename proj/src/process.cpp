#include "ncwishart/process.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "ncwishart/errors.hpp"
#include "ncwishart/existence.hpp"

namespace ncwishart {

namespace {

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGaussNodes = {
    -0.9061798459386639927976269, -0.5384693101056830910363144, 0.0,
    0.5384693101056830910363144, 0.9061798459386639927976269};
constexpr std::array<double, 5> kGaussWeights = {
    0.2369268850561890875142640, 0.4786286704993664680412915,
    0.5688888888888888888888889, 0.4786286704993664680412915,
    0.2369268850561890875142640};

constexpr double kMaxCondition = 1e12;

void require_dim(int expected, int got, const char* what) {
  if (expected != got) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << expected << " vs " << got << ")";
    throw ValidationError(os.str());
  }
}

Eigen::MatrixXd rhs_matrix(const Eigen::MatrixXd& psi,
                           const Eigen::MatrixXd& alpha,
                           const Eigen::MatrixXd& beta) {
  Eigen::MatrixXd r =
      -2.0 * psi * alpha * psi + psi * beta + beta.transpose() * psi;
  return 0.5 * (r + r.transpose());
}

}  // namespace

WishartProcessParams::WishartProcessParams(double p, PsdMatrix alpha,
                                           GeneralMatrix beta,
                                           ProcessMode mode)
    : p_(p), alpha_(std::move(alpha)), beta_(std::move(beta)), mode_(mode) {
  if (!(p >= 0.0) || !std::isfinite(p)) {
    throw ValidationError("shape p must be finite and >= 0");
  }
  if (beta_.rows() != alpha_.dim() || beta_.cols() != alpha_.dim()) {
    throw ValidationError("beta must be d x d with d = dim(alpha)");
  }
  if (!beta_.allFinite()) throw ValidationError("beta has non-finite entries");
  if (alpha_.dim() < 1) throw ValidationError("dimension must be >= 1");
  if (mode_ == ProcessMode::Strict && !drift_condition_check(dim(), p_)) {
    std::ostringstream os;
    os << "no Wishart process with p = " << p_ << " < (d-1)/2 = "
       << 0.5 * (dim() - 1) << "; use formal mode for formal computations";
    throw ValidationError(os.str());
  }
}

bool WishartProcessParams::stochastic() const {
  return drift_condition_check(dim(), p_);
}

PsdMatrix WishartProcessParams::constant_drift() const {
  return (2.0 * p_) * alpha_;
}

SymMatrix WishartProcessParams::linear_drift(const SymMatrix& x) const {
  return SymMatrix(beta_ * x.mat() + x.mat() * beta_.transpose());
}

PsdMatrix flow_omega(const GeneralMatrix& beta, double t, const PsdMatrix& x) {
  require_dim(x.dim(), static_cast<int>(beta.rows()), "flow_omega");
  return congruence(mat_exp(beta, t), x);
}

PsdMatrix flow_sigma(const GeneralMatrix& beta, double t,
                     const PsdMatrix& alpha) {
  const int d = alpha.dim();
  require_dim(d, static_cast<int>(beta.rows()), "flow_sigma");
  if (t < 0.0) throw ValidationError("flow_sigma needs t >= 0");
  if (t == 0.0) return PsdMatrix::zero(d);

  const int panels = std::max(
      16, static_cast<int>(std::ceil(64.0 * t * (1.0 + beta.norm()))));
  const double h = t / panels;
  std::array<GeneralMatrix, 5> node_exp;
  for (std::size_t k = 0; k < kGaussNodes.size(); ++k) {
    node_exp[k] = mat_exp(beta, 0.5 * h * (1.0 + kGaussNodes[k]));
  }
  const GeneralMatrix panel_step = mat_exp(beta, h);

  GeneralMatrix start = GeneralMatrix::Identity(d, d);
  GeneralMatrix acc = GeneralMatrix::Zero(d, d);
  for (int j = 0; j < panels; ++j) {
    for (std::size_t k = 0; k < kGaussNodes.size(); ++k) {
      const GeneralMatrix e = start * node_exp[k];
      acc += kGaussWeights[k] * (e * alpha.mat() * e.transpose());
    }
    start = start * panel_step;
  }
  // 2 * (h / 2) * sum of weighted integrand values
  return PsdMatrix::by_construction(h * acc);
}

FlowPair flows(const WishartProcessParams& params, double t,
               const PsdMatrix& x) {
  return {flow_omega(params.beta(), t, x),
          flow_sigma(params.beta(), t, params.alpha()), t};
}

RiccatiRhs riccati_rhs(const WishartProcessParams& params,
                       const SymMatrix& psi) {
  require_dim(params.dim(), psi.dim(), "riccati_rhs");
  return {2.0 * params.p() * inner(params.alpha(), psi),
          SymMatrix(rhs_matrix(psi.mat(), params.alpha().mat(),
                               params.beta()))};
}

CharExponents char_exponents_closed(const WishartProcessParams& params,
                                    double t, const PsdMatrix& u) {
  const int d = params.dim();
  require_dim(d, u.dim(), "char_exponents_closed");
  if (t < 0.0) throw ValidationError("time t must be >= 0");
  if (t == 0.0) return {0.0, u, 0.0};

  const PsdMatrix sigma_t = flow_sigma(params.beta(), t, params.alpha());
  const double phi = params.p() * logdet_shifted(sigma_t, u);

  // u (I + sigma_t u)^{-1} = (I + u sigma_t)^{-1} u
  const GeneralMatrix lhs =
      GeneralMatrix::Identity(d, d) + u.mat() * sigma_t.mat();
  Eigen::PartialPivLU<GeneralMatrix> lu(lhs);
  const double rcond = lu.rcond();
  if (!(rcond * kMaxCondition >= 1.0)) {
    std::ostringstream os;
    os << "I + u sigma_t is ill-conditioned (reciprocal condition " << rcond
       << ")";
    throw NumericalFailure(os.str());
  }
  const GeneralMatrix core = lu.solve(u.mat());
  const GeneralMatrix e = mat_exp(params.beta(), t);
  const GeneralMatrix psi = e.transpose() * core * e;
  return {phi, SymMatrix(0.5 * (psi + psi.transpose())), t};
}

CharExponents riccati_integrate(const WishartProcessParams& params, double t,
                                const PsdMatrix& u, int steps) {
  require_dim(params.dim(), u.dim(), "riccati_integrate");
  if (steps < 1) throw ValidationError("steps must be >= 1");
  if (t < 0.0) throw ValidationError("time t must be >= 0");

  const GeneralMatrix& alpha = params.alpha().mat();
  const GeneralMatrix& beta = params.beta();
  const double two_p = 2.0 * params.p();
  auto dphi = [&](const GeneralMatrix& psi) {
    return two_p * alpha.cwiseProduct(psi).sum();
  };
  auto dpsi = [&](const GeneralMatrix& psi) {
    return rhs_matrix(psi, alpha, beta);
  };

  const double h = t / steps;
  double phi = 0.0;
  GeneralMatrix psi = u.mat();
  for (int i = 0; i < steps; ++i) {
    const GeneralMatrix k1 = dpsi(psi);
    const double l1 = dphi(psi);
    const GeneralMatrix p2 = psi + 0.5 * h * k1;
    const GeneralMatrix k2 = dpsi(p2);
    const double l2 = dphi(p2);
    const GeneralMatrix p3 = psi + 0.5 * h * k2;
    const GeneralMatrix k3 = dpsi(p3);
    const double l3 = dphi(p3);
    const GeneralMatrix p4 = psi + h * k3;
    const GeneralMatrix k4 = dpsi(p4);
    const double l4 = dphi(p4);
    psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    phi += (h / 6.0) * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
    if (!psi.allFinite() || !std::isfinite(phi) || psi.norm() > 1e150) {
      throw NumericalFailure("Riccati integration diverged");
    }
  }
  return {phi, SymMatrix(0.5 * (psi + psi.transpose())), t};
}

WishartParams transition_params(const WishartProcessParams& params, double t,
                                const PsdMatrix& x, bool allow_formal) {
  require_dim(params.dim(), x.dim(), "transition_params");
  if (!(t > 0.0)) throw ValidationError("transition needs t > 0");
  if (params.alpha().mat().isZero(0.0)) {
    throw ValidationError("transition law needs a nonzero diffusion alpha");
  }
  if (params.mode() == ProcessMode::Formal && !allow_formal) {
    throw PreconditionError(
        "formal-mode process: transition laws are formal; pass allow_formal");
  }
  const FlowPair f = flows(params, t, x);
  return WishartParams(params.p(), f.omega_t, f.sigma_t);
}

double relative_deviation(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

double relative_deviation(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = std::max(a.norm(), b.norm());
  if (scale == 0.0) return 0.0;
  return (a - b).norm() / scale;
}

SemigroupReport semigroup_check(const WishartProcessParams& params, double t,
                                double s, const PsdMatrix& u) {
  if (t < 0.0 || s < 0.0) throw ValidationError("times must be >= 0");
  const CharExponents whole = char_exponents_closed(params, t + s, u);
  const CharExponents first = char_exponents_closed(params, s, u);
  const CharExponents second =
      char_exponents_closed(params, t, PsdMatrix(first.psi));
  SemigroupReport r;
  r.psi_deviation = relative_deviation(whole.psi.mat(), second.psi.mat());
  r.phi_deviation = relative_deviation(whole.phi, first.phi + second.phi);
  r.max_relative_deviation = std::max(r.psi_deviation, r.phi_deviation);
  return r;
}

}  // namespace ncwishart
