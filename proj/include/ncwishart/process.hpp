#pragma once

// Wishart processes on the PSD cone with parameters (p, alpha, beta):
//
//   dX = sqrt(X) dB Q + Q^T dB^T sqrt(X) + (2p alpha + beta X + X beta^T) dt,
//   Q^T Q = alpha,
//
// and their characteristic exponents E[exp(-<u, X_t>)] = exp(-phi - <psi, x>),
// which solve
//
//   phi' = 2p <alpha, psi>,                          phi(0) = 0,
//   psi' = -2 psi alpha psi + psi beta + beta^T psi, psi(0) = u.

#include "ncwishart/distribution.hpp"
#include "ncwishart/symcone.hpp"

namespace ncwishart {

enum class ProcessMode {
  Strict,  // requires p >= (d-1)/2, i.e. a process actually exists
  Formal,  // any p >= 0; the object is then only a formal parameter set
};

class WishartProcessParams {
 public:
  WishartProcessParams(double p, PsdMatrix alpha, GeneralMatrix beta,
                       ProcessMode mode = ProcessMode::Strict);

  int dim() const { return alpha_.dim(); }
  double p() const { return p_; }
  const PsdMatrix& alpha() const { return alpha_; }
  const GeneralMatrix& beta() const { return beta_; }
  ProcessMode mode() const { return mode_; }
  // Whether the drift condition holds, independent of the construction mode.
  bool stochastic() const;

  // b = 2p alpha
  PsdMatrix constant_drift() const;
  // B(x) = beta x + x beta^T
  SymMatrix linear_drift(const SymMatrix& x) const;

 private:
  double p_;
  PsdMatrix alpha_;
  GeneralMatrix beta_;
  ProcessMode mode_;
};

struct CharExponents {
  double phi = 0.0;
  SymMatrix psi;
  double t = 0.0;
};

struct FlowPair {
  PsdMatrix omega_t;
  PsdMatrix sigma_t;
  double t = 0.0;
};

struct RiccatiRhs {
  double F = 0.0;
  SymMatrix R;
};

// e^{beta t} x e^{beta^T t}
PsdMatrix flow_omega(const GeneralMatrix& beta, double t, const PsdMatrix& x);

// 2 int_0^t e^{beta s} alpha e^{beta^T s} ds by composite 5-point
// Gauss-Legendre on max(16, ceil(64 t (1 + |beta|))) panels.
PsdMatrix flow_sigma(const GeneralMatrix& beta, double t,
                     const PsdMatrix& alpha);

FlowPair flows(const WishartProcessParams& params, double t,
               const PsdMatrix& x);

RiccatiRhs riccati_rhs(const WishartProcessParams& params,
                       const SymMatrix& psi);

// phi = p log det(I + u sigma_t), psi = e^{beta^T t} u (I + sigma_t u)^{-1}
// e^{beta t}. Raises NumericalFailure if I + sigma_t u has condition number
// above 1e12.
CharExponents char_exponents_closed(const WishartProcessParams& params,
                                    double t, const PsdMatrix& u);

// Classical fixed-step RK4 on the Riccati system.
CharExponents riccati_integrate(const WishartProcessParams& params, double t,
                                const PsdMatrix& u, int steps);

// Law of X_t given X_0 = x: Gamma(p, omega_t(x); sigma_t(alpha)). Formal-mode
// parameters are refused unless allow_formal is set.
WishartParams transition_params(const WishartProcessParams& params, double t,
                                const PsdMatrix& x, bool allow_formal = false);

struct SemigroupReport {
  double psi_deviation = 0.0;  // |psi(t+s,u) - psi(t, psi(s,u))|, relative
  double phi_deviation = 0.0;  // |phi(t+s,u) - phi(s,u) - phi(t, psi(s,u))|
  double max_relative_deviation = 0.0;
};

SemigroupReport semigroup_check(const WishartProcessParams& params, double t,
                                double s, const PsdMatrix& u);

// |a - b| / max(|a|, |b|), zero when both vanish.
double relative_deviation(double a, double b);
double relative_deviation(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace ncwishart
