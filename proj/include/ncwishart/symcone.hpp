#pragma once

// Dense symmetric / positive semidefinite matrix kernel.

#include <complex>

#include <Eigen/Dense>

namespace ncwishart {

using GeneralMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Symmetric d x d matrix. Construction symmetrizes small floating-point
// asymmetry (at most kAsymmetryTol relative to the Frobenius norm) and rejects
// anything larger with ValidationError.
class SymMatrix {
 public:
  static constexpr double kAsymmetryTol = 1e-9;

  SymMatrix() = default;
  explicit SymMatrix(const Eigen::MatrixXd& m);

  static SymMatrix zero(int d);
  static SymMatrix identity(int d);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& mat() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }
  double norm() const { return m_.norm(); }

  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
  friend SymMatrix operator*(double s, const SymMatrix& a);

 protected:
  struct Unchecked {};
  SymMatrix(Eigen::MatrixXd m, Unchecked) : m_(std::move(m)) {}

  Eigen::MatrixXd m_;
};

// Symmetric matrix whose smallest eigenvalue is at least
// -eig_floor * max(largest eigenvalue, 1).
class PsdMatrix : public SymMatrix {
 public:
  static constexpr double kDefaultFloor = 1e-10;

  PsdMatrix() = default;
  // Throws NotPsdError when the eigenvalue floor is violated. The entries are
  // kept as given; use repair() to clip eigenvalues explicitly.
  explicit PsdMatrix(const SymMatrix& s, double eig_floor = kDefaultFloor);
  explicit PsdMatrix(const Eigen::MatrixXd& m, double eig_floor = kDefaultFloor)
      : PsdMatrix(SymMatrix(m), eig_floor) {}

  // Projection onto the cone: negative eigenvalues are clipped to zero.
  static PsdMatrix repair(const SymMatrix& s);
  // For matrices that are PSD by construction (outer products, clipped
  // reconstructions). Only symmetry is enforced, by averaging with the
  // transpose; no eigenvalue check is made.
  static PsdMatrix by_construction(const Eigen::MatrixXd& m);

  static PsdMatrix zero(int d);
  static PsdMatrix identity(int d);

  double eig_floor() const { return eig_floor_; }

  friend PsdMatrix operator+(const PsdMatrix& a, const PsdMatrix& b);

 private:
  double eig_floor_ = kDefaultFloor;
};

PsdMatrix operator*(double s, const PsdMatrix& a);  // s >= 0

struct EigenDecomposition {
  Vector values;          // descending
  Eigen::MatrixXd vectors;  // orthonormal columns, matching values
};

EigenDecomposition sym_eig(const SymMatrix& a);

PsdMatrix psd_sqrt(const PsdMatrix& a);

// e^{b t}, by scaling and squaring.
GeneralMatrix mat_exp(const GeneralMatrix& b, double t);

// Number of eigenvalues above rel_tol * max(largest eigenvalue, 1).
int rank_psd(const PsdMatrix& a, double rel_tol = 1e-10);

// Lower-triangular L with L L^T = a. Pivots that vanish to rounding level are
// treated as exact zeros, so singular PSD input is supported.
GeneralMatrix chol_psd(const PsdMatrix& a);

// log det(I + sigma u), evaluated as log det(I + sqrt(sigma) u sqrt(sigma)).
// u may be any symmetric matrix for which I + sqrt(sigma) u sqrt(sigma) is
// positive definite; otherwise ValidationError.
double logdet_shifted(const PsdMatrix& sigma, const SymMatrix& u);

// log det(I + sigma z) for z = re + i im with re PSD, on the branch that is
// continuous in z over the tube and real on the real slice.
std::complex<double> logdet_shifted_c(const PsdMatrix& sigma,
                                      const SymMatrix& re,
                                      const SymMatrix& im);

// <x, y> = tr(x y)
double inner(const SymMatrix& x, const SymMatrix& y);

// g x g^T
SymMatrix congruence(const GeneralMatrix& g, const SymMatrix& x);
PsdMatrix congruence(const GeneralMatrix& g, const PsdMatrix& x);

bool is_invertible(const GeneralMatrix& g);

}  // namespace ncwishart
