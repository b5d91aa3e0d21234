#include "ncwishart/symcone.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "ncwishart/errors.hpp"

namespace ncwishart {

namespace {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

double psd_violation_bound(const Vector& descending, double floor) {
  const double top = descending.size() > 0 ? descending(0) : 0.0;
  return -floor * std::max(top, 1.0);
}

}  // namespace

SymMatrix::SymMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << "matrix must be square, got " << m.rows() << "x" << m.cols();
    throw ValidationError(os.str());
  }
  if (!m.allFinite()) throw ValidationError("matrix has non-finite entries");
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (m.size() > 0 && asym > kAsymmetryTol * m.norm()) {
    std::ostringstream os;
    os << "matrix is not symmetric (max asymmetry " << asym << ")";
    throw ValidationError(os.str());
  }
  m_ = symmetrized(m);
}

SymMatrix SymMatrix::zero(int d) {
  return SymMatrix(Eigen::MatrixXd::Zero(d, d), Unchecked{});
}

SymMatrix SymMatrix::identity(int d) {
  return SymMatrix(Eigen::MatrixXd::Identity(d, d), Unchecked{});
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
  return SymMatrix(a.m_ + b.m_, SymMatrix::Unchecked{});
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
  return SymMatrix(a.m_ - b.m_, SymMatrix::Unchecked{});
}

SymMatrix operator*(double s, const SymMatrix& a) {
  return SymMatrix(s * a.m_, SymMatrix::Unchecked{});
}

PsdMatrix::PsdMatrix(const SymMatrix& s, double eig_floor)
    : SymMatrix(s), eig_floor_(eig_floor) {
  if (dim() == 0) return;
  const auto eig = sym_eig(s);
  const double lowest = eig.values(dim() - 1);
  if (lowest < psd_violation_bound(eig.values, eig_floor)) {
    std::ostringstream os;
    os << "matrix is not positive semidefinite (smallest eigenvalue "
       << lowest << ")";
    throw NotPsdError(os.str());
  }
}

PsdMatrix PsdMatrix::repair(const SymMatrix& s) {
  const auto eig = sym_eig(s);
  const Vector clipped = eig.values.cwiseMax(0.0);
  return by_construction(eig.vectors * clipped.asDiagonal() *
                         eig.vectors.transpose());
}

PsdMatrix PsdMatrix::by_construction(const Eigen::MatrixXd& m) {
  PsdMatrix out;
  out.m_ = symmetrized(m);
  return out;
}

PsdMatrix PsdMatrix::zero(int d) {
  return by_construction(Eigen::MatrixXd::Zero(d, d));
}

PsdMatrix PsdMatrix::identity(int d) {
  return by_construction(Eigen::MatrixXd::Identity(d, d));
}

PsdMatrix operator+(const PsdMatrix& a, const PsdMatrix& b) {
  return PsdMatrix::by_construction(a.m_ + b.m_);
}

PsdMatrix operator*(double s, const PsdMatrix& a) {
  if (s < 0) throw ValidationError("PSD matrices only scale by s >= 0");
  return PsdMatrix::by_construction(s * a.mat());
}

EigenDecomposition sym_eig(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.mat());
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("symmetric eigensolver did not converge");
  }
  // Eigen returns ascending order.
  EigenDecomposition out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

PsdMatrix psd_sqrt(const PsdMatrix& a) {
  if (a.dim() == 0) return a;
  const auto eig = sym_eig(a);
  const Vector root = eig.values.cwiseMax(0.0).cwiseSqrt();
  return PsdMatrix::by_construction(eig.vectors * root.asDiagonal() *
                                    eig.vectors.transpose());
}

GeneralMatrix mat_exp(const GeneralMatrix& b, double t) {
  if (b.rows() != b.cols()) throw ValidationError("mat_exp needs a square matrix");
  if (t == 0.0 || b.isZero(0.0)) {
    return GeneralMatrix::Identity(b.rows(), b.cols());
  }
  const GeneralMatrix scaled = b * t;
  return scaled.exp();
}

int rank_psd(const PsdMatrix& a, double rel_tol) {
  if (a.dim() == 0) return 0;
  const auto eig = sym_eig(a);
  const double cut = rel_tol * std::max(eig.values(0), 1.0);
  return static_cast<int>((eig.values.array() > cut).count());
}

GeneralMatrix chol_psd(const PsdMatrix& a) {
  const int d = a.dim();
  if (d == 0) return GeneralMatrix(0, 0);
  // a = B B^T with B = V sqrt(Lambda); B^T = Q R gives a = R^T R with R^T
  // lower triangular. Works uniformly for singular input.
  const auto eig = sym_eig(a);
  const Vector root = eig.values.cwiseMax(0.0).cwiseSqrt();
  const GeneralMatrix bt = (eig.vectors * root.asDiagonal()).transpose();
  Eigen::HouseholderQR<GeneralMatrix> qr(bt);
  GeneralMatrix upper = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    if (upper(i, i) < 0) upper.row(i) *= -1.0;
  }
  return upper.transpose();
}

double logdet_shifted(const PsdMatrix& sigma, const SymMatrix& u) {
  if (sigma.dim() != u.dim()) throw ValidationError("dimension mismatch");
  const int d = sigma.dim();
  const GeneralMatrix root = psd_sqrt(sigma).mat();
  const SymMatrix inner_form(root * u.mat() * root);
  const auto eig = sym_eig(inner_form);
  double acc = 0.0;
  for (int i = 0; i < d; ++i) {
    if (eig.values(i) <= -1.0) {
      throw ValidationError("I + sigma u is not positive definite");
    }
    acc += std::log1p(eig.values(i));
  }
  return acc;
}

std::complex<double> logdet_shifted_c(const PsdMatrix& sigma,
                                      const SymMatrix& re,
                                      const SymMatrix& im) {
  const int d = sigma.dim();
  if (re.dim() != d || im.dim() != d) throw ValidationError("dimension mismatch");
  // det(I + sigma z) = det(A + iB) with A = I + s re s, B = s im s, s the PSD
  // root of sigma. With A = R R^T, det(A + iB) = det(A) prod_k (1 + i mu_k),
  // mu_k the eigenvalues of R^{-1} B R^{-T}. Each factor has real part >= 1,
  // so the principal log per factor is continuous on the tube.
  const GeneralMatrix root = psd_sqrt(sigma).mat();
  const GeneralMatrix a =
      GeneralMatrix::Identity(d, d) + root * re.mat() * root;
  const GeneralMatrix b = root * im.mat() * root;
  Eigen::LLT<GeneralMatrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw ValidationError("real part of I + sigma z is not positive definite");
  }
  const GeneralMatrix r = llt.matrixL();
  const GeneralMatrix rinv_b =
      r.triangularView<Eigen::Lower>().solve(b);
  const GeneralMatrix c =
      r.triangularView<Eigen::Lower>().solve(rinv_b.transpose());
  const auto mu = sym_eig(SymMatrix(0.5 * (c + c.transpose()))).values;
  std::complex<double> acc(0.0, 0.0);
  for (int i = 0; i < d; ++i) {
    acc += 2.0 * std::log(r(i, i));
    acc += std::log(std::complex<double>(1.0, mu(i)));
  }
  if (acc.real() < std::log(1e-14)) {
    throw SingularityError("I + sigma z is numerically singular");
  }
  return acc;
}

double inner(const SymMatrix& x, const SymMatrix& y) {
  return x.mat().cwiseProduct(y.mat()).sum();
}

SymMatrix congruence(const GeneralMatrix& g, const SymMatrix& x) {
  return SymMatrix(g * x.mat() * g.transpose());
}

PsdMatrix congruence(const GeneralMatrix& g, const PsdMatrix& x) {
  return PsdMatrix::by_construction(g * x.mat() * g.transpose());
}

bool is_invertible(const GeneralMatrix& g) {
  if (g.rows() != g.cols()) return false;
  if (g.rows() == 0) return true;
  Eigen::JacobiSVD<GeneralMatrix> svd(g);
  const auto& s = svd.singularValues();
  return s(s.size() - 1) > 1e-12 * std::max(s(0), 1e-300);
}

}  // namespace ncwishart
