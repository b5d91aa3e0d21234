#include "ncwishart/instances.hpp"

#include <random>

namespace ncwishart::instances {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng.engine());
}

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng.engine());
}

GeneralMatrix gaussian_matrix(int rows, int cols, Rng& rng) {
  GeneralMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = rng.normal();
  }
  return m;
}

PsdMatrix random_psd(int d, int rank, Rng& rng, double scale) {
  const GeneralMatrix b = gaussian_matrix(d, rank, rng);
  return PsdMatrix::by_construction((scale / d) * (b * b.transpose()));
}

PsdMatrix random_pd(int d, Rng& rng) {
  const GeneralMatrix b = gaussian_matrix(d, d, rng);
  return PsdMatrix::by_construction(b * b.transpose() / d +
                                    0.2 * GeneralMatrix::Identity(d, d));
}

GeneralMatrix random_orthogonal(int d, Rng& rng) {
  Eigen::HouseholderQR<GeneralMatrix> qr(gaussian_matrix(d, d, rng));
  return qr.householderQ() * GeneralMatrix::Identity(d, d);
}

GeneralMatrix random_invertible(int d, Rng& rng) {
  Vector s(d);
  for (int i = 0; i < d; ++i) s(i) = uniform(rng, 0.5, 2.0);
  return random_orthogonal(d, rng) * s.asDiagonal() * random_orthogonal(d, rng);
}

GeneralMatrix random_beta(int d, double max_norm, Rng& rng) {
  GeneralMatrix b = gaussian_matrix(d, d, rng);
  const double target = uniform(rng, 0.0, max_norm);
  const double n = b.norm();
  return n > 0.0 ? GeneralMatrix(b * (target / n)) : b;
}

WishartParams random_params(int d, Rng& rng) {
  const double p = uniform(rng, 0.0, 3.0);
  const int rank = uniform_int(rng, 0, d);
  return WishartParams(p, random_psd(d, rank, rng), random_pd(d, rng));
}

}  // namespace ncwishart::instances
