#pragma once

// Seeded random parameter instances for property checks.

#include "ncwishart/distribution.hpp"
#include "ncwishart/process.hpp"
#include "ncwishart/rng.hpp"
#include "ncwishart/symcone.hpp"

namespace ncwishart::instances {

GeneralMatrix gaussian_matrix(int rows, int cols, Rng& rng);

// Sum of `rank` outer products of standard normal vectors, times scale / d.
PsdMatrix random_psd(int d, int rank, Rng& rng, double scale = 1.0);

// Well-conditioned positive definite matrix.
PsdMatrix random_pd(int d, Rng& rng);

GeneralMatrix random_orthogonal(int d, Rng& rng);

// Q1 diag(s) Q2 with singular values s in [0.5, 2].
GeneralMatrix random_invertible(int d, Rng& rng);

// Gaussian matrix rescaled to Frobenius norm uniform in (0, max_norm].
GeneralMatrix random_beta(int d, double max_norm, Rng& rng);

// p uniform in [0, 3], omega of random rank, sigma positive definite.
WishartParams random_params(int d, Rng& rng);

double uniform(Rng& rng, double lo, double hi);
int uniform_int(Rng& rng, int lo, int hi);  // inclusive

}  // namespace ncwishart::instances
