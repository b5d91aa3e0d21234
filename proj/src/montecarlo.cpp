#include "ncwishart/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace ncwishart {

namespace {

Vector standard_normal(int d, Rng& rng) {
  Vector z(d);
  for (int i = 0; i < d; ++i) z(i) = rng.normal();
  return z;
}

// Means m_i = sqrt(lambda_i) v_i for the leading rank(omega) eigenpairs.
std::vector<Vector> split_noncentrality(const PsdMatrix& omega) {
  const int n = rank_psd(omega);
  std::vector<Vector> means;
  if (n == 0) return means;
  const auto eig = sym_eig(omega);
  for (int i = 0; i < n; ++i) {
    means.push_back(std::sqrt(std::max(eig.values(i), 0.0)) *
                    eig.vectors.col(i));
  }
  return means;
}

// T lower triangular with T_ii^2 ~ Gamma(shape - i/2, 2), T_ij ~ N(0, 1).
GeneralMatrix bartlett_factor(int r, double shape, Rng& rng) {
  GeneralMatrix t = GeneralMatrix::Zero(r, r);
  for (int i = 0; i < r; ++i) {
    double diag_shape = shape - 0.5 * i;
    if (diag_shape <= 1e-12) diag_shape = 0.0;
    t(i, i) = std::sqrt(rng.gamma(diag_shape, 2.0));
    for (int j = 0; j < i; ++j) t(i, j) = rng.normal();
  }
  return t;
}

PsdMatrix outer_sum(const std::vector<Vector>& means,
                    const GeneralMatrix& factor, int extra_centred, Rng& rng) {
  const int d = static_cast<int>(factor.rows());
  GeneralMatrix acc = GeneralMatrix::Zero(d, d);
  for (const Vector& m : means) {
    const Vector y = m + factor * standard_normal(d, rng);
    acc.noalias() += y * y.transpose();
  }
  for (int i = 0; i < extra_centred; ++i) {
    const Vector y = factor * standard_normal(d, rng);
    acc.noalias() += y * y.transpose();
  }
  return PsdMatrix::by_construction(acc);
}

struct ClippedState {
  GeneralMatrix value;
  GeneralMatrix root;
};

ClippedState clip_to_cone(const GeneralMatrix& x) {
  Eigen::SelfAdjointEigenSolver<GeneralMatrix> solver(0.5 * (x + x.transpose()));
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("eigensolver failed while projecting an SDE state");
  }
  const Vector lambda = solver.eigenvalues().cwiseMax(0.0);
  const GeneralMatrix& v = solver.eigenvectors();
  ClippedState out;
  out.value = v * lambda.asDiagonal() * v.transpose();
  out.value = 0.5 * (out.value + out.value.transpose());
  out.root = v * lambda.cwiseSqrt().asDiagonal() * v.transpose();
  return out;
}

void require_sde_preconditions(const WishartProcessParams& params,
                               const PsdMatrix& x0, double horizon,
                               int steps) {
  if (!params.stochastic()) {
    std::ostringstream os;
    os << "no Wishart process exists for p = " << params.p()
       << " < (d-1)/2; refusing to simulate";
    throw PreconditionError(os.str());
  }
  if (x0.dim() != params.dim()) throw ValidationError("x0 dimension mismatch");
  if (!(horizon >= 0.0)) throw ValidationError("horizon must be >= 0");
  if (steps < 1) throw ValidationError("steps must be >= 1");
}

template <class OnState>
void euler_run(const WishartProcessParams& params, const PsdMatrix& x0,
               double horizon, int steps, Rng& rng, OnState&& on_state) {
  const int d = params.dim();
  const double h = horizon / steps;
  const double root_h = std::sqrt(h);
  const GeneralMatrix q = chol_psd(params.alpha()).transpose();  // Q^T Q = alpha
  const GeneralMatrix drift_const = 2.0 * params.p() * params.alpha().mat();
  const GeneralMatrix& beta = params.beta();

  ClippedState state = clip_to_cone(x0.mat());
  state.value = x0.mat();
  GeneralMatrix db(d, d);
  for (int k = 1; k <= steps; ++k) {
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i < d; ++i) db(i, j) = root_h * rng.normal();
    }
    const GeneralMatrix noise = state.root * db * q;
    GeneralMatrix next = state.value + noise + noise.transpose() +
                         h * (drift_const + beta * state.value +
                              state.value * beta.transpose());
    state = clip_to_cone(next);
    on_state(k, state.value);
  }
}

}  // namespace

GaussianFactor GaussianFactor::for_scale(Vector mean, const PsdMatrix& sigma) {
  if (mean.size() != sigma.dim()) throw ValidationError("mean dimension mismatch");
  return {std::move(mean), 0.5 * sigma};
}

std::string to_string(SampleMethod m) {
  return m == SampleMethod::Exact ? "exact" : "euler-approximate";
}

PsdMatrix sample_rank_one(const GaussianFactor& factor, Rng& rng) {
  const int d = factor.covariance.dim();
  if (factor.mean.size() != d) throw ValidationError("mean dimension mismatch");
  const GeneralMatrix l = chol_psd(factor.covariance);
  const Vector y = factor.mean + l * standard_normal(d, rng);
  return PsdMatrix::by_construction(y * y.transpose());
}

PsdMatrix sample_halfinteger(const WishartParams& params, Rng& rng) {
  int count = 0;
  if (!twice_is_integer(params.p(), &count)) {
    throw PreconditionError("sample_halfinteger needs 2p to be an integer");
  }
  const auto means = split_noncentrality(params.omega());
  if (static_cast<int>(means.size()) > count) {
    throw PreconditionError("sample_halfinteger needs rank(omega) <= 2p");
  }
  const GeneralMatrix l = chol_psd(0.5 * params.sigma());
  return outer_sum(means, l, count - static_cast<int>(means.size()), rng);
}

PsdMatrix sample_central_bartlett(double q, const PsdMatrix& sigma, Rng& rng) {
  const int d = sigma.dim();
  if (q < 0.5 * (d - 1) - 1e-12) {
    std::ostringstream os;
    os << "Bartlett sampler needs q >= (d-1)/2 = " << 0.5 * (d - 1)
       << ", got " << q;
    throw PreconditionError(os.str());
  }
  const GeneralMatrix l = chol_psd(0.5 * sigma);
  const GeneralMatrix lt = l * bartlett_factor(d, q, rng);
  return PsdMatrix::by_construction(lt * lt.transpose());
}

WishartSampler::WishartSampler(const WishartParams& params, int euler_steps)
    : params_(params),
      verdict_(existence_verdict(params)),
      euler_steps_(euler_steps) {
  if (verdict_.status != VerdictStatus::Exists) {
    throw RefusalError("cannot sample: existence verdict is " +
                           to_string(verdict_.status) + " (" + verdict_.rule +
                           ")",
                       verdict_);
  }
  if (euler_steps_ < 1) throw ValidationError("euler steps must be >= 1");
  const int d = params.dim();
  means_ = split_noncentrality(params.omega());
  const double q = params.p() - 0.5 * static_cast<double>(means_.size());
  factor_ = chol_psd(0.5 * params.sigma());

  const int rank_sigma = rank_psd(params.sigma());
  int twice_q = 0;
  if (std::abs(q) <= kHalfIntegerTol) {
    central_ = Central::None;
  } else if (q > 0 && q >= 0.5 * (rank_sigma - 1) - 1e-12) {
    central_ = Central::Bartlett;
    central_shape_ = q;
    const auto eig = sym_eig(params.sigma());
    range_factor_ = GeneralMatrix::Zero(d, rank_sigma);
    for (int i = 0; i < rank_sigma; ++i) {
      range_factor_.col(i) =
          std::sqrt(0.5 * std::max(eig.values(i), 0.0)) * eig.vectors.col(i);
    }
    if (rank_sigma == d) range_factor_ = factor_;
  } else if (q > 0 && twice_is_integer(q, &twice_q)) {
    central_ = Central::RankOnes;
    central_rank_ones_ = twice_q;
  } else {
    method_ = SampleMethod::EulerApproximate;
  }
}

PsdMatrix WishartSampler::draw(Rng& rng) const {
  if (method_ == SampleMethod::EulerApproximate) {
    // Transition over [0, 1] of the process with beta = 0, alpha = sigma / 2
    // started at omega is exactly Gamma(p, omega; sigma).
    const WishartProcessParams proc(params_.p(), 0.5 * params_.sigma(),
                                    GeneralMatrix::Zero(params_.dim(),
                                                        params_.dim()));
    return sde_euler_terminal(proc, params_.omega(), 1.0, euler_steps_, rng);
  }
  PsdMatrix out = outer_sum(
      means_, factor_,
      central_ == Central::RankOnes ? central_rank_ones_ : 0, rng);
  if (central_ == Central::Bartlett && range_factor_.cols() > 0) {
    const GeneralMatrix lt =
        range_factor_ *
        bartlett_factor(static_cast<int>(range_factor_.cols()), central_shape_,
                        rng);
    out = out + PsdMatrix::by_construction(lt * lt.transpose());
  }
  return out;
}

Sample sample_noncentral(const WishartParams& params, Rng& rng,
                         int euler_steps) {
  const WishartSampler sampler(params, euler_steps);
  return {sampler.draw(rng), sampler.method()};
}

std::vector<PsdMatrix> draw_batch(const WishartSampler& sampler, std::size_t n,
                                  std::uint64_t seed) {
  std::vector<PsdMatrix> out(n);
  const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
  auto run_chunk = [&](std::size_t c) {
    Rng rng(seed, c);
    const std::size_t end = std::min(n, (c + 1) * kChunkSize);
    for (std::size_t i = c * kChunkSize; i < end; ++i) out[i] = sampler.draw(rng);
  };
  const std::size_t workers = std::min<std::size_t>(
      chunks, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t c = w; c < chunks; c += workers) run_chunk(c);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

SamplePath sde_euler_path(const WishartProcessParams& params,
                          const PsdMatrix& x0, double horizon, int steps,
                          Rng& rng) {
  require_sde_preconditions(params, x0, horizon, steps);
  SamplePath path;
  path.x0 = x0;
  path.times.push_back(0.0);
  path.states.push_back(x0);
  if (horizon == 0.0) return path;
  path.step = horizon / steps;
  euler_run(params, x0, horizon, steps, rng,
            [&](int k, const GeneralMatrix& x) {
              path.times.push_back(k == steps ? horizon : k * path.step);
              path.states.push_back(PsdMatrix::by_construction(x));
            });
  return path;
}

PsdMatrix sde_euler_terminal(const WishartProcessParams& params,
                             const PsdMatrix& x0, double horizon, int steps,
                             Rng& rng) {
  require_sde_preconditions(params, x0, horizon, steps);
  if (horizon == 0.0) return x0;
  GeneralMatrix last = x0.mat();
  euler_run(params, x0, horizon, steps, rng,
            [&](int, const GeneralMatrix& x) { last = x; });
  return PsdMatrix::by_construction(last);
}

EmpiricalEstimate empirical_laplace(std::span<const PsdMatrix> samples,
                                    const PsdMatrix& u) {
  if (samples.empty()) throw ValidationError("empirical_laplace needs samples");
  const double n = static_cast<double>(samples.size());
  double sum = 0.0;
  double sum_sq = 0.0;
  // Shift by the first value to keep the variance accumulation stable.
  const double shift = std::exp(-inner(u, samples.front()));
  for (const PsdMatrix& xi : samples) {
    const double v = std::exp(-inner(u, xi)) - shift;
    sum += v;
    sum_sq += v * v;
  }
  EmpiricalEstimate est;
  est.mean = shift + sum / n;
  if (samples.size() > 1) {
    const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
    est.std_error = std::sqrt(var / n);
  }
  return est;
}

std::vector<PsdMatrix> psd_grid(int d, int directions,
                                std::span<const double> scales,
                                std::uint64_t seed) {
  if (d < 1 || directions < 1) throw ValidationError("empty transform grid");
  // A dedicated substream keeps the grid independent of sample streams.
  Rng rng(seed, 0xC0FFEEULL);
  std::vector<GeneralMatrix> dirs;
  for (int k = 0; k < directions; ++k) {
    GeneralMatrix b(d, d);
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i < d; ++i) b(i, j) = rng.normal();
    }
    GeneralMatrix m = b * b.transpose();
    dirs.push_back(m / m.trace());
  }
  std::vector<PsdMatrix> grid;
  for (double s : scales) {
    if (!(s >= 0.0)) throw ValidationError("grid scales must be >= 0");
    for (const auto& m : dirs) grid.push_back(PsdMatrix::by_construction(s * m));
  }
  return grid;
}

std::vector<GridPointResult> compare_transform(
    const WishartParams& params, std::span<const PsdMatrix> samples,
    std::span<const PsdMatrix> grid) {
  std::vector<GridPointResult> out;
  int id = 0;
  for (const PsdMatrix& u : grid) {
    GridPointResult r;
    r.u_id = id++;
    r.analytic = laplace(params, u);
    const auto est = empirical_laplace(samples, u);
    r.empirical = est.mean;
    r.std_error = est.std_error;
    const double diff = r.empirical - r.analytic;
    if (r.std_error > 0.0) {
      r.z = diff / r.std_error;
    } else {
      r.z = diff == 0.0 ? 0.0 : std::copysign(
                                    std::numeric_limits<double>::infinity(),
                                    diff);
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace ncwishart
