// Copyright 2026 The photocount authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PHOTOCOUNT_FOCKOPS_HPP
#define PHOTOCOUNT_FOCKOPS_HPP

#include <Eigen/Dense>
#include <complex>

#include "photocount/errors.hpp"
#include "photocount/states.hpp"

// Truncated-Fock-space operator algebra for the two photodetection models:
//
//   SD  — jump J rho = gamma a rho a^dag, no-count generator Y = -iH - (gamma/2) n
//   EP  — jump J rho = E_- rho E_+,       no-count generator Y = -iH - (gamma/2) Lambda
//
// with E_-|n> = |n-1>, E_+|n> = |n+1>, Lambda = 1 - |0><0|. Truncation
// convention: E_+|N> = 0 and a^dag|N> = 0, so mass leaves the truncated space
// at the edge instead of wrapping around; callers account for it through the
// tail_mass carried by PhotonStatistics.
//
// Note the rate asymmetry between the models: the SD jump carries the
// detector efficiency gamma while the EP jump is unscaled; in the EP model
// gamma enters only through the no-count evolution and through the gamma^k
// prefactors of timed-count densities. The rate operator of the EP model is
// R = gamma E_+ E_-, which is what trace_rate_identity_residual checks.

namespace photocount {

enum class ModelKind { SD, EP };

inline const char* model_name(ModelKind m) { return m == ModelKind::SD ? "sd" : "ep"; }

/// Matrices of one truncated mode plus the physical constants they depend on.
/// Immutable after construction; safe to share across threads.
struct OperatorSet {
  int dim = 0;
  double gamma = 1.0;  ///< detector efficiency, units 1/time
  double omega = 0.0;  ///< mode angular frequency for H = omega * n
  Eigen::MatrixXd a, a_dag, e_minus, e_plus, lambda, lambda0;
};

inline OperatorSet build_operators(int dim, double gamma, double omega = 0.0) {
  if (dim < 2) throw InvalidParameter("build_operators: dim must be >= 2");
  if (!(gamma > 0.0)) throw InvalidParameter("build_operators: gamma must be positive");
  OperatorSet ops;
  ops.dim = dim;
  ops.gamma = gamma;
  ops.omega = omega;
  ops.a = Eigen::MatrixXd::Zero(dim, dim);
  ops.e_minus = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) {
    ops.a(n - 1, n) = std::sqrt(static_cast<double>(n));
    ops.e_minus(n - 1, n) = 1.0;
  }
  ops.a_dag = ops.a.transpose();
  ops.e_plus = ops.e_minus.transpose();
  ops.lambda0 = Eigen::MatrixXd::Zero(dim, dim);
  ops.lambda0(0, 0) = 1.0;
  ops.lambda = Eigen::MatrixXd::Identity(dim, dim) - ops.lambda0;
  return ops;
}

/// One-count map. SD: gamma a rho a^dag; EP: E_- rho E_+. The result is
/// unnormalized; its trace is gamma <n> (SD) or 1 - p0 (EP). Evaluated as the
/// exact index shift the ladder matrices induce.
inline DensityMatrix jump(const DensityMatrix& state, const OperatorSet& ops, ModelKind model) {
  const int d = state.dim();
  DensityMatrix out;
  out.rho = Eigen::MatrixXcd::Zero(d, d);
  if (model == ModelKind::EP) {
    out.rho.topLeftCorner(d - 1, d - 1) = state.rho.bottomRightCorner(d - 1, d - 1);
  } else {
    for (int i = 0; i + 1 < d; ++i)
      for (int j = 0; j + 1 < d; ++j)
        out.rho(i, j) = ops.gamma * std::sqrt((i + 1.0) * (j + 1.0)) * state.rho(i + 1, j + 1);
  }
  return out;
}

/// Jump map normalized to a state: J rho / Tr[J rho].
inline DensityMatrix post_count_state(const DensityMatrix& state, const OperatorSet& ops,
                                      ModelKind model) {
  DensityMatrix j = jump(state, ops, model);
  const double tr = j.trace_real();
  if (tr <= 1e-15)
    throw VacuumOnly("post_count_state: no count can occur (vacuum support only)");
  j.rho /= tr;
  return j;
}

/// Mean photon number just after one count, from the photon statistics alone.
/// SD: nbar + q (Mandel's q); EP: nbar/(1 - p0) - 1.
inline double mean_after_one_count(const PhotonStatistics& p, ModelKind model) {
  const MeanAndQ mq = mean_and_q(p);
  if (model == ModelKind::SD) {
    if (mq.nbar <= 1e-15) throw VacuumOnly("mean_after_one_count: <n> = 0");
    return mq.nbar + mq.q;
  }
  const double denom = 1.0 - p.at(0);
  if (denom <= 1e-15) throw VacuumOnly("mean_after_one_count: state is vacuum");
  return mq.nbar / denom - 1.0;
}

/// Diagonal of the no-count semigroup element B_tau = exp(Y tau).
inline Eigen::VectorXcd no_count_factor(int dim, double tau, const OperatorSet& ops,
                                        ModelKind model) {
  Eigen::VectorXcd b(dim);
  for (int n = 0; n < dim; ++n) {
    const double damp = (model == ModelKind::SD) ? 0.5 * ops.gamma * n * tau
                                                 : (n == 0 ? 0.0 : 0.5 * ops.gamma * tau);
    b(n) = std::exp(std::complex<double>(-damp, -ops.omega * n * tau));
  }
  return b;
}

/// No-count evolution S_tau rho = B_tau rho B_tau^dag (unnormalized; the
/// trace is the no-count probability). SD conjugates by the diagonal
/// exp[(-i omega n - gamma n / 2) tau]; EP by
/// exp(-i omega n tau) (|0><0| + e^{-gamma tau/2} Lambda).
inline DensityMatrix no_count_evolve(const DensityMatrix& state, double tau,
                                     const OperatorSet& ops, ModelKind model) {
  if (!(tau >= 0.0)) throw InvalidParameter("no_count_evolve: tau must be nonnegative");
  const int d = state.dim();
  const Eigen::VectorXcd b = no_count_factor(d, tau, ops, model);
  DensityMatrix out;
  out.rho = state.rho.cwiseProduct(b * b.adjoint());
  return out;
}

/// No-count probability from the photon statistics.
/// EP: e^{-gamma tau} + p0 (1 - e^{-gamma tau}); SD: sum_n p_n e^{-n gamma tau}.
inline double no_count_probability(const PhotonStatistics& p, double tau, double gamma,
                                   ModelKind model) {
  if (!(tau >= 0.0)) throw InvalidParameter("no_count_probability: tau must be nonnegative");
  if (model == ModelKind::EP) {
    const double e = std::exp(-gamma * tau);
    return e + p.at(0) * (-std::expm1(-gamma * tau));
  }
  const double q = std::exp(-gamma * tau);
  const int d = p.trunc_dim();
  double s = 0.0;  // Horner in q from the top of the support
  for (int n = d - 1; n >= 0; --n) s = p.p[static_cast<std::size_t>(n)] + q * s;
  return s;
}

/// Pure state with Fock-basis amplitudes; sub-normalized mid-pipeline.
struct PureState {
  Eigen::VectorXcd amp;
  int dim() const { return static_cast<int>(amp.size()); }
  double norm2() const { return amp.squaredNorm(); }
};

/// EP-model no-count evolution of a pure state:
/// <0|psi>|0> + e^{-gamma tau/2} e^{-i omega n tau} Lambda |psi>.
/// The squared norm of the result is the no-count probability.
inline PureState no_count_evolve_pure(const PureState& psi, double tau, const OperatorSet& ops) {
  if (!(tau >= 0.0)) throw InvalidParameter("no_count_evolve_pure: tau must be nonnegative");
  PureState out;
  out.amp = psi.amp;
  const double decay = std::exp(-0.5 * ops.gamma * tau);
  for (int n = 1; n < psi.dim(); ++n)
    out.amp(n) *= decay * std::exp(std::complex<double>(0.0, -ops.omega * n * tau));
  return out;
}

/// |Tr[rate-weighted jump + Y rho + rho Y^dag]|. Probability conservation of
/// the point process demands this vanish; the EP jump is weighted by gamma
/// because the EP rate operator is R = gamma E_+ E_- while J itself carries
/// no rate factor. Zero up to rounding for states with negligible support at
/// the truncation edge.
inline double trace_rate_identity_residual(const DensityMatrix& state, const OperatorSet& ops,
                                           ModelKind model) {
  const double rate_weight = (model == ModelKind::EP) ? ops.gamma : 1.0;
  const double rate = rate_weight * jump(state, ops, model).trace_real();
  std::complex<double> y_trace = 0.0;
  for (int n = 0; n < state.dim(); ++n) {
    const double damp = (model == ModelKind::SD) ? 0.5 * ops.gamma * n
                                                 : (n == 0 ? 0.0 : 0.5 * ops.gamma);
    const std::complex<double> y_nn(-damp, -ops.omega * n);
    y_trace += y_nn * state.rho(n, n);
  }
  return std::abs(rate + 2.0 * y_trace.real());
}

/// Free-evolution phase conjugation U_t rho = e^{-iHt} rho e^{iHt}.
inline DensityMatrix free_evolve(const DensityMatrix& state, double t, const OperatorSet& ops) {
  const int d = state.dim();
  Eigen::VectorXcd u(d);
  for (int n = 0; n < d; ++n) u(n) = std::exp(std::complex<double>(0.0, -ops.omega * n * t));
  DensityMatrix out;
  out.rho = state.rho.cwiseProduct(u * u.adjoint());
  return out;
}

}  // namespace photocount

#endif  // PHOTOCOUNT_FOCKOPS_HPP
