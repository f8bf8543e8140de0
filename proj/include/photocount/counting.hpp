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

#ifndef PHOTOCOUNT_COUNTING_HPP
#define PHOTOCOUNT_COUNTING_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "photocount/errors.hpp"
#include "photocount/fockops.hpp"
#include "photocount/quadrature.hpp"
#include "photocount/specfun.hpp"
#include "photocount/states.hpp"

// Closed-form counting statistics of both models.
//
//   EP:  P(k,t) = p_k Phi_k(gt) + e^{-gt} (gt)^k / k! * Z_k,   Z_k = sum_{n>=k} p_n
//   SD:  P(k,t) = sum_{n>=k} C(n,k) (1-e^{-gt})^k e^{-gt(n-k)} p_n
//
// Z_k is evaluated as the exact complement 1 - A_{k-1}, so truncated tail
// mass behaves like photons that are never exhausted; the EP distribution
// then sums to 1 exactly up to the K cutoff. The SD sum runs over the stored
// support only, leaving a deficit bounded by the tail mass.
//
// Timed-count densities ("EPDs") are returned both in dimensionless form
// (per gamma^k) and as physical densities of units time^{-k}:
//
//   EP:  gamma^k ( e^{-g t_k} p_k + e^{-g t} Z_{k+1} )
//   SD:  gamma^k k! e^{-g (sum t_i - k t)} sum_{n>=k} C(n,k) e^{-g n t} p_n
//
// with window t -> infinity variants gamma^k e^{-g t_k} p_k and
// gamma^k k! e^{-g sum t_i} p_k.

namespace photocount::counting {

/// P(k, t) vector for k = 0..K with the normalization deficit it leaves.
struct CountDistribution {
  std::vector<double> probs;
  double t = 0.0;
  double gamma = 1.0;
  ModelKind model = ModelKind::EP;
  double deficit = 0.0;  ///< 1 - sum_k probs[k]

  int k_max() const { return static_cast<int>(probs.size()) - 1; }
};

/// An ordered sequence of count times inside an observation window.
struct CountTimes {
  std::vector<double> times;
  double window = std::numeric_limits<double>::infinity();

  int k() const { return static_cast<int>(times.size()); }
  void validate() const {
    double prev = 0.0;
    for (double t : times) {
      if (!(t > prev)) throw InvalidParameter("count times must be strictly increasing and positive");
      prev = t;
    }
    if (!times.empty() && !(window >= times.back()))
      throw InvalidParameter("count times must lie inside the observation window");
  }
};

/// Probability of exactly k counts in [0, t).
inline double prob_counts(const PhotonStatistics& p, int k, double t, double gamma,
                          ModelKind model) {
  if (k < 0) throw InvalidParameter("prob_counts: k must be nonnegative");
  if (!(t >= 0.0)) throw InvalidParameter("prob_counts: t must be nonnegative");
  const double gt = gamma * t;
  if (model == ModelKind::EP) {
    const double a_km1 = (k == 0) ? 0.0 : partial_sums(p, k - 1).a_k;
    const double z_k = 1.0 - a_km1;
    return p.at(k) * specfun::phi_k(k, gt) + specfun::poisson_weight(k, gt) * z_k;
  }
  if (t == 0.0) return k == 0 ? p.support_sum() : 0.0;
  const double q = std::exp(-gt);
  const double one_minus_q = -std::expm1(-gt);
  specfun::KahanAccumulator s;
  double term = specfun::pow_int(one_minus_q, k);  // C(n,k)(1-q)^k q^{n-k} at n = k
  for (int n = k; n < p.trunc_dim(); ++n) {
    s.add(term * p.p[static_cast<std::size_t>(n)]);
    term *= q * (n + 1.0) / (n + 1.0 - k);
  }
  return s.value();
}

/// The per-family closed forms for Fock(m), Coherent(nbar), Thermal(nbar).
/// No state-vector truncation enters; Phi_{-1} is identically 1.
inline double prob_counts_closed_family(const StateSpec& spec, int k, double t, double gamma,
                                        ModelKind model) {
  if (k < 0) throw InvalidParameter("prob_counts_closed_family: k must be nonnegative");
  if (!(t >= 0.0)) throw InvalidParameter("prob_counts_closed_family: t must be nonnegative");
  spec.validate();
  const double gt = gamma * t;
  const auto phi = [](int j, double x) { return j < 0 ? 1.0 : specfun::phi_k(j, x); };
  switch (spec.family) {
    case StateFamily::Fock: {
      const int m = spec.m;
      if (k > m) return 0.0;
      if (model == ModelKind::EP)
        return (k < m) ? specfun::poisson_weight(k, gt) : phi(m - 1, gt);
      if (t == 0.0) return k == 0 ? 1.0 : 0.0;
      return std::exp(specfun::log_binomial(m, k) + k * std::log(-std::expm1(-gt)) -
                      gt * (m - k));
    }
    case StateFamily::Coherent: {
      const double nb = spec.nbar0;
      if (model == ModelKind::SD) {
        const double x = nb * (-std::expm1(-gt));
        return specfun::poisson_weight(k, x);
      }
      return specfun::poisson_weight(k, gt) * phi(k - 1, nb) +
             specfun::poisson_weight(k, nb) * phi(k, gt);
    }
    case StateFamily::Thermal: {
      const double nb = spec.nbar0;
      if (model == ModelKind::SD) {
        const double y = nb * (-std::expm1(-gt));
        return specfun::pow_int(y, k) / specfun::pow_int(1.0 + y, k + 1);
      }
      return specfun::poisson_weight(k, nb * gt / (nb + 1.0)) *
                 std::exp(-gt + nb * gt / (nb + 1.0)) +
             specfun::pow_int(nb, k) * phi(k, gt) / specfun::pow_int(1.0 + nb, k + 1);
    }
    default:
      throw UnsupportedFamily("prob_counts_closed_family: only fock/coherent/thermal");
  }
}

/// P(k, t) for k = 0..k_max. With k_max < 0 the cutoff is chosen as the
/// smallest K whose cumulative probability reaches 1 - 1e-10, capped at
/// trunc_dim + ceil(10 gamma t).
inline CountDistribution count_distribution(const PhotonStatistics& p, double t, double gamma,
                                            ModelKind model, int k_max = -1) {
  CountDistribution out;
  out.t = t;
  out.gamma = gamma;
  out.model = model;
  specfun::KahanAccumulator cum;
  if (k_max >= 0) {
    out.probs.reserve(static_cast<std::size_t>(k_max) + 1);
    for (int k = 0; k <= k_max; ++k) {
      const double pk = prob_counts(p, k, t, gamma, model);
      out.probs.push_back(pk);
      cum.add(pk);
    }
  } else {
    const int cap = p.trunc_dim() + static_cast<int>(std::ceil(10.0 * gamma * t)) + 1;
    for (int k = 0; k <= cap; ++k) {
      const double pk = prob_counts(p, k, t, gamma, model);
      out.probs.push_back(pk);
      cum.add(pk);
      if (cum.value() >= 1.0 - 1e-10) break;
    }
  }
  out.deficit = 1.0 - cum.value();
  return out;
}

/// l-th moment sum_k k^l P(k,t) by direct summation over the distribution.
inline double moments(const PhotonStatistics& p, int l, double t, double gamma, ModelKind model) {
  if (l < 1) throw InvalidParameter("moments: l must be >= 1");
  const CountDistribution dist = count_distribution(p, t, gamma, model);
  if (dist.deficit > 1e-9 + p.tail_mass)
    throw NonConvergent("moments: count distribution cutoff left too much mass");
  specfun::KahanAccumulator s;
  for (int k = 0; k <= dist.k_max(); ++k)
    s.add(specfun::pow_int(static_cast<double>(k), l) * dist.probs[static_cast<std::size_t>(k)]);
  return s.value();
}

/// Dimensionless (per gamma^k) timed-count density for a finite window.
inline double epd_dimensionless(const PhotonStatistics& p, const CountTimes& times, double gamma,
                                ModelKind model) {
  times.validate();
  if (!std::isfinite(times.window))
    throw InvalidParameter("epd_dimensionless: finite window required; use the _infinite variant");
  const int k = times.k();
  const double t = times.window;
  if (model == ModelKind::EP) {
    const double t_k = times.times.empty() ? 0.0 : times.times.back();
    const double z_kp1 = partial_sums(p, k).z_k_plus_1;
    return std::exp(-gamma * t_k) * p.at(k) + std::exp(-gamma * t) * z_kp1;
  }
  double sum_ti = 0.0;
  for (double ti : times.times) sum_ti += ti;
  const double q = std::exp(-gamma * t);
  specfun::KahanAccumulator s;
  double u = specfun::pow_int(q, k);  // C(n,k) e^{-gamma n t} at n = k
  for (int n = k; n < p.trunc_dim(); ++n) {
    s.add(u * p.p[static_cast<std::size_t>(n)]);
    u *= q * (n + 1.0) / (n + 1.0 - k);
  }
  return specfun::factorial(k) * std::exp(-gamma * (sum_ti - k * t)) * s.value();
}

/// Dimensionless density in the t -> infinity limit.
/// EP: e^{-gamma t_k} p_k; SD: k! e^{-gamma sum t_i} p_k.
inline double epd_infinite_dimensionless(const PhotonStatistics& p, const CountTimes& times,
                                         double gamma, ModelKind model) {
  times.validate();
  const int k = times.k();
  if (model == ModelKind::EP) {
    const double t_k = times.times.empty() ? 0.0 : times.times.back();
    return std::exp(-gamma * t_k) * p.at(k);
  }
  double sum_ti = 0.0;
  for (double ti : times.times) sum_ti += ti;
  return specfun::factorial(k) * std::exp(-gamma * sum_ti) * p.at(k);
}

/// Physical density, units time^{-k}.
inline double epd(const PhotonStatistics& p, const CountTimes& times, double gamma,
                  ModelKind model) {
  return specfun::pow_int(gamma, times.k()) * epd_dimensionless(p, times, gamma, model);
}

inline double epd_infinite(const PhotonStatistics& p, const CountTimes& times, double gamma,
                           ModelKind model) {
  return specfun::pow_int(gamma, times.k()) * epd_infinite_dimensionless(p, times, gamma, model);
}

/// Residual of the factorized structure of the infinite-window densities.
/// EP (Markov): | EPD/p_k - prod_i gamma e^{-gamma (t_i - t_{i-1})} |;
/// SD (increasing weight): | EPD/p_k - prod_i i gamma e^{-gamma t_i} |.
inline double epd_markov_factorization_residual(const PhotonStatistics& p,
                                                const CountTimes& times, double gamma,
                                                ModelKind model) {
  times.validate();
  const int k = times.k();
  if (k < 1) throw InvalidParameter("epd_markov_factorization_residual: need k >= 1");
  const double pk = p.at(k);
  if (pk <= 0.0) throw ZeroProbability("epd_markov_factorization_residual: p_k = 0");
  const double lhs = epd_infinite(p, times, gamma, model) / pk;
  double prod = 1.0;
  if (model == ModelKind::EP) {
    double prev = 0.0;
    for (double ti : times.times) {
      prod *= gamma * std::exp(-gamma * (ti - prev));
      prev = ti;
    }
  } else {
    for (int i = 1; i <= k; ++i)
      prod *= i * gamma * std::exp(-gamma * times.times[static_cast<std::size_t>(i - 1)]);
  }
  return std::fabs(lhs - prod);
}

/// The first-generation semiclassical count formula
/// sum_{n>=k} C(n,k) (1 - gamma t)^{n-k} (gamma t)^k p_n. Meaningless for
/// gamma t > 1, where it can go negative; `valid` flags that regime.
struct SemiclassicalResult {
  double value;
  bool valid;
};

inline SemiclassicalResult prob_counts_semiclassical(const PhotonStatistics& p, int k, double t,
                                                     double gamma) {
  if (k < 0) throw InvalidParameter("prob_counts_semiclassical: k must be nonnegative");
  const double x = gamma * t;
  const bool valid = x <= 1.0;
  if (x == 0.0) return {k == 0 ? p.support_sum() : 0.0, valid};
  specfun::KahanAccumulator s;
  double term = specfun::pow_int(x, k);  // C(n,k)(1-x)^{n-k} x^k at n = k
  for (int n = k; n < p.trunc_dim(); ++n) {
    s.add(term * p.p[static_cast<std::size_t>(n)]);
    term *= (1.0 - x) * (n + 1.0) / (n + 1.0 - k);
  }
  return {s.value(), valid};
}

namespace detail {

inline double weight_k_jump(double gamma, int k, double tp) {
  // gamma^k e^{-gamma tp} tp^{k-1} / (k-1)!
  if (k <= 20)
    return specfun::pow_int(gamma, k) * std::exp(-gamma * tp) * specfun::pow_int(tp, k - 1) /
           specfun::factorial(k - 1);
  if (tp == 0.0) return 0.0;
  return std::exp(k * std::log(gamma) - gamma * tp + (k - 1) * std::log(tp) -
                  specfun::log_factorial(k - 1));
}

// SD brute-force composition: W_1(s) = J S_s rho,
// W_j(s) = J \int_0^s S_{s-u} W_{j-1}(u) du.
inline Eigen::MatrixXcd sd_after_jumps(const DensityMatrix& rho0, int j, double s,
                                       const OperatorSet& ops, double tol) {
  if (j == 1) return jump(no_count_evolve(rho0, s, ops, ModelKind::SD), ops, ModelKind::SD).rho;
  auto inner = [&](double u) -> Eigen::MatrixXcd {
    DensityMatrix w{sd_after_jumps(rho0, j - 1, u, ops, tol)};
    return no_count_evolve(w, s - u, ops, ModelKind::SD).rho;
  };
  DensityMatrix acc{quad::integrate(inner, 0.0, s, tol)};
  return jump(acc, ops, ModelKind::SD).rho;
}

}  // namespace detail

/// Normalized state conditioned on exactly k counts in [0, t). The EP model
/// uses the closed one-dimensional integral over the last count time (the
/// k-fold jump commutes past the no-count decay); the SD model is evaluated
/// by brute-force nested quadrature of the time-ordered composition, k <= 3.
inline DensityMatrix post_selected_state(const DensityMatrix& rho0, int k, double t,
                                         const OperatorSet& ops, ModelKind model) {
  if (k < 0) throw InvalidParameter("post_selected_state: k must be nonnegative");
  if (!(t >= 0.0)) throw InvalidParameter("post_selected_state: t must be nonnegative");
  if (k == 0) {
    DensityMatrix s = no_count_evolve(rho0, t, ops, model);
    const double tr = s.trace_real();
    if (tr <= 1e-15) throw ZeroProbability("post_selected_state: vanishing no-count probability");
    s.rho /= tr;
    return s;
  }
  DensityMatrix unnorm;
  if (model == ModelKind::EP) {
    DensityMatrix jk = rho0;
    for (int i = 0; i < k; ++i) jk = jump(jk, ops, ModelKind::EP);
    const int d = rho0.dim();
    auto integrand = [&](double tp) -> Eigen::MatrixXcd {
      const double w = detail::weight_k_jump(ops.gamma, k, tp);
      const double decay = std::exp(-0.5 * ops.gamma * (t - tp));
      Eigen::VectorXd c = Eigen::VectorXd::Constant(d, decay);
      c(0) = 1.0;
      const Eigen::MatrixXd mask = w * (c * c.transpose());
      return jk.rho.cwiseProduct(mask.cast<std::complex<double>>());
    };
    unnorm.rho = quad::integrate(integrand, 0.0, t, 1e-10);
    unnorm = free_evolve(unnorm, t, ops);
  } else {
    if (k > 3) throw UnsupportedOrder("post_selected_state: SD brute force supports k <= 3");
    auto outer = [&](double s) -> Eigen::MatrixXcd {
      DensityMatrix w{detail::sd_after_jumps(rho0, k, s, ops, 1e-10)};
      return no_count_evolve(w, t - s, ops, ModelKind::SD).rho;
    };
    unnorm.rho = quad::integrate(outer, 0.0, t, 1e-9);
  }
  const double tr = unnorm.trace_real();
  if (tr <= 1e-15) throw ZeroProbability("post_selected_state: P(k,t) is numerically zero");
  unnorm.rho /= tr;
  return unnorm;
}

/// Trace of the unnormalized k-count superoperator evaluated by the same
/// quadrature route as post_selected_state; agrees with prob_counts up to
/// quadrature and truncation error.
inline double post_selection_probability(const DensityMatrix& rho0, int k, double t,
                                         const OperatorSet& ops, ModelKind model) {
  if (k < 0) throw InvalidParameter("post_selection_probability: k must be nonnegative");
  if (k == 0) return no_count_evolve(rho0, t, ops, model).trace_real();
  if (model == ModelKind::EP) {
    DensityMatrix jk = rho0;
    for (int i = 0; i < k; ++i) jk = jump(jk, ops, ModelKind::EP);
    const auto diag = jk.diagonal_probs();
    double head = diag.empty() ? 0.0 : diag[0];
    double rest = 0.0;
    for (std::size_t n = 1; n < diag.size(); ++n) rest += diag[n];
    auto f = [&](double tp) {
      const double w = detail::weight_k_jump(ops.gamma, k, tp);
      return w * (head + std::exp(-ops.gamma * (t - tp)) * rest);
    };
    return quad::integrate(f, 0.0, t, 1e-12);
  }
  if (k > 3) throw UnsupportedOrder("post_selection_probability: SD brute force supports k <= 3");
  auto outer = [&](double s) {
    DensityMatrix w{detail::sd_after_jumps(rho0, k, s, ops, 1e-10)};
    return no_count_evolve(w, t - s, ops, ModelKind::SD).trace_real();
  };
  return quad::integrate(outer, 0.0, t, 1e-9);
}

}  // namespace photocount::counting

#endif  // PHOTOCOUNT_COUNTING_HPP
