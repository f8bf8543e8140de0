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

#ifndef PHOTOCOUNT_MONTECARLO_HPP
#define PHOTOCOUNT_MONTECARLO_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "photocount/counting.hpp"
#include "photocount/errors.hpp"
#include "photocount/fockops.hpp"
#include "photocount/rng.hpp"
#include "photocount/specfun.hpp"
#include "photocount/states.hpp"

// Quantum-jump sampling of count records. Between counts the conditioned
// state evolves under the no-count map; waiting times are drawn from the
// exact survival function of the current conditioned state:
//
//   EP: P0(s) = p0 + (1-p0) e^{-gamma s}   (atom at infinity + exponential,
//       inverted in closed form)
//   SD: P0(s) = sum_n p_n e^{-n gamma s}   (inverted by bisection to 1e-12)
//
// Both models preserve Fock-basis diagonality of diagonal states and the
// count law depends on the diagonal alone, so diagonal initial families run
// on a vector representation; the pure families (coherent, coherent phase)
// carry their full density matrix. Records are reproducible functions of
// (seed, inputs); batch substreams are derived with SplitMix64 and sampled
// with xoshiro256**.

namespace photocount::mc {

/// One sampled measurement record: ordered jump times inside a window.
struct CountRecord {
  std::vector<double> jump_times;
  double window = 0.0;
  ModelKind model = ModelKind::EP;
  std::uint64_t seed = 0;
};

/// Histogram of final counts over a batch.
struct McSummary {
  std::map<int, std::uint64_t> histogram;
  std::uint64_t n_traj = 0;
  double ci_level = 0.95;
};

namespace detail {

class ConditionedState {
 public:
  ConditionedState(const StateSpec& spec, double gamma, double tail_tol)
      : gamma_(gamma), diagonal_(spec.is_diagonal()) {
    if (diagonal_) {
      const PhotonStatistics dist = make_distribution(spec, tail_tol);
      truncated_ = dist.tail_mass > 0.0;
      p_ = dist.p;
      normalize_diag();
    } else {
      dm_ = make_density_matrix(spec, tail_tol);
      const double tr = dm_.trace_real();
      if (tr <= 0.0) throw InvalidParameter("conditioned state: zero trace");
      truncated_ = tr < 1.0;
      dm_.rho /= tr;
      ops_ = build_operators(dm_.dim(), gamma, 0.0);
    }
  }

  double p0() const { return diagonal_ ? p_.front() : dm_.rho(0, 0).real(); }

  double edge_mass() const { return diagonal_ ? p_.back() : dm_.rho(dim() - 1, dim() - 1).real(); }

  /// Exact finite-support states own their top level; only states that lost a
  /// tail at construction can be starved by conditioning.
  bool truncation_suspect() const { return truncated_ && edge_mass() > 1e-6; }

  int dim() const { return diagonal_ ? static_cast<int>(p_.size()) : dm_.dim(); }

  double survival(double s, ModelKind model) const {
    if (model == ModelKind::EP) {
      const double e = std::exp(-gamma_ * s);
      return p0() + (1.0 - p0()) * e;
    }
    const double q = std::exp(-gamma_ * s);
    double acc = 0.0;  // Horner in q over the diagonal
    for (int n = dim() - 1; n >= 0; --n) acc = diag(n) + q * acc;
    return acc;
  }

  void evolve_no_count(double s, ModelKind model) {
    if (diagonal_) {
      if (model == ModelKind::EP) {
        const double w = std::exp(-gamma_ * s);
        for (std::size_t n = 1; n < p_.size(); ++n) p_[n] *= w;
      } else {
        const double q = std::exp(-gamma_ * s);
        double w = 1.0;
        for (std::size_t n = 0; n < p_.size(); ++n) {
          p_[n] *= w;
          w *= q;
        }
      }
      normalize_diag();
    } else {
      dm_ = no_count_evolve(dm_, s, ops_, model);
      const double tr = dm_.trace_real();
      if (tr <= 0.0) throw ZeroProbability("conditioned state: no-count trace vanished");
      dm_.rho /= tr;
    }
  }

  void apply_jump(ModelKind model) {
    if (diagonal_) {
      if (model == ModelKind::EP) {
        p_.erase(p_.begin());
        p_.push_back(0.0);
      } else {
        for (std::size_t n = 0; n + 1 < p_.size(); ++n) p_[n] = (n + 1.0) * p_[n + 1];
        p_.back() = 0.0;
      }
      normalize_diag();
    } else {
      dm_ = post_count_state(dm_, ops_, model);
    }
  }

  std::vector<double> diagonal() const { return diagonal_ ? p_ : dm_.diagonal_probs(); }

 private:
  double diag(int n) const { return diagonal_ ? p_[static_cast<std::size_t>(n)] : dm_.rho(n, n).real(); }

  void normalize_diag() {
    specfun::KahanAccumulator s;
    for (double v : p_) s.add(v);
    if (s.value() <= 0.0) throw ZeroProbability("conditioned state: zero norm");
    for (double& v : p_) v /= s.value();
  }

  double gamma_;
  bool diagonal_;
  bool truncated_ = false;
  std::vector<double> p_;
  DensityMatrix dm_;
  OperatorSet ops_;
};

// Inverse survival sampling. Returns +inf when no further count ever occurs.
inline double draw_waiting_time(const ConditionedState& state, double u, double gamma,
                                ModelKind model) {
  const double floor = state.p0();
  if (u <= floor) return std::numeric_limits<double>::infinity();
  if (model == ModelKind::EP) return -std::log((u - floor) / (1.0 - floor)) / gamma;
  double lo = 0.0;
  double hi = 1.0 / gamma;
  while (state.survival(hi, ModelKind::SD) > u) {
    hi *= 2.0;
    if (hi > 1e300) return std::numeric_limits<double>::infinity();
  }
  while (hi - lo > 1e-12 * std::max(1.0, lo)) {
    const double mid = 0.5 * (lo + hi);
    if (state.survival(mid, ModelKind::SD) > u)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Sample one record and the final conditioned diagonal at the window end.
inline std::pair<CountRecord, std::vector<double>> sample_trajectory(
    const StateSpec& spec, double t, double gamma, ModelKind model, std::uint64_t seed,
    double tail_tol = 1e-12) {
  if (!(t >= 0.0)) throw InvalidParameter("sample_trajectory: t must be nonnegative");
  if (!(gamma > 0.0)) throw InvalidParameter("sample_trajectory: gamma must be positive");
  detail::ConditionedState state(spec, gamma, tail_tol);
  rng::Xoshiro256StarStar gen(seed);
  CountRecord rec;
  rec.window = t;
  rec.model = model;
  rec.seed = seed;
  double now = 0.0;
  while (true) {
    if (state.truncation_suspect())
      throw TruncationExhausted("sample_trajectory: conditioned state reached the truncation edge");
    const double u = gen.uniform01();
    const double wait = detail::draw_waiting_time(state, u, gamma, model);
    if (now + wait >= t || !std::isfinite(wait)) {
      state.evolve_no_count(t - now, model);
      break;
    }
    now += wait;
    state.evolve_no_count(wait, model);
    state.apply_jump(model);
    rec.jump_times.push_back(now);
  }
  return {std::move(rec), state.diagonal()};
}

/// Sample one record.
inline CountRecord sample_record(const StateSpec& spec, double t, double gamma, ModelKind model,
                                 std::uint64_t seed, double tail_tol = 1e-12) {
  return sample_trajectory(spec, t, gamma, model, seed, tail_tol).first;
}

/// Run n_traj independent trajectories with SplitMix64-derived substream
/// seeds and histogram the final counts. The merge is a commutative sum, so
/// the result is independent of execution order.
inline McSummary run_batch(const StateSpec& spec, double t, double gamma, ModelKind model,
                           std::uint64_t n_traj, std::uint64_t base_seed,
                           double tail_tol = 1e-12) {
  if (n_traj < 1) throw InvalidParameter("run_batch: n_traj must be >= 1");
  McSummary out;
  out.n_traj = n_traj;
  for (std::uint64_t i = 0; i < n_traj; ++i) {
    const std::uint64_t seed = rng::derive_stream_seed(base_seed, i);
    try {
      const CountRecord rec = sample_record(spec, t, gamma, model, seed, tail_tol);
      out.histogram[static_cast<int>(rec.jump_times.size())] += 1;
    } catch (const Error& e) {
      throw Error("run_batch: trajectory " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

namespace detail {

// P(X >= i) for X ~ Binomial(m, x); the CDF of the i-th of m order statistics
// evaluated through the probability integral transform.
inline double binomial_tail(int m, int i, double x) {
  double s = 0.0;
  for (int j = i; j <= m; ++j)
    s += std::exp(specfun::log_binomial(m, j)) * specfun::pow_int(x, j) *
         specfun::pow_int(1.0 - x, m - j);
  return std::min(1.0, std::max(0.0, s));
}

inline double ks_distance_vs_uniform(std::vector<double>& sample) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t j = 0; j < sample.size(); ++j) {
    d = std::max(d, std::fabs((j + 1.0) / n - sample[j]));
    d = std::max(d, std::fabs(sample[j] - j / n));
  }
  return d;
}

}  // namespace detail

struct KsCheckResult {
  double max_distance = 0.0;
  std::size_t n_conditioned = 0;
};

/// Conditions on records with exactly k jumps in a long window (gamma t = 50)
/// and compares the empirical joint jump-time law against the model's timed
/// density, one coordinate at a time: each coordinate is mapped through its
/// exact conditional CDF (uniform under the model) and the largest
/// per-coordinate KS distance is returned with the conditioned sample size.
/// InsufficientSamples below 100 conditioned records.
inline KsCheckResult ks_like_epd_check(const StateSpec& spec, double gamma, ModelKind model,
                                       int k, std::uint64_t n_traj, std::uint64_t base_seed) {
  if (k < 1) throw InvalidParameter("ks_like_epd_check: k must be >= 1");
  const double t_window = 50.0 / gamma;
  const PhotonStatistics p = make_distribution(spec, 1e-12);
  std::vector<std::vector<double>> coords(static_cast<std::size_t>(k));
  for (std::uint64_t i = 0; i < n_traj; ++i) {
    const std::uint64_t seed = rng::derive_stream_seed(base_seed, i);
    const CountRecord rec = sample_record(spec, t_window, gamma, model, seed);
    if (static_cast<int>(rec.jump_times.size()) != k) continue;
    if (model == ModelKind::EP) {
      // Finite-window density depends on the last jump alone; the earlier
      // jumps are uniform order statistics on [0, t_k] given t_k.
      const double pk = p.at(k);
      const double zk1 = partial_sums(p, k).z_k_plus_1;
      const double e_t = std::exp(-gamma * t_window);
      auto cdf_tk = [&](double s) {
        const double phi_part = (k >= 1) ? specfun::phi_k(k - 1, gamma * s) : 1.0;
        return pk * phi_part +
               e_t * std::exp(k * std::log(gamma * s) - specfun::log_factorial(k)) * zk1;
      };
      const double norm = cdf_tk(t_window);
      const double tk = rec.jump_times.back();
      coords[static_cast<std::size_t>(k - 1)].push_back(cdf_tk(tk) / norm);
      for (int i2 = 0; i2 + 1 < k; ++i2)
        coords[static_cast<std::size_t>(i2)].push_back(
            detail::binomial_tail(k - 1, i2 + 1, rec.jump_times[static_cast<std::size_t>(i2)] / tk));
    } else {
      // The SD density factorizes over e^{-gamma t_i}: the jumps are order
      // statistics of k iid window-truncated exponentials.
      const double denom = -std::expm1(-gamma * t_window);
      for (int i2 = 0; i2 < k; ++i2) {
        const double f = -std::expm1(-gamma * rec.jump_times[static_cast<std::size_t>(i2)]) / denom;
        coords[static_cast<std::size_t>(i2)].push_back(detail::binomial_tail(k, i2 + 1, f));
      }
    }
  }
  if (coords[0].size() < 100)
    throw InsufficientSamples("ks_like_epd_check: fewer than 100 conditioned records");
  KsCheckResult out;
  out.n_conditioned = coords[0].size();
  for (auto& c : coords)
    out.max_distance = std::max(out.max_distance, detail::ks_distance_vs_uniform(c));
  return out;
}

}  // namespace photocount::mc

#endif  // PHOTOCOUNT_MONTECARLO_HPP
