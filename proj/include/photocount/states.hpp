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

#ifndef PHOTOCOUNT_STATES_HPP
#define PHOTOCOUNT_STATES_HPP

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "photocount/errors.hpp"
#include "photocount/specfun.hpp"

namespace photocount {

enum class StateFamily { Fock, Coherent, Thermal, NegBinomial, Binomial, CoherentPhase, Custom };

/// Declarative description of an initial field state. Only the fields of the
/// selected family are meaningful.
struct StateSpec {
  StateFamily family = StateFamily::Fock;
  int m = 0;                      // Fock
  double nbar0 = 0.0;             // Coherent / Thermal / NegBinomial / Binomial
  double mu = 0.0;                // NegBinomial
  int big_m = 0;                  // Binomial
  std::complex<double> z{0, 0};   // CoherentPhase, |z| < 1
  std::vector<double> custom_p;   // Custom

  static StateSpec fock(int m) {
    StateSpec s;
    s.family = StateFamily::Fock;
    s.m = m;
    return s;
  }
  static StateSpec coherent(double nbar0) {
    StateSpec s;
    s.family = StateFamily::Coherent;
    s.nbar0 = nbar0;
    return s;
  }
  static StateSpec thermal(double nbar0) {
    StateSpec s;
    s.family = StateFamily::Thermal;
    s.nbar0 = nbar0;
    return s;
  }
  static StateSpec neg_binomial(double mu, double nbar0) {
    StateSpec s;
    s.family = StateFamily::NegBinomial;
    s.mu = mu;
    s.nbar0 = nbar0;
    return s;
  }
  static StateSpec binomial(int big_m, double nbar0) {
    StateSpec s;
    s.family = StateFamily::Binomial;
    s.big_m = big_m;
    s.nbar0 = nbar0;
    return s;
  }
  static StateSpec coherent_phase(std::complex<double> z) {
    StateSpec s;
    s.family = StateFamily::CoherentPhase;
    s.z = z;
    return s;
  }
  static StateSpec custom(std::vector<double> p) {
    StateSpec s;
    s.family = StateFamily::Custom;
    s.custom_p = std::move(p);
    return s;
  }

  void validate() const {
    switch (family) {
      case StateFamily::Fock:
        if (m < 0) throw InvalidParameter("fock: m must be nonnegative");
        break;
      case StateFamily::Coherent:
      case StateFamily::Thermal:
        if (!(nbar0 >= 0.0)) throw InvalidParameter("nbar0 must be nonnegative");
        break;
      case StateFamily::NegBinomial:
        if (!(mu > 0.0)) throw InvalidParameter("negbinomial: mu must be positive");
        if (!(nbar0 >= 0.0)) throw InvalidParameter("negbinomial: nbar0 must be nonnegative");
        break;
      case StateFamily::Binomial:
        if (big_m < 1) throw InvalidParameter("binomial: M must be a positive integer");
        if (!(nbar0 >= 0.0) || nbar0 > static_cast<double>(big_m))
          throw InvalidParameter("binomial: nbar0 must lie in [0, M]");
        break;
      case StateFamily::CoherentPhase:
        if (!(std::abs(z) < 1.0)) throw InvalidParameter("coherent phase: need |z| < 1");
        break;
      case StateFamily::Custom: {
        if (custom_p.empty()) throw InvalidParameter("custom: empty probability list");
        double sum = 0.0;
        for (std::size_t i = 0; i < custom_p.size(); ++i) {
          if (!(custom_p[i] >= 0.0))
            throw InvalidParameter("custom: negative probability at index " + std::to_string(i));
          sum += custom_p[i];
        }
        if (std::fabs(sum - 1.0) > 1e-12)
          throw InvalidParameter("custom: probabilities must sum to 1 within 1e-12");
        break;
      }
    }
  }

  /// Analytic mean photon number of the family.
  double mean() const {
    switch (family) {
      case StateFamily::Fock:
        return static_cast<double>(m);
      case StateFamily::Coherent:
      case StateFamily::Thermal:
      case StateFamily::NegBinomial:
      case StateFamily::Binomial:
        return nbar0;
      case StateFamily::CoherentPhase: {
        const double r = std::norm(z);
        return r / (1.0 - r);
      }
      case StateFamily::Custom: {
        double s = 0.0;
        for (std::size_t n = 0; n < custom_p.size(); ++n) s += static_cast<double>(n) * custom_p[n];
        return s;
      }
    }
    return 0.0;
  }

  /// True when the density matrix of the family is diagonal in the Fock basis.
  bool is_diagonal() const {
    return family != StateFamily::Coherent && family != StateFamily::CoherentPhase;
  }

  std::string name() const {
    switch (family) {
      case StateFamily::Fock: return "fock";
      case StateFamily::Coherent: return "coherent";
      case StateFamily::Thermal: return "thermal";
      case StateFamily::NegBinomial: return "negbinomial";
      case StateFamily::Binomial: return "binomial";
      case StateFamily::CoherentPhase: return "phase";
      case StateFamily::Custom: return "custom";
    }
    return "?";
  }
};

/// Diagonal Fock-basis photon-number distribution p_n, n = 0..N, together
/// with the mass assigned beyond the truncation at construction time.
/// Operations downstream treat the vector as exact on its support and carry
/// tail_mass as an explicit error bound.
struct PhotonStatistics {
  std::vector<double> p;
  double tail_mass = 0.0;
  double tail_tol = 1.0;  ///< tolerance requested at construction (1 = unconstrained)

  int trunc_dim() const { return static_cast<int>(p.size()); }
  double at(int n) const {
    return (n >= 0 && n < trunc_dim()) ? p[static_cast<std::size_t>(n)] : 0.0;
  }
  double support_sum() const {
    specfun::KahanAccumulator s;
    for (double v : p) s.add(v);
    return s.value();
  }
  double mean() const {
    specfun::KahanAccumulator s;
    for (int n = 0; n < trunc_dim(); ++n) s.add(n * p[static_cast<std::size_t>(n)]);
    return s.value();
  }
  double second_moment() const {
    specfun::KahanAccumulator s;
    for (int n = 0; n < trunc_dim(); ++n)
      s.add(static_cast<double>(n) * n * p[static_cast<std::size_t>(n)]);
    return s.value();
  }
};

struct MeanAndQ {
  double nbar;
  double q;
};

struct PartialSums {
  double a_k;        ///< A_k = sum_{n<=k} p_n
  double z_k_plus_1; ///< Z_{k+1} = 1 - A_k (exact complement, includes tail mass)
};

namespace detail {

inline constexpr int kMaxTruncDim = 5'000'000;

// Smallest N with r^{N+1} < tail_tol for a geometric distribution of ratio r.
inline int geometric_trunc_dim(double r, double tail_tol) {
  if (r <= 0.0) return 1;
  const int n = static_cast<int>(std::ceil(std::log(tail_tol) / std::log(r))) - 1;
  return std::max(n, 0) + 1;
}

inline PhotonStatistics geometric_distribution(double ratio, double tail_tol) {
  PhotonStatistics out;
  out.tail_tol = tail_tol;
  if (ratio == 0.0) {
    out.p = {1.0};
    return out;
  }
  const int dim = geometric_trunc_dim(ratio, tail_tol);
  if (dim > kMaxTruncDim) throw NonConvergent("geometric distribution: truncation too large");
  out.p.resize(static_cast<std::size_t>(dim));
  double w = 1.0 - ratio;
  for (int n = 0; n < dim; ++n) {
    out.p[static_cast<std::size_t>(n)] = w;
    w *= ratio;
  }
  out.tail_mass = std::exp(dim * std::log(ratio));  // analytic tail, not a re-summation
  return out;
}

}  // namespace detail

/// Build the photon-number distribution of `spec`, truncated at the smallest
/// dimension whose tail mass is below tail_tol. Fock, Binomial and Custom are
/// exactly finite (tail_mass = 0).
inline PhotonStatistics make_distribution(const StateSpec& spec, double tail_tol = 1e-12) {
  spec.validate();
  if (!(tail_tol > 0.0 && tail_tol < 1.0))
    throw InvalidParameter("make_distribution: tail_tol must lie in (0, 1)");
  PhotonStatistics out;
  out.tail_tol = tail_tol;
  switch (spec.family) {
    case StateFamily::Fock: {
      out.p.assign(static_cast<std::size_t>(spec.m) + 1, 0.0);
      out.p.back() = 1.0;
      return out;
    }
    case StateFamily::Coherent: {
      if (spec.nbar0 == 0.0) {
        out.p = {1.0};
        return out;
      }
      const double nb = spec.nbar0;
      specfun::KahanAccumulator cum;
      double w = std::exp(-nb);
      out.p.push_back(w);
      cum.add(w);
      int n = 0;
      while (cum.value() < 1.0 - tail_tol || n < nb) {
        ++n;
        if (n > detail::kMaxTruncDim) throw NonConvergent("coherent: truncation too large");
        w *= nb / n;
        out.p.push_back(w);
        cum.add(w);
      }
      out.tail_mass = std::max(0.0, 1.0 - cum.value());
      return out;
    }
    case StateFamily::Thermal: {
      const double r = spec.nbar0 / (1.0 + spec.nbar0);
      PhotonStatistics g = detail::geometric_distribution(r, tail_tol);
      g.tail_tol = tail_tol;
      return g;
    }
    case StateFamily::NegBinomial: {
      if (spec.nbar0 == 0.0) {
        out.p = {1.0};
        return out;
      }
      const double mu = spec.mu;
      const double s = spec.nbar0 / (spec.nbar0 + mu);
      specfun::KahanAccumulator cum;
      double w = std::exp(-mu * std::log1p(spec.nbar0 / mu));  // (mu/(nbar0+mu))^mu
      out.p.push_back(w);
      cum.add(w);
      int n = 0;
      while (cum.value() < 1.0 - tail_tol) {
        w *= (mu + n) / (n + 1.0) * s;
        ++n;
        if (n > detail::kMaxTruncDim) throw NonConvergent("negbinomial: truncation too large");
        out.p.push_back(w);
        cum.add(w);
      }
      out.tail_mass = std::max(0.0, 1.0 - cum.value());
      return out;
    }
    case StateFamily::Binomial: {
      const int M = spec.big_m;
      const double x = spec.nbar0 / M;
      out.p.assign(static_cast<std::size_t>(M) + 1, 0.0);
      if (x == 0.0) {
        out.p[0] = 1.0;
      } else if (x == 1.0) {
        out.p.back() = 1.0;
      } else {
        for (int n = 0; n <= M; ++n)
          out.p[static_cast<std::size_t>(n)] =
              std::exp(specfun::log_binomial(M, n) + n * std::log(x) + (M - n) * std::log1p(-x));
      }
      return out;
    }
    case StateFamily::CoherentPhase: {
      PhotonStatistics g = detail::geometric_distribution(std::norm(spec.z), tail_tol);
      g.tail_tol = tail_tol;
      return g;
    }
    case StateFamily::Custom: {
      out.p = spec.custom_p;
      return out;
    }
  }
  throw InvalidParameter("make_distribution: unknown family");
}

/// Same family formulas evaluated on a caller-forced dimension; the tail mass
/// is whatever the formulas leave over. Used to audit truncation budgets.
inline PhotonStatistics make_distribution_truncated(const StateSpec& spec, int dim) {
  spec.validate();
  if (dim < 1) throw InvalidParameter("make_distribution_truncated: dim must be >= 1");
  PhotonStatistics full = make_distribution(spec, 1e-15);
  PhotonStatistics out;
  out.tail_tol = 1.0;
  out.p.assign(static_cast<std::size_t>(dim), 0.0);
  for (int n = 0; n < dim && n < full.trunc_dim(); ++n)
    out.p[static_cast<std::size_t>(n)] = full.p[static_cast<std::size_t>(n)];
  out.tail_mass = std::max(0.0, 1.0 - out.support_sum());
  return out;
}

/// nbar = sum n p_n and Mandel q = (variance - nbar)/nbar (0 when nbar = 0).
inline MeanAndQ mean_and_q(const PhotonStatistics& p) {
  const double nbar = p.mean();
  if (nbar <= 1e-15) return {nbar, 0.0};
  const double var = p.second_moment() - nbar * nbar;
  return {nbar, (var - nbar) / nbar};
}

/// A_k = sum_{n=0}^{k} p_n and Z_{k+1} = 1 - A_k (exact complement).
inline PartialSums partial_sums(const PhotonStatistics& p, int k) {
  if (k < 0) throw InvalidParameter("partial_sums: k must be nonnegative");
  specfun::KahanAccumulator s;
  const int top = std::min(k, p.trunc_dim() - 1);
  for (int n = 0; n <= top; ++n) s.add(p.p[static_cast<std::size_t>(n)]);
  const double a = s.value();
  return {a, 1.0 - a};
}

/// Truncated complex Hermitian Fock-basis density matrix.
struct DensityMatrix {
  Eigen::MatrixXcd rho;

  int dim() const { return static_cast<int>(rho.rows()); }
  double trace_real() const { return rho.trace().real(); }
  std::vector<double> diagonal_probs() const {
    std::vector<double> d(static_cast<std::size_t>(dim()));
    for (int n = 0; n < dim(); ++n) d[static_cast<std::size_t>(n)] = rho(n, n).real();
    return d;
  }
  double mean_photon_number() const {
    double s = 0.0;
    for (int n = 0; n < dim(); ++n) s += n * rho(n, n).real();
    return s;
  }
};

inline double hermiticity_error(const DensityMatrix& dm) {
  return (dm.rho - dm.rho.adjoint()).cwiseAbs().maxCoeff();
}

inline double min_eigenvalue(const DensityMatrix& dm) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dm.rho, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline void require_valid(const DensityMatrix& dm, double herm_tol = 1e-12,
                          double trace_tol = 1e-10, double eig_floor = -1e-10) {
  if (hermiticity_error(dm) > herm_tol)
    throw InvalidParameter("density matrix: not Hermitian within tolerance");
  if (std::fabs(dm.trace_real() - 1.0) > trace_tol)
    throw InvalidParameter("density matrix: trace differs from 1 beyond tolerance");
  if (min_eigenvalue(dm) < eig_floor)
    throw InvalidParameter("density matrix: negative eigenvalue beyond tolerance");
}

/// Embed a diagonal distribution as a density matrix.
inline DensityMatrix density_from_distribution(const PhotonStatistics& p) {
  DensityMatrix dm;
  dm.rho = Eigen::MatrixXcd::Zero(p.trunc_dim(), p.trunc_dim());
  for (int n = 0; n < p.trunc_dim(); ++n) dm.rho(n, n) = p.p[static_cast<std::size_t>(n)];
  return dm;
}

/// Density matrix of `spec`: a rank-1 outer product for the pure families
/// (Fock, Coherent with real nonnegative amplitude, CoherentPhase), diagonal
/// otherwise. Truncation matches make_distribution.
inline DensityMatrix make_density_matrix(const StateSpec& spec, double tail_tol = 1e-12) {
  spec.validate();
  const PhotonStatistics p = make_distribution(spec, tail_tol);
  const int dim = p.trunc_dim();
  switch (spec.family) {
    case StateFamily::Coherent: {
      Eigen::VectorXcd c(dim);
      for (int n = 0; n < dim; ++n) {
        const double lw = (spec.nbar0 > 0.0)
                              ? -0.5 * spec.nbar0 + 0.5 * (n * std::log(spec.nbar0)) -
                                    0.5 * specfun::log_factorial(n)
                              : (n == 0 ? 0.0 : -std::numeric_limits<double>::infinity());
        c(n) = std::exp(lw);
      }
      DensityMatrix dm;
      dm.rho = c * c.adjoint();
      return dm;
    }
    case StateFamily::CoherentPhase: {
      Eigen::VectorXcd c(dim);
      const double lead = std::sqrt(1.0 - std::norm(spec.z));
      std::complex<double> zn = 1.0;
      for (int n = 0; n < dim; ++n) {
        c(n) = lead * zn;
        zn *= spec.z;
      }
      DensityMatrix dm;
      dm.rho = c * c.adjoint();
      return dm;
    }
    case StateFamily::Fock:
    case StateFamily::Thermal:
    case StateFamily::NegBinomial:
    case StateFamily::Binomial:
    case StateFamily::Custom:
      return density_from_distribution(p);
  }
  throw InvalidParameter("make_density_matrix: unknown family");
}

}  // namespace photocount

#endif  // PHOTOCOUNT_STATES_HPP
