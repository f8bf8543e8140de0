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

#ifndef PHOTOCOUNT_MASTER_HPP
#define PHOTOCOUNT_MASTER_HPP

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "photocount/errors.hpp"
#include "photocount/fockops.hpp"
#include "photocount/specfun.hpp"
#include "photocount/states.hpp"

// Pre-selection (no-readout) dynamics in the dimensionless slow time
// tau = gamma t.
//
// EP diagonal solution:  p_n(tau) = e^{-tau} sum_l tau^l/l! p_{n+l}(0), n >= 1,
// with p_0 fixed by normalization. The per-family closed forms (negative
// binomial / binomial / Poisson / thermal) are those series resummed; they
// give the photon-number probability for n >= 1, while n = 0 follows from
// normalization. SD mean decays as nbar_0 e^{-tau}.
//
// The RK4 Lindblad integrator below works directly on the density matrix
// with raw operator products and serves as the numeric cross-check of every
// analytic formula in this module. The free Hamiltonian is omitted there:
// both dissipators commute with the number operator, so it would only add
// phases to off-diagonals and leaves every diagonal quantity untouched.

namespace photocount::master {

/// One scalar quantity sampled on an increasing tau grid.
struct Trajectory1D {
  std::vector<double> taus;
  std::vector<double> values;
  std::string label;
};

namespace detail {

// Accumulate sum_l e^{-tau} tau^l / l! * c_l for l = 0..count-1 without
// overflow; the Poisson weights are generated recursively from e^{-tau}.
template <class Coef>
double poisson_weighted_sum(double tau, int count, Coef&& coefficient) {
  specfun::KahanAccumulator s;
  double w = std::exp(-tau);
  for (int l = 0; l < count; ++l) {
    s.add(w * coefficient(l));
    w *= tau / (l + 1.0);
  }
  return s.value();
}

}  // namespace detail

/// EP pre-selection probability of n photons at slow time tau.
inline double preselect_pn(const PhotonStatistics& p0, int n, double tau) {
  if (n < 0) throw InvalidParameter("preselect_pn: n must be nonnegative");
  if (!(tau >= 0.0)) throw InvalidParameter("preselect_pn: tau must be nonnegative");
  const int dim = p0.trunc_dim();
  if (n >= 1) {
    if (n >= dim) return 0.0;
    return detail::poisson_weighted_sum(tau, dim - n, [&](int l) { return p0.at(n + l); });
  }
  specfun::KahanAccumulator s;
  for (int m = 1; m < dim; ++m)
    s.add(detail::poisson_weighted_sum(tau, dim - m, [&](int l) { return p0.at(m + l); }));
  return 1.0 - s.value();
}

/// p_0(tau) through the resummed form sum_m p_m(0) Phi_{m-1}(tau); equal to
/// preselect_pn(p0, 0, tau) for any initial distribution.
inline double preselect_p0_closed(const PhotonStatistics& p0, double tau) {
  specfun::KahanAccumulator s;
  s.add(p0.at(0));  // Phi_{-1} = 1
  for (int m = 1; m < p0.trunc_dim(); ++m)
    s.add(p0.at(m) * specfun::phi_k(m - 1, tau));
  return s.value();
}

/// EP mean photon number for an arbitrary initial distribution:
/// e^{-tau} sum_k p_k(0) sum_{n=1}^{k} n tau^{k-n}/(k-n)!.
inline double mean_photons_ep_series(const PhotonStatistics& p0, double tau) {
  specfun::KahanAccumulator s;
  for (int n = 1; n < p0.trunc_dim(); ++n)
    s.add(n * detail::poisson_weighted_sum(tau, p0.trunc_dim() - n,
                                           [&](int l) { return p0.at(n + l); }));
  return s.value();
}

/// Negative-binomial p_n(tau), Kummer form
/// p_n(0) e^{-tau} Phi(mu+n; n+1; nbar0 tau/(nbar0+mu)). Also evaluated
/// through the Kummer transform and, for integer mu, the associated Laguerre
/// form; route disagreement beyond 1e-10 is reported as an error since all
/// routes are exact. Gives the photon-number probability for n >= 1.
inline double pn_negbinomial(double mu, double nbar0, int n, double tau) {
  if (!(mu > 0.0)) throw InvalidParameter("pn_negbinomial: mu must be positive");
  if (!(nbar0 >= 0.0)) throw InvalidParameter("pn_negbinomial: nbar0 must be nonnegative");
  if (n < 0) throw InvalidParameter("pn_negbinomial: n must be nonnegative");
  if (!(tau >= 0.0)) throw InvalidParameter("pn_negbinomial: tau must be nonnegative");
  if (nbar0 == 0.0) return n == 0 ? 1.0 : 0.0;
  double log_poch = 0.0;  // ln Gamma(mu+n)/Gamma(mu)
  for (int i = 0; i < n; ++i) log_poch += std::log(mu + i);
  const double log_p0 = log_poch - specfun::log_factorial(n) + mu * std::log(mu) +
                        n * std::log(nbar0) - (mu + n) * std::log(nbar0 + mu);
  const double x = nbar0 * tau / (nbar0 + mu);
  const double direct = std::exp(log_p0 - tau) * specfun::kummer_m(mu + n, n + 1.0, x);
  const double transformed =
      std::exp(log_p0 - mu * tau / (nbar0 + mu)) * specfun::kummer_m(1.0 - mu, n + 1.0, -x);
  const double tol = 1e-10 * std::max(1.0, std::fabs(direct));
  if (std::fabs(direct - transformed) > tol)
    throw Error("pn_negbinomial: Kummer forms disagree beyond 1e-10");
  if (std::fabs(mu - std::round(mu)) < 1e-12) {
    const int mu_int = static_cast<int>(std::round(mu));
    const double laguerre = std::exp(mu * std::log(mu) + n * std::log(nbar0) -
                                     (mu + n) * std::log(nbar0 + mu) - mu * tau / (nbar0 + mu)) *
                            specfun::laguerre_assoc(mu_int - 1, n, -x);
    if (std::fabs(direct - laguerre) > tol)
      throw Error("pn_negbinomial: Laguerre form disagrees beyond 1e-10");
  }
  return direct;
}

/// Binomial-family p_n(tau):
/// (nbar0/M)^n (1-nbar0/M)^{M-n} e^{-tau} L_{M-n}^{n}(nbar0 tau/(nbar0-M)).
/// Gives the photon-number probability for n >= 1.
inline double pn_binomial(int big_m, double nbar0, int n, double tau) {
  if (big_m < 1) throw InvalidParameter("pn_binomial: M must be positive");
  if (!(nbar0 >= 0.0) || nbar0 > static_cast<double>(big_m))
    throw InvalidParameter("pn_binomial: nbar0 must lie in [0, M]");
  if (n < 0 || n > big_m) throw InvalidParameter("pn_binomial: need 0 <= n <= M");
  if (!(tau >= 0.0)) throw InvalidParameter("pn_binomial: tau must be nonnegative");
  const double x = nbar0 / big_m;
  if (x == 0.0) return (n == 0) ? std::exp(-tau) * specfun::laguerre_assoc(big_m, 0, 0.0) : 0.0;
  if (x == 1.0 && n < big_m) return 0.0;
  const double arg = nbar0 * tau / (nbar0 - big_m);  // nonpositive
  const double pref = std::exp(n * std::log(x) + (big_m - n) * std::log1p(-x));
  return pref * std::exp(-tau) * specfun::laguerre_assoc(big_m - n, n, arg);
}

/// Poisson-family p_n(tau) = e^{-nbar0-tau} (nbar0/tau)^{n/2} I_n(2 sqrt(nbar0 tau)),
/// n >= 1; the tau -> 0 branch returns the initial Poisson weight.
inline double pn_poisson(double nbar0, int n, double tau) {
  if (n < 1) throw InvalidParameter("pn_poisson: n must be >= 1");
  if (!(nbar0 >= 0.0)) throw InvalidParameter("pn_poisson: nbar0 must be nonnegative");
  if (!(tau >= 0.0)) throw InvalidParameter("pn_poisson: tau must be nonnegative");
  if (nbar0 == 0.0) return 0.0;
  if (tau == 0.0) return specfun::poisson_weight(n, nbar0);
  return std::exp(-nbar0 - tau + 0.5 * n * (std::log(nbar0) - std::log(tau))) *
         specfun::bessel_i(n, 2.0 * std::sqrt(nbar0 * tau));
}

/// A value plus the flag of its asymptotic validity condition.
struct AsymptoticResult {
  double value;
  bool valid;
};

/// Large-tau replacement of pn_poisson, valid for tau >> nbar0 + 1/nbar0:
/// (nbar0/tau)^{n/2} (4 pi sqrt(nbar0 tau))^{-1/2} exp[-(sqrt(nbar0)-sqrt(tau))^2].
inline AsymptoticResult pn_poisson_asymptotic(double nbar0, int n, double tau) {
  if (n < 1) throw InvalidParameter("pn_poisson_asymptotic: n must be >= 1");
  if (!(nbar0 > 0.0)) throw InvalidParameter("pn_poisson_asymptotic: nbar0 must be positive");
  if (!(tau > 0.0)) throw InvalidParameter("pn_poisson_asymptotic: tau must be positive");
  const bool valid = tau > nbar0 + 1.0 / nbar0;
  const double root = std::sqrt(nbar0) - std::sqrt(tau);
  const double value = std::exp(0.5 * n * (std::log(nbar0) - std::log(tau)) - root * root) /
                       std::sqrt(4.0 * M_PI * std::sqrt(nbar0 * tau));
  return {value, valid};
}

/// Companion asymptotic mean:
/// nbar0^{1/4} (4 pi)^{-1/2} tau^{-3/4} exp[-(sqrt(nbar0)-sqrt(tau))^2].
inline AsymptoticResult mean_poisson_asymptotic(double nbar0, double tau) {
  if (!(nbar0 > 0.0)) throw InvalidParameter("mean_poisson_asymptotic: nbar0 must be positive");
  if (!(tau > 0.0)) throw InvalidParameter("mean_poisson_asymptotic: tau must be positive");
  const bool valid = tau > nbar0 + 1.0 / nbar0;
  const double root = std::sqrt(nbar0) - std::sqrt(tau);
  const double value =
      std::pow(nbar0, 0.25) / std::sqrt(4.0 * M_PI) * std::pow(tau, -0.75) * std::exp(-root * root);
  return {value, valid};
}

/// Mean photon number at slow time tau. SD: nbar0 e^{-tau} for every family.
/// EP: closed forms for Fock, Thermal, Coherent (Poisson); the general
/// series otherwise.
inline double mean_photons(const StateSpec& spec, double tau, ModelKind model) {
  if (!(tau >= 0.0)) throw InvalidParameter("mean_photons: tau must be nonnegative");
  spec.validate();
  if (model == ModelKind::SD) return spec.mean() * std::exp(-tau);
  switch (spec.family) {
    case StateFamily::Fock: {
      const int m = spec.m;
      return detail::poisson_weighted_sum(tau, m, [&](int l) { return static_cast<double>(m - l); });
    }
    case StateFamily::Thermal:
      return spec.nbar0 * std::exp(-tau / (1.0 + spec.nbar0));
    case StateFamily::Coherent: {
      if (spec.nbar0 == 0.0) return 0.0;
      if (tau == 0.0) return spec.nbar0;
      specfun::KahanAccumulator s;
      int n = 1;
      for (;; ++n) {
        const double term = n * pn_poisson(spec.nbar0, n, tau);
        s.add(term);
        if (n > spec.nbar0 && n > 2.0 * std::sqrt(spec.nbar0 * tau) &&
            term < 1e-15 * std::max(s.value(), 1e-300))
          break;
        if (n > 100000) throw NonConvergent("mean_photons: Bessel series did not converge");
      }
      return s.value();
    }
    default:
      return mean_photons_ep_series(make_distribution(spec, 1e-13), tau);
  }
}

/// EP mean minus SD mean; nonnegative, and zero exactly for Fock(1).
inline double mean_gap(const StateSpec& spec, double tau) {
  return mean_photons(spec, tau, ModelKind::EP) - mean_photons(spec, tau, ModelKind::SD);
}

/// Reduced generating function of the diagonal,
/// G(z; tau) = e^{-tau} sum_k p_k(0) sum_{n=1}^{k} z^n tau^{k-n}/(k-n)!.
/// Its z-derivative at z = 1 is the EP mean.
inline double generating_function(const PhotonStatistics& p0, double z, double tau) {
  if (!(z >= 0.0) || z > 1.0)
    throw InvalidParameter("generating_function: z must lie in [0, 1]");
  if (!(tau >= 0.0)) throw InvalidParameter("generating_function: tau must be nonnegative");
  const int dim = p0.trunc_dim();
  std::vector<double> zpow(static_cast<std::size_t>(dim), 0.0);
  double zp = 1.0;
  for (int n = 0; n < dim; ++n) {
    zpow[static_cast<std::size_t>(n)] = zp;
    zp *= z;
  }
  specfun::KahanAccumulator s;
  for (int n = 1; n < dim; ++n)
    s.add(zpow[static_cast<std::size_t>(n)] *
          detail::poisson_weighted_sum(tau, dim - n, [&](int l) { return p0.at(n + l); }));
  return s.value();
}

/// Step-size policy of the RK4 Lindblad integrator.
struct LindbladControl {
  double h_init = 0.02;
  double h_min = 1e-5;
  double diag_tol = 1e-8;  ///< max |p_n| change allowed between h and h/2 runs
};

namespace detail {

inline std::vector<DensityMatrix> rk4_run(const DensityMatrix& rho0,
                                          const std::vector<double>& tau_grid,
                                          const Eigen::MatrixXcd& l_op,
                                          const Eigen::MatrixXd& half_k, double h) {
  const auto deriv = [&](const Eigen::MatrixXcd& r) -> Eigen::MatrixXcd {
    Eigen::MatrixXcd lr = l_op * r;
    return lr * l_op.adjoint() - half_k.cast<std::complex<double>>().cwiseProduct(r);
  };
  std::vector<DensityMatrix> out;
  out.reserve(tau_grid.size());
  Eigen::MatrixXcd rho = rho0.rho;
  double tau = tau_grid.front();
  out.push_back({rho});
  for (std::size_t i = 1; i < tau_grid.size(); ++i) {
    const double span = tau_grid[i] - tau;
    const int nsteps = std::max(1, static_cast<int>(std::ceil(span / h)));
    const double hs = span / nsteps;
    for (int s = 0; s < nsteps; ++s) {
      const Eigen::MatrixXcd k1 = deriv(rho);
      const Eigen::MatrixXcd k2 = deriv(rho + 0.5 * hs * k1);
      const Eigen::MatrixXcd k3 = deriv(rho + 0.5 * hs * k2);
      const Eigen::MatrixXcd k4 = deriv(rho + hs * k3);
      rho += (hs / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    tau = tau_grid[i];
    out.push_back({rho});
  }
  return out;
}

inline double max_diag_difference(const std::vector<DensityMatrix>& a,
                                  const std::vector<DensityMatrix>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, (a[i].rho.diagonal() - b[i].rho.diagonal()).cwiseAbs().maxCoeff());
  return worst;
}

}  // namespace detail

/// Fixed-step RK4 integration of d rho/d tau = L rho L^dag - 1/2 {L^dag L, rho}
/// with L = E_- (EP) or L = a (SD; gamma absorbed into the slow time).
/// The step is accepted once halving it changes every diagonal entry by less
/// than diag_tol; the halved-step result is returned.
inline std::vector<DensityMatrix> lindblad_integrate(const DensityMatrix& rho0,
                                                     const std::vector<double>& tau_grid,
                                                     const OperatorSet& ops, ModelKind model,
                                                     const LindbladControl& ctl = {}) {
  if (tau_grid.empty() || tau_grid.front() != 0.0)
    throw InvalidParameter("lindblad_integrate: tau grid must start at 0");
  for (std::size_t i = 1; i < tau_grid.size(); ++i)
    if (!(tau_grid[i] > tau_grid[i - 1]))
      throw InvalidParameter("lindblad_integrate: tau grid must be increasing");
  if (tau_grid.size() == 1) return {rho0};
  const Eigen::MatrixXcd l_op =
      (model == ModelKind::EP ? ops.e_minus : ops.a).cast<std::complex<double>>();
  const int d = rho0.dim();
  Eigen::VectorXd kd(d);  // diagonal of L^dag L
  for (int n = 0; n < d; ++n)
    kd(n) = (model == ModelKind::EP) ? (n == 0 ? 0.0 : 1.0) : static_cast<double>(n);
  Eigen::MatrixXd half_k(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) half_k(i, j) = 0.5 * (kd(i) + kd(j));

  double h = ctl.h_init;
  std::vector<DensityMatrix> coarse = detail::rk4_run(rho0, tau_grid, l_op, half_k, h);
  while (true) {
    std::vector<DensityMatrix> fine = detail::rk4_run(rho0, tau_grid, l_op, half_k, 0.5 * h);
    if (detail::max_diag_difference(coarse, fine) < ctl.diag_tol) return fine;
    h *= 0.5;
    if (h < ctl.h_min)
      throw StepTooLarge("lindblad_integrate: refinement criterion unmet at h_min");
    coarse = std::move(fine);
  }
}

}  // namespace photocount::master

#endif  // PHOTOCOUNT_MASTER_HPP
