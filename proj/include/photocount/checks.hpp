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

#ifndef PHOTOCOUNT_CHECKS_HPP
#define PHOTOCOUNT_CHECKS_HPP

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "photocount/counting.hpp"
#include "photocount/fockops.hpp"
#include "photocount/master.hpp"
#include "photocount/states.hpp"

// The cross-module invariant battery behind `photocount check`: fast
// self-contained consistency checks wiring the analytic formulas against the
// operator algebra and the numeric integrator.

namespace photocount::checks {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CheckOptions {
  std::optional<StateSpec> state;  ///< extra state fed to the truncation audit
  int truncation = 0;              ///< forced truncation dimension (0 = off)
  double tail_budget = 1e-8;
};

inline std::vector<std::string> check_names() {
  return {"ep_jump_boundedness",   "count_normalization", "no_count_semigroup",
          "ideality_pure_to_pure", "trace_rate_identity", "master_analytic_vs_numeric",
          "counts_vs_brute_force", "truncation_budget"};
}

namespace detail {

inline CheckResult make_result(const std::string& name, bool pass, const std::string& detail) {
  return {name, pass, detail};
}

inline CheckResult ep_jump_boundedness() {
  double worst = 0.0;
  for (const StateSpec& spec :
       {StateSpec::thermal(5.0), StateSpec::coherent(3.0), StateSpec::fock(7)}) {
    const OperatorSet ops = build_operators(make_distribution(spec).trunc_dim() + 1, 1.0);
    DensityMatrix rho = make_density_matrix(spec);
    rho.rho.conservativeResize(ops.dim, ops.dim);
    rho.rho.row(ops.dim - 1).setZero();
    rho.rho.col(ops.dim - 1).setZero();
    DensityMatrix jk = rho;
    for (int k = 1; k <= 10; ++k) {
      jk = jump(jk, ops, ModelKind::EP);
      worst = std::max(worst, jk.trace_real() - 1.0);
    }
  }
  std::ostringstream os;
  os << "max Tr[(J_ep)^k rho] - 1 = " << worst;
  return make_result("ep_jump_boundedness", worst <= 1e-12, os.str());
}

inline CheckResult count_normalization() {
  double worst = 0.0;
  for (const StateSpec& spec :
       {StateSpec::fock(5), StateSpec::coherent(5.0), StateSpec::thermal(5.0)}) {
    const PhotonStatistics p = make_distribution(spec);
    for (ModelKind model : {ModelKind::SD, ModelKind::EP}) {
      for (double gt : {0.1, 1.0, 5.0}) {
        const auto dist = counting::count_distribution(p, gt, 1.0, model);
        worst = std::max(worst, std::fabs(dist.deficit) - p.tail_mass);
      }
    }
  }
  std::ostringstream os;
  os << "max |1 - sum_k P(k,t)| - tail = " << worst;
  return make_result("count_normalization", worst <= 1e-9, os.str());
}

inline CheckResult no_count_semigroup() {
  const DensityMatrix rho = make_density_matrix(StateSpec::coherent(3.0));
  const OperatorSet ops = build_operators(rho.dim(), 0.8, 0.3);
  double worst = 0.0;
  for (ModelKind model : {ModelKind::SD, ModelKind::EP}) {
    const DensityMatrix once = no_count_evolve(rho, 1.7, ops, model);
    const DensityMatrix split =
        no_count_evolve(no_count_evolve(rho, 0.45, ops, model), 1.25, ops, model);
    worst = std::max(worst, (once.rho - split.rho).cwiseAbs().maxCoeff());
  }
  std::ostringstream os;
  os << "max |S_{t1+t2} - S_{t2} S_{t1}| = " << worst;
  return make_result("no_count_semigroup", worst <= 1e-12, os.str());
}

inline CheckResult ideality_pure_to_pure() {
  const DensityMatrix rho = make_density_matrix(StateSpec::coherent(4.0));
  const OperatorSet ops = build_operators(rho.dim(), 1.0, 0.2);
  double worst = 0.0;
  for (ModelKind model : {ModelKind::SD, ModelKind::EP}) {
    DensityMatrix evolved = no_count_evolve(rho, 0.9, ops, model);
    evolved.rho /= evolved.trace_real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(evolved.rho, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    worst = std::max(worst, ev(ev.size() - 2));  // second-largest eigenvalue
  }
  std::ostringstream os;
  os << "max second eigenvalue after no-count = " << worst;
  return make_result("ideality_pure_to_pure", worst < 1e-10, os.str());
}

inline CheckResult trace_rate_identity() {
  double worst = 0.0;
  for (const StateSpec& spec : {StateSpec::thermal(5.0), StateSpec::fock(3)}) {
    const DensityMatrix rho = make_density_matrix(spec);
    const OperatorSet ops = build_operators(rho.dim(), 1.3, 0.7);
    for (ModelKind model : {ModelKind::SD, ModelKind::EP})
      worst = std::max(worst,
                       trace_rate_identity_residual(rho, ops, model) / (1e-10 * rho.dim()));
  }
  std::ostringstream os;
  os << "max residual / (1e-10 dim) = " << worst;
  return make_result("trace_rate_identity", worst <= 1.0, os.str());
}

inline CheckResult master_analytic_vs_numeric() {
  double worst = 0.0;
  const std::vector<double> grid = {0.0, 0.5, 1.0};
  for (const StateSpec& spec : {StateSpec::fock(5), StateSpec::binomial(5, 2.0)}) {
    const PhotonStatistics p0 = make_distribution(spec);
    const DensityMatrix rho0 = density_from_distribution(p0);
    const OperatorSet ops = build_operators(rho0.dim(), 1.0);
    const auto traj = master::lindblad_integrate(rho0, grid, ops, ModelKind::EP);
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (int n = 0; n < rho0.dim(); ++n)
        worst = std::max(worst, std::fabs(traj[i].rho(n, n).real() -
                                          master::preselect_pn(p0, n, grid[i])));
  }
  // SD mean decay on the same integrator
  {
    const DensityMatrix rho0 = make_density_matrix(StateSpec::coherent(3.0));
    const OperatorSet ops = build_operators(rho0.dim(), 1.0);
    const auto traj = master::lindblad_integrate(rho0, grid, ops, ModelKind::SD);
    for (std::size_t i = 0; i < grid.size(); ++i)
      worst = std::max(worst, std::fabs(traj[i].mean_photon_number() -
                                        3.0 * std::exp(-grid[i])) );
  }
  std::ostringstream os;
  os << "max |analytic - RK4| = " << worst;
  return make_result("master_analytic_vs_numeric", worst <= 1e-6, os.str());
}

inline CheckResult counts_vs_brute_force() {
  // Renormalized truncated thermal on a small space: closed forms and the
  // nested quadrature share the identical state, so the routes must agree.
  PhotonStatistics p = make_distribution_truncated(StateSpec::thermal(2.0), 8);
  const double norm = p.support_sum();
  for (double& v : p.p) v /= norm;
  p.tail_mass = 0.0;
  const DensityMatrix rho = density_from_distribution(p);
  const OperatorSet ops = build_operators(8, 1.0);
  double worst = 0.0;
  for (ModelKind model : {ModelKind::SD, ModelKind::EP}) {
    for (int k = 0; k <= 2; ++k) {
      const double closed = counting::prob_counts(p, k, 0.7, 1.0, model);
      const double brute = counting::post_selection_probability(rho, k, 0.7, ops, model);
      worst = std::max(worst, std::fabs(closed - brute));
    }
  }
  std::ostringstream os;
  os << "max |closed - quadrature| = " << worst;
  return make_result("counts_vs_brute_force", worst <= 1e-6, os.str());
}

inline CheckResult truncation_budget(const CheckOptions& opt) {
  double worst_tail = 0.0;
  std::string worst_name = "none";
  auto audit = [&](const StateSpec& spec, const PhotonStatistics& p) {
    if (p.tail_mass > worst_tail) {
      worst_tail = p.tail_mass;
      worst_name = spec.name();
    }
  };
  for (const StateSpec& spec :
       {StateSpec::thermal(5.0), StateSpec::coherent(5.0), StateSpec::neg_binomial(2.0, 3.0)})
    audit(spec, make_distribution(spec));
  if (opt.state) {
    if (opt.truncation > 0)
      audit(*opt.state, make_distribution_truncated(*opt.state, opt.truncation));
    else
      audit(*opt.state, make_distribution(*opt.state));
  }
  std::ostringstream os;
  os << "max tail mass " << worst_tail << " (" << worst_name << "), budget " << opt.tail_budget;
  return make_result("truncation_budget", worst_tail <= opt.tail_budget, os.str());
}

}  // namespace detail

inline std::vector<CheckResult> run_checks(const CheckOptions& opt = {}) {
  std::vector<CheckResult> results;
  results.push_back(detail::ep_jump_boundedness());
  results.push_back(detail::count_normalization());
  results.push_back(detail::no_count_semigroup());
  results.push_back(detail::ideality_pure_to_pure());
  results.push_back(detail::trace_rate_identity());
  results.push_back(detail::master_analytic_vs_numeric());
  results.push_back(detail::counts_vs_brute_force());
  results.push_back(detail::truncation_budget(opt));
  return results;
}

}  // namespace photocount::checks

#endif  // PHOTOCOUNT_CHECKS_HPP
