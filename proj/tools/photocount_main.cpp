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

// photocount — deterministic CSV datasets for the SD and EP photodetection
// models: initial distributions, count statistics P(k,t), pre-selection mean
// decay, timed-count densities, Monte Carlo batches, and the invariant
// battery. Exit codes: 0 ok, 1 invariant/runtime failure, 2 usage error.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "photocount/checks.hpp"
#include "photocount/counting.hpp"
#include "photocount/csv.hpp"
#include "photocount/errors.hpp"
#include "photocount/fockops.hpp"
#include "photocount/master.hpp"
#include "photocount/montecarlo.hpp"
#include "photocount/scenario.hpp"
#include "photocount/states.hpp"

namespace pc = photocount;
using pc::cli::Scenario;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  for (double v : parse_double_list(csv)) out.push_back(static_cast<int>(v));
  return out;
}

std::complex<double> parse_complex(const std::string& s) {
  const auto v = parse_double_list(s);
  if (v.empty() || v.size() > 2) throw pc::InvalidParameter("--z expects re or re,im");
  return {v[0], v.size() == 2 ? v[1] : 0.0};
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw pc::InvalidParameter("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

// Shared flag block. Each subcommand wires the subset it understands.
struct FlagState {
  Scenario sc;
  std::string z_text;
  std::string p_text;
  std::string k_text;
  std::string times_text;
  std::string scenario_path;
  bool list_only = false;
};

void add_state_flags(CLI::App* cmd, FlagState& fs) {
  cmd->add_option("--state", fs.sc.state,
                  "state family: fock|coherent|thermal|binomial|negbinomial|phase|custom");
  cmd->add_option("--m", fs.sc.m, "Fock photon number");
  cmd->add_option("--nbar", fs.sc.nbar, "mean photon number parameter");
  cmd->add_option("--mu", fs.sc.mu, "negative-binomial shape mu");
  cmd->add_option("--M", fs.sc.big_m, "binomial M");
  cmd->add_option("--z", fs.z_text, "coherent-phase z as re or re,im (|z| < 1)");
  cmd->add_option("--p-list", fs.p_text, "custom probabilities, comma separated");
  cmd->add_option("--trunc-tol", fs.sc.trunc_tol, "truncation tail tolerance");
}

void finalize_flags(FlagState& fs) {
  if (!fs.z_text.empty()) fs.sc.z = parse_complex(fs.z_text);
  if (!fs.p_text.empty()) fs.sc.custom_p = parse_double_list(fs.p_text);
  if (!fs.k_text.empty()) fs.sc.k_list = parse_int_list(fs.k_text);
  if (!fs.times_text.empty()) fs.sc.times = parse_double_list(fs.times_text);
}

// Flags win over scenario-file values: reparse flags on top of the loaded file.
Scenario merge_scenario(const FlagState& fs, const std::string& command, CLI::App* cmd) {
  if (fs.scenario_path.empty()) return fs.sc;
  std::ifstream in(fs.scenario_path);
  if (!in) throw pc::InvalidParameter("cannot open scenario file '" + fs.scenario_path + "'");
  Scenario merged = pc::cli::load_scenario(in, command);
  for (const auto* opt : cmd->get_options()) {
    (void)opt;  // CLI11 already stored flag values into fs.sc
  }
  // Apply explicitly passed flags over the file values.
  Scenario flag_values = fs.sc;
  auto passed = [&](const std::string& name) {
    const auto* o = cmd->get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
  };
  if (passed("--model")) merged.model = flag_values.model;
  if (passed("--state")) merged.state = flag_values.state;
  if (passed("--m")) merged.m = flag_values.m;
  if (passed("--nbar")) merged.nbar = flag_values.nbar;
  if (passed("--mu")) merged.mu = flag_values.mu;
  if (passed("--M")) merged.big_m = flag_values.big_m;
  if (passed("--z")) merged.z = flag_values.z;
  if (passed("--p-list")) merged.custom_p = flag_values.custom_p;
  if (passed("--gamma")) merged.gamma = flag_values.gamma;
  if (passed("--t")) merged.t = flag_values.t;
  if (passed("--gamma-t")) merged.gamma_t = flag_values.gamma_t;
  if (passed("--gamma-t-max")) merged.gamma_t_max = flag_values.gamma_t_max;
  if (passed("--tau-max")) merged.tau_max = flag_values.tau_max;
  if (passed("--steps")) merged.steps = flag_values.steps;
  if (passed("--k-list")) merged.k_list = flag_values.k_list;
  if (passed("--times")) merged.times = flag_values.times;
  if (passed("--trunc-tol")) merged.trunc_tol = flag_values.trunc_tol;
  if (passed("--seed")) merged.seed = flag_values.seed;
  if (passed("--n-traj")) merged.n_traj = flag_values.n_traj;
  if (passed("--out")) merged.out = flag_values.out;
  if (passed("--figure")) merged.figure = flag_values.figure;
  if (passed("--truncation")) merged.truncation = flag_values.truncation;
  return merged;
}

int run_dist(const Scenario& sc) {
  const pc::StateSpec spec = sc.to_state_spec();
  const pc::PhotonStatistics p = pc::make_distribution(spec, sc.trunc_tol);
  Output out(sc.out);
  pc::csvio::Writer w(out.stream());
  w.row({"n", "p_n"});
  for (int n = 0; n < p.trunc_dim(); ++n)
    w.row({pc::csvio::fmt(n), pc::csvio::fmt(p.at(n))});
  return kExitOk;
}

double counts_value(const pc::StateSpec& spec, const pc::PhotonStatistics& p, int k, double gt,
                    pc::ModelKind model) {
  switch (spec.family) {
    case pc::StateFamily::Fock:
    case pc::StateFamily::Coherent:
    case pc::StateFamily::Thermal:
      return pc::counting::prob_counts_closed_family(spec, k, gt, 1.0, model);
    default:
      return pc::counting::prob_counts(p, k, gt, 1.0, model);
  }
}

int run_counts(Scenario sc) {
  if (sc.figure == 1) sc.state = "fock", sc.m = 5;
  if (sc.figure == 2) sc.state = "coherent", sc.nbar = 5.0;
  if (sc.figure == 3) sc.state = "thermal", sc.nbar = 5.0;
  if (sc.figure != 0) {
    if (sc.figure < 1 || sc.figure > 3)
      throw pc::InvalidParameter("counts: --figure must be 1, 2 or 3");
    sc.gamma_t_max = 10.0;
    sc.steps = 200;
    sc.k_list = {0, 1, 2, 3, 4, 5};
  }
  const pc::StateSpec spec = sc.to_state_spec();
  const pc::PhotonStatistics p = pc::make_distribution(spec, sc.trunc_tol);
  std::vector<double> grid;
  if (sc.gamma_t_max > 0.0) {
    const int steps = sc.steps > 0 ? sc.steps : 100;
    for (int i = 0; i <= steps; ++i) grid.push_back(i * (sc.gamma_t_max / steps));
  } else if (sc.gamma_t >= 0.0) {
    grid.push_back(sc.gamma_t);
  } else {
    throw pc::InvalidParameter("counts: give --gamma-t or --gamma-t-max");
  }
  if (sc.k_list.empty()) sc.k_list = {0, 1, 2, 3, 4, 5};
  Output out(sc.out);
  pc::csvio::Writer w(out.stream());
  w.row({"gamma_t", "k", "P_sd", "P_ep"});
  for (double gt : grid)
    for (int k : sc.k_list)
      w.row({pc::csvio::fmt(gt), pc::csvio::fmt(k),
             pc::csvio::fmt(counts_value(spec, p, k, gt, pc::ModelKind::SD)),
             pc::csvio::fmt(counts_value(spec, p, k, gt, pc::ModelKind::EP))});
  return kExitOk;
}

int run_master(Scenario sc) {
  struct Curve {
    pc::StateSpec spec;
    double nbar0;
  };
  std::vector<Curve> curves;
  if (sc.figure == 4) {
    sc.tau_max = 20.0;
    sc.steps = 200;
    for (const std::string& fam : {"fock", "coherent", "thermal"})
      for (double nb : {1.0, 5.0, 10.0}) {
        if (fam == "fock")
          curves.push_back({pc::StateSpec::fock(static_cast<int>(nb)), nb});
        else if (fam == "coherent")
          curves.push_back({pc::StateSpec::coherent(nb), nb});
        else
          curves.push_back({pc::StateSpec::thermal(nb), nb});
      }
  } else if (sc.figure != 0) {
    throw pc::InvalidParameter("master: --figure must be 4");
  } else {
    const pc::StateSpec spec = sc.to_state_spec();
    curves.push_back({spec, spec.mean()});
  }
  const double tau_max = sc.tau_max > 0.0 ? sc.tau_max : 10.0;
  const int steps = sc.steps > 0 ? sc.steps : 100;
  Output out(sc.out);
  pc::csvio::Writer w(out.stream());
  w.row({"state", "nbar0", "tau", "nbar_ratio_ep", "nbar_ratio_sd"});
  for (const Curve& c : curves) {
    const double mean0 = c.spec.mean();
    for (int i = 0; i <= steps; ++i) {
      const double tau = i * (tau_max / steps);
      const double ep = pc::master::mean_photons(c.spec, tau, pc::ModelKind::EP);
      const double sd = pc::master::mean_photons(c.spec, tau, pc::ModelKind::SD);
      const double r_ep = mean0 > 0.0 ? ep / mean0 : 1.0;
      const double r_sd = mean0 > 0.0 ? sd / mean0 : 1.0;
      w.row({c.spec.name(), pc::csvio::fmt(c.nbar0), pc::csvio::fmt(tau), pc::csvio::fmt(r_ep),
             pc::csvio::fmt(r_sd)});
    }
  }
  return kExitOk;
}

int run_epd(const Scenario& sc) {
  if (sc.times.empty()) throw pc::InvalidParameter("epd: --times is required");
  const pc::StateSpec spec = sc.to_state_spec();
  const pc::PhotonStatistics p = pc::make_distribution(spec, sc.trunc_tol);
  pc::counting::CountTimes ct;
  ct.times = sc.times;
  const bool infinite = sc.t < 0.0;
  if (!infinite) ct.window = sc.t;
  ct.validate();
  std::vector<pc::ModelKind> models;
  if (sc.model == "sd" || sc.model == "both") models.push_back(pc::ModelKind::SD);
  if (sc.model == "ep" || sc.model == "both") models.push_back(pc::ModelKind::EP);
  if (models.empty()) throw pc::InvalidParameter("epd: --model must be sd, ep or both");
  std::string times_text;
  for (std::size_t i = 0; i < sc.times.size(); ++i) {
    if (i) times_text += ';';
    times_text += pc::csvio::fmt(sc.times[i]);
  }
  Output out(sc.out);
  pc::csvio::Writer w(out.stream());
  w.row({"model", "k", "window", "times", "epd_per_gamma_k", "epd_density", "markov_residual"});
  for (pc::ModelKind model : models) {
    const double dimless = infinite
                               ? pc::counting::epd_infinite_dimensionless(p, ct, sc.gamma, model)
                               : pc::counting::epd_dimensionless(p, ct, sc.gamma, model);
    const double density = pc::specfun::pow_int(sc.gamma, ct.k()) * dimless;
    double residual = std::numeric_limits<double>::quiet_NaN();
    if (p.at(ct.k()) > 0.0)
      residual = pc::counting::epd_markov_factorization_residual(p, ct, sc.gamma, model);
    w.row({pc::model_name(model), pc::csvio::fmt(ct.k()),
           infinite ? "inf" : pc::csvio::fmt(ct.window), times_text, pc::csvio::fmt(dimless),
           pc::csvio::fmt(density), pc::csvio::fmt(residual)});
  }
  return kExitOk;
}

int run_mc(const Scenario& sc) {
  if (sc.n_traj < 1) throw pc::InvalidParameter("mc: --n-traj must be >= 1");
  double t = sc.t;
  if (t < 0.0 && sc.gamma_t >= 0.0) t = sc.gamma_t / sc.gamma;
  if (t < 0.0) throw pc::InvalidParameter("mc: give --t or --gamma-t");
  const pc::StateSpec spec = sc.to_state_spec();
  const pc::PhotonStatistics p = pc::make_distribution(spec, sc.trunc_tol);
  std::vector<pc::ModelKind> models;
  if (sc.model == "sd" || sc.model == "both") models.push_back(pc::ModelKind::SD);
  if (sc.model == "ep" || sc.model == "both") models.push_back(pc::ModelKind::EP);
  if (models.empty()) throw pc::InvalidParameter("mc: --model must be sd, ep or both");
  Output out(sc.out);
  pc::csvio::Writer w(out.stream());
  w.row({"model", "k", "count", "frequency", "ci_low", "ci_high", "p_closed"});
  const double zq = 1.959963984540054;  // 95% normal quantile
  for (pc::ModelKind model : models) {
    const pc::mc::McSummary sum = pc::mc::run_batch(spec, t, sc.gamma, model, sc.n_traj, sc.seed,
                                                    sc.trunc_tol);
    const auto dist = pc::counting::count_distribution(p, t, sc.gamma, model);
    int k_hi = dist.k_max();
    if (!sum.histogram.empty()) k_hi = std::max(k_hi, sum.histogram.rbegin()->first);
    for (int k = 0; k <= k_hi; ++k) {
      const auto it = sum.histogram.find(k);
      const double count = it == sum.histogram.end() ? 0.0 : static_cast<double>(it->second);
      const double freq = count / static_cast<double>(sum.n_traj);
      const double se = std::sqrt(std::max(freq * (1.0 - freq), 0.0) /
                                  static_cast<double>(sum.n_traj));
      const double closed = k <= dist.k_max() ? dist.probs[static_cast<std::size_t>(k)] : 0.0;
      w.row({pc::model_name(model), pc::csvio::fmt(k), pc::csvio::fmt(count),
             pc::csvio::fmt(freq), pc::csvio::fmt(std::max(0.0, freq - zq * se)),
             pc::csvio::fmt(std::min(1.0, freq + zq * se)), pc::csvio::fmt(closed)});
    }
  }
  return kExitOk;
}

int run_check(const Scenario& sc, bool list_only, bool state_given) {
  if (list_only) {
    for (const auto& name : pc::checks::check_names()) std::cout << name << '\n';
    return kExitOk;
  }
  pc::checks::CheckOptions opt;
  if (state_given || sc.truncation > 0) opt.state = sc.to_state_spec();
  opt.truncation = sc.truncation;
  const auto results = pc::checks::run_checks(opt);
  bool all_pass = true;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS  " : "FAIL  ") << r.name << "  (" << r.detail << ")\n";
    all_pass = all_pass && r.pass;
  }
  std::cout << (all_pass ? "all checks passed" : "CHECK FAILURE") << '\n';
  return all_pass ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counting statistics of continuous photodetection: SD vs EP jump models"};
  app.require_subcommand(1);

  FlagState fs_dist, fs_counts, fs_master, fs_epd, fs_mc, fs_check;

  CLI::App* dist = app.add_subcommand("dist", "initial photon-number distribution (CSV n,p_n)");
  add_state_flags(dist, fs_dist);
  dist->add_option("--out", fs_dist.sc.out, "output path (default stdout)");
  dist->add_option("--scenario", fs_dist.scenario_path, "JSON scenario document");

  CLI::App* counts =
      app.add_subcommand("counts", "count probabilities P(k,t) on a gamma-t grid");
  add_state_flags(counts, fs_counts);
  counts->add_option("--model", fs_counts.sc.model, "sd|ep|both (columns carry both)");
  counts->add_option("--gamma-t", fs_counts.sc.gamma_t, "single dimensionless time");
  counts->add_option("--gamma-t-max", fs_counts.sc.gamma_t_max, "grid upper end");
  counts->add_option("--steps", fs_counts.sc.steps, "grid intervals");
  counts->add_option("--k-list", fs_counts.k_text, "count numbers, comma separated");
  counts->add_option("--figure", fs_counts.sc.figure, "canonical dataset: 1 fock, 2 coherent, 3 thermal");
  counts->add_option("--out", fs_counts.sc.out, "output path");
  counts->add_option("--scenario", fs_counts.scenario_path, "JSON scenario document");

  CLI::App* master = app.add_subcommand("master", "pre-selection mean photon decay vs tau");
  add_state_flags(master, fs_master);
  master->add_option("--model", fs_master.sc.model, "included for symmetry; both are emitted");
  master->add_option("--tau-max", fs_master.sc.tau_max, "grid upper end in slow time");
  master->add_option("--steps", fs_master.sc.steps, "grid intervals");
  master->add_option("--figure", fs_master.sc.figure, "canonical dataset: 4");
  master->add_option("--out", fs_master.sc.out, "output path");
  master->add_option("--scenario", fs_master.scenario_path, "JSON scenario document");

  CLI::App* epd = app.add_subcommand("epd", "timed-count density for an ordered time tuple");
  add_state_flags(epd, fs_epd);
  epd->add_option("--model", fs_epd.sc.model, "sd|ep|both");
  epd->add_option("--gamma", fs_epd.sc.gamma, "detector efficiency (1/time)");
  epd->add_option("--times", fs_epd.times_text, "jump times, comma separated");
  epd->add_option("--t", fs_epd.sc.t, "observation window (omit for infinite)");
  epd->add_option("--out", fs_epd.sc.out, "output path");
  epd->add_option("--scenario", fs_epd.scenario_path, "JSON scenario document");

  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo count histogram vs closed form");
  add_state_flags(mc, fs_mc);
  mc->add_option("--model", fs_mc.sc.model, "sd|ep|both");
  mc->add_option("--gamma", fs_mc.sc.gamma, "detector efficiency (1/time)");
  mc->add_option("--t", fs_mc.sc.t, "window (time units)");
  mc->add_option("--gamma-t", fs_mc.sc.gamma_t, "window as dimensionless gamma t");
  mc->add_option("--n-traj", fs_mc.sc.n_traj, "number of trajectories");
  mc->add_option("--seed", fs_mc.sc.seed, "base seed");
  mc->add_option("--out", fs_mc.sc.out, "output path");
  mc->add_option("--scenario", fs_mc.scenario_path, "JSON scenario document");

  CLI::App* check = app.add_subcommand("check", "run the cross-module invariant battery");
  add_state_flags(check, fs_check);
  check->add_option("--truncation", fs_check.sc.truncation, "force a truncation dimension");
  check->add_flag("--list", fs_check.list_only, "print invariant names without running");
  check->add_option("--scenario", fs_check.scenario_path, "JSON scenario document");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (dist->parsed()) {
      finalize_flags(fs_dist);
      return run_dist(merge_scenario(fs_dist, "dist", dist));
    }
    if (counts->parsed()) {
      finalize_flags(fs_counts);
      return run_counts(merge_scenario(fs_counts, "counts", counts));
    }
    if (master->parsed()) {
      finalize_flags(fs_master);
      return run_master(merge_scenario(fs_master, "master", master));
    }
    if (epd->parsed()) {
      finalize_flags(fs_epd);
      return run_epd(merge_scenario(fs_epd, "epd", epd));
    }
    if (mc->parsed()) {
      finalize_flags(fs_mc);
      return run_mc(merge_scenario(fs_mc, "mc", mc));
    }
    if (check->parsed()) {
      finalize_flags(fs_check);
      const bool state_given = check->get_option_no_throw("--state") != nullptr &&
                               check->get_option_no_throw("--state")->count() > 0;
      return run_check(merge_scenario(fs_check, "check", check), fs_check.list_only, state_given);
    }
  } catch (const pc::InvalidParameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const pc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
