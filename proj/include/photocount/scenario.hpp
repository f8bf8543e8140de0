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

#ifndef PHOTOCOUNT_SCENARIO_HPP
#define PHOTOCOUNT_SCENARIO_HPP

#include <complex>
#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "photocount/errors.hpp"
#include "photocount/states.hpp"

// Declarative run description shared by the CLI subcommands. Scenarios load
// from a strict versioned JSON document ("schema": 1, unknown keys rejected)
// or from command-line flags; flags win over file values.

namespace photocount::cli {

struct Scenario {
  std::string model = "both";  // sd | ep | both
  std::string state = "thermal";
  int m = 5;
  double nbar = 5.0;
  double mu = 1.0;
  int big_m = 5;
  std::complex<double> z{0.5, 0.0};
  std::vector<double> custom_p;
  double gamma = 1.0;
  double t = -1.0;
  double gamma_t = -1.0;
  double gamma_t_max = -1.0;
  double tau_max = -1.0;
  int steps = -1;
  std::vector<int> k_list;
  std::vector<double> times;
  double trunc_tol = 1e-12;
  std::uint64_t seed = 1;
  std::uint64_t n_traj = 0;
  std::string out;
  int figure = 0;
  int truncation = 0;

  StateSpec to_state_spec() const {
    if (state == "fock") return StateSpec::fock(m);
    if (state == "coherent") return StateSpec::coherent(nbar);
    if (state == "thermal") return StateSpec::thermal(nbar);
    if (state == "binomial") return StateSpec::binomial(big_m, nbar);
    if (state == "negbinomial") return StateSpec::neg_binomial(mu, nbar);
    if (state == "phase") return StateSpec::coherent_phase(z);
    if (state == "custom") return StateSpec::custom(custom_p);
    throw InvalidParameter("unknown state family '" + state + "'");
  }
};

namespace detail {

inline const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"dist", {"schema", "state", "m", "nbar", "mu", "M", "z", "p", "trunc_tol", "out"}},
      {"counts",
       {"schema", "model", "state", "m", "nbar", "mu", "M", "z", "p", "gamma", "gamma_t",
        "gamma_t_max", "steps", "k_list", "trunc_tol", "out", "figure"}},
      {"master",
       {"schema", "model", "state", "m", "nbar", "mu", "M", "z", "p", "tau_max", "steps",
        "trunc_tol", "out", "figure"}},
      {"epd",
       {"schema", "model", "state", "m", "nbar", "mu", "M", "z", "p", "gamma", "times", "t",
        "trunc_tol", "out"}},
      {"mc",
       {"schema", "model", "state", "m", "nbar", "mu", "M", "z", "p", "gamma", "t", "gamma_t",
        "n_traj", "seed", "trunc_tol", "out"}},
      {"check", {"schema", "state", "m", "nbar", "mu", "M", "z", "p", "truncation", "trunc_tol"}},
  };
  return keys;
}

}  // namespace detail

/// Parse a scenario document for `command`. Requires "schema": 1 and rejects
/// keys outside the command's vocabulary.
inline Scenario load_scenario(std::istream& in, const std::string& command) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("scenario: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidParameter("scenario: top level must be an object");
  const auto& vocab = detail::allowed_keys();
  const auto it = vocab.find(command);
  if (it == vocab.end()) throw InvalidParameter("scenario: unknown command '" + command + "'");
  if (!j.contains("schema") || !j["schema"].is_number_integer() || j["schema"].get<int>() != 1)
    throw InvalidParameter("scenario: missing or unsupported \"schema\" (expected 1)");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!it->second.count(key))
      throw InvalidParameter("scenario: unknown key \"" + key + "\" for command '" + command +
                             "'");
  }
  Scenario s;
  try {
    if (j.contains("model")) s.model = j["model"].get<std::string>();
    if (j.contains("state")) s.state = j["state"].get<std::string>();
    if (j.contains("m")) s.m = j["m"].get<int>();
    if (j.contains("nbar")) s.nbar = j["nbar"].get<double>();
    if (j.contains("mu")) s.mu = j["mu"].get<double>();
    if (j.contains("M")) s.big_m = j["M"].get<int>();
    if (j.contains("z")) {
      const auto& z = j["z"];
      if (z.is_number()) {
        s.z = {z.get<double>(), 0.0};
      } else if (z.is_array() && z.size() == 2) {
        s.z = {z[0].get<double>(), z[1].get<double>()};
      } else {
        throw InvalidParameter("scenario: \"z\" must be a number or [re, im]");
      }
    }
    if (j.contains("p")) s.custom_p = j["p"].get<std::vector<double>>();
    if (j.contains("gamma")) s.gamma = j["gamma"].get<double>();
    if (j.contains("t")) s.t = j["t"].get<double>();
    if (j.contains("gamma_t")) s.gamma_t = j["gamma_t"].get<double>();
    if (j.contains("gamma_t_max")) s.gamma_t_max = j["gamma_t_max"].get<double>();
    if (j.contains("tau_max")) s.tau_max = j["tau_max"].get<double>();
    if (j.contains("steps")) s.steps = j["steps"].get<int>();
    if (j.contains("k_list")) s.k_list = j["k_list"].get<std::vector<int>>();
    if (j.contains("times")) s.times = j["times"].get<std::vector<double>>();
    if (j.contains("trunc_tol")) s.trunc_tol = j["trunc_tol"].get<double>();
    if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("n_traj")) s.n_traj = j["n_traj"].get<std::uint64_t>();
    if (j.contains("out")) s.out = j["out"].get<std::string>();
    if (j.contains("figure")) s.figure = j["figure"].get<int>();
    if (j.contains("truncation")) s.truncation = j["truncation"].get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("scenario: type error: ") + e.what());
  }
  return s;
}

}  // namespace photocount::cli

#endif  // PHOTOCOUNT_SCENARIO_HPP
