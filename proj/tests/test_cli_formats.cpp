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

#include <catch2/catch_amalgamated.hpp>
#include <sstream>

#include "photocount/checks.hpp"
#include "photocount/csv.hpp"
#include "photocount/scenario.hpp"

using namespace photocount;

TEST_CASE("floats print with 12 significant digits") {
  CHECK(csvio::fmt(1.0) == "1");
  CHECK(csvio::fmt(1.0 / 3.0) == "0.333333333333");
  CHECK(csvio::fmt(0.16666666666666666) == "0.166666666667");
  CHECK(csvio::fmt(1.23456789e-13) == "1.23456789e-13");
}

TEST_CASE("csv writer quotes only when needed and ends rows with LF") {
  std::ostringstream os;
  csvio::Writer w(os);
  w.row({"a", "b,c", "d\"e"});
  CHECK(os.str() == "a,\"b,c\",\"d\"\"e\"\n");
}

TEST_CASE("scenario documents parse strictly") {
  {
    std::istringstream in(R"({"schema": 1, "state": "thermal", "nbar": 5.0})");
    const cli::Scenario s = cli::load_scenario(in, "dist");
    CHECK(s.state == "thermal");
    CHECK(s.nbar == 5.0);
  }
  {
    std::istringstream in(R"({"state": "thermal"})");
    CHECK_THROWS_AS(cli::load_scenario(in, "dist"), InvalidParameter);
  }
  {
    std::istringstream in(R"({"schema": 2, "state": "thermal"})");
    CHECK_THROWS_AS(cli::load_scenario(in, "dist"), InvalidParameter);
  }
  {
    std::istringstream in(R"({"schema": 1, "not_a_key": true})");
    CHECK_THROWS_AS(cli::load_scenario(in, "dist"), InvalidParameter);
  }
  {
    // gamma_t belongs to counts, not dist
    std::istringstream in(R"({"schema": 1, "gamma_t": 1.0})");
    CHECK_THROWS_AS(cli::load_scenario(in, "dist"), InvalidParameter);
  }
  {
    std::istringstream in(R"({"schema": 1, "z": [0.4, 0.3], "state": "phase"})");
    const cli::Scenario s = cli::load_scenario(in, "dist");
    CHECK(s.z == std::complex<double>(0.4, 0.3));
    CHECK(s.to_state_spec().family == StateFamily::CoherentPhase);
  }
  {
    std::istringstream in("{]");
    CHECK_THROWS_AS(cli::load_scenario(in, "dist"), InvalidParameter);
  }
}

TEST_CASE("scenario state mapping covers every family") {
  cli::Scenario s;
  s.state = "fock";
  s.m = 3;
  CHECK(s.to_state_spec().family == StateFamily::Fock);
  s.state = "negbinomial";
  CHECK(s.to_state_spec().family == StateFamily::NegBinomial);
  s.state = "custom";
  s.custom_p = {0.5, 0.5};
  CHECK(s.to_state_spec().family == StateFamily::Custom);
  s.state = "nonsense";
  CHECK_THROWS_AS(s.to_state_spec(), InvalidParameter);
}

TEST_CASE("invariant battery passes by default and flags forced truncation") {
  const auto results = checks::run_checks();
  for (const auto& r : results) {
    INFO(r.name << ": " << r.detail);
    CHECK(r.pass);
  }
  checks::CheckOptions opt;
  opt.state = StateSpec::thermal(5.0);
  opt.truncation = 3;
  const auto forced = checks::run_checks(opt);
  bool truncation_failed = false;
  for (const auto& r : forced)
    if (r.name == "truncation_budget") truncation_failed = !r.pass;
  CHECK(truncation_failed);
  CHECK(checks::check_names().size() == results.size());
}
