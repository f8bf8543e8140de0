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
#include <cmath>
#include <vector>

#include "photocount/counting.hpp"
#include "photocount/master.hpp"
#include "photocount/montecarlo.hpp"
#include "photocount/states.hpp"

using namespace photocount;

TEST_CASE("records are deterministic in the seed") {
  const StateSpec spec = StateSpec::thermal(5.0);
  const mc::CountRecord a = mc::sample_record(spec, 2.0, 1.0, ModelKind::SD, 12345);
  const mc::CountRecord b = mc::sample_record(spec, 2.0, 1.0, ModelKind::SD, 12345);
  REQUIRE(a.jump_times.size() == b.jump_times.size());
  for (std::size_t i = 0; i < a.jump_times.size(); ++i)
    CHECK(a.jump_times[i] == b.jump_times[i]);
  const mc::McSummary h1 = mc::run_batch(spec, 1.0, 1.0, ModelKind::EP, 500, 42);
  const mc::McSummary h2 = mc::run_batch(spec, 1.0, 1.0, ModelKind::EP, 500, 42);
  CHECK(h1.histogram == h2.histogram);
  const mc::McSummary h3 = mc::run_batch(spec, 1.0, 1.0, ModelKind::EP, 500, 43);
  CHECK(h1.histogram != h3.histogram);
}

TEST_CASE("vacuum never clicks") {
  for (ModelKind model : {ModelKind::SD, ModelKind::EP}) {
    const mc::CountRecord rec = mc::sample_record(StateSpec::fock(0), 50.0, 1.0, model, 7);
    CHECK(rec.jump_times.empty());
  }
}

TEST_CASE("EP model counts a number state photon by photon") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const mc::CountRecord rec = mc::sample_record(StateSpec::fock(5), 80.0, 1.0,
                                                  ModelKind::EP, 1000 + seed);
    CHECK(rec.jump_times.size() == 5);
    for (std::size_t i = 1; i < rec.jump_times.size(); ++i)
      CHECK(rec.jump_times[i] > rec.jump_times[i - 1]);
  }
}

TEST_CASE("EP count number never exceeds the initial support") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const mc::CountRecord rec =
        mc::sample_record(StateSpec::binomial(4, 2.5), 80.0, 1.0, ModelKind::EP, seed);
    CHECK(rec.jump_times.size() <= 4);
  }
}

TEST_CASE("single-trajectory batch") {
  const mc::McSummary s = mc::run_batch(StateSpec::thermal(1.0), 1.0, 1.0, ModelKind::EP, 1, 5);
  CHECK(s.n_traj == 1);
  std::uint64_t total = 0;
  for (const auto& [k, c] : s.histogram) total += c;
  CHECK(total == 1);
}

TEST_CASE("empirical count histograms track the closed forms") {
  const std::uint64_t n = 20000;
  for (ModelKind model : {ModelKind::SD, ModelKind::EP}) {
    for (const StateSpec& spec : {StateSpec::fock(5), StateSpec::thermal(5.0)}) {
      const PhotonStatistics p = make_distribution(spec);
      const mc::McSummary sum = mc::run_batch(spec, 1.0, 1.0, model, n, 4242);
      for (int k = 0; k <= 8; ++k) {
        const double expect = counting::prob_counts(p, k, 1.0, 1.0, model);
        if (expect * n < 50.0) continue;
        const auto it = sum.histogram.find(k);
        const double freq =
            (it == sum.histogram.end() ? 0.0 : static_cast<double>(it->second)) / n;
        const double se = std::sqrt(expect * (1.0 - expect) / n);
        CHECK(std::fabs(freq - expect) < 4.0 * se);
      }
    }
  }
}

TEST_CASE("pure coherent states run through the matrix representation") {
  // same physics as the diagonal path: count law only sees the diagonal
  const StateSpec spec = StateSpec::coherent(3.0);
  const PhotonStatistics p = make_distribution(spec);
  const std::uint64_t n = 8000;
  const mc::McSummary sum = mc::run_batch(spec, 1.0, 1.0, ModelKind::EP, n, 99);
  for (int k = 0; k <= 5; ++k) {
    const double expect = counting::prob_counts(p, k, 1.0, 1.0, ModelKind::EP);
    if (expect * n < 50.0) continue;
    const auto it = sum.histogram.find(k);
    const double freq = (it == sum.histogram.end() ? 0.0 : static_cast<double>(it->second)) / n;
    CHECK(std::fabs(freq - expect) < 4.0 * std::sqrt(expect * (1.0 - expect) / n));
  }
}

TEST_CASE("averaged conditioned states reproduce the preselection law") {
  const std::uint64_t n = 10000;
  for (const StateSpec& spec : {StateSpec::fock(5), StateSpec::thermal(2.0)}) {
    const PhotonStatistics p0 = make_distribution(spec);
    std::vector<double> mean(static_cast<std::size_t>(p0.trunc_dim()), 0.0);
    std::vector<double> sq(mean.size(), 0.0);
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto [rec, diag] =
          mc::sample_trajectory(spec, 1.0, 1.0, ModelKind::EP, rng::derive_stream_seed(777, i));
      for (std::size_t j = 0; j < mean.size(); ++j) {
        mean[j] += diag[j];
        sq[j] += diag[j] * diag[j];
      }
    }
    for (std::size_t j = 0; j < mean.size(); ++j) {
      mean[j] /= static_cast<double>(n);
      const double var = std::max(0.0, sq[j] / static_cast<double>(n) - mean[j] * mean[j]);
      const double se = std::sqrt(var / static_cast<double>(n));
      const double analytic = master::preselect_pn(p0, static_cast<int>(j), 1.0);
      CHECK(std::fabs(mean[j] - analytic) <= 3.0 * se + 1e-9);
    }
  }
}

TEST_CASE("SD averaged conditioned mean follows the exponential decay") {
  const std::uint64_t n = 10000;
  const StateSpec spec = StateSpec::thermal(2.0);
  double mean = 0.0, sq = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto [rec, diag] =
        mc::sample_trajectory(spec, 1.0, 1.0, ModelKind::SD, rng::derive_stream_seed(31, i));
    double m = 0.0;
    for (std::size_t j = 0; j < diag.size(); ++j) m += static_cast<double>(j) * diag[j];
    mean += m;
    sq += m * m;
  }
  mean /= static_cast<double>(n);
  const double se = std::sqrt((sq / n - mean * mean) / static_cast<double>(n));
  CHECK(std::fabs(mean - 2.0 * std::exp(-1.0)) <= 3.0 * se);
}

TEST_CASE("timed-density transforms pass the per-coordinate KS gate") {
  const StateSpec th = StateSpec::thermal(5.0);
  for (auto [model, k, seed] :
       {std::tuple{ModelKind::EP, 1, std::uint64_t{2026}},
        std::tuple{ModelKind::EP, 2, std::uint64_t{2027}},
        std::tuple{ModelKind::SD, 2, std::uint64_t{2028}}}) {
    const mc::KsCheckResult r = mc::ks_like_epd_check(th, 1.0, model, k, 4000, seed);
    CHECK(r.n_conditioned >= 100);
    CHECK(r.max_distance < 4.0 / std::sqrt(static_cast<double>(r.n_conditioned)));
  }
}

TEST_CASE("conditioned sample starvation raises InsufficientSamples") {
  CHECK_THROWS_AS(mc::ks_like_epd_check(StateSpec::fock(3), 1.0, ModelKind::EP, 9, 200, 1),
                  InsufficientSamples);
}

TEST_CASE("over-aggressive truncation is detected") {
  CHECK_THROWS_AS(mc::sample_record(StateSpec::thermal(5.0), 1.0, 1.0, ModelKind::EP, 3, 1e-3),
                  TruncationExhausted);
}
