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

#include "photocount/states.hpp"

using namespace photocount;

TEST_CASE("fock distribution is a unit mass") {
  const PhotonStatistics p = make_distribution(StateSpec::fock(5));
  REQUIRE(p.trunc_dim() == 6);
  CHECK(p.at(5) == 1.0);
  CHECK(p.tail_mass == 0.0);
  for (int n = 0; n < 5; ++n) CHECK(p.at(n) == 0.0);
}

TEST_CASE("thermal distribution matches the geometric formula") {
  const PhotonStatistics p = make_distribution(StateSpec::thermal(5.0));
  CHECK(p.at(0) == Catch::Approx(1.0 / 6.0).epsilon(1e-14));
  for (int n = 0; n <= 20; ++n)
    CHECK(p.at(n) == Catch::Approx(std::pow(5.0, n) / std::pow(6.0, n + 1)).epsilon(1e-12));
  CHECK(p.tail_mass <= 1e-12);
  CHECK(p.tail_mass > 0.0);
}

TEST_CASE("negative binomial at mu = 1 equals thermal") {
  const PhotonStatistics nb = make_distribution(StateSpec::neg_binomial(1.0, 5.0));
  const PhotonStatistics th = make_distribution(StateSpec::thermal(5.0));
  const int top = std::min(nb.trunc_dim(), th.trunc_dim());
  for (int n = 0; n < top; ++n) CHECK(nb.at(n) == Catch::Approx(th.at(n)).margin(1e-14));
}

TEST_CASE("negative binomial at huge mu approaches the Poisson distribution") {
  const PhotonStatistics nb = make_distribution(StateSpec::neg_binomial(1e6, 4.0));
  const PhotonStatistics co = make_distribution(StateSpec::coherent(4.0));
  for (int n = 0; n < 25; ++n) CHECK(std::fabs(nb.at(n) - co.at(n)) < 1e-4);
}

TEST_CASE("coherent phase distribution equals the matching thermal one") {
  const std::complex<double> z{0.5, 0.35};
  const double r = std::norm(z);
  const PhotonStatistics ph = make_distribution(StateSpec::coherent_phase(z));
  const PhotonStatistics th = make_distribution(StateSpec::thermal(r / (1.0 - r)));
  const int top = std::min(ph.trunc_dim(), th.trunc_dim());
  REQUIRE(top > 10);
  for (int n = 0; n < top; ++n) CHECK(ph.at(n) == Catch::Approx(th.at(n)).margin(1e-12));
}

TEST_CASE("every family conserves probability and hits its mean") {
  const std::vector<StateSpec> specs = {
      StateSpec::fock(7),          StateSpec::coherent(0.5),   StateSpec::coherent(5.0),
      StateSpec::thermal(0.5),     StateSpec::thermal(10.0),   StateSpec::neg_binomial(2.0, 3.0),
      StateSpec::binomial(5, 2.0), StateSpec::binomial(12, 12.0),
      StateSpec::coherent_phase({0.6, 0.2}), StateSpec::custom({0.25, 0.5, 0.25})};
  for (const auto& spec : specs) {
    const PhotonStatistics p = make_distribution(spec);
    for (double v : p.p) CHECK(v >= 0.0);
    CHECK(p.support_sum() + p.tail_mass == Catch::Approx(1.0).margin(1e-12));
    CHECK(p.tail_mass <= p.tail_tol);
    CHECK(p.mean() == Catch::Approx(spec.mean()).margin(1e-9));
  }
}

TEST_CASE("mean and Mandel q per family") {
  const auto co = mean_and_q(make_distribution(StateSpec::coherent(5.0)));
  CHECK(co.nbar == Catch::Approx(5.0).margin(1e-9));
  CHECK(co.q == Catch::Approx(0.0).margin(1e-9));
  const auto fo = mean_and_q(make_distribution(StateSpec::fock(5)));
  CHECK(fo.nbar == 5.0);
  CHECK(fo.q == -1.0);
  const auto th = mean_and_q(make_distribution(StateSpec::thermal(5.0)));
  CHECK(th.nbar == Catch::Approx(5.0).margin(1e-9));
  CHECK(th.q == Catch::Approx(5.0).margin(1e-8));
  const auto vac = mean_and_q(make_distribution(StateSpec::fock(0)));
  CHECK(vac.nbar == 0.0);
  CHECK(vac.q == 0.0);
}

TEST_CASE("partial sums use the exact complement") {
  const PhotonStatistics fock5 = make_distribution(StateSpec::fock(5));
  CHECK(partial_sums(fock5, 4).a_k == 0.0);
  CHECK(partial_sums(fock5, 4).z_k_plus_1 == 1.0);
  CHECK(partial_sums(fock5, 5).a_k == 1.0);
  CHECK(partial_sums(fock5, 5).z_k_plus_1 == 0.0);
  const PhotonStatistics th = make_distribution(StateSpec::thermal(5.0));
  CHECK(partial_sums(th, 0).a_k == Catch::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(partial_sums(th, 0).z_k_plus_1 == Catch::Approx(5.0 / 6.0).epsilon(1e-14));
  // beyond the support the complement is exactly the tail
  CHECK(partial_sums(th, th.trunc_dim() + 5).z_k_plus_1 ==
        Catch::Approx(th.tail_mass).margin(1e-15));
}

TEST_CASE("invalid parameters are rejected with useful messages") {
  CHECK_THROWS_AS(make_distribution(StateSpec::coherent_phase({1.2, 0.0})), InvalidParameter);
  CHECK_THROWS_AS(make_distribution(StateSpec::neg_binomial(0.0, 2.0)), InvalidParameter);
  CHECK_THROWS_AS(make_distribution(StateSpec::binomial(5, 6.0)), InvalidParameter);
  CHECK_THROWS_AS(make_distribution(StateSpec::thermal(-0.1)), InvalidParameter);
  try {
    make_distribution(StateSpec::custom({0.5, -0.1, 0.6}));
    FAIL("expected InvalidParameter");
  } catch (const InvalidParameter& e) {
    CHECK(std::string(e.what()).find("index 1") != std::string::npos);
  }
  CHECK_THROWS_AS(make_distribution(StateSpec::custom({0.5, 0.4})), InvalidParameter);
}

TEST_CASE("density matrices: pure families are rank one, mixed are diagonal") {
  const DensityMatrix fock2 = make_density_matrix(StateSpec::fock(2));
  CHECK(fock2.rho(2, 2) == std::complex<double>(1.0, 0.0));
  CHECK(fock2.rho.cwiseAbs().sum() == 1.0);

  const DensityMatrix coh = make_density_matrix(StateSpec::coherent(1.0));
  // c_n = e^{-nbar/2} alpha^n / sqrt(n!) with alpha = 1
  CHECK(coh.rho(0, 1).real() == Catch::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(coh.rho(0, 1).imag() == 0.0);
  require_valid(coh);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(coh.rho, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().maxCoeff() == Catch::Approx(1.0).margin(1e-10));

  const DensityMatrix th = make_density_matrix(StateSpec::thermal(5.0));
  const PhotonStatistics thp = make_distribution(StateSpec::thermal(5.0));
  for (int n = 0; n < th.dim(); ++n) CHECK(th.rho(n, n).real() == thp.at(n));
  CHECK(th.rho.imag().cwiseAbs().maxCoeff() == 0.0);
  require_valid(th);

  const DensityMatrix ph = make_density_matrix(StateSpec::coherent_phase({0.4, 0.3}));
  require_valid(ph);
  CHECK(std::abs(ph.rho(1, 2)) > 0.0);  // genuinely off-diagonal
}

TEST_CASE("forced truncation reports the lost tail") {
  const PhotonStatistics cut = make_distribution_truncated(StateSpec::thermal(5.0), 3);
  CHECK(cut.trunc_dim() == 3);
  const double expect_tail = std::pow(5.0 / 6.0, 3);
  CHECK(cut.tail_mass == Catch::Approx(expect_tail).epsilon(1e-12));
}
