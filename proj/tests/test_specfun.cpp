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

#include "photocount/rng.hpp"
#include "photocount/specfun.hpp"

using namespace photocount;
namespace sf = photocount::specfun;

namespace {

// Independent oracles, deliberately simple-minded: extended-precision direct
// summation of the defining series.

long double kummer_oracle(long double a, long double b, long double x, int terms = 200) {
  long double sum = 1.0L, term = 1.0L;
  for (int m = 0; m < terms; ++m) {
    term *= (a + m) * x / ((b + m) * (m + 1));
    sum += term;
  }
  return sum;
}

long double bessel_oracle(int n, long double x, int terms = 60) {
  long double nf = 1.0L;
  for (int i = 2; i <= n; ++i) nf *= i;
  long double term = powl(0.5L * x, n) / nf;
  long double sum = term;
  for (int k = 0; k < terms; ++k) {
    term *= 0.25L * x * x / ((k + 1.0L) * (k + n + 1.0L));
    sum += term;
  }
  return sum;
}

// Explicit finite-sum form L_n^a(x) = sum_i (-1)^i C(n+a, n-i) x^i / i!.
double laguerre_oracle(int n, int a, double x) {
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double binom = std::exp(sf::log_binomial(n + a, n - i));
    sum += ((i % 2) ? -1.0 : 1.0) * binom * std::pow(x, i) / sf::factorial(i);
  }
  return sum;
}

}  // namespace

TEST_CASE("phi_k pinned values") {
  CHECK(sf::phi_k(0, 1.0) == Catch::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
  CHECK(sf::phi_k(4, 0.0) == 0.0);
  // five-term complement oracle
  const double direct = 1.0 - std::exp(-1.0) * (1.0 + 1.0 + 0.5 + 1.0 / 6.0 + 1.0 / 24.0);
  CHECK(sf::phi_k(4, 1.0) == Catch::Approx(direct).margin(1e-15));
  CHECK(sf::phi_k(4, 1.0) == Catch::Approx(0.00365984682734366).epsilon(1e-12));
}

TEST_CASE("phi_k tail branch is accurate where the complement cancels") {
  // k = 40, x = 2: complement sum is 1 - O(1e-34); the tail branch must
  // resolve it. Compare against an extended-precision tail sum.
  long double term = 1.0L, sum = 0.0L;
  for (int n = 1; n <= 41; ++n) term *= 2.0L / n;
  for (int j = 0; j < 80; ++j) {
    sum += term;
    term *= 2.0L / (42 + j);
  }
  const double expect = static_cast<double>(expl(-2.0L) * sum);
  CHECK(sf::phi_k(40, 2.0) == Catch::Approx(expect).epsilon(1e-12));
}

TEST_CASE("phi_k is nondecreasing in x and nonincreasing in k") {
  for (int k = 0; k <= 30; k += 3) {
    double prev = -1.0;
    for (double x = 0.0; x <= 20.0; x += 0.5) {
      const double v = sf::phi_k(k, x);
      CHECK(v >= prev - 1e-15);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      prev = v;
    }
  }
  for (double x : {0.3, 1.0, 4.0, 12.0, 20.0}) {
    double prev = 2.0;
    for (int k = 0; k <= 30; ++k) {
      const double v = sf::phi_k(k, x);
      CHECK(v <= prev + 1e-15);
      prev = v;
    }
  }
}

TEST_CASE("kummer_m pinned values") {
  CHECK(sf::kummer_m(2.5, 3.0, 0.0) == 1.0);
  CHECK(sf::kummer_m(1.0, 1.0, 0.7) == Catch::Approx(std::exp(0.7)).epsilon(1e-13));
  const double expect = static_cast<double>(kummer_oracle(2.0L, 3.0L, 1.5L));
  CHECK(sf::kummer_m(2.0, 3.0, 1.5) == Catch::Approx(expect).epsilon(1e-13));
}

TEST_CASE("kummer_m rejects nonpositive integer b and exhausted budgets") {
  CHECK_THROWS_AS(sf::kummer_m(1.0, 0.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(sf::kummer_m(1.0, -3.0, 1.0), InvalidParameter);
  sf::SeriesControl tight;
  tight.max_terms = 3;
  CHECK_THROWS_AS(sf::kummer_m(2.0, 3.0, 8.0, tight), NonConvergent);
}

TEST_CASE("kummer transform identity on a random grid") {
  rng::Xoshiro256StarStar gen(20260809);
  for (int i = 0; i < 200; ++i) {
    const double a = 0.2 + 5.0 * gen.uniform01();
    const double b = 1.0 + 5.0 * gen.uniform01();
    const double x = -8.0 + 16.0 * gen.uniform01();
    const double lhs = sf::kummer_m(a, b, x);
    const double rhs = std::exp(x) * sf::kummer_m(b - a, b, -x);
    CHECK(std::fabs(lhs - rhs) <= 10.0 * 1e-13 * std::fabs(lhs) + 1e-15);
  }
}

TEST_CASE("laguerre_assoc pinned values") {
  CHECK(sf::laguerre_assoc(0, 3, 2.7) == 1.0);
  CHECK(sf::laguerre_assoc(1, 2, 0.5) == Catch::Approx(2.5).epsilon(1e-15));
  CHECK(sf::laguerre_assoc(3, 1, 1.2) ==
        Catch::Approx(laguerre_oracle(3, 1, 1.2)).epsilon(1e-13));
}

TEST_CASE("laguerre special case of the Kummer series") {
  // Phi(-n; a+1; x) = n! L_n^a(x) / (a+1)_n
  for (int n = 0; n <= 6; ++n) {
    for (int a = 0; a <= 3; ++a) {
      for (double x : {0.2, 1.0, 3.5}) {
        double poch = 1.0;
        for (int i = 0; i < n; ++i) poch *= (a + 1.0 + i);
        const double lhs = sf::kummer_m(-n, a + 1.0, x);
        const double rhs = sf::factorial(n) * sf::laguerre_assoc(n, a, x) / poch;
        CHECK(lhs == Catch::Approx(rhs).margin(1e-12));
      }
    }
  }
}

TEST_CASE("bessel_i pinned values") {
  CHECK(sf::bessel_i(0, 0.0) == 1.0);
  CHECK(sf::bessel_i(3, 0.0) == 0.0);
  const double expect = static_cast<double>(bessel_oracle(1, 2.0L));
  CHECK(sf::bessel_i(1, 2.0) == Catch::Approx(expect).epsilon(1e-13));
  CHECK(sf::bessel_i(1, 2.0) == Catch::Approx(1.5906368546373288).epsilon(1e-12));
}

TEST_CASE("bessel generating identity") {
  for (double x : {0.5, 2.0, 5.0, 10.0}) {
    sf::KahanAccumulator s;
    s.add(sf::bessel_i(0, x));
    for (int n = 1; n <= 60; ++n) s.add(2.0 * sf::bessel_i(n, x));
    CHECK(s.value() == Catch::Approx(std::exp(x)).epsilon(1e-12));
  }
}

TEST_CASE("log_factorial pinned values") {
  CHECK(sf::log_factorial(0) == 0.0);
  CHECK(sf::log_factorial(5) == Catch::Approx(std::log(120.0)).epsilon(1e-15));
  long double acc = 0.0L;
  for (int i = 2; i <= 100; ++i) acc += logl(static_cast<long double>(i));
  CHECK(sf::log_factorial(100) == Catch::Approx(static_cast<double>(acc)).epsilon(1e-13));
  // Stirling branch boundary stays smooth
  for (int n = 18; n <= 40; ++n) {
    long double a = 0.0L;
    for (int i = 2; i <= n; ++i) a += logl(static_cast<long double>(i));
    CHECK(sf::log_factorial(n) == Catch::Approx(static_cast<double>(a)).epsilon(1e-12));
  }
}

TEST_CASE("poisson_weight matches the direct expression and the log route") {
  for (int k : {0, 1, 4, 19}) {
    for (double x : {0.3, 1.0, 7.5}) {
      CHECK(sf::poisson_weight(k, x) ==
            Catch::Approx(std::exp(-x) * std::pow(x, k) / sf::factorial(k)).epsilon(1e-14));
    }
  }
  CHECK(sf::poisson_weight(150, 120.0) ==
        Catch::Approx(std::exp(-120.0 + 150.0 * std::log(120.0) - sf::log_factorial(150)))
            .epsilon(1e-13));
  CHECK(sf::poisson_weight(0, 0.0) == 1.0);
  CHECK(sf::poisson_weight(3, 0.0) == 0.0);
}

TEST_CASE("domain guards") {
  CHECK_THROWS_AS(sf::phi_k(-1, 1.0), InvalidParameter);
  CHECK_THROWS_AS(sf::phi_k(2, -0.5), InvalidParameter);
  CHECK_THROWS_AS(sf::bessel_i(-1, 1.0), InvalidParameter);
  CHECK_THROWS_AS(sf::laguerre_assoc(-2, 0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(sf::log_factorial(-1), InvalidParameter);
}
