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

#ifndef PHOTOCOUNT_SPECFUN_HPP
#define PHOTOCOUNT_SPECFUN_HPP

#include <array>
#include <cmath>
#include <cstdlib>

#include "photocount/errors.hpp"

// Self-contained special-function kernel: truncated-Poisson tails, Kummer's
// confluent hypergeometric series, associated Laguerre polynomials, modified
// Bessel functions of integer order, and log-factorials. All series converge
// unconditionally on the parameter ranges this library works with (x up to a
// few hundred); large-argument asymptotics live with their consumers.

namespace photocount::specfun {

/// Termination policy for the series in this module.
struct SeriesControl {
  double rel_tol = 1e-13;  ///< relative tolerance on the accumulated sum
  int max_terms = 10000;   ///< term budget; NonConvergent when exhausted
};

/// Compensated (Kahan) accumulator.
class KahanAccumulator {
 public:
  void add(double x) {
    const double y = x - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// n! as a double. Exact for n <= 22; representable up to n = 170.
inline double factorial(int n) {
  if (n < 0) throw InvalidParameter("factorial: negative argument");
  if (n > 170) throw InvalidParameter("factorial: overflows double, use log_factorial");
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// ln(n!). Table lookup for n <= 20, Stirling series beyond (rel err < 1e-12).
inline double log_factorial(int n) {
  if (n < 0) throw InvalidParameter("log_factorial: negative argument");
  static const std::array<double, 21> small = [] {
    std::array<double, 21> t{};
    double f = 1.0;
    t[0] = 0.0;
    for (int i = 1; i <= 20; ++i) {
      f *= i;
      t[static_cast<std::size_t>(i)] = std::log(f);
    }
    return t;
  }();
  if (n <= 20) return small[static_cast<std::size_t>(n)];
  const double x = static_cast<double>(n);
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double half_log_two_pi = 0.918938533204672741780329736406;
  const double series =
      inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0))));
  return (x + 0.5) * std::log(x) - x + half_log_two_pi + series;
}

/// ln C(n, k).
inline double log_binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) throw InvalidParameter("log_binomial: need 0 <= k <= n");
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

/// e^{-x} x^k / k!  (the Poisson weight), stable for any k, x >= 0.
inline double poisson_weight(int k, double x) {
  if (k < 0) throw InvalidParameter("poisson_weight: negative k");
  if (!(x >= 0.0)) throw InvalidParameter("poisson_weight: negative x");
  if (x == 0.0) return k == 0 ? 1.0 : 0.0;
  if (k <= 20 && x < 60.0) return std::exp(-x) * std::pow(x, k) / factorial(k);
  return std::exp(-x + k * std::log(x) - log_factorial(k));
}

/// base^e for small nonnegative integer e by repeated multiplication.
inline double pow_int(double base, int e) {
  if (e < 0) throw InvalidParameter("pow_int: negative exponent");
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

/// Phi_k(x) = 1 - e^{-x} sum_{n=0}^{k} x^n/n!  =  e^{-x} sum_{n=k+1}^inf x^n/n!.
/// The tail series is used when x is small relative to k (where the
/// complement would cancel), the complement otherwise. The result is clamped
/// to [0,1] only when the violation is below 1e-14.
inline double phi_k(int k, double x) {
  if (k < 0) throw InvalidParameter("phi_k: k must be nonnegative");
  if (!(x >= 0.0)) throw InvalidParameter("phi_k: x must be nonnegative");
  if (x == 0.0) return 0.0;
  if (x > 745.0 && x > 4.0 * (k + 1)) return 1.0;  // e^{-x} underflows; tail is 1 in double
  double r;
  if (x < 0.9 * (k + 1)) {
    const double lead = std::exp(-x + (k + 1) * std::log(x) - log_factorial(k + 1));
    KahanAccumulator s;
    double term = 1.0;
    s.add(term);
    for (int j = 1; j < 100000; ++j) {
      term *= x / (k + 1 + j);
      s.add(term);
      if (term < 1e-17 * s.value()) break;
    }
    r = lead * s.value();
  } else {
    KahanAccumulator s;
    double w = std::exp(-x);
    s.add(w);
    for (int n = 1; n <= k; ++n) {
      w *= x / n;
      s.add(w);
    }
    r = 1.0 - s.value();
  }
  if (r < 0.0 && r > -1e-14) r = 0.0;
  if (r > 1.0 && r < 1.0 + 1e-14) r = 1.0;
  return r;
}

/// Kummer's confluent hypergeometric function Phi(a; b; x), direct series
/// sum_m (a)_m x^m / ((b)_m m!). The series terminates when a is a
/// nonpositive integer. Satisfies Phi(a;b;x) = e^x Phi(b-a;b;-x).
inline double kummer_m(double a, double b, double x, const SeriesControl& ctl = {}) {
  if (b <= 0.0 && b == std::floor(b))
    throw InvalidParameter("kummer_m: b must not be a nonpositive integer");
  KahanAccumulator s;
  s.add(1.0);
  double term = 1.0;
  // Convergence may only be trusted past the term-magnitude hump.
  const int min_terms = static_cast<int>(std::ceil(std::fabs(x) + std::fabs(a))) + 5;
  int small_streak = 0;
  for (int m = 0; m < ctl.max_terms; ++m) {
    term *= (a + m) * x / ((b + m) * (m + 1));
    s.add(term);
    if (std::fabs(term) <= ctl.rel_tol * std::fabs(s.value()) && m >= min_terms) {
      if (++small_streak >= 2) return s.value();
    } else {
      small_streak = 0;
    }
  }
  throw NonConvergent("kummer_m: term budget exhausted before reaching rel_tol");
}

/// Associated Laguerre polynomial L_n^alpha(x) by the three-term recurrence.
inline double laguerre_assoc(int n, int alpha, double x) {
  if (n < 0) throw InvalidParameter("laguerre_assoc: n must be nonnegative");
  double prev = 1.0;  // L_0
  if (n == 0) return prev;
  double cur = 1.0 + alpha - x;  // L_1
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Modified Bessel function I_n(x) = sum_k (x/2)^{2k+n} / (k! (k+n)!).
inline double bessel_i(int n, double x, const SeriesControl& ctl = {}) {
  if (n < 0) throw InvalidParameter("bessel_i: negative order");
  if (!(x >= 0.0)) throw InvalidParameter("bessel_i: negative argument");
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  double term = std::exp(n * std::log(0.5 * x) - log_factorial(n));
  KahanAccumulator s;
  s.add(term);
  const double q = 0.25 * x * x;
  const int min_terms = static_cast<int>(std::ceil(0.5 * x)) + 3;
  int small_streak = 0;
  for (int k = 0; k < ctl.max_terms; ++k) {
    term *= q / ((k + 1.0) * (k + n + 1.0));
    s.add(term);
    if (term <= ctl.rel_tol * s.value() && k >= min_terms) {
      if (++small_streak >= 2) return s.value();
    } else {
      small_streak = 0;
    }
  }
  throw NonConvergent("bessel_i: term budget exhausted before reaching rel_tol");
}

}  // namespace photocount::specfun

#endif  // PHOTOCOUNT_SPECFUN_HPP
