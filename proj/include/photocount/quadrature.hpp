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

#ifndef PHOTOCOUNT_QUADRATURE_HPP
#define PHOTOCOUNT_QUADRATURE_HPP

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <type_traits>
#include <utility>

#include "photocount/errors.hpp"

// Adaptive Gauss-Kronrod 7/15 quadrature over scalar- or matrix-valued
// integrands. The error estimate on a panel is the max-entry difference
// between the embedded 7-point Gauss and 15-point Kronrod rules; panels are
// bisected until the estimate falls below the locally allotted absolute
// tolerance.

namespace photocount::quad {

namespace detail {

// 15-point Kronrod abscissae (nonnegative half) and weights, with the
// embedded 7-point Gauss weights. Standard QUADPACK dqk15 constants.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double max_abs(double v) { return std::fabs(v); }
inline double max_abs(const Eigen::MatrixXcd& v) { return v.cwiseAbs().maxCoeff(); }
inline double max_abs(const Eigen::MatrixXd& v) { return v.cwiseAbs().maxCoeff(); }

template <class F, class V>
std::pair<V, double> gk15_panel(F&& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  V f_mid = f(mid);
  V kronrod = kWgk[7] * f_mid;
  V gauss = kWg[3] * f_mid;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[static_cast<std::size_t>(i)];
    V lo = f(mid - dx);
    V hi = f(mid + dx);
    V pair_sum = lo + hi;
    kronrod = kronrod + kWgk[static_cast<std::size_t>(i)] * pair_sum;
    if (i % 2 == 1)  // odd Kronrod indices carry the embedded Gauss nodes
      gauss = gauss + kWg[static_cast<std::size_t>(i / 2)] * pair_sum;
  }
  V integral = half * kronrod;
  const double err = max_abs(V(half * (kronrod - gauss)));
  return {std::move(integral), err};
}

template <class F, class V>
V integrate_rec(F&& f, double a, double b, double abs_tol, int depth) {
  auto [integral, err] = gk15_panel<F, V>(std::forward<F>(f), a, b);
  if (err <= abs_tol || b - a <= 1e-14 * std::fabs(b)) return integral;
  if (depth <= 0)
    throw NonConvergent("quad::integrate: panel recursion limit reached before tolerance");
  const double mid = 0.5 * (a + b);
  V left = integrate_rec<F, V>(std::forward<F>(f), a, mid, 0.5 * abs_tol, depth - 1);
  V right = integrate_rec<F, V>(std::forward<F>(f), mid, b, 0.5 * abs_tol, depth - 1);
  return V(left + right);
}

}  // namespace detail

/// Integrate f over [a, b] to absolute tolerance abs_tol. V is deduced from
/// the integrand; double and Eigen matrices are supported.
template <class F, class V = std::invoke_result_t<F&, double>>
V integrate(F&& f, double a, double b, double abs_tol, int max_depth = 28) {
  if (!(b >= a)) throw InvalidParameter("quad::integrate: need b >= a");
  if (a == b) {
    V probe = f(a);
    return V(0.0 * probe);
  }
  return detail::integrate_rec<F, V>(std::forward<F>(f), a, b, abs_tol, max_depth);
}

}  // namespace photocount::quad

#endif  // PHOTOCOUNT_QUADRATURE_HPP
