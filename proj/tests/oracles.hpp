// Copyright 2026 The critzone Authors
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

#ifndef CRITZONE_TESTS__ORACLES_HPP_
#define CRITZONE_TESTS__ORACLES_HPP_

// Independent reference computations for the tests. None of these call the
// library's propagation or root-finding code.

#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

namespace oracle
{

/// Classic fourth-order Runge-Kutta for x' = A x + B u at fixed step.
inline Eigen::VectorXd rk4_linear(
  const Eigen::MatrixXd & a_in, const Eigen::VectorXd & b_in, const Eigen::VectorXd & x_in,
  double u, double t, double h)
{
  // Fixed-capacity storage: millions of steps without heap traffic.
  using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1>;
  using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;
  const Mat a = a_in;
  const Vec bu = b_in * u;
  Vec x = x_in;
  const long steps = std::max<long>(1, std::lround(std::ceil(t / h)));
  const double dt = t / static_cast<double>(steps);
  for (long k = 0; k < steps; ++k) {
    const Vec k1 = a * x + bu;
    const Vec k2 = a * (x + 0.5 * dt * k1) + bu;
    const Vec k3 = a * (x + 0.5 * dt * k2) + bu;
    const Vec k4 = a * (x + dt * k3) + bu;
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

/// Generic RK4 for x' = f(t, x).
inline Eigen::VectorXd rk4(
  const std::function<Eigen::VectorXd(double, const Eigen::VectorXd &)> & f, Eigen::VectorXd x,
  double t0, double t1, double h)
{
  const long steps = std::max<long>(1, std::lround(std::ceil((t1 - t0) / h)));
  const double dt = (t1 - t0) / static_cast<double>(steps);
  double t = t0;
  for (long k = 0; k < steps; ++k) {
    const Eigen::VectorXd k1 = f(t, x);
    const Eigen::VectorXd k2 = f(t + 0.5 * dt, x + 0.5 * dt * k1);
    const Eigen::VectorXd k3 = f(t + 0.5 * dt, x + 0.5 * dt * k2);
    const Eigen::VectorXd k4 = f(t + dt, x + dt * k3);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += dt;
  }
  return x;
}

/// Composite trapezoid of f over [a, b] with n intervals.
inline double trapezoid(const std::function<double(double)> & f, double a, double b, long n)
{
  const double h = (b - a) / static_cast<double>(n);
  double s = 0.5 * (f(a) + f(b));
  for (long k = 1; k < n; ++k) {
    s += f(a + h * static_cast<double>(k));
  }
  return s * h;
}

/// All sign changes of f on a uniform grid over [a, b], each refined by
/// bisection to `tol`.
inline std::vector<double> grid_roots(
  const std::function<double(double)> & f, double a, double b, double step, double tol = 1e-12)
{
  std::vector<double> roots;
  double t_prev = a;
  double f_prev = f(a);
  const long n = std::lround(std::ceil((b - a) / step));
  for (long k = 1; k <= n; ++k) {
    const double t = std::min(b, a + step * static_cast<double>(k));
    const double ft = f(t);
    if ((f_prev < 0.0) != (ft < 0.0)) {
      double lo = t_prev;
      double hi = t;
      double flo = f_prev;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    t_prev = t;
    f_prev = ft;
  }
  return roots;
}

/// Central difference (f(t + h) - f(t - h)) / 2h.
inline double central_difference(const std::function<double(double)> & f, double t, double h)
{
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

/// Relative error with an absolute floor for values near zero.
inline double rel_error(double got, double want, double floor = 1e-9)
{
  return std::abs(got - want) / std::max(std::abs(want), floor);
}

inline double rel_error(const Eigen::VectorXd & got, const Eigen::VectorXd & want, double floor = 1e-9)
{
  return (got - want).norm() / std::max(want.norm(), floor);
}

}  // namespace oracle

#endif  // CRITZONE_TESTS__ORACLES_HPP_
