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

#ifndef CRITZONE__PROPAGATE_HPP_
#define CRITZONE__PROPAGATE_HPP_

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "critzone/error.hpp"
#include "critzone/models.hpp"

namespace critzone
{

/// State transition over a horizon t under a constant input:
/// x(t) = A x(0) + B u.
template<typename Matrix, typename Vector>
struct BasicTransitionPair
{
  Matrix A;
  Vector B;
};

using TransitionPair = BasicTransitionPair<StateMatrix, StateVector>;
using BrakeTransition = BasicTransitionPair<Eigen::Matrix3d, Eigen::Vector3d>;

/// Longitudinal relative state [dx, dv, a]. dx is the lead-minus-ego gap
/// measured negative while the ego is behind (the ego's front is at -dx).
struct BrakeState
{
  double dx{0.0};
  double dv{0.0};
  double a{0.0};

  Eigen::Vector3d vector() const { return {dx, dv, a}; }
  static BrakeState from(const Eigen::Vector3d & v) { return {v(0), v(1), v(2)}; }
};

namespace detail
{

inline void require_horizon(double t)
{
  if (!(t >= 0.0)) {
    throw DomainError("propagation horizon must be non-negative, got " + std::to_string(t));
  }
}

// Triple integrator: shared by braking and the point-mass lateral model.
inline BrakeTransition triple_integrator(double t)
{
  BrakeTransition tr;
  tr.A << 1.0, t, 0.5 * t * t,
    0.0, 1.0, t,
    0.0, 0.0, 1.0;
  tr.B << t * t * t / 6.0, 0.5 * t * t, t;
  return tr;
}

using AugmentedMatrix =
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxStates + 1, kMaxStates + 1>;

// Autonomous form [x; u]' = [[A, B], [0, 0]] [x; u].
inline AugmentedMatrix augmented(const LateralSystem & sys)
{
  const int n = sys.dimension();
  AugmentedMatrix m = AugmentedMatrix::Zero(n + 1, n + 1);
  m.topLeftCorner(n, n) = sys.A;
  m.topRightCorner(n, 1) = sys.B;
  return m;
}

}  // namespace detail

inline BrakeTransition brake_transition(double t)
{
  detail::require_horizon(t);
  return detail::triple_integrator(t);
}

inline Eigen::Vector3d propagate_brake(const Eigen::Vector3d & x0, double jerk, double t)
{
  const auto tr = brake_transition(t);
  return tr.A * x0 + tr.B * jerk;
}

/// Exponential of the augmented system, split into the transition pair.
/// Eigen evaluates it by scaling and squaring with a Pade approximant.
inline TransitionPair steer_transition(const LateralSystem & sys, double t)
{
  detail::require_horizon(t);
  const int n = sys.dimension();
  const Eigen::MatrixXd scaled = Eigen::MatrixXd(detail::augmented(sys)) * t;
  const Eigen::MatrixXd e = scaled.exp();
  TransitionPair tr;
  tr.A = e.topLeftCorner(n, n);
  tr.B = e.topRightCorner(n, 1);
  return tr;
}

/// Closed-form transition pairs for the three low-order models.
inline TransitionPair closed_form_transition(const LateralSystem & sys, double t)
{
  detail::require_horizon(t);
  const double v = sys.v_x;
  const auto & p = sys.p;
  TransitionPair tr;
  tr.A = StateMatrix::Identity(3, 3);
  tr.B = StateVector::Zero(3);
  switch (sys.kind) {
    case ModelKind::dm:
      throw UnsupportedError("the dynamic model has no closed-form transition");
    case ModelKind::pmm: {
      const auto tri = detail::triple_integrator(t);
      tr.A = tri.A;
      tr.B = tri.B;
      return tr;
    }
    case ModelKind::sscm: {
      const double den = detail::sscm_denominator(p, v);
      const double gain = p(1) - p(3) * v * v;
      tr.A(0, 1) = v * t;
      tr.A(0, 2) = (v * v * t * t + 2.0 * v * t * gain) / (2.0 * den);
      tr.A(1, 2) = v * t / den;
      tr.B(0) = (v * v * t * t * t + 3.0 * v * t * t * gain) / (6.0 * den);
      tr.B(1) = v * t * t / (2.0 * den);
      tr.B(2) = t;
      return tr;
    }
    case ModelKind::km:
      tr.A(0, 1) = v * t;
      tr.A(0, 2) = v * (p(1) * t + p(2) * v * t * t / 2.0);
      tr.A(1, 2) = p(2) * v * t;
      tr.B(0) = p(2) * v * v * t * t * t / 6.0 + p(1) * v * t * t / 2.0;
      tr.B(1) = p(2) * v * t * t / 2.0;
      tr.B(2) = t;
      return tr;
  }
  return tr;
}

inline void require_dimension(const LateralSystem & sys, const LateralState & x)
{
  if (x.size() != sys.dimension()) {
    throw DomainError(
      "state has " + std::to_string(x.size()) + " entries, " + std::string(to_string(sys.kind)) +
      " expects " + std::to_string(sys.dimension()));
  }
}

inline LateralState apply(const TransitionPair & tr, const LateralState & x0, double u)
{
  return tr.A * x0 + tr.B * u;
}

inline LateralState propagate(const LateralSystem & sys, const LateralState & x0, double u, double t)
{
  require_dimension(sys, x0);
  return apply(steer_transition(sys, t), x0, u);
}

/// [y_FR + W/2, a_s, j_s]
inline OutputVector output(const LateralSystem & sys, const LateralState & x, double u)
{
  require_dimension(sys, x);
  return sys.C * x + sys.D * u;
}

/// Time derivative of the state, A x + B u.
inline LateralState derivative(const LateralSystem & sys, const LateralState & x, double u)
{
  return sys.A * x + sys.B * u;
}

/// Memoized transition pairs for one system. Owned by a single solve; not
/// shared between threads. The point-mass model is a triple integrator and
/// uses its polynomial pair; the steering models use the matrix exponential.
class TransitionCache
{
public:
  explicit TransitionCache(const LateralSystem & sys) : sys_(&sys) {}

  const TransitionPair & at(double t)
  {
    for (const auto & [key, pair] : entries_) {
      if (key == t) {
        ++hits_;
        return pair;
      }
    }
    entries_.emplace_back(
      t, sys_->kind == ModelKind::pmm ? closed_form_transition(*sys_, t) : steer_transition(*sys_, t));
    return entries_.back().second;
  }

  LateralState propagate(const LateralState & x0, double u, double t)
  {
    return apply(at(t), x0, u);
  }

  const LateralSystem & system() const { return *sys_; }
  size_t size() const { return entries_.size(); }
  size_t hits() const { return hits_; }

private:
  const LateralSystem * sys_;
  // Root finders touch a few dozen horizons per solve; a flat list is enough.
  std::vector<std::pair<double, TransitionPair>> entries_;
  size_t hits_{0};
};

/// Complex-conjugate eigenvalue of the DM lateral dynamics with positive
/// imaginary part (the remaining eigenvalues are zero).
inline std::complex<double> dm_eigenvalue(const LateralSystem & sys)
{
  if (sys.kind != ModelKind::dm) {
    throw UnsupportedError("eigenvalue pair is defined for the dynamic model only");
  }
  const auto & p = sys.p;
  const double v = sys.v_x;
  const std::complex<double> disc =
    (p(1) - p(5)) * (p(1) - p(5)) + 4.0 * p(4) * (p(2) - v * v);
  const std::complex<double> root = std::sqrt(disc);
  std::complex<double> lambda = (-(p(1) + p(5)) + root) / (2.0 * v);
  if (lambda.imag() < 0.0) {
    lambda = std::conj(lambda);
  }
  return lambda;
}

struct JordanCheck
{
  double deviation{0.0};   // max |e^(A t) - P e^(J t) P^-1|
  double condition{1.0};   // 2-norm condition number of P
  bool reliable{true};     // false when P is too ill-conditioned to trust
};

/// Diagnostic: evaluates the augmented DM exponential through a numerically
/// built Jordan decomposition (complex pair + one 4x4 block at zero) and
/// compares it with the general matrix exponential.
inline JordanCheck jordan_crosscheck(const LateralSystem & sys, double t)
{
  if (sys.kind != ModelKind::dm) {
    throw UnsupportedError("Jordan cross-check is defined for the dynamic model only");
  }
  detail::require_horizon(t);
  using Complex = std::complex<double>;
  const Eigen::MatrixXd a = detail::augmented(sys);
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXcd ac = a.cast<Complex>();

  const Complex lambda = dm_eigenvalue(sys);
  auto eigenvector = [&](Complex value) {
    const Eigen::MatrixXcd shifted = ac - value * Eigen::MatrixXcd::Identity(n, n);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted, Eigen::ComputeFullV);
    return Eigen::VectorXcd(svd.matrixV().col(n - 1));
  };

  // Top of the zero chain: the direction in ker(A^4) that A^3 maps furthest.
  const Eigen::MatrixXd a2 = a * a;
  const Eigen::MatrixXd a3 = a2 * a;
  const Eigen::MatrixXd a4 = a3 * a;
  Eigen::JacobiSVD<Eigen::MatrixXd> ker_svd(a4, Eigen::ComputeFullV);
  const Eigen::MatrixXd kernel = ker_svd.matrixV().rightCols(4);
  Eigen::JacobiSVD<Eigen::MatrixXd> top_svd(a3 * kernel, Eigen::ComputeFullV);
  const Eigen::VectorXd v4 = kernel * top_svd.matrixV().col(0);

  Eigen::MatrixXcd p(n, n);
  p.col(0) = eigenvector(lambda);
  p.col(1) = eigenvector(std::conj(lambda));
  p.col(2) = (a3 * v4).cast<Complex>();
  p.col(3) = (a2 * v4).cast<Complex>();
  p.col(4) = (a * v4).cast<Complex>();
  p.col(5) = v4.cast<Complex>();

  Eigen::MatrixXcd ejt = Eigen::MatrixXcd::Zero(n, n);
  ejt(0, 0) = std::exp(lambda * t);
  ejt(1, 1) = std::exp(std::conj(lambda) * t);
  const double powers[4] = {1.0, t, t * t / 2.0, t * t * t / 6.0};
  for (int r = 0; r < 4; ++r) {
    for (int c = r; c < 4; ++c) {
      ejt(2 + r, 2 + c) = powers[c - r];
    }
  }

  JordanCheck check;
  Eigen::JacobiSVD<Eigen::MatrixXcd> cond_svd(p);
  const auto & sv = cond_svd.singularValues();
  check.condition = sv(n - 1) > 0.0 ? sv(0) / sv(n - 1) : std::numeric_limits<double>::infinity();
  check.reliable = check.condition < 1e12;
  if (!check.reliable) {
    check.deviation = std::numeric_limits<double>::infinity();
    return check;
  }
  const Eigen::MatrixXcd jordan = p * ejt * p.inverse();
  const Eigen::MatrixXd general = (a * t).exp();
  check.deviation = (jordan - general.cast<Complex>()).cwiseAbs().maxCoeff();
  return check;
}

}  // namespace critzone

#endif  // CRITZONE__PROPAGATE_HPP_
