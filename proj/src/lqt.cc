// src/lqt.cc

// Copyright 2026  Imitate Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "imitate/lqt.h"

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "imitate/error.h"

namespace imitate {

LinearSystem double_integrator(int pos_dim, double dt) {
  if (pos_dim < 1) throw InputError("double_integrator: pos_dim must be >= 1");
  if (dt <= 0.0) throw InputError("double_integrator: dt must be positive");
  const int n = 2 * pos_dim;
  LinearSystem sys;
  sys.dt = dt;
  sys.A = Eigen::MatrixXd::Identity(n, n);
  sys.A.topRightCorner(pos_dim, pos_dim) =
      dt * Eigen::MatrixXd::Identity(pos_dim, pos_dim);
  sys.B = Eigen::MatrixXd::Zero(n, pos_dim);
  sys.B.topRows(pos_dim) =
      0.5 * dt * dt * Eigen::MatrixXd::Identity(pos_dim, pos_dim);
  sys.B.bottomRows(pos_dim) = dt * Eigen::MatrixXd::Identity(pos_dim, pos_dim);
  return sys;
}

Eigen::MatrixXd lift_reference(const ReferenceTrajectory& ref,
                               const LinearSystem& sys) {
  const Eigen::Index n = sys.state_dim();
  const Eigen::Index d = ref.dim();
  Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(ref.length(), n);
  if (d == n) {
    for (Eigen::Index t = 0; t < ref.length(); ++t) {
      mu.row(t) = ref.steps[t].mean.transpose();
    }
  } else if (d == sys.input_dim()) {
    for (Eigen::Index t = 0; t < ref.length(); ++t) {
      mu.row(t).head(d) = ref.steps[t].mean.transpose();
    }
  } else {
    throw InputError("reference dimension " + std::to_string(d) +
                     " matches neither the state (" + std::to_string(n) +
                     ") nor the position block");
  }
  return mu;
}

CostWeights weights_from_reference(const ReferenceTrajectory& ref,
                                   const LinearSystem& sys, double r_scalar) {
  if (ref.length() < 1) {
    throw InputError("weights_from_reference: empty reference");
  }
  if (r_scalar <= 0.0) {
    throw InputError("weights_from_reference: r_scalar must be positive");
  }
  const Eigen::Index n = sys.state_dim();
  const Eigen::Index m = sys.input_dim();
  const Eigen::Index d = ref.dim();
  if (d != n && d != m) {
    throw InputError("weights_from_reference: reference dimension matches "
                     "neither the state nor the position block");
  }

  CostWeights weights;
  weights.R = r_scalar * Eigen::MatrixXd::Identity(m, m);
  weights.Q.reserve(ref.length());
  for (const ReferenceStep& step : ref.steps) {
    Eigen::LLT<Eigen::MatrixXd> llt(step.cov);
    if (llt.info() != Eigen::Success) {
      throw NumericError("weights_from_reference: reference covariance is "
                         "not positive definite");
    }
    const Eigen::MatrixXd precision =
        llt.solve(Eigen::MatrixXd::Identity(d, d));
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    if (d == n) {
      q = precision;
    } else {
      q.topLeftCorner(d, d) = precision;
    }
    weights.Q.push_back(0.5 * (q + q.transpose()));
  }
  return weights;
}

TrackerGains riccati_backward(const LinearSystem& sys,
                              const ReferenceTrajectory& ref,
                              const CostWeights& weights) {
  const Eigen::Index horizon = ref.length();
  if (horizon < 1) throw InputError("riccati_backward: empty reference");
  if (static_cast<Eigen::Index>(weights.Q.size()) != horizon) {
    throw InputError("riccati_backward: weight count differs from horizon");
  }
  const Eigen::Index n = sys.state_dim();
  const Eigen::Index m = sys.input_dim();
  const Eigen::MatrixXd mu = lift_reference(ref, sys);

  TrackerGains gains;
  gains.K.assign(horizon, Eigen::MatrixXd::Zero(m, n));
  gains.u_ff.assign(horizon, Eigen::VectorXd::Zero(m));
  gains.P.assign(horizon, Eigen::MatrixXd::Zero(n, n));
  gains.d.assign(horizon, Eigen::VectorXd::Zero(n));

  gains.P[horizon - 1] = weights.Q[horizon - 1];
  // The last control only adds cost, so its gain stays zero.
  for (Eigen::Index t = horizon - 2; t >= 0; --t) {
    const Eigen::MatrixXd& p_next = gains.P[t + 1];
    const Eigen::VectorXd& d_next = gains.d[t + 1];
    const Eigen::MatrixXd bt_p = sys.B.transpose() * p_next;
    Eigen::LLT<Eigen::MatrixXd> m_llt(weights.R + bt_p * sys.B);
    if (m_llt.info() != Eigen::Success) {
      throw NumericError("riccati_backward: R + B^T P B lost definiteness");
    }
    const Eigen::MatrixXd bt_p_a = bt_p * sys.A;
    const Eigen::VectorXd r_t =
        sys.A * mu.row(t).transpose() - mu.row(t + 1).transpose();
    const Eigen::VectorXd g = p_next * r_t + d_next;

    gains.K[t] = m_llt.solve(bt_p_a);
    gains.u_ff[t] = -m_llt.solve(sys.B.transpose() * g);

    Eigen::MatrixXd p = weights.Q[t] + sys.A.transpose() * p_next * sys.A -
                        bt_p_a.transpose() * m_llt.solve(bt_p_a);
    gains.P[t] = 0.5 * (p + p.transpose());
    gains.d[t] = sys.A.transpose() * g -
                 bt_p_a.transpose() * m_llt.solve(sys.B.transpose() * g);
  }
  return gains;
}

Eigen::MatrixXd dare_solve(const LinearSystem& sys, const Eigen::MatrixXd& Q,
                           const Eigen::MatrixXd& R) {
  const Eigen::Index n = sys.state_dim();
  if (Q.rows() != n || Q.cols() != n) {
    throw InputError("dare_solve: Q must be n x n");
  }
  Eigen::LLT<Eigen::MatrixXd> r_llt(R);
  if (r_llt.info() != Eigen::Success) {
    throw InputError("dare_solve: R must be positive definite");
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> a_lu(sys.A);
  const double det_a = a_lu.determinant();
  if (det_a == 0.0 || !std::isfinite(det_a)) {
    throw InputError("dare_solve: A must be invertible");
  }

  // Symplectic matrix; its stable invariant subspace [V1; V21] gives
  // P = V21 V1^{-1}.
  const Eigen::MatrixXd g = sys.B * r_llt.solve(sys.B.transpose());
  const Eigen::MatrixXd a_inv_t = a_lu.inverse().transpose();
  Eigen::MatrixXd symp(2 * n, 2 * n);
  symp.topLeftCorner(n, n) = sys.A + g * a_inv_t * Q;
  symp.topRightCorner(n, n) = -g * a_inv_t;
  symp.bottomLeftCorner(n, n) = -a_inv_t * Q;
  symp.bottomRightCorner(n, n) = a_inv_t;

  Eigen::EigenSolver<Eigen::MatrixXd> eig(symp);
  if (eig.info() != Eigen::Success) {
    throw NumericError("dare_solve: eigendecomposition failed");
  }
  Eigen::MatrixXcd v1(n, n);
  Eigen::MatrixXcd v21(n, n);
  Eigen::Index found = 0;
  for (Eigen::Index c = 0; c < 2 * n; ++c) {
    if (std::abs(eig.eigenvalues()(c)) < 1.0) {
      if (found == n) {
        throw NumericError("dare_solve: more than n stable eigenvalues");
      }
      v1.col(found) = eig.eigenvectors().col(c).head(n);
      v21.col(found) = eig.eigenvectors().col(c).tail(n);
      ++found;
    }
  }
  if (found != n) {
    throw NumericError("dare_solve: no stable invariant subspace of "
                       "dimension " + std::to_string(n));
  }

  Eigen::FullPivLU<Eigen::MatrixXcd> v1_lu(v1);
  if (!v1_lu.isInvertible()) {
    throw NumericError("dare_solve: stable subspace basis is singular");
  }
  const Eigen::MatrixXcd p_c = v21 * v1_lu.inverse();
  if (p_c.imag().cwiseAbs().maxCoeff() >
      1e-6 * std::max(1.0, p_c.real().cwiseAbs().maxCoeff())) {
    throw NumericError("dare_solve: solution has a significant imaginary part");
  }
  Eigen::MatrixXd p = p_c.real();
  p = 0.5 * (p + p.transpose()).eval();

  // Fixed-point residual check.
  const Eigen::MatrixXd bt_p_a = sys.B.transpose() * p * sys.A;
  Eigen::LLT<Eigen::MatrixXd> m_llt(R + sys.B.transpose() * p * sys.B);
  const Eigen::MatrixXd next = Q + sys.A.transpose() * p * sys.A -
                               bt_p_a.transpose() * m_llt.solve(bt_p_a);
  if ((next - p).norm() > 1e-8 * std::max(1.0, p.norm())) {
    throw NumericError("dare_solve: fixed-point residual too large");
  }
  return p;
}

TrackerGains infinite_horizon_gains(const LinearSystem& sys,
                                    const ReferenceTrajectory& ref,
                                    const CostWeights& weights) {
  const Eigen::Index horizon = ref.length();
  if (horizon < 1 || weights.Q.empty()) {
    throw InputError("infinite_horizon_gains: empty reference");
  }
  const Eigen::MatrixXd p = dare_solve(sys, weights.Q.front(), weights.R);
  Eigen::LLT<Eigen::MatrixXd> m_llt(weights.R +
                                    sys.B.transpose() * p * sys.B);
  const Eigen::MatrixXd k = m_llt.solve(sys.B.transpose() * p * sys.A);

  TrackerGains gains;
  gains.K.assign(horizon, k);
  gains.u_ff.assign(horizon, Eigen::VectorXd::Zero(sys.input_dim()));
  gains.P.assign(horizon, p);
  gains.d.assign(horizon, Eigen::VectorXd::Zero(sys.state_dim()));
  return gains;
}

RolloutResult rollout(const LinearSystem& sys, const TrackerGains& gains,
                      const ReferenceTrajectory& ref,
                      const Eigen::VectorXd& x0) {
  const Eigen::Index horizon = ref.length();
  if (static_cast<Eigen::Index>(gains.K.size()) != horizon) {
    throw InputError("rollout: gain count differs from the horizon");
  }
  if (x0.size() != sys.state_dim()) {
    throw InputError("rollout: initial state has wrong dimension");
  }
  const Eigen::MatrixXd mu = lift_reference(ref, sys);

  RolloutResult result;
  result.states.resize(horizon, sys.state_dim());
  result.controls.resize(horizon, sys.input_dim());
  Eigen::VectorXd x = x0;
  for (Eigen::Index t = 0; t < horizon; ++t) {
    result.states.row(t) = x.transpose();
    const Eigen::VectorXd u =
        gains.K[t] * (mu.row(t).transpose() - x) + gains.u_ff[t];
    result.controls.row(t) = u.transpose();
    if (t + 1 < horizon) {
      x = sys.A * x + sys.B * u;
    }
  }
  return result;
}

double tracking_cost(const ReferenceTrajectory& ref, const LinearSystem& sys,
                     const CostWeights& weights, const Eigen::MatrixXd& states,
                     const Eigen::MatrixXd& controls) {
  const Eigen::Index horizon = ref.length();
  if (states.rows() != horizon || controls.rows() != horizon) {
    throw InputError("tracking_cost: trajectory length differs from horizon");
  }
  const Eigen::MatrixXd mu = lift_reference(ref, sys);
  double cost = 0.0;
  for (Eigen::Index t = 0; t < horizon; ++t) {
    const Eigen::VectorXd e = states.row(t).transpose() - mu.row(t).transpose();
    const Eigen::VectorXd u = controls.row(t).transpose();
    cost += e.dot(weights.Q[t] * e) + u.dot(weights.R * u);
  }
  return cost;
}

}  // namespace imitate
