// include/imitate/lqt.h

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

#ifndef IMITATE_LQT_H_
#define IMITATE_LQT_H_

#include <vector>

#include <Eigen/Dense>

#include "imitate/hsmm.h"

namespace imitate {

/// Discrete-time linear system x_{t+1} = A x_t + B u_t.
struct LinearSystem {
  Eigen::MatrixXd A;  // n x n
  Eigen::MatrixXd B;  // n x m
  double dt = 0.0;

  Eigen::Index state_dim() const { return A.rows(); }
  Eigen::Index input_dim() const { return B.cols(); }
};

/// Double integrator with state [position; velocity]:
/// A = [[I, dt I], [0, I]], B = [[dt^2/2 I], [dt I]].
LinearSystem double_integrator(int pos_dim, double dt);

/// Per-step tracking weights Q_t (PSD) and shared control weight R (PD).
struct CostWeights {
  std::vector<Eigen::MatrixXd> Q;
  Eigen::MatrixXd R;
};

/// Q_t from the tracked precision: the full inverse of the reference
/// covariance when the reference already covers the tracker state, or the
/// inverse placed on the position block (zero on velocity) when the
/// reference is position-only. R = r_scalar * I (default 9).
CostWeights weights_from_reference(const ReferenceTrajectory& ref,
                                   const LinearSystem& sys,
                                   double r_scalar = 9.0);

/// Reference means lifted to the tracker state dimension (zero target
/// velocity when the reference is position-only). Rows are steps.
Eigen::MatrixXd lift_reference(const ReferenceTrajectory& ref,
                               const LinearSystem& sys);

/// Time-varying tracker: u_t = K_t (mu_t - x_t) + uff_t. P/d hold the
/// quadratic/linear value terms used to build the gains.
struct TrackerGains {
  std::vector<Eigen::MatrixXd> K;     // m x n
  std::vector<Eigen::VectorXd> u_ff;  // m
  std::vector<Eigen::MatrixXd> P;     // n x n, PSD
  std::vector<Eigen::VectorXd> d;     // n
};

/// Finite-horizon backward Riccati and feedforward recursions from the
/// terminal conditions P_T = Q_T, d_T = 0.
TrackerGains riccati_backward(const LinearSystem& sys,
                              const ReferenceTrajectory& ref,
                              const CostWeights& weights);

/// Steady-state Riccati solution via the stable invariant subspace of the
/// symplectic matrix (eigenvalues inside the unit circle, P = V21 V1^{-1}).
/// Requires invertible A and a stabilizable (A, B).
Eigen::MatrixXd dare_solve(const LinearSystem& sys, const Eigen::MatrixXd& Q,
                           const Eigen::MatrixXd& R);

/// Constant gains for set-point tracking built on the DARE solution;
/// feedforward is zero.
TrackerGains infinite_horizon_gains(const LinearSystem& sys,
                                    const ReferenceTrajectory& ref,
                                    const CostWeights& weights);

struct RolloutResult {
  Eigen::MatrixXd states;    // T x n
  Eigen::MatrixXd controls;  // T x m
};

/// Closed-loop simulation of the tracker from x0.
RolloutResult rollout(const LinearSystem& sys, const TrackerGains& gains,
                      const ReferenceTrajectory& ref,
                      const Eigen::VectorXd& x0);

/// Quadratic tracking cost sum_t (x - mu)^T Q_t (x - mu) + u^T R u of a
/// simulated trajectory.
double tracking_cost(const ReferenceTrajectory& ref, const LinearSystem& sys,
                     const CostWeights& weights, const Eigen::MatrixXd& states,
                     const Eigen::MatrixXd& controls);

}  // namespace imitate

#endif  // IMITATE_LQT_H_
