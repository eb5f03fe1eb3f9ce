// tests/test_lqt.cc

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
#include <random>

#include <doctest.h>

#include "imitate/error.h"
#include "oracles.h"

using namespace imitate;

namespace {

// Constant reference at the given position with unit covariance.
ReferenceTrajectory constant_reference(const Eigen::VectorXd& pos, int steps) {
  ReferenceTrajectory ref;
  for (int t = 0; t < steps; ++t) {
    ReferenceStep step;
    step.mean = pos;
    step.cov = Eigen::MatrixXd::Identity(pos.size(), pos.size());
    step.state = 0;
    ref.steps.push_back(step);
  }
  return ref;
}

LinearSystem scalar_system(double a, double b) {
  LinearSystem sys;
  sys.A = Eigen::MatrixXd::Constant(1, 1, a);
  sys.B = Eigen::MatrixXd::Constant(1, 1, b);
  sys.dt = 1.0;
  return sys;
}

// Random controllable system with invertible A.
LinearSystem random_system(int n, int m, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (true) {
    LinearSystem sys;
    sys.A.resize(n, n);
    sys.B.resize(n, m);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) sys.A(r, c) = 0.6 * gauss(rng);
      for (int c = 0; c < m; ++c) sys.B(r, c) = gauss(rng);
    }
    sys.dt = 1.0;
    if (std::abs(sys.A.determinant()) > 1e-3) return sys;
  }
}

}  // namespace

TEST_CASE("double integrator matrices") {
  SUBCASE("direct substitution for m=1, dt=0.1") {
    const LinearSystem sys = double_integrator(1, 0.1);
    CHECK(sys.A(0, 0) == doctest::Approx(1.0));
    CHECK(sys.A(0, 1) == doctest::Approx(0.1));
    CHECK(sys.A(1, 0) == doctest::Approx(0.0));
    CHECK(sys.A(1, 1) == doctest::Approx(1.0));
    CHECK(sys.B(0, 0) == doctest::Approx(0.005));
    CHECK(sys.B(1, 0) == doctest::Approx(0.1));
  }
  SUBCASE("dt -> 0 approaches identity dynamics") {
    const LinearSystem sys = double_integrator(2, 1e-9);
    CHECK((sys.A - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-8);
    CHECK(sys.B.norm() < 1e-8);
  }
  SUBCASE("constant input matches closed-form kinematics") {
    const double dt = 0.01, u = 2.0;
    const LinearSystem sys = double_integrator(1, dt);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
    const int k = 500;
    for (int i = 0; i < k; ++i) {
      x = sys.A * x + sys.B * Eigen::VectorXd::Constant(1, u);
    }
    const double t = k * dt;
    CHECK(x(0) == doctest::Approx(0.5 * u * t * t).epsilon(1e-4));
    CHECK(x(1) == doctest::Approx(u * t).epsilon(1e-9));
  }
}

TEST_CASE("weights_from_reference") {
  const LinearSystem sys = double_integrator(2, 0.1);
  SUBCASE("identity covariance gives identity weight on the position block") {
    const ReferenceTrajectory ref =
        constant_reference(Eigen::VectorXd::Zero(2), 3);
    const CostWeights w = weights_from_reference(ref, sys);
    CHECK((w.Q[0].topLeftCorner(2, 2) - Eigen::MatrixXd::Identity(2, 2))
              .norm() < 1e-12);
    CHECK(w.Q[0].bottomRightCorner(2, 2).norm() == 0.0);
    CHECK((w.R - 9.0 * Eigen::MatrixXd::Identity(2, 2)).norm() == 0.0);
  }
  SUBCASE("tight dimensions are tracked harder") {
    ReferenceTrajectory ref = constant_reference(Eigen::VectorXd::Zero(2), 1);
    ref.steps[0].cov = Eigen::Vector2d(0.01, 1.0).asDiagonal();
    const CostWeights w = weights_from_reference(ref, sys);
    CHECK(w.Q[0](0, 0) == doctest::Approx(100.0));
    CHECK(w.Q[0](1, 1) == doctest::Approx(1.0));
  }
  SUBCASE("full-state references use the full inverse") {
    ReferenceTrajectory ref = constant_reference(Eigen::VectorXd::Zero(4), 1);
    const CostWeights w = weights_from_reference(ref, sys, 2.0);
    CHECK((w.Q[0] - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-12);
    CHECK((w.R - 2.0 * Eigen::MatrixXd::Identity(2, 2)).norm() == 0.0);
  }
}

TEST_CASE("riccati_backward hand cases") {
  const LinearSystem sys = scalar_system(1.0, 1.0);
  ReferenceTrajectory ref = constant_reference(Eigen::VectorXd::Zero(1), 2);
  // Q applies to the full (scalar) state here.
  CostWeights w;
  w.Q = {Eigen::MatrixXd::Constant(1, 1, 1.0),
         Eigen::MatrixXd::Constant(1, 1, 1.0)};
  w.R = Eigen::MatrixXd::Constant(1, 1, 1.0);

  const TrackerGains gains = riccati_backward(sys, ref, w);
  SUBCASE("terminal conditions") {
    CHECK(gains.P[1](0, 0) == doctest::Approx(1.0));
    CHECK(gains.d[1](0) == doctest::Approx(0.0));
  }
  SUBCASE("one backward step: P = Q + A'PA - A'PB (R+B'PB)^-1 B'PA") {
    CHECK(gains.P[0](0, 0) == doctest::Approx(1.0 + 1.0 - 0.5).epsilon(1e-12));
  }
}

TEST_CASE("riccati_backward converges to the DARE fixed point") {
  const LinearSystem sys = scalar_system(1.0, 1.0);
  const int horizon = 200;
  ReferenceTrajectory ref =
      constant_reference(Eigen::VectorXd::Zero(1), horizon);
  CostWeights w;
  w.Q.assign(horizon, Eigen::MatrixXd::Constant(1, 1, 1.0));
  w.R = Eigen::MatrixXd::Constant(1, 1, 1.0);
  const TrackerGains gains = riccati_backward(sys, ref, w);
  const Eigen::MatrixXd p = dare_solve(sys, w.Q[0], w.R);
  CHECK(std::abs(gains.P[0](0, 0) - p(0, 0)) < 1e-8);
}

TEST_CASE("dare_solve") {
  SUBCASE("zero state cost gives the zero solution") {
    const LinearSystem sys = scalar_system(0.9, 1.0);
    const Eigen::MatrixXd p = dare_solve(sys, Eigen::MatrixXd::Zero(1, 1),
                                         Eigen::MatrixXd::Identity(1, 1));
    CHECK(p.norm() < 1e-12);
  }
  SUBCASE("scalar unit system solves the golden-ratio quadratic") {
    const LinearSystem sys = scalar_system(1.0, 1.0);
    const Eigen::MatrixXd p = dare_solve(sys, Eigen::MatrixXd::Identity(1, 1),
                                         Eigen::MatrixXd::Identity(1, 1));
    CHECK(std::abs(p(0, 0) - (1.0 + std::sqrt(5.0)) / 2.0) < 1e-9);
  }
  SUBCASE("random systems match the long backward recursion") {
    std::mt19937_64 rng(2);
    for (int rep = 0; rep < 20; ++rep) {
      const LinearSystem sys = random_system(4, 2, rng);
      Eigen::MatrixXd root = Eigen::MatrixXd::Random(4, 4);
      const Eigen::MatrixXd q =
          root * root.transpose() + 0.1 * Eigen::MatrixXd::Identity(4, 4);
      const Eigen::MatrixXd r = 2.0 * Eigen::MatrixXd::Identity(2, 2);
      const Eigen::MatrixXd p = dare_solve(sys, q, r);
      const Eigen::MatrixXd limit =
          oracles::dare_by_recursion(sys.A, sys.B, q, r, 10000);
      CHECK((p - limit).norm() < 1e-7 * std::max(1.0, limit.norm()));
    }
  }
  SUBCASE("singular A is rejected") {
    LinearSystem sys = scalar_system(0.0, 1.0);
    CHECK_THROWS_AS((void)dare_solve(sys, Eigen::MatrixXd::Identity(1, 1),
                                     Eigen::MatrixXd::Identity(1, 1)),
                    InputError);
  }
}

TEST_CASE("rollout behaviour") {
  SUBCASE("equilibrium start under infinite-horizon gains stays put") {
    const LinearSystem sys = double_integrator(1, 0.05);
    ReferenceTrajectory ref =
        constant_reference(Eigen::VectorXd::Constant(1, 0.7), 50);
    const CostWeights w = weights_from_reference(ref, sys);
    const TrackerGains gains = infinite_horizon_gains(sys, ref, w);
    Eigen::VectorXd x0(2);
    x0 << 0.7, 0.0;
    const RolloutResult result = rollout(sys, gains, ref, x0);
    CHECK(result.controls.cwiseAbs().maxCoeff() < 1e-12);
    CHECK((result.states.rowwise() - x0.transpose()).cwiseAbs().maxCoeff() <
          1e-12);
  }
  SUBCASE("a 1-D step reference settles before the horizon") {
    const LinearSystem sys = double_integrator(1, 0.01);
    const int horizon = 1000;
    ReferenceTrajectory ref;
    for (int t = 0; t < horizon; ++t) {
      ReferenceStep step;
      step.mean = Eigen::VectorXd::Constant(1, t < 100 ? 0.0 : 1.0);
      step.cov = Eigen::MatrixXd::Constant(1, 1, 0.001);
      ref.steps.push_back(step);
    }
    const CostWeights w = weights_from_reference(ref, sys, 9.0);
    const TrackerGains gains = riccati_backward(sys, ref, w);
    const RolloutResult result = rollout(sys, gains, ref,
                                         Eigen::VectorXd::Zero(2));
    CHECK(std::abs(result.states(horizon - 1, 0) - 1.0) < 1e-3);
    CHECK(std::abs(result.states(horizon - 2, 0) - 1.0) < 1e-3);
  }
  SUBCASE("an exact system trajectory is reproduced from its start") {
    // Reference generated by the dynamics themselves (full-state
    // reference): tracking it from the same start is error-free.
    const LinearSystem sys = double_integrator(1, 0.1);
    const int horizon = 40;
    Eigen::VectorXd x(2);
    x << 0.2, 0.3;
    ReferenceTrajectory ref;
    for (int t = 0; t < horizon; ++t) {
      ReferenceStep step;
      step.mean = x;
      step.cov = Eigen::MatrixXd::Identity(2, 2);
      ref.steps.push_back(step);
      x = sys.A * x;  // zero-input trajectory
    }
    const CostWeights w = weights_from_reference(ref, sys);
    const TrackerGains gains = riccati_backward(sys, ref, w);
    const RolloutResult result =
        rollout(sys, gains, ref, ref.steps[0].mean);
    CHECK(result.controls.cwiseAbs().maxCoeff() < 1e-9);
    for (int t = 0; t < horizon; ++t) {
      CHECK((result.states.row(t).transpose() - ref.steps[t].mean).norm() <
            1e-9);
    }
  }
}

TEST_CASE("rollout is locally optimal against control perturbations") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int fixture = 0; fixture < 5; ++fixture) {
    const LinearSystem sys = double_integrator(1, 0.05);
    const int horizon = 30;
    ReferenceTrajectory ref;
    for (int t = 0; t < horizon; ++t) {
      ReferenceStep step;
      step.mean = Eigen::VectorXd::Constant(1, std::sin(0.2 * t) + fixture);
      step.cov = Eigen::MatrixXd::Constant(1, 1, 0.1);
      ref.steps.push_back(step);
    }
    const CostWeights w = weights_from_reference(ref, sys, 9.0);
    const TrackerGains gains = riccati_backward(sys, ref, w);
    Eigen::VectorXd x0(2);
    x0 << gauss(rng), gauss(rng);
    const RolloutResult nominal = rollout(sys, gains, ref, x0);
    const double nominal_cost =
        tracking_cost(ref, sys, w, nominal.states, nominal.controls);

    for (int pert = 0; pert < 40; ++pert) {
      Eigen::MatrixXd controls = nominal.controls;
      for (Eigen::Index t = 0; t < controls.rows(); ++t) {
        controls(t, 0) += 0.05 * gauss(rng);
      }
      // Re-simulate open loop under the perturbed controls.
      Eigen::MatrixXd states(horizon, 2);
      Eigen::VectorXd x = x0;
      for (int t = 0; t < horizon; ++t) {
        states.row(t) = x.transpose();
        if (t + 1 < horizon) {
          x = sys.A * x + sys.B * controls.row(t).transpose();
        }
      }
      const double cost = tracking_cost(ref, sys, w, states, controls);
      CHECK(cost >= nominal_cost - 1e-10);
    }
  }
}

TEST_CASE("feedback gains are invariant to uniform cost rescaling") {
  const LinearSystem sys = double_integrator(1, 0.1);
  const int horizon = 25;
  ReferenceTrajectory ref =
      constant_reference(Eigen::VectorXd::Constant(1, 1.0), horizon);
  CostWeights w = weights_from_reference(ref, sys, 9.0);
  CostWeights scaled = w;
  for (auto& q : scaled.Q) q *= 37.5;
  scaled.R *= 37.5;
  const TrackerGains a = riccati_backward(sys, ref, w);
  const TrackerGains b = riccati_backward(sys, ref, scaled);
  for (int t = 0; t < horizon; ++t) {
    CHECK((a.K[t] - b.K[t]).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((a.u_ff[t] - b.u_ff[t]).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("riccati P matrices stay symmetric positive semidefinite") {
  std::mt19937_64 rng(77);
  const LinearSystem sys = double_integrator(2, 0.05);
  const int horizon = 40;
  ReferenceTrajectory ref;
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < horizon; ++t) {
    ReferenceStep step;
    step.mean = Eigen::VectorXd::Zero(2);
    step.mean << gauss(rng), gauss(rng);
    step.cov = Eigen::Vector2d(0.1 + 0.05 * t, 0.2).asDiagonal();
    ref.steps.push_back(step);
  }
  const CostWeights w = weights_from_reference(ref, sys);
  const TrackerGains gains = riccati_backward(sys, ref, w);
  for (const Eigen::MatrixXd& p : gains.P) {
    CHECK((p - p.transpose()).cwiseAbs().maxCoeff() < 1e-9);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(p);
    CHECK(eig.eigenvalues().minCoeff() > -1e-9);
  }
}
