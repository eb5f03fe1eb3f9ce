// src/generators.cc

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

#include "imitate/generators.h"

#include <cmath>
#include <random>
#include <string>

#include "imitate/error.h"

namespace imitate {

namespace {

// Minimum-jerk interpolation between two points: zero velocity and
// acceleration at both ends.
Eigen::Vector2d min_jerk(const Eigen::Vector2d& from, const Eigen::Vector2d& to,
                         double tau) {
  const double s = tau * tau * tau * (10.0 - 15.0 * tau + 6.0 * tau * tau);
  return from + s * (to - from);
}

}  // namespace

Dataset gen_zshape(int n_demos, int steps, double noise, uint64_t seed) {
  if (n_demos < 1) throw InputError("gen_zshape: need at least one demo");
  if (steps < 3) throw InputError("gen_zshape: need at least three steps");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Z strokes in the xy plane; demos stacked along z.
  const Eigen::Vector3d corners[4] = {
      {0.0, 1.0, 0.0}, {1.0, 1.0, 0.0}, {0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
  const double spacing = 0.1;

  Dataset dataset;
  dataset.dim = 3;
  dataset.num_frames = 0;
  dataset.metadata["task"] = "zshape";
  for (int m = 0; m < n_demos; ++m) {
    const Eigen::Vector3d offset(0.0, 0.0, spacing * m);

    // Distribute the steps-1 increments over the three strokes so the
    // corners are sampled exactly.
    int seg_steps[3];
    const int base = (steps - 1) / 3;
    seg_steps[0] = base;
    seg_steps[1] = base;
    seg_steps[2] = steps - 1 - 2 * base;

    Demonstration demo;
    demo.points.resize(steps, 3);
    int row = 0;
    for (int seg = 0; seg < 3; ++seg) {
      const Eigen::Vector3d from = corners[seg] + offset;
      const Eigen::Vector3d to = corners[seg + 1] + offset;
      const int n = seg_steps[seg];
      for (int s = 0; s < n; ++s) {
        const double tau = static_cast<double>(s) / n;
        demo.points.row(row++) = (from + tau * (to - from)).transpose();
      }
    }
    demo.points.row(row) = (corners[3] + offset).transpose();

    if (noise > 0.0) {
      for (int t = 0; t < steps; ++t) {
        for (int d = 0; d < 3; ++d) {
          demo.points(t, d) += noise * gauss(rng);
        }
      }
    }
    dataset.demos.push_back(std::move(demo));
  }
  return dataset;
}

Dataset gen_pickplace(int n_demos, int steps, uint64_t seed) {
  if (n_demos < 2) throw InputError("gen_pickplace: need at least two demos");
  if (steps < 4) throw InputError("gen_pickplace: need at least four steps");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double noise = 0.004;

  Dataset dataset;
  dataset.dim = 2;
  dataset.num_frames = 2;
  dataset.metadata["task"] = "pickplace";

  std::string split;
  for (int m = 0; m < n_demos; ++m) {
    split += (m % 2 == 0) ? "train" : "test";
    if (m + 1 < n_demos) split += ",";

    const double lane = n_demos > 1
                            ? static_cast<double>(m) / (n_demos - 1)
                            : 0.5;
    const Eigen::Vector2d start(0.05 * (unit(rng) - 0.5),
                                0.2 + 0.35 * lane + 0.05 * (unit(rng) - 0.5));
    const Eigen::Vector2d goal(1.2 + 0.05 * (unit(rng) - 0.5),
                               0.15 + 0.3 * (1.0 - lane) +
                                   0.05 * (unit(rng) - 0.5));
    const double via_height = 0.25 + 0.08 * unit(rng);
    const Eigen::Vector2d via =
        0.5 * (start + goal) + Eigen::Vector2d(0.0, via_height);

    Demonstration demo;
    demo.points.resize(steps, 2);
    const int first_half = steps / 2;
    for (int t = 0; t < steps; ++t) {
      Eigen::Vector2d p;
      if (t < first_half) {
        p = min_jerk(start, via, static_cast<double>(t) / first_half);
      } else {
        p = min_jerk(via, goal,
                     static_cast<double>(t - first_half) /
                         (steps - first_half - 1));
      }
      if (t > 0 && t + 1 < steps) {
        p += noise * Eigen::Vector2d(gauss(rng), gauss(rng));
      }
      demo.points.row(t) = p.transpose();
    }

    // Frames sit on the realized endpoints, both oriented along the
    // start-to-goal direction.
    const Eigen::Vector2d b1 = demo.points.row(0).transpose();
    const Eigen::Vector2d b2 = demo.points.row(steps - 1).transpose();
    const Eigen::Vector2d dir = (b2 - b1).normalized();
    Eigen::Matrix2d rot;
    rot << dir.x(), -dir.y(), dir.y(), dir.x();
    demo.frames.push_back({rot, b1});
    demo.frames.push_back({rot, b2});
    dataset.demos.push_back(std::move(demo));
  }
  dataset.metadata["split"] = split;
  return dataset;
}

}  // namespace imitate
