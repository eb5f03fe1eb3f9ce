// src/kmeans.cc

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

#include "imitate/kmeans.h"

#include <limits>
#include <random>
#include <string>

#include "imitate/error.h"

namespace imitate {

namespace {

constexpr int kMaxIterations = 100;

// Index of the cluster with the smallest squared distance; ties go to the
// lowest index.
int nearest_center(const Eigen::MatrixXd& centers, int used,
                   const Eigen::VectorXd& point) {
  int best = 0;
  double best_d = (centers.row(0).transpose() - point).squaredNorm();
  for (int j = 1; j < used; ++j) {
    const double d = (centers.row(j).transpose() - point).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

}  // namespace

KmeansResult kmeans_init(const Eigen::MatrixXd& data, int k, uint64_t seed) {
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();
  if (k <= 0) {
    throw InputError("kmeans_init: cluster count must be positive");
  }
  if (n < k) {
    throw InputError("kmeans_init: " + std::to_string(n) +
                     " samples cannot support " + std::to_string(k) +
                     " clusters");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // k-means++ seeding: first center uniform, the rest proportional to the
  // squared distance to the nearest chosen center.
  Eigen::MatrixXd centers(k, d);
  centers.row(0) = data.row(static_cast<Eigen::Index>(unit(rng) * n) % n);
  Eigen::VectorXd min_sq = (data.rowwise() - centers.row(0))
                               .rowwise()
                               .squaredNorm();
  for (int j = 1; j < k; ++j) {
    const double total = min_sq.sum();
    Eigen::Index pick = 0;
    if (total <= 0.0) {
      pick = static_cast<Eigen::Index>(unit(rng) * n) % n;
    } else {
      double target = unit(rng) * total;
      double acc = 0.0;
      for (Eigen::Index t = 0; t < n; ++t) {
        acc += min_sq(t);
        if (acc >= target) {
          pick = t;
          break;
        }
        pick = t;
      }
    }
    centers.row(j) = data.row(pick);
    min_sq = min_sq.cwiseMin(
        (data.rowwise() - centers.row(j)).rowwise().squaredNorm());
  }

  std::vector<int> assign(n, -1);
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    bool changed = false;
    for (Eigen::Index t = 0; t < n; ++t) {
      const int j = nearest_center(centers, k, data.row(t).transpose());
      if (j != assign[t]) {
        assign[t] = j;
        changed = true;
      }
    }

    // Re-seed empty clusters at the point farthest from its assigned center.
    for (int j = 0; j < k; ++j) {
      bool empty = true;
      for (Eigen::Index t = 0; t < n && empty; ++t) {
        empty = assign[t] != j;
      }
      if (!empty) continue;
      Eigen::Index far_idx = 0;
      double far_d = -1.0;
      for (Eigen::Index t = 0; t < n; ++t) {
        const double dist =
            (data.row(t) - centers.row(assign[t])).squaredNorm();
        if (dist > far_d) {
          far_d = dist;
          far_idx = t;
        }
      }
      centers.row(j) = data.row(far_idx);
      assign[far_idx] = j;
      changed = true;
    }

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, d);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
    for (Eigen::Index t = 0; t < n; ++t) {
      sums.row(assign[t]) += data.row(t);
      counts(assign[t]) += 1.0;
    }
    for (int j = 0; j < k; ++j) {
      centers.row(j) = sums.row(j) / counts(j);
    }
    if (!changed) break;
  }

  KmeansResult result;
  result.assignments = assign;
  result.priors = Eigen::VectorXd::Zero(k);
  result.clusters.resize(k);
  for (int j = 0; j < k; ++j) {
    double count = 0.0;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
    for (Eigen::Index t = 0; t < n; ++t) {
      if (assign[t] == j) {
        mean += data.row(t).transpose();
        count += 1.0;
      }
    }
    mean /= count;
    Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index t = 0; t < n; ++t) {
      if (assign[t] == j) {
        Eigen::VectorXd c = data.row(t).transpose() - mean;
        scatter += c * c.transpose();
      }
    }
    result.priors(j) = count / static_cast<double>(n);
    result.clusters[j].mean = mean;
    result.clusters[j].cov = regularize_covariance(scatter / count);
  }
  return result;
}

}  // namespace imitate
