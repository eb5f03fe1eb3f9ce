// src/metrics.cc

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

#include "imitate/metrics.h"

#include <algorithm>
#include <cmath>

#include "imitate/error.h"

namespace imitate {

Eigen::MatrixXd resample(const Eigen::MatrixXd& traj,
                         Eigen::Index target_len) {
  if (traj.rows() < 1 || target_len < 1) {
    throw InputError("resample: empty trajectory");
  }
  if (traj.rows() == target_len) return traj;
  Eigen::MatrixXd out(target_len, traj.cols());
  if (traj.rows() == 1 || target_len == 1) {
    for (Eigen::Index t = 0; t < target_len; ++t) out.row(t) = traj.row(0);
    return out;
  }
  const double scale = static_cast<double>(traj.rows() - 1) /
                       static_cast<double>(target_len - 1);
  for (Eigen::Index t = 0; t < target_len; ++t) {
    const double s = t * scale;
    const Eigen::Index lo =
        std::min(static_cast<Eigen::Index>(s), traj.rows() - 2);
    const double frac = s - static_cast<double>(lo);
    out.row(t) = (1.0 - frac) * traj.row(lo) + frac * traj.row(lo + 1);
  }
  return out;
}

double mse(const Eigen::MatrixXd& traj_a, const Eigen::MatrixXd& traj_b,
           const std::vector<int>& dims) {
  if (dims.empty()) throw InputError("mse: empty dimension subset");
  if (traj_a.cols() != traj_b.cols()) {
    throw InputError("mse: trajectories have different dimensions");
  }
  for (int d : dims) {
    if (d < 0 || d >= traj_a.cols()) {
      throw InputError("mse: dimension index out of range");
    }
  }
  const Eigen::Index len = std::max(traj_a.rows(), traj_b.rows());
  const Eigen::MatrixXd a = resample(traj_a, len);
  const Eigen::MatrixXd b = resample(traj_b, len);
  double acc = 0.0;
  for (Eigen::Index t = 0; t < len; ++t) {
    for (int d : dims) {
      const double diff = a(t, d) - b(t, d);
      acc += diff * diff;
    }
  }
  return acc / static_cast<double>(len);
}

double mse(const Eigen::MatrixXd& traj_a, const Eigen::MatrixXd& traj_b) {
  std::vector<int> dims(traj_a.cols());
  for (int d = 0; d < traj_a.cols(); ++d) dims[d] = d;
  return mse(traj_a, traj_b, dims);
}

}  // namespace imitate
