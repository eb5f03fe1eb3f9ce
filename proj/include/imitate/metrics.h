// include/imitate/metrics.h

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

#ifndef IMITATE_METRICS_H_
#define IMITATE_METRICS_H_

#include <vector>

#include <Eigen/Dense>

namespace imitate {

/// Linear-interpolation resampling of a T x D trajectory to target_len
/// rows (endpoints preserved).
Eigen::MatrixXd resample(const Eigen::MatrixXd& traj, Eigen::Index target_len);

/// Mean over time of the squared Euclidean distance restricted to the
/// given dimension subset. Trajectories of different lengths are aligned
/// by resampling the shorter one. Throws InputError on an empty subset.
double mse(const Eigen::MatrixXd& traj_a, const Eigen::MatrixXd& traj_b,
           const std::vector<int>& dims);

/// Convenience overload over all dimensions.
double mse(const Eigen::MatrixXd& traj_a, const Eigen::MatrixXd& traj_b);

}  // namespace imitate

#endif  // IMITATE_METRICS_H_
