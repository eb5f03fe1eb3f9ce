// include/imitate/kmeans.h

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

#ifndef IMITATE_KMEANS_H_
#define IMITATE_KMEANS_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "imitate/gaussian.h"

namespace imitate {

struct KmeansResult {
  Eigen::VectorXd priors;          // cluster fractions, sums to 1
  std::vector<Gaussian> clusters;  // empirical mean/cov + floor
  std::vector<int> assignments;    // per-row cluster index
};

/// K-means clustering with k-means++ seeding, at most 100 Lloyd
/// iterations, distance ties broken to the lowest cluster index and empty
/// clusters re-seeded at the point farthest from its assigned center.
/// Deterministic for a fixed seed.
///
/// data: T x D matrix, rows are samples. Requires T >= k, k >= 1.
KmeansResult kmeans_init(const Eigen::MatrixXd& data, int k, uint64_t seed);

}  // namespace imitate

#endif  // IMITATE_KMEANS_H_
