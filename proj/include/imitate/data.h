// include/imitate/data.h

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

#ifndef IMITATE_DATA_H_
#define IMITATE_DATA_H_

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "imitate/gaussian.h"

namespace imitate {

/// One demonstration: T x D observation matrix (rows are time steps) plus
/// the coordinate frames it was recorded with. Frames may be empty for
/// plain single-frame data.
struct Demonstration {
  Eigen::MatrixXd points;
  std::vector<AffineFrame> frames;

  Eigen::Index length() const { return points.rows(); }
  Eigen::Index dim() const { return points.cols(); }
};

/// A set of demonstrations sharing dimension and frame count.
struct Dataset {
  int dim = 0;
  int num_frames = 0;
  std::vector<Demonstration> demos;
  std::map<std::string, std::string> metadata;
};

/// Validates shared dimension/frame-count invariants and finiteness.
/// Throws InputError naming the offending demo index.
void validate_dataset(const Dataset& dataset);

}  // namespace imitate

#endif  // IMITATE_DATA_H_
