// include/imitate/task_params.h

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

#ifndef IMITATE_TASK_PARAMS_H_
#define IMITATE_TASK_PARAMS_H_

#include <vector>

#include <Eigen/Dense>

#include "imitate/data.h"
#include "imitate/gaussian.h"
#include "imitate/hsmm.h"

namespace imitate {

/// Coordinate frames attached to objects of interest; one set per
/// demonstration (training) or per new situation (adaptation).
using FrameSet = std::vector<AffineFrame>;

/// Per-frame views of a demonstration: F matrices of A_j^{-1}(x - b_j)
/// rows. Throws InputError for singular frames or dimension mismatches.
std::vector<Eigen::MatrixXd> project_demo(const Eigen::MatrixXd& demo,
                                          const FrameSet& frames);

/// Task-parameterized EM: like em_fit but the emission likelihood is the
/// per-frame product of projected-observation densities and per-frame
/// Gaussians share the responsibilities. All demos must carry the same
/// number of frames (>= 1). With F = 1 identity frames this is exactly
/// em_fit.
HsmmModel tp_em_fit(const Dataset& dataset, int num_states,
                    const EmConfig& config = {}, EmReport* report = nullptr);

/// A model specialized to one frame configuration: F = 1 with the fused
/// global Gaussians, transitions and durations copied from the source.
/// Keeps its provenance: the task-parameterized source model and the
/// frame configuration it was adapted to.
struct AdaptedModel {
  HsmmModel model;
  HsmmModel source;
  FrameSet frames;
};

/// Adapts a task-parameterized model to new frames: per state, the global
/// Gaussian is the product of the linearly transformed per-frame
/// Gaussians.
AdaptedModel adapt(const HsmmModel& model, const FrameSet& new_frames);

}  // namespace imitate

#endif  // IMITATE_TASK_PARAMS_H_
