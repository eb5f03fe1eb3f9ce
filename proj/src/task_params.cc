// src/task_params.cc

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

#include "imitate/task_params.h"

#include <string>
#include <utility>

#include "imitate/error.h"

namespace imitate {

std::vector<Eigen::MatrixXd> project_demo(const Eigen::MatrixXd& demo,
                                          const FrameSet& frames) {
  if (frames.empty()) {
    throw InputError("project_demo: need at least one frame");
  }
  std::vector<Eigen::MatrixXd> views;
  views.reserve(frames.size());
  for (const AffineFrame& f : frames) {
    if (f.A.rows() != demo.cols()) {
      throw InputError("project_demo: frame dimension " +
                       std::to_string(f.A.rows()) +
                       " does not match data dimension " +
                       std::to_string(demo.cols()));
    }
    const AffineFrame inv = inverse_frame(f);
    views.push_back((demo * inv.A.transpose()).rowwise() + inv.b.transpose());
  }
  return views;
}

HsmmModel tp_em_fit(const Dataset& dataset, int num_states,
                    const EmConfig& config, EmReport* report) {
  if (dataset.demos.empty()) throw InputError("tp_em_fit: empty dataset");
  const size_t f = dataset.demos.front().frames.size();
  if (f < 1) {
    throw InputError("tp_em_fit: demonstrations carry no frames");
  }
  std::vector<std::vector<Eigen::MatrixXd>> frame_data;
  frame_data.reserve(dataset.demos.size());
  for (size_t m = 0; m < dataset.demos.size(); ++m) {
    const Demonstration& demo = dataset.demos[m];
    if (demo.frames.size() != f) {
      throw InputError("tp_em_fit: demo " + std::to_string(m) + " has " +
                       std::to_string(demo.frames.size()) +
                       " frames, expected " + std::to_string(f));
    }
    frame_data.push_back(project_demo(demo.points, demo.frames));
  }
  HsmmModel model =
      internal::fit_hsmm(frame_data, num_states, config, report);
  return estimate_durations(std::move(model), dataset);
}

AdaptedModel adapt(const HsmmModel& model, const FrameSet& new_frames) {
  const int f = model.num_frames();
  if (static_cast<int>(new_frames.size()) != f) {
    throw InputError("adapt: model has " + std::to_string(f) +
                     " frames, configuration supplies " +
                     std::to_string(new_frames.size()));
  }
  for (const AffineFrame& fr : new_frames) {
    if (fr.A.rows() != model.dim()) {
      throw InputError("adapt: frame dimension does not match the model");
    }
  }

  AdaptedModel adapted;
  adapted.frames = new_frames;
  adapted.source = model;
  adapted.model = model;
  adapted.model.structure = CovStructure::kFull;
  adapted.model.latent_dim = 0;
  adapted.model.mppca = false;
  adapted.model.mfa.reset();
  adapted.model.semitied.reset();
  for (int i = 0; i < model.num_states(); ++i) {
    std::vector<Gaussian> factors;
    factors.reserve(f);
    for (int j = 0; j < f; ++j) {
      factors.push_back(transform(model.emissions[i][j], new_frames[j]));
    }
    adapted.model.emissions[i] = {product_of_gaussians(factors)};
  }
  return adapted;
}

}  // namespace imitate
