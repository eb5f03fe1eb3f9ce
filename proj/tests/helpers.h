// tests/helpers.h

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

#ifndef IMITATE_TESTS_HELPERS_H_
#define IMITATE_TESTS_HELPERS_H_

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "imitate/hsmm.h"

namespace imitate::testing {

// Hand-built 1-D model with unit-variance-style emissions.
inline HsmmModel scalar_model(const std::vector<double>& means, double var,
                              const Eigen::MatrixXd& trans,
                              const Eigen::VectorXd& priors,
                              const std::vector<DurationModel>& durations,
                              int s_max) {
  HsmmModel model;
  const int k = static_cast<int>(means.size());
  model.priors = priors;
  model.trans = trans;
  model.durations = durations;
  model.s_max = s_max;
  model.emissions.resize(k);
  for (int i = 0; i < k; ++i) {
    Gaussian g;
    g.mean = Eigen::VectorXd::Constant(1, means[i]);
    g.cov = Eigen::MatrixXd::Constant(1, 1, var);
    model.emissions[i] = {g};
  }
  return model;
}

// Random valid single-frame model for property tests.
inline HsmmModel random_model(int k, int dim, int s_max,
                              std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.1, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  HsmmModel model;
  model.priors.resize(k);
  for (int i = 0; i < k; ++i) model.priors(i) = unit(rng);
  model.priors /= model.priors.sum();
  model.trans.resize(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) model.trans(i, j) = unit(rng);
    model.trans.row(i) /= model.trans.row(i).sum();
  }
  model.s_max = s_max;
  model.emissions.resize(k);
  model.durations.resize(k);
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd mean(dim);
    Eigen::MatrixXd a(dim, dim);
    for (int r = 0; r < dim; ++r) {
      mean(r) = 2.0 * gauss(rng);
      for (int c = 0; c < dim; ++c) a(r, c) = 0.5 * gauss(rng);
    }
    Gaussian g;
    g.mean = mean;
    g.cov = a * a.transpose() + 0.4 * Eigen::MatrixXd::Identity(dim, dim);
    model.emissions[i] = {g};
    model.durations[i] = {1.0 + 2.5 * unit(rng), 0.5 + unit(rng)};
  }
  return model;
}

inline Eigen::MatrixXd random_points(int t_len, int dim,
                                     std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.5);
  Eigen::MatrixXd points(t_len, dim);
  for (int t = 0; t < t_len; ++t) {
    for (int d = 0; d < dim; ++d) points(t, d) = gauss(rng);
  }
  return points;
}

// Run-length encoding of a state sequence.
inline std::vector<std::pair<int, int>> run_lengths(
    const std::vector<int>& path) {
  std::vector<std::pair<int, int>> runs;
  for (size_t t = 0; t < path.size(); ++t) {
    if (runs.empty() || runs.back().first != path[t]) {
      runs.push_back({path[t], 1});
    } else {
      runs.back().second += 1;
    }
  }
  return runs;
}

}  // namespace imitate::testing

#endif  // IMITATE_TESTS_HELPERS_H_
