// include/imitate/sva.h

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

#ifndef IMITATE_SVA_H_
#define IMITATE_SVA_H_

#include <vector>

#include <Eigen/Dense>

#include "imitate/hsmm.h"

namespace imitate {

/// Penalties of the small-variance-asymptotics loss. lambda: new cluster,
/// lambda1: extra subspace dimension, lambda2: transition log-probability
/// weight, lambda3: new distinct transition, bandwidth: squared-distance
/// scale of the subspace projection weight.
struct SvaHyper {
  double lambda = 1.0;
  double lambda1 = 0.1;
  double lambda2 = 0.1;
  double lambda3 = 0.1;
  double bandwidth = 1.0;
};

/// One nonparametric cluster: mean, orthonormal subspace basis (D x dim)
/// and the running scatter (sum of centered outer products) it was
/// estimated from.
struct SvaCluster {
  Eigen::VectorXd mean;
  Eigen::MatrixXd basis;  // D x dim, orthonormal columns
  int dim = 0;
  long count = 0;
  Eigen::MatrixXd scatter;  // D x D, unnormalized
};

/// Streaming clustering state. transition_counts(i, j) counts realized
/// i -> j transitions of the assignment sequence; tau() derives the
/// number of distinct successors per state.
struct SvaState {
  std::vector<SvaCluster> clusters;
  Eigen::MatrixXi transition_counts;  // K x K
  int last_state = -1;
  std::vector<int> assignments;

  int num_clusters() const { return static_cast<int>(clusters.size()); }
  Eigen::VectorXi tau() const;
};

/// Distance of x to a cluster's affine subspace: the mean-centered point
/// minus its bandwidth-weighted projection onto the basis. With dim = 0
/// this is the Euclidean distance to the mean.
double subspace_distance(const Eigen::VectorXd& x, const SvaCluster& cluster,
                         double bandwidth);

/// The full loss over a data stream and its assignments:
///   sum_t dist^2 + lambda (K - 1) + lambda1 sum_i d_i
///   - lambda2 sum_t log a(z_t, z_{t+1}) + lambda3 sum_i max(tau_i - 1, 0),
/// with a the row-normalized transition counts.
double sva_loss(const SvaState& state, const Eigen::MatrixXd& data,
                const SvaHyper& hyper);

/// Online update with one observation: assign to the cheapest existing
/// cluster (subspace distance plus transition terms) or spawn a new one at
/// cost lambda (+lambda3 when it adds a distinct transition). The winner's
/// mean/scatter/counts update incrementally; its basis is refreshed, and
/// may grow a dimension, whenever the cluster count reaches a power of 2.
void sva_observe(SvaState& state, const Eigen::VectorXd& x,
                 const SvaHyper& hyper);

/// One batch coordinate-descent sweep over a previously streamed sequence:
/// sequential exact-delta reassignment (cluster parameters frozen, moves
/// accepted only when the full loss decreases) followed by a guarded
/// parameter refresh per cluster. The returned loss is non-increasing
/// sweep over sweep. Clusters are never deleted.
double sva_sweep(SvaState& state, const Eigen::MatrixXd& data,
                 const SvaHyper& hyper);

/// Converts the streamed state into a decodable model: cluster means,
/// covariances U diag(s) U^T + sigma^2 I from the retained scatter
/// spectrum, transitions from counts, durations from assignment run
/// lengths. s_max <= 0 picks twice the longest run.
HsmmModel sva_to_hsmm(const SvaState& state, int s_max = 0,
                      double residual_scale = 1e-2);

/// Median pairwise squared Euclidean distance of the rows; calibration
/// helper for the bandwidth.
double median_pairwise_sq_distance(const Eigen::MatrixXd& points);

}  // namespace imitate

#endif  // IMITATE_SVA_H_
