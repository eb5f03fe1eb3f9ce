// include/imitate/hsmm.h

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

#ifndef IMITATE_HSMM_H_
#define IMITATE_HSMM_H_

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "imitate/data.h"
#include "imitate/gaussian.h"
#include "imitate/latent.h"

namespace imitate {

/// Gaussian duration model N(s | mean, var) over the number of
/// consecutive steps spent in a state. var is a variance (squared steps).
struct DurationModel {
  double mean = 1.0;
  double var = 1.0;
};

/// Hidden semi-Markov model with per-state-per-frame Gaussian emissions.
/// F = 1 for plain models; F > 1 for task-parameterized ones.
struct HsmmModel {
  Eigen::VectorXd priors;                        // K
  Eigen::MatrixXd trans;                         // K x K, rows sum to 1
  std::vector<std::vector<Gaussian>> emissions;  // [K][F]
  std::vector<DurationModel> durations;          // K
  int s_max = 0;
  CovStructure structure = CovStructure::kFull;
  int latent_dim = 0;
  bool mppca = false;
  std::optional<MfaParams> mfa;
  std::optional<SemiTiedParams> semitied;

  int num_states() const { return static_cast<int>(emissions.size()); }
  int num_frames() const {
    return emissions.empty() ? 0 : static_cast<int>(emissions.front().size());
  }
  Eigen::Index dim() const {
    return emissions.empty() ? 0 : emissions.front().front().dim();
  }

  /// Transition matrix used by the duration-aware operations: the duration
  /// model replaces self-transitions, so the diagonal is zeroed and rows
  /// renormalized. Rows left empty (absorbing states, K = 1) keep a unit
  /// self-transition.
  Eigen::MatrixXd duration_transitions() const;
};

/// Throws InputError if the model's shapes and stochastic constraints are
/// inconsistent.
void validate_model(const HsmmModel& model);

/// Smoothed quantities of one demonstration under the model. alpha/beta are
/// stored in log space; gamma rows and zeta slices are normalized
/// probabilities.
struct PosteriorStats {
  Eigen::MatrixXd log_alpha;          // T x K
  Eigen::MatrixXd log_beta;           // T x K
  Eigen::MatrixXd gamma;              // T x K
  std::vector<Eigen::MatrixXd> zeta;  // T-1 slices of K x K
  double log_likelihood = 0.0;
};

/// Step-wise reference: one (mean, covariance, state) target per step.
struct ReferenceStep {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  int state = 0;
};

struct ReferenceTrajectory {
  std::vector<ReferenceStep> steps;

  Eigen::Index length() const {
    return static_cast<Eigen::Index>(steps.size());
  }
  Eigen::Index dim() const {
    return steps.empty() ? 0 : steps.front().mean.size();
  }
};

/// EM settings. Defaults follow the experiment configuration: tolerance
/// 1e-4 on the log-likelihood difference, at most 200 iterations.
struct EmConfig {
  int max_iterations = 200;
  double tolerance = 1e-4;
  uint64_t seed = 0;
  CovStructure structure = CovStructure::kFull;
  int latent_dim = 1;
  bool mppca = false;
  int mfa_inner_iters = 5;
  int semitied_inner_iters = 10;
  int s_max = 0;  // 0: use the longest demonstration
  Eigen::MatrixXd transition_mask;  // optional K x K 0/1 mask, empty = full
  // Weight of the normalized-time column appended to the k-means
  // initialization features (relative to the spatial spread); 0 disables
  // it. Keeps initial states temporally compact across demonstrations.
  double time_feature_weight = 2.0;
};

struct EmReport {
  std::vector<double> log_likelihoods;  // one entry per EM iteration
  bool converged = false;
};

/// T x K matrix of per-state emission log-densities. For F > 1 the
/// demonstration must carry matching frames; the emission term is the
/// product of per-frame densities of the projected observations.
Eigen::MatrixXd emission_log_densities(const HsmmModel& model,
                                       const Demonstration& demo);

/// Scaled forward-backward pass (log-space) with normalized smoothed
/// marginals. Throws NumericError, reporting the time index, if an
/// observation has zero probability under every state.
PosteriorStats forward_backward(const HsmmModel& model,
                                const Demonstration& demo);

/// Most likely hidden state sequence (max-product), ties to the lowest
/// state index.
std::vector<int> viterbi(const HsmmModel& model, const Demonstration& demo);

/// Baum-Welch fit of a K-state model, initialized by k-means. Ignores the
/// dataset's frames (use tp_em_fit for task-parameterized training).
/// Duration parameters are estimated afterwards from the most likely state
/// sequences. Deterministic for a fixed seed.
HsmmModel em_fit(const Dataset& dataset, int num_states,
                 const EmConfig& config = {}, EmReport* report = nullptr);

/// Re-estimates the duration models from per-demonstration Viterbi run
/// lengths: mean and (floored) variance per state. States never visited
/// get (1, floor) and a warning on stderr.
HsmmModel estimate_durations(HsmmModel model, const Dataset& dataset);

/// Normalized forward variable at the last step of the observed history;
/// the filtering distribution over states. Requires F = 1.
Eigen::VectorXd filter_state(const HsmmModel& model,
                             const Eigen::MatrixXd& obs_history);

/// Duration-aware forward variable over `horizon` steps, each row
/// rescaled to sum to 1. Observation terms are used for the prefix rows
/// only; later steps use a unit emission (prediction mode). Requires F = 1.
Eigen::MatrixXd hsmm_forward(const HsmmModel& model,
                             const Eigen::MatrixXd& obs_prefix, int horizon);

/// Step-wise reference trajectory: per-step argmax of the duration-aware
/// forward variable (ties to the lowest state index), carrying the state's
/// emission Gaussian. Requires F = 1.
ReferenceTrajectory decode_reference(const HsmmModel& model,
                                     const Eigen::VectorXd& initial_obs,
                                     int horizon);

/// Stochastic state sequence: durations drawn from the duration Gaussians
/// (rounded, clamped to [1, s_max]), successors from the transition rows.
/// Reproducible for a fixed seed.
std::vector<int> sample_states_stochastic(const HsmmModel& model, int horizon,
                                          uint64_t seed);

namespace internal {

/// Shared EM engine over pre-projected per-frame observations:
/// frame_data[m][j] is the T_m x D view of demo m in frame j.
HsmmModel fit_hsmm(const std::vector<std::vector<Eigen::MatrixXd>>& frame_data,
                   int num_states, const EmConfig& config, EmReport* report);

}  // namespace internal

}  // namespace imitate

#endif  // IMITATE_HSMM_H_
