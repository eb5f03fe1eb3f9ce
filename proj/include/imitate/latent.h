// include/imitate/latent.h

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

#ifndef IMITATE_LATENT_H_
#define IMITATE_LATENT_H_

#include <vector>

#include <Eigen/Dense>

#include "imitate/gaussian.h"

namespace imitate {

/// Covariance structure of the emission model.
enum class CovStructure { kFull, kMfa, kSemiTied };

/// Factor-analysis decomposition Sigma = Lambda Lambda^T + diag(Psi),
/// one (loading, noise) pair per state and frame.
struct MfaParams {
  int latent_dim = 0;
  bool mppca = false;  // isotropic noise Psi = sigma^2 I
  std::vector<std::vector<Eigen::MatrixXd>> loadings;  // [K][F], D x d
  std::vector<std::vector<Eigen::VectorXd>> noise;     // [K][F], D
};

/// Semi-tied decomposition Sigma_i = H diag(scale_i) H^T with the basis H
/// shared across states within a frame.
struct SemiTiedParams {
  std::vector<Eigen::MatrixXd> basis;                // [F], D x D
  std::vector<std::vector<Eigen::VectorXd>> scales;  // [K][F], D
};

/// Single-component factor analysis fitted to a normalized weighted
/// scatter matrix by inner EM iterations. Warm-starting from a previous
/// fit keeps the outer EM ascent property.
struct MfaFactorization {
  Eigen::MatrixXd loading;  // D x d
  Eigen::VectorXd noise;    // D
};

MfaFactorization mfa_fit(const Eigen::MatrixXd& scatter, int latent_dim,
                         int inner_iters, bool mppca,
                         const MfaFactorization* warm_start = nullptr);

/// Reconstructs Lambda Lambda^T + diag(Psi), regularized.
Eigen::MatrixXd mfa_covariance(const MfaFactorization& f);

/// Result of a structured M-step over all states of all frames.
struct StructuredMstep {
  std::vector<std::vector<Eigen::VectorXd>> means;  // [K][F]
  std::vector<std::vector<Gaussian>> emissions;     // [K][F], reconstructed
};

struct MfaMstepResult : StructuredMstep {
  MfaParams params;
};

struct SemiTiedMstepResult : StructuredMstep {
  SemiTiedParams params;
};

/// MFA M-step: weighted means plus factor-analysis covariance fits.
/// resp is T x K (shared across frames), frame_data holds F matrices of
/// T x D. Requires 1 <= latent_dim < D.
MfaMstepResult mfa_mstep(const Eigen::MatrixXd& resp,
                         const std::vector<Eigen::MatrixXd>& frame_data,
                         int latent_dim, int inner_iters = 5,
                         bool mppca = false,
                         const MfaParams* warm_start = nullptr);

/// Semi-tied M-step: per frame, alternates closed-form diagonal updates
/// with Gales-style row-wise maximum-likelihood updates of the shared
/// basis for a fixed number of inner iterations.
SemiTiedMstepResult semitied_mstep(const Eigen::MatrixXd& resp,
                                   const std::vector<Eigen::MatrixXd>& frame_data,
                                   int inner_iters = 10,
                                   const SemiTiedParams* warm_start = nullptr);

/// Fit of one frame's shared basis given per-state scatters and counts.
struct SemiTiedFrameFit {
  Eigen::MatrixXd basis;                 // H, D x D
  std::vector<Eigen::VectorXd> scales;   // per state, D
};

SemiTiedFrameFit semitied_fit(const std::vector<Eigen::MatrixXd>& scatters,
                              const Eigen::VectorXd& counts, int inner_iters,
                              const Eigen::MatrixXd* warm_basis = nullptr);

/// Gales auxiliary objective for the semi-tied fit, up to an additive
/// constant: count-weighted log-likelihood of the diagonalized model.
/// inv_basis is H^{-1}.
double semitied_aux(const std::vector<Eigen::MatrixXd>& scatters,
                    const Eigen::VectorXd& counts,
                    const Eigen::MatrixXd& inv_basis,
                    const std::vector<Eigen::VectorXd>& scales);

/// Free-parameter count of a trained model: emission parameters per
/// structure, plus K^2 transitions, K priors and 2 duration parameters
/// per state.
long count_parameters(CovStructure structure, int num_states, int num_frames,
                      int dim, int latent_dim = 0);

/// Variant with a per-state latent dimension (nonparametric models).
long count_parameters(const std::vector<int>& latent_dims, int num_frames,
                      int dim);

}  // namespace imitate

#endif  // IMITATE_LATENT_H_
