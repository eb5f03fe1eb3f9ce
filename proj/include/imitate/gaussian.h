// include/imitate/gaussian.h

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

#ifndef IMITATE_GAUSSIAN_H_
#define IMITATE_GAUSSIAN_H_

#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

namespace imitate {

/// Multivariate Gaussian with mean and symmetric positive-definite
/// covariance. The atomic emission/belief unit shared by every module.
struct Gaussian {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  Eigen::Index dim() const { return mean.size(); }
};

/// Affine coordinate frame x_global = A * x_local + b.
struct AffineFrame {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;

  Eigen::Index dim() const { return b.size(); }
};

/// Identity frame of the given dimension.
AffineFrame identity_frame(Eigen::Index dim);

/// Inverse frame: maps global coordinates back to local ones.
/// Throws InputError if A is singular.
AffineFrame inverse_frame(const AffineFrame& f);

/// Symmetrize and add the relative regularization floor
/// eps = 1e-6 * trace / D (plus a tiny absolute term for degenerate
/// single-point statistics). Applied to every estimated covariance.
Eigen::MatrixXd regularize_covariance(const Eigen::MatrixXd& cov);

/// Precomputed Cholesky-based evaluator for log N(x | mean, cov).
/// Use this instead of repeated log_density calls in hot loops.
class GaussianLogPdf {
 public:
  explicit GaussianLogPdf(const Gaussian& g);

  double operator()(const Eigen::VectorXd& x) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double log_norm_;  // -0.5 * (D log 2pi + log det cov)
};

/// log N(x | g.mean, g.cov). Finite for all finite x.
/// Throws InputError on dimension mismatch, NumericError if the covariance
/// is not positive definite even after regularization.
double log_density(const Eigen::VectorXd& x, const Gaussian& g);

/// Push a Gaussian through an affine frame: N(A mu + b, A cov A^T).
/// The covariance is re-symmetrized. Throws InputError if A is singular.
Gaussian transform(const Gaussian& g, const AffineFrame& f);

/// Product of Gaussian densities, renormalized: the result precision is the
/// sum of the factor precisions and the mean is the precision-weighted
/// combination. Throws InputError on an empty factor list or mixed
/// dimensions.
Gaussian product_of_gaussians(const std::vector<Gaussian>& factors);

}  // namespace imitate

#endif  // IMITATE_GAUSSIAN_H_
