// src/gaussian.cc

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

#include "imitate/gaussian.h"

#include <cmath>
#include <string>

#include <Eigen/LU>

#include "imitate/error.h"

namespace imitate {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kSingularFrameDet = 1e-12;
}  // namespace

AffineFrame identity_frame(Eigen::Index dim) {
  return {Eigen::MatrixXd::Identity(dim, dim), Eigen::VectorXd::Zero(dim)};
}

AffineFrame inverse_frame(const AffineFrame& f) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(f.A);
  if (!lu.isInvertible() ||
      std::abs(lu.determinant()) <= kSingularFrameDet) {
    throw InputError("frame matrix is singular");
  }
  Eigen::MatrixXd a_inv = lu.inverse();
  return {a_inv, -(a_inv * f.b)};
}

Eigen::MatrixXd regularize_covariance(const Eigen::MatrixXd& cov) {
  const Eigen::Index d = cov.rows();
  Eigen::MatrixXd sym = 0.5 * (cov + cov.transpose());
  const double eps = 1e-6 * std::max(sym.trace(), 0.0) / static_cast<double>(d)
                     + 1e-12;
  sym.diagonal().array() += eps;
  return sym;
}

GaussianLogPdf::GaussianLogPdf(const Gaussian& g) : mean_(g.mean) {
  llt_.compute(g.cov);
  if (llt_.info() != Eigen::Success) {
    llt_.compute(regularize_covariance(g.cov));
    if (llt_.info() != Eigen::Success) {
      throw NumericError(
          "covariance is not positive definite after regularization");
    }
  }
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < mean_.size(); ++i) {
    log_det += 2.0 * std::log(llt_.matrixL()(i, i));
  }
  log_norm_ = -0.5 * (static_cast<double>(mean_.size()) * kLog2Pi + log_det);
}

double GaussianLogPdf::operator()(const Eigen::VectorXd& x) const {
  if (x.size() != mean_.size()) {
    throw InputError("log_density: point has dimension " +
                     std::to_string(x.size()) + ", Gaussian has dimension " +
                     std::to_string(mean_.size()));
  }
  Eigen::VectorXd centered = x - mean_;
  // Quadratic form via the triangular solve L y = (x - mu).
  const double maha_sq =
      llt_.matrixL().solve(centered).squaredNorm();
  return log_norm_ - 0.5 * maha_sq;
}

double log_density(const Eigen::VectorXd& x, const Gaussian& g) {
  return GaussianLogPdf(g)(x);
}

Gaussian transform(const Gaussian& g, const AffineFrame& f) {
  if (f.A.rows() != g.dim() || f.A.cols() != g.dim() ||
      f.b.size() != g.dim()) {
    throw InputError("transform: frame and Gaussian dimensions differ");
  }
  if (std::abs(f.A.determinant()) <= kSingularFrameDet) {
    throw InputError("transform: frame matrix is singular");
  }
  Gaussian out;
  out.mean = f.A * g.mean + f.b;
  Eigen::MatrixXd cov = f.A * g.cov * f.A.transpose();
  out.cov = 0.5 * (cov + cov.transpose());
  return out;
}

Gaussian product_of_gaussians(const std::vector<Gaussian>& factors) {
  if (factors.empty()) {
    throw InputError("product_of_gaussians: empty factor list");
  }
  const Eigen::Index d = factors.front().dim();
  Eigen::MatrixXd precision = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd weighted_mean = Eigen::VectorXd::Zero(d);
  for (const Gaussian& g : factors) {
    if (g.dim() != d) {
      throw InputError("product_of_gaussians: mixed factor dimensions");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(g.cov);
    if (llt.info() != Eigen::Success) {
      throw NumericError("product_of_gaussians: factor is not positive definite");
    }
    precision += llt.solve(Eigen::MatrixXd::Identity(d, d));
    weighted_mean += llt.solve(g.mean);
  }
  Eigen::LLT<Eigen::MatrixXd> prec_llt(precision);
  if (prec_llt.info() != Eigen::Success) {
    throw NumericError("product_of_gaussians: precision sum is not positive definite");
  }
  Gaussian out;
  out.cov = prec_llt.solve(Eigen::MatrixXd::Identity(d, d));
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  out.mean = out.cov * weighted_mean;
  return out;
}

}  // namespace imitate
