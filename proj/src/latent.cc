// src/latent.cc

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

#include "imitate/latent.h"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "imitate/error.h"

namespace imitate {

namespace {

double noise_floor(const Eigen::MatrixXd& scatter) {
  return 1e-6 * std::max(scatter.trace(), 0.0) /
             static_cast<double>(scatter.rows()) +
         1e-12;
}

}  // namespace

MfaFactorization mfa_fit(const Eigen::MatrixXd& scatter, int latent_dim,
                         int inner_iters, bool mppca,
                         const MfaFactorization* warm_start) {
  const Eigen::Index dim = scatter.rows();
  if (latent_dim < 1 || latent_dim >= dim) {
    throw InputError("mfa_fit: latent dimension must lie in [1, D)");
  }
  const double floor = noise_floor(scatter);

  MfaFactorization fit;
  if (warm_start && warm_start->loading.rows() == dim &&
      warm_start->loading.cols() == latent_dim) {
    fit = *warm_start;
  } else {
    // PPCA-flavoured start: principal subspace of the scatter with the
    // mean residual eigenvalue subtracted, residual variance in the noise
    // term.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scatter);
    if (eig.info() != Eigen::Success) {
      throw NumericError("mfa_fit: eigendecomposition failed");
    }
    double residual = 0.0;
    for (Eigen::Index c = 0; c < dim - latent_dim; ++c) {
      residual += eig.eigenvalues()(c);
    }
    residual /= static_cast<double>(dim - latent_dim);
    fit.loading.resize(dim, latent_dim);
    for (int c = 0; c < latent_dim; ++c) {
      const Eigen::Index src = dim - 1 - c;  // eigenvalues are ascending
      fit.loading.col(c) =
          eig.eigenvectors().col(src) *
          std::sqrt(std::max(eig.eigenvalues()(src) - residual, floor));
    }
    fit.noise =
        (scatter.diagonal() - (fit.loading * fit.loading.transpose()).diagonal())
            .cwiseMax(floor);
    if (mppca) fit.noise.setConstant(fit.noise.mean());
  }

  // EM on the factor model given the scatter as sufficient statistic:
  //   beta = Lambda^T (Lambda Lambda^T + Psi)^{-1}
  //   Lambda' = S beta^T (I - beta Lambda + beta S beta^T)^{-1}
  //   Psi' = diag(S - Lambda' beta S)
  for (int it = 0; it < inner_iters; ++it) {
    Eigen::MatrixXd sigma = fit.loading * fit.loading.transpose();
    sigma.diagonal() += fit.noise;
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
      throw NumericError("mfa_fit: model covariance lost definiteness");
    }
    const Eigen::MatrixXd beta = llt.solve(fit.loading).transpose();  // d x D
    const Eigen::MatrixXd s_beta_t = scatter * beta.transpose();      // D x d
    Eigen::MatrixXd second =
        Eigen::MatrixXd::Identity(latent_dim, latent_dim) -
        beta * fit.loading + beta * s_beta_t;
    Eigen::MatrixXd loading_new =
        second.transpose().partialPivLu().solve(s_beta_t.transpose())
            .transpose();
    fit.noise = (scatter - loading_new * (beta * scatter))
                    .diagonal()
                    .cwiseMax(floor);
    if (mppca) fit.noise.setConstant(fit.noise.mean());
    fit.loading = std::move(loading_new);
  }
  return fit;
}

Eigen::MatrixXd mfa_covariance(const MfaFactorization& f) {
  Eigen::MatrixXd cov = f.loading * f.loading.transpose();
  cov.diagonal() += f.noise;
  return regularize_covariance(cov);
}

namespace {

// Weighted per-state-per-frame means and normalized scatters. resp is
// T x K; frame_data holds F matrices of T x D.
struct GridStats {
  Eigen::VectorXd counts;                             // K
  std::vector<std::vector<Eigen::VectorXd>> means;    // [K][F]
  std::vector<std::vector<Eigen::MatrixXd>> scatters; // [K][F]
};

GridStats grid_stats(const Eigen::MatrixXd& resp,
                     const std::vector<Eigen::MatrixXd>& frame_data) {
  const int k = static_cast<int>(resp.cols());
  const int f = static_cast<int>(frame_data.size());
  GridStats stats;
  stats.counts = resp.colwise().sum();
  stats.means.assign(k, std::vector<Eigen::VectorXd>(f));
  stats.scatters.assign(k, std::vector<Eigen::MatrixXd>(f));
  for (int i = 0; i < k; ++i) {
    if (stats.counts(i) <= 0.0) {
      throw NumericError("latent m-step: state " + std::to_string(i) +
                         " has zero responsibility mass");
    }
    for (int j = 0; j < f; ++j) {
      const Eigen::MatrixXd& x = frame_data[j];
      Eigen::VectorXd mean = x.transpose() * resp.col(i) / stats.counts(i);
      Eigen::MatrixXd centered = x.rowwise() - mean.transpose();
      Eigen::MatrixXd scatter =
          centered.transpose() * resp.col(i).asDiagonal() * centered /
          stats.counts(i);
      stats.means[i][j] = std::move(mean);
      stats.scatters[i][j] = 0.5 * (scatter + scatter.transpose());
    }
  }
  return stats;
}

}  // namespace

MfaMstepResult mfa_mstep(const Eigen::MatrixXd& resp,
                         const std::vector<Eigen::MatrixXd>& frame_data,
                         int latent_dim, int inner_iters, bool mppca,
                         const MfaParams* warm_start) {
  const GridStats stats = grid_stats(resp, frame_data);
  const int k = static_cast<int>(resp.cols());
  const int f = static_cast<int>(frame_data.size());

  MfaMstepResult out;
  out.means = stats.means;
  out.params.latent_dim = latent_dim;
  out.params.mppca = mppca;
  out.params.loadings.assign(k, std::vector<Eigen::MatrixXd>(f));
  out.params.noise.assign(k, std::vector<Eigen::VectorXd>(f));
  out.emissions.assign(k, std::vector<Gaussian>(f));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < f; ++j) {
      MfaFactorization warm;
      const MfaFactorization* warm_ptr = nullptr;
      if (warm_start && warm_start->latent_dim == latent_dim &&
          static_cast<int>(warm_start->loadings.size()) == k) {
        warm.loading = warm_start->loadings[i][j];
        warm.noise = warm_start->noise[i][j];
        warm_ptr = &warm;
      }
      const MfaFactorization fit = mfa_fit(stats.scatters[i][j], latent_dim,
                                           inner_iters, mppca, warm_ptr);
      out.params.loadings[i][j] = fit.loading;
      out.params.noise[i][j] = fit.noise;
      out.emissions[i][j].mean = stats.means[i][j];
      out.emissions[i][j].cov = mfa_covariance(fit);
    }
  }
  return out;
}

double semitied_aux(const std::vector<Eigen::MatrixXd>& scatters,
                    const Eigen::VectorXd& counts,
                    const Eigen::MatrixXd& inv_basis,
                    const std::vector<Eigen::VectorXd>& scales) {
  const Eigen::Index dim = inv_basis.rows();
  const double total = counts.sum();
  double aux = total * std::log(std::abs(inv_basis.determinant()));
  for (size_t i = 0; i < scatters.size(); ++i) {
    const Eigen::MatrixXd projected =
        inv_basis * scatters[i] * inv_basis.transpose();
    for (Eigen::Index r = 0; r < dim; ++r) {
      aux -= 0.5 * counts(i) *
             (std::log(scales[i](r)) + projected(r, r) / scales[i](r));
    }
  }
  return aux;
}

SemiTiedFrameFit semitied_fit(const std::vector<Eigen::MatrixXd>& scatters,
                              const Eigen::VectorXd& counts, int inner_iters,
                              const Eigen::MatrixXd* warm_basis) {
  const int k = static_cast<int>(scatters.size());
  const Eigen::Index dim = scatters.front().rows();
  const double total = counts.sum();

  double floor = 0.0;
  for (const auto& s : scatters) floor = std::max(floor, noise_floor(s));

  // Work with W = H^{-1}; rows of W are updated by the Gales (1999)
  // maximum-likelihood linear transform rule.
  Eigen::MatrixXd w = Eigen::MatrixXd::Identity(dim, dim);
  if (warm_basis && warm_basis->rows() == dim) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(*warm_basis);
    if (!lu.isInvertible()) {
      throw NumericError("semitied_fit: warm-start basis is singular");
    }
    w = lu.inverse();
  }

  std::vector<Eigen::VectorXd> scales(k, Eigen::VectorXd::Constant(dim, 1.0));
  auto update_scales = [&]() {
    for (int i = 0; i < k; ++i) {
      scales[i] =
          (w * scatters[i] * w.transpose()).diagonal().cwiseMax(floor);
    }
  };

  update_scales();
  for (int it = 0; it < inner_iters; ++it) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);
      for (int i = 0; i < k; ++i) {
        g += (counts(i) / scales[i](r)) * scatters[i];
      }
      Eigen::PartialPivLU<Eigen::MatrixXd> w_lu(w);
      const double det = w_lu.determinant();
      if (det == 0.0 || !std::isfinite(det)) {
        throw NumericError("semitied_fit: transform became singular");
      }
      // Cofactor vector of row r: det(W) times column r of W^{-1}.
      const Eigen::VectorXd cof =
          det * w_lu.inverse().col(r);
      Eigen::LLT<Eigen::MatrixXd> g_llt(g);
      if (g_llt.info() != Eigen::Success) {
        throw NumericError("semitied_fit: singular accumulated statistics");
      }
      const Eigen::VectorXd direction = g_llt.solve(cof);
      const double quad = cof.dot(direction);
      if (quad <= 0.0) {
        throw NumericError("semitied_fit: singular accumulated statistics");
      }
      w.row(r) = std::sqrt(total / quad) * direction.transpose();
    }
    update_scales();
  }

  SemiTiedFrameFit fit;
  Eigen::FullPivLU<Eigen::MatrixXd> w_lu(w);
  if (!w_lu.isInvertible()) {
    throw NumericError("semitied_fit: transform became singular");
  }
  fit.basis = w_lu.inverse();
  fit.scales = std::move(scales);
  return fit;
}

SemiTiedMstepResult semitied_mstep(const Eigen::MatrixXd& resp,
                                   const std::vector<Eigen::MatrixXd>& frame_data,
                                   int inner_iters,
                                   const SemiTiedParams* warm_start) {
  const GridStats stats = grid_stats(resp, frame_data);
  const int k = static_cast<int>(resp.cols());
  const int f = static_cast<int>(frame_data.size());

  SemiTiedMstepResult out;
  out.means = stats.means;
  out.params.basis.resize(f);
  out.params.scales.assign(k, std::vector<Eigen::VectorXd>(f));
  out.emissions.assign(k, std::vector<Gaussian>(f));
  for (int j = 0; j < f; ++j) {
    std::vector<Eigen::MatrixXd> scatters(k);
    for (int i = 0; i < k; ++i) scatters[i] = stats.scatters[i][j];
    const Eigen::MatrixXd* warm = nullptr;
    if (warm_start && static_cast<int>(warm_start->basis.size()) == f) {
      warm = &warm_start->basis[j];
    }
    const SemiTiedFrameFit fit =
        semitied_fit(scatters, stats.counts, inner_iters, warm);
    out.params.basis[j] = fit.basis;
    for (int i = 0; i < k; ++i) {
      out.params.scales[i][j] = fit.scales[i];
      out.emissions[i][j].mean = stats.means[i][j];
      out.emissions[i][j].cov = regularize_covariance(
          fit.basis * fit.scales[i].asDiagonal() * fit.basis.transpose());
    }
  }
  return out;
}

long count_parameters(CovStructure structure, int num_states, int num_frames,
                      int dim, int latent_dim) {
  const long k = num_states;
  const long f = num_frames;
  const long d = dim;
  const long shared = k * k + k;  // transitions + priors
  switch (structure) {
    case CovStructure::kFull:
      return k * (f * (d + d * (d + 1) / 2) + 2) + shared;
    case CovStructure::kSemiTied:
      return f * d * d + k * (2 * f * d + 2) + shared;
    case CovStructure::kMfa:
      return k * (f * (2 * d + d * latent_dim) + 2) + shared;
  }
  throw InputError("count_parameters: unknown structure");
}

long count_parameters(const std::vector<int>& latent_dims, int num_frames,
                      int dim) {
  const long k = static_cast<long>(latent_dims.size());
  if (k == 0) throw InputError("count_parameters: empty latent dims");
  long count = k * k + k;
  for (int di : latent_dims) {
    count += static_cast<long>(num_frames) * (2L * dim + dim * di) + 2;
  }
  return count;
}

}  // namespace imitate
