// tests/test_latent.cc

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
#include <random>

#include <doctest.h>

#include "imitate/error.h"
#include "imitate/generators.h"
#include "imitate/hsmm.h"

using namespace imitate;

namespace {

Eigen::MatrixXd sample_gaussian(const Eigen::MatrixXd& cov, int count,
                                uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Eigen::MatrixXd l = Eigen::LLT<Eigen::MatrixXd>(cov).matrixL();
  Eigen::MatrixXd data(count, cov.rows());
  Eigen::VectorXd z(cov.rows());
  for (int t = 0; t < count; ++t) {
    for (int d = 0; d < cov.rows(); ++d) z(d) = gauss(rng);
    data.row(t) = (l * z).transpose();
  }
  return data;
}

double gaussian_data_ll(const Eigen::MatrixXd& data, const Gaussian& g) {
  GaussianLogPdf pdf(g);
  double ll = 0.0;
  for (Eigen::Index t = 0; t < data.rows(); ++t) {
    ll += pdf(data.row(t).transpose());
  }
  return ll;
}

}  // namespace

TEST_CASE("count_parameters matches hand-tallied totals") {
  CHECK(count_parameters(CovStructure::kFull, 7, 2, 16) == 2198);
  CHECK(count_parameters(CovStructure::kSemiTied, 7, 2, 16) == 1030);
  CHECK(count_parameters(CovStructure::kMfa, 7, 2, 16, 1) == 742);
  CHECK(count_parameters(CovStructure::kMfa, 7, 2, 16, 4) == 1414);
  CHECK(count_parameters(CovStructure::kMfa, 7, 2, 16, 7) == 2086);
}

TEST_CASE("count_parameters accepts per-state dimensions") {
  // Uniform per-state dims must agree with the flat MFA formula.
  CHECK(count_parameters({4, 4, 4, 4, 4, 4, 4}, 2, 16) ==
        count_parameters(CovStructure::kMfa, 7, 2, 16, 4));
  CHECK(count_parameters({1, 2}, 1, 3) ==
        (2 * 2 + 2) + (1 * (6 + 3 * 1) + 2) + (1 * (6 + 3 * 2) + 2));
}

TEST_CASE("mfa_fit on factor-free noise drives the loadings to zero") {
  // Isotropic diagonal truth: any non-zero factor strictly hurts, so the
  // fitted loading must shrink to sampling-noise scale. (A generic
  // anisotropic diagonal is unidentifiable here: an axis-aligned factor
  // can absorb that axis's variance at identical likelihood.)
  Eigen::VectorXd psi = Eigen::VectorXd::Constant(4, 0.04);
  const Eigen::MatrixXd data =
      sample_gaussian(psi.asDiagonal(), 60000, 101);
  const Eigen::MatrixXd scatter = data.transpose() * data / data.rows();

  const MfaFactorization fit = mfa_fit(scatter, 1, 300, false);
  CHECK(fit.loading.col(0).norm() < 0.05);
  for (int d = 0; d < 4; ++d) {
    CHECK(fit.noise(d) == doctest::Approx(psi(d)).epsilon(0.10));
  }
}

TEST_CASE("mfa_fit with one factor reconstructs a one-factor covariance") {
  Eigen::VectorXd loading(3);
  loading << 0.8, -0.5, 0.3;
  Eigen::MatrixXd cov = loading * loading.transpose();
  cov.diagonal().array() += 0.05;
  const Eigen::MatrixXd data = sample_gaussian(cov, 4000, 55);
  const Eigen::MatrixXd scatter = data.transpose() * data / data.rows();

  const MfaFactorization fit = mfa_fit(scatter, 1, 200, false);
  const Eigen::MatrixXd rebuilt = mfa_covariance(fit);
  CHECK((rebuilt - scatter).norm() / scatter.norm() < 0.05);
}

TEST_CASE("mfa_fit rejects out-of-range latent dimensions") {
  const Eigen::MatrixXd scatter = Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS((void)mfa_fit(scatter, 0, 5, false), InputError);
  CHECK_THROWS_AS((void)mfa_fit(scatter, 3, 5, false), InputError);
}

TEST_CASE("mppca ties the noise to a single scale") {
  Eigen::MatrixXd cov(3, 3);
  cov << 1.0, 0.3, 0.1, 0.3, 0.6, 0.2, 0.1, 0.2, 0.9;
  const Eigen::MatrixXd data = sample_gaussian(cov, 2000, 7);
  const Eigen::MatrixXd scatter = data.transpose() * data / data.rows();
  const MfaFactorization fit = mfa_fit(scatter, 1, 50, true);
  CHECK(fit.noise.maxCoeff() == doctest::Approx(fit.noise.minCoeff()));
}

TEST_CASE("mfa with d = D-1 tracks the full-covariance likelihood") {
  const Dataset dataset = gen_zshape(4, 60, 0.05, 33);
  EmConfig full_config;
  full_config.seed = 9;
  full_config.max_iterations = 30;
  EmReport full_report;
  (void)em_fit(dataset, 3, full_config, &full_report);

  EmConfig mfa_config = full_config;
  mfa_config.structure = CovStructure::kMfa;
  mfa_config.latent_dim = 2;
  mfa_config.mfa_inner_iters = 20;
  EmReport mfa_report;
  (void)em_fit(dataset, 3, mfa_config, &mfa_report);

  const double full_ll = full_report.log_likelihoods.back();
  const double mfa_ll = mfa_report.log_likelihoods.back();
  CHECK(std::abs(full_ll - mfa_ll) <= 0.01 * std::abs(full_ll));
}

TEST_CASE("structured EM keeps the likelihood monotone") {
  const Dataset dataset = gen_zshape(3, 45, 0.03, 17);
  for (CovStructure structure :
       {CovStructure::kMfa, CovStructure::kSemiTied}) {
    EmConfig config;
    config.seed = 2;
    config.structure = structure;
    config.latent_dim = 1;
    config.max_iterations = 15;
    EmReport report;
    (void)em_fit(dataset, 3, config, &report);
    for (size_t i = 1; i < report.log_likelihoods.size(); ++i) {
      CHECK(report.log_likelihoods[i] >=
            report.log_likelihoods[i - 1] - 1e-6);
    }
  }
}

TEST_CASE("semi-tied fit with one state reaches the full-covariance fit") {
  Eigen::MatrixXd cov(3, 3);
  cov << 1.2, 0.4, -0.2, 0.4, 0.8, 0.3, -0.2, 0.3, 0.6;
  const Eigen::MatrixXd data = sample_gaussian(cov, 400, 77);
  const Eigen::Index t_len = data.rows();

  const Eigen::MatrixXd resp = Eigen::MatrixXd::Ones(t_len, 1);
  const SemiTiedMstepResult fit = semitied_mstep(resp, {data}, 200);

  const Eigen::VectorXd mean = data.colwise().mean().transpose();
  const Eigen::MatrixXd centered = data.rowwise() - mean.transpose();
  const Eigen::MatrixXd ml_cov = centered.transpose() * centered / t_len;

  const double ll_full = gaussian_data_ll(data, {mean, ml_cov});
  const double ll_semitied = gaussian_data_ll(data, fit.emissions[0][0]);
  CHECK(ll_semitied == doctest::Approx(ll_full).epsilon(1e-6));
}

TEST_CASE("semi-tied recovers states sharing one rotation") {
  const double angle = 0.6;
  Eigen::MatrixXd rot(2, 2);
  rot << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  Eigen::VectorXd scale0(2), scale1(2);
  scale0 << 0.9, 0.05;
  scale1 << 0.1, 0.7;
  const Eigen::MatrixXd cov0 = rot * scale0.asDiagonal() * rot.transpose();
  const Eigen::MatrixXd cov1 = rot * scale1.asDiagonal() * rot.transpose();

  const int per_state = 1500;
  const Eigen::MatrixXd data0 = sample_gaussian(cov0, per_state, 5);
  const Eigen::MatrixXd data1 = sample_gaussian(cov1, per_state, 6);
  Eigen::MatrixXd data(2 * per_state, 2);
  data.topRows(per_state) = data0;
  data.bottomRows(per_state) = data1;
  Eigen::MatrixXd resp = Eigen::MatrixXd::Zero(2 * per_state, 2);
  resp.col(0).head(per_state).setOnes();
  resp.col(1).tail(per_state).setOnes();

  const SemiTiedMstepResult fit = semitied_mstep(resp, {data}, 100);

  // Full-covariance oracle on the same responsibilities.
  for (int i = 0; i < 2; ++i) {
    const Eigen::MatrixXd& block = i == 0 ? data0 : data1;
    const Eigen::VectorXd mean = block.colwise().mean().transpose();
    const Eigen::MatrixXd centered = block.rowwise() - mean.transpose();
    const Eigen::MatrixXd ml = centered.transpose() * centered / per_state;
    CHECK((fit.emissions[i][0].cov - ml).norm() / ml.norm() < 0.05);
  }
}

TEST_CASE("semi-tied auxiliary objective ascends per inner iteration") {
  Eigen::MatrixXd cov0(2, 2), cov1(2, 2);
  cov0 << 1.0, 0.6, 0.6, 0.8;
  cov1 << 0.5, -0.2, -0.2, 0.9;
  std::vector<Eigen::MatrixXd> scatters = {cov0, cov1};
  Eigen::VectorXd counts(2);
  counts << 120.0, 80.0;

  double prev = -std::numeric_limits<double>::infinity();
  for (int iters = 1; iters <= 8; ++iters) {
    const SemiTiedFrameFit fit = semitied_fit(scatters, counts, iters);
    const Eigen::MatrixXd inv_basis = fit.basis.inverse();
    const double aux = semitied_aux(scatters, counts, inv_basis, fit.scales);
    CHECK(aux >= prev - 1e-9);
    prev = aux;
  }
}

TEST_CASE("reconstructed covariances stay symmetric positive definite") {
  const Dataset dataset = gen_zshape(3, 45, 0.03, 27);
  for (CovStructure structure :
       {CovStructure::kMfa, CovStructure::kSemiTied}) {
    EmConfig config;
    config.seed = 14;
    config.structure = structure;
    config.latent_dim = 1;
    config.max_iterations = 8;
    const HsmmModel model = em_fit(dataset, 3, config);
    for (const auto& per_state : model.emissions) {
      for (const Gaussian& g : per_state) {
        CHECK((g.cov - g.cov.transpose()).cwiseAbs().maxCoeff() < 1e-9);
        Eigen::LLT<Eigen::MatrixXd> llt(g.cov);
        CHECK(llt.info() == Eigen::Success);
      }
    }
  }
}
