// tests/test_gaussian.cc

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
#include <random>

#include <doctest.h>

#include "imitate/error.h"
#include "oracles.h"

using namespace imitate;

namespace {

Gaussian make_gaussian(const Eigen::VectorXd& mean,
                       const Eigen::MatrixXd& cov) {
  return Gaussian{mean, cov};
}

Gaussian gaussian_1d(double mean, double var) {
  Eigen::VectorXd m(1);
  m << mean;
  Eigen::MatrixXd c(1, 1);
  c << var;
  return {m, c};
}

Gaussian random_gaussian(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd mean(dim);
  Eigen::MatrixXd a(dim, dim);
  for (int r = 0; r < dim; ++r) {
    mean(r) = gauss(rng);
    for (int c = 0; c < dim; ++c) a(r, c) = gauss(rng);
  }
  return {mean, Eigen::MatrixXd(a * a.transpose() +
                                0.3 * Eigen::MatrixXd::Identity(dim, dim))};
}

}  // namespace

TEST_CASE("log_density of the standard normal at its mode") {
  const Gaussian g = gaussian_1d(0.0, 1.0);
  Eigen::VectorXd x(1);
  x << 0.0;
  CHECK(log_density(x, g) == doctest::Approx(std::log(1.0 / std::sqrt(2.0 * M_PI)))
                                 .epsilon(1e-12));
}

TEST_CASE("log_density at the mean is the normalization constant") {
  Eigen::VectorXd mean(2);
  mean << 0.4, -1.3;
  Eigen::MatrixXd cov(2, 2);
  cov << 1.5, 0.2, 0.2, 0.7;
  const Gaussian g = make_gaussian(mean, cov);
  const double expected =
      -0.5 * std::log(std::pow(2.0 * M_PI, 2) * cov.determinant());
  CHECK(log_density(mean, g) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("log_density hand case against a diagonal-factorized oracle") {
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(2);
  Eigen::MatrixXd cov = 2.0 * Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd x(2);
  x << 1.0, 1.0;
  // Diagonal covariance factorizes into independent 1-D densities.
  const double oracle =
      std::log(std::exp(-0.25) / std::sqrt(2.0 * M_PI * 2.0)) +
      std::log(std::exp(-0.25) / std::sqrt(2.0 * M_PI * 2.0));
  const double value = log_density(x, make_gaussian(mean, cov));
  CHECK(value == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(value == doctest::Approx(-std::log(4.0 * M_PI) - 0.5).epsilon(1e-12));
}

TEST_CASE("log_density rejects dimension mismatches") {
  const Gaussian g = gaussian_1d(0.0, 1.0);
  Eigen::VectorXd x(2);
  x << 0.0, 1.0;
  CHECK_THROWS_AS((void)log_density(x, g), InputError);
}

TEST_CASE("log_density rejects a covariance that stays indefinite") {
  Eigen::MatrixXd cov(2, 2);
  cov << 1.0, 0.0, 0.0, -4.0;
  const Gaussian g = make_gaussian(Eigen::VectorXd::Zero(2), cov);
  CHECK_THROWS_AS((void)log_density(Eigen::VectorXd::Zero(2), g),
                  NumericError);
}

TEST_CASE("exp(log_density) integrates to one") {
  SUBCASE("one dimension") {
    const Gaussian g = gaussian_1d(0.3, 0.8);
    GaussianLogPdf pdf(g);
    const int cells = 4000;
    const double lo = -12.0, hi = 12.0, h = (hi - lo) / cells;
    double acc = 0.0;
    for (int c = 0; c < cells; ++c) {
      Eigen::VectorXd x(1);
      x << lo + (c + 0.5) * h;
      acc += std::exp(pdf(x)) * h;
    }
    CHECK(acc == doctest::Approx(1.0).epsilon(1e-3));
  }
  SUBCASE("two dimensions") {
    Eigen::MatrixXd cov(2, 2);
    cov << 1.0, 0.4, 0.4, 0.6;
    const Gaussian g = make_gaussian(Eigen::VectorXd::Zero(2), cov);
    GaussianLogPdf pdf(g);
    const double mass = oracles::integrate_2d(
        [&](double a, double b) {
          Eigen::VectorXd x(2);
          x << a, b;
          return std::exp(pdf(x));
        },
        -9.0, 9.0, 600);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("transform by the identity frame is a no-op") {
  std::mt19937_64 rng(7);
  const Gaussian g = random_gaussian(3, rng);
  const Gaussian out = transform(g, identity_frame(3));
  CHECK((out.mean - g.mean).norm() == doctest::Approx(0.0));
  CHECK((out.cov - g.cov).norm() == doctest::Approx(0.0));
}

TEST_CASE("transform by a translation shifts the mean only") {
  std::mt19937_64 rng(8);
  const Gaussian g = random_gaussian(2, rng);
  AffineFrame f = identity_frame(2);
  f.b << 1.0, 2.0;
  const Gaussian out = transform(g, f);
  CHECK((out.mean - (g.mean + f.b)).norm() == doctest::Approx(0.0));
  CHECK((out.cov - g.cov).norm() == doctest::Approx(0.0));
}

TEST_CASE("transform matches Monte-Carlo moments") {
  // Scale 2, shift 1 applied to N(1, 1): closed form N(3, 4), verified by
  // pushing a million samples through the map.
  const Gaussian g = gaussian_1d(1.0, 1.0);
  AffineFrame f;
  f.A = Eigen::MatrixXd::Constant(1, 1, 2.0);
  f.b = Eigen::VectorXd::Constant(1, 1.0);
  const Gaussian out = transform(g, f);
  CHECK(out.mean(0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(out.cov(0, 0) == doctest::Approx(4.0).epsilon(1e-12));

  std::mt19937_64 rng(123);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = 1000000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double sample = 1.0 + gauss(rng);
    const double mapped = 2.0 * sample + 1.0;
    sum += mapped;
    sq += mapped * mapped;
  }
  const double mc_mean = sum / n;
  const double mc_var = sq / n - mc_mean * mc_mean;
  CHECK(out.mean(0) == doctest::Approx(mc_mean).epsilon(0.01));
  CHECK(out.cov(0, 0) == doctest::Approx(mc_var).epsilon(0.02));
}

TEST_CASE("transform rejects singular frames") {
  const Gaussian g = gaussian_1d(0.0, 1.0);
  AffineFrame f;
  f.A = Eigen::MatrixXd::Zero(1, 1);
  f.b = Eigen::VectorXd::Zero(1);
  CHECK_THROWS_AS((void)transform(g, f), InputError);
}

TEST_CASE("transform round-trips through the inverse frame") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const Gaussian g = random_gaussian(3, rng);
    std::normal_distribution<double> gauss(0.0, 1.0);
    AffineFrame f;
    f.A.resize(3, 3);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) f.A(r, c) = gauss(rng);
    }
    f.A += 2.0 * Eigen::MatrixXd::Identity(3, 3);
    f.b = Eigen::VectorXd::Random(3);
    const Gaussian back = transform(transform(g, f), inverse_frame(f));
    CHECK((back.mean - g.mean).norm() < 1e-9);
    CHECK((back.cov - g.cov).norm() < 1e-9);
  }
}

TEST_CASE("product of a single factor is that factor") {
  std::mt19937_64 rng(5);
  const Gaussian g = random_gaussian(2, rng);
  const Gaussian out = product_of_gaussians({g});
  CHECK((out.mean - g.mean).norm() < 1e-12);
  CHECK((out.cov - g.cov).norm() < 1e-12);
}

TEST_CASE("product of equal precisions lands midway") {
  const Gaussian out =
      product_of_gaussians({gaussian_1d(0.0, 1.0), gaussian_1d(2.0, 1.0)});
  CHECK(out.mean(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out.cov(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("product hand case against the grid oracle") {
  const Gaussian out =
      product_of_gaussians({gaussian_1d(0.0, 1.0), gaussian_1d(3.0, 0.5)});
  CHECK(out.mean(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(out.cov(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  const auto grid = oracles::product_moments_1d(0.0, 1.0, 3.0, 0.5);
  CHECK(out.mean(0) == doctest::Approx(grid.mean).epsilon(1e-4));
  CHECK(out.cov(0, 0) == doctest::Approx(grid.var).epsilon(1e-4));
}

TEST_CASE("product rejects an empty factor list") {
  CHECK_THROWS_AS((void)product_of_gaussians({}), InputError);
}

TEST_CASE("product is order-invariant") {
  std::mt19937_64 rng(42);
  std::vector<Gaussian> factors;
  for (int i = 0; i < 4; ++i) factors.push_back(random_gaussian(3, rng));
  const Gaussian a = product_of_gaussians(factors);
  std::reverse(factors.begin(), factors.end());
  std::swap(factors[1], factors[2]);
  const Gaussian b = product_of_gaussians(factors);
  CHECK((a.mean - b.mean).norm() < 1e-10);
  CHECK((a.cov - b.cov).norm() < 1e-10);
}

TEST_CASE("product precision is the sum of factor precisions") {
  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<Gaussian> factors;
    const int count = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < count; ++i) factors.push_back(random_gaussian(3, rng));
    const Gaussian out = product_of_gaussians(factors);
    Eigen::MatrixXd precision_sum = Eigen::MatrixXd::Zero(3, 3);
    for (const Gaussian& g : factors) precision_sum += g.cov.inverse();
    CHECK((out.cov.inverse() - precision_sum).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("regularize_covariance symmetrizes and floors") {
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 0.3, 0.1, 1.0;
  const Eigen::MatrixXd out = regularize_covariance(m);
  CHECK(out(0, 1) == doctest::Approx(out(1, 0)));
  CHECK(out(0, 0) > 1.0);
  const Eigen::MatrixXd zero = regularize_covariance(Eigen::MatrixXd::Zero(2, 2));
  Eigen::LLT<Eigen::MatrixXd> llt(zero);
  CHECK(llt.info() == Eigen::Success);
}
