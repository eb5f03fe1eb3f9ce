// tests/test_kmeans.cc

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

#include "imitate/kmeans.h"

#include <random>

#include <doctest.h>

#include "imitate/error.h"

using namespace imitate;

namespace {

// Two well-separated blobs around the given centers.
Eigen::MatrixXd two_blobs(const Eigen::Vector2d& c0, const Eigen::Vector2d& c1,
                          int per_blob, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 0.05);
  Eigen::MatrixXd data(2 * per_blob, 2);
  for (int i = 0; i < per_blob; ++i) {
    data.row(i) << c0.x() + gauss(rng), c0.y() + gauss(rng);
    data.row(per_blob + i) << c1.x() + gauss(rng), c1.y() + gauss(rng);
  }
  return data;
}

}  // namespace

TEST_CASE("k=1 recovers the sample mean and covariance") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd data(50, 2);
  for (int t = 0; t < 50; ++t) data.row(t) << gauss(rng), 2.0 + gauss(rng);

  const KmeansResult result = kmeans_init(data, 1, 0);
  CHECK(result.priors(0) == doctest::Approx(1.0));
  const Eigen::VectorXd mean = data.colwise().mean().transpose();
  CHECK((result.clusters[0].mean - mean).norm() < 1e-12);
  Eigen::MatrixXd centered = data.rowwise() - mean.transpose();
  Eigen::MatrixXd cov = centered.transpose() * centered / 50.0;
  CHECK((result.clusters[0].cov - cov).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("two separated blobs are recovered") {
  const Eigen::Vector2d c0(0.0, 0.0), c1(3.0, 1.0);
  const Eigen::MatrixXd data = two_blobs(c0, c1, 60, 17);
  const KmeansResult result = kmeans_init(data, 2, 4);
  // Match clusters to generating centers by proximity.
  for (const Eigen::Vector2d& center : {c0, c1}) {
    double best = 1e9;
    for (const Gaussian& g : result.clusters) {
      best = std::min(best, (g.mean - center).norm());
    }
    CHECK(best < 0.1);
  }
  CHECK(result.priors.sum() == doctest::Approx(1.0));
}

TEST_CASE("identical seeds give identical output") {
  const Eigen::MatrixXd data = two_blobs({0, 0}, {2, 2}, 40, 23);
  const KmeansResult a = kmeans_init(data, 3, 77);
  const KmeansResult b = kmeans_init(data, 3, 77);
  CHECK(a.assignments == b.assignments);
  for (int j = 0; j < 3; ++j) {
    CHECK((a.clusters[j].mean - b.clusters[j].mean).norm() == 0.0);
    CHECK((a.clusters[j].cov - b.clusters[j].cov).norm() == 0.0);
  }
}

TEST_CASE("invalid cluster counts are rejected") {
  const Eigen::MatrixXd data = Eigen::MatrixXd::Random(5, 2);
  CHECK_THROWS_AS((void)kmeans_init(data, 0, 0), InputError);
  CHECK_THROWS_AS((void)kmeans_init(data, 6, 0), InputError);
}

TEST_CASE("duplicated points still yield k clusters") {
  // Forces the empty-cluster re-seed path: only two distinct locations but
  // three clusters requested.
  Eigen::MatrixXd data(6, 1);
  data << 0.0, 0.0, 0.0, 5.0, 5.0, 5.1;
  const KmeansResult result = kmeans_init(data, 3, 1);
  CHECK(result.clusters.size() == 3);
  CHECK(result.priors.sum() == doctest::Approx(1.0));
}
