// src/sva.cc

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

#include "imitate/sva.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "imitate/error.h"

namespace imitate {

namespace {

constexpr double kMoveSlack = 1e-12;

bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

// Sum_j n_ij (log n_ij - log rowsum_i) for one row: the realized
// transition log-likelihood contribution of state i.
double row_log_term(const Eigen::MatrixXi& counts, int i) {
  const double row_sum = counts.row(i).sum();
  if (row_sum <= 0.0) return 0.0;
  double term = 0.0;
  for (int j = 0; j < counts.cols(); ++j) {
    const double n = counts(i, j);
    if (n > 0.0) term += n * (std::log(n) - std::log(row_sum));
  }
  return term;
}

double row_tau_term(const Eigen::MatrixXi& counts, int i) {
  int distinct = 0;
  for (int j = 0; j < counts.cols(); ++j) {
    if (counts(i, j) > 0) ++distinct;
  }
  return std::max(distinct - 1, 0);
}

// Orthonormal basis of the top-d scatter directions plus the descending
// eigenvalue spectrum.
struct Spectrum {
  Eigen::MatrixXd vectors;   // D x D, descending
  Eigen::VectorXd values;    // D, descending
};

Spectrum scatter_spectrum(const Eigen::MatrixXd& scatter) {
  Eigen::MatrixXd sym = 0.5 * (scatter + scatter.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  if (eig.info() != Eigen::Success) {
    throw NumericError("sva: scatter eigendecomposition failed");
  }
  const Eigen::Index d = sym.rows();
  Spectrum s;
  s.vectors.resize(d, d);
  s.values.resize(d);
  for (Eigen::Index c = 0; c < d; ++c) {
    s.vectors.col(c) = eig.eigenvectors().col(d - 1 - c);
    s.values(c) = std::max(eig.eigenvalues()(d - 1 - c), 0.0);
  }
  return s;
}

}  // namespace

Eigen::VectorXi SvaState::tau() const {
  const int k = num_clusters();
  Eigen::VectorXi t = Eigen::VectorXi::Zero(k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (transition_counts(i, j) > 0) ++t(i);
    }
  }
  return t;
}

double subspace_distance(const Eigen::VectorXd& x, const SvaCluster& cluster,
                         double bandwidth) {
  if (x.size() != cluster.mean.size()) {
    throw InputError("subspace_distance: dimension mismatch");
  }
  const Eigen::VectorXd centered = x - cluster.mean;
  if (cluster.dim == 0) return centered.norm();
  const double rho = std::exp(-centered.squaredNorm() / bandwidth);
  const Eigen::VectorXd projected =
      cluster.basis * (cluster.basis.transpose() * centered);
  return (centered - rho * projected).norm();
}

double sva_loss(const SvaState& state, const Eigen::MatrixXd& data,
                const SvaHyper& hyper) {
  const Eigen::Index t_len = data.rows();
  if (static_cast<Eigen::Index>(state.assignments.size()) != t_len) {
    throw InputError("sva_loss: assignments do not cover the data");
  }
  const int k = state.num_clusters();

  double loss = 0.0;
  for (Eigen::Index t = 0; t < t_len; ++t) {
    const double dist = subspace_distance(
        data.row(t).transpose(), state.clusters[state.assignments[t]],
        hyper.bandwidth);
    loss += dist * dist;
  }
  loss += hyper.lambda * (k - 1);
  for (const SvaCluster& c : state.clusters) loss += hyper.lambda1 * c.dim;
  for (int i = 0; i < k; ++i) {
    loss -= hyper.lambda2 * row_log_term(state.transition_counts, i);
    loss += hyper.lambda3 * row_tau_term(state.transition_counts, i);
  }
  return loss;
}

namespace {

// Basis refresh used by the online update: top-d eigenvectors of the
// running scatter; the dimension grows while the next residual eigenvalue
// outweighs lambda1.
void refresh_basis(SvaCluster& cluster, double lambda1) {
  const Eigen::Index d = cluster.mean.size();
  const Spectrum s = scatter_spectrum(cluster.scatter);
  while (cluster.dim + 1 <= static_cast<int>(d) - 1 &&
         s.values(cluster.dim) > lambda1) {
    ++cluster.dim;
  }
  cluster.basis = s.vectors.leftCols(cluster.dim);
}

}  // namespace

void sva_observe(SvaState& state, const Eigen::VectorXd& x,
                 const SvaHyper& hyper) {
  const int k = state.num_clusters();
  if (k == 0) {
    SvaCluster c;
    c.mean = x;
    c.dim = 0;
    c.basis.resize(x.size(), 0);
    c.count = 1;
    c.scatter = Eigen::MatrixXd::Zero(x.size(), x.size());
    state.clusters.push_back(std::move(c));
    state.transition_counts = Eigen::MatrixXi::Zero(1, 1);
    state.last_state = 0;
    state.assignments.push_back(0);
    return;
  }

  const int last = state.last_state;
  const double row_sum = state.transition_counts.row(last).sum();
  // The clamped tau term grows only once the row already has a distinct
  // successor.
  int distinct_out = 0;
  for (int j = 0; j < k; ++j) {
    if (state.transition_counts(last, j) > 0) ++distinct_out;
  }
  const bool tau_surcharge = distinct_out >= 1;

  int winner = -1;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < k; ++j) {
    const double dist =
        subspace_distance(x, state.clusters[j], hyper.bandwidth);
    // Laplace-smoothed transition probability over a binary support (this
    // successor vs anything else): stays finite for unseen successors and
    // does not shrink as clusters accumulate. The loss itself uses exact
    // counts.
    const double p_hat =
        (state.transition_counts(last, j) + 1.0) / (row_sum + 2.0);
    double cost = dist * dist - hyper.lambda2 * std::log(p_hat);
    if (state.transition_counts(last, j) == 0 && tau_surcharge) {
      cost += hyper.lambda3;
    }
    if (cost < best) {
      best = cost;
      winner = j;
    }
  }
  double spawn_cost = hyper.lambda;
  if (tau_surcharge) spawn_cost += hyper.lambda3;

  if (spawn_cost < best) {
    SvaCluster c;
    c.mean = x;
    c.dim = 0;
    c.basis.resize(x.size(), 0);
    c.count = 1;
    c.scatter = Eigen::MatrixXd::Zero(x.size(), x.size());
    state.clusters.push_back(std::move(c));
    Eigen::MatrixXi grown = Eigen::MatrixXi::Zero(k + 1, k + 1);
    grown.topLeftCorner(k, k) = state.transition_counts;
    state.transition_counts = std::move(grown);
    winner = k;
    state.transition_counts(last, winner) += 1;
  } else {
    SvaCluster& c = state.clusters[winner];
    c.count += 1;
    const Eigen::VectorXd before = x - c.mean;
    c.mean += before / static_cast<double>(c.count);
    c.scatter += before * (x - c.mean).transpose();
    state.transition_counts(last, winner) += 1;
    if (is_power_of_two(c.count)) {
      refresh_basis(c, hyper.lambda1);
    }
  }
  state.assignments.push_back(winner);
  state.last_state = winner;
}

namespace {

// Exact change of the transition and tau loss terms caused by count edits,
// restricted to the affected rows.
class TransitionDelta {
 public:
  TransitionDelta(Eigen::MatrixXi& counts, const SvaHyper& hyper)
      : counts_(counts), hyper_(hyper) {}

  void snapshot_row(int i) {
    if (i < 0) return;
    for (int r : rows_) {
      if (r == i) return;
    }
    rows_.push_back(i);
    before_ += -hyper_.lambda2 * row_log_term(counts_, i) +
               hyper_.lambda3 * row_tau_term(counts_, i);
  }

  double after() const {
    double v = 0.0;
    for (int r : rows_) {
      v += -hyper_.lambda2 * row_log_term(counts_, r) +
           hyper_.lambda3 * row_tau_term(counts_, r);
    }
    return v - before_;
  }

 private:
  Eigen::MatrixXi& counts_;
  const SvaHyper& hyper_;
  std::vector<int> rows_;
  double before_ = 0.0;
};

}  // namespace

double sva_sweep(SvaState& state, const Eigen::MatrixXd& data,
                 const SvaHyper& hyper) {
  const Eigen::Index t_len = data.rows();
  if (static_cast<Eigen::Index>(state.assignments.size()) != t_len) {
    throw InputError("sva_sweep: stream the data through sva_observe first");
  }
  const Eigen::Index dim = data.cols();

  // Reassignment pass: parameters frozen, every accepted move strictly
  // decreases the exact loss.
  for (Eigen::Index t = 0; t < t_len; ++t) {
    const int cur = state.assignments[t];
    const int prev = t > 0 ? state.assignments[t - 1] : -1;
    const int next = t + 1 < t_len ? state.assignments[t + 1] : -1;
    const Eigen::VectorXd x = data.row(t).transpose();
    const double cur_dist =
        subspace_distance(x, state.clusters[cur], hyper.bandwidth);

    int k = state.num_clusters();
    int best_cand = -1;  // -1: stay; k: spawn
    double best_delta = 0.0;
    for (int c = 0; c <= k; ++c) {
      if (c == cur) continue;
      double delta = -cur_dist * cur_dist;
      if (c < k) {
        const double dist =
            subspace_distance(x, state.clusters[c], hyper.bandwidth);
        delta += dist * dist;
      } else {
        delta += hyper.lambda;  // spawn at x: zero distance, one more cluster
      }

      // Apply the candidate counts edit, measure, revert.
      Eigen::MatrixXi& counts = state.transition_counts;
      const bool spawn = c == k;
      Eigen::MatrixXi saved;
      if (spawn) {
        saved = counts;
        Eigen::MatrixXi grown = Eigen::MatrixXi::Zero(k + 1, k + 1);
        grown.topLeftCorner(k, k) = counts;
        counts = std::move(grown);
      }
      TransitionDelta td(counts, hyper);
      if (prev >= 0) td.snapshot_row(prev);
      if (next >= 0) {
        td.snapshot_row(cur);
        td.snapshot_row(c);
      }
      if (prev >= 0) {
        counts(prev, cur) -= 1;
        counts(prev, c) += 1;
      }
      if (next >= 0) {
        counts(cur, next) -= 1;
        counts(c, next) += 1;
      }
      delta += td.after();
      // Revert.
      if (spawn) {
        counts = saved;
      } else {
        if (prev >= 0) {
          counts(prev, cur) += 1;
          counts(prev, c) -= 1;
        }
        if (next >= 0) {
          counts(cur, next) += 1;
          counts(c, next) -= 1;
        }
      }

      if (delta < best_delta - kMoveSlack) {
        best_delta = delta;
        best_cand = c;
      }
    }

    if (best_cand < 0) continue;
    const bool spawn = best_cand == k;
    if (spawn) {
      SvaCluster c;
      c.mean = x;
      c.dim = 0;
      c.basis.resize(dim, 0);
      c.count = 0;  // membership recounted in the refresh pass
      c.scatter = Eigen::MatrixXd::Zero(dim, dim);
      state.clusters.push_back(std::move(c));
      Eigen::MatrixXi grown = Eigen::MatrixXi::Zero(k + 1, k + 1);
      grown.topLeftCorner(k, k) = state.transition_counts;
      state.transition_counts = std::move(grown);
    }
    if (prev >= 0) {
      state.transition_counts(prev, cur) -= 1;
      state.transition_counts(prev, best_cand) += 1;
    }
    if (next >= 0) {
      state.transition_counts(cur, next) -= 1;
      state.transition_counts(best_cand, next) += 1;
    }
    state.assignments[t] = best_cand;
  }
  if (t_len > 0) state.last_state = state.assignments[t_len - 1];

  // Guarded refresh: accept a cluster's new mean/basis/dimension only when
  // its local distance-plus-dimension cost does not increase.
  const int k = state.num_clusters();
  for (int i = 0; i < k; ++i) {
    std::vector<Eigen::Index> members;
    for (Eigen::Index t = 0; t < t_len; ++t) {
      if (state.assignments[t] == i) members.push_back(t);
    }
    SvaCluster& cluster = state.clusters[i];
    if (members.empty()) {
      cluster.count = 0;
      continue;
    }

    Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
    for (Eigen::Index t : members) mean += data.row(t).transpose();
    mean /= static_cast<double>(members.size());
    Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index t : members) {
      const Eigen::VectorXd c = data.row(t).transpose() - mean;
      scatter += c * c.transpose();
    }
    const Spectrum spec = scatter_spectrum(scatter);

    auto local_cost = [&](const SvaCluster& c) {
      double cost = hyper.lambda1 * c.dim;
      for (Eigen::Index t : members) {
        const double dist =
            subspace_distance(data.row(t).transpose(), c, hyper.bandwidth);
        cost += dist * dist;
      }
      return cost;
    };

    SvaCluster candidate;
    candidate.mean = mean;
    candidate.scatter = scatter;
    candidate.count = static_cast<long>(members.size());
    candidate.dim = cluster.dim;
    candidate.basis = spec.vectors.leftCols(candidate.dim);
    double cand_cost = local_cost(candidate);
    while (candidate.dim + 1 <= static_cast<int>(dim) - 1) {
      SvaCluster grown = candidate;
      grown.dim += 1;
      grown.basis = spec.vectors.leftCols(grown.dim);
      const double grown_cost = local_cost(grown);
      if (grown_cost < cand_cost - kMoveSlack) {
        candidate = std::move(grown);
        cand_cost = grown_cost;
      } else {
        break;
      }
    }

    if (cand_cost <= local_cost(cluster) + kMoveSlack) {
      cluster = std::move(candidate);
    } else {
      cluster.count = static_cast<long>(members.size());
    }
  }

  return sva_loss(state, data, hyper);
}

HsmmModel sva_to_hsmm(const SvaState& state, int s_max,
                      double residual_scale) {
  const int k = state.num_clusters();
  if (k == 0) throw InputError("sva_to_hsmm: empty state");
  if (state.assignments.empty()) {
    throw InputError("sva_to_hsmm: no assignments streamed");
  }
  const Eigen::Index dim = state.clusters.front().mean.size();

  HsmmModel model;
  model.structure = CovStructure::kFull;
  model.emissions.assign(k, std::vector<Gaussian>(1));
  model.durations.assign(k, DurationModel{});
  model.priors = Eigen::VectorXd::Zero(k);
  model.trans = Eigen::MatrixXd::Zero(k, k);

  for (int i = 0; i < k; ++i) {
    const SvaCluster& c = state.clusters[i];
    Eigen::MatrixXd cov =
        residual_scale * Eigen::MatrixXd::Identity(dim, dim);
    if (c.dim > 0 && c.count > 0) {
      const Spectrum spec = scatter_spectrum(c.scatter);
      for (int r = 0; r < c.dim; ++r) {
        const double scale = spec.values(r) / static_cast<double>(c.count);
        cov += scale * spec.vectors.col(r) * spec.vectors.col(r).transpose();
      }
    }
    model.emissions[i][0].mean = c.mean;
    model.emissions[i][0].cov = regularize_covariance(cov);
  }

  for (int z : state.assignments) model.priors(z) += 1.0;
  model.priors /= model.priors.sum();

  for (int i = 0; i < k; ++i) {
    const double row_sum = state.transition_counts.row(i).sum();
    if (row_sum > 0.0) {
      model.trans.row(i) =
          state.transition_counts.row(i).cast<double>() / row_sum;
    } else {
      model.trans(i, i) = 1.0;
    }
  }

  std::vector<std::vector<double>> runs(k);
  size_t start = 0;
  int longest_run = 1;
  const std::vector<int>& z = state.assignments;
  for (size_t t = 1; t <= z.size(); ++t) {
    if (t == z.size() || z[t] != z[start]) {
      const int len = static_cast<int>(t - start);
      runs[z[start]].push_back(len);
      longest_run = std::max(longest_run, len);
      start = t;
    }
  }
  for (int i = 0; i < k; ++i) {
    if (runs[i].empty()) {
      model.durations[i] = {1.0, 1.0};
      continue;
    }
    double mean = 0.0;
    for (double r : runs[i]) mean += r;
    mean /= static_cast<double>(runs[i].size());
    double var = 0.0;
    for (double r : runs[i]) var += (r - mean) * (r - mean);
    var /= static_cast<double>(runs[i].size());
    model.durations[i] = {mean, std::max(var, 1.0)};
  }
  model.s_max = s_max > 0 ? s_max : 2 * longest_run;
  return model;
}

double median_pairwise_sq_distance(const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  if (n < 2) throw InputError("median_pairwise_sq_distance: need >= 2 points");
  std::vector<double> dists;
  dists.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a + 1; b < n; ++b) {
      dists.push_back((points.row(a) - points.row(b)).squaredNorm());
    }
  }
  std::sort(dists.begin(), dists.end());
  const size_t mid = dists.size() / 2;
  if (dists.size() % 2 == 1) return dists[mid];
  return 0.5 * (dists[mid - 1] + dists[mid]);
}

}  // namespace imitate
