// src/hsmm.cc

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

#include "imitate/hsmm.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <random>
#include <string>

#include "imitate/error.h"
#include "imitate/kmeans.h"

namespace imitate {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kDurationVarFloor = 1.0;  // squared steps
constexpr double kLogSqrt2Pi = 0.9189385332046727;

double log_sum_exp(const Eigen::VectorXd& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;  // all -inf (or a nan propagates)
  return m + std::log((v.array() - m).exp().sum());
}

// log N(s | mean, var) for a scalar duration, evaluated at integer s
// without renormalization over [1, s_max].
double log_duration_density(const DurationModel& d, double s) {
  const double var = std::max(d.var, 1e-12);
  const double diff = s - d.mean;
  return -kLogSqrt2Pi - 0.5 * std::log(var) - 0.5 * diff * diff / var;
}

Eigen::MatrixXd log_matrix(const Eigen::MatrixXd& m) {
  return m.unaryExpr([](double v) { return v > 0.0 ? std::log(v) : kNegInf; });
}

// HMM forward pass in log space. Returns T x K log alpha.
Eigen::MatrixXd log_forward(const Eigen::VectorXd& priors,
                            const Eigen::MatrixXd& trans,
                            const Eigen::MatrixXd& log_b) {
  const Eigen::Index t_len = log_b.rows();
  const Eigen::Index k = log_b.cols();
  const Eigen::MatrixXd log_a = log_matrix(trans);
  const Eigen::VectorXd log_pi = log_matrix(priors);

  Eigen::MatrixXd log_alpha(t_len, k);
  log_alpha.row(0) = (log_pi + log_b.row(0).transpose()).transpose();
  for (Eigen::Index t = 1; t < t_len; ++t) {
    for (Eigen::Index i = 0; i < k; ++i) {
      log_alpha(t, i) =
          log_sum_exp(log_alpha.row(t - 1).transpose() + log_a.col(i)) +
          log_b(t, i);
    }
    if (!std::isfinite(log_sum_exp(log_alpha.row(t).transpose()))) {
      throw NumericError("observation at time step " + std::to_string(t) +
                         " has zero probability under all " +
                         std::to_string(k) + " states");
    }
  }
  return log_alpha;
}

struct FrameStats {
  double weight = 0.0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd scatter;  // normalized by weight
};

}  // namespace

Eigen::MatrixXd HsmmModel::duration_transitions() const {
  Eigen::MatrixXd a = trans;
  a.diagonal().setZero();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double row_sum = a.row(i).sum();
    if (row_sum > 0.0) {
      a.row(i) /= row_sum;
    } else {
      a(i, i) = 1.0;  // absorbing
    }
  }
  return a;
}

void validate_model(const HsmmModel& model) {
  const int k = model.num_states();
  if (k == 0) throw InputError("model has no states");
  if (model.priors.size() != k || model.trans.rows() != k ||
      model.trans.cols() != k ||
      static_cast<int>(model.durations.size()) != k) {
    throw InputError("model field sizes disagree with the state count");
  }
  if (std::abs(model.priors.sum() - 1.0) > 1e-6) {
    throw InputError("model priors do not sum to 1");
  }
  for (int i = 0; i < k; ++i) {
    if (std::abs(model.trans.row(i).sum() - 1.0) > 1e-6) {
      throw InputError("transition row " + std::to_string(i) +
                       " does not sum to 1");
    }
    if (model.emissions[i].size() != model.emissions.front().size()) {
      throw InputError("emission grid is ragged");
    }
  }
  if (model.s_max < 1) throw InputError("model s_max must be >= 1");
}

Eigen::MatrixXd emission_log_densities(const HsmmModel& model,
                                       const Demonstration& demo) {
  const int k = model.num_states();
  const int f = model.num_frames();
  const Eigen::Index t_len = demo.length();
  if (demo.dim() != model.dim()) {
    throw InputError("demonstration dimension " + std::to_string(demo.dim()) +
                     " does not match the model dimension " +
                     std::to_string(model.dim()));
  }
  if (f > 1 && static_cast<int>(demo.frames.size()) != f) {
    throw InputError("model expects " + std::to_string(f) +
                     " frames per demonstration, got " +
                     std::to_string(demo.frames.size()));
  }

  Eigen::MatrixXd log_b = Eigen::MatrixXd::Zero(t_len, k);
  for (int j = 0; j < f; ++j) {
    // Project into frame j when the model is task-parameterized.
    Eigen::MatrixXd projected;
    if (f > 1) {
      const AffineFrame inv = inverse_frame(demo.frames[j]);
      projected = (demo.points * inv.A.transpose()).rowwise() +
                  inv.b.transpose();
    } else {
      projected = demo.points;
    }
    for (int i = 0; i < k; ++i) {
      GaussianLogPdf pdf(model.emissions[i][j]);
      for (Eigen::Index t = 0; t < t_len; ++t) {
        log_b(t, i) += pdf(projected.row(t).transpose());
      }
    }
  }
  return log_b;
}

PosteriorStats forward_backward(const HsmmModel& model,
                                const Demonstration& demo) {
  const int k = model.num_states();
  const Eigen::Index t_len = demo.length();
  const Eigen::MatrixXd log_b = emission_log_densities(model, demo);
  const Eigen::MatrixXd log_a = log_matrix(model.trans);

  PosteriorStats stats;
  stats.log_alpha = log_forward(model.priors, model.trans, log_b);
  stats.log_likelihood = log_sum_exp(stats.log_alpha.row(t_len - 1).transpose());
  if (!std::isfinite(stats.log_likelihood)) {
    throw NumericError("observation sequence has zero probability");
  }

  stats.log_beta = Eigen::MatrixXd::Zero(t_len, k);
  for (Eigen::Index t = t_len - 2; t >= 0; --t) {
    for (int i = 0; i < k; ++i) {
      stats.log_beta(t, i) = log_sum_exp(
          log_a.row(i).transpose() + log_b.row(t + 1).transpose() +
          stats.log_beta.row(t + 1).transpose());
    }
  }

  stats.gamma.resize(t_len, k);
  for (Eigen::Index t = 0; t < t_len; ++t) {
    Eigen::VectorXd log_g =
        stats.log_alpha.row(t).transpose() + stats.log_beta.row(t).transpose();
    const double norm = log_sum_exp(log_g);
    stats.gamma.row(t) = (log_g.array() - norm).exp().transpose();
  }

  stats.zeta.reserve(t_len - 1);
  for (Eigen::Index t = 0; t + 1 < t_len; ++t) {
    Eigen::MatrixXd log_z(k, k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        log_z(i, j) = stats.log_alpha(t, i) + log_a(i, j) +
                      log_b(t + 1, j) + stats.log_beta(t + 1, j);
      }
    }
    const double norm = log_sum_exp(Eigen::Map<Eigen::VectorXd>(
        log_z.data(), log_z.size()));
    stats.zeta.push_back((log_z.array() - norm).exp());
  }
  return stats;
}

std::vector<int> viterbi(const HsmmModel& model, const Demonstration& demo) {
  const int k = model.num_states();
  const Eigen::Index t_len = demo.length();
  const Eigen::MatrixXd log_b = emission_log_densities(model, demo);
  const Eigen::MatrixXd log_a = log_matrix(model.trans);
  const Eigen::VectorXd log_pi = log_matrix(model.priors);

  Eigen::MatrixXd delta(t_len, k);
  Eigen::MatrixXi back(t_len, k);
  delta.row(0) = (log_pi + log_b.row(0).transpose()).transpose();
  back.row(0).setZero();
  for (Eigen::Index t = 1; t < t_len; ++t) {
    for (int i = 0; i < k; ++i) {
      int best_j = 0;
      double best = delta(t - 1, 0) + log_a(0, i);
      for (int j = 1; j < k; ++j) {
        const double cand = delta(t - 1, j) + log_a(j, i);
        if (cand > best) {
          best = cand;
          best_j = j;
        }
      }
      delta(t, i) = best + log_b(t, i);
      back(t, i) = best_j;
    }
  }

  std::vector<int> path(t_len);
  int state = 0;
  double best = delta(t_len - 1, 0);
  for (int i = 1; i < k; ++i) {
    if (delta(t_len - 1, i) > best) {
      best = delta(t_len - 1, i);
      state = i;
    }
  }
  for (Eigen::Index t = t_len - 1; t >= 0; --t) {
    path[t] = state;
    if (t > 0) state = back(t, state);
  }
  return path;
}

namespace internal {

HsmmModel fit_hsmm(const std::vector<std::vector<Eigen::MatrixXd>>& frame_data,
                   int num_states, const EmConfig& config, EmReport* report) {
  const int k = num_states;
  if (k < 1) throw InputError("em_fit: state count must be >= 1");
  if (frame_data.empty()) throw InputError("em_fit: empty dataset");
  const int f = static_cast<int>(frame_data.front().size());
  const Eigen::Index d = frame_data.front().front().cols();

  Eigen::Index total = 0;
  for (const auto& demo : frame_data) {
    if (static_cast<int>(demo.size()) != f) {
      throw InputError("em_fit: inconsistent frame count across demos");
    }
    total += demo.front().rows();
  }
  if (total < k) {
    throw InputError("em_fit: " + std::to_string(k) +
                     " states exceed the " + std::to_string(total) +
                     " available datapoints");
  }
  if (config.transition_mask.size() > 0 &&
      (config.transition_mask.rows() != k ||
       config.transition_mask.cols() != k)) {
    throw InputError("em_fit: transition mask must be K x K");
  }

  // k-means initialization on the per-frame-stacked features plus a
  // scaled normalized-time column. The time feature keeps the initial
  // states temporally compact and consistent across demonstrations, which
  // in turn keeps the empirical duration statistics informative; EM then
  // refines the states on the spatial features alone.
  Eigen::MatrixXd stacked(total, f * d + 1);
  Eigen::Index row = 0;
  for (const auto& demo : frame_data) {
    const Eigen::Index t_len = demo.front().rows();
    for (int j = 0; j < f; ++j) {
      stacked.block(row, j * d, t_len, d) = demo[j];
    }
    for (Eigen::Index t = 0; t < t_len; ++t) {
      stacked(row + t, f * d) =
          static_cast<double>(t) / std::max<Eigen::Index>(t_len - 1, 1);
    }
    row += t_len;
  }
  if (config.time_feature_weight > 0.0) {
    const Eigen::MatrixXd spatial = stacked.leftCols(f * d);
    const Eigen::RowVectorXd col_mean = spatial.colwise().mean();
    const double spread = std::sqrt(
        (spatial.rowwise() - col_mean).squaredNorm() /
        static_cast<double>(total * f * d));
    stacked.col(f * d) *= config.time_feature_weight * spread;
  } else {
    stacked.conservativeResize(total, f * d);
  }
  const KmeansResult km = kmeans_init(stacked, k, config.seed);

  HsmmModel model;
  model.priors = km.priors;
  model.trans = Eigen::MatrixXd::Constant(k, k, 1.0 / k);
  model.structure = config.structure;
  model.latent_dim =
      config.structure == CovStructure::kMfa ? config.latent_dim : 0;
  model.mppca = config.mppca;
  model.durations.assign(k, DurationModel{});
  model.emissions.assign(k, std::vector<Gaussian>(f));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < f; ++j) {
      double weight = 0.0;
      Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
      row = 0;
      for (const auto& demo : frame_data) {
        const Eigen::Index t_len = demo.front().rows();
        for (Eigen::Index t = 0; t < t_len; ++t) {
          if (km.assignments[row + t] == i) {
            mean += demo[j].row(t).transpose();
            weight += 1.0;
          }
        }
        row += t_len;
      }
      mean /= weight;
      Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(d, d);
      row = 0;
      for (const auto& demo : frame_data) {
        const Eigen::Index t_len = demo.front().rows();
        for (Eigen::Index t = 0; t < t_len; ++t) {
          if (km.assignments[row + t] == i) {
            const Eigen::VectorXd c = demo[j].row(t).transpose() - mean;
            scatter += c * c.transpose();
          }
        }
        row += t_len;
      }
      model.emissions[i][j].mean = mean;
      model.emissions[i][j].cov = regularize_covariance(scatter / weight);
    }
  }

  if (config.structure == CovStructure::kMfa &&
      (config.latent_dim < 1 || config.latent_dim >= d)) {
    throw InputError("em_fit: MFA latent dimension must lie in [1, D)");
  }

  const int max_em = std::max(config.max_iterations, 1);
  double prev_ll = kNegInf;
  if (report) {
    report->log_likelihoods.clear();
    report->converged = false;
  }

  std::vector<Eigen::MatrixXd> gammas(frame_data.size());
  for (int iter = 0; iter < max_em; ++iter) {
    // E-step.
    double total_ll = 0.0;
    Eigen::VectorXd pi_acc = Eigen::VectorXd::Zero(k);
    Eigen::MatrixXd trans_acc = Eigen::MatrixXd::Zero(k, k);
    for (size_t m = 0; m < frame_data.size(); ++m) {
      const Eigen::Index t_len = frame_data[m].front().rows();
      Eigen::MatrixXd log_b = Eigen::MatrixXd::Zero(t_len, k);
      for (int j = 0; j < f; ++j) {
        for (int i = 0; i < k; ++i) {
          GaussianLogPdf pdf(model.emissions[i][j]);
          for (Eigen::Index t = 0; t < t_len; ++t) {
            log_b(t, i) += pdf(frame_data[m][j].row(t).transpose());
          }
        }
      }
      const Eigen::MatrixXd log_a = log_matrix(model.trans);
      Eigen::MatrixXd log_alpha = log_forward(model.priors, model.trans, log_b);
      const double ll = log_sum_exp(log_alpha.row(t_len - 1).transpose());
      if (!std::isfinite(ll)) {
        throw NumericError("em_fit: demonstration " + std::to_string(m) +
                           " has zero probability");
      }
      total_ll += ll;

      Eigen::MatrixXd log_beta = Eigen::MatrixXd::Zero(t_len, k);
      for (Eigen::Index t = t_len - 2; t >= 0; --t) {
        for (int i = 0; i < k; ++i) {
          log_beta(t, i) = log_sum_exp(log_a.row(i).transpose() +
                                       log_b.row(t + 1).transpose() +
                                       log_beta.row(t + 1).transpose());
        }
      }
      Eigen::MatrixXd gamma(t_len, k);
      for (Eigen::Index t = 0; t < t_len; ++t) {
        Eigen::VectorXd log_g =
            log_alpha.row(t).transpose() + log_beta.row(t).transpose();
        gamma.row(t) = (log_g.array() - log_sum_exp(log_g)).exp().transpose();
      }
      gammas[m] = gamma;
      pi_acc += gamma.row(0).transpose();

      for (Eigen::Index t = 0; t + 1 < t_len; ++t) {
        Eigen::MatrixXd log_z(k, k);
        for (int i = 0; i < k; ++i) {
          for (int j2 = 0; j2 < k; ++j2) {
            log_z(i, j2) = log_alpha(t, i) + log_a(i, j2) + log_b(t + 1, j2) +
                           log_beta(t + 1, j2);
          }
        }
        const double norm =
            log_sum_exp(Eigen::Map<Eigen::VectorXd>(log_z.data(), log_z.size()));
        trans_acc += (log_z.array() - norm).exp().matrix();
      }
    }

    if (report) report->log_likelihoods.push_back(total_ll);
    if (iter > 0 && std::abs(total_ll - prev_ll) < config.tolerance) {
      if (report) report->converged = true;
      break;
    }
    prev_ll = total_ll;

    // M-step: priors and transitions.
    model.priors = pi_acc / static_cast<double>(frame_data.size());
    for (int i = 0; i < k; ++i) {
      const double row_sum = trans_acc.row(i).sum();
      if (row_sum > 0.0) {
        model.trans.row(i) = trans_acc.row(i) / row_sum;
      } else {
        // Never-visited state: additive smoothing, i.e. a uniform row.
        model.trans.row(i).setConstant(1.0 / k);
      }
    }
    if (config.transition_mask.size() > 0) {
      for (int i = 0; i < k; ++i) {
        Eigen::VectorXd masked = model.trans.row(i).transpose().cwiseProduct(
            config.transition_mask.row(i).transpose());
        const double s = masked.sum();
        if (s <= 0.0) {
          throw InputError("em_fit: transition mask removes every successor "
                           "of state " + std::to_string(i));
        }
        model.trans.row(i) = masked.transpose() / s;
      }
    }

    // M-step: emissions, dispatched on the covariance structure.
    if (config.structure == CovStructure::kFull) {
      for (int i = 0; i < k; ++i) {
        double weight = 0.0;
        for (size_t m = 0; m < frame_data.size(); ++m) {
          weight += gammas[m].col(i).sum();
        }
        if (weight <= 0.0 || !std::isfinite(weight)) {
          throw NumericError("em_fit: state " + std::to_string(i) +
                             " lost all responsibility mass");
        }
        for (int j = 0; j < f; ++j) {
          Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
          for (size_t m = 0; m < frame_data.size(); ++m) {
            mean += frame_data[m][j].transpose() * gammas[m].col(i);
          }
          mean /= weight;
          Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(d, d);
          for (size_t m = 0; m < frame_data.size(); ++m) {
            const Eigen::Index t_len = frame_data[m][j].rows();
            for (Eigen::Index t = 0; t < t_len; ++t) {
              const Eigen::VectorXd c =
                  frame_data[m][j].row(t).transpose() - mean;
              scatter += gammas[m](t, i) * (c * c.transpose());
            }
          }
          model.emissions[i][j].mean = mean;
          model.emissions[i][j].cov = regularize_covariance(scatter / weight);
        }
      }
    } else {
      // Concatenate responsibilities and data once for the latent m-steps.
      Eigen::MatrixXd resp(total, k);
      std::vector<Eigen::MatrixXd> flat(f, Eigen::MatrixXd(total, d));
      row = 0;
      for (size_t m = 0; m < frame_data.size(); ++m) {
        const Eigen::Index t_len = frame_data[m].front().rows();
        resp.block(row, 0, t_len, k) = gammas[m];
        for (int j = 0; j < f; ++j) {
          flat[j].block(row, 0, t_len, d) = frame_data[m][j];
        }
        row += t_len;
      }
      if (config.structure == CovStructure::kMfa) {
        MfaMstepResult ms = mfa_mstep(
            resp, flat, config.latent_dim, config.mfa_inner_iters,
            config.mppca, model.mfa ? &*model.mfa : nullptr);
        model.emissions = ms.emissions;
        model.mfa = std::move(ms.params);
      } else {
        SemiTiedMstepResult ms = semitied_mstep(
            resp, flat, config.semitied_inner_iters,
            model.semitied ? &*model.semitied : nullptr);
        model.emissions = ms.emissions;
        model.semitied = std::move(ms.params);
      }
    }
  }

  int longest = 0;
  for (const auto& demo : frame_data) {
    longest = std::max(longest, static_cast<int>(demo.front().rows()));
  }
  model.s_max = config.s_max > 0 ? config.s_max : longest;
  return model;
}

}  // namespace internal

HsmmModel em_fit(const Dataset& dataset, int num_states,
                 const EmConfig& config, EmReport* report) {
  if (dataset.demos.empty()) throw InputError("em_fit: empty dataset");
  std::vector<std::vector<Eigen::MatrixXd>> frame_data;
  frame_data.reserve(dataset.demos.size());
  for (const auto& demo : dataset.demos) {
    frame_data.push_back({demo.points});
  }
  HsmmModel model =
      internal::fit_hsmm(frame_data, num_states, config, report);
  return estimate_durations(std::move(model), dataset);
}

HsmmModel estimate_durations(HsmmModel model, const Dataset& dataset) {
  const int k = model.num_states();
  std::vector<std::vector<double>> runs(k);
  for (const auto& demo : dataset.demos) {
    const std::vector<int> path = viterbi(model, demo);
    size_t start = 0;
    for (size_t t = 1; t <= path.size(); ++t) {
      if (t == path.size() || path[t] != path[start]) {
        runs[path[start]].push_back(static_cast<double>(t - start));
        start = t;
      }
    }
  }
  for (int i = 0; i < k; ++i) {
    if (runs[i].empty()) {
      std::cerr << "warning: state " << i
                << " never visited; duration set to (1, "
                << kDurationVarFloor << ")\n";
      model.durations[i] = {1.0, kDurationVarFloor};
      continue;
    }
    double mean = 0.0;
    for (double r : runs[i]) mean += r;
    mean /= static_cast<double>(runs[i].size());
    double var = 0.0;
    for (double r : runs[i]) var += (r - mean) * (r - mean);
    var /= static_cast<double>(runs[i].size());
    model.durations[i] = {mean, std::max(var, kDurationVarFloor)};
  }
  return model;
}

Eigen::VectorXd filter_state(const HsmmModel& model,
                             const Eigen::MatrixXd& obs_history) {
  if (obs_history.rows() < 1) {
    throw InputError("filter_state: empty observation history");
  }
  if (model.num_frames() != 1) {
    throw InputError("filter_state: adapt the task-parameterized model to a "
                     "frame configuration first");
  }
  Demonstration demo;
  demo.points = obs_history;
  const Eigen::MatrixXd log_b = emission_log_densities(model, demo);
  const Eigen::MatrixXd log_alpha =
      log_forward(model.priors, model.trans, log_b);
  Eigen::VectorXd last = log_alpha.row(log_alpha.rows() - 1).transpose();
  const double norm = log_sum_exp(last);
  if (!std::isfinite(norm)) {
    throw NumericError("filter_state: history has zero probability");
  }
  return (last.array() - norm).exp();
}

Eigen::MatrixXd hsmm_forward(const HsmmModel& model,
                             const Eigen::MatrixXd& obs_prefix, int horizon) {
  if (model.num_frames() != 1) {
    throw InputError("hsmm_forward: adapt the task-parameterized model to a "
                     "frame configuration first");
  }
  if (obs_prefix.rows() < 1) {
    throw InputError("hsmm_forward: need at least one observation");
  }
  if (horizon < 1) throw InputError("hsmm_forward: horizon must be >= 1");
  if (model.s_max < 1) throw InputError("hsmm_forward: model s_max unset");

  const int k = model.num_states();
  const int t_obs = static_cast<int>(std::min<Eigen::Index>(
      obs_prefix.rows(), horizon));
  const int s_max = model.s_max;

  // Cumulative per-state emission log-densities over the observed prefix;
  // unit emission (log 0 contribution) afterwards.
  Demonstration demo;
  demo.points = obs_prefix.topRows(t_obs);
  const Eigen::MatrixXd log_b = emission_log_densities(model, demo);
  Eigen::MatrixXd cum_b = Eigen::MatrixXd::Zero(horizon + 1, k);
  for (int t = 0; t < horizon; ++t) {
    cum_b.row(t + 1) = cum_b.row(t);
    if (t < t_obs) cum_b.row(t + 1) += log_b.row(t);
  }

  const Eigen::MatrixXd log_a = log_matrix(model.duration_transitions());
  const Eigen::VectorXd log_pi = log_matrix(model.priors);
  // Point duration densities and their truncated survival sums
  // P(S >= e) over [1, s_max]: a segment in progress for e steps is
  // weighted by the mass of total lengths it can still realize.
  Eigen::MatrixXd log_dur(s_max + 1, k);
  Eigen::MatrixXd log_surv(s_max + 1, k);
  for (int i = 0; i < k; ++i) {
    double tail = 0.0;
    for (int s = s_max; s >= 1; --s) {
      log_dur(s, i) = log_duration_density(model.durations[i], s);
      tail += std::exp(log_dur(s, i));
      log_surv(s, i) = tail > 0.0 ? std::log(tail) : kNegInf;
    }
  }

  // log_end(t, i): completed segments of state i ending at t; the birth
  // at row 0 is the initial segment. incoming(t, i): transition mass into
  // a segment of i born at t + 1.
  Eigen::MatrixXd log_end(horizon, k);
  Eigen::MatrixXd incoming(horizon, k);
  Eigen::MatrixXd occupancy(horizon, k);
  for (int t = 0; t < horizon; ++t) {
    const int e_lim = std::min(s_max, t + 1);
    for (int i = 0; i < k; ++i) {
      Eigen::VectorXd end_terms(e_lim);
      Eigen::VectorXd occ_terms(e_lim);
      for (int e = 1; e <= e_lim; ++e) {
        const int birth = t - e + 1;
        const double inflow =
            birth == 0 ? log_pi(i) : incoming(birth - 1, i);
        const double emit = cum_b(t + 1, i) - cum_b(birth, i);
        end_terms(e - 1) = inflow + log_dur(e, i) + emit;
        occ_terms(e - 1) = inflow + log_surv(e, i) + emit;
      }
      log_end(t, i) = log_sum_exp(end_terms);
      occupancy(t, i) = log_sum_exp(occ_terms);
    }
    for (int i = 0; i < k; ++i) {
      incoming(t, i) =
          log_sum_exp(log_end.row(t).transpose() + log_a.col(i));
    }
  }

  Eigen::MatrixXd rescaled(horizon, k);
  for (int t = 0; t < horizon; ++t) {
    Eigen::VectorXd r = occupancy.row(t).transpose();
    const double norm = log_sum_exp(r);
    if (!std::isfinite(norm)) {
      throw NumericError("hsmm_forward: zero probability at time step " +
                         std::to_string(t));
    }
    rescaled.row(t) = (r.array() - norm).exp().transpose();
  }
  return rescaled;
}

ReferenceTrajectory decode_reference(const HsmmModel& model,
                                     const Eigen::VectorXd& initial_obs,
                                     int horizon) {
  if (horizon < 1) throw InputError("decode_reference: horizon must be >= 1");
  Eigen::MatrixXd prefix(1, initial_obs.size());
  prefix.row(0) = initial_obs.transpose();
  const Eigen::MatrixXd h = hsmm_forward(model, prefix, horizon);

  ReferenceTrajectory ref;
  ref.steps.reserve(horizon);
  for (int t = 0; t < horizon; ++t) {
    int best = 0;
    for (int i = 1; i < model.num_states(); ++i) {
      if (h(t, i) > h(t, best)) best = i;
    }
    ReferenceStep step;
    step.state = best;
    step.mean = model.emissions[best][0].mean;
    step.cov = model.emissions[best][0].cov;
    ref.steps.push_back(std::move(step));
  }
  return ref;
}

std::vector<int> sample_states_stochastic(const HsmmModel& model, int horizon,
                                          uint64_t seed) {
  if (horizon < 1) {
    throw InputError("sample_states_stochastic: horizon must be >= 1");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Eigen::MatrixXd a = model.duration_transitions();

  auto sample_categorical = [&](const Eigen::VectorXd& p) {
    const double target = unit(rng) * p.sum();
    double acc = 0.0;
    for (int i = 0; i < p.size(); ++i) {
      acc += p(i);
      if (acc >= target) return i;
    }
    return static_cast<int>(p.size()) - 1;
  };

  std::vector<int> seq;
  seq.reserve(horizon);
  int state = sample_categorical(model.priors);
  while (static_cast<int>(seq.size()) < horizon) {
    const DurationModel& dm = model.durations[state];
    double dur = dm.mean + std::sqrt(std::max(dm.var, 0.0)) * gauss(rng);
    int steps = static_cast<int>(std::lround(dur));
    steps = std::clamp(steps, 1, std::max(model.s_max, 1));
    for (int s = 0; s < steps && static_cast<int>(seq.size()) < horizon; ++s) {
      seq.push_back(state);
    }
    state = sample_categorical(a.row(state).transpose());
  }
  return seq;
}

}  // namespace imitate
