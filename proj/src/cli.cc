// src/cli.cc

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

#include "imitate/cli.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "imitate/error.h"
#include "imitate/generators.h"
#include "imitate/hsmm.h"
#include "imitate/latent.h"
#include "imitate/lqt.h"
#include "imitate/metrics.h"
#include "imitate/serialize.h"
#include "imitate/sva.h"
#include "imitate/task_params.h"

namespace imitate {

namespace {

uint64_t default_seed() {
  if (const char* env = std::getenv("IMITATE_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

CovStructure parse_structure(const std::string& name) {
  if (name == "full") return CovStructure::kFull;
  if (name == "mfa") return CovStructure::kMfa;
  if (name == "semitied") return CovStructure::kSemiTied;
  throw InputError("unknown structure '" + name +
                   "' (expected full, mfa or semitied)");
}

Eigen::VectorXd parse_csv_vector(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw InputError("cannot parse '" + item + "' as a number");
    }
  }
  if (values.empty()) throw InputError("empty vector argument");
  Eigen::VectorXd v(values.size());
  for (size_t i = 0; i < values.size(); ++i) v(i) = values[i];
  return v;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  return out;
}

std::vector<std::string> split_labels(const std::string& csv) {
  std::vector<std::string> labels;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) labels.push_back(item);
  return labels;
}

// Tracking pipeline shared by generate and eval: decode a reference from
// the initial observation, build weights and gains, roll out from rest.
struct TrackingRun {
  ReferenceTrajectory ref;
  RolloutResult roll;
  LinearSystem sys;
  int pos_dim = 0;
};

TrackingRun run_tracking(const HsmmModel& model,
                         const Eigen::VectorXd& start_obs, int horizon,
                         double dt, double r_scalar, bool derivatives) {
  TrackingRun run;
  const int d = static_cast<int>(model.dim());
  if (derivatives && d % 2 != 0) {
    throw InputError("--derivatives requires an even model dimension");
  }
  run.pos_dim = derivatives ? d / 2 : d;
  run.sys = double_integrator(run.pos_dim, dt);
  run.ref = decode_reference(model, start_obs, horizon);
  const CostWeights weights =
      weights_from_reference(run.ref, run.sys, r_scalar);
  const TrackerGains gains = riccati_backward(run.sys, run.ref, weights);
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(2 * run.pos_dim);
  if (derivatives) {
    x0 = start_obs;
  } else {
    x0.head(run.pos_dim) = start_obs;
  }
  run.roll = rollout(run.sys, gains, run.ref, x0);
  return run;
}

long model_parameter_count(const HsmmModel& model) {
  return count_parameters(model.structure, model.num_states(),
                          model.num_frames(), static_cast<int>(model.dim()),
                          model.latent_dim);
}

struct EvalRow {
  int demo = 0;
  std::string split;
  double mse_value = 0.0;
};

int cmd_eval_run(const HsmmModel& model, const Dataset& dataset,
                 const std::string& split, const std::string& format,
                 double dt, double r_scalar, bool derivatives,
                 bool mse_all_dims) {
  std::vector<std::string> labels;
  const auto it = dataset.metadata.find("split");
  if (it != dataset.metadata.end()) labels = split_labels(it->second);
  while (labels.size() < dataset.demos.size()) labels.push_back("train");

  std::vector<EvalRow> rows;
  for (size_t m = 0; m < dataset.demos.size(); ++m) {
    if (split != "all" && labels[m] != split) continue;
    const Demonstration& demo = dataset.demos[m];
    HsmmModel local = model;
    if (model.num_frames() > 1) {
      if (static_cast<int>(demo.frames.size()) != model.num_frames()) {
        throw InputError("demo " + std::to_string(m) +
                         " frame count does not match the model");
      }
      local = adapt(model, demo.frames).model;
    }
    const TrackingRun run =
        run_tracking(local, demo.points.row(0).transpose(),
                     static_cast<int>(demo.points.rows()), dt, r_scalar,
                     derivatives);
    const Eigen::MatrixXd positions =
        run.roll.states.leftCols(run.pos_dim);
    std::vector<int> dims;
    const int upto = mse_all_dims ? static_cast<int>(demo.points.cols())
                                  : run.pos_dim;
    for (int dd = 0; dd < upto; ++dd) dims.push_back(dd);
    const double err = mse(positions, demo.points.leftCols(upto), dims);
    rows.push_back({static_cast<int>(m), labels[m], err});
  }
  if (rows.empty()) {
    throw InputError("split '" + split + "' selects no demonstrations");
  }

  double mean = 0.0;
  for (const EvalRow& row : rows) mean += row.mse_value;
  mean /= static_cast<double>(rows.size());
  double var = 0.0;
  for (const EvalRow& row : rows) {
    var += (row.mse_value - mean) * (row.mse_value - mean);
  }
  const double stddev = std::sqrt(var / rows.size());

  if (format == "rows") {
    for (const EvalRow& row : rows) {
      std::cout << row.split << " " << row.demo << " " << row.mse_value
                << "\n";
    }
    std::cout << "summary " << split << " " << mean << " " << stddev << "\n";
  } else {
    std::cout << "split   demo   mse\n";
    for (const EvalRow& row : rows) {
      std::cout << row.split << "\t" << row.demo << "\t" << row.mse_value
                << "\n";
    }
    std::cout << "mean " << mean << " +- " << stddev << " over "
              << rows.size() << " demos\n";
  }
  return 0;
}

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"Hidden semi-Markov imitation models with LQT synthesis"};
  app.require_subcommand(1);
  // Options may come from an INI/TOML file (sections per subcommand);
  // command-line flags win.
  app.set_config("--config");

  // demo
  auto* demo_cmd = app.add_subcommand("demo", "Generate a synthetic dataset");
  std::string demo_task = "zshape";
  int demo_count = 5;
  int demo_steps = 200;
  double demo_noise = 0.01;
  uint64_t demo_seed = default_seed();
  std::string demo_out;
  demo_cmd->add_option("task", demo_task, "zshape or pickplace")
      ->check(CLI::IsMember({"zshape", "pickplace"}));
  demo_cmd->add_option("--demos", demo_count, "number of demonstrations");
  demo_cmd->add_option("--steps", demo_steps, "samples per demonstration");
  demo_cmd->add_option("--noise", demo_noise, "zshape noise level");
  demo_cmd->add_option("--seed", demo_seed, "rng seed");
  demo_cmd->add_option("--output,-o", demo_out, "dataset file")->required();

  // train
  auto* train_cmd = app.add_subcommand("train", "Fit a model with EM");
  std::string train_in, train_out, train_report;
  std::string train_structure = "full";
  int train_states = 5;
  int train_latent = 1;
  bool train_mppca = false;
  EmConfig em_config;
  em_config.seed = default_seed();
  train_cmd->add_option("--input,-i", train_in, "dataset file")->required();
  train_cmd->add_option("--output,-o", train_out, "model file")->required();
  train_cmd->add_option("--states,-K", train_states, "number of states");
  train_cmd->add_option("--structure", train_structure,
                        "full, mfa or semitied");
  train_cmd->add_option("--latent-dim", train_latent, "MFA subspace size");
  train_cmd->add_flag("--mppca", train_mppca, "isotropic MFA noise");
  train_cmd->add_option("--tolerance", em_config.tolerance,
                        "log-likelihood stop tolerance");
  train_cmd->add_option("--max-iterations", em_config.max_iterations,
                        "EM iteration cap");
  train_cmd->add_option("--seed", em_config.seed, "rng seed");
  train_cmd->add_option("--s-max", em_config.s_max,
                        "maximum duration (0: longest demo)");
  train_cmd->add_option("--report", train_report,
                        "write the training report here instead of stdout");

  // adapt
  auto* adapt_cmd =
      app.add_subcommand("adapt", "Specialize a model to new frames");
  std::string adapt_model, adapt_frames, adapt_dataset, adapt_out;
  int adapt_from_demo = -1;
  adapt_cmd->add_option("--model,-m", adapt_model, "model file")->required();
  adapt_cmd->add_option("--frames", adapt_frames, "frames file");
  adapt_cmd->add_option("--input,-i", adapt_dataset,
                        "dataset supplying --from-demo frames");
  adapt_cmd->add_option("--from-demo", adapt_from_demo,
                        "borrow frames from this demo");
  adapt_cmd->add_option("--output,-o", adapt_out, "adapted model file")
      ->required();

  // generate
  auto* gen_cmd =
      app.add_subcommand("generate", "Decode a reference and track it");
  std::string gen_model, gen_frames, gen_out, gen_ref_out, gen_start;
  int gen_horizon = 200;
  double gen_dt = 0.01;
  double gen_r = 9.0;
  bool gen_derivatives = false;
  gen_cmd->add_option("--model,-m", gen_model, "model file")->required();
  gen_cmd->add_option("--frames", gen_frames, "frames file (adapt first)");
  gen_cmd->add_option("--start", gen_start, "initial observation, csv")
      ->required();
  gen_cmd->add_option("--horizon", gen_horizon, "steps to synthesize");
  gen_cmd->add_option("--dt", gen_dt, "tracker step length in seconds");
  gen_cmd->add_option("--r-scalar", gen_r, "control cost weight");
  gen_cmd->add_flag("--derivatives", gen_derivatives,
                    "model dimensions already include velocities");
  gen_cmd->add_option("--output,-o", gen_out, "trajectory file")->required();
  gen_cmd->add_option("--reference", gen_ref_out,
                      "also dump the step-wise reference here");

  // eval
  auto* eval_cmd =
      app.add_subcommand("eval", "Reproduction error against a dataset");
  std::string eval_model, eval_in, eval_split = "all", eval_format = "aligned";
  double eval_dt = 0.01;
  double eval_r = 9.0;
  bool eval_derivatives = false;
  bool eval_all_dims = false;
  eval_cmd->add_option("--model,-m", eval_model, "model file")->required();
  eval_cmd->add_option("--input,-i", eval_in, "dataset file")->required();
  eval_cmd->add_option("--split", eval_split, "train, test or all")
      ->check(CLI::IsMember({"train", "test", "all"}));
  eval_cmd->add_option("--format", eval_format, "aligned or rows")
      ->check(CLI::IsMember({"aligned", "rows"}));
  eval_cmd->add_option("--dt", eval_dt, "tracker step length");
  eval_cmd->add_option("--r-scalar", eval_r, "control cost weight");
  eval_cmd->add_flag("--derivatives", eval_derivatives,
                     "model dimensions already include velocities");
  eval_cmd->add_flag("--all-dims", eval_all_dims,
                     "mse over all dimensions, not only positions");

  // segment
  auto* seg_cmd =
      app.add_subcommand("segment", "Dump decoded state sequences");
  std::string seg_model, seg_in;
  seg_cmd->add_option("--model,-m", seg_model, "model file")->required();
  seg_cmd->add_option("--input,-i", seg_in, "dataset file")->required();

  // cluster
  auto* cluster_cmd =
      app.add_subcommand("cluster", "Online nonparametric clustering");
  std::string cluster_in, cluster_model_out;
  SvaHyper hyper;
  double cluster_bandwidth = 0.0;
  int cluster_sweeps = 3;
  cluster_cmd
      ->add_option("--input,-i", cluster_in,
                   "dataset file, or '-' for line-delimited vectors on stdin")
      ->required();
  cluster_cmd->add_option("--lambda", hyper.lambda, "new-cluster penalty");
  cluster_cmd->add_option("--lambda1", hyper.lambda1,
                          "subspace dimension penalty");
  cluster_cmd->add_option("--lambda2", hyper.lambda2,
                          "transition log-probability weight");
  cluster_cmd->add_option("--lambda3", hyper.lambda3,
                          "new-transition penalty");
  cluster_cmd->add_option("--bandwidth", cluster_bandwidth,
                          "projection bandwidth (0: calibrate from data)");
  cluster_cmd->add_option("--sweeps", cluster_sweeps, "batch re-sweeps");
  cluster_cmd->add_option("--model-out", cluster_model_out,
                          "write the converted model here");

  // count-params
  auto* count_cmd =
      app.add_subcommand("count-params", "Free parameters of a model shape");
  std::string count_structure = "full";
  int count_k = 7, count_f = 2, count_d = 16, count_latent = 0;
  std::string count_dims;
  count_cmd->add_option("--structure", count_structure,
                        "full, mfa or semitied");
  count_cmd->add_option("--states,-K", count_k, "number of states");
  count_cmd->add_option("--frames,-F", count_f, "number of frames");
  count_cmd->add_option("--dim,-D", count_d, "observation dimension");
  count_cmd->add_option("--latent-dim,-d", count_latent, "MFA subspace size");
  count_cmd->add_option("--dims", count_dims,
                        "per-state subspace sizes, csv (overrides others)");

  std::vector<const char*> argv;
  argv.push_back("imitate");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*demo_cmd) {
    const Dataset dataset =
        demo_task == "zshape"
            ? gen_zshape(demo_count, demo_steps, demo_noise, demo_seed)
            : gen_pickplace(demo_count, demo_steps, demo_seed);
    save_dataset(dataset, demo_out);
    std::cout << "wrote " << dataset.demos.size() << " demos to " << demo_out
              << "\n";
    return 0;
  }

  if (*train_cmd) {
    const Dataset dataset = load_dataset(train_in);
    em_config.structure = parse_structure(train_structure);
    em_config.latent_dim = train_latent;
    em_config.mppca = train_mppca;
    EmReport report;
    const HsmmModel model =
        dataset.num_frames >= 1
            ? tp_em_fit(dataset, train_states, em_config, &report)
            : em_fit(dataset, train_states, em_config, &report);
    save_model(model, train_out);

    std::ostringstream text;
    text << "parameters: " << model_parameter_count(model) << "\n";
    text << "iterations: " << report.log_likelihoods.size() << "\n";
    text << "converged: " << (report.converged ? "yes" : "no") << "\n";
    text << "log_likelihood:\niter ll\n";
    for (size_t i = 0; i < report.log_likelihoods.size(); ++i) {
      text << i << " " << report.log_likelihoods[i] << "\n";
    }
    if (train_report.empty()) {
      std::cout << text.str();
    } else {
      open_output(train_report) << text.str();
    }
    return 0;
  }

  if (*adapt_cmd) {
    const HsmmModel model = load_model(adapt_model);
    FrameSet frames;
    if (!adapt_frames.empty()) {
      frames = load_frames(adapt_frames);
    } else if (!adapt_dataset.empty() && adapt_from_demo >= 0) {
      const Dataset dataset = load_dataset(adapt_dataset);
      if (adapt_from_demo >= static_cast<int>(dataset.demos.size())) {
        throw InputError("--from-demo index out of range");
      }
      frames = dataset.demos[adapt_from_demo].frames;
    } else {
      throw InputError("adapt needs --frames or --input with --from-demo");
    }
    const AdaptedModel adapted = adapt(model, frames);
    save_model(adapted.model, adapt_out);
    std::cout << "adapted " << model.num_frames() << "-frame model -> "
              << adapt_out << "\n";
    return 0;
  }

  if (*gen_cmd) {
    HsmmModel model = load_model(gen_model);
    if (!gen_frames.empty()) {
      model = adapt(model, load_frames(gen_frames)).model;
    }
    if (model.num_frames() > 1) {
      throw InputError("model is task-parameterized: pass --frames");
    }
    const Eigen::VectorXd start = parse_csv_vector(gen_start);
    if (start.size() != model.dim()) {
      throw InputError("--start has dimension " +
                       std::to_string(start.size()) + ", model expects " +
                       std::to_string(model.dim()));
    }
    const TrackingRun run = run_tracking(model, start, gen_horizon, gen_dt,
                                         gen_r, gen_derivatives);

    std::ofstream out = open_output(gen_out);
    out << "# t time";
    for (Eigen::Index d = 0; d < run.roll.states.cols(); ++d) {
      out << " x" << d;
    }
    for (Eigen::Index d = 0; d < run.roll.controls.cols(); ++d) {
      out << " u" << d;
    }
    out << "\n";
    for (Eigen::Index t = 0; t < run.roll.states.rows(); ++t) {
      out << t << " " << t * gen_dt;
      for (Eigen::Index d = 0; d < run.roll.states.cols(); ++d) {
        out << " " << run.roll.states(t, d);
      }
      for (Eigen::Index d = 0; d < run.roll.controls.cols(); ++d) {
        out << " " << run.roll.controls(t, d);
      }
      out << "\n";
    }

    if (!gen_ref_out.empty()) {
      std::ofstream ref_out = open_output(gen_ref_out);
      ref_out << "# t state";
      for (Eigen::Index d = 0; d < model.dim(); ++d) ref_out << " mean" << d;
      for (Eigen::Index d = 0; d < model.dim(); ++d) ref_out << " var" << d;
      ref_out << "\n";
      for (Eigen::Index t = 0; t < run.ref.length(); ++t) {
        const ReferenceStep& step = run.ref.steps[t];
        ref_out << t << " " << step.state;
        for (Eigen::Index d = 0; d < step.mean.size(); ++d) {
          ref_out << " " << step.mean(d);
        }
        for (Eigen::Index d = 0; d < step.mean.size(); ++d) {
          ref_out << " " << step.cov(d, d);
        }
        ref_out << "\n";
      }
    }
    std::cout << "wrote " << run.roll.states.rows() << " steps to " << gen_out
              << "\n";
    return 0;
  }

  if (*eval_cmd) {
    const HsmmModel model = load_model(eval_model);
    const Dataset dataset = load_dataset(eval_in);
    return cmd_eval_run(model, dataset, eval_split, eval_format, eval_dt,
                        eval_r, eval_derivatives, eval_all_dims);
  }

  if (*seg_cmd) {
    const HsmmModel model = load_model(seg_model);
    const Dataset dataset = load_dataset(seg_in);
    std::cout << "# demo t state\n";
    for (size_t m = 0; m < dataset.demos.size(); ++m) {
      const std::vector<int> path = viterbi(model, dataset.demos[m]);
      for (size_t t = 0; t < path.size(); ++t) {
        std::cout << m << " " << t << " " << path[t] << "\n";
      }
    }
    return 0;
  }

  if (*cluster_cmd) {
    Eigen::MatrixXd data;
    if (cluster_in == "-") {
      // Line-delimited vectors on standard input.
      std::vector<Eigen::VectorXd> rows;
      std::string line;
      while (std::getline(std::cin, line)) {
        if (line.empty()) continue;
        for (char& c : line) {
          if (c == ',') c = ' ';
        }
        std::stringstream ss(line);
        std::vector<double> values;
        double value;
        while (ss >> value) values.push_back(value);
        if (values.empty()) continue;
        Eigen::VectorXd v(values.size());
        for (size_t i = 0; i < values.size(); ++i) v(i) = values[i];
        if (!rows.empty() && rows.front().size() != v.size()) {
          throw InputError("stdin row " + std::to_string(rows.size()) +
                           " has " + std::to_string(v.size()) +
                           " values, expected " +
                           std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(v));
      }
      if (rows.empty()) throw InputError("no vectors on standard input");
      data.resize(rows.size(), rows.front().size());
      for (size_t r = 0; r < rows.size(); ++r) {
        data.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
      }
    } else {
      const Dataset dataset = load_dataset(cluster_in);
      Eigen::Index total = 0;
      for (const Demonstration& demo : dataset.demos) total += demo.length();
      data.resize(total, dataset.dim);
      Eigen::Index row = 0;
      for (const Demonstration& demo : dataset.demos) {
        data.middleRows(row, demo.length()) = demo.points;
        row += demo.length();
      }
    }
    const Eigen::Index total = data.rows();
    if (cluster_bandwidth > 0.0) {
      hyper.bandwidth = cluster_bandwidth;
    } else {
      const Eigen::Index prefix = std::min<Eigen::Index>(total, 200);
      hyper.bandwidth =
          2.0 * median_pairwise_sq_distance(data.topRows(prefix));
    }

    SvaState state;
    for (Eigen::Index t = 0; t < total; ++t) {
      sva_observe(state, data.row(t).transpose(), hyper);
    }
    std::vector<double> trace;
    trace.push_back(sva_loss(state, data, hyper));
    for (int s = 0; s < cluster_sweeps; ++s) {
      trace.push_back(sva_sweep(state, data, hyper));
    }

    std::cout << "bandwidth: " << hyper.bandwidth << "\n";
    std::cout << "clusters: " << state.num_clusters() << "\n";
    std::cout << "cluster dim count\n";
    for (int i = 0; i < state.num_clusters(); ++i) {
      std::cout << i << " " << state.clusters[i].dim << " "
                << state.clusters[i].count << "\n";
    }
    std::cout << "loss_trace:\nsweep loss\n";
    for (size_t s = 0; s < trace.size(); ++s) {
      std::cout << s << " " << trace[s] << "\n";
    }
    if (!cluster_model_out.empty()) {
      save_model(sva_to_hsmm(state), cluster_model_out);
    }
    return 0;
  }

  if (*count_cmd) {
    long count = 0;
    if (!count_dims.empty()) {
      const Eigen::VectorXd v = parse_csv_vector(count_dims);
      std::vector<int> dims(v.size());
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        dims[i] = static_cast<int>(v(i));
      }
      count = count_parameters(dims, count_f, count_d);
    } else {
      count = count_parameters(parse_structure(count_structure), count_k,
                               count_f, count_d, count_latent);
    }
    std::cout << count << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  try {
    return dispatch(args);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace imitate
