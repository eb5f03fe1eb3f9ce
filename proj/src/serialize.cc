// src/serialize.cc

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

#include "imitate/serialize.h"

#include <fstream>

#include <json.hpp>

#include "imitate/error.h"

namespace imitate {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "v1";

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i))) {
      throw InputError("serialize: non-finite value");
    }
    a.push_back(v(i));
  }
  return a;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    rows.push_back(vector_to_json(m.row(r).transpose()));
  }
  return rows;
}

Eigen::VectorXd json_to_vector(const json& a, const std::string& where) {
  if (!a.is_array()) throw ParseError(where + ": expected an array");
  Eigen::VectorXd v(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) throw ParseError(where + ": expected numbers");
    v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
    if (!std::isfinite(v(static_cast<Eigen::Index>(i)))) {
      throw ParseError(where + ": non-finite value");
    }
  }
  return v;
}

Eigen::MatrixXd json_to_matrix(const json& a, const std::string& where) {
  if (!a.is_array() || a.empty()) {
    throw ParseError(where + ": expected a non-empty array of rows");
  }
  const size_t cols = a[0].is_array() ? a[0].size() : 0;
  Eigen::MatrixXd m(a.size(), cols);
  for (size_t r = 0; r < a.size(); ++r) {
    const Eigen::VectorXd row =
        json_to_vector(a[r], where + " row " + std::to_string(r));
    if (static_cast<size_t>(row.size()) != cols) {
      throw ParseError(where + ": ragged rows");
    }
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

json frame_to_json(const AffineFrame& f) {
  return json{{"A", matrix_to_json(f.A)}, {"b", vector_to_json(f.b)}};
}

AffineFrame json_to_frame(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("A") || !j.contains("b")) {
    throw ParseError(where + ": frame needs fields A and b");
  }
  AffineFrame f;
  f.A = json_to_matrix(j["A"], where + ".A");
  f.b = json_to_vector(j["b"], where + ".b");
  if (f.A.rows() != f.A.cols() || f.A.rows() != f.b.size()) {
    throw ParseError(where + ": frame dimensions inconsistent");
  }
  return f;
}

json load_checked(const std::string& path, const std::string& type) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
  if (!j.is_object()) throw ParseError("'" + path + "': expected an object");
  if (!j.contains("version") || j["version"] != kVersion) {
    throw ParseError("'" + path + "': unknown or missing version (expected " +
                     std::string(kVersion) + ")");
  }
  if (!j.contains("type") || j["type"] != type) {
    throw ParseError("'" + path + "': expected a " + type + " file");
  }
  return j;
}

void write_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << j.dump(1) << "\n";
  if (!out) throw InputError("write to '" + path + "' failed");
}

const char* structure_name(CovStructure s) {
  switch (s) {
    case CovStructure::kFull: return "full";
    case CovStructure::kMfa: return "mfa";
    case CovStructure::kSemiTied: return "semitied";
  }
  return "full";
}

CovStructure parse_structure(const std::string& s, const std::string& where) {
  if (s == "full") return CovStructure::kFull;
  if (s == "mfa") return CovStructure::kMfa;
  if (s == "semitied") return CovStructure::kSemiTied;
  throw ParseError(where + ": unknown structure '" + s + "'");
}

}  // namespace

void save_dataset(const Dataset& dataset, const std::string& path) {
  validate_dataset(dataset);
  json j{{"version", kVersion}, {"type", "dataset"},
         {"dim", dataset.dim}, {"frames", dataset.num_frames}};
  j["metadata"] = json::object();
  for (const auto& [key, value] : dataset.metadata) j["metadata"][key] = value;
  j["demos"] = json::array();
  for (const Demonstration& demo : dataset.demos) {
    json d{{"points", matrix_to_json(demo.points)}};
    d["frames"] = json::array();
    for (const AffineFrame& f : demo.frames) d["frames"].push_back(frame_to_json(f));
    j["demos"].push_back(std::move(d));
  }
  write_file(j, path);
}

Dataset load_dataset(const std::string& path) {
  const json j = load_checked(path, "dataset");
  Dataset dataset;
  try {
    dataset.dim = j.at("dim").get<int>();
    dataset.num_frames = j.at("frames").get<int>();
    if (j.contains("metadata")) {
      for (const auto& [key, value] : j.at("metadata").items()) {
        dataset.metadata[key] = value.get<std::string>();
      }
    }
    const json& demos = j.at("demos");
    if (!demos.is_array()) throw ParseError("demos: expected an array");
    for (size_t m = 0; m < demos.size(); ++m) {
      const std::string where = "demo " + std::to_string(m);
      Demonstration demo;
      demo.points = json_to_matrix(demos[m].at("points"), where + ".points");
      if (demos[m].contains("frames")) {
        for (size_t f = 0; f < demos[m]["frames"].size(); ++f) {
          demo.frames.push_back(json_to_frame(
              demos[m]["frames"][f],
              where + ".frame " + std::to_string(f)));
        }
      }
      dataset.demos.push_back(std::move(demo));
    }
  } catch (const json::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
  validate_dataset(dataset);
  return dataset;
}

void save_model(const HsmmModel& model, const std::string& path) {
  validate_model(model);
  json j{{"version", kVersion}, {"type", "model"},
         {"states", model.num_states()}, {"frames", model.num_frames()},
         {"dim", model.dim()}, {"s_max", model.s_max},
         {"structure", structure_name(model.structure)},
         {"latent_dim", model.latent_dim}, {"mppca", model.mppca}};
  j["priors"] = vector_to_json(model.priors);
  j["transitions"] = matrix_to_json(model.trans);
  j["emissions"] = json::array();
  for (const auto& per_state : model.emissions) {
    json row = json::array();
    for (const Gaussian& g : per_state) {
      row.push_back(json{{"mean", vector_to_json(g.mean)},
                         {"cov", matrix_to_json(g.cov)}});
    }
    j["emissions"].push_back(std::move(row));
  }
  j["durations"] = json::array();
  for (const DurationModel& d : model.durations) {
    j["durations"].push_back(json{{"mean", d.mean}, {"var", d.var}});
  }
  if (model.mfa) {
    json loadings = json::array();
    json noise = json::array();
    for (int i = 0; i < model.num_states(); ++i) {
      json lrow = json::array();
      json nrow = json::array();
      for (int f = 0; f < model.num_frames(); ++f) {
        lrow.push_back(matrix_to_json(model.mfa->loadings[i][f]));
        nrow.push_back(vector_to_json(model.mfa->noise[i][f]));
      }
      loadings.push_back(std::move(lrow));
      noise.push_back(std::move(nrow));
    }
    j["mfa"] = json{{"loadings", std::move(loadings)},
                    {"noise", std::move(noise)}};
  }
  if (model.semitied) {
    json basis = json::array();
    for (const Eigen::MatrixXd& h : model.semitied->basis) {
      basis.push_back(matrix_to_json(h));
    }
    json scales = json::array();
    for (int i = 0; i < model.num_states(); ++i) {
      json row = json::array();
      for (int f = 0; f < model.num_frames(); ++f) {
        row.push_back(vector_to_json(model.semitied->scales[i][f]));
      }
      scales.push_back(std::move(row));
    }
    j["semitied"] = json{{"basis", std::move(basis)},
                         {"scales", std::move(scales)}};
  }
  write_file(j, path);
}

HsmmModel load_model(const std::string& path) {
  const json j = load_checked(path, "model");
  HsmmModel model;
  try {
    const int k = j.at("states").get<int>();
    const int f = j.at("frames").get<int>();
    model.s_max = j.at("s_max").get<int>();
    model.structure = parse_structure(j.at("structure").get<std::string>(),
                                      "structure");
    model.latent_dim = j.at("latent_dim").get<int>();
    model.mppca = j.at("mppca").get<bool>();
    model.priors = json_to_vector(j.at("priors"), "priors");
    model.trans = json_to_matrix(j.at("transitions"), "transitions");
    const json& emissions = j.at("emissions");
    if (static_cast<int>(emissions.size()) != k) {
      throw ParseError("emissions: expected " + std::to_string(k) + " states");
    }
    model.emissions.resize(k);
    for (int i = 0; i < k; ++i) {
      if (static_cast<int>(emissions[i].size()) != f) {
        throw ParseError("emissions state " + std::to_string(i) +
                         ": expected " + std::to_string(f) + " frames");
      }
      for (int jf = 0; jf < f; ++jf) {
        const std::string where = "emission (" + std::to_string(i) + ", " +
                                  std::to_string(jf) + ")";
        Gaussian g;
        g.mean = json_to_vector(emissions[i][jf].at("mean"), where + ".mean");
        g.cov = json_to_matrix(emissions[i][jf].at("cov"), where + ".cov");
        if (g.cov.rows() != g.dim() || g.cov.cols() != g.dim()) {
          throw ParseError(where + ": covariance shape mismatch");
        }
        model.emissions[i].push_back(std::move(g));
      }
    }
    const json& durations = j.at("durations");
    if (static_cast<int>(durations.size()) != k) {
      throw ParseError("durations: expected " + std::to_string(k) + " states");
    }
    for (const auto& d : durations) {
      model.durations.push_back(
          {d.at("mean").get<double>(), d.at("var").get<double>()});
    }
    if (j.contains("mfa")) {
      MfaParams mfa;
      mfa.latent_dim = model.latent_dim;
      mfa.mppca = model.mppca;
      mfa.loadings.resize(k);
      mfa.noise.resize(k);
      for (int i = 0; i < k; ++i) {
        for (int jf = 0; jf < f; ++jf) {
          mfa.loadings[i].push_back(json_to_matrix(
              j["mfa"].at("loadings")[i][jf], "mfa loading"));
          mfa.noise[i].push_back(
              json_to_vector(j["mfa"].at("noise")[i][jf], "mfa noise"));
        }
      }
      model.mfa = std::move(mfa);
    }
    if (j.contains("semitied")) {
      SemiTiedParams st;
      for (int jf = 0; jf < f; ++jf) {
        st.basis.push_back(
            json_to_matrix(j["semitied"].at("basis")[jf], "semitied basis"));
      }
      st.scales.resize(k);
      for (int i = 0; i < k; ++i) {
        for (int jf = 0; jf < f; ++jf) {
          st.scales[i].push_back(json_to_vector(
              j["semitied"].at("scales")[i][jf], "semitied scales"));
        }
      }
      model.semitied = std::move(st);
    }
  } catch (const json::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
  validate_model(model);
  return model;
}

void save_frames(const FrameSet& frames, const std::string& path) {
  if (frames.empty()) throw InputError("save_frames: empty frame set");
  json j{{"version", kVersion}, {"type", "frames"}};
  j["frames"] = json::array();
  for (const AffineFrame& f : frames) j["frames"].push_back(frame_to_json(f));
  write_file(j, path);
}

FrameSet load_frames(const std::string& path) {
  const json j = load_checked(path, "frames");
  FrameSet frames;
  try {
    const json& arr = j.at("frames");
    for (size_t f = 0; f < arr.size(); ++f) {
      frames.push_back(json_to_frame(arr[f], "frame " + std::to_string(f)));
    }
  } catch (const json::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
  if (frames.empty()) throw ParseError("'" + path + "': no frames");
  return frames;
}

}  // namespace imitate
