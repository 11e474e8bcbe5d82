// Copyright 2026 The Seqanon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqanon/clustering.hpp"
#include "seqanon/error.hpp"

namespace seqanon {

enum class Method { kMcka, kMcdp, kMdavKa, kMdavDp };

inline std::string method_name(Method m) {
  switch (m) {
    case Method::kMcka: return "mcka";
    case Method::kMcdp: return "mcdp";
    case Method::kMdavKa: return "mdav-ka";
    case Method::kMdavDp: return "mdav-dp";
  }
  throw ConfigError("unknown method");
}

inline Method parse_method(const std::string& name) {
  if (name == "mcka") return Method::kMcka;
  if (name == "mcdp") return Method::kMcdp;
  if (name == "mdav-ka") return Method::kMdavKa;
  if (name == "mdav-dp") return Method::kMdavDp;
  throw ConfigError("unknown method '" + name +
                    "': expected mcka, mcdp, mdav-ka or mdav-dp");
}

inline bool is_dp(Method m) {
  return m == Method::kMcdp || m == Method::kMdavDp;
}

// Per-cluster release record. Member subject ids are present only when the
// run was made with the pairing debug flag; they re-identify the grouping
// and stay out of the manifest by default.
struct ClusterRecord {
  std::size_t id = 0;
  std::size_t size = 0;
  std::optional<double> lambda;
  std::vector<LevelStep> level_path;
  std::vector<std::string> members;
};

// Everything needed to reproduce a run: method, resolved configuration
// including defaults, seed, and the per-cluster records, plus phase
// timings.
struct RunManifest {
  std::string tool = "seqanon";
  Method method = Method::kMcka;
  std::uint64_t seed = 1;
  std::size_t k = 5;
  std::size_t fanout = 50;
  std::size_t levels = 2;
  std::vector<std::size_t> aggregation_minutes;
  std::vector<std::size_t> partition_sizes;
  std::array<double, 4> weights{1.0, 1.0, 1.0, 1.0};
  double epsilon = 1.0;
  std::size_t coefficients = 14;
  std::size_t subjects = 0;
  std::size_t epoch_minutes = 0;
  std::size_t threads = 1;
  std::size_t cell_budget = 0;
  bool pairing_debug = false;
  double clustering_seconds = 0.0;
  double release_seconds = 0.0;
  std::vector<ClusterRecord> clusters;
};

inline nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json j;
  j["tool"] = m.tool;
  j["method"] = method_name(m.method);
  j["seed"] = m.seed;
  j["config"]["k"] = m.k;
  j["config"]["fanout"] = m.fanout;
  j["config"]["levels"] = m.levels;
  j["config"]["aggregation_minutes"] = m.aggregation_minutes;
  j["config"]["partition_sizes"] = m.partition_sizes;
  j["config"]["weights"] = m.weights;
  if (is_dp(m.method)) {
    j["config"]["epsilon"] = m.epsilon;
    j["config"]["coefficients"] = m.coefficients;
  }
  j["config"]["threads"] = m.threads;
  j["config"]["cell_budget"] = m.cell_budget;
  j["config"]["pairing_debug"] = m.pairing_debug;
  j["dataset"]["subjects"] = m.subjects;
  j["dataset"]["epoch_minutes"] = m.epoch_minutes;
  j["timings"]["clustering_seconds"] = m.clustering_seconds;
  j["timings"]["release_seconds"] = m.release_seconds;
  j["clusters"] = nlohmann::json::array();
  for (const ClusterRecord& c : m.clusters) {
    nlohmann::json jc;
    jc["id"] = c.id;
    jc["size"] = c.size;
    if (c.lambda.has_value()) jc["lambda"] = *c.lambda;
    jc["level_path"] = nlohmann::json::array();
    for (const LevelStep& step : c.level_path) {
      jc["level_path"].push_back({{"level", step.level},
                                  {"interval_minutes", step.interval_minutes},
                                  {"group_ordinal", step.group_ordinal}});
    }
    if (!c.members.empty()) jc["members"] = c.members;
    j["clusters"].push_back(std::move(jc));
  }
  return j;
}

inline RunManifest manifest_from_json(const nlohmann::json& j) {
  RunManifest m;
  try {
    m.tool = j.value("tool", "seqanon");
    m.method = parse_method(j.at("method").get<std::string>());
    m.seed = j.at("seed").get<std::uint64_t>();
    const auto& cfg = j.at("config");
    m.k = cfg.at("k").get<std::size_t>();
    m.fanout = cfg.at("fanout").get<std::size_t>();
    m.levels = cfg.at("levels").get<std::size_t>();
    m.aggregation_minutes =
        cfg.at("aggregation_minutes").get<std::vector<std::size_t>>();
    m.partition_sizes =
        cfg.at("partition_sizes").get<std::vector<std::size_t>>();
    m.weights = cfg.at("weights").get<std::array<double, 4>>();
    if (cfg.contains("epsilon")) m.epsilon = cfg.at("epsilon").get<double>();
    if (cfg.contains("coefficients")) {
      m.coefficients = cfg.at("coefficients").get<std::size_t>();
    }
    m.threads = cfg.value("threads", std::size_t{1});
    m.cell_budget = cfg.value("cell_budget", std::size_t{0});
    m.pairing_debug = cfg.value("pairing_debug", false);
    m.subjects = j.at("dataset").at("subjects").get<std::size_t>();
    m.epoch_minutes = j.at("dataset").at("epoch_minutes").get<std::size_t>();
    m.clustering_seconds = j.at("timings").value("clustering_seconds", 0.0);
    m.release_seconds = j.at("timings").value("release_seconds", 0.0);
    for (const auto& jc : j.at("clusters")) {
      ClusterRecord c;
      c.id = jc.at("id").get<std::size_t>();
      c.size = jc.at("size").get<std::size_t>();
      if (jc.contains("lambda")) c.lambda = jc.at("lambda").get<double>();
      if (jc.contains("level_path")) {
        for (const auto& js : jc.at("level_path")) {
          LevelStep step;
          step.level = js.at("level").get<int>();
          step.interval_minutes =
              js.at("interval_minutes").get<std::size_t>();
          step.group_ordinal = js.at("group_ordinal").get<std::size_t>();
          c.level_path.push_back(step);
        }
      }
      if (jc.contains("members")) {
        c.members = jc.at("members").get<std::vector<std::string>>();
      }
      m.clusters.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

inline void write_manifest(const std::string& path, const RunManifest& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write manifest file: " + path);
  out << to_json(m).dump(2) << '\n';
}

inline RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("manifest " + path + " is not valid JSON: " + e.what());
  }
  return manifest_from_json(j);
}

}  // namespace seqanon
