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

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "seqanon/csv.hpp"
#include "seqanon/datagen.hpp"
#include "seqanon/manifest.hpp"
#include "seqanon/metrics.hpp"
#include "seqanon/pipeline.hpp"
#include "seqanon/stats.hpp"

namespace seqanon {

inline constexpr std::size_t kDefaultCellBudget = 500'000'000;

// "whole" resolves against the dataset's epoch; "daily"/"hourly" are
// shorthands; anything else is a minute count.
inline std::size_t parse_aggregation(const std::string& text,
                                     std::size_t epoch_minutes) {
  if (text == "whole") return epoch_minutes;
  if (text == "daily") return 1440;
  if (text == "hourly") return 60;
  try {
    const long long v = std::stoll(text);
    if (v <= 0) throw ConfigError("");
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw ConfigError("bad aggregation '" + text +
                      "': expected whole, daily, hourly or minutes");
  }
}

// The raw-matrix footprint a single-level MDAV run would touch. Used to
// refuse runs that would thrash memory unless --force is given.
inline std::size_t mdav_cell_count(std::size_t n, std::size_t epoch_minutes,
                                   std::size_t interval_minutes) {
  return n * (epoch_minutes / interval_minutes) * kNumActivities;
}

// ---------------------------------------------------------------------------
// gen

struct GenOptions {
  std::size_t n_subjects = 0;
  std::size_t hours = 336;
  double mix_prob = 0.01;
  std::uint64_t seed = 1;
  std::string out;
  std::string outcomes_out;   // optional: subject outcomes CSV
  std::string matrices_out;   // optional: dump the matrix set
  std::string matrices_in;    // optional: load matrices instead of builtin
  std::string seed_corpus;    // optional: estimate matrices from a dataset
  double flourishing_r = 0.146;
  double cgpa_r = -0.289;
};

inline int cmd_gen(const GenOptions& opt) {
  GenConfig cfg;
  cfg.n_subjects = opt.n_subjects;
  cfg.hours = opt.hours;
  cfg.mix_prob = opt.mix_prob;
  cfg.seed = opt.seed;
  cfg.validate();
  if (opt.out.empty()) throw ConfigError("gen needs an --out path");
  if (!opt.matrices_in.empty() && !opt.seed_corpus.empty()) {
    throw ConfigError("--matrices-in and --seed-corpus are exclusive");
  }
  OutcomeLinkConfig link;
  link.flourishing_r = opt.flourishing_r;
  link.cgpa_r = opt.cgpa_r;
  link.validate();

  MatrixSet matrices;
  if (!opt.seed_corpus.empty()) {
    matrices = estimate_matrices(read_dataset_csv(opt.seed_corpus));
  } else if (!opt.matrices_in.empty()) {
    matrices = read_matrices_csv(opt.matrices_in);
  } else {
    matrices = builtin_matrix_family(cfg.n_subjects, cfg.hours, cfg.seed);
  }

  const std::vector<ActivitySequence> dataset = simulate(cfg, matrices);
  write_dataset_csv(opt.out, dataset);
  if (!opt.outcomes_out.empty()) {
    const auto outcomes = synthesize_outcomes(
        dataset, link, Rng(cfg.seed).split(0xabcd).seed());
    write_outcomes_csv(opt.outcomes_out, outcomes);
  }
  if (!opt.matrices_out.empty()) write_matrices_csv(opt.matrices_out, matrices);
  std::printf("wrote %zu sequences of %zu minutes to %s\n", dataset.size(),
              dataset[0].epoch_minutes(), opt.out.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// anonymize

struct AnonymizeOptions {
  Method method = Method::kMcka;
  std::string in;
  std::string out;
  std::string report;          // manifest path; defaults to <out>.manifest.json
  std::string partition_dump;  // optional debug CSV of the leaf partition
  std::size_t k = 0;   // 0 = per-method default
  double epsilon = 1.0;
  std::size_t coefficients = 14;
  std::size_t levels = 0;  // 0 = per-method default
  std::size_t fanout = 50;
  std::string root_agg = "whole";
  std::string leaf_agg = "daily";
  WeightVector weights;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::size_t cell_budget = kDefaultCellBudget;
  bool force = false;
  bool debug_pairing = false;
};

// Tuned defaults: k-anonymity clusters at k=5; differential privacy
// prefers larger clusters (k=50) because noise shrinks with cluster size.
// Both cluster in two levels, whole-duration then daily, fan-out 50. The
// mdav baselines cluster in a single pass at the leaf aggregation.
inline ResolvedRun resolve_run(const AnonymizeOptions& opt, std::size_t n,
                               std::size_t epoch_minutes) {
  ResolvedRun run;
  run.method = opt.method;
  run.seed = opt.seed;
  run.threads = opt.threads == 0 ? 1 : opt.threads;
  run.keep_member_ids = opt.debug_pairing;

  const bool mdav_baseline =
      opt.method == Method::kMdavKa || opt.method == Method::kMdavDp;
  std::size_t k = opt.k;
  if (k == 0) k = is_dp(opt.method) ? 50 : 5;
  std::size_t levels = opt.levels;
  if (levels == 0) levels = mdav_baseline ? 1 : 2;
  if (mdav_baseline && levels != 1) {
    throw ConfigError("mdav methods cluster in a single aggregation level");
  }

  const std::size_t leaf = parse_aggregation(opt.leaf_agg, epoch_minutes);
  const std::size_t root = parse_aggregation(opt.root_agg, epoch_minutes);
  if (mdav_baseline) {
    const std::size_t cells = mdav_cell_count(n, epoch_minutes, leaf);
    if (cells > opt.cell_budget && !opt.force) {
      throw ConfigError(
          "memory guard: mdav on " + std::to_string(n) + " sequences at " +
          std::to_string(leaf) + "-minute aggregation needs " +
          std::to_string(cells) + " matrix cells (budget " +
          std::to_string(opt.cell_budget) +
          "); aggregate coarser or pass --force");
    }
  }

  run.clustering = make_mc_config(n, epoch_minutes, k, opt.fanout, levels,
                                  root, leaf, opt.weights, opt.seed);
  run.dp.epsilon = opt.epsilon;
  run.dp.coefficients = opt.coefficients;
  if (is_dp(opt.method)) run.dp.validate();
  return run;
}

inline int cmd_anonymize(const AnonymizeOptions& opt) {
  if (opt.in.empty() || opt.out.empty()) {
    throw ConfigError("anonymize needs --in and --out paths");
  }
  const std::vector<ActivitySequence> dataset = read_dataset_csv(opt.in);
  const ResolvedRun run =
      resolve_run(opt, dataset.size(), dataset_epoch(dataset));

  PipelineResult result = run_anonymization(dataset, run);
  result.manifest.cell_budget = opt.cell_budget;

  write_dataset_csv(opt.out, result.released);
  const std::string manifest_path =
      opt.report.empty() ? opt.out + ".manifest.json" : opt.report;
  write_manifest(manifest_path, result.manifest);
  if (!opt.partition_dump.empty()) {
    write_partition_csv(opt.partition_dump, result.partition, dataset);
  }
  std::printf(
      "released %zu sequences via %s (clusters: %zu, clustering %.3fs, "
      "release %.3fs)\n",
      result.released.size(), method_name(run.method).c_str(),
      result.manifest.clusters.size(), result.manifest.clustering_seconds,
      result.manifest.release_seconds);
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOptions {
  std::string original;
  std::string released;
  std::string manifest;
  std::string outcomes;        // optional
  std::string compare_report;  // optional: report JSON of another run
  std::string report;          // output JSON; CSV tables derive from it
};

namespace detail {

inline const char* activity_key(std::size_t a) {
  static const char* kKeys[kNumActivities] = {"stationary", "walking",
                                              "running", "missing"};
  return kKeys[a];
}

inline std::string table_path(const std::string& report_path,
                              const std::string& suffix) {
  std::string base = report_path;
  const std::string ext = ".json";
  if (base.size() > ext.size() &&
      base.compare(base.size() - ext.size(), ext.size(), ext) == 0) {
    base.resize(base.size() - ext.size());
  }
  return base + "_" + suffix + ".csv";
}

// Reconstructs original-index -> released-index from the manifest's
// member lists: the j-th member of cluster c maps to anon-<c>-<j>.
inline Pairing pairing_from_manifest(
    const RunManifest& manifest,
    const std::vector<ActivitySequence>& original,
    const std::vector<ActivitySequence>& released) {
  std::map<std::string, std::size_t> original_index;
  for (std::size_t i = 0; i < original.size(); ++i) {
    original_index[original[i].subject_id] = i;
  }
  std::map<std::string, std::size_t> released_index;
  for (std::size_t i = 0; i < released.size(); ++i) {
    released_index[released[i].subject_id] = i;
  }
  Pairing pairing;
  pairing.released_for_original.assign(original.size(), original.size());
  for (const ClusterRecord& cluster : manifest.clusters) {
    if (cluster.members.empty()) {
      throw DataError(
          "manifest has no member ids; re-run anonymize with "
          "--debug-pairing to evaluate utility");
    }
    if (cluster.members.size() != cluster.size) {
      throw DataError("manifest cluster " + std::to_string(cluster.id) +
                      " member list does not match its size");
    }
    for (std::size_t j = 0; j < cluster.members.size(); ++j) {
      const auto orig = original_index.find(cluster.members[j]);
      if (orig == original_index.end()) {
        throw DataError("manifest member '" + cluster.members[j] +
                        "' is not in the original dataset");
      }
      const std::string anon_id = "anon-" + std::to_string(cluster.id) +
                                  "-" + std::to_string(j);
      const auto rel = released_index.find(anon_id);
      if (rel == released_index.end()) {
        throw DataError("released dataset is missing '" + anon_id + "'");
      }
      pairing.released_for_original[orig->second] = rel->second;
    }
  }
  return pairing;
}

}  // namespace detail

inline int cmd_evaluate(const EvaluateOptions& opt) {
  if (opt.original.empty() || opt.released.empty() || opt.manifest.empty()) {
    throw ConfigError("evaluate needs --in, --released and --manifest");
  }
  if (opt.report.empty()) throw ConfigError("evaluate needs a --report path");

  const auto original = read_dataset_csv(opt.original);
  const auto released = read_dataset_csv(opt.released);
  const RunManifest manifest = read_manifest(opt.manifest);

  // Release invariants from the run contract.
  std::size_t total = 0;
  for (const ClusterRecord& c : manifest.clusters) {
    if (c.size < manifest.k) {
      throw DataError("manifest violates k-anonymity: cluster " +
                      std::to_string(c.id) + " holds " +
                      std::to_string(c.size) + " < k=" +
                      std::to_string(manifest.k));
    }
    total += c.size;
  }
  if (total != original.size() || released.size() != original.size()) {
    throw DataError("released dataset cardinality does not match the run");
  }
  if (dataset_epoch(original) != dataset_epoch(released)) {
    throw DataError("released dataset length does not match the original");
  }

  const Pairing pairing =
      detail::pairing_from_manifest(manifest, original, released);
  const UtilityDifference diff =
      utility_relative_difference(original, released, pairing);
  for (double m : diff.mean) {
    if (m < 0.0 || m > 1.0) {
      throw DataError("relative difference out of range");
    }
  }

  nlohmann::json report;
  report["method"] = method_name(manifest.method);
  report["k"] = manifest.k;
  if (is_dp(manifest.method)) report["epsilon"] = manifest.epsilon;
  report["timings"]["clustering_seconds"] = manifest.clustering_seconds;
  report["timings"]["release_seconds"] = manifest.release_seconds;
  for (std::size_t a = 0; a < kNumActivities; ++a) {
    report["relative_difference"][detail::activity_key(a)] = diff.mean[a];
    report["rd_samples"][detail::activity_key(a)] = diff.samples[a];
  }

  {
    std::ofstream t5(detail::table_path(opt.report, "relative_difference"),
                     std::ios::binary);
    t5 << "activity,mean_relative_difference\n";
    char buf[64];
    for (std::size_t a = 0; a < kNumActivities; ++a) {
      std::snprintf(buf, sizeof(buf), "%c,%.6f\n", kLabelChars[a],
                    diff.mean[a]);
      t5 << buf;
    }
  }

  if (!opt.compare_report.empty()) {
    std::ifstream in(opt.compare_report);
    if (!in) {
      throw DataError("cannot open comparison report: " + opt.compare_report);
    }
    nlohmann::json other;
    try {
      in >> other;
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("malformed comparison report: ") +
                      e.what());
    }
    std::ofstream t6(detail::table_path(opt.report, "significance"),
                     std::ios::binary);
    t6 << "activity,p_value,cohens_d\n";
    char buf[96];
    for (std::size_t a = 0; a < kNumActivities; ++a) {
      std::vector<double> theirs;
      try {
        theirs = other.at("rd_samples")
                     .at(detail::activity_key(a))
                     .get<std::vector<double>>();
      } catch (const nlohmann::json::exception&) {
        throw DataError("comparison report " + opt.compare_report +
                        " carries no relative-difference samples");
      }
      const TestResult t = welch_t_test(diff.samples[a], theirs);
      const double d = cohens_d(diff.samples[a], theirs);
      report["t_test"][detail::activity_key(a)] = {
          {"p_value", t.p_value}, {"statistic", t.statistic},
          {"cohens_d", d}, {"versus", other.value("method", "unknown")}};
      std::snprintf(buf, sizeof(buf), "%c,%.6g,%.6g\n", kLabelChars[a],
                    t.p_value, d);
      t6 << buf;
    }
  }

  if (!opt.outcomes.empty()) {
    const auto outcomes = read_outcomes_csv(opt.outcomes);
    std::map<std::string, const OutcomeRecord*> by_id;
    for (const OutcomeRecord& rec : outcomes) by_id[rec.subject_id] = &rec;

    std::vector<double> x_orig, x_rel, flourishing, cgpa;
    for (std::size_t i = 0; i < original.size(); ++i) {
      const auto it = by_id.find(original[i].subject_id);
      if (it == by_id.end()) {
        throw DataError("no outcomes row for subject '" +
                        original[i].subject_id + "'");
      }
      x_orig.push_back(active_fraction(original[i]));
      x_rel.push_back(
          active_fraction(released[pairing.released_for_original[i]]));
      flourishing.push_back(it->second->flourishing);
      cgpa.push_back(it->second->cgpa);
    }
    const auto fill = [&](const char* dataset_key,
                          const std::vector<double>& x) {
      const TestResult rf = pearson(x, flourishing);
      const TestResult rc = pearson(x, cgpa);
      report["correlations"][dataset_key]["flourishing"] = {
          {"r", rf.statistic}, {"p_value", rf.p_value}};
      report["correlations"][dataset_key]["cgpa"] = {
          {"r", rc.statistic}, {"p_value", rc.p_value}};
      return std::array<TestResult, 2>{rf, rc};
    };
    const auto orig_r = fill("original", x_orig);
    const auto rel_r = fill("released", x_rel);

    std::ofstream t7(detail::table_path(opt.report, "correlations"),
                     std::ios::binary);
    t7 << "dataset,outcome,r,p_value\n";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "original,flourishing,%.6f,%.6g\n",
                  orig_r[0].statistic, orig_r[0].p_value);
    t7 << buf;
    std::snprintf(buf, sizeof(buf), "original,cgpa,%.6f,%.6g\n",
                  orig_r[1].statistic, orig_r[1].p_value);
    t7 << buf;
    std::snprintf(buf, sizeof(buf), "released,flourishing,%.6f,%.6g\n",
                  rel_r[0].statistic, rel_r[0].p_value);
    t7 << buf;
    std::snprintf(buf, sizeof(buf), "released,cgpa,%.6f,%.6g\n",
                  rel_r[1].statistic, rel_r[1].p_value);
    t7 << buf;
  }

  std::ofstream out(opt.report, std::ios::binary);
  if (!out) throw DataError("cannot write report: " + opt.report);
  out << report.dump(2) << '\n';

  std::printf("relative difference (mean per day): S %.3f, W %.3f, R %.3f, "
              "M %.3f\n",
              diff.mean[0], diff.mean[1], diff.mean[2], diff.mean[3]);
  return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BenchOptions {
  std::vector<std::size_t> n_list = {250, 500, 1000};
  std::vector<std::size_t> duration_days = {7};
  std::vector<std::size_t> k_list = {5};
  std::vector<std::size_t> fanout_list = {50};
  std::vector<std::size_t> levels_list = {2};
  std::vector<std::string> methods = {"mc", "mdav"};
  std::size_t repetitions = 5;
  std::uint64_t seed = 1;
  std::string out;
  bool measure_utility = true;
  WeightVector weights;
};

struct BenchCell {
  std::size_t n = 0;
  std::size_t days = 0;
  std::string method;
  std::size_t k = 0;
  std::size_t fanout = 0;
  std::size_t levels = 0;
  double mean_clustering_seconds = 0.0;
  double mean_release_seconds = 0.0;
  std::array<double, kNumActivities> rd{};
  bool has_utility = false;
};

// One bench cell: generate a corpus, cluster `repetitions` times for the
// mean wall time, release once for utility. "mc" clusters whole-duration
// then daily; "mdav" is the single daily pass.
inline BenchCell run_bench_cell(std::size_t n, std::size_t days,
                                const std::string& method, std::size_t k,
                                std::size_t fanout, std::size_t levels,
                                const BenchOptions& opt,
                                std::uint64_t cell_seed) {
  BenchCell cell;
  cell.n = n;
  cell.days = days;
  cell.method = method;
  cell.k = k;
  cell.fanout = fanout;
  cell.levels = method == "mdav" ? 1 : levels;

  GenConfig gen;
  gen.n_subjects = n;
  gen.hours = days * 24;
  gen.seed = cell_seed;
  const auto dataset =
      simulate(gen, builtin_matrix_family(n, gen.hours, cell_seed));
  const std::size_t epoch = days * 1440;

  ResolvedRun run;
  run.method = Method::kMcka;
  run.seed = cell_seed;
  run.keep_member_ids = true;
  run.clustering = method == "mdav"
                       ? make_mc_config(n, epoch, k, fanout, 1, 1440, 1440,
                                        opt.weights, cell_seed)
                       : make_mc_config(n, epoch, k, fanout, cell.levels,
                                        epoch, 1440, opt.weights, cell_seed);

  double total = 0.0;
  for (std::size_t rep = 0; rep < opt.repetitions; ++rep) {
    const auto start = std::chrono::steady_clock::now();
    const ClusterPartition p = multilevel_cluster(dataset, run.clustering);
    total += detail::seconds_since(start);
    if (p.min_group_size() < k) {
      throw DataError("bench produced an undersized cluster");
    }
  }
  cell.mean_clustering_seconds = total / static_cast<double>(opt.repetitions);

  if (opt.measure_utility) {
    PipelineResult result = run_anonymization(dataset, run);
    cell.mean_release_seconds = result.manifest.release_seconds;
    const UtilityDifference diff = utility_relative_difference(
        dataset, result.released, result.pairing);
    cell.rd = diff.mean;
    cell.has_utility = true;
  }
  return cell;
}

inline int cmd_bench(const BenchOptions& opt) {
  if (opt.out.empty()) throw ConfigError("bench needs an --out path");
  if (opt.n_list.empty() || opt.duration_days.empty() || opt.k_list.empty() ||
      opt.fanout_list.empty() || opt.levels_list.empty() ||
      opt.methods.empty() || opt.repetitions == 0) {
    throw ConfigError("bench grid must not be empty");
  }
  for (const std::string& m : opt.methods) {
    if (m != "mc" && m != "mdav") {
      throw ConfigError("bench methods are 'mc' and 'mdav', got '" + m + "'");
    }
  }

  std::vector<BenchCell> cells;
  const Rng root(opt.seed);
  std::size_t cell_index = 0;
  for (std::size_t n : opt.n_list) {
    for (std::size_t days : opt.duration_days) {
      for (std::size_t k : opt.k_list) {
        for (std::size_t fanout : opt.fanout_list) {
          for (std::size_t levels : opt.levels_list) {
            // Same corpus seed for every method in the cell, so the
            // speedup column compares like with like.
            const std::uint64_t cell_seed =
                root.split(0x6e /* bench */ + cell_index).seed();
            ++cell_index;
            for (const std::string& method : opt.methods) {
              cells.push_back(run_bench_cell(n, days, method, k, fanout,
                                             levels, opt, cell_seed));
              std::printf("bench n=%zu days=%zu %s: %.4fs clustering\n", n,
                          days, method.c_str(),
                          cells.back().mean_clustering_seconds);
            }
          }
        }
      }
    }
  }

  std::ofstream out(opt.out, std::ios::binary);
  if (!out) throw DataError("cannot write bench table: " + opt.out);
  out << "n,duration_days,method,k,fanout,levels,repetitions,"
         "mean_clustering_seconds,mean_release_seconds,rd_s,rd_w,rd_r,rd_m,"
         "speedup_vs_mdav\n";
  for (const BenchCell& cell : cells) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%zu,%zu,%s,%zu,%zu,%zu,%zu,%.6f,%.6f",
                  cell.n, cell.days, cell.method.c_str(), cell.k,
                  cell.fanout, cell.levels, opt.repetitions,
                  cell.mean_clustering_seconds, cell.mean_release_seconds);
    out << buf;
    if (cell.has_utility) {
      std::snprintf(buf, sizeof(buf), ",%.6f,%.6f,%.6f,%.6f", cell.rd[0],
                    cell.rd[1], cell.rd[2], cell.rd[3]);
      out << buf;
    } else {
      out << ",,,,";
    }
    if (cell.method == "mc") {
      // Pair with the mdav cell on the same data, when present.
      const auto mate = std::find_if(
          cells.begin(), cells.end(), [&](const BenchCell& other) {
            return other.method == "mdav" && other.n == cell.n &&
                   other.days == cell.days && other.k == cell.k &&
                   other.fanout == cell.fanout;
          });
      if (mate != cells.end() && cell.mean_clustering_seconds > 0.0) {
        std::snprintf(buf, sizeof(buf), ",%.3f",
                      mate->mean_clustering_seconds /
                          cell.mean_clustering_seconds);
        out << buf;
      } else {
        out << ',';
      }
    } else {
      out << ',';
    }
    out << '\n';
  }
  std::printf("wrote %zu bench rows to %s\n", cells.size(), opt.out.c_str());
  return 0;
}

}  // namespace seqanon
