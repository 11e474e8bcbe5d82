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

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seqanon/commands.hpp"

namespace {

// Exit codes: 0 success, 1 usage or configuration, 2 data validation,
// 3 runtime failure.
constexpr int kUsageError = 1;
constexpr int kDataError = 2;
constexpr int kRuntimeError = 3;

seqanon::WeightVector parse_weights(const std::string& text) {
  seqanon::WeightVector w;
  if (text.empty()) return w;
  std::size_t start = 0;
  for (std::size_t i = 0; i < seqanon::kNumActivities; ++i) {
    const std::size_t comma = text.find(',', start);
    const bool last = i + 1 == seqanon::kNumActivities;
    if (last != (comma == std::string::npos)) {
      throw seqanon::ConfigError("weights must be four values: s,w,r,m");
    }
    const std::string cell = last ? text.substr(start)
                                  : text.substr(start, comma - start);
    try {
      w.w[i] = std::stod(cell);
    } catch (const std::exception&) {
      throw seqanon::ConfigError("bad weight '" + cell + "'");
    }
    start = comma + 1;
  }
  w.validate();
  return w;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string cell = comma == std::string::npos
                                 ? text.substr(start)
                                 : text.substr(start, comma - start);
    if (!cell.empty()) out.push_back(cell);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "seqanon: multi-level-clustering anonymization for minute-level "
      "activity sequences"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value configuration file");

  // gen -----------------------------------------------------------------
  seqanon::GenOptions gen;
  CLI::App* gen_cmd =
      app.add_subcommand("gen", "generate a synthetic activity corpus");
  gen_cmd->configurable();
  gen_cmd->add_option("--n", gen.n_subjects, "number of subjects")
      ->required();
  gen_cmd->add_option("--hours", gen.hours,
                      "hours per subject (default 336)");
  gen_cmd->add_option("--mix-prob", gen.mix_prob,
                      "per-hour probability of borrowing another subject's "
                      "transition matrix");
  gen_cmd->add_option("--seed", gen.seed, "RNG seed")
      ->envname("SEQANON_SEED");
  gen_cmd->add_option("--out", gen.out, "dataset CSV to write")->required();
  gen_cmd->add_option("--outcomes", gen.outcomes_out,
                      "also write subject outcomes (cgpa, flourishing)");
  gen_cmd->add_option("--matrices-out", gen.matrices_out,
                      "dump the transition matrices");
  gen_cmd->add_option("--matrices-in", gen.matrices_in,
                      "load transition matrices instead of the built-in "
                      "family");
  gen_cmd->add_option("--seed-corpus", gen.seed_corpus,
                      "estimate transition matrices from this dataset");
  gen_cmd->add_option("--flourishing-r", gen.flourishing_r,
                      "target activity-flourishing correlation");
  gen_cmd->add_option("--cgpa-r", gen.cgpa_r,
                      "target activity-CGPA correlation");

  // anonymize -------------------------------------------------------------
  seqanon::AnonymizeOptions anon;
  std::string method = "mcka";
  std::string weights_text;
  CLI::App* anon_cmd =
      app.add_subcommand("anonymize", "cluster and release a dataset");
  anon_cmd->configurable();
  anon_cmd->add_option("--method", method, "mcka | mcdp | mdav-ka | mdav-dp");
  anon_cmd->add_option("--in", anon.in, "input dataset CSV")->required();
  anon_cmd->add_option("--out", anon.out, "released dataset CSV")->required();
  anon_cmd->add_option("--report", anon.report,
                       "manifest path (default <out>.manifest.json)");
  anon_cmd->add_option("--partition-dump", anon.partition_dump,
                       "debug CSV of the leaf partition (group_id, "
                       "subject_id); re-identifying");
  anon_cmd->add_option("--k", anon.k,
                       "cluster size floor (default 5, mcdp 50)");
  anon_cmd->add_option("--epsilon", anon.epsilon,
                       "privacy budget for dp methods (default 1)");
  anon_cmd->add_option("--coefficients", anon.coefficients,
                       "retained DFT coefficients (default 14)");
  anon_cmd->add_option("--levels", anon.levels,
                       "clustering levels (default 2; mdav methods 1)");
  anon_cmd->add_option("--fanout", anon.fanout,
                       "intermediate fan-out (default 50)");
  anon_cmd->add_option("--root-agg", anon.root_agg,
                       "root aggregation: whole|daily|hourly|minutes");
  anon_cmd->add_option("--leaf-agg", anon.leaf_agg,
                       "leaf aggregation: whole|daily|hourly|minutes");
  anon_cmd->add_option("--weights", weights_text,
                       "distance weights s,w,r,m (default equal)");
  anon_cmd->add_option("--seed", anon.seed, "RNG seed")
      ->envname("SEQANON_SEED");
  anon_cmd->add_option("--threads", anon.threads,
                       "worker threads for the release phase");
  anon_cmd->add_option("--cell-budget", anon.cell_budget,
                       "memory guard for mdav methods, in matrix cells");
  anon_cmd->add_flag("--force", anon.force, "run mdav past the memory guard");
  anon_cmd->add_flag("--debug-pairing", anon.debug_pairing,
                     "record original member ids in the manifest (needed "
                     "for utility evaluation; re-identifying)");

  // evaluate ----------------------------------------------------------------
  seqanon::EvaluateOptions eval;
  CLI::App* eval_cmd = app.add_subcommand(
      "evaluate", "compare a released dataset against its original");
  eval_cmd->configurable();
  eval_cmd->add_option("--in", eval.original, "original dataset CSV")
      ->required();
  eval_cmd->add_option("--released", eval.released, "released dataset CSV")
      ->required();
  eval_cmd->add_option("--manifest", eval.manifest, "run manifest JSON")
      ->required();
  eval_cmd->add_option("--outcomes", eval.outcomes,
                       "subject outcomes CSV for correlation preservation");
  eval_cmd->add_option("--compare", eval.compare_report,
                       "another run's report JSON for the significance "
                       "tests");
  eval_cmd->add_option("--report", eval.report, "report JSON to write")
      ->required();

  // bench ----------------------------------------------------------------
  seqanon::BenchOptions bench;
  std::string bench_methods = "mc,mdav";
  std::string bench_weights_text;
  bool bench_no_utility = false;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "time clustering over a parameter grid");
  bench_cmd->configurable();
  bench_cmd->add_option("--n-list", bench.n_list,
                        "subject counts (comma separated)")
      ->delimiter(',');
  bench_cmd->add_option("--durations", bench.duration_days,
                        "durations in days (comma separated)")
      ->delimiter(',');
  bench_cmd->add_option("--k-list", bench.k_list, "cluster sizes")
      ->delimiter(',');
  bench_cmd->add_option("--fanout-list", bench.fanout_list, "fan-outs")
      ->delimiter(',');
  bench_cmd->add_option("--levels-list", bench.levels_list, "level counts")
      ->delimiter(',');
  bench_cmd->add_option("--methods", bench_methods, "mc,mdav");
  bench_cmd->add_option("--reps", bench.repetitions,
                        "repetitions per cell (default 5)");
  bench_cmd->add_option("--seed", bench.seed, "RNG seed")
      ->envname("SEQANON_SEED");
  bench_cmd->add_option("--out", bench.out, "bench table CSV")->required();
  bench_cmd->add_flag("--no-utility", bench_no_utility,
                      "skip the release and utility columns");
  bench_cmd->add_option("--weights", bench_weights_text,
                        "distance weights s,w,r,m");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (gen_cmd->parsed()) return seqanon::cmd_gen(gen);
    if (anon_cmd->parsed()) {
      anon.method = seqanon::parse_method(method);
      if (!weights_text.empty()) anon.weights = parse_weights(weights_text);
      return seqanon::cmd_anonymize(anon);
    }
    if (eval_cmd->parsed()) return seqanon::cmd_evaluate(eval);
    if (bench_cmd->parsed()) {
      bench.methods = split_list(bench_methods);
      bench.measure_utility = !bench_no_utility;
      if (!bench_weights_text.empty()) {
        bench.weights = parse_weights(bench_weights_text);
      }
      return seqanon::cmd_bench(bench);
    }
    std::fprintf(stderr, "no subcommand given\n");
    return kUsageError;
  } catch (const seqanon::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kUsageError;
  } catch (const seqanon::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kDataError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntimeError;
  }
}
