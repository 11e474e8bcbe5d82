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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "seqanon/anonymize.hpp"
#include "seqanon/clustering.hpp"
#include "seqanon/manifest.hpp"
#include "seqanon/metrics.hpp"
#include "seqanon/rng.hpp"

namespace seqanon {

namespace detail {

// Work-stealing-free index pool; exceptions from workers surface on the
// caller thread.
inline void parallel_for(std::size_t count, std::size_t threads,
                         const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  const std::size_t workers = std::min(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (!failed.load(std::memory_order_relaxed)) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true);
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

inline double seconds_since(
    std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

}  // namespace detail

// Fully resolved anonymization run: clustering plan plus release settings.
struct ResolvedRun {
  Method method = Method::kMcka;
  MCConfig clustering;
  DPParams dp;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  bool keep_member_ids = false;  // pairing debug
};

struct PipelineResult {
  ClusterPartition partition;
  std::vector<ActivitySequence> released;  // cluster-major order
  Pairing pairing;                         // original index -> released index
  RunManifest manifest;
};

// Cluster, then release every leaf cluster independently. Each cluster
// draws from its own sub-seed, so the output is identical for any thread
// count or scheduling order.
inline PipelineResult run_anonymization(
    const std::vector<ActivitySequence>& dataset, const ResolvedRun& run) {
  const std::size_t n = dataset.size();
  const std::size_t epoch = dataset_epoch(dataset);

  PipelineResult result;

  const auto cluster_start = std::chrono::steady_clock::now();
  result.partition = multilevel_cluster(dataset, run.clustering);
  const double clustering_seconds = detail::seconds_since(cluster_start);

  const std::size_t n_clusters = result.partition.groups.size();
  std::vector<std::vector<ActivitySequence>> per_cluster(n_clusters);
  std::vector<double> lambdas(n_clusters, 0.0);
  const Rng root(run.seed);
  const bool dp = is_dp(run.method);

  const auto release_start = std::chrono::steady_clock::now();
  detail::parallel_for(n_clusters, run.threads, [&](std::size_t c) {
    Rng rng = root.split(c);
    const ClusterGroup& group = result.partition.groups[c];
    if (dp) {
      DpRelease rel = mcdp_release(dataset, group.members, run.dp, c, rng);
      lambdas[c] = rel.lambda;
      per_cluster[c] = std::move(rel.sequences);
    } else {
      per_cluster[c] = mcka_release(dataset, group.members, c, rng);
    }
  });
  const double release_seconds = detail::seconds_since(release_start);

  result.released.reserve(n);
  result.pairing.released_for_original.assign(n, 0);
  result.manifest.method = run.method;
  result.manifest.seed = run.seed;
  result.manifest.k = run.clustering.k;
  result.manifest.fanout = run.clustering.fanout;
  result.manifest.levels = run.clustering.levels;
  result.manifest.aggregation_minutes = run.clustering.aggregation_minutes;
  result.manifest.partition_sizes = run.clustering.partition_sizes;
  result.manifest.weights = run.clustering.weights.w;
  result.manifest.epsilon = run.dp.epsilon;
  result.manifest.coefficients = run.dp.coefficients;
  result.manifest.subjects = n;
  result.manifest.epoch_minutes = epoch;
  result.manifest.threads = run.threads;
  result.manifest.pairing_debug = run.keep_member_ids;
  result.manifest.clustering_seconds = clustering_seconds;
  result.manifest.release_seconds = release_seconds;

  for (std::size_t c = 0; c < n_clusters; ++c) {
    const ClusterGroup& group = result.partition.groups[c];
    const std::size_t offset = result.released.size();
    for (std::size_t j = 0; j < group.members.size(); ++j) {
      result.pairing.released_for_original[group.members[j]] = offset + j;
    }
    for (ActivitySequence& seq : per_cluster[c]) {
      result.released.push_back(std::move(seq));
    }

    ClusterRecord record;
    record.id = c;
    record.size = group.members.size();
    if (dp) record.lambda = lambdas[c];
    record.level_path = group.level_path;
    if (run.keep_member_ids) {
      record.members.reserve(group.members.size());
      for (std::size_t m : group.members) {
        record.members.push_back(dataset[m].subject_id);
      }
    }
    result.manifest.clusters.push_back(std::move(record));
  }

  if (result.released.size() != n) {
    throw DataError("internal error: release count does not match input");
  }
  return result;
}

}  // namespace seqanon
