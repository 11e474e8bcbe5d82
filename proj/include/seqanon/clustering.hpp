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
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "seqanon/activity.hpp"
#include "seqanon/error.hpp"
#include "seqanon/matrix.hpp"

namespace seqanon {

// One aggregation pass applied while a group was being formed.
struct LevelStep {
  int level = 0;                     // 1 = root (coarsest)
  std::size_t interval_minutes = 0;  // aggregation used at that level
  std::size_t group_ordinal = 0;     // which cluster the group sat in
};

struct ClusterGroup {
  std::vector<std::size_t> members;   // dataset indices, sorted ascending
  std::vector<LevelStep> level_path;  // root-to-leaf provenance
};

// Disjoint cover of the dataset's indices; every group carries at least k
// members once clustering finishes.
struct ClusterPartition {
  std::vector<ClusterGroup> groups;

  std::size_t min_group_size() const {
    std::size_t m = std::numeric_limits<std::size_t>::max();
    for (const ClusterGroup& g : groups) m = std::min(m, g.members.size());
    return m;
  }
};

namespace detail {

// Sort members within groups and order groups by their smallest member so
// equal partitions compare equal.
inline void canonicalize(ClusterPartition& partition) {
  for (ClusterGroup& g : partition.groups) {
    std::sort(g.members.begin(), g.members.end());
  }
  std::sort(partition.groups.begin(), partition.groups.end(),
            [](const ClusterGroup& a, const ClusterGroup& b) {
              return a.members.front() < b.members.front();
            });
}

inline Centroid centroid_over(const std::vector<AggregateMatrix>& points,
                              const std::vector<std::size_t>& idx) {
  Centroid c = points[idx[0]];
  for (std::size_t i = 1; i < idx.size(); ++i) {
    for (std::size_t v = 0; v < c.values.size(); ++v) {
      c.values[v] += points[idx[i]].values[v];
    }
  }
  const double inv = 1.0 / static_cast<double>(idx.size());
  for (double& v : c.values) v *= inv;
  return c;
}

// Index of the point farthest from `ref`; ties go to the lowest index.
inline std::size_t farthest_from(const std::vector<AggregateMatrix>& points,
                                 const std::vector<std::size_t>& idx,
                                 const AggregateMatrix& ref,
                                 const WeightVector& w,
                                 std::size_t skip =
                                     std::numeric_limits<std::size_t>::max()) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  double best_d = -1.0;
  for (std::size_t i : idx) {
    if (i == skip) continue;
    const double d = dist_euc(points[i], ref, w);
    if (d > best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

// The `count` candidates nearest to `center`, ties to the lowest index.
// Candidates must be sorted ascending, which makes the (distance, index)
// order total and deterministic.
inline std::vector<std::size_t> nearest_to(
    const std::vector<AggregateMatrix>& points,
    const std::vector<std::size_t>& candidates, std::size_t center,
    std::size_t count, const WeightVector& w) {
  std::vector<std::pair<double, std::size_t>> dists;
  dists.reserve(candidates.size());
  for (std::size_t i : candidates) {
    dists.emplace_back(dist_euc(points[i], points[center], w), i);
  }
  std::nth_element(dists.begin(), dists.begin() + (count - 1), dists.end());
  dists.resize(count);
  std::vector<std::size_t> out;
  out.reserve(count);
  for (const auto& [d, i] : dists) out.push_back(i);
  std::sort(out.begin(), out.end());
  return out;
}

inline void remove_members(std::vector<std::size_t>& remaining,
                           const std::vector<std::size_t>& taken) {
  std::vector<std::size_t> kept;
  kept.reserve(remaining.size() - taken.size());
  std::size_t j = 0;
  for (std::size_t i : remaining) {
    if (j < taken.size() && taken[j] == i) {
      ++j;
    } else {
      kept.push_back(i);
    }
  }
  remaining.swap(kept);
}

}  // namespace detail

// Maximum Distance to Average Vector microaggregation. Repeatedly grows a
// group of size k around the point r farthest from the centroid of what
// remains and another around the point s farthest from r; between k and
// 2k-1 leftovers become one group of their own, fewer than k join the
// existing group with the nearest centroid. Ties always resolve to the
// lowest index, and s is withheld from r's group so both groups can form.
inline ClusterPartition mdav(const std::vector<AggregateMatrix>& points,
                             std::size_t k, const WeightVector& w) {
  const std::size_t n = points.size();
  if (k == 0) throw ConfigError("group size k must be positive");
  if (n < k) {
    throw DataError("cannot build groups of " + std::to_string(k) +
                    " from " + std::to_string(n) + " points");
  }
  w.validate();

  std::vector<std::size_t> remaining(n);
  for (std::size_t i = 0; i < n; ++i) remaining[i] = i;

  ClusterPartition partition;
  while (remaining.size() >= 2 * k) {
    const Centroid center = detail::centroid_over(points, remaining);
    const std::size_t r = detail::farthest_from(points, remaining, center, w);
    const std::size_t s =
        detail::farthest_from(points, remaining, points[r], w, r);

    std::vector<std::size_t> pool;
    pool.reserve(remaining.size() - 2);
    for (std::size_t i : remaining) {
      if (i != r && i != s) pool.push_back(i);
    }

    const std::vector<std::size_t> r_neighbors =
        k > 1 ? detail::nearest_to(points, pool, r, k - 1, w)
              : std::vector<std::size_t>{};
    ClusterGroup group_r;
    group_r.members = r_neighbors;
    group_r.members.push_back(r);
    std::sort(group_r.members.begin(), group_r.members.end());

    detail::remove_members(pool, r_neighbors);

    ClusterGroup group_s;
    group_s.members = k > 1 ? detail::nearest_to(points, pool, s, k - 1, w)
                            : std::vector<std::size_t>{};
    group_s.members.push_back(s);
    std::sort(group_s.members.begin(), group_s.members.end());

    detail::remove_members(remaining, group_r.members);
    detail::remove_members(remaining, group_s.members);
    partition.groups.push_back(std::move(group_r));
    partition.groups.push_back(std::move(group_s));
  }

  if (remaining.size() >= k) {
    ClusterGroup rest;
    rest.members = remaining;
    partition.groups.push_back(std::move(rest));
  } else if (!remaining.empty()) {
    // Fewer than k leftovers: merge into the group whose centroid is
    // nearest to the centroid of the remainder. Centroids are recomputed
    // from current membership.
    const Centroid rest_center = detail::centroid_over(points, remaining);
    std::size_t best_group = 0;
    double best_d = std::numeric_limits<double>::max();
    for (std::size_t g = 0; g < partition.groups.size(); ++g) {
      const Centroid gc =
          detail::centroid_over(points, partition.groups[g].members);
      const double d = dist_euc(gc, rest_center, w);
      if (d < best_d) {
        best_d = d;
        best_group = g;
      }
    }
    auto& members = partition.groups[best_group].members;
    members.insert(members.end(), remaining.begin(), remaining.end());
  }

  detail::canonicalize(partition);
  return partition;
}

// Multi-level clustering configuration. Aggregation intervals run coarsest
// to finest; partition sizes shrink to k at the leaves.
struct MCConfig {
  std::size_t levels = 2;
  std::vector<std::size_t> aggregation_minutes;  // a_1 (coarsest) .. a_l
  std::vector<std::size_t> partition_sizes;      // s_1 .. s_l, s_l == k
  std::size_t k = 5;
  std::size_t fanout = 50;
  WeightVector weights;
  std::uint64_t seed = 1;

  void validate(std::size_t n, std::size_t epoch_minutes) const {
    if (levels == 0) throw ConfigError("levels must be positive");
    if (aggregation_minutes.size() != levels ||
        partition_sizes.size() != levels) {
      throw ConfigError("config must list one aggregation and one partition "
                        "size per level");
    }
    if (k == 0) throw ConfigError("k must be positive");
    if (partition_sizes.back() != k) {
      throw ConfigError("leaf partition size must equal k");
    }
    for (std::size_t t = 0; t < levels; ++t) {
      const std::size_t a = aggregation_minutes[t];
      if (a == 0 || epoch_minutes % a != 0) {
        throw ConfigError("aggregation of " + std::to_string(a) +
                          " minutes at level " + std::to_string(t + 1) +
                          " does not divide T=" +
                          std::to_string(epoch_minutes));
      }
      if (t > 0 && aggregation_minutes[t] > aggregation_minutes[t - 1]) {
        throw ConfigError("aggregations must grow finer toward the leaves");
      }
      if (partition_sizes[t] < k) {
        throw ConfigError("partition sizes must be at least k");
      }
      if (t > 0 && partition_sizes[t] > partition_sizes[t - 1]) {
        throw ConfigError("partition sizes must not grow toward the leaves");
      }
    }
    if (n < k) {
      throw DataError("dataset of " + std::to_string(n) +
                      " sequences cannot satisfy k=" + std::to_string(k));
    }
    weights.validate();
  }
};

// Build an MCConfig from the fan-out rule: a node sitting `h` levels above
// the leaves holds min(k * fanout^h, N/2) records, never fewer than k.
inline MCConfig make_mc_config(std::size_t n, std::size_t epoch_minutes,
                               std::size_t k, std::size_t fanout,
                               std::size_t levels,
                               std::size_t root_agg_minutes,
                               std::size_t leaf_agg_minutes,
                               WeightVector weights = {},
                               std::uint64_t seed = 1) {
  if (levels == 0) throw ConfigError("levels must be positive");
  if (fanout == 0) throw ConfigError("fanout must be positive");
  MCConfig cfg;
  cfg.levels = levels;
  cfg.k = k;
  cfg.fanout = fanout;
  cfg.weights = weights;
  cfg.seed = seed;
  cfg.aggregation_minutes.resize(levels);
  cfg.partition_sizes.resize(levels);
  for (std::size_t t = 0; t < levels; ++t) {
    // Intermediate levels aggregate like the leaf level; only the root
    // uses the coarse interval.
    cfg.aggregation_minutes[t] = t == 0 ? root_agg_minutes : leaf_agg_minutes;
    const std::size_t height = levels - 1 - t;
    std::size_t size = k;
    for (std::size_t h = 0; h < height; ++h) {
      if (size > n / fanout) {  // overflow guard
        size = n;
        break;
      }
      size *= fanout;
    }
    size = std::min(size, n / 2);
    cfg.partition_sizes[t] = std::max(size, k);
  }
  if (levels == 1) cfg.aggregation_minutes[0] = leaf_agg_minutes;
  cfg.validate(n, epoch_minutes);
  return cfg;
}

// Aggregates computed once at the finest level can stand in for coarser
// levels by row-averaging; cap how much gets cached up front.
inline constexpr std::size_t kAggregateCacheCellLimit = 1u << 26;

// Multi-level clustering: start from one root cluster holding everything;
// at each level aggregate the members of every current cluster to that
// level's interval and split them with MDAV at that level's partition
// size. Clusters too small to split twice pass through unchanged.
//
// When the leaf-level aggregates fit the cache limit they are computed in
// one pass over the raw labels and coarser levels derive from them by
// row-averaging, which yields the same values as aggregating directly.
inline ClusterPartition multilevel_cluster(
    const std::vector<ActivitySequence>& dataset, const MCConfig& cfg) {
  const std::size_t n = dataset.size();
  const std::size_t t_minutes = dataset.empty() ? 0 : dataset_epoch(dataset);
  cfg.validate(n, t_minutes);

  const std::size_t leaf_interval = cfg.aggregation_minutes.back();
  const bool cache_leaf =
      n * (t_minutes / leaf_interval) * kNumActivities <=
      kAggregateCacheCellLimit;
  std::vector<AggregateMatrix> leaf_aggs;
  if (cache_leaf) {
    leaf_aggs.reserve(n);
    for (const ActivitySequence& seq : dataset) {
      leaf_aggs.push_back(aggregate(seq, leaf_interval));
    }
  }
  const auto member_aggregate = [&](std::size_t m, std::size_t interval) {
    if (cache_leaf) {
      if (interval == leaf_interval) return leaf_aggs[m];
      if (interval % leaf_interval == 0) {
        return reaggregate(leaf_aggs[m], interval);
      }
    }
    return aggregate(dataset[m], interval);
  };

  std::vector<ClusterGroup> current(1);
  current[0].members.resize(n);
  for (std::size_t i = 0; i < n; ++i) current[0].members[i] = i;

  for (std::size_t t = 0; t < cfg.levels; ++t) {
    const std::size_t interval = cfg.aggregation_minutes[t];
    const std::size_t split_size = cfg.partition_sizes[t];
    std::vector<ClusterGroup> next;
    next.reserve(current.size());

    for (std::size_t c = 0; c < current.size(); ++c) {
      ClusterGroup& cluster = current[c];
      const LevelStep step{static_cast<int>(t) + 1, interval, c};
      if (cluster.members.size() < 2 * split_size) {
        cluster.level_path.push_back(step);
        next.push_back(std::move(cluster));
        continue;
      }
      std::vector<AggregateMatrix> aggs;
      aggs.reserve(cluster.members.size());
      for (std::size_t m : cluster.members) {
        aggs.push_back(member_aggregate(m, interval));
      }
      ClusterPartition sub = mdav(aggs, split_size, cfg.weights);
      for (ClusterGroup& local : sub.groups) {
        ClusterGroup mapped;
        mapped.level_path = cluster.level_path;
        mapped.level_path.push_back(step);
        mapped.members.reserve(local.members.size());
        for (std::size_t li : local.members) {
          mapped.members.push_back(cluster.members[li]);
        }
        std::sort(mapped.members.begin(), mapped.members.end());
        next.push_back(std::move(mapped));
      }
    }
    current.swap(next);
  }

  ClusterPartition partition;
  partition.groups = std::move(current);
  detail::canonicalize(partition);

  // Leaf guarantee: disjoint cover with every group at least k strong.
  std::vector<bool> seen(n, false);
  std::size_t covered = 0;
  for (const ClusterGroup& g : partition.groups) {
    if (g.members.size() < cfg.k) {
      throw DataError("internal error: leaf cluster smaller than k");
    }
    for (std::size_t m : g.members) {
      if (seen[m]) throw DataError("internal error: overlapping clusters");
      seen[m] = true;
      ++covered;
    }
  }
  if (covered != n) {
    throw DataError("internal error: clusters do not cover the dataset");
  }
  return partition;
}

// Diagnostic: sum over groups of member-to-centroid distances at
// minute-level aggregation. Used by tests and the bench harness.
inline double clustering_cost(const ClusterPartition& partition,
                              const std::vector<ActivitySequence>& dataset,
                              const WeightVector& w) {
  double total = 0.0;
  for (const ClusterGroup& g : partition.groups) {
    const Centroid center = centroid_of_sequences(dataset, g.members, 1);
    for (std::size_t m : g.members) {
      total += dist_euc(aggregate(dataset[m], 1), center, w);
    }
  }
  return total;
}

}  // namespace seqanon
