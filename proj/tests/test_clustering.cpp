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

#include <catch2/catch.hpp>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "mdav_oracle.hpp"
#include "seqanon/clustering.hpp"

using namespace seqanon;

namespace {

std::vector<std::vector<std::size_t>> group_sets(
    const ClusterPartition& p) {
  std::vector<std::vector<std::size_t>> out;
  for (const ClusterGroup& g : p.groups) out.push_back(g.members);
  std::sort(out.begin(), out.end());
  return out;
}

void check_partition_invariants(const ClusterPartition& p, std::size_t n,
                                std::size_t k) {
  std::vector<bool> seen(n, false);
  std::size_t covered = 0;
  for (const ClusterGroup& g : p.groups) {
    REQUIRE(g.members.size() >= k);
    for (std::size_t m : g.members) {
      REQUIRE(m < n);
      REQUIRE_FALSE(seen[m]);
      seen[m] = true;
      ++covered;
    }
  }
  REQUIRE(covered == n);
}

// Group sizes in [k, 2k-1] with at most one merge recipient up to 3k-2.
void check_mdav_size_bounds(const ClusterPartition& p, std::size_t k) {
  std::size_t oversized = 0;
  for (const ClusterGroup& g : p.groups) {
    REQUIRE(g.members.size() >= k);
    REQUIRE(g.members.size() <= 3 * k - 2);
    if (g.members.size() > 2 * k - 1) ++oversized;
  }
  REQUIRE(oversized <= 1);
}

}  // namespace

TEST_CASE("mdav splits the two obvious 1-D clusters", "[clustering]") {
  std::vector<AggregateMatrix> points;
  for (double v : {0.0, 1.0, 2.0, 10.0, 11.0, 12.0}) {
    points.push_back(seqtest::scalar_point(v));
  }
  const ClusterPartition p = mdav(points, 3, WeightVector{});
  REQUIRE(group_sets(p) == std::vector<std::vector<std::size_t>>{
                               {0, 1, 2}, {3, 4, 5}});
}

TEST_CASE("mdav with N == 2k forms exactly two groups of k", "[clustering]") {
  Rng rng(31);
  for (std::size_t k : {2u, 3u, 5u}) {
    std::vector<AggregateMatrix> points;
    for (std::size_t i = 0; i < 2 * k; ++i) {
      points.push_back(seqtest::random_matrix(3, rng));
    }
    const ClusterPartition p = mdav(points, k, WeightVector{});
    REQUIRE(p.groups.size() == 2);
    REQUIRE(p.groups[0].members.size() == k);
    REQUIRE(p.groups[1].members.size() == k);
    check_partition_invariants(p, 2 * k, k);
  }
}

TEST_CASE("mdav merges a short remainder into the nearest group",
          "[clustering]") {
  std::vector<AggregateMatrix> points;
  for (double v : {0.0, 1.0, 2.0, 10.0, 11.0}) {
    points.push_back(seqtest::scalar_point(v));
  }
  const ClusterPartition p = mdav(points, 2, WeightVector{});
  std::multiset<std::size_t> sizes;
  for (const ClusterGroup& g : p.groups) sizes.insert(g.members.size());
  REQUIRE(sizes == std::multiset<std::size_t>{2, 3});
  check_partition_invariants(p, 5, 2);
  // The leftover point 2 sits nearest the {0,1} group's centroid.
  REQUIRE(group_sets(p) ==
          std::vector<std::vector<std::size_t>>{{0, 1, 2}, {3, 4}});
}

TEST_CASE("mdav rejects datasets smaller than k", "[clustering]") {
  Rng rng(32);
  std::vector<AggregateMatrix> points = {seqtest::random_matrix(2, rng)};
  REQUIRE_THROWS_AS(mdav(points, 2, WeightVector{}), DataError);
}

TEST_CASE("mdav equals the literal five-step trace on small instances",
          "[clustering]") {
  Rng rng(33);
  int merge_cases = 0;
  for (int rep = 0; rep < 120; ++rep) {
    const std::size_t k = 2 + rng.below(2);  // {2, 3}
    const std::size_t n = k + rng.below(12 - k + 1);
    std::vector<AggregateMatrix> points;
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.u01() < 0.5) {
        // Discrete values invite distance ties; the tie rules must agree.
        points.push_back(
            seqtest::scalar_point(static_cast<double>(rng.below(4))));
      } else {
        points.push_back(seqtest::random_matrix(1, rng));
      }
    }
    const ClusterPartition got = mdav(points, k, WeightVector{});
    const seqtest::MdavTraceOracle oracle(points, WeightVector{});
    REQUIRE(group_sets(got) == oracle.run(k));
    check_partition_invariants(got, n, k);
    check_mdav_size_bounds(got, k);
    if (n % (2 * k) != 0 && n % (2 * k) < k) ++merge_cases;
  }
  REQUIRE(merge_cases > 0);  // the family must exercise the merge step
}

TEST_CASE("identical points cluster into valid groups at zero distance",
          "[clustering]") {
  const auto dataset = std::vector<ActivitySequence>(
      7, seqtest::repeat_seq("dup", "SWRM", 30));
  const MCConfig cfg = make_mc_config(7, 120, 3, 2, 2, 120, 60);
  const ClusterPartition p = multilevel_cluster(dataset, cfg);
  check_partition_invariants(p, 7, 3);
  for (const ClusterGroup& g : p.groups) {
    REQUIRE(g.members.size() >= 3);
    REQUIRE(g.members.size() <= 7);
  }
  REQUIRE(clustering_cost(p, dataset, WeightVector{}) == Approx(0.0));
}

TEST_CASE("multilevel clustering with one minute-level pass is mdav",
          "[clustering]") {
  Rng rng(34);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t n = 8 + rng.below(20);
    const std::size_t k = 2 + rng.below(2);
    const auto dataset = seqtest::random_dataset(n, 24, rng);

    MCConfig cfg;
    cfg.levels = 1;
    cfg.aggregation_minutes = {1};
    cfg.partition_sizes = {k};
    cfg.k = k;
    const ClusterPartition via_mc = multilevel_cluster(dataset, cfg);

    std::vector<AggregateMatrix> points;
    for (const auto& seq : dataset) points.push_back(aggregate(seq, 1));
    const ClusterPartition via_mdav = mdav(points, k, WeightVector{});

    REQUIRE(group_sets(via_mc) == group_sets(via_mdav));
  }
}

TEST_CASE("two-level clustering separates coarse groups before fine ones",
          "[clustering]") {
  // Eight subjects over two days. Subjects 0-3 are low-activity, 4-7 are
  // high-activity, so the daily pass splits them 4/4. Within each side the
  // daily totals match but the hour placement differs, so the hourly pass
  // tells the pairs apart.
  auto build_day = [](std::size_t active_hour, char activity,
                      std::size_t active_hours) {
    std::string day(1440, 'S');
    for (std::size_t h = 0; h < active_hours; ++h) {
      for (std::size_t m = 0; m < 60; ++m) {
        day[(active_hour + h) * 60 + m] = activity;
      }
    }
    return day;
  };

  std::vector<ActivitySequence> dataset;
  // Low-activity: one walking hour per day, placed early vs late.
  dataset.push_back(seqtest::seq_of("u0", build_day(1, 'W', 1) +
                                              build_day(1, 'W', 1)));
  dataset.push_back(seqtest::seq_of("u1", build_day(1, 'W', 1) +
                                              build_day(1, 'W', 1)));
  dataset.push_back(seqtest::seq_of("u2", build_day(20, 'W', 1) +
                                              build_day(20, 'W', 1)));
  dataset.push_back(seqtest::seq_of("u3", build_day(20, 'W', 1) +
                                              build_day(20, 'W', 1)));
  // High-activity: four running hours per day, early vs late.
  dataset.push_back(seqtest::seq_of("u4", build_day(2, 'R', 4) +
                                              build_day(2, 'R', 4)));
  dataset.push_back(seqtest::seq_of("u5", build_day(2, 'R', 4) +
                                              build_day(2, 'R', 4)));
  dataset.push_back(seqtest::seq_of("u6", build_day(18, 'R', 4) +
                                              build_day(18, 'R', 4)));
  dataset.push_back(seqtest::seq_of("u7", build_day(18, 'R', 4) +
                                              build_day(18, 'R', 4)));

  const MCConfig cfg = make_mc_config(8, 2880, 2, 2, 2, 1440, 60);
  REQUIRE(cfg.partition_sizes == std::vector<std::size_t>{4, 2});

  const ClusterPartition p = multilevel_cluster(dataset, cfg);
  REQUIRE(group_sets(p) == std::vector<std::vector<std::size_t>>{
                               {0, 1}, {2, 3}, {4, 5}, {6, 7}});

  // Provenance: each leaf passed through both levels, and the level-1
  // grouping kept 0-3 apart from 4-7.
  std::set<std::size_t> level1_of_low, level1_of_high;
  for (const ClusterGroup& g : p.groups) {
    REQUIRE(g.level_path.size() == 2);
    REQUIRE(g.level_path[0].interval_minutes == 1440);
    REQUIRE(g.level_path[1].interval_minutes == 60);
    (g.members.front() < 4 ? level1_of_low : level1_of_high)
        .insert(g.level_path[1].group_ordinal);
  }
  REQUIRE(level1_of_low.size() == 1);
  REQUIRE(level1_of_high.size() == 1);
  REQUIRE(level1_of_low != level1_of_high);
}

TEST_CASE("invalid configurations fail before any work", "[clustering]") {
  Rng rng(35);
  const auto dataset = seqtest::random_dataset(10, 120, rng);

  MCConfig cfg;
  cfg.levels = 2;
  cfg.aggregation_minutes = {120, 60};
  cfg.partition_sizes = {4, 2};
  cfg.k = 2;
  REQUIRE_NOTHROW(multilevel_cluster(dataset, cfg));

  SECTION("aggregation must divide the epoch") {
    cfg.aggregation_minutes = {120, 7};
    REQUIRE_THROWS_AS(multilevel_cluster(dataset, cfg), ConfigError);
  }
  SECTION("aggregations must not grow coarser toward the leaves") {
    cfg.aggregation_minutes = {60, 120};
    REQUIRE_THROWS_AS(multilevel_cluster(dataset, cfg), ConfigError);
  }
  SECTION("leaf size must equal k") {
    cfg.partition_sizes = {4, 3};
    REQUIRE_THROWS_AS(multilevel_cluster(dataset, cfg), ConfigError);
  }
  SECTION("k larger than the dataset is a data error") {
    cfg.partition_sizes = {22, 11};
    cfg.k = 11;
    REQUIRE_THROWS_AS(multilevel_cluster(dataset, cfg), DataError);
  }
}

TEST_CASE("clustering cost diagnostics", "[clustering]") {
  SECTION("two distinct points in one group cost their distance") {
    // Group centroid is the midpoint, so each member contributes half the
    // pairwise distance.
    std::vector<ActivitySequence> dataset = {
        seqtest::repeat_seq("a", "S", 60), seqtest::repeat_seq("b", "W", 60)};
    ClusterPartition p;
    p.groups.push_back(ClusterGroup{{0, 1}, {}});
    const double pairwise = dist_euc(aggregate(dataset[0], 1),
                                     aggregate(dataset[1], 1),
                                     WeightVector{});
    REQUIRE(clustering_cost(p, dataset, WeightVector{}) ==
            Approx(pairwise));
  }

  SECTION("cost does not depend on group order") {
    Rng rng(36);
    const auto dataset = seqtest::random_dataset(9, 60, rng);
    ClusterPartition p;
    p.groups.push_back(ClusterGroup{{0, 1, 2}, {}});
    p.groups.push_back(ClusterGroup{{3, 4, 5}, {}});
    p.groups.push_back(ClusterGroup{{6, 7, 8}, {}});
    const double cost = clustering_cost(p, dataset, WeightVector{});
    std::reverse(p.groups.begin(), p.groups.end());
    REQUIRE(clustering_cost(p, dataset, WeightVector{}) == Approx(cost));
  }
}

TEST_CASE("make_mc_config applies the fan-out rule", "[clustering]") {
  // Intermediate size min(k * fanout, N/2).
  const MCConfig big = make_mc_config(9800, 20160, 5, 50, 2, 20160, 1440);
  REQUIRE(big.partition_sizes == std::vector<std::size_t>{250, 5});
  const MCConfig clamped = make_mc_config(100, 20160, 5, 50, 2, 20160, 1440);
  REQUIRE(clamped.partition_sizes == std::vector<std::size_t>{50, 5});
  const MCConfig three = make_mc_config(9800, 20160, 5, 10, 3, 20160, 1440);
  REQUIRE(three.partition_sizes == std::vector<std::size_t>{500, 50, 5});
}
