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
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "seqanon/activity.hpp"
#include "seqanon/error.hpp"

namespace seqanon {

inline constexpr double kRowSumTolerance = 1e-9;

// Per-activity weights for the clustering distance. Non-negative, not all
// zero; defaults to equal weights.
struct WeightVector {
  std::array<double, kNumActivities> w{1.0, 1.0, 1.0, 1.0};

  void validate() const {
    double sum = 0.0;
    for (double wi : w) {
      if (!(wi >= 0.0)) throw ConfigError("weights must be non-negative");
      sum += wi;
    }
    if (sum == 0.0) throw ConfigError("weights must not all be zero");
  }
};

// A sequence re-expressed as per-interval time fractions, one row per
// interval of `interval_minutes`, one column per activity. Rows sum to 1.
struct AggregateMatrix {
  std::size_t interval_minutes = 0;
  std::size_t rows = 0;
  std::vector<double> values;  // rows x kNumActivities, row-major

  double at(std::size_t row, std::size_t activity) const {
    return values[row * kNumActivities + activity];
  }
  double& at(std::size_t row, std::size_t activity) {
    return values[row * kNumActivities + activity];
  }

  bool same_shape(const AggregateMatrix& other) const {
    return rows == other.rows && values.size() == other.values.size();
  }
};

// A centroid has the same shape as an aggregate: each row is a categorical
// distribution over the four activities.
using Centroid = AggregateMatrix;

// Time fractions of each activity per interval. interval_minutes must
// divide the sequence length.
inline AggregateMatrix aggregate(const ActivitySequence& seq,
                                 std::size_t interval_minutes) {
  const std::size_t t = seq.epoch_minutes();
  if (interval_minutes == 0 || t % interval_minutes != 0) {
    throw DataError("interval of " + std::to_string(interval_minutes) +
                    " minutes does not divide sequence length T=" +
                    std::to_string(t));
  }
  AggregateMatrix m;
  m.interval_minutes = interval_minutes;
  m.rows = t / interval_minutes;
  std::vector<std::uint32_t> counts(m.rows * kNumActivities, 0);
  const ActivityLabel* labels = seq.labels.data();
  for (std::size_t row = 0; row < m.rows; ++row) {
    std::uint32_t* row_counts = counts.data() + row * kNumActivities;
    for (std::size_t j = 0; j < interval_minutes; ++j) {
      ++row_counts[static_cast<std::size_t>(*labels++)];
    }
  }
  m.values.resize(counts.size());
  const double inv = 1.0 / static_cast<double>(interval_minutes);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    m.values[i] = static_cast<double>(counts[i]) * inv;
  }
  return m;
}

// Row-average a fine aggregate down to a coarser interval. `coarse` must be
// a multiple of the source interval. Equivalent to aggregating the original
// sequence directly at `coarse`.
inline AggregateMatrix reaggregate(const AggregateMatrix& fine,
                                   std::size_t coarse) {
  if (coarse == 0 || coarse % fine.interval_minutes != 0) {
    throw DataError("cannot re-aggregate interval " +
                    std::to_string(fine.interval_minutes) + " to " +
                    std::to_string(coarse));
  }
  const std::size_t factor = coarse / fine.interval_minutes;
  if (fine.rows % factor != 0) {
    throw DataError("re-aggregation factor does not divide row count");
  }
  AggregateMatrix m;
  m.interval_minutes = coarse;
  m.rows = fine.rows / factor;
  m.values.assign(m.rows * kNumActivities, 0.0);
  const double inv = 1.0 / static_cast<double>(factor);
  for (std::size_t r = 0; r < fine.rows; ++r) {
    const std::size_t out = r / factor;
    for (std::size_t a = 0; a < kNumActivities; ++a) {
      m.values[out * kNumActivities + a] += fine.at(r, a) * inv;
    }
  }
  return m;
}

// Weighted Euclidean distance between two same-shape aggregates: for each
// activity channel, the Euclidean norm over intervals, combined as a
// weighted sum across channels.
inline double dist_euc(const AggregateMatrix& x, const AggregateMatrix& y,
                       const WeightVector& w) {
  if (!x.same_shape(y)) {
    throw DataError("distance between aggregates of different shape (" +
                    std::to_string(x.rows) + " vs " + std::to_string(y.rows) +
                    " rows)");
  }
  std::array<double, kNumActivities> sq{};
  const std::size_t n = x.values.size();
  for (std::size_t i = 0; i < n; i += kNumActivities) {
    for (std::size_t a = 0; a < kNumActivities; ++a) {
      const double d = x.values[i + a] - y.values[i + a];
      sq[a] += d * d;
    }
  }
  double dist = 0.0;
  for (std::size_t a = 0; a < kNumActivities; ++a) {
    dist += w.w[a] * std::sqrt(sq[a]);
  }
  return dist;
}

// Elementwise arithmetic mean of a non-empty set of same-shape aggregates.
inline Centroid centroid_of(std::span<const AggregateMatrix> members) {
  if (members.empty()) throw DataError("centroid of an empty set");
  Centroid c = members.front();
  for (std::size_t m = 1; m < members.size(); ++m) {
    if (!members[m].same_shape(c)) {
      throw DataError("centroid over aggregates of different shape");
    }
    for (std::size_t i = 0; i < c.values.size(); ++i) {
      c.values[i] += members[m].values[i];
    }
  }
  const double inv = 1.0 / static_cast<double>(members.size());
  for (double& v : c.values) v *= inv;
  return c;
}

inline Centroid centroid_of(const std::vector<AggregateMatrix>& members) {
  return centroid_of(std::span<const AggregateMatrix>(members));
}

// Centroid of a group of sequences at a given interval, computed by label
// counting rather than materializing one aggregate per member.
inline Centroid centroid_of_sequences(
    const std::vector<ActivitySequence>& dataset,
    std::span<const std::size_t> members, std::size_t interval_minutes) {
  if (members.empty()) throw DataError("centroid of an empty cluster");
  const std::size_t t = dataset[members[0]].epoch_minutes();
  if (interval_minutes == 0 || t % interval_minutes != 0) {
    throw DataError("interval of " + std::to_string(interval_minutes) +
                    " minutes does not divide sequence length T=" +
                    std::to_string(t));
  }
  Centroid c;
  c.interval_minutes = interval_minutes;
  c.rows = t / interval_minutes;
  std::vector<std::uint32_t> counts(c.rows * kNumActivities, 0);
  for (std::size_t idx : members) {
    const ActivityLabel* labels = dataset[idx].labels.data();
    for (std::size_t row = 0; row < c.rows; ++row) {
      std::uint32_t* row_counts = counts.data() + row * kNumActivities;
      for (std::size_t j = 0; j < interval_minutes; ++j) {
        ++row_counts[static_cast<std::size_t>(*labels++)];
      }
    }
  }
  const double inv =
      1.0 / (static_cast<double>(members.size()) *
             static_cast<double>(interval_minutes));
  c.values.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    c.values[i] = static_cast<double>(counts[i]) * inv;
  }
  return c;
}

// Every row a categorical distribution: entries in [0,1], sums within
// tolerance of 1.
inline bool rows_stochastic(const AggregateMatrix& m,
                            double tol = kRowSumTolerance) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    double sum = 0.0;
    for (std::size_t a = 0; a < kNumActivities; ++a) {
      const double v = m.at(r, a);
      if (v < -tol || v > 1.0 + tol) return false;
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol) return false;
  }
  return true;
}

}  // namespace seqanon
