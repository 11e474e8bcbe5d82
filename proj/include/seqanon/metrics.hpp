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
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "seqanon/activity.hpp"
#include "seqanon/error.hpp"

namespace seqanon {

inline constexpr std::size_t kMinutesPerDay = 1440;

// Total minutes of each activity per (subject, day). Rows sum to 1440.
struct DailyDurations {
  std::size_t subjects = 0;
  std::size_t days = 0;
  // subject-major, day-minor, activity-innermost
  std::vector<double> minutes;

  double at(std::size_t subject, std::size_t day,
            std::size_t activity) const {
    return minutes[(subject * days + day) * kNumActivities + activity];
  }
};

inline DailyDurations daily_durations(
    const std::vector<ActivitySequence>& dataset) {
  const std::size_t t = dataset_epoch(dataset);
  if (t % kMinutesPerDay != 0) {
    throw DataError("sequence length " + std::to_string(t) +
                    " is not a whole number of days");
  }
  DailyDurations d;
  d.subjects = dataset.size();
  d.days = t / kMinutesPerDay;
  d.minutes.assign(d.subjects * d.days * kNumActivities, 0.0);
  for (std::size_t s = 0; s < dataset.size(); ++s) {
    const ActivityLabel* labels = dataset[s].labels.data();
    for (std::size_t day = 0; day < d.days; ++day) {
      double* row = d.minutes.data() + (s * d.days + day) * kNumActivities;
      for (std::size_t j = 0; j < kMinutesPerDay; ++j) {
        row[static_cast<std::size_t>(*labels++)] += 1.0;
      }
    }
  }
  return d;
}

// d(x, y) = |x - y| / max(x, y), with d(0, 0) defined as 0.
inline double relative_difference(double x, double y) {
  if (x < 0.0 || y < 0.0) {
    throw DataError("relative difference is defined for non-negative values");
  }
  if (x == y) return 0.0;
  return std::abs(x - y) / std::max(x, y);
}

// Maps each original sequence index to the released sequence that stands
// in for it. Built from the per-cluster ordinal pairing in the manifest.
struct Pairing {
  std::vector<std::size_t> released_for_original;
};

struct UtilityDifference {
  std::array<double, kNumActivities> mean{};
  // Per-activity samples over all (subject, day) pairs; the inputs to the
  // cross-method t-test and effect size.
  std::array<std::vector<double>, kNumActivities> samples;
};

// Per-activity mean relative difference between paired daily durations.
inline UtilityDifference utility_relative_difference(
    const std::vector<ActivitySequence>& original,
    const std::vector<ActivitySequence>& released, const Pairing& pairing) {
  if (original.size() != released.size()) {
    throw DataError("original and released datasets differ in cardinality");
  }
  if (original.empty()) throw DataError("datasets are empty");
  if (dataset_epoch(original) != dataset_epoch(released)) {
    throw DataError("original and released datasets differ in length");
  }
  if (pairing.released_for_original.size() != original.size()) {
    throw DataError("pairing does not cover the dataset");
  }
  std::vector<bool> hit(released.size(), false);
  for (std::size_t r : pairing.released_for_original) {
    if (r >= released.size() || hit[r]) {
      throw DataError("pairing is not a bijection");
    }
    hit[r] = true;
  }

  const DailyDurations orig = daily_durations(original);
  const DailyDurations rel = daily_durations(released);

  UtilityDifference result;
  for (std::size_t a = 0; a < kNumActivities; ++a) {
    result.samples[a].reserve(orig.subjects * orig.days);
  }
  for (std::size_t s = 0; s < orig.subjects; ++s) {
    const std::size_t rs = pairing.released_for_original[s];
    for (std::size_t day = 0; day < orig.days; ++day) {
      for (std::size_t a = 0; a < kNumActivities; ++a) {
        const double d =
            relative_difference(orig.at(s, day, a), rel.at(rs, day, a));
        result.samples[a].push_back(d);
        result.mean[a] += d;
      }
    }
  }
  const double inv =
      1.0 / static_cast<double>(orig.subjects * orig.days);
  for (std::size_t a = 0; a < kNumActivities; ++a) {
    result.mean[a] *= inv;
  }
  return result;
}

}  // namespace seqanon
