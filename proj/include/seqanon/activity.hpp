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

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "seqanon/error.hpp"

namespace seqanon {

// The four minute-level activity states. Missing is a first-class state,
// not a null: gaps in a trace carry re-identification signal of their own.
enum class ActivityLabel : std::uint8_t {
  kStationary = 0,
  kWalking = 1,
  kRunning = 2,
  kMissing = 3,
};

inline constexpr std::size_t kNumActivities = 4;

inline constexpr char kLabelChars[kNumActivities] = {'S', 'W', 'R', 'M'};

inline char label_char(ActivityLabel label) {
  return kLabelChars[static_cast<std::size_t>(label)];
}

inline ActivityLabel parse_label(char c) {
  switch (c) {
    case 'S': return ActivityLabel::kStationary;
    case 'W': return ActivityLabel::kWalking;
    case 'R': return ActivityLabel::kRunning;
    case 'M': return ActivityLabel::kMissing;
    default:
      throw DataError(std::string("unknown activity label '") + c +
                      "': expected one of S, W, R, M");
  }
}

// One subject's minute-level trace. All sequences in a dataset share the
// same epoch length.
struct ActivitySequence {
  std::string subject_id;
  std::vector<ActivityLabel> labels;

  std::size_t epoch_minutes() const { return labels.size(); }
};

// Epoch length shared by a dataset; throws if rows disagree.
inline std::size_t dataset_epoch(const std::vector<ActivitySequence>& dataset) {
  if (dataset.empty()) throw DataError("dataset is empty");
  const std::size_t t = dataset.front().epoch_minutes();
  for (const ActivitySequence& seq : dataset) {
    if (seq.epoch_minutes() != t) {
      throw DataError("sequence '" + seq.subject_id + "' has length " +
                      std::to_string(seq.epoch_minutes()) +
                      ", expected " + std::to_string(t));
    }
  }
  return t;
}

}  // namespace seqanon
