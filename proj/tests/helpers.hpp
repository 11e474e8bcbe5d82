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

#include <string>
#include <vector>

#include "seqanon/activity.hpp"
#include "seqanon/matrix.hpp"
#include "seqanon/rng.hpp"

namespace seqtest {

// "SSWWR" -> sequence of parsed labels.
inline seqanon::ActivitySequence seq_of(const std::string& id,
                                        const std::string& labels) {
  seqanon::ActivitySequence seq;
  seq.subject_id = id;
  seq.labels.reserve(labels.size());
  for (char c : labels) seq.labels.push_back(seqanon::parse_label(c));
  return seq;
}

inline seqanon::ActivitySequence repeat_seq(const std::string& id,
                                            const std::string& pattern,
                                            std::size_t times) {
  std::string labels;
  labels.reserve(pattern.size() * times);
  for (std::size_t i = 0; i < times; ++i) labels += pattern;
  return seq_of(id, labels);
}

inline seqanon::ActivitySequence random_seq(const std::string& id,
                                            std::size_t minutes,
                                            seqanon::Rng& rng) {
  seqanon::ActivitySequence seq;
  seq.subject_id = id;
  seq.labels.reserve(minutes);
  for (std::size_t i = 0; i < minutes; ++i) {
    seq.labels.push_back(
        static_cast<seqanon::ActivityLabel>(rng.below(4)));
  }
  return seq;
}

inline std::vector<seqanon::ActivitySequence> random_dataset(
    std::size_t n, std::size_t minutes, seqanon::Rng& rng) {
  std::vector<seqanon::ActivitySequence> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(random_seq("u" + std::to_string(i), minutes, rng));
  }
  return out;
}

// Random row-stochastic aggregate with the given shape.
inline seqanon::AggregateMatrix random_matrix(std::size_t rows,
                                              seqanon::Rng& rng) {
  seqanon::AggregateMatrix m;
  m.interval_minutes = 1;
  m.rows = rows;
  m.values.resize(rows * seqanon::kNumActivities);
  for (std::size_t r = 0; r < rows; ++r) {
    double sum = 0.0;
    for (std::size_t a = 0; a < seqanon::kNumActivities; ++a) {
      const double v = rng.u01();
      m.at(r, a) = v;
      sum += v;
    }
    for (std::size_t a = 0; a < seqanon::kNumActivities; ++a) {
      m.at(r, a) /= sum;
    }
  }
  return m;
}

// Encodes a scalar as a single-row aggregate (x, 0, 0, 0); useful for
// 1-D-like clustering traces.
inline seqanon::AggregateMatrix scalar_point(double x) {
  seqanon::AggregateMatrix m;
  m.interval_minutes = 1;
  m.rows = 1;
  m.values = {x, 0.0, 0.0, 0.0};
  return m;
}

}  // namespace seqtest
