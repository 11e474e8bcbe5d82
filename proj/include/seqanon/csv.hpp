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

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "seqanon/activity.hpp"
#include "seqanon/clustering.hpp"
#include "seqanon/datagen.hpp"
#include "seqanon/error.hpp"

namespace seqanon {

// Dataset CSV: header `subject_id,m0,...,m{T-1}`, one row per subject,
// cells in {S, W, R, M}, all rows equal length.

inline std::vector<ActivitySequence> read_dataset_csv(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset file: " + path);
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("dataset file is empty: " + path);
  }
  if (line.rfind("subject_id,", 0) != 0) {
    throw DataError("dataset file " + path +
                    " must start with a subject_id header");
  }

  std::vector<ActivitySequence> dataset;
  std::size_t expected = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t first_comma = line.find(',');
    if (first_comma == std::string::npos) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": row has no activity cells");
    }
    ActivitySequence seq;
    seq.subject_id = line.substr(0, first_comma);
    seq.labels.reserve(expected != 0 ? expected : 64);
    // Cells are single characters; parse in place instead of tokenizing.
    for (std::size_t i = first_comma; i < line.size(); i += 2) {
      if (line[i] != ',' || i + 1 >= line.size()) {
        throw DataError(path + ":" + std::to_string(line_no) +
                        ": malformed activity cell");
      }
      seq.labels.push_back(parse_label(line[i + 1]));
    }
    if (expected == 0) {
      expected = seq.labels.size();
    } else if (seq.labels.size() != expected) {
      throw DataError(path + ":" + std::to_string(line_no) + ": row has " +
                      std::to_string(seq.labels.size()) +
                      " cells, expected " + std::to_string(expected));
    }
    dataset.push_back(std::move(seq));
  }
  if (dataset.empty()) {
    throw DataError("dataset file has no data rows: " + path);
  }
  return dataset;
}

inline void write_dataset_csv(const std::string& path,
                              const std::vector<ActivitySequence>& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write dataset file: " + path);
  const std::size_t t = dataset_epoch(dataset);
  out << "subject_id";
  for (std::size_t i = 0; i < t; ++i) out << ",m" << i;
  out << '\n';
  std::string row;
  row.reserve(2 * t + 64);
  for (const ActivitySequence& seq : dataset) {
    row.clear();
    row += seq.subject_id;
    for (ActivityLabel label : seq.labels) {
      row += ',';
      row += label_char(label);
    }
    row += '\n';
    out << row;
  }
  if (!out) throw DataError("failed while writing dataset file: " + path);
}

// Outcomes CSV: `subject_id,cgpa,flourishing`.

inline void write_outcomes_csv(const std::string& path,
                               const std::vector<OutcomeRecord>& outcomes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write outcomes file: " + path);
  out << "subject_id,cgpa,flourishing\n";
  char buf[128];
  for (const OutcomeRecord& rec : outcomes) {
    std::snprintf(buf, sizeof(buf), ",%.9g,%.9g\n", rec.cgpa,
                  rec.flourishing);
    out << rec.subject_id << buf;
  }
}

inline std::vector<OutcomeRecord> read_outcomes_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open outcomes file: " + path);
  std::string line;
  if (!std::getline(in, line) ||
      line.rfind("subject_id,cgpa,flourishing", 0) != 0) {
    throw DataError("outcomes file " + path + " has an unexpected header");
  }
  std::vector<OutcomeRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    OutcomeRecord rec;
    std::string cell;
    if (!std::getline(row, rec.subject_id, ',') ||
        !std::getline(row, cell, ',')) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": malformed outcomes row");
    }
    try {
      rec.cgpa = std::stod(cell);
      if (!std::getline(row, cell, ',')) throw std::invalid_argument("");
      rec.flourishing = std::stod(cell);
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": malformed outcomes row");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

// Partition dump for debugging and tests: `group_id,subject_id`.
inline void write_partition_csv(const std::string& path,
                                const ClusterPartition& partition,
                                const std::vector<ActivitySequence>& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write partition file: " + path);
  out << "group_id,subject_id\n";
  for (std::size_t g = 0; g < partition.groups.size(); ++g) {
    for (std::size_t m : partition.groups[g].members) {
      out << g << ',' << dataset[m].subject_id << '\n';
    }
  }
}

// Transition matrices: `subject_id,hour,from,to,prob`.

inline void write_matrices_csv(const std::string& path,
                               const MatrixSet& set) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write matrices file: " + path);
  out << "subject_id,hour,from,to,prob\n";
  char buf[64];
  for (const TransitionMatrix& tm : set.matrices) {
    for (std::size_t from = 0; from < kNumActivities; ++from) {
      for (std::size_t to = 0; to < kNumActivities; ++to) {
        std::snprintf(buf, sizeof(buf), ",%zu,%c,%c,%.17g\n", tm.hour,
                      kLabelChars[from], kLabelChars[to], tm.rows[from][to]);
        out << tm.owner << buf;
      }
    }
  }
}

inline MatrixSet read_matrices_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open matrices file: " + path);
  std::string line;
  if (!std::getline(in, line) ||
      line.rfind("subject_id,hour,from,to,prob", 0) != 0) {
    throw DataError("matrices file " + path + " has an unexpected header");
  }
  MatrixSet set;
  std::size_t line_no = 1;
  TransitionMatrix* current = nullptr;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string subject, hour_cell, from_cell, to_cell, prob_cell;
    if (!std::getline(row, subject, ',') ||
        !std::getline(row, hour_cell, ',') ||
        !std::getline(row, from_cell, ',') ||
        !std::getline(row, to_cell, ',') ||
        !std::getline(row, prob_cell, ',') || from_cell.size() != 1 ||
        to_cell.size() != 1) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": malformed matrices row");
    }
    std::size_t hour = 0;
    double prob = 0.0;
    try {
      hour = static_cast<std::size_t>(std::stoull(hour_cell));
      prob = std::stod(prob_cell);
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": malformed matrices row");
    }
    if (current == nullptr || current->owner != subject ||
        current->hour != hour) {
      TransitionMatrix tm;
      tm.owner = subject;
      tm.hour = hour;
      set.matrices.push_back(std::move(tm));
      current = &set.matrices.back();
      if (set.subject_ids.empty() || set.subject_ids.back() != subject) {
        set.subject_ids.push_back(subject);
      }
      set.hours = std::max(set.hours, hour + 1);
    }
    current->rows[static_cast<std::size_t>(parse_label(from_cell[0]))]
                 [static_cast<std::size_t>(parse_label(to_cell[0]))] = prob;
  }
  set.validate();
  return set;
}

}  // namespace seqanon
