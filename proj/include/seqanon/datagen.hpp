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
#include <cstdint>
#include <string>
#include <vector>

#include "seqanon/activity.hpp"
#include "seqanon/error.hpp"
#include "seqanon/rng.hpp"

namespace seqanon {

using Distribution = std::array<double, kNumActivities>;

// Row-stochastic first-order transition matrix for one subject and one
// hour slot.
struct TransitionMatrix {
  std::string owner;
  std::size_t hour = 0;
  std::array<Distribution, kNumActivities> rows{};

  void validate() const {
    for (const Distribution& row : rows) {
      double sum = 0.0;
      for (double p : row) {
        if (p < 0.0) throw DataError("negative transition probability");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9) {
        throw DataError("transition matrix row does not sum to 1");
      }
    }
  }
};

// Matrices for every (subject, hour) slot plus the empirical distribution
// of first-minute labels across the corpus the matrices came from.
struct MatrixSet {
  std::vector<std::string> subject_ids;
  std::size_t hours = 0;
  std::vector<TransitionMatrix> matrices;  // subject-major, hour-minor
  Distribution start_dist{0.25, 0.25, 0.25, 0.25};

  const TransitionMatrix& at(std::size_t subject, std::size_t hour) const {
    return matrices[subject * hours + hour];
  }

  std::size_t n_subjects() const { return subject_ids.size(); }

  void validate() const {
    if (matrices.size() != subject_ids.size() * hours) {
      throw DataError("matrix set is missing (subject, hour) slots: have " +
                      std::to_string(matrices.size()) + ", need " +
                      std::to_string(subject_ids.size() * hours));
    }
    for (const TransitionMatrix& m : matrices) m.validate();
  }
};

struct GenConfig {
  std::size_t n_subjects = 0;
  std::size_t hours = 336;  // two weeks
  double mix_prob = 0.01;
  std::uint64_t seed = 1;

  void validate() const {
    if (n_subjects == 0) throw ConfigError("subject count must be positive");
    if (hours == 0) throw ConfigError("hour count must be positive");
    if (!(mix_prob >= 0.0 && mix_prob <= 1.0)) {
      throw ConfigError("mix probability must lie in [0, 1]");
    }
  }
};

// Per-subject, per-hour empirical first-order transition frequencies over
// that hour's 60 labels (59 transitions), add-1 smoothed and row
// normalized. Also records the corpus-wide first-minute label frequencies.
inline MatrixSet estimate_matrices(
    const std::vector<ActivitySequence>& corpus) {
  if (corpus.empty()) throw DataError("cannot estimate from an empty corpus");
  const std::size_t t = dataset_epoch(corpus);
  if (t % 60 != 0) {
    throw DataError("corpus length " + std::to_string(t) +
                    " is not a whole number of hours");
  }
  MatrixSet set;
  set.hours = t / 60;
  set.subject_ids.reserve(corpus.size());
  set.matrices.reserve(corpus.size() * set.hours);

  std::array<double, kNumActivities> starts{};
  for (const ActivitySequence& seq : corpus) {
    set.subject_ids.push_back(seq.subject_id);
    starts[static_cast<std::size_t>(seq.labels[0])] += 1.0;
    for (std::size_t h = 0; h < set.hours; ++h) {
      std::array<std::array<double, kNumActivities>, kNumActivities> counts{};
      for (std::size_t m = 0; m + 1 < 60; ++m) {
        const std::size_t from =
            static_cast<std::size_t>(seq.labels[h * 60 + m]);
        const std::size_t to =
            static_cast<std::size_t>(seq.labels[h * 60 + m + 1]);
        counts[from][to] += 1.0;
      }
      TransitionMatrix tm;
      tm.owner = seq.subject_id;
      tm.hour = h;
      for (std::size_t from = 0; from < kNumActivities; ++from) {
        double row_total = 0.0;
        for (std::size_t to = 0; to < kNumActivities; ++to) {
          counts[from][to] += 1.0;  // add-1 smoothing
          row_total += counts[from][to];
        }
        for (std::size_t to = 0; to < kNumActivities; ++to) {
          tm.rows[from][to] = counts[from][to] / row_total;
        }
      }
      set.matrices.push_back(std::move(tm));
    }
  }
  const double inv = 1.0 / static_cast<double>(corpus.size());
  for (std::size_t a = 0; a < kNumActivities; ++a) {
    set.start_dist[a] = starts[a] * inv;
  }
  return set;
}

namespace detail {

template <class R>
std::size_t draw_from(const Distribution& dist, R& rng) {
  const double u = rng.u01();
  double cum = 0.0;
  for (std::size_t i = 0; i + 1 < kNumActivities; ++i) {
    cum += dist[i];
    if (u <= cum) return i;
  }
  return kNumActivities - 1;
}

inline std::string generated_subject_id(std::size_t index) {
  std::string digits = std::to_string(index + 1);
  while (digits.size() < 5) digits.insert(digits.begin(), '0');
  return "s" + digits;
}

}  // namespace detail

// Markov-chain simulation. Per subject and hour, the subject's own matrix
// drives the chain, except that with probability mix_prob another
// subject's matrix for the same hour slot is swapped in. The chain state
// carries across hour boundaries; the very first minute draws from the
// matrix set's start distribution. Each subject consumes its own split of
// the seed, so generation order does not matter.
inline std::vector<ActivitySequence> simulate(const GenConfig& cfg,
                                              const MatrixSet& matrices) {
  cfg.validate();
  matrices.validate();
  if (matrices.n_subjects() < cfg.n_subjects) {
    throw DataError("matrix set covers " +
                    std::to_string(matrices.n_subjects()) +
                    " subjects, need " + std::to_string(cfg.n_subjects));
  }
  if (matrices.hours < cfg.hours) {
    throw DataError("matrix set covers " + std::to_string(matrices.hours) +
                    " hours, need " + std::to_string(cfg.hours));
  }

  const Rng root(cfg.seed);
  std::vector<ActivitySequence> out(cfg.n_subjects);
  for (std::size_t subj = 0; subj < cfg.n_subjects; ++subj) {
    Rng rng = root.split(subj);
    ActivitySequence seq;
    seq.subject_id = detail::generated_subject_id(subj);
    seq.labels.resize(cfg.hours * 60);

    std::size_t state = 0;
    for (std::size_t h = 0; h < cfg.hours; ++h) {
      std::size_t source = subj;
      if (rng.u01() < cfg.mix_prob && cfg.n_subjects > 1) {
        // Uniform over the other subjects.
        std::size_t other = rng.below(cfg.n_subjects - 1);
        if (other >= subj) ++other;
        source = other;
      }
      const TransitionMatrix& tm = matrices.at(source, h);
      for (std::size_t m = 0; m < 60; ++m) {
        if (h == 0 && m == 0) {
          state = detail::draw_from(matrices.start_dist, rng);
        } else {
          state = detail::draw_from(tm.rows[state], rng);
        }
        seq.labels[h * 60 + m] = static_cast<ActivityLabel>(state);
      }
    }
    out[subj] = std::move(seq);
  }
  return out;
}

// KL divergence sum p*ln(p/q) in nats, after add-epsilon smoothing of both
// distributions.
inline double kl_divergence(const Distribution& p, const Distribution& q,
                            double smoothing = 1e-9) {
  double psum = 0.0;
  double qsum = 0.0;
  for (std::size_t i = 0; i < kNumActivities; ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) {
      throw DataError("distributions must be non-negative");
    }
    psum += p[i] + smoothing;
    qsum += q[i] + smoothing;
  }
  if (psum <= 0.0 || qsum <= 0.0) {
    throw DataError("distributions must have positive mass");
  }
  double kl = 0.0;
  for (std::size_t i = 0; i < kNumActivities; ++i) {
    const double pi = (p[i] + smoothing) / psum;
    const double qi = (q[i] + smoothing) / qsum;
    if (pi > 0.0) kl += pi * std::log(pi / qi);
  }
  return kl;
}

// Label frequencies pooled across subjects and time.
inline Distribution marginal_distribution(
    const std::vector<ActivitySequence>& dataset) {
  Distribution d{};
  double total = 0.0;
  for (const ActivitySequence& seq : dataset) {
    for (ActivityLabel label : seq.labels) {
      d[static_cast<std::size_t>(label)] += 1.0;
      total += 1.0;
    }
  }
  if (total == 0.0) throw DataError("dataset has no labels");
  for (double& v : d) v /= total;
  return d;
}

// Built-in matrix family used when no seed corpus is supplied. Each
// subject gets a base activity mix and a persistence level; hour-of-day
// modifiers push nights toward stationary/missing and daytime toward
// walking and running. Rows blend persistence with the target mix, so the
// chain's stationary distribution tracks the mix.
inline MatrixSet builtin_matrix_family(std::size_t n_subjects,
                                       std::size_t hours,
                                       std::uint64_t seed) {
  if (n_subjects == 0) throw ConfigError("subject count must be positive");
  if (hours == 0) throw ConfigError("hour count must be positive");
  const Rng root(seed);

  MatrixSet set;
  set.hours = hours;
  set.subject_ids.resize(n_subjects);
  set.matrices.reserve(n_subjects * hours);

  Distribution start_acc{};
  for (std::size_t subj = 0; subj < n_subjects; ++subj) {
    Rng rng = root.split(0x10000 + subj);
    set.subject_ids[subj] = detail::generated_subject_id(subj);

    const double stationary_base = 0.45 + 0.40 * rng.u01();
    const double missing_base = 0.02 + 0.13 * rng.u01();
    const double active_base = 1.0 - stationary_base - missing_base;
    const double walk_share = 0.5 + 0.4 * rng.u01();
    const double persistence = 0.80 + 0.15 * rng.u01();

    for (std::size_t h = 0; h < hours; ++h) {
      const std::size_t hour_of_day = h % 24;
      Distribution mix;
      mix[0] = stationary_base;
      mix[1] = active_base * walk_share;
      mix[2] = active_base * (1.0 - walk_share);
      mix[3] = missing_base;
      if (hour_of_day < 7 || hour_of_day >= 23) {
        // Night: almost no movement.
        mix[0] += 0.8 * (mix[1] + mix[2]);
        mix[3] += 0.2 * (mix[1] + mix[2]);
        mix[1] *= 0.0;
        mix[2] *= 0.0;
      } else if (hour_of_day >= 17 && hour_of_day < 20) {
        // Evening: the most active stretch of the day.
        const double shift = 0.3 * mix[0];
        mix[0] -= shift;
        mix[1] += shift * walk_share;
        mix[2] += shift * (1.0 - walk_share);
      }
      double total = mix[0] + mix[1] + mix[2] + mix[3];
      for (double& v : mix) v /= total;

      TransitionMatrix tm;
      tm.owner = set.subject_ids[subj];
      tm.hour = h;
      for (std::size_t from = 0; from < kNumActivities; ++from) {
        for (std::size_t to = 0; to < kNumActivities; ++to) {
          tm.rows[from][to] = (1.0 - persistence) * mix[to] +
                              (from == to ? persistence : 0.0);
        }
      }
      set.matrices.push_back(std::move(tm));
      if (h == 0) {
        for (std::size_t a = 0; a < kNumActivities; ++a) {
          start_acc[a] += mix[a];
        }
      }
    }
  }
  double total = start_acc[0] + start_acc[1] + start_acc[2] + start_acc[3];
  for (std::size_t a = 0; a < kNumActivities; ++a) {
    set.start_dist[a] = start_acc[a] / total;
  }
  return set;
}

struct OutcomeRecord {
  std::string subject_id;
  double cgpa = 0.0;
  double flourishing = 0.0;
};

// Linear-plus-noise link between each subject's active-time fraction and
// the two outcome variables. The noise component is orthogonalized against
// the activity signal, so the sample correlation on the input dataset hits
// the target exactly.
struct OutcomeLinkConfig {
  double flourishing_r = 0.146;
  double flourishing_mean = 45.0;
  double flourishing_sd = 6.0;
  double cgpa_r = -0.289;
  double cgpa_mean = 3.2;
  double cgpa_sd = 0.35;

  void validate() const {
    if (std::abs(flourishing_r) >= 1.0 || std::abs(cgpa_r) >= 1.0) {
      throw ConfigError("target correlations must lie in (-1, 1)");
    }
    if (!(flourishing_sd > 0.0) || !(cgpa_sd > 0.0)) {
      throw ConfigError("outcome scales must be positive");
    }
  }
};

// Fraction of minutes spent walking or running.
inline double active_fraction(const ActivitySequence& seq) {
  std::size_t active = 0;
  for (ActivityLabel label : seq.labels) {
    if (label == ActivityLabel::kWalking || label == ActivityLabel::kRunning) {
      ++active;
    }
  }
  return static_cast<double>(active) /
         static_cast<double>(seq.epoch_minutes());
}

namespace detail {

inline void standardize(std::vector<double>& v) {
  const std::size_t n = v.size();
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double& x : v) {
    x -= mean;
    ss += x * x;
  }
  if (ss <= 0.0) {
    throw DataError("cannot standardize a constant series");
  }
  const double scale = 1.0 / std::sqrt(ss / static_cast<double>(n));
  for (double& x : v) x *= scale;
}

}  // namespace detail

inline std::vector<OutcomeRecord> synthesize_outcomes(
    const std::vector<ActivitySequence>& dataset,
    const OutcomeLinkConfig& link, std::uint64_t seed) {
  link.validate();
  const std::size_t n = dataset.size();
  if (n < 3) throw DataError("need at least 3 subjects for outcomes");

  std::vector<double> activity(n);
  for (std::size_t i = 0; i < n; ++i) {
    activity[i] = active_fraction(dataset[i]);
  }
  detail::standardize(activity);

  const Rng root(seed);
  std::vector<OutcomeRecord> out(n);
  const double targets[2] = {link.flourishing_r, link.cgpa_r};
  std::vector<std::vector<double>> noise(2, std::vector<double>(n));
  for (std::size_t which = 0; which < 2; ++which) {
    Rng rng = root.split(0x20000 + which);
    for (std::size_t i = 0; i < n; ++i) {
      // Box-Muller.
      const double u1 = rng.u01();
      const double u2 = rng.u01();
      noise[which][i] =
          std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
    // Project out the activity component, then standardize; the mix
    // r*z + sqrt(1-r^2)*e then correlates with activity at exactly r.
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += noise[which][i] * activity[i];
    const double scale = dot / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      noise[which][i] -= scale * activity[i];
    }
    detail::standardize(noise[which]);
    const double r = targets[which];
    for (std::size_t i = 0; i < n; ++i) {
      noise[which][i] = r * activity[i] +
                        std::sqrt(1.0 - r * r) * noise[which][i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i].subject_id = dataset[i].subject_id;
    out[i].flourishing =
        link.flourishing_mean + link.flourishing_sd * noise[0][i];
    out[i].cgpa = link.cgpa_mean + link.cgpa_sd * noise[1][i];
  }
  return out;
}

}  // namespace seqanon
