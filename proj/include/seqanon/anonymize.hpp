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

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqanon/activity.hpp"
#include "seqanon/dft.hpp"
#include "seqanon/error.hpp"
#include "seqanon/matrix.hpp"
#include "seqanon/rng.hpp"

namespace seqanon {

// Laplace(lambda) draw by inverse CDF: u ~ U(-1/2, 1/2),
// x = -lambda * sign(u) * ln(1 - 2|u|). lambda == 0 always returns 0.
template <class R>
double laplace_sample(double lambda, R& rng) {
  if (lambda < 0.0) throw ConfigError("Laplace scale must be non-negative");
  const double u = rng.u01() - 0.5;
  const double sign = u < 0.0 ? -1.0 : 1.0;
  return -lambda * sign * std::log(1.0 - 2.0 * std::abs(u));
}

// Differential-privacy knobs for the Fourier perturbation step.
struct DPParams {
  double epsilon = 1.0;        // privacy budget
  std::size_t coefficients = 14;  // retained low-frequency DFT coefficients
  std::size_t interval = 1;       // interval size a, in minutes
  // Maximal difference between two sequences, in intervals; defaults to the
  // full epoch when unset.
  std::optional<std::size_t> max_diff_intervals;

  void validate() const {
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (coefficients == 0) {
      throw ConfigError("coefficient count must be positive");
    }
    if (interval == 0) throw ConfigError("interval size must be positive");
  }
};

// Noise scale lambda = sqrt(l) * Delta2 / epsilon with the per-cluster L2
// sensitivity Delta2 = sqrt(m) * a / s. Recomputed per cluster; never
// cached across clusters.
inline double fpa_noise_scale(const DPParams& params,
                              std::size_t epoch_minutes,
                              std::size_t cluster_size) {
  params.validate();
  if (cluster_size == 0) throw DataError("cluster size must be positive");
  const std::size_t m = params.max_diff_intervals.value_or(epoch_minutes);
  const double sensitivity = std::sqrt(static_cast<double>(m)) *
                             static_cast<double>(params.interval) /
                             static_cast<double>(cluster_size);
  return std::sqrt(static_cast<double>(params.coefficients)) * sensitivity /
         params.epsilon;
}

// Low-pass reconstruction: keep the first l DFT coefficients, zero-pad,
// invert. The lambda == 0 limit of the FPA step.
inline std::vector<double> lowpass_reconstruct(const std::vector<double>& x,
                                               std::size_t l) {
  std::vector<std::complex<double>> coeffs = dft_real(x);
  for (std::size_t i = l; i < coeffs.size(); ++i) coeffs[i] = 0.0;
  const std::vector<std::complex<double>> back = idft(coeffs);
  std::vector<double> out(back.size());
  for (std::size_t i = 0; i < back.size(); ++i) out[i] = back[i].real();
  return out;
}

// One channel of the Fourier perturbation: DFT, keep the first l
// coefficients, add independent Laplace(lambda) noise to the real and
// imaginary part of each (exactly 2l draws), zero-pad, inverse DFT, take
// the real part. No clamping here; callers project afterwards.
template <class R>
std::vector<double> fpa_channel(const std::vector<double>& x, std::size_t l,
                                double lambda, R& rng) {
  if (x.size() < l) {
    throw ConfigError("sequence of length " + std::to_string(x.size()) +
                      " has fewer than l=" + std::to_string(l) +
                      " DFT coefficients");
  }
  std::vector<std::complex<double>> coeffs = dft_real(x);
  for (std::size_t i = 0; i < l; ++i) {
    const double re = laplace_sample(lambda, rng);
    const double im = laplace_sample(lambda, rng);
    coeffs[i] += std::complex<double>(re, im);
  }
  for (std::size_t i = l; i < coeffs.size(); ++i) coeffs[i] = 0.0;
  const std::vector<std::complex<double>> back = idft(coeffs);
  std::vector<double> out(back.size());
  for (std::size_t i = 0; i < back.size(); ++i) out[i] = back[i].real();
  return out;
}

struct FpaProvenance {
  std::size_t coefficients = 0;
  double epsilon = 0.0;
  double lambda = 0.0;
};

// Per-minute activity distribution released for one cluster, either the
// exact centroid (k-anonymity path) or its FPA-noised reconstruction.
struct PerturbedCentroid {
  Centroid values;
  std::optional<FpaProvenance> fpa;  // empty means exact

  bool exact() const { return !fpa.has_value(); }
};

// Clamp to [0,1] and renormalize each row to a categorical distribution;
// a row that clamps to all-zero falls back to uniform.
inline void project_rows(Centroid& c) {
  for (std::size_t r = 0; r < c.rows; ++r) {
    double sum = 0.0;
    for (std::size_t a = 0; a < kNumActivities; ++a) {
      double v = c.at(r, a);
      v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
      c.at(r, a) = v;
      sum += v;
    }
    if (sum <= 0.0) {
      for (std::size_t a = 0; a < kNumActivities; ++a) {
        c.at(r, a) = 1.0 / static_cast<double>(kNumActivities);
      }
    } else {
      for (std::size_t a = 0; a < kNumActivities; ++a) {
        c.at(r, a) /= sum;
      }
    }
  }
}

// Fourier perturbation of a cluster centroid, one channel at a time in
// activity order, followed by the row projection.
template <class R>
PerturbedCentroid fpa_perturb(const Centroid& centroid,
                              const DPParams& params,
                              std::size_t cluster_size, R& rng) {
  const std::size_t t = centroid.rows * centroid.interval_minutes;
  const double lambda = fpa_noise_scale(params, t, cluster_size);

  PerturbedCentroid out;
  out.values = centroid;
  out.fpa = FpaProvenance{params.coefficients, params.epsilon, lambda};

  std::vector<double> channel(centroid.rows);
  for (std::size_t a = 0; a < kNumActivities; ++a) {
    for (std::size_t r = 0; r < centroid.rows; ++r) {
      channel[r] = centroid.at(r, a);
    }
    const std::vector<double> noised =
        fpa_channel(channel, params.coefficients, lambda, rng);
    for (std::size_t r = 0; r < centroid.rows; ++r) {
      out.values.at(r, a) = noised[r];
    }
  }
  project_rows(out.values);
  return out;
}

template <class R>
ActivityLabel sample_label(const Centroid& c, std::size_t row, R& rng) {
  const double u = rng.u01();
  double cum = 0.0;
  for (std::size_t a = 0; a + 1 < kNumActivities; ++a) {
    cum += c.at(row, a);
    if (u <= cum) return static_cast<ActivityLabel>(a);
  }
  return static_cast<ActivityLabel>(kNumActivities - 1);
}

// Draw `count` sequences from a per-minute centroid, each minute sampled
// independently from that minute's distribution. Subject ids are fresh:
// anon-<cluster>-<ordinal>.
template <class R>
std::vector<ActivitySequence> sample_sequences(const Centroid& centroid,
                                               std::size_t count,
                                               std::size_t cluster_id,
                                               R& rng) {
  std::vector<ActivitySequence> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    ActivitySequence seq;
    seq.subject_id =
        "anon-" + std::to_string(cluster_id) + "-" + std::to_string(i);
    seq.labels.resize(centroid.rows);
    for (std::size_t m = 0; m < centroid.rows; ++m) {
      seq.labels[m] = sample_label(centroid, m, rng);
    }
    out.push_back(std::move(seq));
  }
  return out;
}

// K-anonymity release for one cluster: exact minute-level centroid, then
// as many sampled sequences as the cluster has members.
template <class R>
std::vector<ActivitySequence> mcka_release(
    const std::vector<ActivitySequence>& dataset,
    std::span<const std::size_t> members, std::size_t cluster_id, R& rng) {
  if (members.empty()) throw DataError("cannot release an empty cluster");
  const Centroid centroid = centroid_of_sequences(dataset, members, 1);
  return sample_sequences(centroid, members.size(), cluster_id, rng);
}

struct DpRelease {
  std::vector<ActivitySequence> sequences;
  double lambda = 0.0;
};

// Differential-privacy release for one cluster: FPA-perturb the exact
// centroid, then sample from the noisy centroid like the k-anonymity path.
template <class R>
DpRelease mcdp_release(const std::vector<ActivitySequence>& dataset,
                       std::span<const std::size_t> members,
                       const DPParams& params, std::size_t cluster_id,
                       R& rng) {
  if (members.empty()) throw DataError("cannot release an empty cluster");
  const Centroid centroid = centroid_of_sequences(dataset, members, 1);
  const PerturbedCentroid noisy =
      fpa_perturb(centroid, params, members.size(), rng);
  DpRelease out;
  out.lambda = noisy.fpa->lambda;
  out.sequences =
      sample_sequences(noisy.values, members.size(), cluster_id, rng);
  return out;
}

}  // namespace seqanon
