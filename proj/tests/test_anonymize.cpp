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
#include <cmath>
#include <cstddef>
#include <vector>

#include "helpers.hpp"
#include "seqanon/anonymize.hpp"

using namespace seqanon;

namespace {

// Counts uniform draws; the noise budget tests rely on it.
struct CountingRng {
  Rng inner;
  std::size_t draws = 0;

  explicit CountingRng(std::uint64_t seed) : inner(seed) {}
  double u01() {
    ++draws;
    return inner.u01();
  }
};

}  // namespace

TEST_CASE("laplace sampler", "[anonymize]") {
  SECTION("scale zero always returns zero") {
    Rng rng(1);
    for (int i = 0; i < 100; ++i) {
      REQUIRE(laplace_sample(0.0, rng) == 0.0);
    }
  }

  SECTION("negative scale is an error") {
    Rng rng(2);
    REQUIRE_THROWS_AS(laplace_sample(-1.0, rng), ConfigError);
  }

  SECTION("empirical variance at unit scale is 2") {
    Rng rng(3);
    const std::size_t n = 1000000;
    double sum = 0.0, sum_sq = 0.0;
    std::vector<double> draws(n);
    for (std::size_t i = 0; i < n; ++i) {
      draws[i] = laplace_sample(1.0, rng);
      sum += draws[i];
      sum_sq += draws[i] * draws[i];
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    REQUIRE(var == Approx(2.0).margin(0.02));

    std::nth_element(draws.begin(), draws.begin() + n / 2, draws.end());
    REQUIRE(draws[n / 2] == Approx(0.0).margin(0.005));
  }
}

TEST_CASE("noise scale follows the per-cluster sensitivity", "[anonymize]") {
  DPParams params;  // epsilon 1, l = 14, a = 1, m defaults to T
  const double lambda = fpa_noise_scale(params, 20160, 50);
  REQUIRE(lambda ==
          Approx(std::sqrt(14.0) * std::sqrt(20160.0) / 50.0).margin(1e-9));
  REQUIRE(lambda == Approx(10.625).margin(1e-3));

  SECTION("halving the cluster size doubles the scale") {
    REQUIRE(fpa_noise_scale(params, 20160, 25) == Approx(2.0 * lambda));
  }
  SECTION("epsilon scales inversely") {
    params.epsilon = 2.0;
    REQUIRE(fpa_noise_scale(params, 20160, 50) == Approx(lambda / 2.0));
  }
  SECTION("invalid parameters are rejected") {
    params.epsilon = 0.0;
    REQUIRE_THROWS_AS(fpa_noise_scale(params, 20160, 50), ConfigError);
  }
}

TEST_CASE("low-pass reconstruction of a constant series is exact",
          "[anonymize]") {
  const std::vector<double> series(360, 0.7);
  const std::vector<double> back = lowpass_reconstruct(series, 14);
  for (double v : back) REQUIRE(v == Approx(0.7).margin(1e-12));
  // The constant lives entirely in coefficient zero, so keeping just one
  // coefficient is already exact.
  const std::vector<double> one = lowpass_reconstruct(series, 1);
  for (double v : one) REQUIRE(v == Approx(0.7).margin(1e-12));
}

TEST_CASE("fpa channel reduces to low-pass when noise vanishes",
          "[anonymize]") {
  Rng data_rng(11);
  std::vector<double> series(1440);
  for (double& v : series) v = data_rng.u01();

  // Budget so large the Laplace draws are ~1e-9; pre-projection output must
  // sit within 1e-6 of the plain truncated reconstruction.
  DPParams params;
  params.epsilon = 1e9;
  const double lambda = fpa_noise_scale(params, series.size(), 50);
  Rng rng(12);
  const std::vector<double> noisy = fpa_channel(series, 14, lambda, rng);
  const std::vector<double> clean = lowpass_reconstruct(series, 14);
  for (std::size_t i = 0; i < series.size(); ++i) {
    REQUIRE(noisy[i] == Approx(clean[i]).margin(1e-6));
  }
}

TEST_CASE("fpa consumes exactly two draws per retained coefficient",
          "[anonymize]") {
  Rng data_rng(13);
  std::vector<double> series(96);
  for (double& v : series) v = data_rng.u01();

  CountingRng counting(21);
  fpa_channel(series, 14, 1.0, counting);
  REQUIRE(counting.draws == 2 * 14);

  SECTION("a whole centroid costs 2l per channel, no more") {
    const auto seq = seqtest::random_seq("a", 96, data_rng);
    const Centroid centroid = aggregate(seq, 1);
    CountingRng whole(22);
    DPParams params;
    fpa_perturb(centroid, params, 5, whole);
    REQUIRE(whole.draws == 2 * 14 * kNumActivities);
  }
}

TEST_CASE("fpa rejects series shorter than the coefficient count",
          "[anonymize]") {
  std::vector<double> series(10, 0.5);
  Rng rng(99);
  REQUIRE_THROWS_AS(fpa_channel(series, 14, 1.0, rng), ConfigError);
}

TEST_CASE("fpa output rows are categorical distributions for any scale",
          "[anonymize]") {
  Rng data_rng(14);
  const auto dataset = seqtest::random_dataset(4, 240, data_rng);
  const std::vector<std::size_t> members = {0, 1, 2, 3};
  const Centroid centroid = centroid_of_sequences(dataset, members, 1);

  for (double epsilon : {1e9, 1.0, 1e-3}) {
    DPParams params;
    params.epsilon = epsilon;
    Rng rng(15);
    const PerturbedCentroid noisy = fpa_perturb(centroid, params, 4, rng);
    REQUIRE_FALSE(noisy.exact());
    REQUIRE(rows_stochastic(noisy.values));
  }
}

TEST_CASE("perturbation distortion grows as the budget shrinks",
          "[anonymize]") {
  Rng data_rng(16);
  const auto dataset = seqtest::random_dataset(4, 1440, data_rng);
  const std::vector<std::size_t> members = {0, 1, 2, 3};
  const Centroid exact = centroid_of_sequences(dataset, members, 1);

  const auto mean_l1 = [&](double epsilon) {
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      DPParams params;
      params.epsilon = epsilon;
      Rng rng(100 + seed);
      const PerturbedCentroid noisy = fpa_perturb(exact, params, 4, rng);
      for (std::size_t i = 0; i < exact.values.size(); ++i) {
        total += std::abs(noisy.values.values[i] - exact.values[i]);
      }
    }
    return total / (20.0 * exact.rows);
  };

  const double at_10 = mean_l1(10.0);
  const double at_1 = mean_l1(1.0);
  const double at_01 = mean_l1(0.1);
  REQUIRE(at_10 < at_1);
  REQUIRE(at_1 < at_01);
}

TEST_CASE("mcka release", "[anonymize]") {
  SECTION("a cluster of identical sequences is released unchanged") {
    const std::vector<ActivitySequence> dataset(
        5, seqtest::repeat_seq("dup", "SWRMSW", 10));
    const std::vector<std::size_t> members = {0, 1, 2, 3, 4};
    Rng rng(17);
    const auto released = mcka_release(dataset, members, 0, rng);
    REQUIRE(released.size() == 5);
    for (const auto& seq : released) {
      REQUIRE(seq.labels == dataset[0].labels);
    }
  }

  SECTION("released ids are fresh synthetic ids") {
    const std::vector<ActivitySequence> dataset(
        3, seqtest::repeat_seq("dup", "S", 10));
    Rng rng(18);
    const auto released =
        mcka_release(dataset, std::vector<std::size_t>{0, 1, 2}, 7, rng);
    REQUIRE(released[0].subject_id == "anon-7-0");
    REQUIRE(released[2].subject_id == "anon-7-2");
  }

  SECTION("a half-and-half minute is released at empirical frequency 1/2") {
    const std::vector<ActivitySequence> dataset = {
        seqtest::seq_of("a", "S"), seqtest::seq_of("b", "R")};
    const std::vector<std::size_t> members = {0, 1};
    Rng rng(19);
    std::size_t stationary = 0;
    std::size_t total = 0;
    for (int rep = 0; rep < 50000; ++rep) {
      const auto released = mcka_release(dataset, members, 0, rng);
      for (const auto& seq : released) {
        ++total;
        if (seq.labels[0] == ActivityLabel::kStationary) ++stationary;
      }
    }
    REQUIRE(static_cast<double>(stationary) / static_cast<double>(total) ==
            Approx(0.5).margin(0.01));
  }

  SECTION("an empty cluster is an error") {
    const std::vector<ActivitySequence> dataset = {seqtest::seq_of("a", "S")};
    Rng rng(20);
    REQUIRE_THROWS_AS(
        mcka_release(dataset, std::vector<std::size_t>{}, 0, rng), DataError);
  }
}

TEST_CASE("mcdp release", "[anonymize]") {
  Rng data_rng(21);
  const auto dataset = seqtest::random_dataset(6, 120, data_rng);
  const std::vector<std::size_t> members = {0, 1, 2, 3, 4, 5};

  SECTION("releases as many sequences as the cluster holds") {
    DPParams params;
    Rng rng(22);
    const DpRelease rel = mcdp_release(dataset, members, params, 0, rng);
    REQUIRE(rel.sequences.size() == members.size());
    REQUIRE(rel.lambda ==
            Approx(fpa_noise_scale(params, 120, members.size())));
    for (const auto& seq : rel.sequences) {
      REQUIRE(seq.epoch_minutes() == 120);
    }
  }

  SECTION("with negligible noise a constant one-hot centroid matches the "
          "k-anonymity path") {
    const std::vector<ActivitySequence> constant(
        4, seqtest::repeat_seq("dup", "S", 60));
    const std::vector<std::size_t> all = {0, 1, 2, 3};
    DPParams params;
    params.epsilon = 1e12;
    Rng rng_dp(23);
    const DpRelease dp = mcdp_release(constant, all, params, 0, rng_dp);
    Rng rng_ka(23);
    const auto ka = mcka_release(constant, all, 0, rng_ka);
    REQUIRE(dp.sequences.size() == ka.size());
    for (std::size_t i = 0; i < ka.size(); ++i) {
      REQUIRE(dp.sequences[i].labels == ka[i].labels);
      REQUIRE(dp.sequences[i].labels == constant[0].labels);
    }
  }
}

TEST_CASE("releases are deterministic in the seed", "[anonymize]") {
  Rng data_rng(24);
  const auto dataset = seqtest::random_dataset(5, 180, data_rng);
  const std::vector<std::size_t> members = {0, 1, 2, 3, 4};

  Rng a(99), b(99), c(100);
  const auto rel_a = mcka_release(dataset, members, 0, a);
  const auto rel_b = mcka_release(dataset, members, 0, b);
  REQUIRE(rel_a.size() == rel_b.size());
  for (std::size_t i = 0; i < rel_a.size(); ++i) {
    REQUIRE(rel_a[i].labels == rel_b[i].labels);
  }
  const auto rel_c = mcka_release(dataset, members, 0, c);
  bool any_diff = false;
  for (std::size_t i = 0; i < rel_a.size() && !any_diff; ++i) {
    any_diff = rel_a[i].labels != rel_c[i].labels;
  }
  REQUIRE(any_diff);
}
