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

#include <vector>

#include "seqanon/rng.hpp"
#include "seqanon/stats.hpp"
#include "stats_oracle.hpp"

using namespace seqanon;

TEST_CASE("welch t-test", "[stats]") {
  SECTION("identical non-constant samples give t=0, p=1") {
    const std::vector<double> a = {1.0, 2.0, 3.0};
    const TestResult res = welch_t_test(a, a);
    REQUIRE(res.statistic == 0.0);
    REQUIRE(res.p_value == Approx(1.0));
  }

  SECTION("shifted 1..5 sample") {
    const std::vector<double> a = {1, 2, 3, 4, 5};
    const std::vector<double> b = {2, 3, 4, 5, 6};
    const TestResult res = welch_t_test(a, b);
    REQUIRE(res.statistic == Approx(-1.0));
    // Oracle value: 2*P(T_8 <= -1) by quadrature.
    const double ref = seqtest::ref_t_two_sided(-1.0, 8.0);
    REQUIRE(res.p_value == Approx(ref).margin(1e-9));
    REQUIRE(res.p_value == Approx(0.34659).margin(1e-4));
  }

  SECTION("swapping samples negates t, keeps p") {
    const std::vector<double> a = {1.0, 5.0, 2.5, 4.0};
    const std::vector<double> b = {2.0, 2.2, 3.0};
    const TestResult ab = welch_t_test(a, b);
    const TestResult ba = welch_t_test(b, a);
    REQUIRE(ab.statistic == Approx(-ba.statistic));
    REQUIRE(ab.p_value == Approx(ba.p_value));
  }

  SECTION("degenerate inputs are errors") {
    const std::vector<double> tiny = {1.0};
    const std::vector<double> ok = {1.0, 2.0};
    const std::vector<double> flat = {3.0, 3.0, 3.0};
    REQUIRE_THROWS_AS(welch_t_test(tiny, ok), DataError);
    REQUIRE_THROWS_AS(welch_t_test(flat, flat), DataError);
  }
}

TEST_CASE("cohen's d", "[stats]") {
  SECTION("equal means give zero") {
    const std::vector<double> a = {1.0, 2.0, 3.0};
    const std::vector<double> b = {0.0, 2.0, 4.0};
    REQUIRE(cohens_d(a, b) == Approx(0.0).margin(1e-15));
  }

  SECTION("unit separation at unit pooled deviation") {
    const std::vector<double> a = {1, 2, 3};
    const std::vector<double> b = {3, 4, 5};
    REQUIRE(cohens_d(a, b) == Approx(-2.0));
  }

  SECTION("zero pooled deviation is an error") {
    const std::vector<double> a = {1.0, 1.0};
    const std::vector<double> b = {2.0, 2.0};
    REQUIRE_THROWS_AS(cohens_d(a, b), DataError);
  }
}

TEST_CASE("pearson correlation", "[stats]") {
  SECTION("perfect positive and negative correlation") {
    const std::vector<double> x = {1, 2, 3, 4};
    std::vector<double> y = {3, 5, 7, 9};  // y = 2x + 1
    const TestResult pos = pearson(x, y);
    REQUIRE(pos.statistic == Approx(1.0));
    REQUIRE(pos.p_value == 0.0);
    y = {-1, -2, -3, -4};
    REQUIRE(pearson(x, y).statistic == Approx(-1.0));
  }

  SECTION("hand-computed r = 0.8") {
    const std::vector<double> x = {1, 2, 3, 4};
    const std::vector<double> y = {1, 3, 2, 4};
    REQUIRE(pearson(x, y).statistic == Approx(0.8));
  }

  SECTION("r is invariant under positive affine maps, flips sign under "
          "negative scale") {
    Rng rng(42);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> x(10), y(10);
      for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = rng.u01();
        y[i] = rng.u01();
      }
      const double r = pearson(x, y).statistic;
      std::vector<double> scaled = x;
      for (double& v : scaled) v = 3.5 * v + 2.0;
      REQUIRE(pearson(scaled, y).statistic == Approx(r));
      for (double& v : scaled) v = -v;
      REQUIRE(pearson(scaled, y).statistic == Approx(-r));
    }
  }

  SECTION("constant series is an error") {
    const std::vector<double> x = {1, 1, 1};
    const std::vector<double> y = {1, 2, 3};
    REQUIRE_THROWS_AS(pearson(x, y), DataError);
  }
}

TEST_CASE("statistics agree with the quadrature reference", "[stats]") {
  Rng rng(1234);
  for (int rep = 0; rep < 25; ++rep) {
    const std::size_t na = 3 + rng.below(40);
    const std::size_t nb = 3 + rng.below(40);
    std::vector<double> a(na), b(nb);
    for (double& v : a) v = rng.u01() * 10.0;
    for (double& v : b) v = rng.u01() * 10.0 + rng.u01();

    const TestResult w = welch_t_test(a, b);
    const seqtest::RefTest rw = seqtest::ref_welch(a, b);
    REQUIRE(w.statistic == Approx(rw.statistic).margin(1e-9));
    REQUIRE(w.p_value == Approx(rw.p_value).margin(1e-6));
    REQUIRE(w.p_value >= 0.0);
    REQUIRE(w.p_value <= 1.0);

    REQUIRE(cohens_d(a, b) ==
            Approx(seqtest::ref_cohens_d(a, b)).margin(1e-9));

    b.resize(na);
    for (double& v : b) v = rng.u01() + 0.2;
    const TestResult p = pearson(a, b);
    const seqtest::RefTest rp = seqtest::ref_pearson(a, b);
    REQUIRE(p.statistic == Approx(rp.statistic).margin(1e-9));
    REQUIRE(p.p_value == Approx(rp.p_value).margin(1e-6));
  }
}
