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

#include <complex>
#include <vector>

#include "naive_dft.hpp"
#include "seqanon/dft.hpp"
#include "seqanon/rng.hpp"

using namespace seqanon;
using Complexes = std::vector<std::complex<double>>;

namespace {

Complexes random_signal(std::size_t n, Rng& rng) {
  Complexes x(n);
  for (auto& v : x) v = {rng.u01() * 2.0 - 1.0, rng.u01() * 2.0 - 1.0};
  return x;
}

double max_abs_diff(const Complexes& a, const Complexes& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

}  // namespace

TEST_CASE("dft of zeros is zeros", "[dft]") {
  const Complexes x(96, {0.0, 0.0});
  for (const auto& v : dft(x)) REQUIRE(std::abs(v) == 0.0);
}

TEST_CASE("dft of a constant concentrates on coefficient zero", "[dft]") {
  const std::size_t n = 360;
  const Complexes x(n, {1.0, 0.0});
  const Complexes c = dft(x);
  REQUIRE(c[0].real() == Approx(static_cast<double>(n)).margin(1e-9));
  REQUIRE(c[0].imag() == Approx(0.0).margin(1e-9));
  for (std::size_t k = 1; k < n; ++k) {
    REQUIRE(std::abs(c[k]) < 1e-9);
  }
}

TEST_CASE("dft matches the quadratic oracle", "[dft]") {
  Rng rng(101);
  for (std::size_t n : {1u, 2u, 3u, 7u, 12u, 60u, 96u, 97u, 360u}) {
    const Complexes x = random_signal(n, rng);
    REQUIRE(max_abs_diff(dft(x), seqtest::naive_dft(x)) < 1e-9);
    REQUIRE(max_abs_diff(idft(x), seqtest::naive_idft(x)) < 1e-9);
  }
}

TEST_CASE("idft inverts dft within 1e-9", "[dft]") {
  Rng rng(55);
  // 20160 is the two-week length; 331 exercises the large-prime path.
  for (std::size_t n : {96u, 360u, 1440u, 331u * 60u, 20160u}) {
    const Complexes x = random_signal(n, rng);
    REQUIRE(max_abs_diff(idft(dft(x)), x) < 1e-9);
  }
}

TEST_CASE("real series round-trip against the oracle", "[dft]") {
  Rng rng(77);
  std::vector<double> x(96);
  for (double& v : x) v = rng.u01();
  Complexes cx(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) cx[i] = x[i];
  const Complexes back = idft(dft_real(x));
  REQUIRE(max_abs_diff(back, seqtest::naive_idft(seqtest::naive_dft(cx))) <
          1e-9);
  for (std::size_t i = 0; i < x.size(); ++i) {
    REQUIRE(back[i].real() == Approx(x[i]).margin(1e-9));
  }
}
