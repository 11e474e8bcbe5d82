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
#include <numbers>
#include <vector>

namespace seqanon {

namespace detail {

using Complex = std::complex<double>;

// Prime factors above this go through Bluestein instead of the naive
// O(N*p) combine step.
inline constexpr std::size_t kMaxDirectRadix = 61;

inline std::size_t smallest_prime_factor(std::size_t n) {
  if (n % 2 == 0) return 2;
  for (std::size_t p = 3; p * p <= n; p += 2) {
    if (n % p == 0) return p;
  }
  return n;
}

std::vector<Complex> fft_dispatch(const std::vector<Complex>& x, int sign);

// Iterative radix-2 transform; n must be a power of two.
inline void fft_pow2_inplace(std::vector<Complex>& a, int sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang =
        sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    const Complex wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      Complex w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const Complex u = a[i + j];
        const Complex v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// Arbitrary-length transform via the chirp-z identity: an N-point DFT as a
// circular convolution of length 2^ceil(log2(2N-1)). Quadratic phases use
// n^2 mod 2N so the angle stays exact for large n.
inline std::vector<Complex> bluestein(const std::vector<Complex>& x,
                                      int sign) {
  const std::size_t n = x.size();
  std::size_t m = 1;
  while (m < 2 * n - 1) m <<= 1;

  std::vector<Complex> chirp(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t sq = (i * i) % (2 * n);
    const double ang =
        sign * std::numbers::pi * static_cast<double>(sq) /
        static_cast<double>(n);
    chirp[i] = Complex(std::cos(ang), std::sin(ang));
  }

  std::vector<Complex> a(m, Complex(0.0, 0.0));
  std::vector<Complex> b(m, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) a[i] = x[i] * chirp[i];
  b[0] = std::conj(chirp[0]);
  for (std::size_t i = 1; i < n; ++i) {
    b[i] = b[m - i] = std::conj(chirp[i]);
  }

  fft_pow2_inplace(a, -1);
  fft_pow2_inplace(b, -1);
  for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
  fft_pow2_inplace(a, +1);

  std::vector<Complex> out(n);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = a[i] * scale * chirp[i];
  }
  return out;
}

// Recursive mixed-radix Cooley-Tukey: split N = p*q on the smallest prime
// p, transform the p interleaved subsequences, combine with twiddles.
inline std::vector<Complex> fft_mixed_radix(const std::vector<Complex>& x,
                                            std::size_t p, int sign) {
  const std::size_t n = x.size();
  const std::size_t q = n / p;

  std::vector<std::vector<Complex>> sub(p);
  for (std::size_t j = 0; j < p; ++j) {
    std::vector<Complex> part(q);
    for (std::size_t i = 0; i < q; ++i) part[i] = x[i * p + j];
    sub[j] = fft_dispatch(part, sign);
  }

  std::vector<Complex> twiddle(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double ang = sign * 2.0 * std::numbers::pi *
                       static_cast<double>(t) / static_cast<double>(n);
    twiddle[t] = Complex(std::cos(ang), std::sin(ang));
  }

  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc(0.0, 0.0);
    const std::size_t base = k % q;
    for (std::size_t j = 0; j < p; ++j) {
      acc += twiddle[(j * k) % n] * sub[j][base];
    }
    out[k] = acc;
  }
  return out;
}

inline std::vector<Complex> fft_dispatch(const std::vector<Complex>& x,
                                         int sign) {
  const std::size_t n = x.size();
  if (n <= 1) return x;
  if ((n & (n - 1)) == 0) {
    std::vector<Complex> a = x;
    fft_pow2_inplace(a, sign);
    return a;
  }
  const std::size_t p = smallest_prime_factor(n);
  if (p > kMaxDirectRadix) return bluestein(x, sign);
  return fft_mixed_radix(x, p, sign);
}

}  // namespace detail

// Forward unnormalized discrete Fourier transform.
inline std::vector<std::complex<double>> dft(
    const std::vector<std::complex<double>>& x) {
  return detail::fft_dispatch(x, -1);
}

// Inverse transform with 1/N scaling; idft(dft(x)) == x.
inline std::vector<std::complex<double>> idft(
    const std::vector<std::complex<double>>& x) {
  std::vector<std::complex<double>> out = detail::fft_dispatch(x, +1);
  const double scale = 1.0 / static_cast<double>(out.empty() ? 1 : out.size());
  for (auto& v : out) v *= scale;
  return out;
}

inline std::vector<std::complex<double>> dft_real(
    const std::vector<double>& x) {
  std::vector<std::complex<double>> c(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) c[i] = x[i];
  return dft(c);
}

}  // namespace seqanon
