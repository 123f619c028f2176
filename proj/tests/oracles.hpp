// Copyright 2026 The ergosub Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Independent reference computations for the tests. Everything here is
// brute force in long double and shares no code with the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "ergosub/measure.hpp"

namespace oracle {

using Complex = std::complex<long double>;

inline Complex e(long double t) {
  const long double angle = 2.0L * std::numbers::pi_v<long double> * (t - std::floor(t));
  return {std::cos(angle), std::sin(angle)};
}

// e(site * p / q) with the product reduced exactly first.
inline Complex e_ratio(std::int64_t site, std::int64_t p, std::int64_t q) {
  const __int128 r = (static_cast<__int128>(site) * p) % q;
  return e(static_cast<long double>(r < 0 ? r + q : r) / static_cast<long double>(q));
}

inline Complex transform(const ergosub::FiniteFunction& f, long double gamma) {
  Complex sum = 0;
  for (const auto& a : f.atoms()) {
    const long double t = static_cast<long double>(a.site) * gamma;
    sum += Complex(a.weight.real(), a.weight.imag()) * e(t - std::floor(t));
  }
  return sum;
}

inline Complex transform_ratio(const ergosub::FiniteFunction& f, std::int64_t p,
                               std::int64_t q) {
  Complex sum = 0;
  for (const auto& a : f.atoms()) {
    sum += Complex(a.weight.real(), a.weight.imag()) * e_ratio(a.site, p, q);
  }
  return sum;
}

inline Complex transform(const ergosub::WeightedMeasure& mu, long double gamma) {
  return transform(mu.density(), gamma);
}

// (1/n) sum_{j<=n} e(j^2 p/q), exact residues.
inline Complex weyl_ratio(std::int64_t n, std::int64_t p, std::int64_t q) {
  Complex sum = 0;
  for (std::int64_t j = 1; j <= n; ++j) sum += e_ratio(j * j, p, q);
  return sum / static_cast<long double>(n);
}

inline long double abs_of(std::complex<double> z) {
  return std::hypot(static_cast<long double>(z.real()),
                    static_cast<long double>(z.imag()));
}

inline double distance(std::complex<double> a, Complex b) {
  return static_cast<double>(std::abs(Complex(a.real(), a.imag()) - b));
}

// Convolution by a site -> value map.
inline std::map<std::int64_t, Complex> convolve(const ergosub::FiniteFunction& mu,
                                                const ergosub::FiniteFunction& phi) {
  std::map<std::int64_t, Complex> out;
  for (const auto& a : mu.atoms()) {
    for (const auto& b : phi.atoms()) {
      out[a.site + b.site] += Complex(a.weight.real(), a.weight.imag()) *
                              Complex(b.weight.real(), b.weight.imag());
    }
  }
  return out;
}

// Random function with complex values.
inline ergosub::FiniteFunction random_function(std::mt19937_64& rng, int atoms,
                                               std::int64_t lo, std::int64_t hi,
                                               bool complex_values = true) {
  std::uniform_int_distribution<std::int64_t> site(lo, hi);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::vector<ergosub::Atom> out;
  for (int i = 0; i < atoms; ++i) {
    const double re = value(rng);
    const double im = complex_values ? value(rng) : 0.0;
    out.push_back({site(rng), {re, im}});
  }
  return ergosub::FiniteFunction(std::move(out));
}

// Max of |(1 - e(g)) P(g)| over g = m / grid.
inline long double grid_max_triviality(const ergosub::FiniteFunction& f,
                                       std::int64_t grid) {
  long double best = 0;
  for (std::int64_t m = 0; m < grid; ++m) {
    const Complex v = (Complex(1) - e_ratio(1, m, grid)) * transform_ratio(f, m, grid);
    best = std::max(best, std::abs(v));
  }
  return best;
}

}  // namespace oracle
