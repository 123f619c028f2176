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

#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <vector>

#include <doctest.h>

#include "ergosub/dynsys.hpp"
#include "ergosub/families.hpp"
#include "ergosub/fourier.hpp"
#include "ergosub/weyl.hpp"
#include "oracles.hpp"

using namespace ergosub;
using Cd = std::complex<double>;

namespace {

WeightedMeasure random_measure(std::mt19937_64& rng, std::int64_t radius) {
  const auto f = oracle::random_function(rng, 1 + static_cast<int>(rng() % 30), -radius,
                                         radius, true);
  std::vector<std::pair<Site, Weight>> atoms;
  for (const auto& atom : f.atoms()) atoms.emplace_back(atom.site, atom.weight);
  return make_measure(std::move(atoms));
}

}  // namespace

TEST_CASE("weighted average examples") {
  const auto golden = System::golden_rotation();
  const auto trig = ObservedFunction::trig(3);
  const Point x{0x1234'5678'9abc'def0ULL, 0};
  CHECK(std::abs(weighted_average(golden, trig, make_measure({{0, 1.0}}), x) -
                 trig(golden, x)) <= 1e-15);

  const auto shift = System::cyclic_shift(7);
  const std::vector<double> table = {0.5, -1, 2, 3, 0, 0.25, 7};
  const auto f = ObservedFunction::table(table);
  double mean = 0;
  for (double v : table) mean += v / 7;
  CHECK(std::abs(f.mean(shift) - Cd(mean)) <= 1e-15);
  for (std::int64_t r = 0; r < 7; ++r) {
    CHECK(std::abs(weighted_average(shift, f, uniform_family(7), Point{0, r}) - Cd(mean)) <=
          1e-14);
  }

  // Squares on the golden rotation against the Weyl sum at m alpha.
  for (std::int64_t n : {10, 100, 1000}) {
    const auto avg = weighted_average(golden, trig, squares_family(n), x);
    const double m_alpha = std::fmod(3.0 * golden.alpha(), 1.0);
    CHECK(std::abs(avg - trig(golden, x) * weyl_sum(n, m_alpha)) <= 1e-9);
  }
  CHECK(std::abs(ObservedFunction::indicator(0.25, 0.75).mean(golden) - Cd(0.5)) <= 1e-15);
  CHECK(std::abs(trig.mean(golden)) == 0.0);
}

TEST_CASE("weighted average is linear") {
  std::mt19937_64 rng(17);
  const auto golden = System::golden_rotation();
  for (int t = 0; t < 100; ++t) {
    const auto mu = random_measure(rng, 500);
    const auto nu = random_measure(rng, 500);
    const Cd c(0.3 * static_cast<double>(rng() % 7), -0.25);
    std::vector<std::pair<Site, Weight>> combined;
    for (const auto& a : mu.atoms()) combined.emplace_back(a.site, a.weight);
    for (const auto& a : nu.atoms()) combined.emplace_back(a.site, c * a.weight);
    const auto sum = make_measure(std::move(combined));
    const Point x{rng(), 0};
    const auto f = ObservedFunction::trig(1 + static_cast<std::int64_t>(rng() % 5));
    const auto g = ObservedFunction::indicator(0.1, 0.6);
    CHECK(std::abs(weighted_average(golden, f, sum, x) -
                   (weighted_average(golden, f, mu, x) + c * weighted_average(golden, f, nu, x))) <=
          1e-10);
    // In f: trig(m) + indicator evaluated pointwise.
    const Cd lhs = weighted_average(golden, f, mu, x) + weighted_average(golden, g, mu, x);
    Cd rhs = 0;
    for (const auto& a : mu.atoms()) {
      const Point y = golden.orbit(x, a.site);
      rhs += a.weight * (f(golden, y) + g(golden, y));
    }
    CHECK(std::abs(lhs - rhs) <= 1e-10);
  }
}

TEST_CASE("cyclic shift matches a convolution on Z_M") {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 100; ++t) {
    const std::int64_t m = 1 + static_cast<std::int64_t>(rng() % 40);
    const auto shift = System::cyclic_shift(m);
    std::vector<double> table(static_cast<std::size_t>(m));
    for (auto& v : table) v = static_cast<double>(rng() % 1000) / 100.0 - 5.0;
    const auto f = ObservedFunction::table(table);
    const auto mu = random_measure(rng, 100000);
    // Reduce mu mod M, then convolve.
    std::map<std::int64_t, oracle::Complex> reduced;
    for (const auto& a : mu.atoms()) {
      reduced[((a.site % m) + m) % m] += oracle::Complex(a.weight.real(), a.weight.imag());
    }
    for (std::int64_t x = 0; x < m; ++x) {
      oracle::Complex expected = 0;
      for (const auto& [r, w] : reduced) {
        expected += w * static_cast<long double>(table[static_cast<std::size_t>((x + r) % m)]);
      }
      CHECK(oracle::distance(weighted_average(shift, f, mu, Point{0, x}), expected) <= 1e-10);
    }
  }
}

TEST_CASE("rotation spectral identity") {
  std::mt19937_64 rng(23);
  for (const auto& system :
       {System::golden_rotation(), System::torus_rotation(0x9e37'79b9'7f4a'7c15ULL ^ 1ULL)}) {
    for (int t = 0; t < 50; ++t) {
      const auto mu = random_measure(rng, 100'000'000);
      const std::int64_t m = static_cast<std::int64_t>(rng() % 9) - 4;
      const Point x{rng(), 0};
      const auto frequency =
          Frequency::fixed64(static_cast<std::uint64_t>(m) * system.alpha_numerator());
      const Cd expected = Frequency::fixed64(static_cast<std::uint64_t>(m) * x.fixed).character(1) *
                          fourier_at(mu, frequency);
      CHECK(std::abs(weighted_average(system, ObservedFunction::trig(m), mu, x) - expected) <=
            1e-10);
    }
  }
}

TEST_CASE("convergence traces") {
  const auto golden = System::golden_rotation();
  const auto trig = ObservedFunction::trig(1);
  std::vector<std::pair<std::int64_t, WeightedMeasure>> same;
  for (int k = 0; k < 6; ++k) same.emplace_back(100, squares_family(100));
  const auto points = sample_points(golden, 8, 3);
  const auto flat = convergence_trace(golden, trig, same, points);
  CHECK(flat.rows.size() == 48);
  CHECK(flat.max_oscillation == 0.0);
  CHECK(flat.median_oscillation == 0.0);

  // Uniform averages on an irrational rotation settle to the mean 0.
  std::vector<std::int64_t> indices;
  for (std::int64_t n = 16; n <= (1 << 16); n *= 2) indices.push_back(n);
  const auto good = convergence_trace(golden, trig, MeasureFamily::uniform(), indices, 16, 5);
  CHECK(good.final_oscillation.size() == 16);
  std::vector<double> tail_by_k(indices.size(), 0.0);
  for (const auto& row : good.rows) {
    tail_by_k[row.k - 1] = std::max(tail_by_k[row.k - 1], row.osc_tail);
  }
  for (std::size_t k = 4; k < tail_by_k.size(); ++k) {
    CHECK(tail_by_k[k] <= tail_by_k[k - 1] + 1e-12);
  }
  CHECK(good.max_oscillation <= 0.05);

  // x + k^2 = 2 mod 3 never happens from x = 0, for 2/3 of k from x = 1 and
  // for 1/3 of k from x = 2, so two of the three starting points stay away
  // from the mean 1/3 for every n.
  const auto shift = System::cyclic_shift(3);
  const auto nonresidue = ObservedFunction::table({0, 0, 1});
  std::vector<std::pair<std::int64_t, WeightedMeasure>> squares;
  for (std::int64_t n : indices) squares.emplace_back(n, squares_family(n));
  const std::vector<Point> residues = {{0, 0}, {0, 1}, {0, 2}};
  const auto bad = convergence_trace(shift, nonresidue, squares, residues);
  CHECK(bad.rows.size() == 3 * indices.size());
  for (const auto& row : bad.rows) {
    const double limits[] = {0.0, 2.0 / 3.0, 1.0 / 3.0};
    const double limit = limits[row.sample];
    CHECK(std::abs(row.value.real() - limit) <= 1.0 / static_cast<double>(row.n_k) + 1e-12);
    if (row.sample < 2) CHECK(std::abs(row.value.real() - 1.0 / 3.0) >= 0.3);
  }
  CHECK(trace_csv(bad).rfind("k,n_k,x,re,im,abs,osc_tail\n", 0) == 0);

  const auto first = convergence_trace(shift, nonresidue, MeasureFamily::squares(), indices, 3, 7);
  const auto again = convergence_trace(shift, nonresidue, MeasureFamily::squares(), indices, 3, 7);
  CHECK(trace_csv(again) == trace_csv(first));
}
