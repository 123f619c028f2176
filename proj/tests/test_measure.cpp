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
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "ergosub/errors.hpp"
#include "ergosub/families.hpp"
#include "ergosub/fourier.hpp"
#include "ergosub/frequency.hpp"
#include "ergosub/measure.hpp"
#include "ergosub/measure_io.hpp"
#include "ergosub/summation.hpp"
#include "oracles.hpp"

using namespace ergosub;
using Cd = std::complex<double>;

namespace {

bool near(Cd a, Cd b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("compensated sum keeps the small terms") {
  CompensatedSum sum;
  sum.add(1.0);
  for (int i = 0; i < 1000; ++i) sum.add(1e-16);
  CHECK(sum.value() == doctest::Approx(1.0 + 1e-13).epsilon(1e-15));

  std::vector<double> values = {1e100, 1.0, -1e100};
  CHECK(compensated_sum(values) == 1.0);
}

TEST_CASE("exact sum decides zero exactly") {
  ExactSum sum;
  sum.add(0.1);
  sum.add(0.2);
  sum.add(-0.3);
  // 0.1 + 0.2 - 0.3 is not zero in binary.
  CHECK_FALSE(sum.is_zero());
  ExactSum other;
  for (double v : {1e300, 1.0, -1e300, -1.0}) other.add(v);
  CHECK(other.is_zero());
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> v(50);
    ExactSum s;
    for (auto& x : v) {
      x = std::ldexp(u(rng), static_cast<int>(rng() % 40) - 20);
      s.add(x);
    }
    for (auto x : v) s.add(-x);
    CHECK(s.is_zero());
  }
}

TEST_CASE("frequency kinds reduce exactly") {
  const auto quarter = Frequency::ratio(5, 4);
  CHECK(quarter.numerator() == 1);
  CHECK(quarter.denominator() == 4);
  CHECK(near(quarter.character(1), Cd(0, 1), 1e-15));
  CHECK(Frequency::ratio(-1, 3).numerator() == 2);
  CHECK(Frequency::real(1.25).value() == 0.25);
  CHECK(Frequency::real(-0.25).value() == 0.75);
  // Exact phases for huge sites.
  const auto third = Frequency::ratio(1, 3);
  CHECK(std::abs(third.phase(3'000'000'000'000'000'001LL) - 1.0 / 3.0) < 1e-15);
  const auto half = Frequency::fixed64(std::uint64_t{1} << 63);
  CHECK(half.value() == 0.5);
  CHECK(half.phase(3) == -0.5);
  const auto sum = Frequency::ratio(1, 3) + Frequency::ratio(1, 6);
  CHECK(sum.kind() == Frequency::Kind::kRational);
  CHECK(sum.denominator() == 2);
}

TEST_CASE("make_measure examples") {
  const auto delta = make_measure({{0, 1.0}});
  CHECK(delta.size() == 1);
  CHECK(delta.total_variation() == 1.0);
  CHECK(delta.is_probability());

  const auto merged = make_measure({{1, 0.5}, {1, 0.5}});
  REQUIRE(merged.size() == 1);
  CHECK(merged.atoms()[0].site == 1);
  CHECK(merged.atoms()[0].weight == Cd(1.0));

  const auto complex_weights = make_measure({{4, 0.5}, {9, Cd(0, 0.5)}});
  CHECK(complex_weights.total_variation() == 1.0);
  CHECK_FALSE(complex_weights.is_probability());
  CHECK(complex_weights.cache_consistent());

  CHECK_THROWS_AS(make_measure({{0, std::nan("")}}), ConfigError);
  CHECK(make_measure({{3, 1.0}, {3, -1.0}}).size() == 0);
}

TEST_CASE("fourier_at examples") {
  const auto d0 = make_measure({{0, 1.0}});
  const auto d1 = make_measure({{1, 1.0}});
  CHECK(fourier_at(d0, Frequency::real(0.37)) == Cd(1.0));
  CHECK(near(fourier_at(d1, Frequency::ratio(1, 4)), Cd(0, 1), 1e-15));
  const auto nu4 = squares_family(4);
  CHECK(near(fourier_at(nu4, Frequency::ratio(1, 4)), Cd(0.5, 0.5), 1e-15));
}

TEST_CASE("fourier_grid examples and the two paths") {
  const auto d0 = make_measure({{0, 1.0}});
  for (const auto& v : fourier_grid(d0, 4)) CHECK(v == Cd(1.0));
  const auto d1 = make_measure({{1, 1.0}});
  const auto g = fourier_grid(d1, 4);
  const Cd expect[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int m = 0; m < 4; ++m) CHECK(near(g[m], expect[m], 1e-15));

  const auto nu = squares_family(100);
  const auto direct = fourier_grid(nu, 1024, GridMethod::kDirect);
  const auto fast = fourier_grid(nu, 1024, GridMethod::kFast);
  REQUIRE(direct.size() == 1024);
  REQUIRE(fast.size() == 1024);
  double worst = 0;
  for (std::size_t m = 0; m < 1024; ++m) worst = std::max(worst, std::abs(direct[m] - fast[m]));
  CHECK(worst <= 1e-10);
  // Both against the long double oracle.
  double worst_oracle = 0;
  for (std::int64_t m = 0; m < 1024; m += 7) {
    worst_oracle = std::max(
        worst_oracle,
        oracle::distance(fast[static_cast<std::size_t>(m)],
                         oracle::transform_ratio(nu.density(), m, 1024)));
  }
  CHECK(worst_oracle <= 1e-10);
}

TEST_CASE("fourier_grid agrees with fourier_at on random functions") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    const auto f = oracle::random_function(rng, 40, -5000, 5000);
    const std::size_t grid = 64 + rng() % 3000;
    const auto direct = fourier_grid(f, grid, GridMethod::kDirect);
    const auto fast = fourier_grid(f, grid, GridMethod::kFast);
    for (std::size_t m = 0; m < grid; m += 13) {
      const auto at = fourier_at(f, Frequency::ratio(static_cast<std::int64_t>(m),
                                                     static_cast<std::int64_t>(grid)));
      CHECK(std::abs(at - direct[m]) <= 1e-10);
      CHECK(std::abs(at - fast[m]) <= 1e-10);
    }
  }
}

TEST_CASE("Parseval on a window shorter than the grid") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const std::size_t grid = 128;
    const std::int64_t origin = static_cast<std::int64_t>(rng() % 1000) - 500;
    const auto f = oracle::random_function(rng, 50, origin, origin + 127);
    const auto values = fourier_grid(f, grid);
    double energy = 0;
    for (const auto& v : values) energy += std::norm(v);
    CHECK(energy / static_cast<double>(grid) ==
          doctest::Approx(f.l2_norm_squared()).epsilon(1e-12));
  }
}

TEST_CASE("convolution theorem") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    const auto mu = oracle::random_function(rng, 20, -300, 300);
    const auto phi = oracle::random_function(rng, 20, -300, 300);
    const auto conv = convolve(mu, phi);
    const auto gamma = Frequency::real(std::ldexp(static_cast<double>(rng() >> 11), -53));
    const auto lhs = fourier_at(conv, gamma);
    const auto rhs = fourier_at(mu, gamma) * fourier_at(phi, gamma);
    CHECK(std::abs(lhs - rhs) <= 1e-9);
    CHECK(conv.l1_norm() <= mu.l1_norm() * phi.l1_norm() * (1 + 1e-12));
    // Against the site map oracle.
    const auto expected = oracle::convolve(mu, phi);
    for (const auto& a : conv.atoms()) {
      CHECK(oracle::distance(a.weight, expected.at(a.site)) <= 1e-12);
    }
  }
}

TEST_CASE("convolve examples") {
  std::mt19937_64 rng(1);
  const auto phi = oracle::random_function(rng, 10, -20, 20);
  CHECK(convolve(make_measure({{0, 1.0}}), phi) == phi);
  const auto shifted = convolve(FiniteFunction::delta(2), FiniteFunction::delta(3));
  CHECK(shifted == FiniteFunction::delta(5));
  const auto nu2 = squares_family(2);
  const auto diff = FiniteFunction({{0, 1.0}, {1, -1.0}});
  const auto out = convolve(nu2, diff);
  const FiniteFunction expected({{1, 0.5}, {2, -0.5}, {4, 0.5}, {5, -0.5}});
  CHECK(out == expected);
  CHECK(out.l1_norm() <= 2.0);
}

TEST_CASE("modulate examples and shift duality") {
  const auto theta = Frequency::real(0.123);
  CHECK(modulate(make_measure({{0, 1.0}}), theta) == make_measure({{0, 1.0}}));
  const auto flipped = modulate(make_measure({{1, 1.0}}), Frequency::ratio(1, 2));
  REQUIRE(flipped.size() == 1);
  CHECK(near(flipped.atoms()[0].weight, Cd(-1.0), 1e-15));

  const auto nu4 = squares_family(4);
  const auto mod = modulate(nu4, Frequency::ratio(1, 4));
  CHECK(near(fourier_at(mod, Frequency::ratio(0, 1)), Cd(0.5, 0.5), 1e-15));

  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const auto f = oracle::random_function(rng, 30, -1000, 1000);
    const auto mu = WeightedMeasure(f);
    const double th = std::ldexp(static_cast<double>(rng() >> 11), -53);
    const double g = std::ldexp(static_cast<double>(rng() >> 11), -53);
    const auto m = modulate(mu, Frequency::real(th));
    CHECK(m.total_variation() == doctest::Approx(mu.total_variation()).epsilon(1e-12));
    CHECK(std::abs(fourier_at(m, Frequency::real(g)) -
                   fourier_at(mu, Frequency::real(g + th))) <= 1e-10);
  }
}

TEST_CASE("probability measures have |mu_hat| <= 1 and mu_hat(0) = 1") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    std::vector<std::pair<Site, Weight>> atoms;
    double total = 0;
    std::vector<double> w(10);
    for (auto& x : w) {
      x = 1.0 + static_cast<double>(rng() % 100);
      total += x;
    }
    for (int i = 0; i < 10; ++i) {
      atoms.emplace_back(static_cast<Site>(rng() % 500) - 250, w[i] / total);
    }
    const auto mu = make_measure(atoms);
    CHECK(std::abs(fourier_at(mu, Frequency()) - Cd(1.0)) <= 1e-12);
    for (const auto& v : fourier_grid(mu, 512)) CHECK(std::abs(v) <= 1.0 + 1e-12);
  }
}

TEST_CASE("triviality_sup examples") {
  const auto d0 = make_measure({{0, 1.0}});
  const auto b0 = triviality_sup(d0, 1e-6);
  CHECK(b0.lower <= 2.0);
  CHECK(b0.upper >= 2.0);
  CHECK(b0.width() <= 1e-6);

  const auto uniform = uniform_family(64);
  const auto bu = triviality_sup(uniform, 1e-3);
  CHECK(bu.upper <= 0.5);
  CHECK(bu.width() <= 1e-3);
  // Brute-force fine grid oracle.
  const double fine = static_cast<double>(oracle::grid_max_triviality(uniform.density(), 1 << 14));
  CHECK(fine <= bu.upper);
  CHECK(bu.lower <= fine + 2 * std::numbers::pi * 129 * 2 / (1 << 15));

  const auto nu = squares_family(200);
  const auto bn = triviality_sup(nu, 1e-2);
  CHECK(bn.lower >= 0.9);
  CHECK(triviality_at(nu, Frequency::ratio(1, 4)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("triviality_sup brackets the max of a 10x finer grid") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 15; ++t) {
    const auto f = oracle::random_function(rng, 12, -200, 200);
    const WeightedMeasure mu(f);
    const double tol = 1e-3;
    const auto b = triviality_sup(mu, tol);
    CHECK(b.width() <= tol);
    const auto fine_grid = static_cast<std::int64_t>(10 * std::max<std::size_t>(b.grid_size, 64));
    const auto fine = static_cast<double>(oracle::grid_max_triviality(f, std::min<std::int64_t>(fine_grid, 1 << 16)));
    CHECK(fine <= b.upper + 1e-12);
    CHECK(b.lower <= b.upper);
  }
}

TEST_CASE("triviality_sup reports a resource error past the cap") {
  CHECK_THROWS_AS((void)triviality_sup(squares_family(64), 1e-12, 4096), ResourceError);
}

TEST_CASE("measure JSON round trip and CSV header") {
  const auto mu = make_measure({{4, 0.5}, {-9, Cd(0.25, -0.25)}});
  CHECK(measure_from_json(measure_to_json(mu)) == mu);
  CHECK_THROWS_AS((void)measure_from_json("{}"), ConfigError);
  const auto csv = fourier_grid_csv(fourier_grid(mu, 4));
  CHECK(csv.rfind("gamma,re,im,abs\n", 0) == 0);
}
