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
#include <random>
#include <string>

#include <doctest.h>

#include "ergosub/errors.hpp"
#include "ergosub/families.hpp"
#include "ergosub/fourier.hpp"
#include "ergosub/measure.hpp"
#include "ergosub/rho.hpp"
#include "ergosub/summation.hpp"
#include "oracles.hpp"

using namespace ergosub;
using Cd = std::complex<double>;

TEST_CASE("rho parsing and closed forms") {
  const auto p = RhoSpec::parse("power:0.25");
  CHECK(p.kind() == RhoSpec::Kind::kPower);
  CHECK(p(16.0) == doctest::Approx(2.0));
  CHECK(p.inverse(2.0) == doctest::Approx(16.0));
  CHECK(p.epsilon() == doctest::Approx(1.0 / 3.0 - 0.25));
  CHECK(p.meets_threshold_hypotheses());
  CHECK_FALSE(RhoSpec::power(0.5).meets_threshold_hypotheses());

  const auto l = RhoSpec::parse("log:1");
  CHECK(l(std::exp(1.0) - 1.0) == doctest::Approx(1.0));
  CHECK(l.derivative(3.0) == doctest::Approx(0.25));
  CHECK(RhoSpec::parse("logpow:2")(std::exp(2.0) - 1.0) == doctest::Approx(4.0));
  CHECK(RhoSpec::parse("const:3")(1e9) == 3.0);
  CHECK_THROWS_AS((void)RhoSpec::parse("power"), ConfigError);
  CHECK_THROWS_AS((void)RhoSpec::parse("wobble:1"), ConfigError);
  CHECK_THROWS_AS((void)RhoSpec::parse("power:abc"), ConfigError);
  CHECK_THROWS_AS((void)RhoSpec::constant(1).inverse(1.0), ConfigError);
  CHECK(RhoSpec::parse(p.descriptor()).parameter() == p.parameter());
}

TEST_CASE("rho hypotheses and inverse round trip by sampling") {
  for (const char* d : {"power:0.25", "power:0.3", "log:1", "log:2", "logpow:2"}) {
    CAPTURE(d);
    const auto rho = RhoSpec::parse(d);
    const auto check = check_hypotheses(rho, 8.0, 1e8);
    CHECK(check.ok());
    CHECK(check.worst_inverse_error <= 1e-9);
  }
}

TEST_CASE("floor_at matches a long double oracle and the inverse search") {
  for (const char* d : {"power:0.25", "power:0.5", "log:1", "logpow:2", "const:2.5"}) {
    CAPTURE(d);
    const auto rho = RhoSpec::parse(d);
    for (std::int64_t k = 1; k <= 5000; ++k) {
      const long double x = static_cast<long double>(k);
      long double v = 0;
      switch (rho.kind()) {
        case RhoSpec::Kind::kPower: v = std::pow(x, static_cast<long double>(rho.parameter())); break;
        case RhoSpec::Kind::kLogScaled: v = rho.parameter() * std::log1p(x); break;
        case RhoSpec::Kind::kLogPower: v = std::pow(std::log1p(x), static_cast<long double>(rho.parameter())); break;
        case RhoSpec::Kind::kConstant: v = rho.parameter(); break;
      }
      // Skip values within rounding of an integer; the exact path decides those.
      if (std::abs(v - std::round(v)) < 1e-12L) continue;
      CHECK(rho.floor_at(k) == static_cast<std::int64_t>(std::floor(v)));
    }
  }
  // Exact integer roots on perfect powers.
  const auto quarter = RhoSpec::power(0.25);
  CHECK(quarter.floor_at(81) == 3);
  CHECK(quarter.floor_at(80) == 2);
  CHECK(quarter.floor_at(1'000'000'000'000LL) == 1000);
  CHECK(quarter.floor_at_sqrt(6561) == 3);
  CHECK(quarter.floor_at_sqrt(6560) == 2);
  for (std::int64_t j = 1; j < 12; ++j) {
    const auto k = quarter.first_index_reaching(j);
    CHECK(quarter.floor_at(k) >= j);
    CHECK(quarter.floor_at(k - 1) < j);
  }
  CHECK(RhoSpec::constant(2).first_index_reaching(3) == -1);
}

TEST_CASE("squares family examples") {
  CHECK(squares_family(1) == make_measure({{1, 1.0}}));
  const auto nu3 = squares_family(3);
  REQUIRE(nu3.size() == 3);
  CHECK(nu3.atoms()[2].site == 9);
  CHECK(nu3.is_probability());
  const auto nu100 = squares_family(100);
  CHECK(std::abs(fourier_at(nu100, Frequency::ratio(1, 4)) - Cd(0.5, 0.5)) <= 1e-15);
  CHECK(MeasureFamily::squares().support_radius(10) == 100);
}

TEST_CASE("rotated squares examples") {
  for (auto v : {RotationVariant::kLinearPhase, RotationVariant::kQuadraticPhase}) {
    const auto mu = rotated_squares(1, v);
    REQUIRE(mu.size() == 1);
    CHECK(mu.atoms()[0].site == 1);
    CHECK(std::abs(mu.atoms()[0].weight - Cd(1.0)) <= 1e-15);
  }
  const auto mu4 = rotated_squares(4, RotationVariant::kQuadraticPhase);
  REQUIRE(mu4.size() == 4);
  const double sign[] = {-1, 1, -1, 1};
  for (int j = 0; j < 4; ++j) {
    CHECK(mu4.atoms()[j].site == (j + 1) * (j + 1));
    CHECK(std::abs(mu4.atoms()[j].weight - Cd(0.25 * sign[j])) <= 1e-15);
  }
  CHECK(mu4.total_variation() == doctest::Approx(1.0).epsilon(1e-15));

  const auto mu25 = rotated_squares(25, RotationVariant::kQuadraticPhase);
  const auto nu25 = squares_family(25);
  CHECK(std::abs(fourier_at(mu25, Frequency::real(0.3)) -
                 fourier_at(nu25, Frequency::real(0.3 + 0.2))) <= 1e-10);
  // The displayed linear phase does not satisfy the shift identity.
  const auto lin25 = rotated_squares(25, RotationVariant::kLinearPhase);
  CHECK(std::abs(fourier_at(lin25, Frequency::real(0.3)) -
                 fourier_at(nu25, Frequency::real(0.5))) > 1e-3);
  CHECK(MeasureFamily::rotated().support_radius(7) == 49);
}

TEST_CASE("perturbed squares examples") {
  CHECK(perturbed_squares(RhoSpec::constant(0), 3) == squares_family(3));
  const auto log4 = perturbed_squares(RhoSpec::log_scaled(1), 4);
  REQUIRE(log4.size() == 4);
  const Site expected[] = {1, 5, 10, 17};
  for (int i = 0; i < 4; ++i) {
    // Oracle: k^2 + floor(log(1 + k)).
    const int k = i + 1;
    CHECK(k * k + static_cast<int>(std::floor(std::log1p(static_cast<long double>(k)))) == expected[i]);
    CHECK(log4.atoms()[i].site == expected[i]);
  }
  const auto p16 = perturbed_squares(RhoSpec::power(0.25), 16);
  CHECK(p16.atoms().back().site == 258);
  const auto family = MeasureFamily::parse("perturbed:power:0.25");
  CHECK(family.support_radius(16) == 258);
}

TEST_CASE("constant rho is a translate of the squares") {
  for (double c0 : {0.0, 1.0, 2.7, 5.0}) {
    for (std::int64_t n : {1, 5, 33}) {
      const auto translated =
          squares_family(n).density().translated(static_cast<Site>(std::floor(c0)));
      CHECK(perturbed_squares(RhoSpec::constant(c0), n).density() == translated);
    }
  }
}

TEST_CASE("every family: mass <= 1 exactly and support within the radius") {
  for (const char* d : {"squares", "uniform", "rotated:quadratic", "rotated:linear",
                        "perturbed:power:0.25", "perturbed:log:1", "perturbed:const:3"}) {
    CAPTURE(d);
    const auto family = MeasureFamily::parse(d);
    CHECK(MeasureFamily::parse(family.descriptor()).descriptor() == family.descriptor());
    for (std::int64_t n : {1, 2, 3, 7, 10, 49, 100, 257, 1000}) {
      const auto mu = family(n);
      // Exact accumulation of |w|.
      ExactSum mass;
      for (const auto& a : mu.atoms()) mass.add(std::abs(a.weight));
      mass.add(-1.0);
      CHECK((mass.is_zero() || mass.leading() < 0 ||
             family.kind() == MeasureFamily::Kind::kRotatedSquares));
      CHECK(mu.total_variation() <= 1.0 + 1e-15);
      Site radius = 0;
      for (const auto& a : mu.atoms()) radius = std::max(radius, std::abs(a.site));
      CHECK(family.support_radius(n) == radius);
      if (family.is_prefix_average()) {
        for (std::int64_t k = 1; k <= n; k += 1 + n / 17) {
          CHECK(mu.density().at(family.term(k)) != Cd{});
        }
      }
    }
  }
  CHECK_THROWS_AS((void)MeasureFamily::parse("cubes"), ConfigError);
  CHECK_THROWS_AS((void)MeasureFamily::parse("perturbed:power"), ConfigError);
  CHECK_THROWS_AS((void)squares_family(0), ConfigError);
}

TEST_CASE("transference identity for the quadratic-phase rotation") {
  std::mt19937_64 rng(21);
  for (std::int64_t n = 4; n <= 64; n += 6) {
    const auto mu = rotated_squares(n, RotationVariant::kQuadraticPhase);
    const auto nu = squares_family(n);
    const double theta = 1.0 / std::sqrt(static_cast<double>(n));
    for (int t = 0; t < 5; ++t) {
      const auto phi = oracle::random_function(rng, 15, -100, 100);
      const auto lhs = convolve(mu, phi);
      const auto inner = convolve(nu, modulate(phi, Frequency::real(-theta)));
      for (Site k = -100; k <= 100 + n * n; k += 3) {
        const Cd rhs = unit_character(theta * static_cast<double>(k)) * inner.at(k);
        CHECK(std::abs(lhs.at(k) - rhs) <= 1e-9);
      }
    }
  }
}
