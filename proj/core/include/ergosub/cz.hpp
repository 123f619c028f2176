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

#include <cstdint>
#include <string>
#include <vector>

#include "ergosub/measure.hpp"

namespace ergosub {

// Q_{s,k} = [k 2^s, (k+1) 2^s) in Z. The grid is anchored at 0.
struct DyadicInterval {
  int scale = 0;
  std::int64_t position = 0;

  [[nodiscard]] std::int64_t length() const { return std::int64_t{1} << scale; }
  [[nodiscard]] Site begin() const { return position * length(); }
  [[nodiscard]] Site end() const { return begin() + length(); }
  [[nodiscard]] bool contains(Site x) const { return begin() <= x && x < end(); }
  [[nodiscard]] DyadicInterval parent() const;
  [[nodiscard]] bool intersects(const DyadicInterval& other) const {
    return begin() < other.end() && other.begin() < end();
  }
  // The dyadic interval of the given scale containing x.
  [[nodiscard]] static DyadicInterval containing(Site x, int scale);

  friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;
};

struct BadPart {
  DyadicInterval interval;
  // phi - mean(phi over the interval), restricted to the interval.
  FiniteFunction b;
};

struct CZDecomposition {
  double lambda = 0.0;
  FiniteFunction good;
  // Sorted by interval start.
  std::vector<BadPart> bad;

  // Sum of |Q| over the selected intervals.
  [[nodiscard]] std::int64_t carleson_sum() const;
  // Sum of the b's whose interval has scale < max_scale.
  [[nodiscard]] FiniteFunction bad_below_scale(int max_scale) const;
};

// Stopping-time construction: the maximal dyadic intervals on which the
// average of |phi| is strictly greater than lambda. On each, b = phi - mean
// and g = mean; off them g = phi. Since the parent of a selected interval is
// not selected, this gives ||g||_inf <= 2 lambda and sum |b| <= 4 lambda |Q|.
// Throws ConfigError unless lambda > 0 and finite.
[[nodiscard]] CZDecomposition cz_decompose(const FiniteFunction& phi,
                                           double lambda);

struct CZInvariants {
  double reconstruction_error = 0.0;
  bool mean_zero = true;
  bool supports_inside = true;
  double g_inf_norm = 0.0;
  bool g_bound = true;       // ||g||_inf <= 2 lambda
  bool bad_mass_bound = true;  // sum |b| <= 4 lambda |Q|
  std::int64_t carleson_sum = 0;
  bool carleson_bound = true;  // sum |Q| <= ||phi||_1 / lambda
  bool disjoint = true;
  bool orthogonal = true;  // <b, b'> == 0 exactly for distinct parts
  // The tighter constants ||g||_inf <= lambda and sum |b| <= lambda |Q|;
  // reported, not required.
  bool tight_g_bound = true;
  bool tight_bad_mass_bound = true;

  [[nodiscard]] bool ok(double reconstruction_tol = 1e-12) const {
    return reconstruction_error <= reconstruction_tol && mean_zero &&
           supports_inside && g_bound && bad_mass_bound && carleson_bound &&
           disjoint && orthogonal;
  }
};

[[nodiscard]] CZInvariants check_cz_invariants(const FiniteFunction& phi,
                                               const CZDecomposition& cz);

// {lambda, n_bad_intervals, carleson_sum, g_inf_norm, reconstruction_error}
[[nodiscard]] std::string cz_report_json(const FiniteFunction& phi,
                                         const CZDecomposition& cz);

}  // namespace ergosub
