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

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "ergosub/frequency.hpp"
#include "ergosub/measure.hpp"

namespace ergosub {

// Rigorous two-sided bound on a supremum over the circle.
struct SupBracket {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t grid_size = 0;
  // Grid point where the sampled maximum was found.
  double argmax = 0.0;

  [[nodiscard]] double width() const { return upper - lower; }
  [[nodiscard]] bool contains(double value) const {
    return lower <= value && value <= upper;
  }
};

enum class GridMethod { kAuto, kDirect, kFast };

// Largest grid a sup bracket may allocate before giving up. 2^24 complex
// doubles is 256 MiB.
inline constexpr std::size_t kDefaultMaxGrid = std::size_t{1} << 24;

[[nodiscard]] std::complex<double> fourier_at(const FiniteFunction& f,
                                              const Frequency& gamma);
[[nodiscard]] inline std::complex<double> fourier_at(const WeightedMeasure& mu,
                                                     const Frequency& gamma) {
  return fourier_at(mu.density(), gamma);
}

// Entry m is mu_hat(m / grid). The fast path folds sites mod `grid` and runs
// one inverse FFT, so it is exact for any support; the direct path sums each
// entry separately with exact integer phases.
[[nodiscard]] std::vector<std::complex<double>> fourier_grid(
    const FiniteFunction& f, std::size_t grid,
    GridMethod method = GridMethod::kAuto);
[[nodiscard]] inline std::vector<std::complex<double>> fourier_grid(
    const WeightedMeasure& mu, std::size_t grid,
    GridMethod method = GridMethod::kAuto) {
  return fourier_grid(mu.density(), grid, method);
}

// Inputs to a rigorous sup bracket for |P(gamma)| where P is a trigonometric
// polynomial.
struct SupProblem {
  // Returns P(m / G) for m = 0..G-1.
  std::function<std::vector<std::complex<double>>(std::size_t)> sample;
  // P at a single point. When set, cells of the first grid that could still
  // hold the sup are bisected locally instead of refining the whole grid.
  std::function<std::complex<double>(const Frequency&)> at;
  // Any bound on |P'(gamma)|.
  double lipschitz = 0.0;
  // Half the width of P's frequency support, rounded up (Bernstein degree).
  double half_span = 0.0;
  // Scale for the floating-point allowance (usually the l1 norm of the
  // coefficients).
  double magnitude = 1.0;
};

// Samples P on a grid G > 4 half_span. With n = half_span, Bernstein's
// inequality bounds |P''| by (2 pi n)^2 sup|P|, which gives
//   sup|P| <= grid max / sqrt(1 - (pi n / G)^2)
// and, on a cell of width h with end values a, b,
//   sup |P|^2 <= max(a^2, b^2) + 2 (pi n h)^2 sup|P|^2.
// The upper end also never exceeds the Lipschitz bound. Cells are bisected
// (or, without `at`, the grid doubled) until the bracket width is <= tol.
// Throws ResourceError when the grid or the number of point evaluations
// would exceed max_grid, or tol is below the floating-point allowance.
[[nodiscard]] SupBracket bracket_sup(const SupProblem& problem, double tol,
                                     std::size_t max_grid = kDefaultMaxGrid);

// sup over gamma in [0,1) of |(1 - e(gamma)) mu_hat(gamma)|, bracketed.
// The Lipschitz constant used is 2 pi (1 + 2R) ||mu||_1, R = max |site|.
[[nodiscard]] SupBracket triviality_sup(const WeightedMeasure& mu, double tol,
                                        std::size_t max_grid = kDefaultMaxGrid);

// |(1 - e(gamma)) mu_hat(gamma)| at a single point; a valid lower bound for
// the functional.
[[nodiscard]] double triviality_at(const WeightedMeasure& mu,
                                   const Frequency& gamma);

}  // namespace ergosub
