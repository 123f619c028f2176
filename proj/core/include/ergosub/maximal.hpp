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
#include <optional>
#include <string>
#include <vector>

#include "ergosub/cz.hpp"
#include "ergosub/families.hpp"
#include "ergosub/fourier.hpp"
#include "ergosub/measure.hpp"
#include "ergosub/selection.hpp"

namespace ergosub {

// x -> max over the list of |(mu * phi)(x)|, as a real-valued function.
[[nodiscard]] FiniteFunction maximal_function(
    const FiniteFunction& phi, const std::vector<WeightedMeasure>& measures);

// Dyadic levels ||phi||_inf 2^{-i} down to ||phi||_1 / 2^20.
[[nodiscard]] std::vector<double> default_lambda_grid(const FiniteFunction& phi);

struct LevelRow {
  double lambda = 0.0;
  std::int64_t levelset_count = 0;  // #{x : M phi(x) > lambda}
  double ratio = 0.0;               // lambda * count / ||phi||_1
};

struct Weak11Result {
  std::vector<LevelRow> rows;
  // Max ratio over the grid: an empirical lower estimate of the weak (1,1)
  // constant.
  double ratio = 0.0;
};

[[nodiscard]] Weak11Result weak11_profile(
    const FiniteFunction& phi, const std::vector<WeightedMeasure>& measures,
    const std::vector<double>& lambda_grid);
[[nodiscard]] double weak11_ratio(const FiniteFunction& phi,
                                  const std::vector<WeightedMeasure>& measures,
                                  const std::vector<double>& lambda_grid);
// CSV with header lambda,levelset_count,ratio.
[[nodiscard]] std::string weak11_csv(const Weak11Result& result);

// Largest exponent S_prev + n that sigma_n will materialize.
inline constexpr int kMaxSigmaExponent = 26;

// Uniform probability measure on {1, ..., 2^{s_prev + n}}. Throws
// ResourceError past kMaxSigmaExponent.
[[nodiscard]] WeightedMeasure sigma_n(int s_prev, int n);

struct SigmaDeficit {
  // sup |mu_hat (1 - sigma_hat)|.
  SupBracket deficit;
  SupBracket triviality;
  // 2^{s_prev + n} * triviality.upper.
  double triviality_bound = 0.0;
  // 2^{-s_prev - n}, what the deficit should be below for a selected index.
  double target = 0.0;
  // Bracket tolerance; the first link is only decided up to it.
  double tol = 0.0;
  [[nodiscard]] bool first_link_holds() const {
    return deficit.upper <= triviality_bound + tol;
  }
  [[nodiscard]] bool chain_holds() const {
    return first_link_holds() && triviality_bound <= target;
  }
};

[[nodiscard]] SigmaDeficit sigma_deficit_sup(
    const WeightedMeasure& mu, int s_prev, int n, double tol,
    std::size_t max_grid = kDefaultMaxGrid);

struct E1E2Row {
  int k = 0;
  std::int64_t index = 0;
  int s_prev = 0;
  std::size_t bad_terms = 0;  // parts with scale < s_prev
  // ||(mu * sigma) * B||_1 with B the sum of those parts, and the bound
  // sum 2^{-s_prev - k + s + 1} ||b||_1.
  double e1_value = 0.0;
  double e1_bound = 0.0;
  // Every part also meets its own bound (1e-9 relative slack).
  bool e1_terms_ok = true;
  // ||(mu - mu * sigma) * B||_2^2 against 2^{-2 s_prev - 2k} ||B||_2^2 and
  // against deficit.upper^2 ||B||_2^2, which holds for any measure.
  double e2_value = 0.0;
  double e2_bound = 0.0;
  double e2_unconditional_bound = 0.0;
  SupBracket deficit;

  [[nodiscard]] bool e1_ok() const {
    return e1_terms_ok && e1_value <= e1_bound * (1.0 + 1e-9) + 1e-300;
  }
  [[nodiscard]] bool e2_ok() const {
    return e2_value <= e2_bound * (1.0 + 1e-9) + 1e-300;
  }
  [[nodiscard]] bool e2_unconditional_ok() const {
    return e2_value <= e2_unconditional_bound * (1.0 + 1e-9) + 1e-300;
  }
};

// For the k-th pick of the selection (k = 1 uses s_prev = 0), decomposes phi
// at level lambda and evaluates both pathways against their bounds.
[[nodiscard]] std::vector<E1E2Row> e1_e2_diagnostics(
    const FiniteFunction& phi, const SelectionState& state,
    const MeasureFamily& family, double lambda, double tol = 1e-6,
    std::size_t max_grid = kDefaultMaxGrid);

}  // namespace ergosub
