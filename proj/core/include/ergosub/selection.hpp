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
#include <utility>
#include <vector>

#include "ergosub/errors.hpp"
#include "ergosub/families.hpp"
#include "ergosub/fourier.hpp"
#include "ergosub/measure.hpp"

namespace ergosub {

// Dyadic support bookkeeping: S(n) is the least s >= 0 with every mu_m,
// m <= n, supported in [-2^s, 2^s]. Every family here has supports that grow
// with n, so this is ceil(log2(support_radius(n))).
[[nodiscard]] int s_of(const MeasureFamily& family, std::int64_t n);

// Least n with S(n) > s. Throws ResourceError when no n <= search_cap gets
// there.
[[nodiscard]] std::int64_t n_of_s(const MeasureFamily& family, int s,
                                  std::int64_t search_cap = 1LL << 31);

struct TailSplit {
  WeightedMeasure compact;
  WeightedMeasure tail;
};

// compact keeps the atoms with |site| <= radius, tail keeps the rest.
[[nodiscard]] TailSplit tail_split(const WeightedMeasure& mu, Site radius);

// bounds[0] is empty: the first pick is unconstrained. For k >= 2 (1-based)
// bounds[k-1] = 2^{-2 S(n_{k-1}) - 2k}.
struct SelectionState {
  std::string family;
  std::vector<std::int64_t> chosen;
  std::vector<int> s_values;
  std::vector<double> achieved_sups;
  std::vector<std::optional<double>> bounds;
};

// 2^{-2 s_prev - 2k}, the bound the k-th pick (1-based, k >= 2) must meet.
[[nodiscard]] double selection_bound(int s_prev, int k);

struct SelectionOptions {
  std::int64_t count = 2;
  double sup_tol = 1e-3;
  std::int64_t search_cap = 10'000;
  std::size_t max_grid = kDefaultMaxGrid;
};

// Raised when no index up to the search cap satisfies the next bound.
class SelectionStalled : public Error {
 public:
  SelectionStalled(const std::string& what, SelectionState partial, int step,
                   double bound, double best_lower_bound,
                   std::int64_t best_index, std::int64_t searched_to)
      : Error(what),
        partial_(std::move(partial)),
        step_(step),
        bound_(bound),
        best_lower_bound_(best_lower_bound),
        best_index_(best_index),
        searched_to_(searched_to) {}

  [[nodiscard]] const SelectionState& partial() const { return partial_; }
  // 1-based step that could not be filled.
  [[nodiscard]] int step() const { return step_; }
  [[nodiscard]] double bound() const { return bound_; }
  // Smallest certified lower bound on the functional seen among candidates;
  // no candidate could have gone below it.
  [[nodiscard]] double best_lower_bound() const { return best_lower_bound_; }
  [[nodiscard]] std::int64_t best_index() const { return best_index_; }
  [[nodiscard]] std::int64_t searched_to() const { return searched_to_; }

 private:
  SelectionState partial_;
  int step_;
  double bound_;
  double best_lower_bound_;
  std::int64_t best_index_;
  std::int64_t searched_to_;
};

// Greedy: each pick is the smallest n > previous pick with S(n) > S(previous)
// whose rigorous triviality upper bracket meets the bound. Candidates are
// first screened by exact lower bounds at rationals p/q, q <= 16, so the
// full bracket is only computed for candidates that might pass.
[[nodiscard]] SelectionState select_subsequence(const MeasureFamily& family,
                                                const SelectionOptions& options);

struct SelectionCheck {
  int k = 0;
  std::int64_t index = 0;
  int s_value = 0;
  Site radius = 0;
  std::optional<double> bound;
  double stated_sup = 0.0;
  SupBracket recomputed;
  // bound - max(stated_sup, recomputed.upper); empty for k = 1.
  std::optional<double> margin;
  bool support_ok = false;
  bool s_increasing = false;
  bool stated_sup_valid = false;
  bool ok = false;
};

struct SelectionReport {
  std::vector<SelectionCheck> checks;
  [[nodiscard]] bool ok() const;
};

// Recomputes every support, S value and sup bracket from scratch.
[[nodiscard]] SelectionReport audit_selection(const MeasureFamily& family,
                                              const SelectionState& state,
                                              double sup_tol,
                                              std::size_t max_grid = kDefaultMaxGrid);
// audit_selection, throwing VerificationFailure naming the first failing k.
SelectionReport verify_selection(const MeasureFamily& family,
                                 const SelectionState& state, double sup_tol,
                                 std::size_t max_grid = kDefaultMaxGrid);

[[nodiscard]] std::string selection_to_json(const SelectionState& state);
// Throws ConfigError on malformed input.
[[nodiscard]] SelectionState selection_from_json(const std::string& text);
[[nodiscard]] std::string selection_report_json(const SelectionReport& report);

}  // namespace ergosub
