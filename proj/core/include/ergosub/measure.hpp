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
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ergosub/frequency.hpp"

namespace ergosub {

using Site = std::int64_t;
using Weight = std::complex<double>;

struct Atom {
  Site site = 0;
  Weight weight{};

  friend bool operator==(const Atom&, const Atom&) = default;
};

// A finitely supported function Z -> C, stored as atoms sorted by site with
// no zero values. Duplicate sites passed to the constructor are summed.
class FiniteFunction {
 public:
  FiniteFunction() = default;
  // Throws ConfigError on a non-finite value.
  explicit FiniteFunction(std::vector<Atom> atoms);

  [[nodiscard]] static FiniteFunction delta(Site site, Weight value = 1.0);
  // values[i] sits at origin + i; zeros are dropped.
  [[nodiscard]] static FiniteFunction from_dense(Site origin,
                                                 std::span<const Weight> values);
  [[nodiscard]] static FiniteFunction from_dense(Site origin,
                                                 std::span<const double> values);

  [[nodiscard]] std::span<const Atom> atoms() const { return atoms_; }
  [[nodiscard]] std::size_t size() const { return atoms_.size(); }
  [[nodiscard]] bool empty() const { return atoms_.empty(); }
  // Only valid when !empty().
  [[nodiscard]] Site min_site() const { return atoms_.front().site; }
  [[nodiscard]] Site max_site() const { return atoms_.back().site; }
  // max |site|; 0 for the zero function.
  [[nodiscard]] Site radius() const;

  [[nodiscard]] Weight at(Site site) const;
  [[nodiscard]] double l1_norm() const;
  [[nodiscard]] double l2_norm_squared() const;
  [[nodiscard]] double sup_norm() const;
  [[nodiscard]] Weight total() const;

  // Dense copy over [min_site, max_site]; empty for the zero function.
  [[nodiscard]] std::vector<Weight> to_dense() const;

  [[nodiscard]] FiniteFunction operator+(const FiniteFunction& other) const;
  [[nodiscard]] FiniteFunction operator-(const FiniteFunction& other) const;
  [[nodiscard]] FiniteFunction scaled(Weight factor) const;
  [[nodiscard]] FiniteFunction translated(Site shift) const;

  friend bool operator==(const FiniteFunction&, const FiniteFunction&) = default;

 private:
  std::vector<Atom> atoms_;
};

// A finitely supported complex-weighted measure on Z. Immutable; total
// variation and the probability flag are computed once at construction.
class WeightedMeasure {
 public:
  WeightedMeasure() = default;
  explicit WeightedMeasure(FiniteFunction density);

  [[nodiscard]] const FiniteFunction& density() const { return density_; }
  [[nodiscard]] std::span<const Atom> atoms() const { return density_.atoms(); }
  [[nodiscard]] std::size_t size() const { return density_.size(); }
  [[nodiscard]] Site radius() const { return density_.radius(); }
  [[nodiscard]] double total_variation() const { return total_variation_; }
  // Every weight real and >= 0, summing to 1 within 1e-12.
  [[nodiscard]] bool is_probability() const { return is_probability_; }

  // Recomputes sum |w| and compares with the cached value (1e-12 relative).
  [[nodiscard]] bool cache_consistent() const;

  friend bool operator==(const WeightedMeasure& a, const WeightedMeasure& b) {
    return a.density_ == b.density_;
  }

 private:
  FiniteFunction density_;
  double total_variation_ = 0.0;
  bool is_probability_ = false;
};

// Duplicate sites are summed; throws ConfigError on a non-finite weight.
[[nodiscard]] WeightedMeasure make_measure(
    std::vector<std::pair<Site, Weight>> atoms);

// (mu * phi)(x) = sum_j mu(j) phi(x - j).
[[nodiscard]] FiniteFunction convolve(const FiniteFunction& mu,
                                      const FiniteFunction& phi);
[[nodiscard]] inline FiniteFunction convolve(const WeightedMeasure& mu,
                                             const FiniteFunction& phi) {
  return convolve(mu.density(), phi);
}
[[nodiscard]] inline WeightedMeasure convolve(const WeightedMeasure& mu,
                                              const WeightedMeasure& nu) {
  return WeightedMeasure(convolve(mu.density(), nu.density()));
}

// Multiplies the weight at site j by e(theta j). Shifts the transform:
// modulate(mu, theta)^(gamma) = mu^(gamma + theta).
[[nodiscard]] WeightedMeasure modulate(const WeightedMeasure& mu,
                                       const Frequency& theta);
[[nodiscard]] FiniteFunction modulate(const FiniteFunction& phi,
                                      const Frequency& theta);

}  // namespace ergosub
