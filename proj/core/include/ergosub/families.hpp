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
#include <string_view>

#include "ergosub/measure.hpp"
#include "ergosub/rho.hpp"

namespace ergosub {

enum class RotationVariant {
  // Weight e(n^{-1/2} j), as displayed for the rotated measures.
  kLinearPhase,
  // Weight e(n^{-1/2} j^2): the variant for which mu_hat_n(gamma) equals
  // nu_hat_n(gamma + n^{-1/2}) and the transference identity holds.
  kQuadraticPhase,
};

// nu_n = (1/n) sum_{k=1}^n delta_{k^2}.
[[nodiscard]] WeightedMeasure squares_family(std::int64_t n);
// (1/n) sum_{j=1}^n delta_{j^2} e(n^{-1/2} j)  or  e(n^{-1/2} j^2).
[[nodiscard]] WeightedMeasure rotated_squares(std::int64_t n,
                                              RotationVariant variant);
// (1/N) sum_{k=1}^N delta_{k^2 + floor(rho(k))}; colliding atoms merge.
[[nodiscard]] WeightedMeasure perturbed_squares(const RhoSpec& rho,
                                                std::int64_t n);
// Cesaro averages (1/n) sum_{k=1}^n delta_k.
[[nodiscard]] WeightedMeasure uniform_family(std::int64_t n);

// An indexed generator n -> mu_n (n >= 1).
//
// Descriptor grammar:
//   squares | uniform | rotated[:quadratic|:linear]
//   perturbed:power:<a> | perturbed:log:<C> | perturbed:logpow:<c>
//   perturbed:const:<c0>
class MeasureFamily {
 public:
  enum class Kind { kSquares, kRotatedSquares, kPerturbedSquares, kUniform };

  [[nodiscard]] static MeasureFamily squares();
  [[nodiscard]] static MeasureFamily uniform();
  [[nodiscard]] static MeasureFamily rotated(
      RotationVariant variant = RotationVariant::kQuadraticPhase);
  [[nodiscard]] static MeasureFamily perturbed(const RhoSpec& rho);
  // Throws ConfigError on an unknown descriptor.
  [[nodiscard]] static MeasureFamily parse(std::string_view descriptor);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] std::string descriptor() const;
  [[nodiscard]] const std::optional<RhoSpec>& rho() const { return rho_; }
  [[nodiscard]] RotationVariant variant() const { return variant_; }

  [[nodiscard]] WeightedMeasure generate(std::int64_t n) const;
  [[nodiscard]] WeightedMeasure operator()(std::int64_t n) const {
    return generate(n);
  }

  // Exact max |site| over the atoms of mu_n.
  [[nodiscard]] Site support_radius(std::int64_t n) const;

  // True when mu_n = (1/n) sum_{k<=n} delta_{term(k)}, so transforms can be
  // updated one atom at a time.
  [[nodiscard]] bool is_prefix_average() const {
    return kind_ != Kind::kRotatedSquares;
  }
  // k-th site of a prefix-average family.
  [[nodiscard]] Site term(std::int64_t k) const;

 private:
  MeasureFamily(Kind kind, std::optional<RhoSpec> rho, RotationVariant variant)
      : kind_(kind), rho_(rho), variant_(variant) {}

  Kind kind_;
  std::optional<RhoSpec> rho_;
  RotationVariant variant_;
};

[[nodiscard]] inline Site support_radius(const MeasureFamily& family,
                                         std::int64_t n) {
  return family.support_radius(n);
}

// Weight 1/n rounded so that n * w <= 1 holds exactly.
[[nodiscard]] double uniform_weight(std::int64_t n);

}  // namespace ergosub
