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

#include "ergosub/families.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "ergosub/errors.hpp"

namespace ergosub {
namespace {

void require_positive(std::int64_t n) {
  if (n < 1) throw ConfigError("family index must be >= 1");
  // Keeps k^2 + floor(rho(k)) inside int64.
  if (n > 3'000'000'000LL) throw ConfigError("family index too large");
}

std::int64_t exact_sqrt(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r * r == n ? r : 0;
}

// n^{-1/2}, exactly as a ratio when n is a perfect square.
Frequency inverse_root(std::int64_t n) {
  if (const auto r = exact_sqrt(n); r != 0) return Frequency::ratio(1, r);
  return Frequency::real(1.0 / std::sqrt(static_cast<double>(n)));
}

WeightedMeasure prefix_average(const MeasureFamily& family, std::int64_t n) {
  const double w = uniform_weight(n);
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(n));
  for (std::int64_t k = 1; k <= n; ++k) atoms.push_back({family.term(k), w});
  return WeightedMeasure(FiniteFunction(std::move(atoms)));
}

}  // namespace

double uniform_weight(std::int64_t n) {
  if (n < 1) throw ConfigError("uniform_weight needs n >= 1");
  const double nd = static_cast<double>(n);
  double w = 1.0 / nd;
  if (std::fma(nd, w, -1.0) > 0.0) w = std::nextafter(w, 0.0);
  return w;
}

WeightedMeasure squares_family(std::int64_t n) {
  return MeasureFamily::squares().generate(n);
}

WeightedMeasure rotated_squares(std::int64_t n, RotationVariant variant) {
  return MeasureFamily::rotated(variant).generate(n);
}

WeightedMeasure perturbed_squares(const RhoSpec& rho, std::int64_t n) {
  return MeasureFamily::perturbed(rho).generate(n);
}

WeightedMeasure uniform_family(std::int64_t n) {
  return MeasureFamily::uniform().generate(n);
}

MeasureFamily MeasureFamily::squares() {
  return {Kind::kSquares, std::nullopt, RotationVariant::kQuadraticPhase};
}

MeasureFamily MeasureFamily::uniform() {
  return {Kind::kUniform, std::nullopt, RotationVariant::kQuadraticPhase};
}

MeasureFamily MeasureFamily::rotated(RotationVariant variant) {
  return {Kind::kRotatedSquares, std::nullopt, variant};
}

MeasureFamily MeasureFamily::perturbed(const RhoSpec& rho) {
  return {Kind::kPerturbedSquares, rho, RotationVariant::kQuadraticPhase};
}

MeasureFamily MeasureFamily::parse(std::string_view descriptor) {
  if (descriptor == "squares") return squares();
  if (descriptor == "uniform") return uniform();
  if (descriptor == "rotated" || descriptor == "rotated:quadratic") {
    return rotated(RotationVariant::kQuadraticPhase);
  }
  if (descriptor == "rotated:linear") return rotated(RotationVariant::kLinearPhase);
  constexpr std::string_view kPerturbed = "perturbed:";
  if (descriptor.substr(0, kPerturbed.size()) == kPerturbed) {
    return perturbed(
        RhoSpec::parse(std::string(descriptor.substr(kPerturbed.size()))));
  }
  throw ConfigError("unknown family '" + std::string(descriptor) + "'");
}

std::string MeasureFamily::descriptor() const {
  switch (kind_) {
    case Kind::kSquares:
      return "squares";
    case Kind::kUniform:
      return "uniform";
    case Kind::kRotatedSquares:
      return variant_ == RotationVariant::kLinearPhase ? "rotated:linear"
                                                       : "rotated:quadratic";
    case Kind::kPerturbedSquares:
      return "perturbed:" + rho_->descriptor();
  }
  return {};
}

Site MeasureFamily::term(std::int64_t k) const {
  switch (kind_) {
    case Kind::kSquares:
      return k * k;
    case Kind::kUniform:
      return k;
    case Kind::kPerturbedSquares:
      return k * k + rho_->floor_at(k);
    case Kind::kRotatedSquares:
      break;
  }
  throw ConfigError("rotated squares carry complex weights; no term()");
}

WeightedMeasure MeasureFamily::generate(std::int64_t n) const {
  require_positive(n);
  if (kind_ != Kind::kRotatedSquares) return prefix_average(*this, n);

  const double w = uniform_weight(n);
  const Frequency shift = inverse_root(n);
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(n));
  for (std::int64_t j = 1; j <= n; ++j) {
    const std::int64_t phase_site =
        variant_ == RotationVariant::kLinearPhase ? j : j * j;
    atoms.push_back({j * j, w * shift.character(phase_site)});
  }
  return WeightedMeasure(FiniteFunction(std::move(atoms)));
}

Site MeasureFamily::support_radius(std::int64_t n) const {
  require_positive(n);
  switch (kind_) {
    case Kind::kSquares:
    case Kind::kRotatedSquares:
      return n * n;
    case Kind::kUniform:
      return n;
    case Kind::kPerturbedSquares: {
      // Sites are nondecreasing in k, so the extremes sit at k = 1 and k = n.
      const Site first = term(1);
      const Site last = term(n);
      return std::max(first < 0 ? -first : first, last < 0 ? -last : last);
    }
  }
  return 0;
}

}  // namespace ergosub
