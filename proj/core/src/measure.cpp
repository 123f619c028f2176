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

#include "ergosub/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "ergosub/errors.hpp"
#include "ergosub/summation.hpp"

namespace ergosub {
namespace {

// Dense accumulation window for convolutions (cells of four doubles).
constexpr std::int64_t kDenseConvolutionSpan = std::int64_t{1} << 22;
constexpr std::size_t kMaxConvolutionProducts = std::size_t{1} << 27;

bool finite(const Weight& w) {
  return std::isfinite(w.real()) && std::isfinite(w.imag());
}

// Sorted atoms with duplicates summed (compensated) and zeros dropped.
std::vector<Atom> normalize(std::vector<Atom> atoms) {
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& a, const Atom& b) { return a.site < b.site; });
  std::vector<Atom> out;
  out.reserve(atoms.size());
  std::size_t i = 0;
  while (i < atoms.size()) {
    const Site site = atoms[i].site;
    ComplexCompensatedSum sum;
    while (i < atoms.size() && atoms[i].site == site) {
      sum.add(atoms[i].weight);
      ++i;
    }
    const Weight w = sum.value();
    if (w != Weight{}) out.push_back({site, w});
  }
  return out;
}

}  // namespace

FiniteFunction::FiniteFunction(std::vector<Atom> atoms) {
  for (const auto& a : atoms) {
    if (!finite(a.weight)) throw ConfigError("non-finite weight");
  }
  atoms_ = normalize(std::move(atoms));
}

FiniteFunction FiniteFunction::delta(Site site, Weight value) {
  return FiniteFunction({{site, value}});
}

FiniteFunction FiniteFunction::from_dense(Site origin,
                                          std::span<const Weight> values) {
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != Weight{}) {
      atoms.push_back({origin + static_cast<Site>(i), values[i]});
    }
  }
  return FiniteFunction(std::move(atoms));
}

FiniteFunction FiniteFunction::from_dense(Site origin,
                                          std::span<const double> values) {
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 0.0) {
      atoms.push_back({origin + static_cast<Site>(i), values[i]});
    }
  }
  return FiniteFunction(std::move(atoms));
}

Site FiniteFunction::radius() const {
  if (atoms_.empty()) return 0;
  return std::max(std::abs(atoms_.front().site), std::abs(atoms_.back().site));
}

Weight FiniteFunction::at(Site site) const {
  auto it = std::lower_bound(
      atoms_.begin(), atoms_.end(), site,
      [](const Atom& a, Site s) { return a.site < s; });
  if (it == atoms_.end() || it->site != site) return {};
  return it->weight;
}

double FiniteFunction::l1_norm() const {
  CompensatedSum sum;
  for (const auto& a : atoms_) sum.add(std::abs(a.weight));
  return sum.value();
}

double FiniteFunction::l2_norm_squared() const {
  CompensatedSum sum;
  for (const auto& a : atoms_) sum.add(std::norm(a.weight));
  return sum.value();
}

double FiniteFunction::sup_norm() const {
  double best = 0.0;
  for (const auto& a : atoms_) best = std::max(best, std::abs(a.weight));
  return best;
}

Weight FiniteFunction::total() const {
  ComplexCompensatedSum sum;
  for (const auto& a : atoms_) sum.add(a.weight);
  return sum.value();
}

std::vector<Weight> FiniteFunction::to_dense() const {
  if (atoms_.empty()) return {};
  std::vector<Weight> dense(
      static_cast<std::size_t>(max_site() - min_site() + 1));
  for (const auto& a : atoms_) {
    dense[static_cast<std::size_t>(a.site - min_site())] = a.weight;
  }
  return dense;
}

FiniteFunction FiniteFunction::operator+(const FiniteFunction& other) const {
  std::vector<Atom> merged;
  merged.reserve(atoms_.size() + other.atoms_.size());
  merged.insert(merged.end(), atoms_.begin(), atoms_.end());
  merged.insert(merged.end(), other.atoms_.begin(), other.atoms_.end());
  return FiniteFunction(std::move(merged));
}

FiniteFunction FiniteFunction::operator-(const FiniteFunction& other) const {
  return *this + other.scaled(-1.0);
}

FiniteFunction FiniteFunction::scaled(Weight factor) const {
  std::vector<Atom> out;
  out.reserve(atoms_.size());
  for (const auto& a : atoms_) out.push_back({a.site, a.weight * factor});
  return FiniteFunction(std::move(out));
}

FiniteFunction FiniteFunction::translated(Site shift) const {
  FiniteFunction out;
  out.atoms_ = atoms_;
  for (auto& a : out.atoms_) a.site += shift;
  return out;
}

WeightedMeasure::WeightedMeasure(FiniteFunction density)
    : density_(std::move(density)) {
  CompensatedSum tv;
  CompensatedSum mass;
  bool nonnegative_real = true;
  for (const auto& a : density_.atoms()) {
    tv.add(std::abs(a.weight));
    mass.add(a.weight.real());
    if (a.weight.imag() != 0.0 || a.weight.real() < 0.0) {
      nonnegative_real = false;
    }
  }
  total_variation_ = tv.value();
  is_probability_ = nonnegative_real && !density_.empty() &&
                    std::abs(mass.value() - 1.0) <= 1e-12;
}

bool WeightedMeasure::cache_consistent() const {
  const double recomputed = density_.l1_norm();
  return std::abs(recomputed - total_variation_) <=
         1e-12 * std::max(1.0, recomputed);
}

WeightedMeasure make_measure(std::vector<std::pair<Site, Weight>> atoms) {
  std::vector<Atom> converted;
  converted.reserve(atoms.size());
  for (const auto& [site, weight] : atoms) converted.push_back({site, weight});
  return WeightedMeasure(FiniteFunction(std::move(converted)));
}

FiniteFunction convolve(const FiniteFunction& mu, const FiniteFunction& phi) {
  if (mu.empty() || phi.empty()) return {};
  const Site lo = mu.min_site() + phi.min_site();
  const Site span = (mu.max_site() - mu.min_site()) +
                    (phi.max_site() - phi.min_site()) + 1;
  if (span <= kDenseConvolutionSpan) {
    std::vector<ComplexCompensatedSum> cells(static_cast<std::size_t>(span));
    for (const auto& m : mu.atoms()) {
      for (const auto& p : phi.atoms()) {
        cells[static_cast<std::size_t>(m.site + p.site - lo)].add(m.weight *
                                                                  p.weight);
      }
    }
    std::vector<Atom> out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const Weight w = cells[i].value();
      if (w != Weight{}) out.push_back({lo + static_cast<Site>(i), w});
    }
    return FiniteFunction(std::move(out));
  }
  if (mu.size() * phi.size() > kMaxConvolutionProducts) {
    throw ResourceError("convolution too large: " +
                        std::to_string(mu.size()) + " x " +
                        std::to_string(phi.size()) + " products");
  }
  std::vector<Atom> products;
  products.reserve(mu.size() * phi.size());
  for (const auto& m : mu.atoms()) {
    for (const auto& p : phi.atoms()) {
      products.push_back({m.site + p.site, m.weight * p.weight});
    }
  }
  return FiniteFunction(std::move(products));
}

FiniteFunction modulate(const FiniteFunction& phi, const Frequency& theta) {
  std::vector<Atom> out;
  out.reserve(phi.size());
  for (const auto& a : phi.atoms()) {
    out.push_back({a.site, a.weight * theta.character(a.site)});
  }
  return FiniteFunction(std::move(out));
}

WeightedMeasure modulate(const WeightedMeasure& mu, const Frequency& theta) {
  return WeightedMeasure(modulate(mu.density(), theta));
}

}  // namespace ergosub
