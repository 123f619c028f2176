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

#include "ergosub/cz.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <nlohmann/json.hpp>

#include "ergosub/errors.hpp"
#include "ergosub/summation.hpp"
#include "wide_int.hpp"

namespace ergosub {
namespace {

using detail::int128;

// Above this many points in the selected intervals the dense b's would not
// fit comfortably in memory.
constexpr double kMaxCarlesonPoints = static_cast<double>(1 << 28);

class Decomposer {
 public:
  Decomposer(std::span<const Atom> atoms, double lambda)
      : atoms_(atoms), lambda_(lambda) {}

  void visit(int scale, std::int64_t position, std::size_t lo, std::size_t hi) {
    CompensatedSum mass;
    for (std::size_t i = lo; i < hi; ++i) mass.add(std::abs(atoms_[i].weight));
    // Strict: an average exactly equal to lambda is not selected.
    if (mass.value() > std::ldexp(lambda_, scale)) {
      select({scale, position}, lo, hi);
      return;
    }
    if (scale == 0) {
      for (std::size_t i = lo; i < hi; ++i) good_.push_back(atoms_[i]);
      return;
    }
    const Site split = (2 * position + 1) * (std::int64_t{1} << (scale - 1));
    const auto mid = static_cast<std::size_t>(
        std::partition_point(atoms_.begin() + static_cast<std::ptrdiff_t>(lo),
                             atoms_.begin() + static_cast<std::ptrdiff_t>(hi),
                             [split](const Atom& a) { return a.site < split; }) -
        atoms_.begin());
    if (lo < mid) visit(scale - 1, 2 * position, lo, mid);
    if (mid < hi) visit(scale - 1, 2 * position + 1, mid, hi);
  }

  std::vector<Atom> take_good() { return std::move(good_); }
  std::vector<BadPart> take_bad() { return std::move(bad_); }

 private:
  void select(const DyadicInterval& q, std::size_t lo, std::size_t hi) {
    ComplexCompensatedSum total;
    for (std::size_t i = lo; i < hi; ++i) total.add(atoms_[i].weight);
    // Division by a power of two is exact.
    const Weight mean = total.value() / static_cast<double>(q.length());
    const auto span = atoms_.subspan(lo, hi - lo);
    const auto re = mean_free_part(span, q, mean.real(),
                                   [](const Weight& w) { return w.real(); });
    const auto im = mean_free_part(span, q, mean.imag(),
                                   [](const Weight& w) { return w.imag(); });
    std::vector<Weight> dense(re.size());
    for (std::size_t i = 0; i < dense.size(); ++i) dense[i] = {re[i], im[i]};
    bad_.push_back({q, FiniteFunction::from_dense(q.begin(), dense)});
    if (mean != Weight{}) {
      for (Site x = q.begin(); x < q.end(); ++x) good_.push_back({x, mean});
    }
  }

  // One real component of (phi - mean) on q, with entries on a power-of-two
  // grid so that their sum is exactly zero. Plain w - mean rounds and leaves
  // the sum a few ulps off. The grid step is below 2^-50 of the largest
  // entry, which is the only reconstruction error introduced.
  template <typename Part>
  static std::vector<double> mean_free_part(std::span<const Atom> span,
                                            const DyadicInterval& q,
                                            double mean, Part part) {
    double largest = std::abs(mean);
    for (const auto& a : span) largest = std::max(largest, std::abs(part(a.weight)));
    std::vector<double> out(static_cast<std::size_t>(q.length()), 0.0);
    if (largest == 0.0) return out;
    int exponent = 0;
    std::frexp(largest, &exponent);  // largest < 2^exponent
    // |entries| <= 2 * largest < 2^(exponent + 1) = 2^52 steps.
    const int step = exponent + 1 - 52;
    auto units = [step](double v) {
      return static_cast<int128>(std::llround(std::ldexp(v, -step)));
    };
    const int128 mean_units = units(mean);
    std::vector<int128> cells(out.size(), -mean_units);
    for (const auto& a : span) {
      cells[static_cast<std::size_t>(a.site - q.begin())] =
          units(part(a.weight)) - mean_units;
    }
    int128 sum = 0;
    for (const auto c : cells) sum += c;
    // Spread -sum over the cells: |sum| is at most about one step per cell.
    const auto n = static_cast<int128>(cells.size());
    const int128 each = sum / n;
    int128 rest = sum % n;
    for (auto& c : cells) {
      c -= each;
      if (rest > 0) {
        --c;
        --rest;
      } else if (rest < 0) {
        ++c;
        ++rest;
      }
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = std::ldexp(static_cast<double>(cells[i]), step);
    }
    return out;
  }

  std::span<const Atom> atoms_;
  double lambda_;
  std::vector<Atom> good_;
  std::vector<BadPart> bad_;
};

}  // namespace

DyadicInterval DyadicInterval::parent() const {
  return {scale + 1, position >> 1};
}

DyadicInterval DyadicInterval::containing(Site x, int scale) {
  return {scale, x >> scale};
}

std::int64_t CZDecomposition::carleson_sum() const {
  std::int64_t sum = 0;
  for (const auto& part : bad) sum += part.interval.length();
  return sum;
}

FiniteFunction CZDecomposition::bad_below_scale(int max_scale) const {
  std::vector<Atom> atoms;
  for (const auto& part : bad) {
    if (part.interval.scale >= max_scale) continue;
    atoms.insert(atoms.end(), part.b.atoms().begin(), part.b.atoms().end());
  }
  return FiniteFunction(std::move(atoms));
}

CZDecomposition cz_decompose(const FiniteFunction& phi, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("CZ level must be positive and finite");
  }
  CZDecomposition cz;
  cz.lambda = lambda;
  if (phi.empty()) return cz;

  const double total = phi.l1_norm();
  if (total / lambda > kMaxCarlesonPoints) {
    throw ResourceError("CZ level too small: ||phi||_1 / lambda = " +
                        std::to_string(total / lambda));
  }
  // At this scale every dyadic average is <= lambda, so the recursion can
  // start from the intervals of this scale that meet the support.
  int top = 0;
  while (std::ldexp(lambda, top) < total) ++top;

  const auto atoms = phi.atoms();
  Decomposer decomposer(atoms, lambda);
  std::size_t lo = 0;
  while (lo < atoms.size()) {
    const std::int64_t position = atoms[lo].site >> top;
    std::size_t hi = lo;
    while (hi < atoms.size() && (atoms[hi].site >> top) == position) ++hi;
    decomposer.visit(top, position, lo, hi);
    lo = hi;
  }
  cz.good = FiniteFunction(decomposer.take_good());
  cz.bad = decomposer.take_bad();
  return cz;
}

CZInvariants check_cz_invariants(const FiniteFunction& phi,
                                 const CZDecomposition& cz) {
  CZInvariants inv;
  const double lambda = cz.lambda;

  std::vector<Atom> all_bad;
  for (std::size_t i = 0; i < cz.bad.size(); ++i) {
    const auto& part = cz.bad[i];
    ExactSum sum_re;
    ExactSum sum_im;
    CompensatedSum mass;
    for (const auto& a : part.b.atoms()) {
      sum_re.add(a.weight.real());
      sum_im.add(a.weight.imag());
      mass.add(std::abs(a.weight));
      if (!part.interval.contains(a.site)) inv.supports_inside = false;
      all_bad.push_back(a);
    }
    if (!sum_re.is_zero() || !sum_im.is_zero()) inv.mean_zero = false;
    const auto len = static_cast<double>(part.interval.length());
    if (mass.value() > 4.0 * lambda * len) inv.bad_mass_bound = false;
    if (mass.value() > lambda * len) inv.tight_bad_mass_bound = false;
    if (i > 0 && cz.bad[i - 1].interval.end() > part.interval.begin()) {
      inv.disjoint = false;
    }
  }
  // Pairwise inner products: only parts sharing a site can contribute, and
  // none can when the intervals are disjoint and hold their parts.
  std::map<std::pair<std::size_t, std::size_t>, Weight> products;
  const bool shared_sites_possible = !(inv.disjoint && inv.supports_inside);
  std::map<Site, std::size_t> owner;
  for (std::size_t i = 0; shared_sites_possible && i < cz.bad.size(); ++i) {
    for (const auto& a : cz.bad[i].b.atoms()) {
      const auto [it, inserted] = owner.emplace(a.site, i);
      if (!inserted) {
        const auto j = it->second;
        products[{j, i}] += cz.bad[j].b.at(a.site) * std::conj(a.weight);
      }
    }
  }
  for (const auto& [pair, value] : products) {
    if (value != Weight{}) inv.orthogonal = false;
  }

  inv.g_inf_norm = cz.good.sup_norm();
  inv.g_bound = inv.g_inf_norm <= 2.0 * lambda;
  inv.tight_g_bound = inv.g_inf_norm <= lambda;
  inv.carleson_sum = cz.carleson_sum();
  inv.carleson_bound =
      static_cast<double>(inv.carleson_sum) * lambda <= phi.l1_norm();

  const FiniteFunction rebuilt = cz.good + FiniteFunction(std::move(all_bad));
  inv.reconstruction_error = (rebuilt - phi).sup_norm();
  return inv;
}

std::string cz_report_json(const FiniteFunction& phi,
                           const CZDecomposition& cz) {
  const auto inv = check_cz_invariants(phi, cz);
  nlohmann::json j;
  j["lambda"] = cz.lambda;
  j["n_bad_intervals"] = cz.bad.size();
  j["carleson_sum"] = inv.carleson_sum;
  j["g_inf_norm"] = inv.g_inf_norm;
  j["reconstruction_error"] = inv.reconstruction_error;
  return j.dump(2);
}

}  // namespace ergosub
