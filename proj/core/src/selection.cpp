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

#include "ergosub/selection.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "ergosub/frequency.hpp"

namespace ergosub {
namespace {

constexpr std::int64_t kMaxProbeDenominator = 16;
// Slack for rounding in the probe sums; far below any bound that matters.
constexpr double kProbeSlack = 1e-12;

int ceil_log2(Site radius) {
  if (radius <= 1) return 0;
  return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(radius - 1)));
}

struct Probe {
  std::int64_t p = 0;
  std::int64_t q = 1;
  double factor = 0.0;  // |1 - e(p/q)|
};

std::vector<Probe> rational_probes(std::int64_t max_q) {
  std::vector<Probe> probes;
  for (std::int64_t q = 2; q <= max_q; ++q) {
    for (std::int64_t p = 1; p < q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      probes.push_back(
          {p, q, std::abs(1.0 - Frequency::ratio(p, q).character(1))});
    }
  }
  return probes;
}

// Residue counts of term(k) mod q for k <= n, kept for q <= 16. The transform
// at p/q is then (1/n) sum_r count[r] e(p r / q) with no per-atom work.
class ProbeScreen {
 public:
  explicit ProbeScreen(const MeasureFamily& family)
      : family_(family), probes_(rational_probes(kMaxProbeDenominator)) {
    for (std::int64_t q = 2; q <= kMaxProbeDenominator; ++q) {
      counts_[q].assign(static_cast<std::size_t>(q), 0);
      roots_[q].resize(static_cast<std::size_t>(q));
      for (std::int64_t r = 0; r < q; ++r) {
        roots_[q][r] = Frequency::ratio(r, q).character(1);
      }
    }
  }

  // Largest lower bound on the functional of mu_n over all probes.
  double lower_bound(std::int64_t n) {
    while (added_ < n) {
      ++added_;
      const Site t = family_.term(added_);
      for (std::int64_t q = 2; q <= kMaxProbeDenominator; ++q) {
        std::int64_t r = t % q;
        if (r < 0) r += q;
        ++counts_[q][r];
      }
    }
    const double w = uniform_weight(n);
    double best = 0.0;
    for (const auto& probe : probes_) {
      std::complex<double> sum = 0.0;
      const auto& counts = counts_[probe.q];
      const auto& roots = roots_[probe.q];
      for (std::int64_t r = 0; r < probe.q; ++r) {
        if (counts[r] != 0) {
          sum += static_cast<double>(counts[r]) * roots[(probe.p * r) % probe.q];
        }
      }
      best = std::max(best, probe.factor * w * std::abs(sum));
    }
    return std::max(0.0, best - kProbeSlack);
  }

 private:
  const MeasureFamily& family_;
  std::vector<Probe> probes_;
  std::int64_t added_ = 0;
  std::array<std::vector<std::int64_t>, kMaxProbeDenominator + 1> counts_;
  std::array<std::vector<std::complex<double>>, kMaxProbeDenominator + 1> roots_;
};

// Families with n-dependent weights: evaluate the probes directly, both at
// p/q and shifted by the rotation n^{-1/2}.
double direct_lower_bound(const MeasureFamily& family, std::int64_t n) {
  static const auto probes = rational_probes(4);
  const auto mu = family.generate(n);
  const double shift = 1.0 / std::sqrt(static_cast<double>(n));
  double best = 0.0;
  for (const auto& probe : probes) {
    best = std::max(best, triviality_at(mu, Frequency::ratio(probe.p, probe.q)));
    const auto shifted = Frequency::real(
        static_cast<double>(probe.p) / static_cast<double>(probe.q) - shift);
    best = std::max(best, triviality_at(mu, shifted));
  }
  return std::max(0.0, best - kProbeSlack);
}

double bracket_tol(double sup_tol, std::optional<double> bound) {
  return bound ? std::min(sup_tol, *bound / 2.0) : sup_tol;
}

}  // namespace

int s_of(const MeasureFamily& family, std::int64_t n) {
  return ceil_log2(family.support_radius(n));
}

std::int64_t n_of_s(const MeasureFamily& family, int s,
                    std::int64_t search_cap) {
  if (s < 0) return 1;
  const auto exceeds = [&](std::int64_t n) {
    return s >= 62 ? false : family.support_radius(n) > (Site{1} << s);
  };
  if (!exceeds(search_cap)) {
    throw ResourceError("no n <= " + std::to_string(search_cap) +
                        " has S(n) > " + std::to_string(s));
  }
  std::int64_t lo = 1;
  std::int64_t hi = search_cap;
  if (exceeds(lo)) return lo;
  // Invariant: !exceeds(lo), exceeds(hi).
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (exceeds(mid) ? hi : lo) = mid;
  }
  return hi;
}

TailSplit tail_split(const WeightedMeasure& mu, Site radius) {
  std::vector<Atom> inner;
  std::vector<Atom> outer;
  for (const auto& a : mu.atoms()) {
    (a.site >= -radius && a.site <= radius ? inner : outer).push_back(a);
  }
  return {WeightedMeasure(FiniteFunction(std::move(inner))),
          WeightedMeasure(FiniteFunction(std::move(outer)))};
}

double selection_bound(int s_prev, int k) {
  return std::ldexp(1.0, -2 * s_prev - 2 * k);
}

SelectionState select_subsequence(const MeasureFamily& family,
                                  const SelectionOptions& options) {
  if (options.count < 1) throw ConfigError("selection count must be >= 1");
  if (options.search_cap < 1) throw ConfigError("search cap must be >= 1");
  if (!(options.sup_tol > 0.0)) throw ConfigError("sup_tol must be positive");

  SelectionState state;
  state.family = family.descriptor();

  // The first pick is unconstrained.
  state.chosen.push_back(1);
  state.s_values.push_back(s_of(family, 1));
  state.achieved_sups.push_back(
      triviality_sup(family.generate(1), options.sup_tol, options.max_grid).upper);
  state.bounds.emplace_back();

  std::optional<ProbeScreen> screen;
  if (family.is_prefix_average()) screen.emplace(family);

  for (int k = 2; k <= options.count; ++k) {
    const std::int64_t prev = state.chosen.back();
    const int s_prev = state.s_values.back();
    const double bound = selection_bound(s_prev, k);
    const double tol = bracket_tol(options.sup_tol, bound);

    double best_lower = std::numeric_limits<double>::infinity();
    std::int64_t best_index = 0;
    const auto stall = [&](std::int64_t searched_to) {
      return SelectionStalled(
          "selection stalled at step " + std::to_string(k) + ": no n <= " +
              std::to_string(options.search_cap) + " reaches bound " +
              std::to_string(bound) + " (best lower bound " +
              std::to_string(best_lower) + " at n = " +
              std::to_string(best_index) + ")",
          state, k, bound, best_lower, best_index, searched_to);
    };

    std::int64_t start = 0;
    try {
      start = std::max(prev + 1, n_of_s(family, s_prev, options.search_cap));
    } catch (const ResourceError&) {
      throw stall(options.search_cap);
    }

    bool found = false;
    for (std::int64_t n = start; n <= options.search_cap; ++n) {
      const double lower =
          screen ? screen->lower_bound(n) : direct_lower_bound(family, n);
      if (lower < best_lower) {
        best_lower = lower;
        best_index = n;
      }
      if (lower > bound) continue;
      const auto bracket = triviality_sup(family.generate(n), tol, options.max_grid);
      if (bracket.lower < best_lower) {
        best_lower = bracket.lower;
        best_index = n;
      }
      if (bracket.upper <= bound) {
        state.chosen.push_back(n);
        state.s_values.push_back(s_of(family, n));
        state.achieved_sups.push_back(bracket.upper);
        state.bounds.emplace_back(bound);
        found = true;
        break;
      }
    }
    if (!found) throw stall(options.search_cap);
  }
  return state;
}

bool SelectionReport::ok() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const SelectionCheck& c) { return c.ok; });
}

SelectionReport audit_selection(const MeasureFamily& family,
                                const SelectionState& state, double sup_tol,
                                std::size_t max_grid) {
  const std::size_t count = state.chosen.size();
  if (state.s_values.size() != count || state.achieved_sups.size() != count) {
    throw ConfigError("selection state has mismatched list lengths");
  }
  SelectionReport report;
  int s_prev = 0;
  for (std::size_t i = 0; i < count; ++i) {
    SelectionCheck check;
    check.k = static_cast<int>(i + 1);
    check.index = state.chosen[i];
    if (check.index < 1) throw ConfigError("selection index must be >= 1");
    check.s_value = s_of(family, check.index);
    const auto mu = family.generate(check.index);
    check.radius = mu.radius();
    check.support_ok = check.s_value == state.s_values[i] &&
                       check.radius <= family.support_radius(check.index) &&
                       (check.s_value >= 62 ||
                        check.radius <= (Site{1} << check.s_value));
    check.s_increasing = i == 0 || (check.index > state.chosen[i - 1] &&
                                    check.s_value > s_prev);
    if (i > 0) check.bound = selection_bound(s_prev, check.k);
    check.stated_sup = state.achieved_sups[i];
    check.recomputed = triviality_sup(mu, bracket_tol(sup_tol, check.bound), max_grid);
    check.stated_sup_valid = check.stated_sup >= check.recomputed.lower;
    if (check.bound) {
      check.margin =
          *check.bound - std::max(check.stated_sup, check.recomputed.upper);
    }
    check.ok = check.support_ok && check.s_increasing &&
               check.stated_sup_valid && (!check.margin || *check.margin >= 0.0);
    report.checks.push_back(check);
    s_prev = check.s_value;
  }
  return report;
}

SelectionReport verify_selection(const MeasureFamily& family,
                                 const SelectionState& state, double sup_tol,
                                 std::size_t max_grid) {
  auto report = audit_selection(family, state, sup_tol, max_grid);
  for (const auto& c : report.checks) {
    if (c.ok) continue;
    std::string reason;
    if (!c.support_ok) reason = "support or S value mismatch";
    else if (!c.s_increasing) reason = "S(n_k) not strictly increasing";
    else if (!c.stated_sup_valid) reason = "stated sup below recomputed lower bracket";
    else reason = "sup exceeds bound by " + std::to_string(-*c.margin);
    throw VerificationFailure("selection check failed at k = " +
                              std::to_string(c.k) + " (n = " +
                              std::to_string(c.index) + "): " + reason);
  }
  return report;
}

std::string selection_to_json(const SelectionState& state) {
  nlohmann::json j;
  j["family"] = state.family;
  j["chosen"] = state.chosen;
  j["support_scales"] = state.s_values;
  j["achieved_sups"] = state.achieved_sups;
  auto bounds = nlohmann::json::array();
  for (const auto& b : state.bounds) {
    bounds.push_back(b ? nlohmann::json(*b) : nlohmann::json(nullptr));
  }
  j["bounds"] = bounds;
  return j.dump(2);
}

SelectionState selection_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    SelectionState state;
    state.family = j.at("family").get<std::string>();
    state.chosen = j.at("chosen").get<std::vector<std::int64_t>>();
    state.s_values = j.at("support_scales").get<std::vector<int>>();
    state.achieved_sups = j.at("achieved_sups").get<std::vector<double>>();
    for (const auto& b : j.at("bounds")) {
      state.bounds.push_back(b.is_null() ? std::nullopt
                                         : std::optional(b.get<double>()));
    }
    return state;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad selection JSON: ") + e.what());
  }
}

std::string selection_report_json(const SelectionReport& report) {
  auto checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    nlohmann::json j;
    j["k"] = c.k;
    j["index"] = c.index;
    j["S"] = c.s_value;
    j["radius"] = c.radius;
    j["bound"] = c.bound ? nlohmann::json(*c.bound) : nlohmann::json(nullptr);
    j["stated_sup"] = c.stated_sup;
    j["recomputed_lower"] = c.recomputed.lower;
    j["recomputed_upper"] = c.recomputed.upper;
    j["margin"] = c.margin ? nlohmann::json(*c.margin) : nlohmann::json(nullptr);
    j["support_ok"] = c.support_ok;
    j["s_increasing"] = c.s_increasing;
    j["stated_sup_valid"] = c.stated_sup_valid;
    j["ok"] = c.ok;
    checks.push_back(j);
  }
  nlohmann::json out;
  out["ok"] = report.ok();
  out["checks"] = checks;
  return out.dump(2);
}

}  // namespace ergosub
