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

#include "ergosub/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ergosub/errors.hpp"
#include "ergosub/measure_io.hpp"
#include "ergosub/parallel.hpp"
#include "ergosub/summation.hpp"

namespace ergosub {

FiniteFunction maximal_function(const FiniteFunction& phi,
                                const std::vector<WeightedMeasure>& measures) {
  std::vector<FiniteFunction> convolved(measures.size());
  parallel_for(measures.size(), [&](std::size_t i) {
    convolved[i] = convolve(measures[i], phi);
  });
  std::vector<Atom> values;
  for (const auto& f : convolved) {
    for (const auto& a : f.atoms()) values.push_back({a.site, std::abs(a.weight)});
  }
  std::sort(values.begin(), values.end(), [](const Atom& a, const Atom& b) {
    return a.site != b.site ? a.site < b.site : a.weight.real() > b.weight.real();
  });
  // Keep the first (largest) entry per site.
  values.erase(std::unique(values.begin(), values.end(),
                           [](const Atom& a, const Atom& b) {
                             return a.site == b.site;
                           }),
               values.end());
  return FiniteFunction(std::move(values));
}

std::vector<double> default_lambda_grid(const FiniteFunction& phi) {
  if (phi.empty()) return {};
  const double top = phi.sup_norm();
  const double bottom = std::ldexp(phi.l1_norm(), -20);
  std::vector<double> grid{top};
  for (double lambda = top / 2.0; lambda >= bottom; lambda /= 2.0) {
    grid.push_back(lambda);
  }
  return grid;
}

Weak11Result weak11_profile(const FiniteFunction& phi,
                            const std::vector<WeightedMeasure>& measures,
                            const std::vector<double>& lambda_grid) {
  if (phi.empty()) throw ConfigError("weak (1,1) ratio needs a nonzero phi");
  const auto maximal = maximal_function(phi, measures);
  std::vector<double> values;
  values.reserve(maximal.size());
  for (const auto& a : maximal.atoms()) values.push_back(a.weight.real());
  std::sort(values.begin(), values.end());

  const double norm = phi.l1_norm();
  Weak11Result result;
  for (const double lambda : lambda_grid) {
    if (!(lambda > 0.0)) throw ConfigError("levels must be positive");
    const auto above = values.end() - std::upper_bound(values.begin(),
                                                       values.end(), lambda);
    LevelRow row{lambda, static_cast<std::int64_t>(above), 0.0};
    row.ratio = lambda * static_cast<double>(row.levelset_count) / norm;
    result.ratio = std::max(result.ratio, row.ratio);
    result.rows.push_back(row);
  }
  return result;
}

double weak11_ratio(const FiniteFunction& phi,
                    const std::vector<WeightedMeasure>& measures,
                    const std::vector<double>& lambda_grid) {
  return weak11_profile(phi, measures, lambda_grid).ratio;
}

std::string weak11_csv(const Weak11Result& result) {
  std::string out = "lambda,levelset_count,ratio\n";
  for (const auto& row : result.rows) {
    out += format_number(row.lambda) + "," +
           std::to_string(row.levelset_count) + "," + format_number(row.ratio) +
           "\n";
  }
  return out;
}

WeightedMeasure sigma_n(int s_prev, int n) {
  const int exponent = s_prev + n;
  if (s_prev < 0 || n < 0) throw ConfigError("sigma_n needs s_prev, n >= 0");
  if (exponent > kMaxSigmaExponent) {
    throw ResourceError("sigma_n support 2^" + std::to_string(exponent) +
                        " exceeds cap 2^" + std::to_string(kMaxSigmaExponent));
  }
  const std::vector<double> dense(std::size_t{1} << exponent,
                                  std::ldexp(1.0, -exponent));
  return WeightedMeasure(FiniteFunction::from_dense(1, dense));
}

SigmaDeficit sigma_deficit_sup(const WeightedMeasure& mu, int s_prev, int n,
                               double tol, std::size_t max_grid) {
  const auto sigma = sigma_n(s_prev, n);
  const int exponent = s_prev + n;
  SigmaDeficit result;
  result.tol = tol;
  result.target = std::ldexp(1.0, -exponent);
  result.triviality = triviality_sup(mu, tol, max_grid);
  result.triviality_bound = std::ldexp(result.triviality.upper, exponent);
  if (mu.size() == 0) return result;

  SupProblem problem;
  problem.sample = [&](std::size_t grid) {
    auto values = fourier_grid(mu, grid);
    const auto sigma_hat = fourier_grid(sigma, grid);
    for (std::size_t m = 0; m < grid; ++m) values[m] *= 1.0 - sigma_hat[m];
    return values;
  };
  problem.at = [&](const Frequency& gamma) {
    return fourier_at(mu, gamma) * (1.0 - fourier_at(sigma, gamma));
  };
  const double length = std::ldexp(1.0, exponent);
  const double radius = static_cast<double>(mu.radius());
  problem.lipschitz = 2.0 * std::numbers::pi * mu.total_variation() *
                      (2.0 * radius + (length + 1.0) / 2.0);
  // mu_hat (1 - sigma_hat) has frequencies in [min_site, max_site + 2^e].
  const double span = static_cast<double>(mu.density().max_site() -
                                          mu.density().min_site()) +
                      length;
  problem.half_span = std::ceil(span / 2.0);
  problem.magnitude = 2.0 * mu.total_variation();
  result.deficit = bracket_sup(problem, tol, max_grid);
  return result;
}

std::vector<E1E2Row> e1_e2_diagnostics(const FiniteFunction& phi,
                                       const SelectionState& state,
                                       const MeasureFamily& family,
                                       double lambda, double tol,
                                       std::size_t max_grid) {
  const auto cz = cz_decompose(phi, lambda);
  std::vector<E1E2Row> rows(state.chosen.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    E1E2Row& row = rows[i];
    row.k = static_cast<int>(i + 1);
    row.index = state.chosen[i];
    row.s_prev = i == 0 ? 0 : state.s_values.at(i - 1);
    const auto mu = family.generate(row.index);
    const auto sigma = sigma_n(row.s_prev, row.k);
    const auto mu_sigma = convolve(mu, sigma);

    CompensatedSum bound;
    for (const auto& part : cz.bad) {
      if (part.interval.scale >= row.s_prev) continue;
      ++row.bad_terms;
      const double term_bound = std::ldexp(
          part.b.l1_norm(), -row.s_prev - row.k + part.interval.scale + 1);
      bound.add(term_bound);
      const double term = convolve(mu_sigma, part.b).l1_norm();
      if (term > term_bound * (1.0 + 1e-9)) row.e1_terms_ok = false;
    }
    const auto bad = cz.bad_below_scale(row.s_prev);
    row.e1_value = convolve(mu_sigma, bad).l1_norm();
    row.e1_bound = bound.value();

    const FiniteFunction difference = mu.density() - mu_sigma.density();
    row.e2_value = convolve(difference, bad).l2_norm_squared();
    const double bad_energy = bad.l2_norm_squared();
    row.e2_bound = std::ldexp(bad_energy, -2 * (row.s_prev + row.k));
    row.deficit = sigma_deficit_sup(mu, row.s_prev, row.k, tol, max_grid).deficit;
    row.e2_unconditional_bound = row.deficit.upper * row.deficit.upper * bad_energy;
  });
  return rows;
}

}  // namespace ergosub
