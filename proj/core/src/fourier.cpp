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

#include "ergosub/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "ergosub/errors.hpp"
#include "ergosub/parallel.hpp"
#include "ergosub/summation.hpp"
#include "wide_int.hpp"

namespace ergosub {
namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};

class InverseDft {
 public:
  explicit InverseDft(std::size_t n)
      : n_(n),
        buffer_(static_cast<fftw_complex*>(
            fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!buffer_) throw ResourceError("fftw_malloc failed for grid " +
                                      std::to_string(n));
    std::fill_n(reinterpret_cast<double*>(buffer_.get()), 2 * n, 0.0);
    std::lock_guard lock(planner_mutex());
    // FFTW_ESTIMATE keeps plan selection independent of timing, so repeated
    // runs produce bit-identical output.
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), buffer_.get(),
                             buffer_.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!plan_) throw ResourceError("fftw plan creation failed");
  }
  ~InverseDft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  InverseDft(const InverseDft&) = delete;
  InverseDft& operator=(const InverseDft&) = delete;

  fftw_complex* data() { return buffer_.get(); }
  void execute() { fftw_execute(plan_); }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::unique_ptr<fftw_complex, FftwFree> buffer_;
  fftw_plan plan_ = nullptr;
};

std::int64_t residue(Site site, std::size_t grid) {
  const auto g = static_cast<std::int64_t>(grid);
  std::int64_t r = site % g;
  return r < 0 ? r + g : r;
}

std::vector<std::complex<double>> grid_direct(const FiniteFunction& f,
                                              std::size_t grid) {
  std::vector<std::int64_t> residues;
  residues.reserve(f.size());
  for (const auto& a : f.atoms()) residues.push_back(residue(a.site, grid));
  const auto g = static_cast<detail::int128>(grid);
  std::vector<std::complex<double>> out(grid);
  parallel_for(grid, [&](std::size_t m) {
    ComplexCompensatedSum sum;
    const auto atoms = f.atoms();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      auto t = static_cast<detail::int128>(residues[i]) * static_cast<detail::int128>(m) % g;
      if (2 * t >= g) t -= g;
      sum.add(atoms[i].weight *
              unit_character(static_cast<double>(static_cast<std::int64_t>(t)) /
                             static_cast<double>(grid)));
    }
    out[m] = sum.value();
  });
  return out;
}

std::vector<std::complex<double>> grid_fast(const FiniteFunction& f,
                                            std::size_t grid) {
  if (grid > static_cast<std::size_t>(std::numeric_limits<int>::max())) {
    throw ResourceError("grid too large for FFT: " + std::to_string(grid));
  }
  // Fold sites into residue bins; each bin is summed with compensation.
  std::vector<std::pair<std::int64_t, std::size_t>> order;
  order.reserve(f.size());
  const auto atoms = f.atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    order.emplace_back(residue(atoms[i].site, grid), i);
  }
  std::sort(order.begin(), order.end());

  InverseDft dft(grid);
  fftw_complex* data = dft.data();
  std::size_t i = 0;
  while (i < order.size()) {
    const auto r = order[i].first;
    ComplexCompensatedSum bin;
    while (i < order.size() && order[i].first == r) {
      bin.add(atoms[order[i].second].weight);
      ++i;
    }
    const auto w = bin.value();
    data[r][0] = w.real();
    data[r][1] = w.imag();
  }
  dft.execute();
  std::vector<std::complex<double>> out(grid);
  for (std::size_t m = 0; m < grid; ++m) out[m] = {data[m][0], data[m][1]};
  return out;
}

std::size_t next_pow2(double value) {
  if (!(value < 9.0e18)) return std::numeric_limits<std::size_t>::max();
  const auto v = static_cast<std::size_t>(std::ceil(std::max(value, 1.0)));
  return std::bit_ceil(v);
}

// Branch and bound over the cells of the first grid. A cell is dropped once
// its upper bound cannot lift the bracket more than tol above the best value
// seen; the others are bisected at exact rational midpoints.
SupBracket refine_cells(const SupProblem& problem,
                        const std::vector<std::complex<double>>& values,
                        SupBracket bracket, double best, double tol,
                        double allowance, std::size_t max_grid) {
  const double pi = std::numbers::pi;
  const std::size_t grid = values.size();
  const double sup_bound = bracket.upper;
  const double curvature = pi * problem.half_span * sup_bound;
  const auto cell_upper = [&](double a, double b, double h) {
    const double c = curvature * h;
    const double by_curvature =
        std::sqrt(std::max(a * a, b * b) + 2.0 * c * c);
    const double by_lipschitz = (a + b) / 2.0 + problem.lipschitz * h / 2.0;
    return std::min(by_curvature, by_lipschitz);
  };

  struct Cell {
    std::int64_t numerator;  // left end = numerator / (grid 2^depth)
    int depth;
    double left;
    double right;
  };
  constexpr int kMaxDepth = 30;
  double dropped = 0.0;
  std::vector<Cell> live;
  const double h0 = 1.0 / static_cast<double>(grid);
  for (std::size_t m = 0; m < grid; ++m) {
    const double a = std::abs(values[m]);
    const double b = std::abs(values[(m + 1) % grid]);
    const double u = cell_upper(a, b, h0);
    if (u <= best - 2.0 * allowance + tol) {
      dropped = std::max(dropped, u);
    } else {
      live.push_back({static_cast<std::int64_t>(m), 0, a, b});
    }
  }

  std::size_t evaluations = 0;
  while (!live.empty()) {
    evaluations += live.size();
    if (evaluations > max_grid || live.front().depth >= kMaxDepth) {
      throw ResourceError("sup bracket to tolerance " + std::to_string(tol) +
                          " needs more than " + std::to_string(max_grid) +
                          " point evaluations");
    }
    std::vector<double> mids(live.size());
    parallel_for(live.size(), [&](std::size_t i) {
      const auto& c = live[i];
      const auto denominator = static_cast<std::int64_t>(grid) << (c.depth + 1);
      mids[i] = std::abs(problem.at(Frequency::ratio(2 * c.numerator + 1, denominator)));
    });
    for (std::size_t i = 0; i < live.size(); ++i) {
      if (mids[i] > best) {
        best = mids[i];
        bracket.argmax = static_cast<double>(2 * live[i].numerator + 1) /
                         std::ldexp(static_cast<double>(grid), live[i].depth + 1);
      }
    }
    std::vector<Cell> next;
    for (std::size_t i = 0; i < live.size(); ++i) {
      const auto& c = live[i];
      const double h = std::ldexp(h0, -(c.depth + 1));
      const Cell halves[2] = {{2 * c.numerator, c.depth + 1, c.left, mids[i]},
                              {2 * c.numerator + 1, c.depth + 1, mids[i], c.right}};
      for (const auto& half : halves) {
        const double u = cell_upper(half.left, half.right, h);
        if (u <= best - 2.0 * allowance + tol) {
          dropped = std::max(dropped, u);
        } else {
          next.push_back(half);
        }
      }
    }
    live = std::move(next);
  }
  bracket.lower = std::max(0.0, best - allowance);
  bracket.upper = std::min(sup_bound, std::max(dropped, best) + allowance);
  return bracket;
}

}  // namespace

std::complex<double> fourier_at(const FiniteFunction& f,
                                const Frequency& gamma) {
  ComplexCompensatedSum sum;
  for (const auto& a : f.atoms()) sum.add(a.weight * gamma.character(a.site));
  return sum.value();
}

std::vector<std::complex<double>> fourier_grid(const FiniteFunction& f,
                                               std::size_t grid,
                                               GridMethod method) {
  if (grid < 2) throw ConfigError("fourier grid size must be >= 2");
  if (method == GridMethod::kAuto) {
    const double log_grid = std::log2(static_cast<double>(grid));
    method = static_cast<double>(f.size()) > 2.0 * log_grid + 8.0
                 ? GridMethod::kFast
                 : GridMethod::kDirect;
  }
  return method == GridMethod::kFast ? grid_fast(f, grid)
                                     : grid_direct(f, grid);
}

SupBracket bracket_sup(const SupProblem& problem, double tol,
                       std::size_t max_grid) {
  if (!(tol > 0.0)) throw ConfigError("sup tolerance must be positive");
  const double pi = std::numbers::pi;
  const double degree = problem.half_span;
  std::size_t grid = next_pow2(std::max(64.0, 4.0 * degree + 1.0));
  if (grid > max_grid) {
    throw ResourceError("sup bracket needs grid " + std::to_string(grid) +
                        " > cap " + std::to_string(max_grid));
  }
  while (true) {
    const auto values = problem.sample(grid);
    double best = 0.0;
    std::size_t best_m = 0;
    for (std::size_t m = 0; m < values.size(); ++m) {
      const double v = std::abs(values[m]);
      if (v > best) {
        best = v;
        best_m = m;
      }
    }
    const double g = static_cast<double>(grid);
    const double allowance = 16.0 * std::numeric_limits<double>::epsilon() *
                             (1.0 + std::log2(g)) * problem.magnitude;
    const double x = pi * degree / g;
    const double global = std::min(best + problem.lipschitz / (2.0 * g),
                                   best / std::sqrt(1.0 - x * x));
    SupBracket bracket;
    bracket.lower = std::max(0.0, best - allowance);
    bracket.upper = global + allowance;
    bracket.grid_size = grid;
    bracket.argmax = static_cast<double>(best_m) / g;
    if (bracket.width() <= tol) return bracket;

    if (tol <= 2.0 * allowance) {
      throw ResourceError("sup tolerance " + std::to_string(tol) +
                          " is below the floating-point allowance");
    }
    if (problem.at) {
      return refine_cells(problem, values, bracket, best, tol, allowance,
                          max_grid);
    }
    const double t = tol - 2.0 * allowance;
    const double by_lipschitz = problem.lipschitz / (2.0 * t);
    const double shrink = best / (best + t);
    const double by_curvature = pi * degree / std::sqrt(1.0 - shrink * shrink);
    std::size_t next = next_pow2(std::min(by_lipschitz, by_curvature));
    next = std::max(next, 2 * grid);
    if (next > max_grid) {
      throw ResourceError("sup bracket to tolerance " + std::to_string(tol) +
                          " needs grid " + std::to_string(next) + " > cap " +
                          std::to_string(max_grid));
    }
    grid = next;
  }
}

SupBracket triviality_sup(const WeightedMeasure& mu, double tol,
                          std::size_t max_grid) {
  if (mu.size() == 0) return {0.0, 0.0, 0, 0.0};
  SupProblem problem;
  problem.sample = [&mu](std::size_t grid) {
    auto values = fourier_grid(mu, grid);
    for (std::size_t m = 0; m < grid; ++m) {
      values[m] *= 1.0 - Frequency::ratio(static_cast<std::int64_t>(m),
                                          static_cast<std::int64_t>(grid))
                             .character(1);
    }
    return values;
  };
  problem.at = [&mu](const Frequency& gamma) {
    return (1.0 - gamma.character(1)) * fourier_at(mu, gamma);
  };
  const double r = static_cast<double>(mu.radius());
  problem.lipschitz =
      2.0 * std::numbers::pi * (1.0 + 2.0 * r) * mu.total_variation();
  // (1 - e(gamma)) mu_hat has frequencies in [min_site, max_site + 1].
  const auto span = static_cast<double>(mu.density().max_site() + 1 -
                                        mu.density().min_site());
  problem.half_span = std::ceil(span / 2.0);
  problem.magnitude = 2.0 * mu.total_variation();
  return bracket_sup(problem, tol, max_grid);
}

double triviality_at(const WeightedMeasure& mu, const Frequency& gamma) {
  return std::abs(1.0 - gamma.character(1)) * std::abs(fourier_at(mu, gamma));
}

}  // namespace ergosub
