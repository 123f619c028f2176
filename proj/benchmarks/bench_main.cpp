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

#include <cstdint>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "ergosub/cz.hpp"
#include "ergosub/families.hpp"
#include "ergosub/fourier.hpp"
#include "ergosub/weyl.hpp"

namespace {

using namespace ergosub;

FiniteFunction random_function(std::int64_t atoms, std::int64_t support) {
  std::mt19937_64 rng(7);
  std::vector<Atom> out;
  for (std::int64_t i = 0; i < atoms; ++i) {
    const auto site = static_cast<Site>(rng() % static_cast<std::uint64_t>(2 * support + 1)) -
                      support;
    out.push_back({site, Weight{std::ldexp(static_cast<double>(rng() >> 11), -53), 0.0}});
  }
  return FiniteFunction(std::move(out));
}

void fourier_grid_direct(benchmark::State& state) {
  const auto mu = squares_family(state.range(0));
  const auto grid = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fourier_grid(mu, grid, GridMethod::kDirect));
  }
}
BENCHMARK(fourier_grid_direct)->Args({64, 1024})->Args({1024, 1024})->Args({1024, 8192});

void fourier_grid_fast(benchmark::State& state) {
  const auto mu = squares_family(state.range(0));
  const auto grid = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fourier_grid(mu, grid, GridMethod::kFast));
  }
}
BENCHMARK(fourier_grid_fast)->Args({64, 1024})->Args({1024, 1024})->Args({1024, 8192});

void weyl_sum_real(benchmark::State& state) {
  const auto n = state.range(0);
  double beta = 0.1234567;
  for (auto _ : state) {
    benchmark::DoNotOptimize(weyl_sum(n, beta));
    beta += 1e-9;
  }
}
BENCHMARK(weyl_sum_real)->Range(64, 1 << 16);

void cz_decompose_random(benchmark::State& state) {
  const auto phi = random_function(state.range(0), std::int64_t{1} << 14);
  double sup = 0;
  for (const auto& a : phi.atoms()) sup = std::max(sup, std::abs(a.weight));
  for (auto _ : state) {
    benchmark::DoNotOptimize(cz_decompose(phi, sup / 16));
  }
}
BENCHMARK(cz_decompose_random)->Arg(64)->Arg(1024);

void triviality_sup_perturbed(benchmark::State& state) {
  const auto mu = perturbed_squares(RhoSpec::power(0.25), state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(triviality_sup(mu, 1e-2));
  }
}
BENCHMARK(triviality_sup_perturbed)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
