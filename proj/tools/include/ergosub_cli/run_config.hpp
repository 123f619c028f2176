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
#include <string>
#include <vector>

namespace ergosub::cli {

enum class Command {
  kFourier,
  kTriviality,
  kSelect,
  kCzCheck,
  kMaximal,
  kWeylAudit,
  kThresholdAudit,
  kResidues,
  kDynsysTrace,
};

[[nodiscard]] const char* command_name(Command command);
// Throws ConfigError on an unknown name.
[[nodiscard]] Command parse_command(const std::string& name);
[[nodiscard]] const std::vector<Command>& all_commands();

// Everything a run depends on. Each subcommand reads the fields it needs and
// ignores the rest; the defaults below are the documented defaults.
struct RunConfig {
  Command command = Command::kFourier;
  // Measure family descriptor (fourier, triviality, select, maximal,
  // dynsys-trace).
  std::string family = "squares";
  // Family indices / N values.
  std::vector<std::int64_t> n = {64};
  // Subsequence length for select.
  std::int64_t k = 2;
  // Search cap for select.
  std::int64_t cap = 10'000;
  // Sup-bracket tolerance.
  double tol = 1e-3;
  // Grid size: fourier samples, weyl-audit beta grid, threshold-audit
  // uniform beta grid.
  std::int64_t grid = 1024;
  // Largest FFT grid / number of point evaluations for a sup bracket.
  std::int64_t max_grid = std::int64_t{1} << 24;
  std::uint64_t seed = 1;
  // Random phi count (cz-check, maximal) or sample points (dynsys-trace).
  std::int64_t samples = 16;
  // Atoms per random phi and the half-width of their support.
  std::int64_t atoms = 64;
  std::int64_t support = 1024;
  // CZ / weak (1,1) levels; empty means the default dyadic levels.
  std::vector<double> lambdas;
  // Perturbation for threshold-audit and residues.
  std::string rho = "power:0.25";
  // Also run the per-block arc audit at this beta (threshold-audit); < 0
  // disables it.
  double arc_beta = -1.0;
  std::int64_t modulus = 15;
  double window = 0.5;
  // "golden" or "cyclic:<M>".
  std::string system = "golden";
  // "trig:<m>", "indicator:<lo>:<hi>" or "table:<v0>,<v1>,...".
  std::string observable = "trig:1";
  // Output directory.
  std::string out = "ergosub-out";
  // Worker threads; 0 means all available cores. Results do not depend on it.
  unsigned threads = 0;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

[[nodiscard]] std::string config_to_json(const RunConfig& config);
// Missing keys keep their defaults; unknown keys are a ConfigError.
[[nodiscard]] RunConfig config_from_json(const std::string& text);

}  // namespace ergosub::cli
