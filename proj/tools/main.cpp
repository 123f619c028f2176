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

#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ergosub/errors.hpp"
#include "ergosub/version.hpp"
#include "ergosub_cli/run.hpp"
#include "ergosub_cli/run_config.hpp"

namespace {

using ergosub::cli::Command;
using ergosub::cli::RunConfig;

// Options each subcommand accepts, by field.
enum Field : unsigned {
  kFamily = 1u << 0,
  kN = 1u << 1,
  kK = 1u << 2,
  kCap = 1u << 3,
  kTol = 1u << 4,
  kGrid = 1u << 5,
  kMaxGrid = 1u << 6,
  kSeed = 1u << 7,
  kSamples = 1u << 8,
  kAtoms = 1u << 9,
  kSupport = 1u << 10,
  kLambdas = 1u << 11,
  kRho = 1u << 12,
  kArcBeta = 1u << 13,
  kModulus = 1u << 14,
  kWindow = 1u << 15,
  kSystem = 1u << 16,
  kObservable = 1u << 17,
};

unsigned fields_of(Command command) {
  switch (command) {
    case Command::kFourier: return kFamily | kN | kGrid;
    case Command::kTriviality: return kFamily | kN | kTol | kMaxGrid;
    case Command::kSelect: return kFamily | kK | kCap | kTol | kMaxGrid;
    case Command::kCzCheck: return kSeed | kSamples | kAtoms | kSupport | kLambdas;
    case Command::kMaximal:
      return kFamily | kN | kSeed | kSamples | kAtoms | kSupport | kLambdas;
    case Command::kWeylAudit: return kN | kGrid;
    case Command::kThresholdAudit: return kRho | kN | kGrid | kArcBeta;
    case Command::kResidues: return kRho | kN | kModulus | kWindow;
    case Command::kDynsysTrace:
      return kFamily | kN | kSamples | kSeed | kSystem | kObservable;
  }
  return 0;
}

const char* description_of(Command command) {
  switch (command) {
    case Command::kFourier: return "Sample the transform of mu_n on an m/G grid";
    case Command::kTriviality: return "Bracket sup |(1 - e(g)) mu_n^(g)|";
    case Command::kSelect: return "Greedy subsequence selection with rigorous brackets";
    case Command::kCzCheck: return "Dyadic CZ decomposition invariants on random phi";
    case Command::kMaximal: return "Weak (1,1) level-set ratios of the maximal function";
    case Command::kWeylAudit: return "Weyl sums against 1/sqrt(q) + sqrt(log N)/N^(1/3)";
    case Command::kThresholdAudit: return "Perturbed-squares transform bound audit";
    case Command::kResidues: return "Residue-class densities of k^2 + floor(rho(k))";
    case Command::kDynsysTrace: return "Weighted ergodic averages along a family";
  }
  return "";
}

void add_options(CLI::App& sub, RunConfig& c, unsigned fields) {
  if (fields & kFamily) {
    sub.add_option("--family", c.family,
                   "squares | uniform | rotated[:quadratic|:linear] | "
                   "perturbed:<rho>")
        ->capture_default_str();
  }
  if (fields & kN) {
    sub.add_option("--n", c.n, "Comma-separated indices / N values")
        ->delimiter(',')
        ->capture_default_str();
  }
  if (fields & kK) sub.add_option("--k", c.k, "Indices to select")->capture_default_str();
  if (fields & kCap) {
    sub.add_option("--cap", c.cap, "Largest index searched")->capture_default_str();
  }
  if (fields & kTol) {
    sub.add_option("--tol", c.tol, "Sup bracket width")->capture_default_str();
  }
  if (fields & kGrid) sub.add_option("--grid", c.grid, "Grid size")->capture_default_str();
  if (fields & kMaxGrid) {
    sub.add_option("--max-grid", c.max_grid,
                   "Evaluation budget per sup bracket")
        ->capture_default_str();
  }
  if (fields & kSeed) sub.add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  if (fields & kSamples) {
    sub.add_option("--samples", c.samples, "Random functions / sample points")
        ->capture_default_str();
  }
  if (fields & kAtoms) {
    sub.add_option("--atoms", c.atoms, "Atoms per random function")
        ->capture_default_str();
  }
  if (fields & kSupport) {
    sub.add_option("--support", c.support, "Random sites lie in [-support, support]")
        ->capture_default_str();
  }
  if (fields & kLambdas) {
    sub.add_option("--lambdas", c.lambdas,
                   "Comma-separated levels (default: dyadic levels per phi)")
        ->delimiter(',');
  }
  if (fields & kRho) {
    sub.add_option("--rho", c.rho, "power:<a> | log:<c> | logpow:<c> | const:<c>")
        ->capture_default_str();
  }
  if (fields & kArcBeta) {
    sub.add_option("--arc-beta", c.arc_beta,
                   "Also audit every block at this beta (negative: off)")
        ->capture_default_str();
  }
  if (fields & kModulus) {
    sub.add_option("--modulus", c.modulus, "Q")->capture_default_str();
  }
  if (fields & kWindow) {
    sub.add_option("--window", c.window, "Read rho at window * N")
        ->capture_default_str();
  }
  if (fields & kSystem) {
    sub.add_option("--system", c.system,
                   "golden | cyclic:<M> | rotation:<u64 numerator>")
        ->capture_default_str();
  }
  if (fields & kObservable) {
    sub.add_option("--observable", c.observable,
                   "trig:<m> | indicator:<lo>:<hi> | table:<v0>,<v1>,...")
        ->capture_default_str();
  }
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig config;
  std::string config_path;
  CLI::App app{"ergosub: Fourier-analytic audits for weighted averages on Z"};
  app.set_version_flag("--version", std::string(ergosub::version()));
  app.require_subcommand(0, 1);
  app.fallthrough();
  app.add_option("--threads", config.threads,
                 "Worker threads (0 = all cores); output does not depend on it")
      ->capture_default_str();
  app.add_option("--out", config.out, "Output directory")->capture_default_str();
  app.add_option("--config", config_path,
                 "JSON run config; it defines the whole run")
      ->check(CLI::ExistingFile);

  for (const Command command : ergosub::cli::all_commands()) {
    CLI::App* sub = app.add_subcommand(ergosub::cli::command_name(command),
                                       description_of(command));
    add_options(*sub, config, fields_of(command));
    sub->callback([&config, command] { config.command = command; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ergosub::cli::kExitConfig;
  }

  try {
    if (!config_path.empty()) {
      if (!app.get_subcommands().empty()) {
        std::cerr << "error: --config and a subcommand are exclusive\n";
        return ergosub::cli::kExitConfig;
      }
      std::ifstream in(config_path, std::ios::binary);
      std::stringstream text;
      text << in.rdbuf();
      config = ergosub::cli::config_from_json(text.str());
    } else if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return ergosub::cli::kExitConfig;
    }
    const auto result = ergosub::cli::run(config);
    if (result.exit_code != ergosub::cli::kExitOk) {
      std::cerr << "error: " << result.message << "\n";
    }
    std::cout << config.out << "/manifest.json\n";
    return result.exit_code;
  } catch (const ergosub::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ergosub::cli::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << "\n";
    return 1;
  }
}
