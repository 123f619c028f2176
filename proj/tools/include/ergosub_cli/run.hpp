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
#include <random>
#include <string>
#include <vector>

#include "ergosub/measure.hpp"
#include "ergosub_cli/run_config.hpp"

namespace ergosub::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitStalled = 3,
  kExitResource = 4,
  kExitVerification = 5,
};

struct RunResult {
  int exit_code = kExitOk;
  std::string message;
  // Data files written into config.out (manifest.json not included).
  std::vector<std::string> files;
};

// Runs one subcommand, writes its CSV/JSON files and manifest.json into
// config.out, and maps library errors to exit codes. Only I/O failures
// escape as exceptions.
[[nodiscard]] RunResult run(const RunConfig& config);

// A random test function with `atoms` draws of site in [-support, support]
// and real value in [-1, 1). Built from raw engine output so the stream is
// the same on every standard library.
[[nodiscard]] FiniteFunction random_phi(std::mt19937_64& rng,
                                        std::int64_t atoms,
                                        std::int64_t support);

}  // namespace ergosub::cli
