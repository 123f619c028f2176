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

#include "ergosub_cli/run_config.hpp"

#include <array>
#include <set>
#include <utility>

#include <nlohmann/json.hpp>

#include "ergosub/errors.hpp"

namespace ergosub::cli {
namespace {

using Json = nlohmann::json;

constexpr std::array<std::pair<Command, const char*>, 9> kNames{{
    {Command::kFourier, "fourier"},
    {Command::kTriviality, "triviality"},
    {Command::kSelect, "select"},
    {Command::kCzCheck, "cz-check"},
    {Command::kMaximal, "maximal"},
    {Command::kWeylAudit, "weyl-audit"},
    {Command::kThresholdAudit, "threshold-audit"},
    {Command::kResidues, "residues"},
    {Command::kDynsysTrace, "dynsys-trace"},
}};

template <typename T>
void read(const Json& object, const char* key, T& field) {
  const auto it = object.find(key);
  if (it == object.end()) return;
  try {
    field = it->get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

const char* command_name(Command command) {
  for (const auto& [c, name] : kNames) {
    if (c == command) return name;
  }
  return "unknown";
}

Command parse_command(const std::string& name) {
  for (const auto& [c, n] : kNames) {
    if (name == n) return c;
  }
  throw ConfigError("unknown command '" + name + "'");
}

const std::vector<Command>& all_commands() {
  static const std::vector<Command> commands = [] {
    std::vector<Command> out;
    for (const auto& entry : kNames) out.push_back(entry.first);
    return out;
  }();
  return commands;
}

std::string config_to_json(const RunConfig& c) {
  Json out = {
      {"command", command_name(c.command)},
      {"family", c.family},
      {"n", c.n},
      {"k", c.k},
      {"cap", c.cap},
      {"tol", c.tol},
      {"grid", c.grid},
      {"max_grid", c.max_grid},
      {"seed", c.seed},
      {"samples", c.samples},
      {"atoms", c.atoms},
      {"support", c.support},
      {"lambdas", c.lambdas},
      {"rho", c.rho},
      {"arc_beta", c.arc_beta},
      {"modulus", c.modulus},
      {"window", c.window},
      {"system", c.system},
      {"observable", c.observable},
      {"out", c.out},
      {"threads", c.threads},
  };
  return out.dump(2);
}

RunConfig config_from_json(const std::string& text) {
  Json in;
  try {
    in = Json::parse(text);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!in.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {
      "command", "family",   "n",       "k",       "cap",        "tol",
      "grid",    "max_grid", "seed",    "samples", "atoms",      "support",
      "lambdas", "rho",      "arc_beta", "modulus", "window",    "system",
      "observable", "out",   "threads"};
  for (const auto& [key, value] : in.items()) {
    if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  RunConfig c;
  std::string command = command_name(c.command);
  read(in, "command", command);
  c.command = parse_command(command);
  read(in, "family", c.family);
  read(in, "n", c.n);
  read(in, "k", c.k);
  read(in, "cap", c.cap);
  read(in, "tol", c.tol);
  read(in, "grid", c.grid);
  read(in, "max_grid", c.max_grid);
  read(in, "seed", c.seed);
  read(in, "samples", c.samples);
  read(in, "atoms", c.atoms);
  read(in, "support", c.support);
  read(in, "lambdas", c.lambdas);
  read(in, "rho", c.rho);
  read(in, "arc_beta", c.arc_beta);
  read(in, "modulus", c.modulus);
  read(in, "window", c.window);
  read(in, "system", c.system);
  read(in, "observable", c.observable);
  read(in, "out", c.out);
  read(in, "threads", c.threads);
  return c;
}

}  // namespace ergosub::cli
