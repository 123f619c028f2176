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

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "ergosub/errors.hpp"
#include "ergosub/version.hpp"
#include "ergosub_cli/run.hpp"
#include "ergosub_cli/run_config.hpp"

using namespace ergosub::cli;
namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ergosub-test-cli" / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream text;
  text << in.rdbuf();
  return text.str();
}

Json manifest_of(const fs::path& dir) { return Json::parse(slurp(dir / "manifest.json")); }

// Small but non-trivial configs, one per subcommand.
RunConfig smoke_config(Command command) {
  RunConfig c;
  c.command = command;
  switch (command) {
    case Command::kFourier:
      c.family = "perturbed:power:0.25";
      c.n = {16, 100};
      c.grid = 64;
      break;
    case Command::kTriviality:
      c.family = "uniform";
      c.n = {64, 200};
      c.tol = 1e-2;
      break;
    case Command::kSelect:
      c.family = "uniform";
      c.k = 2;
      c.cap = 200;
      c.tol = 1e-3;
      break;
    case Command::kCzCheck:
    case Command::kMaximal:
      c.family = "squares";
      c.n = {4, 16};
      c.samples = 3;
      c.atoms = 16;
      c.support = 64;
      c.lambdas = {0.05, 0.2};
      break;
    case Command::kWeylAudit:
      c.grid = 128;
      c.n = {64, 256};
      break;
    case Command::kThresholdAudit:
      c.rho = "power:0.25";
      c.n = {256, 512};
      c.grid = 32;
      c.arc_beta = 0.3;
      break;
    case Command::kResidues:
      c.rho = "log:1";
      c.modulus = 15;
      c.n = {1000, 2000, 3000, 4000};
      break;
    case Command::kDynsysTrace:
      c.family = "squares";
      c.n = {16, 64, 256};
      c.samples = 4;
      break;
  }
  return c;
}

std::map<std::string, std::string> data_files(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name != "manifest.json") out[name] = slurp(entry.path());
  }
  return out;
}

int shell(const std::string& command) {
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("run config round trips through json") {
  RunConfig c;
  CHECK(config_from_json(config_to_json(c)) == c);
  c.command = Command::kResidues;
  c.n = {3, 5, 1000000};
  c.lambdas = {0.5, 0.125};
  c.tol = 1.0 / 3.0;
  c.rho = "logpow:2";
  c.observable = "table:1,2,3";
  c.threads = 3;
  CHECK(config_from_json(config_to_json(c)) == c);
  for (Command command : all_commands()) {
    CHECK(parse_command(command_name(command)) == command);
  }
  CHECK_THROWS_AS((void)config_from_json(R"({"command":"fourier","bogus":1})"),
                  ergosub::ConfigError);
  CHECK_THROWS_AS((void)config_from_json(R"({"command":"nope"})"), ergosub::ConfigError);
  CHECK_THROWS_AS((void)config_from_json("not json"), ergosub::ConfigError);
  // Missing keys keep their defaults.
  const auto partial = config_from_json(R"({"command":"select","k":5})");
  CHECK(partial.command == Command::kSelect);
  CHECK(partial.k == 5);
  CHECK(partial.cap == RunConfig{}.cap);
}

TEST_CASE("every subcommand runs and is thread-count independent") {
  for (Command command : all_commands()) {
    CAPTURE(command_name(command));
    RunConfig one = smoke_config(command);
    one.threads = 1;
    one.out = scratch(std::string(command_name(command)) + "-1").string();
    RunConfig four = one;
    four.threads = 4;
    four.out = scratch(std::string(command_name(command)) + "-4").string();
    const auto a = run(one);
    const auto b = run(four);
    CHECK(a.exit_code == kExitOk);
    CHECK(b.exit_code == kExitOk);
    CHECK_FALSE(a.files.empty());
    const auto files_one = data_files(one.out);
    CHECK(files_one == data_files(four.out));
    CHECK(files_one.size() == a.files.size());

    const Json manifest = manifest_of(one.out);
    CHECK(manifest["tool"] == "ergosub");
    CHECK(manifest["version"] == std::string(ergosub::version()));
    CHECK(manifest["command"] == command_name(command));
    CHECK(manifest["status"] == "ok");
    CHECK(manifest["exit_code"] == 0);
    CHECK(config_from_json(manifest["config"].dump()) == one);
    CHECK(manifest["outputs"].size() == a.files.size());
    CHECK(manifest["timestamp"].get<std::string>().back() == 'Z');
  }
}

TEST_CASE("documented examples") {
  RunConfig trivial;
  trivial.command = Command::kTriviality;
  trivial.family = "perturbed:power:0.25";
  trivial.n = {1024};
  trivial.tol = 1e-3;
  trivial.out = scratch("triviality").string();
  REQUIRE(run(trivial).exit_code == kExitOk);
  const Json bracket = Json::parse(slurp(fs::path(trivial.out) / "triviality.json"));
  const Json row = bracket["results"][0];
  CHECK(row["n"] == 1024);
  CHECK(row["lower"].get<double>() <= row["upper"].get<double>());
  CHECK(row["upper"].get<double>() - row["lower"].get<double>() <= 1e-3);

  RunConfig stall;
  stall.command = Command::kSelect;
  stall.family = "squares";
  stall.k = 2;
  stall.cap = 10000;
  stall.out = scratch("stall").string();
  const auto stalled = run(stall);
  CHECK(stalled.exit_code == kExitStalled);
  CHECK(stalled.message.find("stalled") != std::string::npos);
  const Json report = Json::parse(slurp(fs::path(stall.out) / "stall.json"));
  CHECK(report["best_lower_bound"].get<double>() >= 0.9);
  CHECK(report["step"] == 2);
  CHECK(manifest_of(stall.out)["status"] == "selection_stalled");

  RunConfig weyl;
  weyl.command = Command::kWeylAudit;
  weyl.grid = 1024;
  weyl.n = {64, 256, 1024};
  weyl.out = scratch("weyl").string();
  REQUIRE(run(weyl).exit_code == kExitOk);
  const auto csv = slurp(fs::path(weyl.out) / "weyl_audit.csv");
  CHECK(csv.rfind("N,beta,p,q,err,value,bound_shape,ratio\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3 * 1024);
  const Json summary = Json::parse(slurp(fs::path(weyl.out) / "weyl_summary.json"));
  CHECK(summary["max_ratio"].get<double>() <= 10.0);
}

TEST_CASE("error paths map to distinct exit codes") {
  RunConfig bad_family = smoke_config(Command::kFourier);
  bad_family.family = "cubes";
  bad_family.out = scratch("bad-family").string();
  const auto config_error = run(bad_family);
  CHECK(config_error.exit_code == kExitConfig);
  CHECK(manifest_of(bad_family.out)["status"] == "config_error");

  RunConfig capped;
  capped.command = Command::kTriviality;
  capped.family = "squares";
  capped.n = {2000};
  capped.tol = 1e-9;
  capped.max_grid = 64;
  capped.out = scratch("capped").string();
  CHECK(run(capped).exit_code == kExitResource);

  RunConfig residues = smoke_config(Command::kResidues);
  residues.modulus = 9;
  residues.out = scratch("residues-9").string();
  CHECK(run(residues).exit_code == kExitConfig);
}

TEST_CASE("the binary parses, dispatches and reports exit codes") {
  const std::string tool = ERGOSUB_TOOL_PATH;
  const fs::path dir = scratch("binary");
  const std::string quiet = " >/dev/null 2>&1";
  CHECK(shell(tool + " --version" + quiet) == 0);
  CHECK(shell(tool + " --out " + (dir / "w").string() +
              " weyl-audit --grid 64 --n 64,256" + quiet) == kExitOk);
  const Json manifest = manifest_of(dir / "w");
  CHECK(manifest["config"]["n"] == Json::array({64, 256}));
  CHECK(shell(tool + " --out " + (dir / "s").string() +
              " select --family squares --k 2 --cap 2000" + quiet) == kExitStalled);
  CHECK(shell(tool + " fourier --no-such-flag" + quiet) == kExitConfig);
  CHECK(shell(tool + " --out " + (dir / "f").string() + " fourier --family cubes" + quiet) ==
        kExitConfig);

  // A config file reproduces the subcommand run byte for byte.
  RunConfig c = smoke_config(Command::kDynsysTrace);
  c.out = (dir / "from-config").string();
  fs::create_directories(dir);
  std::ofstream(dir / "run.json") << config_to_json(c);
  CHECK(shell(tool + " --config " + (dir / "run.json").string() + quiet) == kExitOk);
  CHECK(shell(tool + " --out " + (dir / "from-flags").string() +
              " dynsys-trace --family squares --n 16,64,256 --samples 4" + quiet) == kExitOk);
  CHECK(data_files(dir / "from-config") == data_files(dir / "from-flags"));
}
