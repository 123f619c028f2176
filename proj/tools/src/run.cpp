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

#include "ergosub_cli/run.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string_view>
#include <utility>

#include <nlohmann/json.hpp>

#include "ergosub/cz.hpp"
#include "ergosub/dynsys.hpp"
#include "ergosub/errors.hpp"
#include "ergosub/families.hpp"
#include "ergosub/fourier.hpp"
#include "ergosub/maximal.hpp"
#include "ergosub/measure_io.hpp"
#include "ergosub/parallel.hpp"
#include "ergosub/rho.hpp"
#include "ergosub/selection.hpp"
#include "ergosub/threshold.hpp"
#include "ergosub/version.hpp"
#include "ergosub/weyl.hpp"

namespace ergosub::cli {
namespace {

using Json = nlohmann::json;
namespace fs = std::filesystem;

void require(bool condition, const std::string& message) {
  if (!condition) throw ConfigError(message);
}

// Collects the data files of one run.
class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::string& content) {
    const fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path.string());
    files_.push_back(name);
  }
  void write_json(const std::string& name, const Json& content) {
    write(name, content.dump(2) + "\n");
  }

  [[nodiscard]] const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

template <typename T>
T parse_number(std::string_view text, const std::string& what) {
  T value{};
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
    throw ConfigError("bad number '" + std::string(text) + "' in " + what);
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = text.find(sep, start);
    out.push_back(text.substr(start, at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

System parse_system(const std::string& text) {
  if (text == "golden") return System::golden_rotation();
  const auto parts = split(text, ':');
  if (parts.size() == 2 && parts[0] == "cyclic") {
    return System::cyclic_shift(parse_number<std::int64_t>(parts[1], "system"));
  }
  if (parts.size() == 2 && parts[0] == "rotation") {
    // alpha as a 64-bit fraction of the circle.
    return System::torus_rotation(parse_number<std::uint64_t>(parts[1], "system"));
  }
  throw ConfigError("unknown system '" + text +
                    "' (golden, cyclic:<M>, rotation:<u64 numerator>)");
}

ObservedFunction parse_observable(const std::string& text) {
  const std::size_t colon = text.find(':');
  const std::string_view kind = std::string_view(text).substr(0, colon);
  const std::string_view rest =
      colon == std::string::npos ? std::string_view{}
                                 : std::string_view(text).substr(colon + 1);
  if (kind == "trig" && !rest.empty()) {
    return ObservedFunction::trig(parse_number<std::int64_t>(rest, "observable"));
  }
  if (kind == "indicator") {
    const auto bounds = split(rest, ':');
    if (bounds.size() == 2) {
      return ObservedFunction::indicator(
          parse_number<double>(bounds[0], "observable"),
          parse_number<double>(bounds[1], "observable"));
    }
  }
  if (kind == "table" && !rest.empty()) {
    std::vector<double> values;
    for (const auto v : split(rest, ',')) {
      values.push_back(parse_number<double>(v, "observable"));
    }
    return ObservedFunction::table(std::move(values));
  }
  throw ConfigError("unknown observable '" + text +
                    "' (trig:<m>, indicator:<lo>:<hi>, table:<v0>,<v1>,...)");
}

std::string timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

Json bracket_json(const SupBracket& b) {
  return {{"lower", b.lower},
          {"upper", b.upper},
          {"grid_size", b.grid_size},
          {"argmax", b.argmax}};
}

void require_n(const RunConfig& c, std::int64_t minimum) {
  require(!c.n.empty(), "--n needs at least one value");
  for (const auto n : c.n) {
    require(n >= minimum, "--n values must be >= " + std::to_string(minimum));
  }
}

std::vector<FiniteFunction> random_phis(const RunConfig& c) {
  require(c.samples >= 1, "--samples must be >= 1");
  require(c.atoms >= 1, "--atoms must be >= 1");
  require(c.support >= 0 && c.support <= (std::int64_t{1} << 40),
          "--support must be in [0, 2^40]");
  std::mt19937_64 rng(c.seed);
  std::vector<FiniteFunction> out;
  for (std::int64_t i = 0; i < c.samples; ++i) {
    out.push_back(random_phi(rng, c.atoms, c.support));
  }
  return out;
}

void run_fourier(const RunConfig& c, Outputs& out) {
  require_n(c, 1);
  require(c.grid >= 1 && c.grid <= (std::int64_t{1} << 24),
          "--grid must be in [1, 2^24]");
  const MeasureFamily family = MeasureFamily::parse(c.family);
  std::string csv = "n,gamma,re,im,abs\n";
  for (const auto n : c.n) {
    const auto values = fourier_grid(family(n), static_cast<std::size_t>(c.grid));
    const double g = static_cast<double>(values.size());
    for (std::size_t m = 0; m < values.size(); ++m) {
      csv += std::to_string(n) + "," + format_number(static_cast<double>(m) / g) +
             "," + format_number(values[m].real()) + "," +
             format_number(values[m].imag()) + "," +
             format_number(std::abs(values[m])) + "\n";
    }
  }
  out.write("fourier.csv", csv);
}

void run_triviality(const RunConfig& c, Outputs& out) {
  require_n(c, 1);
  require(c.tol > 0.0, "--tol must be positive");
  const MeasureFamily family = MeasureFamily::parse(c.family);
  Json results = Json::array();
  for (const auto n : c.n) {
    const SupBracket b = triviality_sup(family(n), c.tol,
                                        static_cast<std::size_t>(c.max_grid));
    Json row = bracket_json(b);
    row["n"] = n;
    results.push_back(row);
  }
  out.write_json("triviality.json", {{"family", family.descriptor()},
                                     {"tol", c.tol},
                                     {"results", results}});
}

void run_select(const RunConfig& c, Outputs& out) {
  require(c.k >= 1, "--k must be >= 1");
  require(c.cap >= 1, "--cap must be >= 1");
  require(c.tol > 0.0, "--tol must be positive");
  const MeasureFamily family = MeasureFamily::parse(c.family);
  SelectionOptions options;
  options.count = c.k;
  options.sup_tol = c.tol;
  options.search_cap = c.cap;
  options.max_grid = static_cast<std::size_t>(c.max_grid);
  try {
    const SelectionState state = select_subsequence(family, options);
    out.write("selection.json", selection_to_json(state) + "\n");
    const SelectionReport report =
        audit_selection(family, state, c.tol, options.max_grid);
    out.write("selection_report.json", selection_report_json(report) + "\n");
    if (!report.ok()) {
      throw VerificationFailure(
          "selected indices failed the independent re-check");
    }
  } catch (const SelectionStalled& stalled) {
    out.write_json(
        "stall.json",
        {{"family", family.descriptor()},
         {"step", stalled.step()},
         {"bound", stalled.bound()},
         {"best_lower_bound", stalled.best_lower_bound()},
         {"best_index", stalled.best_index()},
         {"searched_to", stalled.searched_to()},
         {"partial", Json::parse(selection_to_json(stalled.partial()))}});
    throw;
  }
}

void run_cz_check(const RunConfig& c, Outputs& out) {
  for (const double lambda : c.lambdas) {
    require(lambda > 0.0 && std::isfinite(lambda), "--lambdas must be positive");
  }
  const auto phis = random_phis(c);
  std::string csv =
      "phi,lambda,n_bad,carleson_sum,carleson_bound,g_inf_norm,"
      "reconstruction_error,ok\n";
  std::int64_t runs = 0;
  std::int64_t failures = 0;
  for (std::size_t i = 0; i < phis.size(); ++i) {
    const auto& phi = phis[i];
    const auto lambdas = c.lambdas.empty() ? default_lambda_grid(phi) : c.lambdas;
    for (const double lambda : lambdas) {
      const CZDecomposition cz = cz_decompose(phi, lambda);
      const CZInvariants inv = check_cz_invariants(phi, cz);
      ++runs;
      if (!inv.ok()) ++failures;
      csv += std::to_string(i) + "," + format_number(lambda) + "," +
             std::to_string(cz.bad.size()) + "," +
             std::to_string(inv.carleson_sum) + "," +
             format_number(phi.l1_norm() / lambda) + "," +
             format_number(inv.g_inf_norm) + "," +
             format_number(inv.reconstruction_error) + "," +
             (inv.ok() ? "1" : "0") + "\n";
    }
  }
  out.write("cz.csv", csv);
  out.write_json("cz.json", {{"runs", runs},
                             {"failures", failures},
                             {"all_ok", failures == 0}});
  if (failures != 0) {
    throw VerificationFailure(std::to_string(failures) +
                              " decompositions broke an invariant");
  }
}

void run_maximal(const RunConfig& c, Outputs& out) {
  require_n(c, 1);
  for (const double lambda : c.lambdas) {
    require(lambda > 0.0 && std::isfinite(lambda), "--lambdas must be positive");
  }
  const MeasureFamily family = MeasureFamily::parse(c.family);
  std::vector<WeightedMeasure> measures;
  for (const auto n : c.n) measures.push_back(family(n));
  const auto phis = random_phis(c);
  std::string csv = "phi,lambda,levelset_count,ratio\n";
  Json ratios = Json::array();
  double max_ratio = 0.0;
  for (std::size_t i = 0; i < phis.size(); ++i) {
    const auto lambdas =
        c.lambdas.empty() ? default_lambda_grid(phis[i]) : c.lambdas;
    const Weak11Result result = weak11_profile(phis[i], measures, lambdas);
    for (const auto& row : result.rows) {
      csv += std::to_string(i) + "," + format_number(row.lambda) + "," +
             std::to_string(row.levelset_count) + "," +
             format_number(row.ratio) + "\n";
    }
    ratios.push_back(result.ratio);
    max_ratio = std::max(max_ratio, result.ratio);
  }
  out.write("weak11.csv", csv);
  out.write_json("maximal.json", {{"family", family.descriptor()},
                                  {"n", c.n},
                                  {"ratios", ratios},
                                  {"max_ratio", max_ratio}});
}

void run_weyl_audit(const RunConfig& c, Outputs& out) {
  require_n(c, 2);
  require(c.grid >= 1 && c.grid <= (std::int64_t{1} << 20),
          "--grid must be in [1, 2^20]");
  const WeylSweep sweep = weyl_audit_sweep(c.grid, c.n);
  out.write("weyl_audit.csv", weyl_audit_csv(sweep));
  out.write_json("weyl_summary.json", {{"grid", c.grid},
                                       {"n", c.n},
                                       {"rows", sweep.rows.size()},
                                       {"max_ratio", sweep.max_ratio},
                                       {"median_ratio", sweep.median_ratio},
                                       {"p90_ratio", sweep.p90_ratio},
                                       {"p99_ratio", sweep.p99_ratio}});
}

void run_threshold_audit(const RunConfig& c, Outputs& out) {
  require_n(c, 2);
  require(c.grid >= 2 && c.grid <= (std::int64_t{1} << 16),
          "--grid must be in [2, 2^16]");
  const RhoSpec rho = RhoSpec::parse(c.rho);
  const auto betas = threshold_beta_grid(static_cast<std::size_t>(c.grid));
  const TransformAudit audit =
      transform_bound_audit(rho, c.n, betas, rho.epsilon());
  out.write("threshold_audit.csv", transform_audit_csv(audit));
  Json summary = {{"rho", audit.rho},
                  {"epsilon", audit.epsilon},
                  {"betas", betas.size()},
                  {"n", audit.ns},
                  {"functional_max", audit.functional_max},
                  {"strictly_decreasing", audit.strictly_decreasing()},
                  {"max_ratio", audit.max_ratio}};
  if (c.arc_beta >= 0.0) {
    require(c.arc_beta < 1.0, "--arc-beta must be in [0, 1)");
    std::string csv;
    Json arcs = Json::array();
    for (const auto n : c.n) {
      const ArcAudit arc = major_arc_audit(rho, n, c.arc_beta, rho.epsilon());
      std::string part = arc_audit_csv(rho, arc);
      // Keep one header for the concatenated table.
      if (!csv.empty()) part.erase(0, part.find('\n') + 1);
      csv += part;
      arcs.push_back({{"n", n},
                      {"branch", branch_name(arc.branch)},
                      {"p", arc.certificate.rational.p},
                      {"q", arc.certificate.rational.q},
                      {"blocks", arc.rows.size()},
                      {"max_ratio", arc.max_ratio}});
    }
    out.write("arc_audit.csv", csv);
    summary["arc_beta"] = c.arc_beta;
    summary["arcs"] = arcs;
  }
  out.write_json("threshold_summary.json", summary);
}

void run_residues(const RunConfig& c, Outputs& out) {
  require_n(c, 1);
  require(c.modulus >= 1, "--modulus must be >= 1");
  require(c.window > 0.0 && c.window <= 1.0, "--window must be in (0, 1]");
  const RhoSpec rho = RhoSpec::parse(c.rho);
  const ResidueProfile p = residue_density(rho, c.modulus, c.n, c.window);
  out.write("residues.csv", residue_csv(p));
  auto number_or_null = [](double v) { return std::isnan(v) ? Json() : Json(v); };
  out.write_json("residues.json",
                 {{"rho", rho.descriptor()},
                  {"modulus", p.modulus},
                  {"window", p.window},
                  {"n", p.ns},
                  {"read_residues", p.read_residues},
                  {"r_q", p.r_q},
                  {"class_size", p.class_size},
                  {"evaluated_n", p.evaluated_n},
                  {"stabilized", p.stabilized},
                  {"lambda_q", p.lambda_q},
                  {"fitted_c", p.fitted_c},
                  {"bound", number_or_null(p.bound)},
                  {"min_nonzero_density", p.min_nonzero_density},
                  {"min_unit_density", p.min_unit_density},
                  {"meets_bound", p.meets_bound()}});
}

void run_dynsys_trace(const RunConfig& c, Outputs& out) {
  require_n(c, 1);
  require(c.samples >= 1, "--samples must be >= 1");
  const MeasureFamily family = MeasureFamily::parse(c.family);
  const System system = parse_system(c.system);
  const ObservedFunction f = parse_observable(c.observable);
  const ConvergenceTrace trace = convergence_trace(
      system, f, family, c.n, static_cast<std::size_t>(c.samples), c.seed);
  out.write("trace.csv", trace_csv(trace));
  out.write_json("trace.json", {{"family", family.descriptor()},
                                {"system", system.descriptor()},
                                {"observable", f.descriptor()},
                                {"final_oscillation", trace.final_oscillation},
                                {"median_oscillation", trace.median_oscillation},
                                {"max_oscillation", trace.max_oscillation}});
}

void dispatch(const RunConfig& c, Outputs& out) {
  require(c.max_grid >= 64, "--max-grid must be >= 64");
  switch (c.command) {
    case Command::kFourier: return run_fourier(c, out);
    case Command::kTriviality: return run_triviality(c, out);
    case Command::kSelect: return run_select(c, out);
    case Command::kCzCheck: return run_cz_check(c, out);
    case Command::kMaximal: return run_maximal(c, out);
    case Command::kWeylAudit: return run_weyl_audit(c, out);
    case Command::kThresholdAudit: return run_threshold_audit(c, out);
    case Command::kResidues: return run_residues(c, out);
    case Command::kDynsysTrace: return run_dynsys_trace(c, out);
  }
}

const char* status_name(int code) {
  switch (code) {
    case kExitOk: return "ok";
    case kExitConfig: return "config_error";
    case kExitStalled: return "selection_stalled";
    case kExitResource: return "resource_cap";
    case kExitVerification: return "verification_failure";
  }
  return "error";
}

}  // namespace

FiniteFunction random_phi(std::mt19937_64& rng, std::int64_t atoms,
                          std::int64_t support) {
  const auto width = static_cast<std::uint64_t>(2 * support + 1);
  std::vector<Atom> out;
  out.reserve(static_cast<std::size_t>(atoms));
  for (std::int64_t i = 0; i < atoms; ++i) {
    const auto site = static_cast<Site>(rng() % width) - support;
    const double unit = std::ldexp(static_cast<double>(rng() >> 11), -53);
    out.push_back({site, Weight{2.0 * unit - 1.0, 0.0}});
  }
  return FiniteFunction(std::move(out));
}

RunResult run(const RunConfig& config) {
  const fs::path dir(config.out);
  fs::create_directories(dir);
  set_default_thread_count(config.threads);
  Outputs outputs(dir);
  RunResult result;
  try {
    dispatch(config, outputs);
  } catch (const SelectionStalled& e) {
    result = {kExitStalled, e.what(), {}};
  } catch (const ConfigError& e) {
    result = {kExitConfig, e.what(), {}};
  } catch (const ResourceError& e) {
    result = {kExitResource, e.what(), {}};
  } catch (const VerificationFailure& e) {
    result = {kExitVerification, e.what(), {}};
  } catch (const Error& e) {
    result = {kExitConfig, e.what(), {}};
  }
  result.files = outputs.files();
  const Json manifest = {{"tool", "ergosub"},
                         {"version", version()},
                         {"command", command_name(config.command)},
                         {"config", Json::parse(config_to_json(config))},
                         {"timestamp", timestamp()},
                         {"outputs", result.files},
                         {"status", status_name(result.exit_code)},
                         {"exit_code", result.exit_code},
                         {"message", result.message}};
  std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  out << manifest.dump(2) << "\n";
  if (!out) throw std::runtime_error("cannot write manifest.json");
  return result;
}

}  // namespace ergosub::cli
