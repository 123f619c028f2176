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

#include "ergosub/measure_io.hpp"

#include <charconv>
#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>

#include "ergosub/errors.hpp"

namespace ergosub {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::string measure_to_json(const WeightedMeasure& mu) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& a : mu.atoms()) {
    out.push_back({a.site, a.weight.real(), a.weight.imag()});
  }
  return out.dump();
}

WeightedMeasure measure_from_json(const std::string& text) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("measure JSON: ") + e.what());
  }
  if (!parsed.is_array()) throw ConfigError("measure JSON must be an array");
  std::vector<std::pair<Site, Weight>> atoms;
  for (const auto& triple : parsed) {
    if (!triple.is_array() || triple.size() != 3 ||
        !triple[0].is_number_integer() || !triple[1].is_number() ||
        !triple[2].is_number()) {
      throw ConfigError("measure JSON entries must be [site, re, im]");
    }
    atoms.emplace_back(triple[0].get<Site>(),
                       Weight{triple[1].get<double>(), triple[2].get<double>()});
  }
  return make_measure(std::move(atoms));
}

std::string fourier_grid_csv(const std::vector<std::complex<double>>& grid) {
  std::ostringstream out;
  out << "gamma,re,im,abs\n";
  const double g = static_cast<double>(grid.size());
  for (std::size_t m = 0; m < grid.size(); ++m) {
    out << format_number(static_cast<double>(m) / g) << ','
        << format_number(grid[m].real()) << ','
        << format_number(grid[m].imag()) << ','
        << format_number(std::abs(grid[m])) << '\n';
  }
  return out.str();
}

}  // namespace ergosub
