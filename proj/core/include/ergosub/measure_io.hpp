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

#include <complex>
#include <string>
#include <vector>

#include "ergosub/measure.hpp"

namespace ergosub {

// Measures serialize as a JSON array of [site, re, im] triples in site order.
[[nodiscard]] std::string measure_to_json(const WeightedMeasure& mu);
// Throws ConfigError on malformed input.
[[nodiscard]] WeightedMeasure measure_from_json(const std::string& text);

// CSV with header gamma,re,im,abs; row m is gamma = m / grid.size().
[[nodiscard]] std::string fourier_grid_csv(
    const std::vector<std::complex<double>>& grid);

// Round-trippable, locale-independent rendering used by every CSV writer.
[[nodiscard]] std::string format_number(double value);

}  // namespace ergosub
