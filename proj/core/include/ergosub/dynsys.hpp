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
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ergosub/families.hpp"
#include "ergosub/measure.hpp"

namespace ergosub {

// A point of either system: a torus point x = fixed / 2^64, or a residue.
struct Point {
  std::uint64_t fixed = 0;
  std::int64_t residue = 0;
};

// Rotation by alpha = numerator / 2^64 on the torus, or x -> x + 1 on Z_M.
// Both make tau^j an O(1) exact computation.
class System {
 public:
  enum class Kind { kTorusRotation, kCyclicShift };

  [[nodiscard]] static System torus_rotation(std::uint64_t alpha_numerator);
  // The golden-ratio rotation, frac((1 + sqrt 5) / 2) rounded to an odd
  // multiple of 2^-64 (so its reduced denominator is 2^64).
  [[nodiscard]] static System golden_rotation();
  // Throws ConfigError unless modulus >= 1.
  [[nodiscard]] static System cyclic_shift(std::int64_t modulus);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] std::uint64_t alpha_numerator() const { return alpha_; }
  [[nodiscard]] double alpha() const;
  [[nodiscard]] std::int64_t modulus() const { return modulus_; }
  [[nodiscard]] std::string descriptor() const;

  // tau^j x.
  [[nodiscard]] Point orbit(const Point& x, std::int64_t j) const;
  // The point as a number in [0, 1) (x / M for the cyclic shift).
  [[nodiscard]] double coordinate(const Point& x) const;

 private:
  System(Kind kind, std::uint64_t alpha, std::int64_t modulus)
      : kind_(kind), alpha_(alpha), modulus_(modulus) {}

  Kind kind_;
  std::uint64_t alpha_;
  std::int64_t modulus_;
};

class ObservedFunction {
 public:
  enum class Kind { kIndicator, kTrig, kTable };

  // Indicator of [lo, hi) on the torus (0 <= lo <= hi <= 1).
  [[nodiscard]] static ObservedFunction indicator(double lo, double hi);
  // x -> e(m x).
  [[nodiscard]] static ObservedFunction trig(std::int64_t m);
  // Values on Z_M, for the cyclic shift only.
  [[nodiscard]] static ObservedFunction table(std::vector<double> values);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] std::complex<double> operator()(const System& system,
                                                const Point& x) const;
  // Closed-form mean over the system's invariant measure.
  [[nodiscard]] std::complex<double> mean(const System& system) const;
  [[nodiscard]] std::string descriptor() const;

 private:
  ObservedFunction() = default;

  Kind kind_ = Kind::kTrig;
  std::uint64_t lo_ = 0;  // indicator endpoints on the 2^-64 grid
  std::uint64_t hi_ = 0;
  bool full_ = false;     // indicator of the whole torus
  double lo_value_ = 0.0;
  double hi_value_ = 0.0;
  std::int64_t m_ = 0;
  std::vector<double> table_;
};

// sum_j f(tau^j x) mu(j), compensated.
[[nodiscard]] std::complex<double> weighted_average(const System& system,
                                                    const ObservedFunction& f,
                                                    const WeightedMeasure& mu,
                                                    const Point& x);

struct TraceRow {
  std::size_t k = 0;  // 1-based position in the measure list
  std::int64_t n_k = 0;
  std::size_t sample = 0;
  double x = 0.0;
  std::complex<double> value;
  // Diameter of {value_i : ceil(k/2) <= i <= k} for this sample.
  double osc_tail = 0.0;
};

struct ConvergenceTrace {
  std::vector<TraceRow> rows;  // sample-major
  std::vector<double> final_oscillation;  // per sample, at k = K
  double median_oscillation = 0.0;
  double max_oscillation = 0.0;
};

// Deterministic sample points drawn from a seeded mt19937_64.
[[nodiscard]] std::vector<Point> sample_points(const System& system,
                                               std::size_t count,
                                               std::uint64_t seed);

[[nodiscard]] ConvergenceTrace convergence_trace(
    const System& system, const ObservedFunction& f,
    const std::vector<std::pair<std::int64_t, WeightedMeasure>>& measures,
    const std::vector<Point>& points);
[[nodiscard]] ConvergenceTrace convergence_trace(
    const System& system, const ObservedFunction& f,
    const MeasureFamily& family, const std::vector<std::int64_t>& indices,
    std::size_t samples, std::uint64_t seed = 1);

// CSV with header k,n_k,x,re,im,abs,osc_tail.
[[nodiscard]] std::string trace_csv(const ConvergenceTrace& trace);

}  // namespace ergosub
