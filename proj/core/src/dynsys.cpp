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

#include "ergosub/dynsys.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ergosub/errors.hpp"
#include "ergosub/frequency.hpp"
#include "ergosub/measure_io.hpp"
#include "ergosub/parallel.hpp"
#include "ergosub/summation.hpp"

namespace ergosub {
namespace {

// frac(golden ratio) * 2^64, rounded to the nearest odd integer.
constexpr std::uint64_t kGoldenNumerator = 0x9E3779B97F4A7C15ULL;

std::int64_t positive_mod(std::int64_t x, std::int64_t m) {
  const std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

}  // namespace

System System::torus_rotation(std::uint64_t alpha_numerator) {
  return {Kind::kTorusRotation, alpha_numerator, 0};
}

System System::golden_rotation() { return torus_rotation(kGoldenNumerator); }

System System::cyclic_shift(std::int64_t modulus) {
  if (modulus < 1) throw ConfigError("cyclic shift needs M >= 1");
  return {Kind::kCyclicShift, 0, modulus};
}

double System::alpha() const { return std::ldexp(static_cast<double>(alpha_), -64); }

std::string System::descriptor() const {
  if (kind_ == Kind::kCyclicShift) return "cyclic:" + std::to_string(modulus_);
  return "rotation:" + std::to_string(alpha_) + "/2^64";
}

Point System::orbit(const Point& x, std::int64_t j) const {
  Point out = x;
  if (kind_ == Kind::kTorusRotation) {
    // Unsigned wrap-around is exactly arithmetic mod 1 on the 2^-64 grid.
    out.fixed = x.fixed + static_cast<std::uint64_t>(j) * alpha_;
  } else {
    out.residue = positive_mod(x.residue + positive_mod(j, modulus_), modulus_);
  }
  return out;
}

double System::coordinate(const Point& x) const {
  if (kind_ == Kind::kTorusRotation) {
    return std::ldexp(static_cast<double>(x.fixed), -64);
  }
  return static_cast<double>(x.residue) / static_cast<double>(modulus_);
}

ObservedFunction ObservedFunction::indicator(double lo, double hi) {
  if (!(0.0 <= lo && lo <= hi && hi <= 1.0)) {
    throw ConfigError("indicator needs 0 <= lo <= hi <= 1");
  }
  ObservedFunction f;
  f.kind_ = Kind::kIndicator;
  f.lo_value_ = lo;
  f.hi_value_ = hi;
  f.full_ = hi == 1.0;
  f.lo_ = lo == 1.0 ? 0 : static_cast<std::uint64_t>(std::ceil(std::ldexp(lo, 64)));
  f.hi_ = f.full_ ? 0 : static_cast<std::uint64_t>(std::ceil(std::ldexp(hi, 64)));
  return f;
}

ObservedFunction ObservedFunction::trig(std::int64_t m) {
  ObservedFunction f;
  f.kind_ = Kind::kTrig;
  f.m_ = m;
  return f;
}

ObservedFunction ObservedFunction::table(std::vector<double> values) {
  if (values.empty()) throw ConfigError("table function needs values");
  for (const double v : values) {
    if (!std::isfinite(v)) throw ConfigError("table values must be finite");
  }
  ObservedFunction f;
  f.kind_ = Kind::kTable;
  f.table_ = std::move(values);
  return f;
}

std::complex<double> ObservedFunction::operator()(const System& system,
                                                  const Point& x) const {
  const bool torus = system.kind() == System::Kind::kTorusRotation;
  switch (kind_) {
    case Kind::kIndicator: {
      if (lo_value_ == hi_value_) return 0.0;
      if (torus) {
        return x.fixed >= lo_ && (full_ || x.fixed < hi_) ? 1.0 : 0.0;
      }
      const auto r = static_cast<double>(x.residue);
      const auto m = static_cast<double>(system.modulus());
      return lo_value_ * m <= r && r < hi_value_ * m ? 1.0 : 0.0;
    }
    case Kind::kTrig:
      return torus ? Frequency::fixed64(x.fixed).character(m_)
                   : Frequency::ratio(x.residue, system.modulus()).character(m_);
    case Kind::kTable:
      if (torus || static_cast<std::int64_t>(table_.size()) != system.modulus()) {
        throw ConfigError("table function needs a cyclic shift of matching size");
      }
      return table_[static_cast<std::size_t>(x.residue)];
  }
  return 0.0;
}

std::complex<double> ObservedFunction::mean(const System& system) const {
  const bool torus = system.kind() == System::Kind::kTorusRotation;
  switch (kind_) {
    case Kind::kIndicator: {
      if (torus) return hi_value_ - lo_value_;
      std::int64_t hits = 0;
      for (std::int64_t r = 0; r < system.modulus(); ++r) {
        if ((*this)(system, Point{0, r}) != 0.0) ++hits;
      }
      return static_cast<double>(hits) / static_cast<double>(system.modulus());
    }
    case Kind::kTrig:
      if (torus) return m_ == 0 ? 1.0 : 0.0;
      return m_ % system.modulus() == 0 ? 1.0 : 0.0;
    case Kind::kTable:
      if (torus || static_cast<std::int64_t>(table_.size()) != system.modulus()) {
        throw ConfigError("table function needs a cyclic shift of matching size");
      }
      return compensated_sum(table_) / static_cast<double>(table_.size());
  }
  return 0.0;
}

std::string ObservedFunction::descriptor() const {
  switch (kind_) {
    case Kind::kIndicator:
      return "indicator:" + format_number(lo_value_) + ":" + format_number(hi_value_);
    case Kind::kTrig:
      return "trig:" + std::to_string(m_);
    case Kind::kTable:
      return "table:" + std::to_string(table_.size());
  }
  return {};
}

std::complex<double> weighted_average(const System& system,
                                      const ObservedFunction& f,
                                      const WeightedMeasure& mu,
                                      const Point& x) {
  ComplexCompensatedSum sum;
  for (const auto& a : mu.atoms()) {
    sum.add(a.weight * f(system, system.orbit(x, a.site)));
  }
  return sum.value();
}

std::vector<Point> sample_points(const System& system, std::size_t count,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point> points(count);
  for (auto& p : points) {
    const std::uint64_t draw = rng();
    if (system.kind() == System::Kind::kTorusRotation) {
      p.fixed = draw;
    } else {
      p.residue = static_cast<std::int64_t>(
          draw % static_cast<std::uint64_t>(system.modulus()));
    }
  }
  return points;
}

ConvergenceTrace convergence_trace(
    const System& system, const ObservedFunction& f,
    const std::vector<std::pair<std::int64_t, WeightedMeasure>>& measures,
    const std::vector<Point>& points) {
  const std::size_t count = measures.size();
  std::vector<std::vector<TraceRow>> per_sample(points.size());
  parallel_for(points.size(), [&](std::size_t s) {
    auto& rows = per_sample[s];
    rows.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      TraceRow& row = rows[i];
      row.k = i + 1;
      row.n_k = measures[i].first;
      row.sample = s;
      row.x = system.coordinate(points[s]);
      row.value = weighted_average(system, f, measures[i].second, points[s]);
      double diameter = 0.0;
      for (std::size_t a = i / 2; a <= i; ++a) {
        for (std::size_t b = a + 1; b <= i; ++b) {
          diameter = std::max(diameter, std::abs(rows[a].value - rows[b].value));
        }
      }
      row.osc_tail = diameter;
    }
  });

  ConvergenceTrace trace;
  for (auto& rows : per_sample) {
    trace.final_oscillation.push_back(rows.empty() ? 0.0 : rows.back().osc_tail);
    trace.rows.insert(trace.rows.end(), rows.begin(), rows.end());
  }
  if (!trace.final_oscillation.empty()) {
    auto sorted = trace.final_oscillation;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    trace.median_oscillation = sorted.size() % 2 == 1
                                   ? sorted[mid]
                                   : (sorted[mid - 1] + sorted[mid]) / 2.0;
    trace.max_oscillation = sorted.back();
  }
  return trace;
}

ConvergenceTrace convergence_trace(const System& system,
                                   const ObservedFunction& f,
                                   const MeasureFamily& family,
                                   const std::vector<std::int64_t>& indices,
                                   std::size_t samples, std::uint64_t seed) {
  std::vector<std::pair<std::int64_t, WeightedMeasure>> measures;
  for (const std::int64_t n : indices) measures.emplace_back(n, family.generate(n));
  return convergence_trace(system, f, measures,
                           sample_points(system, samples, seed));
}

std::string trace_csv(const ConvergenceTrace& trace) {
  std::string out = "k,n_k,x,re,im,abs,osc_tail\n";
  for (const auto& row : trace.rows) {
    out += std::to_string(row.k) + "," + std::to_string(row.n_k) + "," +
           format_number(row.x) + "," + format_number(row.value.real()) + "," +
           format_number(row.value.imag()) + "," +
           format_number(std::abs(row.value)) + "," +
           format_number(row.osc_tail) + "\n";
  }
  return out;
}

}  // namespace ergosub
