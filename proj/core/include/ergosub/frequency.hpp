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
#include <numbers>
#include <string>

namespace ergosub {

// e(t) = exp(2 pi i t). Arguments are expected to be already reduced to
// [-1/2, 1/2]; see Frequency::phase.
[[nodiscard]] inline std::complex<double> unit_character(double t) {
  const double angle = 2.0 * std::numbers::pi * t;
  return {std::cos(angle), std::sin(angle)};
}

// A point on the circle R/Z.
//
// Three storage forms are kept so that site * gamma mod 1 can be reduced
// without losing the integer part of large products:
//   * Real      - an arbitrary double, reduced with an error-free product
//                 (fma), accurate to ~1e-16 for |site| < 2^53;
//   * Rational  - p/q in lowest terms, reduced with 128-bit integers (exact);
//   * Fixed64   - u / 2^64, reduced with wrapping 64-bit arithmetic (exact).
//
// The Fourier convention used throughout the library is
//   mu_hat(gamma) = sum_j mu(j) e(j gamma),
// so Frequency::character(1) at gamma = 1/4 is i.
class Frequency {
 public:
  enum class Kind { kReal, kRational, kFixed64 };

  Frequency() = default;

  // Reduces into [0, 1).
  [[nodiscard]] static Frequency real(double gamma);
  // q > 0; the fraction is put in lowest terms and p reduced mod q.
  [[nodiscard]] static Frequency ratio(std::int64_t p, std::int64_t q);
  [[nodiscard]] static Frequency fixed64(std::uint64_t numerator);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] double value() const;
  // Distance to the nearest integer, the |gamma| of the circle.
  [[nodiscard]] double circle_norm() const;

  // Rational accessors; only meaningful for Kind::kRational.
  [[nodiscard]] std::int64_t numerator() const { return p_; }
  [[nodiscard]] std::int64_t denominator() const { return q_; }
  [[nodiscard]] std::uint64_t fixed_numerator() const { return u_; }

  // site * gamma mod 1, centred into [-1/2, 1/2).
  [[nodiscard]] double phase(std::int64_t site) const;
  // e(site * gamma).
  [[nodiscard]] std::complex<double> character(std::int64_t site) const {
    return unit_character(phase(site));
  }

  // Exact when both operands are Rational (and the common denominator fits)
  // or both Fixed64; otherwise falls back to a Real sum.
  [[nodiscard]] Frequency operator+(const Frequency& other) const;
  [[nodiscard]] Frequency operator-() const;
  [[nodiscard]] Frequency operator-(const Frequency& other) const {
    return *this + (-other);
  }

  [[nodiscard]] std::string to_string() const;

 private:
  Kind kind_ = Kind::kRational;
  double real_ = 0.0;
  std::int64_t p_ = 0;
  std::int64_t q_ = 1;
  std::uint64_t u_ = 0;
};

}  // namespace ergosub
