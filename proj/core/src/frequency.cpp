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

#include "ergosub/frequency.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "ergosub/errors.hpp"
#include "ergosub/measure_io.hpp"
#include "wide_int.hpp"

namespace ergosub {
namespace {

constexpr double kMaxExactSite = 9007199254740992.0;  // 2^53

double centre(double t) {
  if (t >= 0.5) return t - 1.0;
  if (t < -0.5) return t + 1.0;
  return t;
}

}  // namespace

Frequency Frequency::real(double gamma) {
  if (!std::isfinite(gamma)) {
    throw ConfigError("frequency must be finite");
  }
  double reduced = gamma - std::floor(gamma);
  if (reduced >= 1.0) reduced = 0.0;
  Frequency f;
  f.kind_ = Kind::kReal;
  f.real_ = reduced;
  return f;
}

Frequency Frequency::ratio(std::int64_t p, std::int64_t q) {
  if (q <= 0) throw ConfigError("frequency denominator must be positive");
  std::int64_t r = p % q;
  if (r < 0) r += q;
  const std::int64_t g = std::gcd(r, q);
  Frequency f;
  f.kind_ = Kind::kRational;
  f.p_ = g == 0 ? 0 : r / g;
  f.q_ = g == 0 ? 1 : q / g;
  if (f.p_ == 0) f.q_ = 1;
  return f;
}

Frequency Frequency::fixed64(std::uint64_t numerator) {
  Frequency f;
  f.kind_ = Kind::kFixed64;
  f.u_ = numerator;
  return f;
}

double Frequency::value() const {
  switch (kind_) {
    case Kind::kReal:
      return real_;
    case Kind::kRational:
      return static_cast<double>(p_) / static_cast<double>(q_);
    case Kind::kFixed64:
      return std::ldexp(static_cast<double>(u_ >> 11), -53);
  }
  return 0.0;
}

double Frequency::circle_norm() const {
  const double v = value();
  return std::min(v, 1.0 - v);
}

double Frequency::phase(std::int64_t site) const {
  switch (kind_) {
    case Kind::kReal: {
      const double j = static_cast<double>(site);
      if (std::abs(j) > kMaxExactSite) {
        throw ConfigError("site too large for real-frequency phase reduction");
      }
      // j * gamma = product + error exactly (error-free transformation).
      const double product = j * real_;
      const double error = std::fma(j, real_, -product);
      const double frac = product - std::nearbyint(product);
      return centre(frac + error);
    }
    case Kind::kRational: {
      detail::int128 r = static_cast<detail::int128>(site) * p_ % q_;
      if (r < 0) r += q_;
      if (2 * r >= q_) r -= q_;
      return static_cast<double>(static_cast<std::int64_t>(r)) /
             static_cast<double>(q_);
    }
    case Kind::kFixed64: {
      const std::uint64_t u = static_cast<std::uint64_t>(site) * u_;
      return std::ldexp(static_cast<double>(static_cast<std::int64_t>(u)), -64);
    }
  }
  return 0.0;
}

Frequency Frequency::operator+(const Frequency& other) const {
  if (kind_ == Kind::kRational && other.kind_ == Kind::kRational) {
    const detail::int128 l = static_cast<detail::int128>(q_) / std::gcd(q_, other.q_) *
                       other.q_;
    if (l <= std::numeric_limits<std::int64_t>::max()) {
      const detail::int128 num = static_cast<detail::int128>(p_) * (l / q_) +
                           static_cast<detail::int128>(other.p_) * (l / other.q_);
      return ratio(static_cast<std::int64_t>(num % l),
                   static_cast<std::int64_t>(l));
    }
  }
  if (kind_ == Kind::kFixed64 && other.kind_ == Kind::kFixed64) {
    return fixed64(u_ + other.u_);
  }
  return real(value() + other.value());
}

Frequency Frequency::operator-() const {
  switch (kind_) {
    case Kind::kReal:
      return real(-real_);
    case Kind::kRational:
      return ratio(-p_, q_);
    case Kind::kFixed64:
      return fixed64(~u_ + 1);
  }
  return {};
}

std::string Frequency::to_string() const {
  if (kind_ == Kind::kRational) {
    return std::to_string(p_) + "/" + std::to_string(q_);
  }
  return format_number(value());
}

}  // namespace ergosub
