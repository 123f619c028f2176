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

#include "ergosub/rho.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "ergosub/errors.hpp"
#include "ergosub/measure_io.hpp"
#include "wide_int.hpp"

namespace ergosub {
namespace {

constexpr std::int64_t kSaturated = std::numeric_limits<std::int64_t>::max();

// base^exponent, saturating at INT64_MAX.
std::int64_t saturating_pow(std::int64_t base, std::int64_t exponent) {
  detail::int128 result = 1;
  for (std::int64_t i = 0; i < exponent; ++i) {
    result *= base;
    if (result > kSaturated) return kSaturated;
  }
  return static_cast<std::int64_t>(result);
}

// Largest j >= 0 with j^root <= value, starting from an estimate.
std::int64_t integer_root_floor(std::int64_t value, std::int64_t root,
                                double estimate) {
  std::int64_t j = std::max<std::int64_t>(0, static_cast<std::int64_t>(
                                                 std::floor(estimate)));
  while (j > 0 && saturating_pow(j, root) > value) --j;
  while (saturating_pow(j + 1, root) <= value) ++j;
  return j;
}

double parse_number(const std::string& text, const std::string& context) {
  double value = 0.0;
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end || !std::isfinite(value)) {
    throw ConfigError("bad number '" + text + "' in " + context);
  }
  return value;
}

}  // namespace

RhoSpec RhoSpec::power(double a) {
  if (!(a > 0.0 && a < 1.0)) {
    throw ConfigError("power rho needs 0 < a < 1, got " + format_number(a));
  }
  return {Kind::kPower, a};
}

RhoSpec RhoSpec::log_power(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw ConfigError("log_power rho needs c > 0");
  }
  return {Kind::kLogPower, c};
}

RhoSpec RhoSpec::log_scaled(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ConfigError("log rho needs C > 0");
  }
  return {Kind::kLogScaled, scale};
}

RhoSpec RhoSpec::constant(double c0) {
  if (!std::isfinite(c0)) throw ConfigError("constant rho must be finite");
  return {Kind::kConstant, c0};
}

RhoSpec RhoSpec::parse(const std::string& descriptor) {
  const auto colon = descriptor.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("rho descriptor needs kind:parameter, got '" +
                      descriptor + "'");
  }
  const std::string kind = descriptor.substr(0, colon);
  const double value = parse_number(descriptor.substr(colon + 1), descriptor);
  if (kind == "power") return power(value);
  if (kind == "log") return log_scaled(value);
  if (kind == "logpow") return log_power(value);
  if (kind == "const") return constant(value);
  throw ConfigError("unknown rho kind '" + kind + "'");
}

std::string RhoSpec::descriptor() const {
  switch (kind_) {
    case Kind::kPower:
      return "power:" + format_number(parameter_);
    case Kind::kLogPower:
      return "logpow:" + format_number(parameter_);
    case Kind::kLogScaled:
      return "log:" + format_number(parameter_);
    case Kind::kConstant:
      return "const:" + format_number(parameter_);
  }
  return {};
}

double RhoSpec::operator()(double x) const {
  switch (kind_) {
    case Kind::kPower:
      return std::pow(x, parameter_);
    case Kind::kLogPower:
      return std::pow(std::log1p(x), parameter_);
    case Kind::kLogScaled:
      return parameter_ * std::log1p(x);
    case Kind::kConstant:
      return parameter_;
  }
  return 0.0;
}

double RhoSpec::derivative(double x) const {
  switch (kind_) {
    case Kind::kPower:
      return parameter_ * std::pow(x, parameter_ - 1.0);
    case Kind::kLogPower: {
      const double l = std::log1p(x);
      return parameter_ * std::pow(l, parameter_ - 1.0) / (1.0 + x);
    }
    case Kind::kLogScaled:
      return parameter_ / (1.0 + x);
    case Kind::kConstant:
      return 0.0;
  }
  return 0.0;
}

double RhoSpec::second_derivative(double x) const {
  switch (kind_) {
    case Kind::kPower:
      return parameter_ * (parameter_ - 1.0) * std::pow(x, parameter_ - 2.0);
    case Kind::kLogPower: {
      const double l = std::log1p(x);
      const double c = parameter_;
      return c / ((1.0 + x) * (1.0 + x)) *
             ((c - 1.0) * std::pow(l, c - 2.0) - std::pow(l, c - 1.0));
    }
    case Kind::kLogScaled:
      return -parameter_ / ((1.0 + x) * (1.0 + x));
    case Kind::kConstant:
      return 0.0;
  }
  return 0.0;
}

double RhoSpec::inverse(double y) const {
  switch (kind_) {
    case Kind::kPower:
      if (y < 0.0) throw ConfigError("rho^{-1} of a negative value");
      return std::pow(y, 1.0 / parameter_);
    case Kind::kLogPower:
      if (y < 0.0) throw ConfigError("rho^{-1} of a negative value");
      return std::expm1(std::pow(y, 1.0 / parameter_));
    case Kind::kLogScaled:
      if (y < 0.0) throw ConfigError("rho^{-1} of a negative value");
      return std::expm1(y / parameter_);
    case Kind::kConstant:
      throw ConfigError("a constant rho has no inverse");
  }
  return 0.0;
}

std::int64_t RhoSpec::integral_root() const {
  if (kind_ != Kind::kPower) return 0;
  const double reciprocal = 1.0 / parameter_;
  const double rounded = std::round(reciprocal);
  if (rounded >= 2.0 && std::abs(reciprocal - rounded) < 1e-12) {
    return static_cast<std::int64_t>(rounded);
  }
  return 0;
}

std::int64_t RhoSpec::floor_at(std::int64_t k) const {
  const long double x = static_cast<long double>(k);
  switch (kind_) {
    case Kind::kPower: {
      if (const auto root = integral_root(); root != 0) {
        return integer_root_floor(k, root, std::pow(static_cast<double>(k),
                                                    parameter_));
      }
      return static_cast<std::int64_t>(
          std::floor(std::pow(x, static_cast<long double>(parameter_))));
    }
    case Kind::kLogPower:
      return static_cast<std::int64_t>(std::floor(
          std::pow(std::log1p(x), static_cast<long double>(parameter_))));
    case Kind::kLogScaled:
      return static_cast<std::int64_t>(
          std::floor(static_cast<long double>(parameter_) * std::log1p(x)));
    case Kind::kConstant:
      return static_cast<std::int64_t>(std::floor(parameter_));
  }
  return 0;
}

std::int64_t RhoSpec::floor_at_sqrt(std::int64_t l) const {
  if (kind_ == Kind::kPower) {
    if (const auto root = integral_root(); root != 0) {
      return integer_root_floor(
          l, 2 * root, std::pow(static_cast<double>(l), parameter_ / 2.0));
    }
  }
  if (kind_ == Kind::kConstant) return floor_at(0);
  const long double x = std::sqrt(static_cast<long double>(l));
  switch (kind_) {
    case Kind::kPower:
      return static_cast<std::int64_t>(
          std::floor(std::pow(x, static_cast<long double>(parameter_))));
    case Kind::kLogPower:
      return static_cast<std::int64_t>(std::floor(
          std::pow(std::log1p(x), static_cast<long double>(parameter_))));
    case Kind::kLogScaled:
      return static_cast<std::int64_t>(
          std::floor(static_cast<long double>(parameter_) * std::log1p(x)));
    case Kind::kConstant:
      break;
  }
  return 0;
}

std::int64_t RhoSpec::first_index_reaching(std::int64_t j) const {
  if (kind_ == Kind::kConstant) return j <= floor_at(1) ? 1 : -1;
  if (j <= floor_at(1)) return 1;
  const double guess = std::ceil(inverse(static_cast<double>(j)));
  if (!(guess < 9.0e18)) throw ConfigError("rho block index out of range");
  std::int64_t k = std::max<std::int64_t>(1, static_cast<std::int64_t>(guess) - 2);
  while (floor_at(k) < j) ++k;
  while (k > 1 && floor_at(k - 1) >= j) --k;
  return k;
}

std::int64_t RhoSpec::first_square_reaching(std::int64_t j) const {
  if (kind_ == Kind::kConstant) return j <= floor_at(1) ? 1 : -1;
  if (j <= floor_at_sqrt(1)) return 1;
  const double root = inverse(static_cast<double>(j));
  const double guess = std::ceil(root * root);
  if (!(guess < 9.0e18)) throw ConfigError("rho block index out of range");
  std::int64_t l = std::max<std::int64_t>(1, static_cast<std::int64_t>(guess) - 2);
  while (floor_at_sqrt(l) < j) ++l;
  while (l > 1 && floor_at_sqrt(l - 1) >= j) --l;
  return l;
}

bool RhoSpec::meets_threshold_hypotheses() const {
  switch (kind_) {
    case Kind::kPower:
      return parameter_ < 1.0 / 3.0;
    case Kind::kLogPower:
    case Kind::kLogScaled:
      return true;
    case Kind::kConstant:
      return false;
  }
  return false;
}

double RhoSpec::epsilon() const {
  if (kind_ == Kind::kPower) return 1.0 / 3.0 - parameter_;
  return 0.05;
}

double RhoSpec::fitted_log_constant(double x_max) const {
  constexpr int kSamples = 2048;
  const double top = std::max(x_max, 2.0);
  double best = 0.0;
  for (int i = 0; i <= kSamples; ++i) {
    const double x = std::pow(top, static_cast<double>(i) / kSamples);
    best = std::max(best, x * derivative(x));
  }
  return best;
}

HypothesisCheck check_hypotheses(const RhoSpec& rho, double x0, double x1,
                                 int samples) {
  HypothesisCheck check;
  const double ratio = std::log(x1 / x0);
  double prev_value = rho(x0);
  double prev_d1 = rho.derivative(x0);
  double prev_d2 = rho.second_derivative(x0);
  for (int i = 0; i <= samples; ++i) {
    const double x = x0 * std::exp(ratio * i / samples);
    const double value = rho(x);
    const double d1 = rho.derivative(x);
    const double d2 = rho.second_derivative(x);
    const double slack = 1e-12 * std::max(1.0, std::abs(value));
    if (value < prev_value - slack) check.nondecreasing = false;
    if (d1 > prev_d1 + 1e-12 * std::abs(prev_d1)) {
      check.derivative_nonincreasing = false;
    }
    if (d2 < prev_d2 - 1e-12 * std::abs(prev_d2) || d2 > 0.0) {
      check.second_derivative_nondecreasing = false;
    }
    if (rho.kind() != RhoSpec::Kind::kConstant) {
      const double back = rho(rho.inverse(value));
      const double err = std::abs(back - value) / std::max(1.0, std::abs(value));
      check.worst_inverse_error = std::max(check.worst_inverse_error, err);
      if (err > 1e-9) check.inverse_round_trip = false;
    }
    prev_value = value;
    prev_d1 = d1;
    prev_d2 = d2;
  }
  return check;
}

}  // namespace ergosub
