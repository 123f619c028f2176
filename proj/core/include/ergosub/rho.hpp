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

#include <cstdint>
#include <string>
#include <vector>

namespace ergosub {

// A slowly growing perturbation rho drawn from a closed set of kinds, so that
// rho', rho'' and rho^{-1} are available in closed form:
//   power(a)       x^a                 0 < a < 1
//   log_power(c)   (log(1 + x))^c      c > 0
//   log_scaled(C)  C log(1 + x)        C > 0
//   constant(c0)   c0
// The threshold hypotheses (rho' <~ x^{-(eps + 2/3)}) need a < 1/3 for the
// power kind; see meets_threshold_hypotheses().
class RhoSpec {
 public:
  enum class Kind { kPower, kLogPower, kLogScaled, kConstant };

  [[nodiscard]] static RhoSpec power(double a);
  [[nodiscard]] static RhoSpec log_power(double c);
  [[nodiscard]] static RhoSpec log_scaled(double scale);
  [[nodiscard]] static RhoSpec constant(double c0);
  // "power:0.25", "log:1", "logpow:2", "const:3"; throws ConfigError.
  [[nodiscard]] static RhoSpec parse(const std::string& descriptor);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] double parameter() const { return parameter_; }
  [[nodiscard]] std::string descriptor() const;

  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] double derivative(double x) const;
  [[nodiscard]] double second_derivative(double x) const;
  // Throws ConfigError for the constant kind or y outside the range.
  [[nodiscard]] double inverse(double y) const;

  // floor(rho(k)) and floor(rho(sqrt(l))) for integers, decided exactly for
  // power kinds with integral 1/a and in long double otherwise.
  [[nodiscard]] std::int64_t floor_at(std::int64_t k) const;
  [[nodiscard]] std::int64_t floor_at_sqrt(std::int64_t l) const;

  // Smallest integer k >= 1 with floor_at(k) >= j, or -1 if rho never gets
  // there (constant kind).
  [[nodiscard]] std::int64_t first_index_reaching(std::int64_t j) const;
  // Same for floor_at_sqrt.
  [[nodiscard]] std::int64_t first_square_reaching(std::int64_t j) const;

  [[nodiscard]] bool meets_threshold_hypotheses() const;
  // Power kinds: 1/3 - a. Other kinds get the fixed reporting value 0.05.
  [[nodiscard]] double epsilon() const;

  // sup of x rho'(x) over a log-spaced sample of [1, x_max]: the constant C
  // in rho'(x) <= C / x.
  [[nodiscard]] double fitted_log_constant(double x_max) const;

 private:
  RhoSpec(Kind kind, double parameter) : kind_(kind), parameter_(parameter) {}
  // 1/a when it is an integer (power kind), else 0.
  [[nodiscard]] std::int64_t integral_root() const;

  Kind kind_;
  double parameter_;
};

struct HypothesisCheck {
  bool nondecreasing = true;
  bool derivative_nonincreasing = true;
  bool second_derivative_nondecreasing = true;
  bool inverse_round_trip = true;
  double worst_inverse_error = 0.0;

  [[nodiscard]] bool ok() const {
    return nondecreasing && derivative_nonincreasing &&
           second_derivative_nondecreasing && inverse_round_trip;
  }
};

// Samples [x0, x1] on a log grid and checks the monotonicity hypotheses and
// rho(rho^{-1}(y)) = y to 1e-9 relative.
[[nodiscard]] HypothesisCheck check_hypotheses(const RhoSpec& rho, double x0,
                                               double x1, int samples = 512);

}  // namespace ergosub
