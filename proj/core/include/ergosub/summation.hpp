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
#include <span>
#include <vector>

namespace ergosub {

// Neumaier's variant of Kahan summation. Unlike plain Kahan it stays accurate
// when an addend is larger in magnitude than the running sum.
class CompensatedSum {
 public:
  void add(double value) {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double value) {
    add(value);
    return *this;
  }

  // Folds another partial sum in; used to merge per-thread partials.
  void merge(const CompensatedSum& other) {
    add(other.sum_);
    add(other.compensation_);
  }

  [[nodiscard]] double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

class ComplexCompensatedSum {
 public:
  void add(std::complex<double> value) {
    re_.add(value.real());
    im_.add(value.imag());
  }

  ComplexCompensatedSum& operator+=(std::complex<double> value) {
    add(value);
    return *this;
  }

  void merge(const ComplexCompensatedSum& other) {
    re_.merge(other.re_);
    im_.merge(other.im_);
  }

  [[nodiscard]] std::complex<double> value() const {
    return {re_.value(), im_.value()};
  }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

// Error-free running sum of doubles kept as a nonoverlapping expansion
// (Shewchuk), so the sign and zero tests are exact.
class ExactSum {
 public:
  void add(double value);

  [[nodiscard]] bool is_zero() const { return components_.empty(); }
  // Largest-magnitude component; 0 when the sum is zero.
  [[nodiscard]] double leading() const {
    return components_.empty() ? 0.0 : components_.back();
  }
  // The sum rounded once more (components added smallest first).
  [[nodiscard]] double approx() const;

 private:
  // Increasing magnitude, no zeros.
  std::vector<double> components_;
};

[[nodiscard]] double compensated_sum(std::span<const double> values);
[[nodiscard]] std::complex<double> compensated_sum(
    std::span<const std::complex<double>> values);

}  // namespace ergosub
