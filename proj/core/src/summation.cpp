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

#include "ergosub/summation.hpp"

#include <cstddef>

namespace ergosub {
namespace {

// a + b = sum + err exactly.
void two_sum(double a, double b, double& sum, double& err) {
  sum = a + b;
  const double bv = sum - a;
  const double av = sum - bv;
  err = (a - av) + (b - bv);
}

}  // namespace

void ExactSum::add(double value) {
  std::vector<double> next;
  next.reserve(components_.size() + 1);
  double carry = value;
  for (const double c : components_) {
    double sum = 0.0;
    double err = 0.0;
    two_sum(carry, c, sum, err);
    if (err != 0.0) next.push_back(err);
    carry = sum;
  }
  if (carry != 0.0) next.push_back(carry);
  components_ = std::move(next);
}

double ExactSum::approx() const {
  double out = 0.0;
  for (const double c : components_) out += c;
  return out;
}

double compensated_sum(std::span<const double> values) {
  CompensatedSum sum;
  for (double v : values) sum.add(v);
  return sum.value();
}

std::complex<double> compensated_sum(
    std::span<const std::complex<double>> values) {
  ComplexCompensatedSum sum;
  for (const auto& v : values) sum.add(v);
  return sum.value();
}

}  // namespace ergosub
