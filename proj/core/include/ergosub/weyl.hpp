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
#include <vector>

#include "ergosub/frequency.hpp"

namespace ergosub {

struct Rational {
  std::int64_t p = 0;
  std::int64_t q = 1;

  [[nodiscard]] double value() const {
    return static_cast<double>(p) / static_cast<double>(q);
  }
  friend bool operator==(const Rational&, const Rational&) = default;
};

// p/q with q <= q_max and |beta - p/q| <= 1/(q q_max) on the circle; p is
// reduced into [0, q). error is the distance from beta to the nearest
// p'/q with p' = p (mod q).
struct ApproxCertificate {
  double beta = 0.0;
  double q_max = 1.0;
  Rational rational;
  double error = 0.0;
};

// Largest q_max accepted by the approximation routines.
inline constexpr double kMaxDenominatorBound = 0x1p62;

// The last continued-fraction convergent of beta with denominator <= q_max.
// The expansion runs in exact integer arithmetic on the double's dyadic value;
// the certificate is checked exactly before return (VerificationFailure
// otherwise). beta is taken mod 1; q_max must lie in [1, 2^62].
[[nodiscard]] ApproxCertificate dirichlet_approx(double beta, double q_max);

// The certificate with the smallest denominator q: the least q for which some
// p has |beta - p/q| <= 1/(q q_max); p is the nearest such numerator.
[[nodiscard]] ApproxCertificate smallest_denominator_approx(double beta,
                                                            double q_max);

// Exact (multiprecision) check of q <= q_max and
// |beta - p/q| <= 1/(q q_max) for some representative of p mod q.
[[nodiscard]] bool verify_certificate(const ApproxCertificate& cert);

// Continued-fraction convergents p_k/q_k of beta in [0, 1), in order, up to
// denominator `max_q` (or until the expansion terminates).
[[nodiscard]] std::vector<Rational> convergents(double beta,
                                                std::int64_t max_q);

// (1/N) sum_{j=1}^N e(j^2 beta), compensated.
[[nodiscard]] std::complex<double> weyl_sum(std::int64_t n,
                                            const Frequency& beta);
[[nodiscard]] std::complex<double> weyl_sum(std::int64_t n, double beta);
[[nodiscard]] std::complex<double> weyl_sum(std::int64_t n, const Rational& beta);

// (1/q) sum_{m=0}^{q-1} e(m^2 p / q) with exact residues.
[[nodiscard]] std::complex<double> gauss_sum(const Rational& r);

struct WeylAudit {
  std::int64_t n = 0;
  double beta = 0.0;
  ApproxCertificate certificate;  // at q_max = N^{4/3}
  double value = 0.0;             // |weyl_sum(N, beta)|
  double bound_shape = 0.0;       // 1/sqrt(q) + sqrt(log N) / N^{1/3}
  double ratio = 0.0;             // value / bound_shape
};

[[nodiscard]] WeylAudit weyl_bound_audit(std::int64_t n, double beta);

struct WeylSweep {
  std::vector<WeylAudit> rows;  // N-major, then beta = m / grid
  double max_ratio = 0.0;
  double median_ratio = 0.0;
  double p90_ratio = 0.0;
  double p99_ratio = 0.0;
};

// Every beta = m / grid, m = 0..grid-1, against every N in the list.
[[nodiscard]] WeylSweep weyl_audit_sweep(std::int64_t grid,
                                         const std::vector<std::int64_t>& ns);
// CSV with header N,beta,p,q,err,value,bound_shape,ratio.
[[nodiscard]] std::string weyl_audit_csv(const WeylSweep& sweep);

struct EscapeStep {
  std::int64_t n = 0;
  double beta = 0.0;  // frac(gamma + N^{-1/2})
  ApproxCertificate certificate;  // smallest denominator at q_max = N^{4/3}
  // min of q over this and every later N in the trace.
  std::int64_t tail_min_q = 0;
};

// How the approximating denominator of gamma + N^{-1/2} escapes to infinity.
[[nodiscard]] std::vector<EscapeStep> qn_escape_trace(
    double gamma, const std::vector<std::int64_t>& ns);

}  // namespace ergosub
