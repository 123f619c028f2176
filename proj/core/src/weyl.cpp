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

#include "ergosub/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>

#include "ergosub/errors.hpp"
#include "ergosub/measure_io.hpp"
#include "ergosub/parallel.hpp"
#include "ergosub/summation.hpp"
#include "wide_int.hpp"

namespace ergosub {
namespace {

using boost::multiprecision::cpp_int;
using detail::int128;

// A double in [0, 1) as mantissa / 2^exponent, exactly.
struct Dyadic {
  std::int64_t mantissa = 0;
  int exponent = 0;
};

Dyadic to_dyadic(double x) {
  if (x == 0.0) return {};
  int e = 0;
  const double f = std::frexp(x, &e);
  return {static_cast<std::int64_t>(std::ldexp(f, 53)), 53 - e};
}

double reduce_unit(double beta) {
  if (!std::isfinite(beta)) throw ConfigError("frequency must be finite");
  double r = beta - std::floor(beta);
  if (r >= 1.0) r = 0.0;
  return r;
}

void check_bound(double q_max) {
  if (!(q_max >= 1.0) || !(q_max <= kMaxDenominatorBound)) {
    throw ConfigError("q_max must lie in [1, 2^62]");
  }
}

cpp_int pow2(int e) { return cpp_int(1) << e; }

// |beta - p/q| <= 1/(q q_max) and q <= q_max, decided exactly.
bool certifies(double beta, double q_max, std::int64_t p, std::int64_t q) {
  if (q < 1) return false;
  const Dyadic b = to_dyadic(beta);
  const Dyadic bound = to_dyadic(std::ldexp(q_max, -128));
  const int bound_exponent = bound.exponent - 128;  // q_max = M / 2^F
  const cpp_int qm = bound.mantissa;
  // q <= M / 2^F.
  cpp_int lhs = cpp_int(q);
  cpp_int rhs = qm;
  if (bound_exponent >= 0) lhs <<= bound_exponent;
  else rhs <<= -bound_exponent;
  if (lhs > rhs) return false;
  // |m q - p 2^E| * M <= 2^{E + F}.
  cpp_int diff = cpp_int(b.mantissa) * q - cpp_int(p) * pow2(b.exponent);
  if (diff < 0) diff = -diff;
  cpp_int left = diff * qm;
  const int total = b.exponent + bound_exponent;
  if (total >= 0) return left <= pow2(total);
  return (left << -total) <= 1;
}

double exact_error(double beta, std::int64_t p, std::int64_t q) {
  const Dyadic b = to_dyadic(beta);
  cpp_int diff = cpp_int(b.mantissa) * q - cpp_int(p) * pow2(b.exponent);
  if (diff < 0) diff = -diff;
  return std::ldexp(diff.convert_to<double>() / static_cast<double>(q),
                    -b.exponent);
}

ApproxCertificate make_certificate(double beta, double q_max, std::int64_t p,
                                   std::int64_t q) {
  ApproxCertificate cert;
  cert.beta = beta;
  cert.q_max = q_max;
  // p may be q (beta just below 1); the error is to that representative.
  cert.error = exact_error(beta, p, q);
  cert.rational = {((p % q) + q) % q, q};
  if (!verify_certificate(cert)) {
    throw VerificationFailure("approximation certificate failed for beta = " +
                              format_number(beta));
  }
  return cert;
}

std::complex<double> normalized_weyl(std::int64_t n, const Frequency& beta) {
  if (n < 1) throw ConfigError("Weyl sum needs N >= 1");
  if (n > 3'000'000'000LL) throw ConfigError("Weyl sum length too large");
  ComplexCompensatedSum sum;
  for (std::int64_t j = 1; j <= n; ++j) sum.add(beta.character(j * j));
  return sum.value() / static_cast<double>(n);
}

WeylAudit audit(std::int64_t n, double beta, const Frequency& exact_beta) {
  if (n < 2) throw ConfigError("Weyl audit needs N >= 2");
  WeylAudit row;
  row.n = n;
  row.beta = beta;
  const double nd = static_cast<double>(n);
  row.certificate = dirichlet_approx(beta, std::pow(nd, 4.0 / 3.0));
  row.value = std::abs(normalized_weyl(n, exact_beta));
  row.bound_shape =
      1.0 / std::sqrt(static_cast<double>(row.certificate.rational.q)) +
      std::sqrt(std::log(nd)) / std::cbrt(nd);
  row.ratio = row.value / row.bound_shape;
  return row;
}

double quantile(const std::vector<double>& sorted, double level) {
  if (sorted.empty()) return 0.0;
  const auto rank = static_cast<std::size_t>(
      std::ceil(level * static_cast<double>(sorted.size())));
  return sorted[std::min(sorted.size() - 1, rank == 0 ? 0 : rank - 1)];
}

}  // namespace

std::vector<Rational> convergents(double beta, std::int64_t max_q) {
  beta = reduce_unit(beta);
  std::vector<Rational> out{{0, 1}};
  const Dyadic b = to_dyadic(beta);
  // Below 2^-64 the next partial quotient already exceeds any allowed q.
  if (b.mantissa == 0 || beta < 0x1p-64) return out;

  int128 num = b.mantissa;
  int128 den = int128{1} << b.exponent;
  // First quotient is 0 (beta < 1), so start from the state after it.
  int128 h_prev = 1, h = 0;
  int128 k_prev = 0, k = 1;
  std::swap(num, den);  // now expanding 1/beta
  while (den != 0) {
    const int128 a = num / den;
    const int128 h_next = a * h + h_prev;
    const int128 k_next = a * k + k_prev;
    if (k_next > max_q) break;
    out.push_back({static_cast<std::int64_t>(h_next),
                   static_cast<std::int64_t>(k_next)});
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
    const int128 rem = num - a * den;
    num = den;
    den = rem;
  }
  return out;
}

ApproxCertificate dirichlet_approx(double beta, double q_max) {
  check_bound(q_max);
  beta = reduce_unit(beta);
  const auto cf =
      convergents(beta, static_cast<std::int64_t>(std::floor(q_max)));
  const Rational last = cf.back();
  return make_certificate(beta, q_max, last.p, last.q);
}

ApproxCertificate smallest_denominator_approx(double beta, double q_max) {
  check_bound(q_max);
  beta = reduce_unit(beta);
  // The least admissible q beats every smaller denominator, so it is 1 or a
  // convergent denominator.
  std::vector<std::int64_t> candidates{1};
  for (const auto& c :
       convergents(beta, static_cast<std::int64_t>(std::floor(q_max)))) {
    if (c.q > candidates.back()) candidates.push_back(c.q);
  }
  const Dyadic b = to_dyadic(beta);
  for (const std::int64_t q : candidates) {
    // Nearest p to q beta: floor((q m + 2^{E-1}) / 2^E).
    std::int64_t p = 0;
    if (b.mantissa != 0) {
      const cpp_int scaled = cpp_int(b.mantissa) * q + pow2(b.exponent - 1);
      p = static_cast<std::int64_t>(scaled >> b.exponent);
    }
    if (certifies(beta, q_max, p, q)) return make_certificate(beta, q_max, p, q);
  }
  throw VerificationFailure("no admissible denominator for beta = " +
                            format_number(beta));
}

bool verify_certificate(const ApproxCertificate& cert) {
  const auto [p, q] = cert.rational;
  if (q < 1 || p < 0 || p >= q || std::gcd(p, q) != 1) return false;
  return certifies(cert.beta, cert.q_max, p, q) ||
         certifies(cert.beta, cert.q_max, p + q, q);
}

std::complex<double> weyl_sum(std::int64_t n, const Frequency& beta) {
  return normalized_weyl(n, beta);
}

std::complex<double> weyl_sum(std::int64_t n, double beta) {
  return normalized_weyl(n, Frequency::real(beta));
}

std::complex<double> weyl_sum(std::int64_t n, const Rational& beta) {
  return normalized_weyl(n, Frequency::ratio(beta.p, beta.q));
}

std::complex<double> gauss_sum(const Rational& r) {
  if (r.q < 1) throw ConfigError("Gauss sum needs q >= 1");
  const auto beta = Frequency::ratio(r.p, r.q);
  ComplexCompensatedSum sum;
  for (std::int64_t m = 0; m < r.q; ++m) sum.add(beta.character(m * m));
  return sum.value() / static_cast<double>(r.q);
}

WeylAudit weyl_bound_audit(std::int64_t n, double beta) {
  return audit(n, beta, Frequency::real(beta));
}

WeylSweep weyl_audit_sweep(std::int64_t grid,
                           const std::vector<std::int64_t>& ns) {
  if (grid < 1) throw ConfigError("audit grid must be >= 1");
  WeylSweep sweep;
  const auto g = static_cast<std::size_t>(grid);
  sweep.rows.resize(ns.size() * g);
  parallel_for(sweep.rows.size(), [&](std::size_t i) {
    const std::int64_t n = ns[i / g];
    const auto m = static_cast<std::int64_t>(i % g);
    sweep.rows[i] = audit(n, static_cast<double>(m) / static_cast<double>(grid),
                          Frequency::ratio(m, grid));
  });
  std::vector<double> ratios;
  ratios.reserve(sweep.rows.size());
  for (const auto& row : sweep.rows) ratios.push_back(row.ratio);
  std::sort(ratios.begin(), ratios.end());
  if (!ratios.empty()) sweep.max_ratio = ratios.back();
  sweep.median_ratio = quantile(ratios, 0.5);
  sweep.p90_ratio = quantile(ratios, 0.9);
  sweep.p99_ratio = quantile(ratios, 0.99);
  return sweep;
}

std::string weyl_audit_csv(const WeylSweep& sweep) {
  std::string out = "N,beta,p,q,err,value,bound_shape,ratio\n";
  for (const auto& row : sweep.rows) {
    out += std::to_string(row.n) + "," + format_number(row.beta) + "," +
           std::to_string(row.certificate.rational.p) + "," +
           std::to_string(row.certificate.rational.q) + "," +
           format_number(row.certificate.error) + "," +
           format_number(row.value) + "," + format_number(row.bound_shape) +
           "," + format_number(row.ratio) + "\n";
  }
  return out;
}

std::vector<EscapeStep> qn_escape_trace(double gamma,
                                        const std::vector<std::int64_t>& ns) {
  std::vector<EscapeStep> trace;
  for (const std::int64_t n : ns) {
    if (n < 1) throw ConfigError("escape trace needs N >= 1");
    const double nd = static_cast<double>(n);
    EscapeStep step;
    step.n = n;
    step.beta = reduce_unit(gamma + 1.0 / std::sqrt(nd));
    step.certificate =
        smallest_denominator_approx(step.beta, std::pow(nd, 4.0 / 3.0));
    trace.push_back(step);
  }
  std::int64_t tail = std::numeric_limits<std::int64_t>::max();
  for (auto it = trace.rbegin(); it != trace.rend(); ++it) {
    tail = std::min(tail, it->certificate.rational.q);
    it->tail_min_q = tail;
  }
  return trace;
}

}  // namespace ergosub
