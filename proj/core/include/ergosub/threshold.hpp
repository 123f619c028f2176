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
#include <optional>
#include <string>
#include <vector>

#include "ergosub/frequency.hpp"
#include "ergosub/rho.hpp"
#include "ergosub/weyl.hpp"

namespace ergosub {

// The block I_j = {x > 0 : floor(rho(x)) = j} = [rho^{-1}(j), rho^{-1}(j+1)),
// together with the integers k >= 1 it contains (floor(rho(k)) = j, decided
// exactly by RhoSpec::floor_at). A horizon truncates the integer range.
struct BlockStructure {
  std::int64_t j = 0;
  double lo = 0.0;
  double hi = 0.0;
  double length = 0.0;  // hi - lo; infinite for a constant rho without horizon
  std::int64_t first_k = 1;
  std::int64_t last_k = 0;
  // Integers l >= 1 with sqrt(l) in I_j, same truncation (l <= horizon^2).
  std::int64_t first_l = 1;
  std::int64_t last_l = 0;

  [[nodiscard]] std::int64_t integer_count() const {
    return last_k >= first_k ? last_k - first_k + 1 : 0;
  }
  [[nodiscard]] std::int64_t square_count() const {
    return last_l >= first_l ? last_l - first_l + 1 : 0;
  }
};

// Throws ConfigError when j < floor(rho(1)), or j > floor(rho(horizon)) with a
// horizon. A constant rho has the single block j = floor(c0), which needs a
// horizon.
[[nodiscard]] BlockStructure block_structure(
    const RhoSpec& rho, std::int64_t j,
    std::optional<std::int64_t> horizon = std::nullopt);

// (rho^{-1}(j))^2.
[[nodiscard]] double phi_of(const RhoSpec& rho, double j);

// sum over the integers k of the block of e(k^2 beta).
[[nodiscard]] std::complex<double> block_sum(
    const RhoSpec& rho, std::int64_t j, const Frequency& beta,
    std::optional<std::int64_t> horizon = std::nullopt);

// sum over l with sqrt(l) in I_j of e(l alpha) / (2 sqrt(l)).
[[nodiscard]] std::complex<double> vj_sum(
    const RhoSpec& rho, std::int64_t j, double alpha,
    std::optional<std::int64_t> horizon = std::nullopt);

enum class ArcBranch { kMajor, kMinor };
[[nodiscard]] const char* branch_name(ArcBranch branch);

struct ArcRow {
  std::int64_t j = 0;
  ArcBranch branch = ArcBranch::kMajor;
  // Major: |block_sum - Lambda(p/q) V_j(beta - p/q)|, bound N^{-eps/6} L_j.
  // Minor: |block_sum|, bound N^{-eps/7} L_j.
  double value = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

struct ArcAudit {
  std::int64_t n = 0;
  double beta = 0.0;
  double epsilon = 0.0;
  ApproxCertificate certificate;  // q_max = N^{4/3}
  ArcBranch branch = ArcBranch::kMajor;  // q <= N^{2/3}
  std::vector<ArcRow> rows;  // every full block j with j > rho(N^{1-eps})
  double max_ratio = 0.0;
};

[[nodiscard]] ArcAudit major_arc_audit(const RhoSpec& rho, std::int64_t n,
                                       double beta, double epsilon);

struct CesaroMean {
  // (1/N^2) sum_j e(j beta) sum_{l : sqrt(l) in I_j} e(l alpha), over the
  // full blocks j = floor(rho(1)) .. floor(rho(N)), summed blockwise through
  // the geometric closed form and directly over l.
  std::complex<double> blockwise;
  std::complex<double> direct;
  // L_{floor(rho(N))} / (N |beta|), |beta| the circle norm; infinite at 0.
  double bound_shape = 0.0;
  double ratio = 0.0;
};

[[nodiscard]] CesaroMean cesaro_expos(const RhoSpec& rho, std::int64_t n,
                                      double beta, double alpha);

// Uniform points m / grid inside [delta, 1 - delta] plus every p/q with
// q <= max_q there.
[[nodiscard]] std::vector<double> threshold_beta_grid(std::size_t grid,
                                                      double delta = 0.05,
                                                      std::int64_t max_q = 32);

struct TransformRow {
  std::int64_t n = 0;
  double beta = 0.0;
  std::int64_t q = 1;
  ArcBranch branch = ArcBranch::kMajor;
  double value = 0.0;  // |mu_N^(beta)|
  double bound = 0.0;  // N^{-eps/7} + L_{floor(rho(N))} / (N |beta|)
  double ratio = 0.0;
};

struct TransformAudit {
  std::string rho;
  double epsilon = 0.0;
  std::vector<TransformRow> rows;
  double max_ratio = 0.0;
  // Per N: max over the grid of |(1 - e(beta)) mu_N^(beta)|.
  std::vector<std::int64_t> ns;
  std::vector<double> functional_max;
  [[nodiscard]] bool strictly_decreasing() const;
};

[[nodiscard]] TransformAudit transform_bound_audit(
    const RhoSpec& rho, const std::vector<std::int64_t>& ns,
    const std::vector<double>& betas, double epsilon);

// CSV with header rho,N,beta,q,branch,value,bound,ratio.
[[nodiscard]] std::string transform_audit_csv(const TransformAudit& audit);
// Same columns plus j.
[[nodiscard]] std::string arc_audit_csv(const RhoSpec& rho, const ArcAudit& audit);

struct ResidueRow {
  std::int64_t a = 0;       // quadratic residue mod Q
  std::int64_t target = 0;  // a + r_Q mod Q
  std::int64_t count = 0;
  double density = 0.0;
  double bound = 0.0;  // 1/(3 C |Lambda_Q|) for a != 0, NaN otherwise
};

struct ResidueProfile {
  std::int64_t modulus = 0;
  double window = 0.5;
  // floor(rho(window N)) mod Q for each N of the list.
  std::vector<std::int64_t> ns;
  std::vector<std::int64_t> read_residues;
  std::int64_t r_q = 0;             // the largest class
  std::int64_t class_size = 0;
  std::int64_t evaluated_n = 0;     // largest N in that class
  bool stabilized = false;          // constant over the second half of the list
  std::vector<std::int64_t> lambda_q;  // squares mod Q, including 0
  std::vector<std::int64_t> class_counts;  // all Q classes at evaluated_n
  std::vector<ResidueRow> rows;     // one per element of lambda_q
  double fitted_c = 0.0;
  double bound = 0.0;               // 1/(3 C |Lambda_Q|); NaN when C = 0
  double min_nonzero_density = 0.0;
  double min_unit_density = 0.0;    // over residues coprime to Q

  // Vacuous (true) when there is no bound.
  [[nodiscard]] bool meets_bound() const {
    return !(bound == bound) || min_nonzero_density >= bound;
  }
};

// Throws ConfigError unless Q is odd, squarefree and >= 3.
[[nodiscard]] ResidueProfile residue_density(const RhoSpec& rho,
                                             std::int64_t modulus,
                                             const std::vector<std::int64_t>& ns,
                                             double window = 0.5);
// Squares mod Q, sorted, including 0.
[[nodiscard]] std::vector<std::int64_t> quadratic_residues(std::int64_t modulus);
// CSV with header Q,a,count,density,bound.
[[nodiscard]] std::string residue_csv(const ResidueProfile& profile);

}  // namespace ergosub
