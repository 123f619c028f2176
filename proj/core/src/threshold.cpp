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

#include "ergosub/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "ergosub/errors.hpp"
#include "ergosub/families.hpp"
#include "ergosub/fourier.hpp"
#include "ergosub/measure_io.hpp"
#include "ergosub/parallel.hpp"
#include "ergosub/summation.hpp"

namespace ergosub {
namespace {

// Splits [first, last] into a fixed number of chunks so the rounding of the
// result does not depend on the thread count.
template <typename Term>
std::complex<double> chunked_sum(std::int64_t first, std::int64_t last,
                                 const Term& term) {
  if (last < first) return {};
  constexpr std::int64_t kChunks = 64;
  const std::int64_t count = last - first + 1;
  const std::int64_t chunk = (count + kChunks - 1) / kChunks;
  std::vector<std::complex<double>> partial(kChunks);
  parallel_for(kChunks, [&](std::size_t c) {
    const std::int64_t lo = first + static_cast<std::int64_t>(c) * chunk;
    const std::int64_t hi = std::min(last, lo + chunk - 1);
    ComplexCompensatedSum sum;
    for (std::int64_t i = lo; i <= hi; ++i) sum.add(term(i));
    partial[c] = sum.value();
  });
  return compensated_sum(partial);
}

std::int64_t positive_mod(std::int64_t x, std::int64_t m) {
  const std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

bool is_odd_squarefree(std::int64_t q) {
  if (q < 3 || q % 2 == 0) return false;
  for (std::int64_t p = 3; p * p <= q; p += 2) {
    if (q % (p * p) == 0) return false;
  }
  return true;
}

double circle_norm(double beta) { return std::abs(beta - std::round(beta)); }

double last_block_length(const RhoSpec& rho, std::int64_t n) {
  if (rho.kind() == RhoSpec::Kind::kConstant) return static_cast<double>(n);
  return block_structure(rho, rho.floor_at(n)).length;
}

}  // namespace

BlockStructure block_structure(const RhoSpec& rho, std::int64_t j,
                               std::optional<std::int64_t> horizon) {
  if (horizon && *horizon < 1) throw ConfigError("block horizon must be >= 1");
  BlockStructure block;
  block.j = j;
  const std::int64_t first_j = rho.floor_at(1);
  if (rho.kind() == RhoSpec::Kind::kConstant) {
    if (j != first_j) {
      throw ConfigError("a constant rho has the single block j = " +
                        std::to_string(first_j));
    }
    if (!horizon) throw ConfigError("a constant rho block needs a horizon");
    block.lo = 0.0;
    block.hi = static_cast<double>(*horizon);
    block.length = block.hi;
    block.last_k = *horizon;
    block.last_l = *horizon * *horizon;
    return block;
  }
  if (j < first_j) {
    throw ConfigError("block " + std::to_string(j) + " lies below floor(rho(1)) = " +
                      std::to_string(first_j));
  }
  if (horizon && j > rho.floor_at(*horizon)) {
    throw ConfigError("block " + std::to_string(j) + " lies beyond the horizon");
  }
  block.lo = j <= 0 ? 0.0 : std::max(0.0, rho.inverse(static_cast<double>(j)));
  block.hi = rho.inverse(static_cast<double>(j + 1));
  block.length = block.hi - block.lo;
  block.first_k = rho.first_index_reaching(j);
  block.last_k = rho.first_index_reaching(j + 1) - 1;
  block.first_l = rho.first_square_reaching(j);
  block.last_l = rho.first_square_reaching(j + 1) - 1;
  if (horizon) {
    block.last_k = std::min(block.last_k, *horizon);
    block.last_l = std::min(block.last_l, *horizon * *horizon);
  }
  return block;
}

double phi_of(const RhoSpec& rho, double j) {
  const double root = rho.inverse(j);
  return root * root;
}

std::complex<double> block_sum(const RhoSpec& rho, std::int64_t j,
                               const Frequency& beta,
                               std::optional<std::int64_t> horizon) {
  const auto block = block_structure(rho, j, horizon);
  return chunked_sum(block.first_k, block.last_k,
                     [&](std::int64_t k) { return beta.character(k * k); });
}

std::complex<double> vj_sum(const RhoSpec& rho, std::int64_t j, double alpha,
                            std::optional<std::int64_t> horizon) {
  const auto block = block_structure(rho, j, horizon);
  const auto a = Frequency::real(alpha);
  return chunked_sum(block.first_l, block.last_l, [&](std::int64_t l) {
    return a.character(l) / (2.0 * std::sqrt(static_cast<double>(l)));
  });
}

const char* branch_name(ArcBranch branch) {
  return branch == ArcBranch::kMajor ? "major" : "minor";
}

ArcAudit major_arc_audit(const RhoSpec& rho, std::int64_t n, double beta,
                         double epsilon) {
  if (n < 2) throw ConfigError("arc audit needs N >= 2");
  const double nd = static_cast<double>(n);
  ArcAudit audit;
  audit.n = n;
  audit.beta = beta;
  audit.epsilon = epsilon;
  audit.certificate = dirichlet_approx(beta, std::pow(nd, 4.0 / 3.0));
  const auto [p, q] = audit.certificate.rational;
  audit.branch = static_cast<double>(q) <= std::pow(nd, 2.0 / 3.0)
                     ? ArcBranch::kMajor
                     : ArcBranch::kMinor;
  if (rho.kind() == RhoSpec::Kind::kConstant) return audit;

  const auto gauss = gauss_sum({p, q});
  double alpha = std::fma(audit.certificate.beta, static_cast<double>(q),
                          -static_cast<double>(p)) /
                 static_cast<double>(q);
  alpha -= std::round(alpha);
  const auto b = Frequency::real(beta);

  const std::int64_t j_lo = std::max(
      rho.floor_at(1),
      static_cast<std::int64_t>(std::floor(rho(std::pow(nd, 1.0 - epsilon)))) + 1);
  const std::int64_t j_hi = rho.floor_at(n);
  for (std::int64_t j = j_lo; j <= j_hi; ++j) {
    const auto block = block_structure(rho, j);
    ArcRow row;
    row.j = j;
    row.branch = audit.branch;
    const auto sum = block_sum(rho, j, b);
    if (audit.branch == ArcBranch::kMajor) {
      row.value = std::abs(sum - gauss * vj_sum(rho, j, alpha));
      row.bound = std::pow(nd, -epsilon / 6.0) * block.length;
    } else {
      row.value = std::abs(sum);
      row.bound = std::pow(nd, -epsilon / 7.0) * block.length;
    }
    row.ratio = row.value / row.bound;
    audit.max_ratio = std::max(audit.max_ratio, row.ratio);
    audit.rows.push_back(row);
  }
  return audit;
}

CesaroMean cesaro_expos(const RhoSpec& rho, std::int64_t n, double beta,
                        double alpha) {
  if (n < 1) throw ConfigError("Cesaro mean needs N >= 1");
  const double nd = static_cast<double>(n);
  const auto b = Frequency::real(beta);
  const auto a = Frequency::real(alpha);

  // Blocks j_lo..j_hi in full, or the single truncated block of a constant.
  std::vector<BlockStructure> blocks;
  if (rho.kind() == RhoSpec::Kind::kConstant) {
    blocks.push_back(block_structure(rho, rho.floor_at(1), n));
  } else {
    for (std::int64_t j = rho.floor_at(1); j <= rho.floor_at(n); ++j) {
      blocks.push_back(block_structure(rho, j));
    }
  }

  const bool alpha_integral = alpha == std::round(alpha);
  const auto denominator = a.character(1) - 1.0;
  ComplexCompensatedSum blockwise;
  for (const auto& block : blocks) {
    std::complex<double> inner;
    if (block.square_count() == 0) continue;
    if (alpha_integral) {
      inner = static_cast<double>(block.square_count());
    } else {
      inner = (a.character(block.last_l + 1) - a.character(block.first_l)) /
              denominator;
    }
    blockwise.add(b.character(block.j) * inner);
  }

  const std::int64_t first_l = blocks.front().first_l;
  const std::int64_t last_l = blocks.back().last_l;
  const auto direct = chunked_sum(first_l, last_l, [&](std::int64_t l) {
    const std::int64_t j = rho.kind() == RhoSpec::Kind::kConstant
                               ? blocks.front().j
                               : rho.floor_at_sqrt(l);
    return b.character(j) * a.character(l);
  });

  CesaroMean mean;
  mean.blockwise = blockwise.value() / (nd * nd);
  mean.direct = direct / (nd * nd);
  const double norm = circle_norm(beta);
  mean.bound_shape = norm == 0.0 ? std::numeric_limits<double>::infinity()
                                 : last_block_length(rho, n) / (nd * norm);
  mean.ratio = std::abs(mean.blockwise) / mean.bound_shape;
  return mean;
}

std::vector<double> threshold_beta_grid(std::size_t grid, double delta,
                                        std::int64_t max_q) {
  std::vector<double> betas;
  const double g = static_cast<double>(grid);
  for (std::size_t m = 0; m < grid; ++m) {
    const double beta = static_cast<double>(m) / g;
    if (beta >= delta && beta <= 1.0 - delta) betas.push_back(beta);
  }
  for (std::int64_t q = 2; q <= max_q; ++q) {
    for (std::int64_t p = 1; p < q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const double beta = static_cast<double>(p) / static_cast<double>(q);
      if (beta >= delta && beta <= 1.0 - delta) betas.push_back(beta);
    }
  }
  std::sort(betas.begin(), betas.end());
  betas.erase(std::unique(betas.begin(), betas.end()), betas.end());
  return betas;
}

bool TransformAudit::strictly_decreasing() const {
  for (std::size_t i = 1; i < functional_max.size(); ++i) {
    if (!(functional_max[i] < functional_max[i - 1])) return false;
  }
  return true;
}

TransformAudit transform_bound_audit(const RhoSpec& rho,
                                     const std::vector<std::int64_t>& ns,
                                     const std::vector<double>& betas,
                                     double epsilon) {
  TransformAudit audit;
  audit.rho = rho.descriptor();
  audit.epsilon = epsilon;
  for (const std::int64_t n : ns) {
    if (n < 2) throw ConfigError("transform audit needs N >= 2");
    const double nd = static_cast<double>(n);
    const auto mu = perturbed_squares(rho, n);
    const double length = last_block_length(rho, n);
    std::vector<TransformRow> rows(betas.size());
    parallel_for(betas.size(), [&](std::size_t i) {
      TransformRow& row = rows[i];
      row.n = n;
      row.beta = betas[i];
      const auto cert = dirichlet_approx(row.beta, std::pow(nd, 4.0 / 3.0));
      row.q = cert.rational.q;
      row.branch = static_cast<double>(row.q) <= std::pow(nd, 2.0 / 3.0)
                       ? ArcBranch::kMajor
                       : ArcBranch::kMinor;
      row.value = std::abs(fourier_at(mu, Frequency::real(row.beta)));
      const double norm = circle_norm(row.beta);
      row.bound = std::pow(nd, -epsilon / 7.0) +
                  (norm == 0.0 ? std::numeric_limits<double>::infinity()
                               : length / (nd * norm));
      row.ratio = row.value / row.bound;
    });
    double functional = 0.0;
    for (const auto& row : rows) {
      audit.max_ratio = std::max(audit.max_ratio, row.ratio);
      functional = std::max(
          functional,
          std::abs(1.0 - Frequency::real(row.beta).character(1)) * row.value);
      audit.rows.push_back(row);
    }
    audit.ns.push_back(n);
    audit.functional_max.push_back(functional);
  }
  return audit;
}

std::string transform_audit_csv(const TransformAudit& audit) {
  std::string out = "rho,N,beta,q,branch,value,bound,ratio\n";
  for (const auto& row : audit.rows) {
    out += audit.rho + "," + std::to_string(row.n) + "," +
           format_number(row.beta) + "," + std::to_string(row.q) + "," +
           branch_name(row.branch) + "," + format_number(row.value) + "," +
           format_number(row.bound) + "," + format_number(row.ratio) + "\n";
  }
  return out;
}

std::string arc_audit_csv(const RhoSpec& rho, const ArcAudit& audit) {
  std::string out = "rho,N,beta,q,branch,value,bound,ratio,j\n";
  for (const auto& row : audit.rows) {
    out += rho.descriptor() + "," + std::to_string(audit.n) + "," +
           format_number(audit.beta) + "," +
           std::to_string(audit.certificate.rational.q) + "," +
           branch_name(row.branch) + "," + format_number(row.value) + "," +
           format_number(row.bound) + "," + format_number(row.ratio) + "," +
           std::to_string(row.j) + "\n";
  }
  return out;
}

std::vector<std::int64_t> quadratic_residues(std::int64_t modulus) {
  if (modulus < 1) throw ConfigError("modulus must be >= 1");
  std::vector<bool> hit(static_cast<std::size_t>(modulus), false);
  for (std::int64_t x = 0; x < modulus; ++x) {
    hit[static_cast<std::size_t>(x * x % modulus)] = true;
  }
  std::vector<std::int64_t> out;
  for (std::int64_t a = 0; a < modulus; ++a) {
    if (hit[static_cast<std::size_t>(a)]) out.push_back(a);
  }
  return out;
}

ResidueProfile residue_density(const RhoSpec& rho, std::int64_t modulus,
                               const std::vector<std::int64_t>& ns,
                               double window) {
  if (!is_odd_squarefree(modulus)) {
    throw ConfigError("residue modulus must be odd, squarefree and >= 3, got " +
                      std::to_string(modulus));
  }
  if (ns.empty()) throw ConfigError("residue_density needs at least one N");
  if (!(window > 0.0 && window <= 1.0)) {
    throw ConfigError("residue window must lie in (0, 1]");
  }
  ResidueProfile profile;
  profile.modulus = modulus;
  profile.window = window;
  profile.ns = ns;

  std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>> classes;
  for (const std::int64_t n : ns) {
    if (n < 1) throw ConfigError("residue_density needs N >= 1");
    const double read = std::floor(rho(window * static_cast<double>(n)));
    const std::int64_t r = positive_mod(static_cast<std::int64_t>(read), modulus);
    profile.read_residues.push_back(r);
    auto& [size, largest] = classes[r];
    ++size;
    largest = std::max(largest, n);
  }
  for (const auto& [r, info] : classes) {
    if (info.first > profile.class_size) {
      profile.r_q = r;
      profile.class_size = info.first;
      profile.evaluated_n = info.second;
    }
  }
  const auto half = profile.read_residues.begin() +
                    static_cast<std::ptrdiff_t>(profile.read_residues.size() / 2);
  profile.stabilized =
      std::all_of(half, profile.read_residues.end(),
                  [&](std::int64_t r) { return r == *half; });

  // Counts of j^2 + floor(rho(j)) mod Q, j <= N, per fixed chunk.
  const std::int64_t n = profile.evaluated_n;
  constexpr std::int64_t kChunks = 64;
  const std::int64_t chunk = (n + kChunks - 1) / kChunks;
  std::vector<std::vector<std::int64_t>> partial(
      kChunks, std::vector<std::int64_t>(static_cast<std::size_t>(modulus), 0));
  parallel_for(kChunks, [&](std::size_t c) {
    const std::int64_t lo = 1 + static_cast<std::int64_t>(c) * chunk;
    const std::int64_t hi = std::min(n, lo + chunk - 1);
    for (std::int64_t j = lo; j <= hi; ++j) {
      const std::int64_t s = j % modulus;
      const std::int64_t t = positive_mod(s * s + rho.floor_at(j), modulus);
      ++partial[c][static_cast<std::size_t>(t)];
    }
  });
  profile.class_counts.assign(static_cast<std::size_t>(modulus), 0);
  for (const auto& counts : partial) {
    for (std::size_t t = 0; t < counts.size(); ++t) profile.class_counts[t] += counts[t];
  }

  profile.lambda_q = quadratic_residues(modulus);
  profile.fitted_c = rho.fitted_log_constant(static_cast<double>(n));
  profile.bound =
      profile.fitted_c > 0.0
          ? 1.0 / (3.0 * profile.fitted_c *
                   static_cast<double>(profile.lambda_q.size()))
          : std::numeric_limits<double>::quiet_NaN();
  profile.min_nonzero_density = std::numeric_limits<double>::infinity();
  profile.min_unit_density = std::numeric_limits<double>::infinity();
  for (const std::int64_t a : profile.lambda_q) {
    ResidueRow row;
    row.a = a;
    row.target = (a + profile.r_q) % modulus;
    row.count = profile.class_counts[static_cast<std::size_t>(row.target)];
    row.density = static_cast<double>(row.count) / static_cast<double>(n);
    row.bound = a == 0 ? std::numeric_limits<double>::quiet_NaN() : profile.bound;
    if (a != 0) {
      profile.min_nonzero_density = std::min(profile.min_nonzero_density, row.density);
    }
    if (std::gcd(a, modulus) == 1) {
      profile.min_unit_density = std::min(profile.min_unit_density, row.density);
    }
    profile.rows.push_back(row);
  }
  return profile;
}

std::string residue_csv(const ResidueProfile& profile) {
  std::string out = "Q,a,count,density,bound\n";
  for (const auto& row : profile.rows) {
    out += std::to_string(profile.modulus) + "," + std::to_string(row.a) + "," +
           std::to_string(row.count) + "," + format_number(row.density) + "," +
           format_number(row.bound) + "\n";
  }
  return out;
}

}  // namespace ergosub
