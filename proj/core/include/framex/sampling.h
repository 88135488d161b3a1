// Copyright 2026 The framex Authors.
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

#ifndef FRAMEX_SAMPLING_H_
#define FRAMEX_SAMPLING_H_

// Dyadic sampling: approximates sum c_n T_n by 2^-beta times a sum of
// repeated T_n, chosen through a binary selector over dyadic replicas of the
// operators and of auxiliary padding operators.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "framex/linalg.h"
#include "framex/selectors.h"

namespace framex {

// Replica counts stay below 2^53 so multiplicity checks are exact in double.
inline constexpr int64_t kReplicaBudget = int64_t{1} << 52;

struct DyadicDecomposition {
  double target = 0.0;
  std::vector<int> exponents;  // strictly increasing; term j is 2^-exponents[j]
  double remainder = 0.0;      // target - sum of terms
  int depth = 0;               // requested maximum number of terms
};

// Greedy binary expansion of c > 0, truncated to `depth` terms.
DyadicDecomposition DyadicDecompose(double c, int depth);

struct PaddingSet {
  std::vector<int> exponents;  // strictly increasing
};

// Exponents m_j with sum 2^-exponents + sum 2^-m_j = ceil(sum 2^-exponents),
// computed in exact integer arithmetic.
PaddingSet CeilingPad(const DyadicDecomposition& d);

// Exact sum of 2^-e over the exponents, as a double. Throws when the exponent
// span does not fit in 53 bits.
double DyadicSum(std::span<const int> exponents);

// Replica counts: operator n appears op_counts[n] times in I1 and its padding
// pad_counts[n] times in I2.
struct IndexSets {
  int eta = 0;
  std::vector<int64_t> op_counts;
  std::vector<int64_t> pad_counts;
  int64_t total() const;
};

// Requires eta >= every exponent and eta >= beta. Throws BudgetError when
// the total exceeds `budget`.
IndexSets BuildIndexSets(std::span<const DyadicDecomposition> decomps,
                         std::span<const PaddingSet> pads, int eta, int beta,
                         int64_t budget = kReplicaBudget);

struct Replica {
  int set = 1;  // 1 for I1, 2 for I2
  int n = 0;
  int64_t i = 0;
};

// Same-index I1 replicas are paired first; leftover I1 replicas take an I2
// replica of the same index if one exists, else any I2 replica; remaining I2
// replicas pair by index, then in a seeded order.
std::vector<std::pair<Replica, Replica>> PairedPartition(std::span<const Replica> i1,
                                                         std::span<const Replica> i2,
                                                         uint64_t seed = 0);

// The same discipline in count form, as a selector pairing over kinds
// 0..m-1 (operators) and m..2m-1 (paddings).
Pairing SamePairing(int m, uint64_t seed = 0);

struct PaddingReport {
  std::vector<PsdOperator> pads;
  double cap = 0.0;    // per-pad trace cap 2^(2-beta) max(eps, gamma)
  double scale = 1.0;  // uniform shrink applied to reach the sum condition
  bool span_ok = false;
  bool sum_ok = false;
  bool trace_ok = false;
};

// Scaled projections onto range(T_n) with trace `cap`, shrunk uniformly until
// sum w_n phi_n <= sum_cap I and truncated + sum w_n phi_n <= I.
PaddingReport MakePaddings(const std::vector<PsdOperator>& ops,
                           std::span<const double> pad_weights, const Mat& truncated,
                           double epsilon, double gamma, int beta, double sum_cap = 0.5);

// Condition checks for user supplied paddings.
PaddingReport CheckPaddings(const std::vector<PsdOperator>& ops, std::vector<PsdOperator> pads,
                            std::span<const double> pad_weights, const Mat& truncated,
                            double epsilon, double gamma, int beta, double sum_cap = 0.5);

// sigma: {0..domain_size-1} -> indices, stored by multiplicity in index order.
class SamplingFunction {
 public:
  SamplingFunction() = default;
  explicit SamplingFunction(std::vector<int64_t> multiplicity);

  int64_t domain_size() const { return domain_size_; }
  const std::vector<int64_t>& multiplicity() const { return multiplicity_; }
  int Image(int64_t k) const;

 private:
  std::vector<int64_t> multiplicity_;
  std::vector<int64_t> offsets_;
  int64_t domain_size_ = 0;
};

struct SamplingCertificate {
  int beta = 0;
  bool beta_zero_fallback = false;
  double epsilon = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  double c_constant = 0.0;
  int eta = 0;
  int levels = 0;  // selector order N = eta - beta
  int depth = 0;   // common resolution: expansions keep the terms 2^-e with e <= depth
  bool tail_ok = false;
  double pad_scale = 1.0;
  int64_t chosen_leaf = 0;
  bool pigeonhole_ok = false;
  double sandwich_lo = 0.0;  // lambda_min(D + (eps/2) P_M^perp)
  double sandwich_hi = 0.0;  // lambda_max(D - (eps/2) P_M^perp)
  double sandwich_allowance = 0.0;  // 6 sqrt(gamma) + 1e-8
  bool sandwich_ok = false;
  bool mult_ok = false;
  SelectorCertificate selector;
};

struct SampleOptions {
  double epsilon = 0.1;
  std::optional<std::vector<PsdOperator>> paddings;  // empty: built automatically
  SearchOptions search;
  double c_constant = -1.0;  // negative: UniversalConstantC()
  double delta = 0.0;        // 0: largest tr(T_n)
  std::optional<double> gamma_bound;  // replaces tr(P_M T P_M)
  double sum_cap = 0.5;
  int max_depth = 48;  // finest resolution tried
  int64_t replica_budget = kReplicaBudget;
  int max_levels = 16;
  uint64_t seed = 0;
};

struct SampleResult {
  SamplingFunction sigma;
  SamplingCertificate certificate;
  std::vector<DyadicDecomposition> decompositions;
  std::vector<PaddingSet> paddings;
  IndexSets index_sets;
  std::vector<int64_t> leaf_pad_counts;  // padding replicas in the chosen leaf
};

// Requires sum c_n T_n <= sum_cap I, tr(T_n) <= delta and gamma <= 1.
SampleResult Sample(const std::vector<PsdOperator>& ops, std::span<const double> weights,
                    const Projection& m, const SampleOptions& options);

// True when ldexp(multiplicity[n], -(beta+1)) <= weights[n] for every n.
bool MultiplicityWithin(std::span<const int64_t> multiplicity, std::span<const double> weights,
                        int beta);

}  // namespace framex

#endif  // FRAMEX_SAMPLING_H_
