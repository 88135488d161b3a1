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

#ifndef FRAMEX_SELECTORS_H_
#define FRAMEX_SELECTORS_H_

// Binary selectors: recursive pair-partitions of an index set into 2^N cells,
// the constants that bound their operator-norm deviation, and search
// procedures that look for good selectors.
//
// The search engine works on counts. Each "kind" is one operator; a cell is a
// vector of per-kind multiplicities. An explicit list of operators is the
// special case of one kind per operator with multiplicity one. Odd cells are
// completed with one instance of a zero pad kind whose index equals the
// number of real kinds.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "framex/linalg.h"

namespace framex {

// Increasing sequence B_0 = 1, B_{j+1} = B_j + 4 sqrt(2^j delta B_j) + 2^{j+1} delta,
// returned for j = 0..count-1.
std::vector<double> GrowthSequence(double delta, int count);

// max over 1 <= N <= n_max of sum_{j<N} (B_j - 1) / sqrt(2^N delta).
// Throws PreconditionError unless delta > 0, n_max >= 1 and 2^n_max delta < 1.
double ConstantC(double delta, int n_max);

// Largest N >= 0 with 2^N delta < 1.
int MaxOrder(double delta);

// sup of ConstantC(delta, MaxOrder(delta)) over delta = 2^-x, x in [2, 64] on a
// 1/64 grid. Computed once.
double UniversalConstantC();

struct BetaChoice {
  int beta = 0;
  double ratio = 0.0;        // eps^2 / (4 C^2 delta)
  bool zero_fallback = false;  // beta = 0 lies outside the positive integers
};

// The integer beta >= 0 with 1 < 2^beta * ratio <= 2.
// Throws PreconditionError when ratio > 2 or an input is not positive.
BetaChoice BetaFor(double epsilon, double c, double delta);

// Unordered pairs over an explicit index set; -1 stands for the zero pad.
struct PairPartition {
  std::vector<int> index_set;
  std::vector<std::pair<int, int>> pairs;
};

// Validates that the pairs cover index_set exactly (with at most one pad).
void CheckPairPartition(const PairPartition& p);

// Calls visit(I0, I1) once for each of the 2^#pairs order-1 selectors. Pads
// are dropped from the yielded sets.
void EnumerateSelectors(const PairPartition& p,
                        const std::function<void(const std::vector<int>&,
                                                 const std::vector<int>&)>& visit);
std::vector<std::pair<std::vector<int>, std::vector<int>>> EnumerateSelectors(
    const PairPartition& p);

// `count` pairs, each holding one instance of `first` and one of `second`.
// first == second is a balanced pair: each child receives one instance.
struct KindPair {
  int first = 0;
  int second = 0;
  int64_t count = 0;
};

struct CellSplit {
  std::vector<int64_t> counts;          // real kinds only
  std::vector<KindPair> pairs;
  std::vector<int64_t> first_to_left;   // per pair: instances of `first` sent to child 0
};

struct SelectorTree {
  int order = 0;
  int num_kinds = 0;  // the pad kind is num_kinds
  // levels[t] holds the 2^t cells at depth t; cell i splits into 2i and 2i+1.
  std::vector<std::vector<CellSplit>> levels;
  // 2^order leaf count vectors. The first-level choice is the leading bit of b.
  std::vector<std::vector<int64_t>> leaves;

  int pad_kind() const { return num_kinds; }
  // Kinds in leaf b, each repeated by its multiplicity.
  std::vector<int> LeafMembers(int64_t b) const;
};

// Produces the pairs of a cell at the given depth. Must cover the counts
// exactly, plus one pad instance when the total is odd.
using Pairing = std::function<std::vector<KindPair>(const std::vector<int64_t>& counts,
                                                    int depth)>;

// Same-kind instances are paired with each other; leftover single instances
// are sorted by trace (descending, ties by kind) and paired adjacently.
Pairing DescendingTracePairing(std::vector<double> traces);

// Children counts of a split, pad removed. Throws PreconditionError if the
// split is inconsistent with its pairs.
std::pair<std::vector<int64_t>, std::vector<int64_t>> ApplySplit(const CellSplit& split,
                                                                  int num_kinds);

enum class Strategy { kExhaustive, kGreedy, kRandomized };

const char* ToString(Strategy s);
Strategy ParseStrategy(const std::string& name);

struct SearchOptions {
  Strategy strategy = Strategy::kGreedy;
  uint64_t seed = 0;
  int restarts = 1024;
  // Exhaustive search gives up after this many split evaluations and falls
  // back to randomized restarts.
  int64_t exhaustive_budget = int64_t{1} << 20;
};

struct SelectorProblem {
  std::vector<Mat> kinds;            // Hermitian operators
  std::vector<int64_t> root_counts;  // multiplicity of each kind at the root
  Mat target;                        // T
  int order = 1;                     // N
  Pairing pairing;                   // defaults to DescendingTracePairing
};

struct SearchOutcome {
  SelectorTree tree;
  std::vector<double> achieved;  // ||2^N sum_{leaf b} - T|| per leaf
  double worst = 0.0;
  Strategy used = Strategy::kGreedy;
  bool fell_back = false;  // exhaustive budget exceeded
  int64_t evaluations = 0;
};

// Minimizes max_b ||2^N sum_{kinds in leaf b} - T|| over selector choices
// under the problem's pairing.
SearchOutcome SearchSelectors(const SelectorProblem& problem, const SearchOptions& options);

// ||2^N sum_k counts[k] kinds[k] - T||.
double LeafDeviation(std::span<const Mat> kinds, const std::vector<int64_t>& counts,
                     const Mat& target, int order);

struct SelectorCertificate {
  double delta = 0.0;
  int order = 0;
  double c = 0.0;
  std::vector<double> achieved;
  double bound = 0.0;  // c * sqrt(2^N delta)
  bool satisfied = false;
  Strategy strategy = Strategy::kGreedy;
  bool fell_back = false;
};

struct SelectorResult {
  SelectorTree tree;
  SelectorCertificate certificate;
};

struct BestSelectorOptions {
  SearchOptions search;
  double delta = 0.0;  // 0: use the largest trace
  double c = -1.0;     // negative: ConstantC(delta, MaxOrder(delta))
};

// Requires sum ops <= (1 + kNumTol) I, tr(op) <= delta and 2^N delta < 1.
SelectorResult BestSelector(const std::vector<PsdOperator>& ops, const PsdOperator& target,
                            int order, const BestSelectorOptions& options = {});

// Recomputes every deviation from scratch. Throws PreconditionError when the
// leaves do not partition the root; returns false on any other inconsistency
// between tree, stored values and operators.
bool VerifyCertificate(const SelectorCertificate& cert, const SelectorTree& tree,
                       std::span<const Mat> kinds, const Mat& target);
bool VerifyCertificate(const SelectorCertificate& cert, const SelectorTree& tree,
                       const std::vector<PsdOperator>& ops, const PsdOperator& target);

}  // namespace framex

#endif  // FRAMEX_SELECTORS_H_
