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

#include "framex/selectors.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "framex/errors.h"
#include "test_util.h"

namespace framex {
namespace {

using testing::Basis;

TEST(GrowthSequenceTest, FirstTermsAtOneHundredth) {
  std::vector<double> b = GrowthSequence(0.01, 3);
  ASSERT_EQ(b.size(), 3u);
  EXPECT_DOUBLE_EQ(b[0], 1.0);
  EXPECT_NEAR(b[1], 1.42, 1e-15);
  EXPECT_NEAR(b[2], 2.134091981854109, 1e-12);
}

TEST(GrowthSequenceTest, StrictlyIncreasing) {
  for (double delta : {0.5, 0.1, 1e-3, 1e-9}) {
    std::vector<double> b = GrowthSequence(delta, 20);
    for (size_t j = 1; j < b.size(); ++j) EXPECT_GT(b[j], b[j - 1]);
  }
}

TEST(ConstantCTest, ReferenceValues) {
  EXPECT_EQ(ConstantC(0.25, 1), 0.0);
  EXPECT_NEAR(ConstantC(0.1, 3), 6.862861362914856, 1e-10);
  EXPECT_NEAR(ConstantC(0.05, 4), 12.214642927776518, 1e-10);
  EXPECT_NEAR(ConstantC(0.01, 6), 21.622991208651595, 1e-10);
  EXPECT_NEAR(ConstantC(0.2, 2), 2.4472135954999574, 1e-10);
}

TEST(ConstantCTest, RejectsOrderBeyondDelta) {
  EXPECT_THROW(ConstantC(0.25, 2), PreconditionError);
  EXPECT_THROW(ConstantC(0.0, 1), PreconditionError);
}

TEST(ConstantCTest, MaxOrder) {
  EXPECT_EQ(MaxOrder(0.25), 1);
  EXPECT_EQ(MaxOrder(0.1), 3);
  EXPECT_EQ(MaxOrder(0.01), 6);
  EXPECT_EQ(MaxOrder(0.5), 0);
  EXPECT_EQ(MaxOrder(0.125), 2);
}

TEST(ConstantCTest, UniversalDominatesGridValues) {
  const double u = UniversalConstantC();
  EXPECT_GT(u, 40.0);
  EXPECT_LT(u, 50.0);
  for (double x = 2; x <= 64; x += 0.5) {
    const double delta = std::exp2(-x);
    EXPECT_LE(ConstantC(delta, MaxOrder(delta)), u * (1 + 1e-12));
  }
}

TEST(BetaForTest, ExamplesFromRatio) {
  // ratio = eps^2 / (4 C^2 delta); with C = 1 and delta = 1/4 the ratio is eps^2.
  BetaChoice b = BetaFor(std::sqrt(0.3), 1.0, 0.25);
  EXPECT_EQ(b.beta, 2);
  EXPECT_FALSE(b.zero_fallback);
  b = BetaFor(std::sqrt(1.5), 1.0, 0.25);
  EXPECT_EQ(b.beta, 0);
  EXPECT_TRUE(b.zero_fallback);
  b = BetaFor(1.0, 1.0, 0.125);  // ratio exactly 2
  EXPECT_EQ(b.beta, 0);
  EXPECT_THROW(BetaFor(std::sqrt(2.5), 1.0, 0.25), PreconditionError);
}

TEST(BetaForTest, WindowProperty) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-40, 1);
  for (int t = 0; t < 500; ++t) {
    const double ratio = std::exp2(u(rng));
    BetaChoice b = BetaFor(std::sqrt(ratio), 1.0, 0.25);
    const double scaled = std::ldexp(b.ratio, b.beta);
    EXPECT_LE(scaled, 2.0);
    if (!b.zero_fallback) EXPECT_GT(scaled, 1.0);
  }
}

TEST(EnumerateSelectorsTest, OnePair) {
  PairPartition p{{1, 2}, {{1, 2}}};
  auto all = EnumerateSelectors(p);
  ASSERT_EQ(all.size(), 2u);
  std::set<std::pair<std::vector<int>, std::vector<int>>> seen(all.begin(), all.end());
  EXPECT_TRUE(seen.count({{1}, {2}}));
  EXPECT_TRUE(seen.count({{2}, {1}}));
}

TEST(EnumerateSelectorsTest, CountsAndDistinctness) {
  for (int k = 1; k <= 6; ++k) {
    PairPartition p;
    for (int i = 0; i < k; ++i) {
      p.index_set.push_back(2 * i);
      p.index_set.push_back(2 * i + 1);
      p.pairs.emplace_back(2 * i, 2 * i + 1);
    }
    auto all = EnumerateSelectors(p);
    EXPECT_EQ(all.size(), size_t{1} << k);
    std::set<std::pair<std::vector<int>, std::vector<int>>> seen(all.begin(), all.end());
    EXPECT_EQ(seen.size(), all.size());
  }
}

TEST(EnumerateSelectorsTest, PadIsDropped) {
  PairPartition p{{0, 1, 2}, {{0, 1}, {2, -1}}};
  for (const auto& [i0, i1] : EnumerateSelectors(p)) EXPECT_EQ(i0.size() + i1.size(), 3u);
}

TEST(EnumerateSelectorsTest, RejectsBadPartition) {
  EXPECT_THROW(CheckPairPartition({{0, 1, 2}, {{0, 1}}}), PreconditionError);
  EXPECT_THROW(CheckPairPartition({{0, 1}, {{0, 0}}}), PreconditionError);
}

Mat Axis(int dim, int i, double scale) { return scale * Basis(dim, i) * Basis(dim, i).adjoint(); }

TEST(BestSelectorTest, SymmetricPairHasZeroDeviation) {
  std::vector<PsdOperator> ops = {PsdOperator::FromMatrix(Axis(2, 0, 0.25)),
                                  PsdOperator::FromMatrix(Axis(2, 0, 0.25))};
  PsdOperator target = PsdOperator::FromMatrix(Axis(2, 0, 0.5));
  BestSelectorOptions o;
  o.search.strategy = Strategy::kExhaustive;
  SelectorResult r = BestSelector(ops, target, 1, o);
  for (double a : r.certificate.achieved) EXPECT_NEAR(a, 0.0, 1e-15);
  EXPECT_TRUE(r.certificate.satisfied);
  EXPECT_TRUE(VerifyCertificate(r.certificate, r.tree, ops, target));
}

TEST(BestSelectorTest, FourQuartersGiveSingletons) {
  std::vector<PsdOperator> ops(4, PsdOperator::FromMatrix(Axis(2, 0, 0.2)));
  PsdOperator target = PsdOperator::FromMatrix(Axis(2, 0, 0.8));
  BestSelectorOptions o;
  o.search.strategy = Strategy::kExhaustive;
  SelectorResult r = BestSelector(ops, target, 2, o);
  for (int64_t b = 0; b < 4; ++b) EXPECT_EQ(r.tree.LeafMembers(b).size(), 1u);
  for (double a : r.certificate.achieved) EXPECT_NEAR(a, 0.0, 1e-15);
}

TEST(BestSelectorTest, TamperedCertificateFails) {
  std::mt19937_64 rng(37);
  std::vector<PsdOperator> ops = testing::RandomRankOnes(rng, 3, 8, 0.05, 1.0, Field::kReal);
  Mat sum = Mat::Zero(3, 3);
  for (const auto& op : ops) sum += op.matrix();
  PsdOperator target = PsdOperator::FromMatrix(sum);
  SelectorResult r = BestSelector(ops, target, 2);
  ASSERT_TRUE(VerifyCertificate(r.certificate, r.tree, ops, target));
  SelectorCertificate bad = r.certificate;
  bad.achieved[1] *= 0.5;
  EXPECT_FALSE(VerifyCertificate(bad, r.tree, ops, target));
  SelectorTree moved = r.tree;
  // Move one operator between leaves; the root is still partitioned.
  auto& a = moved.leaves[0];
  auto& b = moved.leaves[1];
  for (size_t k = 0; k < a.size(); ++k) {
    if (a[k] > 0) {
      --a[k];
      ++b[k];
      break;
    }
  }
  EXPECT_FALSE(VerifyCertificate(r.certificate, moved, ops, target));
}

TEST(BestSelectorTest, PreconditionsChecked) {
  std::vector<PsdOperator> big = {PsdOperator::FromMatrix(Axis(2, 0, 0.8)),
                                  PsdOperator::FromMatrix(Axis(2, 0, 0.8))};
  EXPECT_THROW(BestSelector(big, PsdOperator::FromMatrix(Axis(2, 0, 1.6)), 1), PreconditionError);
  std::vector<PsdOperator> small(4, PsdOperator::FromMatrix(Axis(2, 0, 0.25)));
  PsdOperator t = PsdOperator::FromMatrix(Axis(2, 0, 1.0));
  EXPECT_THROW(BestSelector(small, t, 2, {{}, 0.1, -1.0}), PreconditionError);  // trace above delta
  EXPECT_THROW(BestSelector(small, t, 3), PreconditionError);  // 2^N delta >= 1
  EXPECT_THROW(BestSelector(small, t, 0), PreconditionError);
}

// Brute force over every selector consistent with the pairing, for unit
// multiplicities.
double BruteForce(const SelectorProblem& p, const std::vector<int64_t>& counts, int depth) {
  if (depth == p.order) return LeafDeviation(p.kinds, counts, p.target, p.order);
  std::vector<KindPair> pairs = p.pairing(counts, depth);
  const int num = static_cast<int>(p.kinds.size());
  double best = std::numeric_limits<double>::infinity();
  for (uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
    std::vector<int64_t> left(num, 0), right(num, 0);
    for (size_t i = 0; i < pairs.size(); ++i) {
      const int to_left = (mask >> i) & 1 ? pairs[i].first : pairs[i].second;
      const int to_right = (mask >> i) & 1 ? pairs[i].second : pairs[i].first;
      if (to_left < num) ++left[to_left];
      if (to_right < num) ++right[to_right];
    }
    best = std::min(best, std::max(BruteForce(p, left, depth + 1), BruteForce(p, right, depth + 1)));
  }
  return best;
}

TEST(SearchSelectorsTest, ExhaustiveMatchesBruteForceAndBeatsGreedy) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 30; ++t) {
    const int m = 4 + t % 5;
    const int order = 1 + t % 2;
    std::vector<PsdOperator> ops = testing::RandomRankOnes(rng, 3, m, 0.05, 1.0, Field::kReal);
    SelectorProblem p;
    std::vector<double> traces;
    p.target = Mat::Zero(3, 3);
    for (const auto& op : ops) {
      p.kinds.push_back(op.matrix());
      traces.push_back(op.trace());
      p.target += op.matrix();
    }
    p.root_counts.assign(m, 1);
    p.order = order;
    p.pairing = DescendingTracePairing(traces);
    SearchOptions ex;
    ex.strategy = Strategy::kExhaustive;
    SearchOutcome e = SearchSelectors(p, ex);
    EXPECT_FALSE(e.fell_back);
    EXPECT_NEAR(e.worst, BruteForce(p, p.root_counts, 0), 1e-12);
    SearchOutcome g = SearchSelectors(p, {});
    EXPECT_LE(e.worst, g.worst + 1e-12);
    SearchOptions rnd;
    rnd.strategy = Strategy::kRandomized;
    rnd.restarts = 16;
    rnd.seed = t;
    SearchOutcome r = SearchSelectors(p, rnd);
    EXPECT_LE(e.worst, r.worst + 1e-12);
  }
}

TEST(SearchSelectorsTest, BudgetFallsBackToRandomized) {
  std::mt19937_64 rng(43);
  std::vector<PsdOperator> ops = testing::RandomRankOnes(rng, 3, 12, 0.05, 1.0, Field::kReal);
  SelectorProblem p;
  std::vector<double> traces;
  p.target = Mat::Zero(3, 3);
  for (const auto& op : ops) {
    p.kinds.push_back(op.matrix());
    traces.push_back(op.trace());
    p.target += op.matrix();
  }
  p.root_counts.assign(12, 1);
  p.order = 2;
  p.pairing = DescendingTracePairing(traces);
  SearchOptions o;
  o.strategy = Strategy::kExhaustive;
  o.exhaustive_budget = 4;
  o.restarts = 8;
  SearchOutcome r = SearchSelectors(p, o);
  EXPECT_TRUE(r.fell_back);
  EXPECT_EQ(r.used, Strategy::kRandomized);
}

TEST(SearchSelectorsTest, DeterministicForFixedSeed) {
  std::mt19937_64 rng(47);
  std::vector<PsdOperator> ops = testing::RandomRankOnes(rng, 4, 10, 0.05, 1.0, Field::kComplex);
  Mat sum = Mat::Zero(4, 4);
  for (const auto& op : ops) sum += op.matrix();
  BestSelectorOptions o;
  o.search.strategy = Strategy::kRandomized;
  o.search.restarts = 32;
  o.search.seed = 99;
  SelectorResult a = BestSelector(ops, PsdOperator::FromMatrix(sum), 2, o);
  SelectorResult b = BestSelector(ops, PsdOperator::FromMatrix(sum), 2, o);
  EXPECT_EQ(a.tree.leaves, b.tree.leaves);
  EXPECT_EQ(a.certificate.achieved, b.certificate.achieved);
}

// Recomputing every stored deviation reproduces it.
TEST(VerifyCertificateTest, RecomputationProperty) {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 100; ++t) {
    const int d = 2 + t % 5;
    const int m = 2 + t % 9;
    std::vector<PsdOperator> ops = testing::RandomRankOnes(rng, d, m, 0.1, 1.0, Field::kComplex);
    Mat sum = Mat::Zero(d, d);
    for (const auto& op : ops) sum += op.matrix();
    PsdOperator target = PsdOperator::FromMatrix(sum);
    SelectorResult r = BestSelector(ops, target, 1 + t % 3);
    EXPECT_TRUE(VerifyCertificate(r.certificate, r.tree, ops, target));
    for (size_t b = 0; b < r.tree.leaves.size(); ++b) {
      EXPECT_NEAR(r.certificate.achieved[b],
                  LeafDeviation(std::vector<Mat>([&] {
                                  std::vector<Mat> k;
                                  for (const auto& op : ops) k.push_back(op.matrix());
                                  return k;
                                }()),
                                r.tree.leaves[b], sum, r.certificate.order),
                  1e-9);
    }
  }
}

TEST(StrategyTest, RoundTrip) {
  for (Strategy s : {Strategy::kExhaustive, Strategy::kGreedy, Strategy::kRandomized}) {
    EXPECT_EQ(ParseStrategy(ToString(s)), s);
  }
  EXPECT_THROW(ParseStrategy("annealing"), Error);
}

}  // namespace
}  // namespace framex
