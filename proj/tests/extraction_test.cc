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

#include "framex/extraction.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "framex/errors.h"
#include "test_util.h"

namespace framex {
namespace {

using testing::Basis;
using testing::RandomFamily;

VectorFamily Onb(int d) {
  std::vector<Vec> vs;
  for (int i = 0; i < d; ++i) vs.push_back(Basis(d, i));
  return VectorFamily(d, Field::kReal, vs);
}

Mat Stack(const ExtractionPlan& p, int count) {
  const int dim = p.subspaces.front().dim();
  int cols = 0;
  for (int i = 0; i < count; ++i) cols += p.subspaces[i].rank();
  Mat q(dim, cols);
  int at = 0;
  for (int i = 0; i < count; ++i) {
    q.middleCols(at, p.subspaces[i].rank()) = p.subspaces[i].basis();
    at += p.subspaces[i].rank();
  }
  return q;
}

void ExpectPlanConsistent(const VectorFamily& f, const ExtractionPlan& p) {
  const int m = static_cast<int>(f.size());
  ASSERT_GE(p.blocks(), 1);
  EXPECT_EQ(p.boundaries.front(), 0);
  EXPECT_EQ(p.boundaries.back(), m);
  for (int j = 1; j < static_cast<int>(p.boundaries.size()); ++j) {
    EXPECT_LT(p.boundaries[j - 1], p.boundaries[j]);
  }
  EXPECT_TRUE(p.block_gammas_ok);
  EXPECT_LT(p.block_identity_defect, 1e-9);
  // Tail traces recomputed from the stored subspaces.
  for (int i = 0; i < p.blocks(); ++i) {
    Mat q = Stack(p, i + 1);
    double tail = 0.0;
    for (int n = p.boundaries[i + 1]; n < m; ++n) {
      const double norm = f[n].norm();
      if (norm == 0.0) continue;
      Vec u = f[n] / (norm * std::sqrt(p.upper));
      tail += p.weights[n] * (q.adjoint() * u).squaredNorm();
    }
    EXPECT_NEAR(tail, p.tail_traces[i], 1e-12);
    EXPECT_LE(tail, p.thresholds[i + 1] + 1e-9);
  }
}

void ExpectExtracted(const ExtractionResult& r) {
  EXPECT_GT(r.report.lower, 0.0);
  EXPECT_TRUE(r.bounds_ok);
  EXPECT_GE(r.report.lower, r.envelope_lower * (1 - 1e-6));
  EXPECT_LE(r.report.upper, r.envelope_upper * (1 + 1e-6));
  EXPECT_TRUE(r.mult_ok);
  EXPECT_TRUE(r.block_mult_ok);
  EXPECT_TRUE(r.sandwich_ok);
  const std::vector<int64_t>& k = r.sigma.multiplicity();
  for (size_t n = 0; n < k.size(); ++n) {
    EXPECT_LE(static_cast<double>(k[n]), r.mult_bound_l * r.plan.weights[n]);
    EXPECT_LE(std::ldexp(static_cast<double>(k[n]), -(r.plan.beta + 1)), r.plan.weights[n]);
  }
}

TEST(PlanTest, OrthonormalBasis) {
  ExtractionPlan p = Plan(Onb(4));
  ExpectPlanConsistent(Onb(4), p);
  for (double t : p.tail_traces) EXPECT_EQ(t, 0.0);
}

TEST(PlanTest, RescaledDiagonalMatchesBasis) {
  std::vector<Vec> vs;
  std::vector<Scalar> c;
  for (int n = 1; n <= 4; ++n) {
    vs.push_back(Basis(4, n - 1) / static_cast<double>(n));
    c.emplace_back(n, 0.0);
  }
  ExtractionPlan a = Plan(VectorFamily(4, Field::kReal, vs, c));
  ExtractionPlan b = Plan(Onb(4));
  EXPECT_EQ(a.boundaries, b.boundaries);
  EXPECT_EQ(a.beta, b.beta);
  EXPECT_NEAR(a.epsilon, b.epsilon, 1e-15);
  for (size_t n = 0; n < a.weights.size(); ++n) EXPECT_NEAR(a.weights[n], b.weights[n], 1e-15);
}

TEST(PlanTest, RandomFramesPassTailChecks) {
  std::mt19937_64 rng(101);
  for (int t = 0; t < 10; ++t) {
    VectorFamily f = RandomFamily(rng, 8, 24, t % 2 ? Field::kComplex : Field::kReal);
    ExpectPlanConsistent(f, Plan(f));
  }
}

TEST(PlanTest, RejectsNonFrame) {
  EXPECT_THROW(Plan(VectorFamily(2, Field::kReal, {Basis(2, 0)})), PreconditionError);
}

TEST(ExtractTest, OrthonormalBasis) {
  ExtractionResult r = Extract(Onb(4));
  ExpectExtracted(r);
  EXPECT_EQ(r.selected, (std::vector<int>{0, 1, 2, 3}));
}

TEST(ExtractTest, TightFrameRatio) {
  const double h = std::sqrt(3.0) / 2;
  VectorFamily f(2, Field::kReal, {testing::RealVec({0, 1}), testing::RealVec({-h, -0.5}),
                                   testing::RealVec({h, -0.5})});
  ExtractionResult r = Extract(f);
  ExpectExtracted(r);
  EXPECT_LE(r.report.upper / r.report.lower, 9.0 * (1 + 1e-6));
}

TEST(ExtractTest, TwoScaleFamilyWithRescaling) {
  const int d = 6;
  std::vector<Vec> vs;
  std::vector<Scalar> c;
  for (int n = 1; n <= d; ++n) {
    vs.push_back(Basis(d, n - 1) / static_cast<double>(n));
    c.emplace_back(n, 0.0);
    vs.push_back(Basis(d, n - 1) * static_cast<double>(n));
    c.emplace_back(1.0 / n, 0.0);
  }
  ExtractionResult r = Extract(VectorFamily(d, Field::kReal, vs, c));
  ExpectExtracted(r);
}

TEST(ExtractTest, RandomFamilies) {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> scale(-3, 3);
  for (int t = 0; t < 8; ++t) {
    const int d = 2 + t % 5;
    VectorFamily f = RandomFamily(rng, d, 2 * d + 1, t % 2 ? Field::kComplex : Field::kReal);
    std::vector<Scalar> c;
    for (size_t n = 0; n < f.size(); ++n) c.emplace_back(std::exp(scale(rng)), 0.0);
    ExtractionResult r = Extract(f.WithScalars(c));
    ExpectExtracted(r);
  }
}

TEST(ExtractTest, DeterministicForSeed) {
  std::mt19937_64 rng(107);
  VectorFamily f = RandomFamily(rng, 3, 7, Field::kReal);
  ExtractOptions o;
  o.seed = 3;
  ExtractionResult a = Extract(f, o);
  ExtractionResult b = Extract(f, o);
  EXPECT_EQ(a.sigma.multiplicity(), b.sigma.multiplicity());
}

TEST(EquivalenceBToATest, OrthonormalBasis) {
  CoefficientFamily cf = EquivalenceBToA(Onb(3));
  for (int i = 0; i < 3; ++i) EXPECT_LT((cf.functionals[i] - Basis(3, i)).norm(), 1e-15);
  EXPECT_LT(cf.max_residual, 1e-12);
}

TEST(EquivalenceBToATest, ScaledBasis) {
  VectorFamily f(2, Field::kReal, {2.0 * Basis(2, 0), Basis(2, 1)}, std::vector<Scalar>{1.0, 1.0});
  CoefficientFamily cf = EquivalenceBToA(f);
  EXPECT_LT((cf.functionals[0] - Basis(2, 0) / 2.0).norm(), 1e-15);
  EXPECT_LT((cf.functionals[1] - Basis(2, 1)).norm(), 1e-15);
}

TEST(EquivalenceBToATest, RandomReconstruction) {
  std::mt19937_64 rng(109);
  for (int t = 0; t < 10; ++t) {
    VectorFamily f = RandomFamily(rng, 4, 7, Field::kComplex);
    std::vector<Scalar> c;
    for (size_t n = 0; n < f.size(); ++n) c.emplace_back(0.5 + n, 0.25 * n);
    EXPECT_LT(EquivalenceBToA(f.WithScalars(c)).max_residual, 1e-9);
  }
}

TEST(GroupCollinearTest, ScaledCopyGrouped) {
  VectorFamily f(2, Field::kReal, {Basis(2, 0), 2.0 * Basis(2, 0), Basis(2, 1)});
  CollinearGroups g = GroupCollinear(f);
  ASSERT_EQ(g.members.size(), 2u);
  EXPECT_EQ(g.members[0], (std::vector<int>{0, 1}));
  EXPECT_EQ(g.members[1], (std::vector<int>{2}));
  EXPECT_NEAR(g.ratio[1].real(), 2.0, 1e-15);
}

TEST(GroupCollinearTest, OrthonormalBasisIsIdentity) {
  CollinearGroups g = GroupCollinear(Onb(4));
  EXPECT_EQ(g.representative, (std::vector<int>{0, 1, 2, 3}));
}

TEST(EquivalenceAToDTest, PlantedDuplicatesRemoved) {
  std::mt19937_64 rng(113);
  std::uniform_real_distribution<double> s(0.1, 5.0);
  std::uniform_real_distribution<double> phase(0, 2 * M_PI);
  for (int t = 0; t < 5; ++t) {
    VectorFamily base = RandomFamily(rng, 3, 5, Field::kComplex);
    std::vector<Vec> vs = base.vectors();
    for (int k = 0; k < 4; ++k) {
      vs.push_back(base[k % 5] * std::polar(s(rng), phase(rng)));
    }
    VectorFamily f(3, Field::kComplex, vs);
    NonCollinearSubfamily r = EquivalenceAToD(f);
    EXPECT_TRUE(r.pairwise_non_collinear);
    EXPECT_TRUE(r.class_weights_ok);
    for (size_t i = 0; i < r.indices.size(); ++i) {
      for (size_t j = i + 1; j < r.indices.size(); ++j) {
        Vec u = f[r.indices[i]].normalized();
        Vec v = f[r.indices[j]].normalized();
        EXPECT_LT(std::abs(Inner(u, v)), 1 - kCollinearTol);
      }
    }
    ExpectExtracted(r.extraction);
  }
}

TEST(EquivalenceCCheckTest, Cases) {
  EXPECT_TRUE(EquivalenceCCheck(Onb(3), Onb(3)).holds);
  std::mt19937_64 rng(127);
  VectorFamily f = RandomFamily(rng, 3, 6, Field::kReal);
  VectorFamily d = CanonicalDual(f);
  EXPECT_TRUE(EquivalenceCCheck(d, f).holds);
  std::vector<Vec> bad = d.vectors();
  bad[0] *= 1.5;
  EXPECT_FALSE(EquivalenceCCheck(f, VectorFamily(3, Field::kReal, bad)).holds);
}

}  // namespace
}  // namespace framex
