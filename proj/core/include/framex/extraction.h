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

#ifndef FRAMEX_EXTRACTION_H_
#define FRAMEX_EXTRACTION_H_

// Frame extraction: given {x_n} and scalars with {c_n x_n} a frame, finds
// multiplicities k_n such that the unit vectors x_n/||x_n||, repeated k_n
// times, form a frame. Also the finite-scale equivalences between rescalable
// families, unconditional reconstruction and non-collinear subfamilies.

#include <cstdint>
#include <optional>
#include <vector>

#include "framex/frames.h"
#include "framex/linalg.h"
#include "framex/sampling.h"
#include "framex/selectors.h"

namespace framex {

// Vectors closer than this to collinear (|<u, v>| >= 1 - kCollinearTol for
// unit u, v) are grouped together.
inline constexpr double kCollinearTol = 1e-8;
// Relative slack on the extracted frame bounds.
inline constexpr double kEnvelopeSlack = 1e-6;

struct ExtractionPlan {
  double lower = 0.0;  // A of {c_n x_n}
  double upper = 0.0;  // B
  double epsilon = 0.0;
  double c_constant = 0.0;
  int beta = 0;
  bool beta_zero_fallback = false;
  std::vector<double> weights;        // |c_n|^2 ||x_n||^2
  std::vector<int> boundaries;        // K_0 = 0, K_1 = 1, ..., K_J = count
  std::vector<Projection> subspaces;  // H_1 .. H_{J+1}
  std::vector<double> thresholds;     // eta_0 .. eta_J; eta_j = eps^2 / (36 * 4^j)
  // tr(Q_j (sum_{n >= K_j} w_n T_n) Q_j) for j = 1..J, Q_j onto H_1 + ... + H_j.
  std::vector<double> tail_traces;
  // tr(P_{M_j} S_j P_{M_j}) per block j = 0..J-1, S_j the block's weighted sum.
  std::vector<double> block_gammas;
  bool block_gammas_ok = false;
  // || sum_{j=0}^{J} P_{M_j^perp} - 2 P_span ||.
  double block_identity_defect = 0.0;

  int blocks() const { return static_cast<int>(boundaries.size()) - 1; }
  // Projection onto M_j^perp = H_{j+1} + H_{j+2}.
  Projection BlockComplement(int j) const;
};

struct ExtractOptions {
  double c_constant = -1.0;  // negative: UniversalConstantC()
  SearchOptions search;
  uint64_t seed = 0;
  int64_t replica_budget = kReplicaBudget;
  int max_levels = 16;
};

// Throws PreconditionError when {c_n x_n} is not a frame. Missing scalars
// count as 1. When lower/upper are not given they come from the spectrum.
ExtractionPlan Plan(const VectorFamily& f, const ExtractOptions& options = {},
                    std::optional<double> lower = std::nullopt,
                    std::optional<double> upper = std::nullopt);

struct BlockCertificate {
  int first = 0;  // K_j
  int last = 0;   // K_{j+1}, exclusive
  bool skipped = false;  // every weight in the block vanishes
  SamplingCertificate sampling;
};

struct ExtractionResult {
  ExtractionPlan plan;
  SamplingFunction sigma;               // multiplicities over the original indices
  VectorFamily normalized{1, Field::kReal, {}};  // distinct selected unit vectors
  std::vector<int> selected;            // original index of each normalized vector
  std::vector<int64_t> multiplicities;  // per normalized vector
  FrameReport report;                   // of the unit vectors with multiplicity
  double envelope_lower = 0.0;          // 2^beta A / 3
  double envelope_upper = 0.0;          // 3 * 2^beta B
  bool bounds_ok = false;
  double mult_bound_l = 0.0;            // max(144 C^2 B / A^2, 64 C^4 / B^2)
  bool mult_ok = false;                 // k_n <= L w_n for every n
  bool block_mult_ok = false;           // k_n <= 2^(beta+1) w_n for every n
  bool sandwich_ok = false;             // every block's two-sided bound
  std::vector<BlockCertificate> blocks;
};

ExtractionResult Extract(const VectorFamily& f, const ExtractOptions& options = {});

struct CoefficientFamily {
  VectorFamily functionals;  // conj(c_n) S^-1 (c_n x_n)
  double max_residual = 0.0;  // relative, over random probes
};

// Coefficient functionals making {x_n} reconstruct every x. Throws
// PreconditionError unless {c_n x_n} is a frame.
CoefficientFamily EquivalenceBToA(const VectorFamily& f, int probes = 100,
                                  uint64_t seed = kDefaultProbeSeed);

struct CollinearGroups {
  std::vector<int> representative;  // first index of each class
  std::vector<std::vector<int>> members;
  std::vector<Scalar> ratio;        // x_n = ratio[n] x_{rep(n)}; 0 for zero vectors
  std::vector<int> class_of;        // -1 for zero vectors
};

CollinearGroups GroupCollinear(const VectorFamily& f, double tol = kCollinearTol);

struct NonCollinearSubfamily {
  CollinearGroups groups;
  std::vector<double> class_weights;  // sum over the class of |c_n|^2 ||x_n||^2
  bool class_weights_ok = false;      // every class weight <= B (1 + kNumTol)
  ExtractionResult extraction;        // on the representatives
  std::vector<int> indices;           // original indices in the range of sigma
  bool pairwise_non_collinear = false;
};

// Default scalars are 1/||x_n||. Throws PreconditionError for non-spanning
// families.
NonCollinearSubfamily EquivalenceAToD(const VectorFamily& f, const ExtractOptions& options = {});

struct ReconstructionCheck {
  bool holds = false;
  double max_residual = 0.0;  // relative
};

// Checks x = sum <x, x_n> y_n on random probes.
ReconstructionCheck EquivalenceCCheck(const VectorFamily& f, const VectorFamily& duals,
                                      int probes = 100, uint64_t seed = kDefaultProbeSeed);

}  // namespace framex

#endif  // FRAMEX_EXTRACTION_H_
