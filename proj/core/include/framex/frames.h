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

#ifndef FRAMEX_FRAMES_H_
#define FRAMEX_FRAMES_H_

// Finite frames: frame operators, optimal bounds, canonical duals,
// reconstruction and the Riesz basis / frame / rescalable classification.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "framex/linalg.h"

namespace framex {

// Indexed family of vectors in a dim-dimensional space, with optional
// per-index scalars c_n and labels.
class VectorFamily {
 public:
  VectorFamily(int dim, Field field, std::vector<Vec> vectors,
               std::optional<std::vector<Scalar>> scalars = std::nullopt,
               std::optional<std::vector<std::string>> labels = std::nullopt);

  int dim() const { return dim_; }
  Field field() const { return field_; }
  size_t size() const { return vectors_.size(); }
  bool empty() const { return vectors_.empty(); }
  const std::vector<Vec>& vectors() const { return vectors_; }
  const Vec& operator[](size_t n) const { return vectors_[n]; }
  bool has_scalars() const { return scalars_.has_value(); }
  const std::vector<Scalar>& scalars() const;
  const std::optional<std::vector<std::string>>& labels() const { return labels_; }

  VectorFamily WithScalars(std::vector<Scalar> scalars) const;
  VectorFamily WithoutScalars() const;
  // c_n x_n when use_scalars (and scalars are present), x_n otherwise.
  std::vector<Vec> Weighted(bool use_scalars) const;

 private:
  int dim_;
  Field field_;
  std::vector<Vec> vectors_;
  std::optional<std::vector<Scalar>> scalars_;
  std::optional<std::vector<std::string>> labels_;
};

// Lower bound below kFrameTol * B counts as zero.
inline constexpr double kFrameTol = 1e-10;
inline constexpr int kFrameSelfCheckProbes = 50;
inline constexpr uint64_t kDefaultProbeSeed = 0x6672616d65780001ULL;

struct FrameReport {
  double lower = 0.0;  // A = smallest eigenvalue of the frame operator
  double upper = 0.0;  // B = largest eigenvalue
  bool is_frame = false;
  bool is_bessel = false;
  bool is_tight = false;
  bool is_riesz_basis = false;
  int count = 0;
  int dim = 0;
  // Extremes of sum |<x, w_n>|^2 over the random unit probes of the self-check.
  double probe_min = 0.0;
  double probe_max = 0.0;
};

// Unit vectors drawn from a seeded Gaussian, real or complex per `field`.
std::vector<Vec> RandomProbes(int dim, Field field, int count, uint64_t seed);

// S x = sum <x, w_n> w_n.
PsdOperator FrameOperator(const VectorFamily& f, bool use_scalars);

// A and B from the spectrum of S, cross-checked against kFrameSelfCheckProbes
// random unit probes.
FrameReport FrameBounds(const VectorFamily& f, bool use_scalars,
                        uint64_t probe_seed = kDefaultProbeSeed);

// {S^{-1} x_n}. Throws PreconditionError when f is not a frame.
VectorFamily CanonicalDual(const VectorFamily& f);

struct Reconstruction {
  Vec sum;
  // max over prefixes k of || x - sum_{i<=k} <x, y_{pi(i)}> x_{pi(i)} ||.
  double max_partial_residual = 0.0;
};

// sum_n <x, y_n> x_n in the given order (a permutation of 0..size-1; empty
// means identity).
Reconstruction Reconstruct(const VectorFamily& f, const VectorFamily& duals,
                           const Vec& x, std::span<const int> order = {});

// Largest distance between the identity-order sum and the sums in
// `permutations` seeded random orders. Finite sums always commute, so this is
// a diagnostic of floating point reordering only.
double UnconditionalitySpread(const VectorFamily& f, const VectorFamily& duals,
                              const Vec& x, int permutations, uint64_t seed);

enum class HierarchyLabel { kRieszBasis, kFrame, kRescalable, kNonSpanning };

const char* ToString(HierarchyLabel label);

struct Classification {
  HierarchyLabel label = HierarchyLabel::kNonSpanning;
  FrameReport report;                 // of the family as given
  FrameReport normalized_report;      // of {x_n / ||x_n||}, zero vectors dropped
  bool rescaling_recommended = false; // lower bound is tiny relative to B
  std::string note;
};

// Spanning families whose lower bound is ill-conditioned still classify as
// frames with rescaling_recommended set; families whose lower bound is
// numerically zero but whose normalization spans classify as rescalable.
Classification Classify(const VectorFamily& f);

// Bounds of {||x_n|| y_n}_{n in subset}: the Bessel bound is guaranteed,
// the lower bound is reported without any claim attached.
FrameReport NormWeightedDualBounds(const VectorFamily& f, const VectorFamily& duals,
                                   std::span<const int> subset);

}  // namespace framex

#endif  // FRAMEX_FRAMES_H_
