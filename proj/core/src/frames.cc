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

#include "framex/frames.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <utility>

#include "framex/errors.h"

namespace framex {

VectorFamily::VectorFamily(int dim, Field field, std::vector<Vec> vectors,
                           std::optional<std::vector<Scalar>> scalars,
                           std::optional<std::vector<std::string>> labels)
    : dim_(dim),
      field_(field),
      vectors_(std::move(vectors)),
      scalars_(std::move(scalars)),
      labels_(std::move(labels)) {
  if (dim_ < 1) throw PreconditionError("family dimension must be positive");
  for (const Vec& v : vectors_) {
    if (v.size() != dim_) throw PreconditionError("vector length differs from family dimension");
    if (field_ == Field::kReal && !IsRealValued(v)) {
      throw PreconditionError("real family contains a vector with imaginary part");
    }
  }
  if (scalars_ && scalars_->size() != vectors_.size()) {
    throw PreconditionError("scalar count differs from vector count");
  }
  if (labels_ && labels_->size() != vectors_.size()) {
    throw PreconditionError("label count differs from vector count");
  }
}

const std::vector<Scalar>& VectorFamily::scalars() const {
  if (!scalars_) throw PreconditionError("family has no scalars");
  return *scalars_;
}

VectorFamily VectorFamily::WithScalars(std::vector<Scalar> scalars) const {
  return VectorFamily(dim_, field_, vectors_, std::move(scalars), labels_);
}

VectorFamily VectorFamily::WithoutScalars() const {
  return VectorFamily(dim_, field_, vectors_, std::nullopt, labels_);
}

std::vector<Vec> VectorFamily::Weighted(bool use_scalars) const {
  if (!use_scalars || !scalars_) return vectors_;
  std::vector<Vec> out;
  out.reserve(vectors_.size());
  for (size_t n = 0; n < vectors_.size(); ++n) out.push_back((*scalars_)[n] * vectors_[n]);
  return out;
}

std::vector<Vec> RandomProbes(int dim, Field field, int count, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vec> probes;
  probes.reserve(count);
  while (static_cast<int>(probes.size()) < count) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) {
      double re = gauss(rng);
      double im = field == Field::kComplex ? gauss(rng) : 0.0;
      v(i) = Scalar(re, im);
    }
    double norm = v.norm();
    if (norm == 0.0) continue;
    probes.push_back(v / norm);
  }
  return probes;
}

namespace {

Mat FrameMatrix(int dim, const std::vector<Vec>& w) {
  Mat s = Mat::Zero(dim, dim);
  for (const Vec& v : w) s.noalias() += v * v.adjoint();
  return s;
}

FrameReport BoundsOf(int dim, Field field, const std::vector<Vec>& w, uint64_t probe_seed) {
  FrameReport r;
  r.dim = dim;
  r.count = static_cast<int>(w.size());
  Mat s = FrameMatrix(dim, w);
  std::vector<double> spec = Spectrum(s);
  r.upper = std::max(spec.back(), 0.0);
  r.lower = std::max(spec.front(), 0.0);
  r.is_bessel = true;
  r.is_frame = r.upper > 0.0 && r.lower > kFrameTol * r.upper;
  r.is_tight = r.is_frame && std::abs(r.upper - r.lower) <= kNumTol * r.upper;
  r.is_riesz_basis = r.is_frame && r.count == dim;

  double slack = kNumTol * std::max(r.upper, 1.0);
  r.probe_min = INFINITY;
  r.probe_max = 0.0;
  for (const Vec& x : RandomProbes(dim, field, kFrameSelfCheckProbes, probe_seed)) {
    double energy = 0.0;
    for (const Vec& v : w) energy += std::norm(Inner(x, v));
    r.probe_min = std::min(r.probe_min, energy);
    r.probe_max = std::max(r.probe_max, energy);
    if (energy < r.lower - slack || energy > r.upper + slack) {
      throw Error("frame bound self-check failed on a random probe");
    }
  }
  return r;
}

}  // namespace

PsdOperator FrameOperator(const VectorFamily& f, bool use_scalars) {
  return PsdOperator::FromMatrix(FrameMatrix(f.dim(), f.Weighted(use_scalars)));
}

FrameReport FrameBounds(const VectorFamily& f, bool use_scalars, uint64_t probe_seed) {
  return BoundsOf(f.dim(), f.field(), f.Weighted(use_scalars), probe_seed);
}

VectorFamily CanonicalDual(const VectorFamily& f) {
  FrameReport rep = FrameBounds(f, false);
  if (!rep.is_frame) throw PreconditionError("canonical dual needs a frame");
  Mat s = FrameMatrix(f.dim(), f.vectors());
  Eigensystem es = Eigh(s);
  Eigen::VectorXd inv(f.dim());
  for (int i = 0; i < f.dim(); ++i) inv(i) = 1.0 / es.values[i];
  Mat s_inv = es.vectors * inv.asDiagonal() * es.vectors.adjoint();
  std::vector<Vec> duals;
  duals.reserve(f.size());
  for (const Vec& v : f.vectors()) {
    Vec d = s_inv * v;
    if (f.field() == Field::kReal) d = d.real().cast<Scalar>();
    duals.push_back(std::move(d));
  }
  return VectorFamily(f.dim(), f.field(), std::move(duals), std::nullopt, f.labels());
}

Reconstruction Reconstruct(const VectorFamily& f, const VectorFamily& duals, const Vec& x,
                           std::span<const int> order) {
  if (duals.size() != f.size() || duals.dim() != f.dim() || x.size() != f.dim()) {
    throw PreconditionError("reconstruction inputs disagree in size");
  }
  std::vector<int> perm(order.begin(), order.end());
  if (perm.empty()) {
    perm.resize(f.size());
    std::iota(perm.begin(), perm.end(), 0);
  }
  if (perm.size() != f.size()) throw PreconditionError("order is not a permutation");
  std::vector<char> seen(f.size(), 0);
  for (int n : perm) {
    if (n < 0 || n >= static_cast<int>(f.size()) || seen[n]) {
      throw PreconditionError("order is not a permutation");
    }
    seen[n] = 1;
  }
  Reconstruction r;
  r.sum = Vec::Zero(f.dim());
  for (int n : perm) {
    r.sum += Inner(x, duals[n]) * f[n];
    r.max_partial_residual = std::max(r.max_partial_residual, (x - r.sum).norm());
  }
  if (perm.empty()) r.max_partial_residual = x.norm();
  return r;
}

double UnconditionalitySpread(const VectorFamily& f, const VectorFamily& duals, const Vec& x,
                              int permutations, uint64_t seed) {
  Vec base = Reconstruct(f, duals, x).sum;
  std::mt19937_64 rng(seed);
  std::vector<int> perm(f.size());
  double spread = 0.0;
  for (int p = 0; p < permutations; ++p) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    spread = std::max(spread, (Reconstruct(f, duals, x, perm).sum - base).norm());
  }
  return spread;
}

const char* ToString(HierarchyLabel label) {
  switch (label) {
    case HierarchyLabel::kRieszBasis: return "riesz_basis";
    case HierarchyLabel::kFrame: return "frame";
    case HierarchyLabel::kRescalable: return "rescalable";
    case HierarchyLabel::kNonSpanning: return "non_spanning";
  }
  return "unknown";
}

namespace {
// Below this fraction of B the lower bound is numerically indistinguishable
// from zero.
constexpr double kNumericalZero = 1e-15;
}  // namespace

Classification Classify(const VectorFamily& f) {
  Classification c;
  c.report = FrameBounds(f, false);
  std::vector<Vec> unit;
  for (const Vec& v : f.vectors()) {
    double n = v.norm();
    if (n > 0.0) unit.push_back(v / n);
  }
  c.normalized_report = BoundsOf(f.dim(), f.field(), unit, kDefaultProbeSeed);
  bool spanning = c.normalized_report.upper > 0.0 &&
                  c.normalized_report.lower > kFrameTol * c.normalized_report.upper;
  const double a = c.report.lower;
  const double b = c.report.upper;
  if (!spanning) {
    c.label = HierarchyLabel::kNonSpanning;
    c.note = "normalized vectors do not span the space";
  } else if (a > kFrameTol * b) {
    c.label = f.size() == static_cast<size_t>(f.dim()) ? HierarchyLabel::kRieszBasis
                                                         : HierarchyLabel::kFrame;
  } else if (a > kNumericalZero * b) {
    c.label = f.size() == static_cast<size_t>(f.dim()) ? HierarchyLabel::kRieszBasis
                                                         : HierarchyLabel::kFrame;
    c.rescaling_recommended = true;
    c.note = "lower frame bound is tiny relative to the upper bound; rescale by 1/||x_n||";
  } else {
    c.label = HierarchyLabel::kRescalable;
    c.note = "lower frame bound is numerically zero but the normalized family is a frame";
  }
  return c;
}

FrameReport NormWeightedDualBounds(const VectorFamily& f, const VectorFamily& duals,
                                   std::span<const int> subset) {
  if (duals.size() != f.size()) throw PreconditionError("dual count differs from family count");
  std::vector<Vec> w;
  for (int n : subset) {
    if (n < 0 || n >= static_cast<int>(f.size())) throw PreconditionError("subset index out of range");
    w.push_back(f[n].norm() * duals[n]);
  }
  return BoundsOf(f.dim(), f.field(), w, kDefaultProbeSeed);
}

}  // namespace framex
