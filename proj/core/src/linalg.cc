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

#include "framex/linalg.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "framex/errors.h"

namespace framex {
namespace {

double NormScale(const Mat& m) {
  // Frobenius norm bounds the operator norm from above and is cheap.
  return std::max(m.norm(), std::numeric_limits<double>::min());
}

}  // namespace

bool IsRealValued(const Mat& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (m(i, j).imag() != 0.0) return false;
    }
  }
  return true;
}

bool IsRealValued(const Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i).imag() != 0.0) return false;
  }
  return true;
}

Scalar Inner(const Vec& x, const Vec& y) { return y.dot(x); }

double HermitianDefect(const Mat& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Eigensystem Eigh(const Mat& m) {
  if (m.rows() != m.cols()) {
    throw PreconditionError("Eigh: matrix is not square");
  }
  if (m.rows() == 0) return {};
  if (HermitianDefect(m) > kHermTol * NormScale(m)) {
    throw PreconditionError("Eigh: matrix is not Hermitian within tolerance");
  }
  const Mat sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error("Eigh: eigensolver did not converge");
  }
  const Eigen::Index n = m.rows();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto& vals = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return vals(a) < vals(b); });
  Eigensystem out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = vals(order[k]);
    out.vectors.col(k) = solver.eigenvectors().col(order[k]);
  }
  return out;
}

std::vector<double> Spectrum(const Mat& m) {
  if (m.rows() != m.cols()) {
    throw PreconditionError("Spectrum: matrix is not square");
  }
  if (m.rows() == 0) return {};
  if (HermitianDefect(m) > kHermTol * NormScale(m)) {
    throw PreconditionError("Spectrum: matrix is not Hermitian within tolerance");
  }
  const Mat sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error("Spectrum: eigensolver did not converge");
  }
  std::vector<double> out(solver.eigenvalues().data(),
                          solver.eigenvalues().data() + m.rows());
  std::stable_sort(out.begin(), out.end());
  return out;
}

double OperatorNorm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == m.cols() && HermitianDefect(m) <= kHermTol * NormScale(m)) {
    const auto s = Spectrum(m);
    return std::max(std::abs(s.front()), std::abs(s.back()));
  }
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

PsdOperator PsdOperator::FromMatrix(Mat m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw PreconditionError("PsdOperator: matrix must be square and nonempty");
  }
  const auto spectrum = Spectrum(m);
  const double norm = std::max(std::abs(spectrum.front()), std::abs(spectrum.back()));
  if (spectrum.front() < -kPsdTol * std::max(norm, std::numeric_limits<double>::min())) {
    throw PreconditionError("PsdOperator: matrix has a negative eigenvalue " +
                            std::to_string(spectrum.front()));
  }
  m = 0.5 * (m + m.adjoint()).eval();
  const double trace = m.trace().real();
  return PsdOperator(std::move(m), trace, norm, spectrum.front());
}

PsdOperator PsdOperator::Zero(int dim) {
  if (dim <= 0) throw PreconditionError("PsdOperator::Zero: dim must be positive");
  return PsdOperator(Mat::Zero(dim, dim), 0.0, 0.0, 0.0);
}

PsdOperator RankOne(const Vec& v) {
  const double n2 = v.squaredNorm();
  if (v.size() == 0 || n2 == 0.0) {
    throw PreconditionError("RankOne: vector must be nonzero");
  }
  Mat m = v * v.adjoint();
  return PsdOperator(std::move(m), n2, n2, 0.0);
}

Projection::Projection(int dim) : dim_(dim), basis_(Mat::Zero(dim, 0)) {}

Projection::Projection(int dim, Mat basis) : dim_(dim), basis_(std::move(basis)) {
  if (basis_.rows() != dim) {
    throw PreconditionError("Projection: basis rows must equal dim");
  }
}

Mat Projection::Matrix() const {
  if (basis_.cols() == 0) return Mat::Zero(dim_, dim_);
  return basis_ * basis_.adjoint();
}

Vec Projection::Apply(const Vec& x) const {
  if (basis_.cols() == 0) return Vec::Zero(dim_);
  return basis_ * (basis_.adjoint() * x);
}

Projection Projection::Complement() const {
  std::vector<Vec> candidates;
  candidates.reserve(dim_);
  for (int i = 0; i < dim_; ++i) {
    Vec e = Vec::Zero(dim_);
    e(i) = 1.0;
    candidates.push_back(e - Apply(e));
  }
  // Residuals of the standard basis span the complement; orthonormalize them
  // against each other and against the range once more for stability.
  std::vector<Vec> kept;
  for (auto& c : candidates) {
    Vec r = c;
    for (int pass = 0; pass < 2; ++pass) {
      if (basis_.cols() > 0) r -= basis_ * (basis_.adjoint() * r);
      for (const auto& q : kept) r -= q * q.dot(r);
    }
    const double nr = r.norm();
    if (nr > 1e-8) kept.push_back(r / nr);
    if (static_cast<int>(kept.size()) + rank() == dim_) break;
  }
  Mat b(dim_, static_cast<Eigen::Index>(kept.size()));
  for (size_t k = 0; k < kept.size(); ++k) b.col(static_cast<Eigen::Index>(k)) = kept[k];
  return Projection(dim_, std::move(b));
}

Projection ProjectOnto(int dim, std::span<const Vec> span_of) {
  double max_norm = 0.0;
  for (const auto& v : span_of) {
    if (v.size() != dim) {
      throw PreconditionError("ProjectOnto: vector dimension mismatch");
    }
    max_norm = std::max(max_norm, v.norm());
  }
  const double drop = kRankDropTol * max_norm;
  std::vector<Vec> kept;
  for (const auto& v : span_of) {
    Vec r = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : kept) r -= q * q.dot(r);
    }
    const double nr = r.norm();
    if (nr > drop && nr > 0.0) kept.push_back(r / nr);
  }
  Mat b(dim, static_cast<Eigen::Index>(kept.size()));
  for (size_t k = 0; k < kept.size(); ++k) b.col(static_cast<Eigen::Index>(k)) = kept[k];
  return Projection(dim, std::move(b));
}

Projection DirectSum(const Projection& a, const Projection& b) {
  if (a.dim() != b.dim()) throw PreconditionError("DirectSum: dimension mismatch");
  Mat basis(a.dim(), a.rank() + b.rank());
  basis << a.basis(), b.basis();
  return Projection(a.dim(), std::move(basis));
}

Mat Gram(std::span<const Vec> vectors) {
  if (vectors.empty()) return Mat(0, 0);
  const Eigen::Index d = vectors.front().size();
  Mat x(d, static_cast<Eigen::Index>(vectors.size()));
  for (size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].size() != d) throw PreconditionError("Gram: dimension mismatch");
    x.col(static_cast<Eigen::Index>(k)) = vectors[k];
  }
  // (X^* X)(i, j) = <x_j, x_i>, so transpose.
  return (x.adjoint() * x).transpose();
}

SandwichReport SandwichBound(const PsdOperator& op, const Projection& p) {
  if (op.dim() != p.dim()) throw PreconditionError("SandwichBound: dimension mismatch");
  const Mat pm = p.Matrix();
  const Mat pc = Mat::Identity(op.dim(), op.dim()) - pm;
  const Mat& t = op.matrix();
  const Mat inner = pm * t * pm;
  const Mat outer = pc * t * pc;
  SandwichReport r;
  r.c_m = std::sqrt(OperatorNorm(inner) * OperatorNorm(outer));
  const Mat deviation = t - inner - outer;
  const auto s = Spectrum(0.5 * (deviation + deviation.adjoint()));
  r.deviation_min = s.front();
  r.deviation_max = s.back();
  const double tol = kNumTol * std::max(1.0, op.opnorm());
  r.holds = r.deviation_min >= -r.c_m - tol && r.deviation_max <= r.c_m + tol;
  return r;
}

}  // namespace framex
