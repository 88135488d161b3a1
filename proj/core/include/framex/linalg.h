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

#ifndef FRAMEX_LINALG_H_
#define FRAMEX_LINALG_H_

// Dense inner-product-space primitives: vectors, Hermitian operators,
// orthogonal projections and spectra. Every space is stored over the complex
// numbers; a real space is one whose entries all have zero imaginary part.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace framex {

enum class Field { kReal, kComplex };

using Scalar = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

// Numerical tolerances, relative to the operator norm of the object checked.
inline constexpr double kHermTol = 1e-9;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kNumTol = 1e-9;
// Gram-Schmidt drops a residual below kRankDropTol * (max input norm).
inline constexpr double kRankDropTol = 1e-8;

// True when every entry has an exactly zero imaginary part.
bool IsRealValued(const Mat& m);
bool IsRealValued(const Vec& v);

// <x, y>, linear in the first argument.
Scalar Inner(const Vec& x, const Vec& y);

// Largest |m_ij - conj(m_ji)|.
double HermitianDefect(const Mat& m);

struct Eigensystem {
  std::vector<double> values;  // ascending
  Mat vectors;                 // column k belongs to values[k]
};

// Eigendecomposition of a Hermitian matrix. Throws PreconditionError when the
// matrix is not Hermitian within kHermTol relative to its norm. Ties keep the
// solver's order (stable sort by value).
Eigensystem Eigh(const Mat& m);

// Ascending eigenvalues of a Hermitian matrix.
std::vector<double> Spectrum(const Mat& m);

// Largest singular value; for Hermitian input the largest |eigenvalue|.
double OperatorNorm(const Mat& m);

// Positive semidefinite Hermitian operator with cached trace and norm.
class PsdOperator {
 public:
  // Validates hermiticity and min eigenvalue >= -kPsdTol * ||m||.
  static PsdOperator FromMatrix(Mat m);
  static PsdOperator Zero(int dim);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Mat& matrix() const { return matrix_; }
  double trace() const { return trace_; }
  double opnorm() const { return opnorm_; }
  double min_eigenvalue() const { return min_eigenvalue_; }

  Vec Apply(const Vec& x) const { return matrix_ * x; }

 private:
  friend PsdOperator RankOne(const Vec& v);

  PsdOperator(Mat m, double trace, double opnorm, double min_eig)
      : matrix_(std::move(m)),
        trace_(trace),
        opnorm_(opnorm),
        min_eigenvalue_(min_eig) {}

  Mat matrix_;
  double trace_ = 0.0;
  double opnorm_ = 0.0;
  double min_eigenvalue_ = 0.0;
};

// x -> <x, v> v. Throws PreconditionError for the zero vector.
PsdOperator RankOne(const Vec& v);

// Orthogonal projection stored through an orthonormal basis of its range.
class Projection {
 public:
  // Zero projection on a dim-dimensional space.
  explicit Projection(int dim);
  // `basis` must have orthonormal columns; no re-orthonormalization happens.
  Projection(int dim, Mat basis);

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(basis_.cols()); }
  const Mat& basis() const { return basis_; }
  Mat Matrix() const;
  Vec Apply(const Vec& x) const;
  // Projection onto the orthogonal complement of the range.
  Projection Complement() const;

 private:
  int dim_;
  Mat basis_;
};

// Orthonormalizes `span_of` with two passes of Gram-Schmidt, dropping
// residuals below kRankDropTol * (max input norm), and returns the projection
// onto the span. All vectors must share `dim`; an empty list gives zero.
Projection ProjectOnto(int dim, std::span<const Vec> span_of);

// Orthogonal sum of ranges; the inputs must be mutually orthogonal.
Projection DirectSum(const Projection& a, const Projection& b);

// Gram matrix, G(i, j) = <x_i, x_j>.
Mat Gram(std::span<const Vec> vectors);

// Result of checking the projection sandwich
//   -C_M I <= T - P T P - P' T P' <= C_M I,  P' = I - P,
// with C_M = sqrt(||P T P|| * ||P' T P'||).
struct SandwichReport {
  double c_m = 0.0;
  double deviation_min = 0.0;  // smallest eigenvalue of the deviation operator
  double deviation_max = 0.0;  // largest eigenvalue
  bool holds = false;
};

SandwichReport SandwichBound(const PsdOperator& op, const Projection& p);

}  // namespace framex

#endif  // FRAMEX_LINALG_H_
