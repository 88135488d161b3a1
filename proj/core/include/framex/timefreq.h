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

#ifndef FRAMEX_TIMEFREQ_H_
#define FRAMEX_TIMEFREQ_H_

// Time-frequency analysis on the cyclic group Z_L: translations, modulations,
// Gabor and exponential systems, the short-time Fourier transform, and a
// clustered Gabor construction whose shift set has unbounded density.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "framex/frames.h"
#include "framex/linalg.h"
#include "framex/pointsets.h"

namespace framex {

class CyclicSignal {
 public:
  explicit CyclicSignal(Vec samples);

  static CyclicSignal Delta(int length, int at);
  static CyclicSignal Constant(int length, Scalar value);
  // Unit-norm samples of exp(-pi (t - L/2)^2 / sigma^2); sigma <= 0 means sqrt(L).
  static CyclicSignal Gaussian(int length, double sigma = 0.0);

  int length() const { return static_cast<int>(samples_.size()); }
  const Vec& samples() const { return samples_; }
  Scalar operator[](int t) const { return samples_(t); }
  double norm() const { return samples_.norm(); }

 private:
  Vec samples_;
};

// (T_a f)(t) = f(t - a mod L).
CyclicSignal Translate(const CyclicSignal& f, int64_t a);
// (M_b f)(t) = exp(2 pi i b t / L) f(t).
CyclicSignal Modulate(const CyclicSignal& f, int64_t b);
// exp(2 pi i ab / L), with ab reduced mod L in integer arithmetic, so that
// M_b T_a = phase * T_a M_b.
Scalar CommutationPhase(int length, int64_t a, int64_t b);

using Shift = std::pair<int64_t, int64_t>;  // (a, b)

struct GaborSpec {
  CyclicSignal window;
  std::vector<Shift> shifts;
};

// All (a, b) with a in a_step Z_L and b in b_step Z_L, a-major.
std::vector<Shift> Lattice(int length, int a_step, int b_step);

// One vector M_b T_a g per shift, in order, with shifts reduced mod L.
VectorFamily GaborFamily(const GaborSpec& spec);

// V(x, w) = <f, M_w T_x window>, rows indexed by x.
Mat Stft(const CyclicSignal& f, const CyclicSignal& window);

// (sum |V|^p / L)^(1/p): a discrete stand-in for a modulation-space norm,
// with no claim about continuum membership.
double MpProxy(const CyclicSignal& f, const CyclicSignal& window, double p);

struct ExponentialSpec {
  int length = 0;
  std::vector<int> mask;  // discretized domain S, a subset of 0..L-1
  std::vector<double> frequencies;
};

// t -> exp(2 pi i lambda t / L) restricted to the mask; dimension |mask|.
VectorFamily ExponentialFamily(const ExponentialSpec& spec);

enum class BudgetProfile { kStrict, kUniform };

const char* ToString(BudgetProfile p);
BudgetProfile ParseBudgetProfile(const std::string& name);

struct ClusterOptions {
  BudgetProfile profile = BudgetProfile::kStrict;
  // Explicit per-element vector distance caps; overrides the profile.
  std::optional<std::vector<double>> budgets;
  double density_radius = 2.0;
  double density_step = 0.5;
};

struct ClusterPoint {
  Shift shift;
  double parameter_distance = 0.0;  // Euclidean offset on the grid / sqrt(L)
  double vector_distance = 0.0;     // ||M T g - M_n T_n g||
};

struct ClusterReport {
  FrameReport base_report;
  double dual_sup_norm = 0.0;
  std::vector<int> k;
  std::vector<double> budgets;
  std::vector<std::vector<ClusterPoint>> clusters;  // one per base element
  double deviation = 0.0;  // ||S - I||
  bool deviation_ok = false;
  std::vector<double> functional_norms;
  bool functionals_nonzero = false;
  double base_upper_density = 0.0;
  double output_upper_density = 0.0;
  bool density_increased = false;
};

struct ClusterResult {
  VectorFamily family{1, Field::kComplex, {}};
  std::vector<Shift> shifts;
  std::vector<int> owner;  // base element of each output vector
  VectorFamily functionals{1, Field::kComplex, {}};
  ClusterReport report;
};

// Replaces base element n (for n < k.size()) by k[n] distinct nearby
// time-frequency shifts (each times the unimodular factor aligning it with
// element n), weights each by 1/k[n] against the canonical dual,
// and checks ||S - I|| < 1 for S x = sum <x, phi*_n / k_n> g_{n,i}.
ClusterResult ClusteredGabor(const GaborSpec& base, const std::vector<int>& k,
                             const ClusterOptions& options = {});

// Shift parameters as points of R^2 with coordinates centered on 0.
PointSet ShiftPoints(int length, const std::vector<Shift>& shifts);

}  // namespace framex

#endif  // FRAMEX_TIMEFREQ_H_
