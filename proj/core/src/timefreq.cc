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

#include "framex/timefreq.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <tuple>

#include <unsupported/Eigen/FFT>

#include "framex/errors.h"
#include "framex/parallel.h"

namespace framex {

namespace {

int64_t Mod(int64_t x, int64_t l) {
  int64_t r = x % l;
  return r < 0 ? r + l : r;
}

// exp(2 pi i k / L) for k in [0, L).
Scalar Root(int64_t k, int64_t l) { return std::polar(1.0, 2.0 * M_PI * static_cast<double>(k) / l); }

}  // namespace

CyclicSignal::CyclicSignal(Vec samples) : samples_(std::move(samples)) {
  if (samples_.size() < 1) throw PreconditionError("signal length must be positive");
}

CyclicSignal CyclicSignal::Delta(int length, int at) {
  if (length < 1) throw PreconditionError("signal length must be positive");
  Vec v = Vec::Zero(length);
  v(Mod(at, length)) = 1.0;
  return CyclicSignal(std::move(v));
}

CyclicSignal CyclicSignal::Constant(int length, Scalar value) {
  if (length < 1) throw PreconditionError("signal length must be positive");
  return CyclicSignal(Vec::Constant(length, value));
}

CyclicSignal CyclicSignal::Gaussian(int length, double sigma) {
  if (length < 1) throw PreconditionError("signal length must be positive");
  if (sigma <= 0.0) sigma = std::sqrt(static_cast<double>(length));
  Vec v(length);
  const double center = length / 2.0;
  for (int t = 0; t < length; ++t) {
    const double u = (t - center) / sigma;
    v(t) = std::exp(-M_PI * u * u);
  }
  return CyclicSignal(v / v.norm());
}

CyclicSignal Translate(const CyclicSignal& f, int64_t a) {
  const int l = f.length();
  Vec out(l);
  for (int t = 0; t < l; ++t) out(t) = f[static_cast<int>(Mod(t - a, l))];
  return CyclicSignal(std::move(out));
}

CyclicSignal Modulate(const CyclicSignal& f, int64_t b) {
  const int l = f.length();
  const int64_t bb = Mod(b, l);
  Vec out(l);
  for (int t = 0; t < l; ++t) out(t) = Root(Mod(bb * t, l), l) * f[t];
  return CyclicSignal(std::move(out));
}

Scalar CommutationPhase(int length, int64_t a, int64_t b) {
  if (length < 1) throw PreconditionError("signal length must be positive");
  return Root(Mod(Mod(a, length) * Mod(b, length), length), length);
}

std::vector<Shift> Lattice(int length, int a_step, int b_step) {
  if (length < 1 || a_step < 1 || b_step < 1) throw PreconditionError("lattice steps must be positive");
  std::vector<Shift> out;
  for (int a = 0; a < length; a += a_step) {
    for (int b = 0; b < length; b += b_step) out.emplace_back(a, b);
  }
  return out;
}

namespace {

Vec ShiftedWindow(const CyclicSignal& g, Shift s) {
  return Modulate(Translate(g, s.first), s.second).samples();
}

// The shifted window times the unimodular factor that brings it closest to
// reference.
Vec AlignedWindow(const CyclicSignal& g, Shift s, const Vec& reference) {
  Vec v = ShiftedWindow(g, s);
  const Scalar z = reference.dot(v);
  if (std::abs(z) > 0.0) v *= std::conj(z) / std::abs(z);
  return v;
}

}  // namespace

VectorFamily GaborFamily(const GaborSpec& spec) {
  if (spec.window.norm() == 0.0) throw PreconditionError("window is zero");
  const int l = spec.window.length();
  std::vector<Vec> vs;
  std::vector<std::string> labels;
  vs.reserve(spec.shifts.size());
  for (Shift s : spec.shifts) {
    Shift r{Mod(s.first, l), Mod(s.second, l)};
    vs.push_back(ShiftedWindow(spec.window, r));
    labels.push_back(std::to_string(r.first) + "," + std::to_string(r.second));
  }
  return VectorFamily(l, Field::kComplex, std::move(vs), std::nullopt, std::move(labels));
}

Mat Stft(const CyclicSignal& f, const CyclicSignal& window) {
  if (window.norm() == 0.0) throw PreconditionError("window is zero");
  const int l = f.length();
  if (window.length() != l) throw PreconditionError("signal and window lengths differ");
  Mat v(l, l);
  ParallelFor(l, [&](int64_t x) {
    Eigen::FFT<double> fft;
    std::vector<Scalar> h(l), spectrum;
    for (int t = 0; t < l; ++t) h[t] = f[t] * std::conj(window[static_cast<int>(Mod(t - x, l))]);
    fft.fwd(spectrum, h);
    for (int w = 0; w < l; ++w) v(x, w) = spectrum[w];
  });
  return v;
}

double MpProxy(const CyclicSignal& f, const CyclicSignal& window, double p) {
  if (!(p >= 1.0 && p <= 2.0)) throw PreconditionError("p must lie in [1, 2]");
  Mat v = Stft(f, window);
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::pow(std::abs(v.data()[i]), p);
  return std::pow(s / f.length(), 1.0 / p);
}

VectorFamily ExponentialFamily(const ExponentialSpec& spec) {
  if (spec.length < 1) throw PreconditionError("signal length must be positive");
  if (spec.mask.empty()) throw PreconditionError("domain mask is empty");
  std::vector<int> sorted = spec.mask;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.front() < 0 ||
      sorted.back() >= spec.length) {
    throw PreconditionError("mask entries must be distinct and within 0..L-1");
  }
  const int dim = static_cast<int>(spec.mask.size());
  std::vector<Vec> vs;
  for (double lambda : spec.frequencies) {
    Vec v(dim);
    for (int j = 0; j < dim; ++j) {
      const double turns = std::fmod(lambda * spec.mask[j], static_cast<double>(spec.length));
      v(j) = std::polar(1.0, 2.0 * M_PI * turns / spec.length);
    }
    vs.push_back(std::move(v));
  }
  return VectorFamily(dim, Field::kComplex, std::move(vs));
}

const char* ToString(BudgetProfile p) { return p == BudgetProfile::kStrict ? "strict" : "uniform"; }

BudgetProfile ParseBudgetProfile(const std::string& name) {
  if (name == "strict") return BudgetProfile::kStrict;
  if (name == "uniform") return BudgetProfile::kUniform;
  throw PreconditionError("unknown budget profile: " + name);
}

PointSet ShiftPoints(int length, const std::vector<Shift>& shifts) {
  std::vector<Point> pts;
  const int64_t half = length / 2;
  for (Shift s : shifts) {
    Point p(2);
    p(0) = static_cast<double>(Mod(s.first + half, length) - half);
    p(1) = static_cast<double>(Mod(s.second + half, length) - half);
    pts.push_back(std::move(p));
  }
  return PointSet(2, std::move(pts), length / std::sqrt(2.0) + 1.0);
}

ClusterResult ClusteredGabor(const GaborSpec& base, const std::vector<int>& k,
                             const ClusterOptions& options) {
  const int l = base.window.length();
  VectorFamily g = GaborFamily(base);
  ClusterResult out;
  ClusterReport& rep = out.report;
  rep.base_report = FrameBounds(g, false);
  if (!rep.base_report.is_frame) throw PreconditionError("base Gabor system is not a frame");
  const size_t count = g.size();
  const size_t j_count = k.size();
  if (j_count > count) throw PreconditionError("more cluster sizes than base elements");
  for (int kn : k) {
    if (kn < 1) throw PreconditionError("cluster sizes must be positive");
  }
  VectorFamily duals = CanonicalDual(g);
  for (const Vec& d : duals.vectors()) rep.dual_sup_norm = std::max(rep.dual_sup_norm, d.norm());

  if (options.budgets) {
    if (options.budgets->size() < j_count) throw PreconditionError("fewer budgets than cluster sizes");
    rep.budgets.assign(options.budgets->begin(), options.budgets->begin() + j_count);
  } else {
    for (size_t n = 0; n < j_count; ++n) {
      rep.budgets.push_back(options.profile == BudgetProfile::kStrict
                                ? 1.0 / (std::ldexp(1.0, 2 * static_cast<int>(n + 1)) * rep.dual_sup_norm)
                                : 1.0 / (2.0 * j_count * rep.dual_sup_norm));
    }
  }

  std::vector<Shift> base_shifts;
  for (Shift s : base.shifts) base_shifts.emplace_back(Mod(s.first, l), Mod(s.second, l));
  std::multiset<Shift> base_points(base_shifts.begin(), base_shifts.end());
  std::set<Shift> used;

  rep.k.assign(count, 1);
  for (size_t n = 0; n < count; ++n) {
    const Shift center = base_shifts[n];
    std::vector<ClusterPoint> cluster;
    if (n >= j_count) {
      cluster.push_back({center, 0.0, 0.0});
    } else {
      rep.k[n] = k[n];
      // Offsets strictly inside parameter distance 1/(n+1), nearest first,
      // then by angle.
      const double reach2 = static_cast<double>(l) / ((n + 1.0) * (n + 1.0));
      const int64_t span = static_cast<int64_t>(std::ceil(std::sqrt(reach2)));
      std::vector<std::tuple<int64_t, double, int64_t, int64_t>> offsets;
      for (int64_t da = -span; da <= span; ++da) {
        for (int64_t db = -span; db <= span; ++db) {
          const int64_t r2 = da * da + db * db;
          if (static_cast<double>(r2) >= reach2 || 2 * std::abs(da) >= l || 2 * std::abs(db) >= l) continue;
          double angle = std::atan2(static_cast<double>(db), static_cast<double>(da));
          if (angle < 0) angle += 2.0 * M_PI;
          offsets.emplace_back(r2, angle, da, db);
        }
      }
      std::sort(offsets.begin(), offsets.end());
      for (const auto& [r2, angle, da, db] : offsets) {
        if (static_cast<int>(cluster.size()) == k[n]) break;
        Shift s{Mod(center.first + da, l), Mod(center.second + db, l)};
        if (used.count(s)) continue;
        if (s != center && base_points.count(s)) continue;
        const double dist = (AlignedWindow(base.window, s, g[n]) - g[n]).norm();
        if (!(dist < rep.budgets[n])) continue;
        cluster.push_back({s, std::sqrt(static_cast<double>(r2) / l), dist});
      }
      if (static_cast<int>(cluster.size()) < k[n]) {
        throw PreconditionError("cyclic grid too coarse for cluster " + std::to_string(n) +
                                ": found " + std::to_string(cluster.size()) + " of " +
                                std::to_string(k[n]) + " admissible points");
      }
    }
    for (const ClusterPoint& p : cluster) used.insert(p.shift);
    rep.clusters.push_back(std::move(cluster));
  }

  Mat s = Mat::Zero(l, l);
  std::vector<Vec> vs;
  for (size_t n = 0; n < count; ++n) {
    const double weight = 1.0 / rep.k[n];
    for (const ClusterPoint& p : rep.clusters[n]) {
      Vec v = AlignedWindow(base.window, p.shift, g[n]);
      s += weight * v * duals[n].adjoint();
      vs.push_back(std::move(v));
      out.shifts.push_back(p.shift);
      out.owner.push_back(static_cast<int>(n));
    }
  }
  out.family = VectorFamily(l, Field::kComplex, std::move(vs));
  rep.deviation = OperatorNorm(s - Mat::Identity(l, l));
  rep.deviation_ok = rep.deviation < 1.0;

  Eigen::FullPivLU<Mat> lu(s);
  if (lu.isInvertible()) {
    Mat adj_inv = lu.inverse().adjoint();
    std::vector<Vec> fs;
    for (int n : out.owner) {
      fs.push_back(adj_inv * duals[n] / static_cast<double>(rep.k[n]));
      rep.functional_norms.push_back(fs.back().norm());
    }
    out.functionals = VectorFamily(l, Field::kComplex, std::move(fs));
    rep.functionals_nonzero = std::all_of(rep.functional_norms.begin(), rep.functional_norms.end(),
                                          [](double x) { return x > 1e-12; });
  }

  const double radius[] = {options.density_radius};
  rep.base_upper_density = Density(ShiftPoints(l, base_shifts), radius, options.density_step).upper;
  rep.output_upper_density = Density(ShiftPoints(l, out.shifts), radius, options.density_step).upper;
  rep.density_increased = rep.output_upper_density > rep.base_upper_density;
  return out;
}

}  // namespace framex
