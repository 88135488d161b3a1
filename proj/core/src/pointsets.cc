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

#include "framex/pointsets.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "framex/errors.h"
#include "framex/parallel.h"

namespace framex {

PointSet::PointSet(int ambient_dim, std::vector<Point> points, double extent)
    : ambient_dim_(ambient_dim), points_(std::move(points)), extent_(extent) {
  if (ambient_dim_ < 1) throw PreconditionError("ambient dimension must be positive");
  if (!(extent_ > 0.0) || !std::isfinite(extent_)) throw PreconditionError("extent must be positive");
  for (const Point& p : points_) {
    if (p.size() != ambient_dim_) throw PreconditionError("point dimension mismatch");
    if (!p.allFinite()) throw PreconditionError("point has a non-finite coordinate");
    if (p.norm() > extent_ * (1.0 + 1e-12)) throw PreconditionError("point lies outside the extent");
  }
}

double BallVolume(int k, double r) {
  return std::pow(M_PI, k / 2.0) / std::tgamma(k / 2.0 + 1.0) * std::pow(r, k);
}

namespace {

DensityEstimate Estimate(int k, const std::vector<const Point*>& pts, double extent,
                         std::span<const double> radii, double step, int64_t max_centers) {
  if (radii.empty()) throw PreconditionError("no window radii given");
  for (double r : radii) {
    if (!(r > 0.0)) throw PreconditionError("window radius must be positive");
    if (r > extent / 2.0 * (1.0 + 1e-12)) throw PreconditionError("window radius exceeds extent / 2");
  }
  DensityEstimate est;
  est.radii.assign(radii.begin(), radii.end());
  for (double r : radii) {
    WindowCurvePoint w;
    w.radius = r;
    w.step = step > 0.0 ? step : r / 20.0;
    const double reach = extent - r;
    const int64_t half = static_cast<int64_t>(std::floor(reach / w.step * (1.0 + 1e-12)));
    const int64_t side = 2 * half + 1;
    double grid = 1.0;
    for (int i = 0; i < k; ++i) grid *= static_cast<double>(side);
    if (grid > static_cast<double>(max_centers)) throw BudgetError("too many window centers");
    const int64_t total = static_cast<int64_t>(grid);
    std::vector<int64_t> counts(total, -1);
    const double r2 = r * r * (1.0 + 1e-12);
    ParallelFor(total, [&](int64_t idx) {
      Point c(k);
      int64_t rest = idx;
      for (int i = 0; i < k; ++i) {
        c(i) = static_cast<double>(rest % side - half) * w.step;
        rest /= side;
      }
      if (c.norm() > reach * (1.0 + 1e-12)) return;
      int64_t n = 0;
      for (const Point* p : pts) {
        if ((*p - c).squaredNorm() <= r2) ++n;
      }
      counts[idx] = n;
    });
    w.min_count = std::numeric_limits<int64_t>::max();
    w.max_count = 0;
    for (int64_t n : counts) {
      if (n < 0) continue;
      ++w.centers;
      w.min_count = std::min(w.min_count, n);
      w.max_count = std::max(w.max_count, n);
    }
    if (w.centers == 0) w.min_count = 0;
    const double vol = BallVolume(k, r);
    w.lower = static_cast<double>(w.min_count) / vol;
    w.upper = static_cast<double>(w.max_count) / vol;
    est.per_window.push_back(w);
  }
  auto largest = std::max_element(est.per_window.begin(), est.per_window.end(),
                                  [](const auto& a, const auto& b) { return a.radius < b.radius; });
  est.lower = largest->lower;
  est.upper = largest->upper;
  return est;
}

}  // namespace

DensityEstimate Density(const PointSet& ps, std::span<const double> radii, double step,
                        int64_t max_centers) {
  std::vector<const Point*> pts;
  for (const Point& p : ps.points()) pts.push_back(&p);
  return Estimate(ps.ambient_dim(), pts, ps.extent(), radii, step, max_centers);
}

DensityEstimate UnionDensity(std::span<const PointSet> sets, std::span<const double> radii,
                             double step, int64_t max_centers) {
  if (sets.empty()) throw PreconditionError("no point sets given");
  const int k = sets.front().ambient_dim();
  double extent = sets.front().extent();
  std::vector<const Point*> pts;
  for (const PointSet& s : sets) {
    if (s.ambient_dim() != k) throw PreconditionError("point sets differ in ambient dimension");
    extent = std::min(extent, s.extent());
    for (const Point& p : s.points()) pts.push_back(&p);
  }
  return Estimate(k, pts, extent, radii, step, max_centers);
}

Separation UniformlyDiscrete(const PointSet& ps) {
  Separation s;
  s.delta = std::numeric_limits<double>::infinity();
  const auto& p = ps.points();
  for (size_t i = 0; i < p.size(); ++i) {
    for (size_t j = i + 1; j < p.size(); ++j) s.delta = std::min(s.delta, (p[i] - p[j]).norm());
  }
  s.uniformly_discrete = s.delta > 0.0;
  return s;
}

}  // namespace framex
