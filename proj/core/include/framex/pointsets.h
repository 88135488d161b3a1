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

#ifndef FRAMEX_POINTSETS_H_
#define FRAMEX_POINTSETS_H_

// Window-count density estimates for finite point sets in R^k.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace framex {

using Point = Eigen::VectorXd;

class PointSet {
 public:
  // Every point must lie in the closed ball of radius `extent` about 0.
  PointSet(int ambient_dim, std::vector<Point> points, double extent);

  int ambient_dim() const { return ambient_dim_; }
  const std::vector<Point>& points() const { return points_; }
  double extent() const { return extent_; }
  size_t size() const { return points_.size(); }

 private:
  int ambient_dim_;
  std::vector<Point> points_;
  double extent_;
};

// Volume of the Euclidean ball of radius r in R^k.
double BallVolume(int k, double r);

struct WindowCurvePoint {
  double radius = 0.0;
  double step = 0.0;
  int64_t centers = 0;
  int64_t min_count = 0;
  int64_t max_count = 0;
  double lower = 0.0;  // min_count / volume
  double upper = 0.0;  // max_count / volume
};

struct DensityEstimate {
  double lower = 0.0;  // at the largest radius
  double upper = 0.0;
  std::vector<double> radii;
  std::vector<WindowCurvePoint> per_window;
};

// Closed-ball counts over window centers on the grid step * Z^k inside the
// ball of radius extent - r. step <= 0 selects r / 20 for each radius.
// Radii must be positive and at most extent / 2.
DensityEstimate Density(const PointSet& ps, std::span<const double> radii, double step = 0.0,
                        int64_t max_centers = 4'000'000);

// Density of the union counted with multiplicity; the faithful region is the
// smallest extent among the sets.
DensityEstimate UnionDensity(std::span<const PointSet> sets, std::span<const double> radii,
                             double step = 0.0, int64_t max_centers = 4'000'000);

struct Separation {
  bool uniformly_discrete = true;
  double delta = 0.0;  // min pairwise distance; +infinity below two points
};

Separation UniformlyDiscrete(const PointSet& ps);

}  // namespace framex

#endif  // FRAMEX_POINTSETS_H_
