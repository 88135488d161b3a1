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


#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "framex/extraction.h"
#include "framex/frames.h"
#include "framex/pointsets.h"
#include "framex/selectors.h"
#include "framex/timefreq.h"

namespace framex {
namespace {

VectorFamily Random(int dim, int count, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Vec> vs;
  for (int n = 0; n < count; ++n) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = Scalar(g(rng), g(rng));
    vs.push_back(v);
  }
  return VectorFamily(dim, Field::kComplex, std::move(vs));
}

void BM_FrameBounds(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  VectorFamily f = Random(d, 4 * d, 1);
  for (auto _ : state) benchmark::DoNotOptimize(FrameBounds(f, false));
}
BENCHMARK(BM_FrameBounds)->Arg(4)->Arg(16)->Arg(64);

void BM_CanonicalDual(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  VectorFamily f = Random(d, 4 * d, 2);
  for (auto _ : state) benchmark::DoNotOptimize(CanonicalDual(f));
}
BENCHMARK(BM_CanonicalDual)->Arg(4)->Arg(16)->Arg(64);

void BM_BestSelector(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  VectorFamily f = Random(4, m, 3);
  std::vector<PsdOperator> ops;
  Mat sum = Mat::Zero(4, 4);
  for (const Vec& v : f.vectors()) {
    ops.push_back(RankOne(v * (0.3 / v.norm())));
    sum += ops.back().matrix();
  }
  PsdOperator target = PsdOperator::FromMatrix(sum);
  BestSelectorOptions o;
  o.search.strategy = static_cast<Strategy>(state.range(1));
  o.search.restarts = 64;
  for (auto _ : state) benchmark::DoNotOptimize(BestSelector(ops, target, 2, o));
}
BENCHMARK(BM_BestSelector)
    ->Args({8, static_cast<int>(Strategy::kExhaustive)})
    ->Args({8, static_cast<int>(Strategy::kGreedy)})
    ->Args({12, static_cast<int>(Strategy::kGreedy)})
    ->Args({12, static_cast<int>(Strategy::kRandomized)});

void BM_Extract(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  VectorFamily f = Random(d, 3 * d, 4);
  for (auto _ : state) benchmark::DoNotOptimize(Extract(f));
}
BENCHMARK(BM_Extract)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Density(benchmark::State& state) {
  std::vector<Point> pts;
  for (int i = -200; i <= 200; ++i) pts.push_back(Point::Constant(1, i));
  PointSet ps(1, pts, 200);
  const double radii[] = {10.0, 25.0, 50.0};
  for (auto _ : state) benchmark::DoNotOptimize(Density(ps, radii));
}
BENCHMARK(BM_Density);

void BM_Stft(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  CyclicSignal f(Random(l, 1, 5)[0]);
  CyclicSignal g = CyclicSignal::Gaussian(l);
  for (auto _ : state) benchmark::DoNotOptimize(Stft(f, g));
}
BENCHMARK(BM_Stft)->Arg(64)->Arg(256);

void BM_ClusteredGabor(benchmark::State& state) {
  GaborSpec base{CyclicSignal::Gaussian(64), Lattice(64, 4, 4)};
  ClusterOptions o;
  o.profile = BudgetProfile::kUniform;
  for (auto _ : state) benchmark::DoNotOptimize(ClusteredGabor(base, {1, 2, 4, 8}, o));
}
BENCHMARK(BM_ClusteredGabor)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace framex

BENCHMARK_MAIN();
