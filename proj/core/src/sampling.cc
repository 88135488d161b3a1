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

#include "framex/sampling.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <random>

#include "framex/errors.h"
#include "framex/parallel.h"

namespace framex {

__extension__ typedef unsigned __int128 u128;

DyadicDecomposition DyadicDecompose(double c, int depth) {
  if (!(c > 0.0) || !std::isfinite(c)) throw PreconditionError("dyadic target must be positive");
  if (depth < 1) throw PreconditionError("dyadic depth must be at least 1");
  DyadicDecomposition d;
  d.target = c;
  d.depth = depth;
  double rem = c;
  for (int j = 0; j < depth && rem > 0.0; ++j) {
    int e = 0;
    std::frexp(rem, &e);  // rem in [2^(e-1), 2^e)
    d.exponents.push_back(1 - e);
    rem -= std::ldexp(1.0, e - 1);  // exact: removes the leading bit
  }
  d.remainder = rem;
  return d;
}

double DyadicSum(std::span<const int> exponents) {
  if (exponents.empty()) return 0.0;
  auto [lo, hi] = std::minmax_element(exponents.begin(), exponents.end());
  if (*hi - *lo > 52) throw PreconditionError("dyadic exponents span more than 53 bits");
  std::vector<int> sorted(exponents.begin(), exponents.end());
  std::sort(sorted.begin(), sorted.end());
  double s = 0.0;
  for (int e : sorted) s += std::ldexp(1.0, -e);
  return s;
}

PaddingSet CeilingPad(const DyadicDecomposition& d) {
  PaddingSet p;
  if (d.exponents.empty()) return p;
  const int top = *std::max_element(d.exponents.begin(), d.exponents.end());
  const int bottom = *std::min_element(d.exponents.begin(), d.exponents.end());
  if (top <= 0) return p;  // every term is an integer
  if (top > 120 || top - bottom > 120) throw PreconditionError("dyadic exponents out of range");
  // Units of 2^-top.
  u128 sum = 0;
  for (int e : d.exponents) {
    if (top - e > 126) throw PreconditionError("dyadic exponents out of range");
    sum += u128{1} << (top - e);
  }
  const u128 one = u128{1} << top;
  const u128 gap = (one - sum % one) % one;
  for (int k = top - 1; k >= 0; --k) {
    if ((gap >> k) & 1) p.exponents.push_back(top - k);
  }
  return p;
}

int64_t IndexSets::total() const {
  int64_t t = 0;
  for (int64_t c : op_counts) t += c;
  for (int64_t c : pad_counts) t += c;
  return t;
}

namespace {

int64_t ReplicaCount(std::span<const int> exponents, int eta, int64_t budget) {
  int64_t count = 0;
  for (int e : exponents) {
    if (e > eta) throw PreconditionError("eta is smaller than an exponent");
    if (eta - e > 62) throw BudgetError("replica count exceeds 64-bit range");
    int64_t add = int64_t{1} << (eta - e);
    if (__builtin_add_overflow(count, add, &count) || count > budget) {
      throw BudgetError("replica budget exceeded");
    }
  }
  return count;
}

}  // namespace

IndexSets BuildIndexSets(std::span<const DyadicDecomposition> decomps,
                         std::span<const PaddingSet> pads, int eta, int beta, int64_t budget) {
  if (decomps.size() != pads.size()) throw PreconditionError("decomposition/padding size mismatch");
  if (eta < beta) throw PreconditionError("eta is smaller than beta");
  if (budget < 1 || budget > kReplicaBudget) throw PreconditionError("replica budget must lie in [1, 2^52]");
  IndexSets s;
  s.eta = eta;
  int64_t total = 0;
  for (size_t n = 0; n < decomps.size(); ++n) {
    s.op_counts.push_back(ReplicaCount(decomps[n].exponents, eta, budget));
    s.pad_counts.push_back(ReplicaCount(pads[n].exponents, eta, budget));
    if (__builtin_add_overflow(total, s.op_counts.back() + s.pad_counts.back(), &total) ||
        total > budget) {
      throw BudgetError("replica budget exceeded");
    }
  }
  return s;
}

std::vector<std::pair<Replica, Replica>> PairedPartition(std::span<const Replica> i1,
                                                         std::span<const Replica> i2,
                                                         uint64_t seed) {
  if ((i1.size() + i2.size()) % 2) throw PreconditionError("odd number of replicas");
  std::map<int, std::vector<Replica>> ones;
  std::map<int, std::deque<Replica>> twos;
  for (const Replica& r : i1) ones[r.n].push_back(r);
  for (const Replica& r : i2) twos[r.n].push_back(r);

  std::vector<std::pair<Replica, Replica>> pairs;
  std::vector<Replica> unmatched;
  for (auto& [n, list] : ones) {
    size_t j = 0;
    for (; j + 1 < list.size(); j += 2) pairs.emplace_back(list[j], list[j + 1]);
    if (j < list.size()) unmatched.push_back(list[j]);
  }
  for (const Replica& u : unmatched) {
    auto it = twos.find(u.n);
    if (it == twos.end() || it->second.empty()) {
      it = std::find_if(twos.begin(), twos.end(), [](const auto& kv) { return !kv.second.empty(); });
    }
    if (it == twos.end()) throw PreconditionError("too few padding replicas to pair");
    pairs.emplace_back(u, it->second.front());
    it->second.pop_front();
  }
  std::vector<Replica> rest;
  for (auto& [n, list] : twos) {
    while (list.size() >= 2) {
      Replica a = list.front();
      list.pop_front();
      pairs.emplace_back(a, list.front());
      list.pop_front();
    }
    if (!list.empty()) rest.push_back(list.front());
  }
  std::mt19937_64 rng(seed);
  std::shuffle(rest.begin(), rest.end(), rng);
  for (size_t j = 0; j + 1 < rest.size(); j += 2) pairs.emplace_back(rest[j], rest[j + 1]);
  return pairs;
}

Pairing SamePairing(int m, uint64_t seed) {
  return [m, seed](const std::vector<int64_t>& counts, int depth) {
    if (static_cast<int>(counts.size()) != 2 * m) throw PreconditionError("pairing kind count mismatch");
    std::vector<KindPair> pairs;
    std::vector<int64_t> rem(counts);
    for (int n = 0; n < m; ++n) {
      if (rem[n] / 2) pairs.push_back({n, n, rem[n] / 2});
      rem[n] %= 2;
    }
    for (int n = 0; n < m; ++n) {
      if (rem[n] && rem[m + n]) {
        pairs.push_back({n, m + n, 1});
        --rem[n];
        --rem[m + n];
      }
    }
    for (int n = 0; n < m; ++n) {
      if (!rem[n]) continue;
      for (int k = 0; k < m; ++k) {
        if (rem[m + k]) {
          pairs.push_back({n, m + k, 1});
          --rem[n];
          --rem[m + k];
          break;
        }
      }
    }
    std::vector<int> singles;
    for (int k = m; k < 2 * m; ++k) {
      if (rem[k] / 2) pairs.push_back({k, k, rem[k] / 2});
      rem[k] %= 2;
    }
    for (int k = 0; k < 2 * m; ++k) {
      if (rem[k]) singles.push_back(k);
    }
    std::mt19937_64 rng(seed + static_cast<uint64_t>(depth));
    std::shuffle(singles.begin(), singles.end(), rng);
    if (singles.size() % 2) singles.push_back(2 * m);
    for (size_t j = 0; j < singles.size(); j += 2) {
      pairs.push_back({singles[j], singles[j + 1], 1});
    }
    return pairs;
  };
}

namespace {

// Inputs are Hermitian by construction; symmetrize away rounding from long sums.
Mat Herm(const Mat& m) { return 0.5 * (m + m.adjoint()); }
double MaxEig(const Mat& m) { return Spectrum(Herm(m)).back(); }

Mat RangeProjector(const Mat& t) {
  Eigensystem es = Eigh(t);
  const double top = std::max(es.values.back(), 0.0);
  Mat p = Mat::Zero(t.rows(), t.cols());
  if (top <= 0.0) return p;
  for (size_t k = 0; k < es.values.size(); ++k) {
    if (es.values[k] > kRankDropTol * top) p += es.vectors.col(k) * es.vectors.col(k).adjoint();
  }
  return p;
}

void FillConditions(PaddingReport& r, const std::vector<PsdOperator>& ops,
                    std::span<const double> w, const Mat& truncated, double sum_cap) {
  const int d = static_cast<int>(truncated.rows());
  Mat sum = Mat::Zero(d, d);
  r.span_ok = true;
  r.trace_ok = true;
  for (size_t n = 0; n < ops.size(); ++n) {
    const Mat& phi = r.pads[n].matrix();
    sum += w[n] * phi;
    Mat outside = (Mat::Identity(d, d) - RangeProjector(ops[n].matrix())) * phi;
    if (outside.norm() > kNumTol * std::max(1.0, phi.norm())) r.span_ok = false;
    if (r.pads[n].trace() > r.cap * (1.0 + kNumTol)) r.trace_ok = false;
  }
  const double tol = kNumTol;
  r.sum_ok = MaxEig(sum) <= sum_cap + tol && MaxEig(truncated + sum) <= 1.0 + tol;
}

}  // namespace

PaddingReport MakePaddings(const std::vector<PsdOperator>& ops, std::span<const double> pad_weights,
                           const Mat& truncated, double epsilon, double gamma, int beta,
                           double sum_cap) {
  if (pad_weights.size() != ops.size()) throw PreconditionError("padding weight count mismatch");
  PaddingReport r;
  r.cap = std::ldexp(std::max(epsilon, gamma), 2 - beta);
  const int d = static_cast<int>(truncated.rows());
  std::vector<Mat> base;
  Mat sum = Mat::Zero(d, d);
  for (size_t n = 0; n < ops.size(); ++n) {
    Mat phi = Mat::Zero(d, d);
    if (pad_weights[n] > 0.0) {
      Mat p = RangeProjector(ops[n].matrix());
      double rank = p.trace().real();
      if (rank > 0.5) phi = (r.cap / std::round(rank)) * p;
    }
    sum += pad_weights[n] * phi;
    base.push_back(std::move(phi));
  }
  auto feasible = [&](double s) {
    Mat scaled = s * sum;
    return MaxEig(scaled) <= sum_cap && MaxEig(truncated + scaled) <= 1.0;
  };
  if (!feasible(1.0)) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      (feasible(mid) ? lo : hi) = mid;
    }
    r.scale = lo;
  }
  for (Mat& phi : base) r.pads.push_back(PsdOperator::FromMatrix(r.scale * phi));
  FillConditions(r, ops, pad_weights, truncated, sum_cap);
  return r;
}

PaddingReport CheckPaddings(const std::vector<PsdOperator>& ops, std::vector<PsdOperator> pads,
                            std::span<const double> pad_weights, const Mat& truncated,
                            double epsilon, double gamma, int beta, double sum_cap) {
  if (pads.size() != ops.size() || pad_weights.size() != ops.size()) {
    throw PreconditionError("padding count mismatch");
  }
  PaddingReport r;
  r.cap = std::ldexp(std::max(epsilon, gamma), 2 - beta);
  r.pads = std::move(pads);
  FillConditions(r, ops, pad_weights, truncated, sum_cap);
  return r;
}

SamplingFunction::SamplingFunction(std::vector<int64_t> multiplicity)
    : multiplicity_(std::move(multiplicity)) {
  offsets_.reserve(multiplicity_.size() + 1);
  offsets_.push_back(0);
  for (int64_t c : multiplicity_) {
    if (c < 0) throw PreconditionError("negative multiplicity");
    offsets_.push_back(offsets_.back() + c);
  }
  domain_size_ = offsets_.back();
}

int SamplingFunction::Image(int64_t k) const {
  if (k < 0 || k >= domain_size_) throw PreconditionError("sampling domain index out of range");
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), k);
  return static_cast<int>(it - offsets_.begin()) - 1;
}

bool MultiplicityWithin(std::span<const int64_t> multiplicity, std::span<const double> weights,
                        int beta) {
  if (multiplicity.size() != weights.size()) return false;
  for (size_t n = 0; n < multiplicity.size(); ++n) {
    if (multiplicity[n] >= (int64_t{1} << 53)) return false;
    if (std::ldexp(static_cast<double>(multiplicity[n]), -(beta + 1)) > weights[n]) return false;
  }
  return true;
}

namespace {

Mat Truncated(const std::vector<PsdOperator>& ops, const std::vector<DyadicDecomposition>& ds) {
  const int d = ops.front().dim();
  Mat s = Mat::Zero(d, d);
  for (size_t n = 0; n < ops.size(); ++n) {
    s += DyadicSum(ds[n].exponents) * ops[n].matrix();
  }
  return s;
}

// Binary expansion of c keeping only the terms 2^-e with e <= finest.
DyadicDecomposition DecomposeAtResolution(double c, int finest) {
  DyadicDecomposition d;
  d.target = c;
  d.depth = finest;
  d.remainder = c;
  if (!(c > 0.0)) return d;
  for (int e : DyadicDecompose(c, 64).exponents) {
    if (e > finest) break;
    d.exponents.push_back(e);
    d.remainder -= std::ldexp(1.0, -e);
  }
  return d;
}

}  // namespace

SampleResult Sample(const std::vector<PsdOperator>& ops, std::span<const double> weights,
                    const Projection& m, const SampleOptions& options) {
  if (ops.empty()) throw PreconditionError("no operators to sample");
  if (weights.size() != ops.size()) throw PreconditionError("weight count differs from operator count");
  const int d = ops.front().dim();
  if (m.dim() != d) throw PreconditionError("subspace dimension mismatch");
  if (!(options.epsilon > 0.0)) throw PreconditionError("epsilon must be positive");
  if (options.max_depth < 0 || options.max_depth > 60) throw PreconditionError("max_depth must lie in [0, 60]");
  const size_t count = ops.size();

  Mat t = Mat::Zero(d, d);
  double max_trace = 0.0;
  for (size_t n = 0; n < count; ++n) {
    if (ops[n].dim() != d) throw PreconditionError("operator dimension mismatch");
    if (!(weights[n] >= 0.0) || !std::isfinite(weights[n])) throw PreconditionError("weights must be nonnegative");
    t += weights[n] * ops[n].matrix();
    if (weights[n] > 0.0) max_trace = std::max(max_trace, ops[n].trace());
  }
  if (!(max_trace > 0.0)) throw PreconditionError("all weighted operators vanish");
  if (MaxEig(t) > options.sum_cap + kNumTol) throw PreconditionError("weighted sum exceeds the cap");
  const double delta = options.delta > 0.0 ? options.delta : max_trace;
  if (max_trace > delta * (1.0 + kNumTol)) throw PreconditionError("an operator trace exceeds delta");

  const Mat pm = m.Matrix();
  const Mat pperp = Mat::Identity(d, d) - pm;
  const double gamma = options.gamma_bound ? *options.gamma_bound : (pm * t * pm).trace().real();
  if (gamma > 1.0 + kNumTol) throw PreconditionError("gamma exceeds 1");
  const double eps = options.epsilon;
  const double c_const = options.c_constant >= 0.0 ? options.c_constant : UniversalConstantC();
  const BetaChoice beta = BetaFor(eps, c_const, delta);

  SampleResult out;
  SamplingCertificate& cert = out.certificate;
  cert.beta = beta.beta;
  cert.beta_zero_fallback = beta.zero_fallback;
  cert.epsilon = eps;
  cert.gamma = std::max(gamma, 0.0);
  cert.delta = delta;
  cert.c_constant = c_const;

  // Common resolution: the coarsest 2^-depth that keeps the leading bit of
  // every weight, whose tail is below eps/2 and whose compression to M stays
  // below gamma. Weights that are dyadic up to rounding cost no extra levels.
  const double tol = kNumTol * std::max(1.0, MaxEig(t));
  int coarsest = 0;
  for (double w : weights) {
    if (w > 0.0) coarsest = std::max(coarsest, DyadicDecompose(w, 1).exponents.front());
  }
  for (int depth = std::min(coarsest, options.max_depth); depth <= options.max_depth; ++depth) {
    std::vector<DyadicDecomposition> ds;
    for (size_t n = 0; n < count; ++n) ds.push_back(DecomposeAtResolution(weights[n], depth));
    Mat tail = t - Truncated(ops, ds);
    bool ok = OperatorNorm(tail) <= eps / 2 + tol && MaxEig(pm * tail * pm) <= cert.gamma + tol;
    if (ok || depth == options.max_depth) {
      out.decompositions = std::move(ds);
      cert.depth = depth;
      cert.tail_ok = ok;
      break;
    }
  }
  for (const auto& dd : out.decompositions) out.paddings.push_back(CeilingPad(dd));
  const Mat truncated = Truncated(ops, out.decompositions);

  std::vector<double> pad_weights;
  for (const auto& p : out.paddings) pad_weights.push_back(DyadicSum(p.exponents));
  PaddingReport pads =
      options.paddings
          ? CheckPaddings(ops, *options.paddings, pad_weights, truncated, eps, cert.gamma, cert.beta,
                          options.sum_cap)
          : MakePaddings(ops, pad_weights, truncated, eps, cert.gamma, cert.beta, options.sum_cap);
  if (!pads.sum_ok) throw PreconditionError("padding operators violate the sum condition");
  cert.pad_scale = pads.scale;

  int eta = cert.beta;
  for (size_t n = 0; n < count; ++n) {
    for (int e : out.decompositions[n].exponents) eta = std::max(eta, e);
    for (int e : out.paddings[n].exponents) eta = std::max(eta, e);
  }
  cert.eta = eta;
  cert.levels = eta - cert.beta;
  if (cert.levels > options.max_levels) throw BudgetError("selector depth exceeds max_levels");
  out.index_sets =
      BuildIndexSets(out.decompositions, out.paddings, eta, cert.beta, options.replica_budget);

  SelectorProblem problem;
  const double unit = std::ldexp(1.0, -eta);
  for (size_t n = 0; n < count; ++n) problem.kinds.push_back(unit * ops[n].matrix());
  for (size_t n = 0; n < count; ++n) problem.kinds.push_back(unit * pads.pads[n].matrix());
  problem.root_counts = out.index_sets.op_counts;
  problem.root_counts.insert(problem.root_counts.end(), out.index_sets.pad_counts.begin(),
                             out.index_sets.pad_counts.end());
  const Mat psi = truncated + [&] {
    Mat s = Mat::Zero(d, d);
    for (size_t n = 0; n < count; ++n) s += pad_weights[n] * pads.pads[n].matrix();
    return s;
  }();
  problem.target = psi;
  problem.order = cert.levels;
  problem.pairing = SamePairing(static_cast<int>(count), options.seed);
  SearchOutcome found = SearchSelectors(problem, options.search);

  double kind_delta = 0.0;
  for (size_t k = 0; k < problem.kinds.size(); ++k) {
    if (problem.root_counts[k] > 0) kind_delta = std::max(kind_delta, problem.kinds[k].trace().real());
  }
  cert.selector.delta = kind_delta;
  cert.selector.order = cert.levels;
  cert.selector.c = c_const;
  cert.selector.achieved = found.achieved;
  cert.selector.bound = c_const * std::sqrt(std::ldexp(kind_delta, cert.levels));
  cert.selector.satisfied =
      found.worst <= cert.selector.bound + kNumTol * std::max(1.0, cert.selector.bound);
  cert.selector.strategy = found.used;
  cert.selector.fell_back = found.fell_back;

  // Leaf choice: trace pigeonhole on M, then multiplicity, then the sandwich.
  const double psi_m = (pm * psi * pm).trace().real();
  const size_t leaves = found.tree.leaves.size();
  struct LeafScore {
    bool pigeon = false;
    bool mult = false;
    double lo = 0.0;
    double hi = 0.0;
  };
  std::vector<LeafScore> scores(leaves);
  const std::vector<Mat>& kinds = problem.kinds;
  ParallelFor(static_cast<int64_t>(leaves), [&](int64_t b) {
    const auto& leaf = found.tree.leaves[b];
    Mat phi = Mat::Zero(d, d);
    Mat picked = Mat::Zero(d, d);
    for (size_t k = 0; k < kinds.size(); ++k) {
      if (leaf[k]) phi += static_cast<double>(leaf[k]) * kinds[k];
    }
    phi *= std::ldexp(1.0, cert.levels);
    for (size_t n = 0; n < count; ++n) {
      if (leaf[n]) picked += static_cast<double>(leaf[n]) * ops[n].matrix();
    }
    Mat dev = std::ldexp(1.0, -cert.beta) * picked - t;
    LeafScore& s = scores[b];
    s.pigeon = (pm * phi * pm).trace().real() <= psi_m + kNumTol * std::max(1.0, psi_m);
    s.mult = MultiplicityWithin(std::span<const int64_t>(leaf.data(), count), weights, cert.beta);
    s.hi = MaxEig(dev - (eps / 2) * pperp);
    s.lo = Spectrum(Herm(dev + (eps / 2) * pperp)).front();
  });
  int64_t best = -1;
  auto better = [&](int64_t a, int64_t b) {
    const LeafScore &x = scores[a], &y = scores[b];
    if (x.pigeon != y.pigeon) return x.pigeon;
    if (x.mult != y.mult) return x.mult;
    return std::max(x.hi, -x.lo) < std::max(y.hi, -y.lo);
  };
  for (int64_t b = 0; b < static_cast<int64_t>(leaves); ++b) {
    if (best < 0 || better(b, best)) best = b;
  }
  const auto& leaf = found.tree.leaves[best];
  cert.chosen_leaf = best;
  cert.pigeonhole_ok = scores[best].pigeon;
  cert.mult_ok = scores[best].mult;
  cert.sandwich_lo = scores[best].lo;
  cert.sandwich_hi = scores[best].hi;
  cert.sandwich_allowance = 6.0 * std::sqrt(cert.gamma) + 1e-8;
  cert.sandwich_ok =
      cert.sandwich_hi <= cert.sandwich_allowance && cert.sandwich_lo >= -cert.sandwich_allowance;
  out.sigma = SamplingFunction(std::vector<int64_t>(leaf.begin(), leaf.begin() + count));
  out.leaf_pad_counts.assign(leaf.begin() + count, leaf.end());
  return out;
}

}  // namespace framex
