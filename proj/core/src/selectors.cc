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

#include "framex/selectors.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "framex/errors.h"
#include "framex/parallel.h"

namespace framex {

std::vector<double> GrowthSequence(double delta, int count) {
  std::vector<double> b;
  b.reserve(std::max(count, 0));
  double cur = 1.0;
  for (int j = 0; j < count; ++j) {
    b.push_back(cur);
    cur = cur + 4.0 * std::sqrt(std::ldexp(delta, j) * cur) + std::ldexp(delta, j + 1);
  }
  return b;
}

double ConstantC(double delta, int n_max) {
  if (!(delta > 0.0)) throw PreconditionError("delta must be positive");
  if (n_max < 1) throw PreconditionError("n_max must be at least 1");
  if (std::ldexp(delta, n_max) >= 1.0) throw PreconditionError("2^n_max * delta must be below 1");
  std::vector<double> b = GrowthSequence(delta, n_max);
  double c = 0.0;
  double partial = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    partial += b[n - 1] - 1.0;
    c = std::max(c, partial / std::sqrt(std::ldexp(delta, n)));
  }
  return c;
}

int MaxOrder(double delta) {
  if (!(delta > 0.0)) throw PreconditionError("delta must be positive");
  int n = 0;
  while (n < 1100 && std::ldexp(delta, n + 1) < 1.0) ++n;
  return n;
}

double UniversalConstantC() {
  static const double value = [] {
    double best = 0.0;
    for (int i = 0; i <= 62 * 64; ++i) {
      double delta = std::exp2(-(2.0 + i / 64.0));
      int n = MaxOrder(delta);
      if (n >= 1) best = std::max(best, ConstantC(delta, n));
    }
    return best;
  }();
  return value;
}

BetaChoice BetaFor(double epsilon, double c, double delta) {
  if (!(epsilon > 0.0) || !(c > 0.0) || !(delta > 0.0)) {
    throw PreconditionError("epsilon, C and delta must be positive");
  }
  BetaChoice out;
  out.ratio = epsilon * epsilon / (4.0 * c * c * delta);
  if (!(out.ratio <= 2.0)) throw PreconditionError("no admissible beta: ratio exceeds 2");
  int beta = 0;
  while (!(std::ldexp(out.ratio, beta) > 1.0)) {
    if (++beta > 4000) throw PreconditionError("no admissible beta: ratio underflows");
  }
  out.beta = beta;
  out.zero_fallback = beta == 0;
  return out;
}

void CheckPairPartition(const PairPartition& p) {
  std::vector<int> covered;
  int pads = 0;
  for (auto [a, b] : p.pairs) {
    if (a == -1 && b == -1) throw PreconditionError("pair of two pads");
    for (int x : {a, b}) {
      if (x == -1) ++pads; else covered.push_back(x);
    }
  }
  std::vector<int> want = p.index_set;
  std::sort(want.begin(), want.end());
  std::sort(covered.begin(), covered.end());
  if (covered != want) throw PreconditionError("pairs do not cover the index set exactly");
  if (pads > 1 || (pads == 1) != (want.size() % 2 == 1)) {
    throw PreconditionError("pad used on an even index set or more than once");
  }
}

void EnumerateSelectors(const PairPartition& p,
                        const std::function<void(const std::vector<int>&,
                                                 const std::vector<int>&)>& visit) {
  CheckPairPartition(p);
  const size_t k = p.pairs.size();
  if (k > 40) throw BudgetError("too many pairs to enumerate");
  std::vector<int> left, right;
  for (uint64_t mask = 0; mask < (uint64_t{1} << k); ++mask) {
    left.clear();
    right.clear();
    for (size_t i = 0; i < k; ++i) {
      auto [a, b] = p.pairs[i];
      if ((mask >> i) & 1) std::swap(a, b);
      if (a != -1) left.push_back(a);
      if (b != -1) right.push_back(b);
    }
    visit(left, right);
  }
}

std::vector<std::pair<std::vector<int>, std::vector<int>>> EnumerateSelectors(
    const PairPartition& p) {
  std::vector<std::pair<std::vector<int>, std::vector<int>>> out;
  EnumerateSelectors(p, [&](const std::vector<int>& a, const std::vector<int>& b) {
    out.emplace_back(a, b);
  });
  return out;
}

std::vector<int> SelectorTree::LeafMembers(int64_t b) const {
  std::vector<int> out;
  const auto& leaf = leaves.at(b);
  for (int k = 0; k < num_kinds; ++k) {
    for (int64_t i = 0; i < leaf[k]; ++i) out.push_back(k);
  }
  return out;
}

Pairing DescendingTracePairing(std::vector<double> traces) {
  return [traces = std::move(traces)](const std::vector<int64_t>& counts, int) {
    const int pad = static_cast<int>(counts.size());
    std::vector<KindPair> pairs;
    std::vector<int> singles;
    for (int k = 0; k < pad; ++k) {
      if (counts[k] / 2 > 0) pairs.push_back({k, k, counts[k] / 2});
      if (counts[k] % 2) singles.push_back(k);
    }
    std::stable_sort(singles.begin(), singles.end(),
                     [&](int a, int b) { return traces[a] > traces[b]; });
    if (singles.size() % 2) singles.push_back(pad);
    for (size_t i = 0; i < singles.size(); i += 2) pairs.push_back({singles[i], singles[i + 1], 1});
    return pairs;
  };
}

namespace {

void CheckPairsCover(const std::vector<int64_t>& counts, const std::vector<KindPair>& pairs,
                     int num_kinds) {
  std::vector<int64_t> tally(num_kinds + 1, 0);
  for (const KindPair& p : pairs) {
    if (p.first < 0 || p.first > num_kinds || p.second < 0 || p.second > num_kinds ||
        p.count < 0) {
      throw PreconditionError("pair references an unknown kind");
    }
    tally[p.first] += p.count;
    tally[p.second] += p.count;
  }
  int64_t total = 0;
  for (int k = 0; k < num_kinds; ++k) {
    if (tally[k] != counts[k]) throw PreconditionError("pairs do not cover the cell");
    total += counts[k];
  }
  if (tally[num_kinds] != total % 2) throw PreconditionError("pad count does not match parity");
}

}  // namespace

std::pair<std::vector<int64_t>, std::vector<int64_t>> ApplySplit(const CellSplit& split,
                                                                  int num_kinds) {
  if (split.first_to_left.size() != split.pairs.size()) {
    throw PreconditionError("split has no side for some pair");
  }
  CheckPairsCover(split.counts, split.pairs, num_kinds);
  std::vector<int64_t> left(num_kinds + 1, 0), right(num_kinds + 1, 0);
  for (size_t i = 0; i < split.pairs.size(); ++i) {
    const KindPair& p = split.pairs[i];
    int64_t k = split.first_to_left[i];
    if (p.first == p.second) {
      if (k != p.count) throw PreconditionError("balanced pair must send one of each to each side");
      left[p.first] += p.count;
      right[p.first] += p.count;
    } else {
      if (k < 0 || k > p.count) throw PreconditionError("side count out of range");
      left[p.first] += k;
      left[p.second] += p.count - k;
      right[p.first] += p.count - k;
      right[p.second] += k;
    }
  }
  left.pop_back();
  right.pop_back();
  return {std::move(left), std::move(right)};
}

const char* ToString(Strategy s) {
  switch (s) {
    case Strategy::kExhaustive: return "exhaustive";
    case Strategy::kGreedy: return "greedy";
    case Strategy::kRandomized: return "randomized";
  }
  return "unknown";
}

Strategy ParseStrategy(const std::string& name) {
  if (name == "exhaustive") return Strategy::kExhaustive;
  if (name == "greedy") return Strategy::kGreedy;
  if (name == "randomized") return Strategy::kRandomized;
  throw PreconditionError("unknown strategy: " + name);
}

namespace {

double HermitianNorm(const Mat& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

double Deviation(std::span<const Mat> kinds, const std::vector<int64_t>& counts,
                 const Mat& target, int scale_exp) {
  Mat s = Mat::Zero(target.rows(), target.cols());
  for (size_t k = 0; k < kinds.size(); ++k) {
    if (counts[k] != 0) s += static_cast<double>(counts[k]) * kinds[k];
  }
  s *= std::ldexp(1.0, scale_exp);
  s -= target;
  return HermitianNorm(s);
}

struct BudgetExceeded {};

class Engine {
 public:
  explicit Engine(const SelectorProblem& p)
      : kinds_(p.kinds),
        target_(p.target),
        order_(p.order),
        num_kinds_(static_cast<int>(p.kinds.size())),
        pairing_(p.pairing) {
    for (const Mat& k : kinds_) traces_.push_back(k.trace().real());
    traces_.push_back(0.0);
    if (!pairing_) pairing_ = DescendingTracePairing(traces_);
  }

  int64_t evaluations() const { return evaluations_; }

  double Dev(const std::vector<int64_t>& counts, int depth) {
    ++evaluations_;
    return Deviation(kinds_, counts, target_, depth);
  }

  std::vector<KindPair> PairsFor(const std::vector<int64_t>& counts, int depth) const {
    std::vector<KindPair> pairs = pairing_(counts, depth);
    CheckPairsCover(counts, pairs, num_kinds_);
    return pairs;
  }

  // Exhaustive optimum below (counts, depth).
  double Opt(const std::vector<int64_t>& counts, int depth, int64_t budget) {
    auto key = std::make_pair(depth, counts);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second.value;
    Memo entry;
    if (depth == order_) {
      double v = Dev(counts, order_);
      entry.value = v;
      memo_.emplace(std::move(key), std::move(entry));
      return v;
    }
    entry.pairs = PairsFor(counts, depth);
    std::vector<size_t> cross;
    std::vector<int64_t> ks(entry.pairs.size());
    for (size_t i = 0; i < entry.pairs.size(); ++i) {
      const KindPair& p = entry.pairs[i];
      if (p.first == p.second) ks[i] = p.count; else cross.push_back(i);
    }
    auto hi = [&](size_t c) {
      int64_t m = entry.pairs[cross[c]].count;
      return c == 0 ? m / 2 : m;  // mirrored splits give the same value
    };
    for (size_t i : cross) ks[i] = 0;
    entry.value = std::numeric_limits<double>::infinity();
    CellSplit split{counts, entry.pairs, ks};
    while (true) {
      if (++splits_ > budget) throw BudgetExceeded{};
      split.first_to_left = ks;
      auto [left, right] = ApplySplit(split, num_kinds_);
      double v = Opt(left, depth + 1, budget);
      if (v < entry.value) {
        v = std::max(v, Opt(right, depth + 1, budget));
        if (v < entry.value) {
          entry.value = v;
          entry.ks = ks;
        }
      }
      size_t c = 0;
      for (; c < cross.size(); ++c) {
        if (ks[cross[c]] < hi(c)) {
          ++ks[cross[c]];
          break;
        }
        ks[cross[c]] = 0;
      }
      if (c == cross.size()) break;
    }
    double value = entry.value;
    memo_.emplace(std::move(key), std::move(entry));
    return value;
  }

  SelectorTree TreeFromMemo(const std::vector<int64_t>& root) {
    return Build(root, [&](const std::vector<int64_t>& counts, int depth,
                           std::vector<KindPair>& pairs) {
      const Memo& m = memo_.at(std::make_pair(depth, counts));
      pairs = m.pairs;
      return m.ks;
    });
  }

  // Greedy split of one cell; rng, when given, randomizes the start.
  std::vector<int64_t> LocalSplit(const std::vector<int64_t>& counts, int depth,
                                  const std::vector<KindPair>& pairs, std::mt19937_64* rng) {
    std::vector<int64_t> ks(pairs.size());
    std::vector<size_t> cross;
    double tr0 = 0.0, tr1 = 0.0;
    for (size_t i = 0; i < pairs.size(); ++i) {
      const KindPair& p = pairs[i];
      if (p.first == p.second) {
        ks[i] = p.count;
        continue;
      }
      cross.push_back(i);
      const double ta = traces_[p.first], tb = traces_[p.second];
      const int64_t m = p.count;
      int64_t best_k = m / 2;
      if (rng) {
        std::binomial_distribution<int64_t> coin(m, 0.5);
        best_k = coin(*rng);
      } else {
        double best_gap = std::numeric_limits<double>::infinity();
        for (int64_t k : {m / 2, (m + 1) / 2}) {
          double gap = std::abs((tr0 + k * ta + (m - k) * tb) - (tr1 + (m - k) * ta + k * tb));
          if (gap < best_gap) {
            best_gap = gap;
            best_k = k;
          }
        }
      }
      ks[i] = best_k;
      tr0 += best_k * ta + (m - best_k) * tb;
      tr1 += (m - best_k) * ta + best_k * tb;
    }
    if (cross.empty()) return ks;

    CellSplit split{counts, pairs, ks};
    auto objective = [&](const std::vector<int64_t>& trial) {
      split.first_to_left = trial;
      auto [left, right] = ApplySplit(split, num_kinds_);
      return std::max(Dev(left, depth + 1), Dev(right, depth + 1));
    };
    double cur = objective(ks);
    for (int pass = 0; pass < 64; ++pass) {
      bool improved = false;
      for (size_t i : cross) {
        const int64_t m = pairs[i].count;
        int64_t step = 1;
        while (step * 2 <= m) step *= 2;
        for (; step >= 1; step /= 2) {
          for (int dir : {1, -1}) {
            int64_t nk = ks[i] + dir * step;
            if (nk < 0 || nk > m) continue;
            int64_t old = ks[i];
            ks[i] = nk;
            double v = objective(ks);
            if (v < cur - 1e-14 * std::max(1.0, cur)) {
              cur = v;
              improved = true;
            } else {
              ks[i] = old;
            }
          }
        }
      }
      if (!improved) break;
    }
    return ks;
  }

  SelectorTree BuildLocal(const std::vector<int64_t>& root, std::mt19937_64* rng) {
    return Build(root, [&](const std::vector<int64_t>& counts, int depth,
                           std::vector<KindPair>& pairs) {
      pairs = PairsFor(counts, depth);
      return LocalSplit(counts, depth, pairs, rng);
    });
  }

  std::vector<double> Achieved(const SelectorTree& tree) {
    std::vector<double> out;
    out.reserve(tree.leaves.size());
    for (const auto& leaf : tree.leaves) out.push_back(Dev(leaf, order_));
    return out;
  }

 private:
  struct Memo {
    double value = 0.0;
    std::vector<KindPair> pairs;
    std::vector<int64_t> ks;
  };

  template <typename Chooser>
  SelectorTree Build(const std::vector<int64_t>& root, Chooser choose) {
    SelectorTree tree;
    tree.order = order_;
    tree.num_kinds = num_kinds_;
    std::vector<std::vector<int64_t>> cells{root};
    for (int depth = 0; depth < order_; ++depth) {
      std::vector<CellSplit> level;
      std::vector<std::vector<int64_t>> next;
      level.reserve(cells.size());
      next.reserve(2 * cells.size());
      for (auto& counts : cells) {
        CellSplit split;
        split.counts = counts;
        split.first_to_left = choose(counts, depth, split.pairs);
        auto [left, right] = ApplySplit(split, num_kinds_);
        next.push_back(std::move(left));
        next.push_back(std::move(right));
        level.push_back(std::move(split));
      }
      tree.levels.push_back(std::move(level));
      cells = std::move(next);
    }
    tree.leaves = std::move(cells);
    return tree;
  }

  std::span<const Mat> kinds_;
  const Mat& target_;
  int order_;
  int num_kinds_;
  Pairing pairing_;
  std::vector<double> traces_;
  int64_t evaluations_ = 0;
  int64_t splits_ = 0;
  std::map<std::pair<int, std::vector<int64_t>>, Memo> memo_;
};

void ValidateProblem(const SelectorProblem& p) {
  if (p.kinds.empty()) throw PreconditionError("selector problem has no operators");
  if (p.root_counts.size() != p.kinds.size()) throw PreconditionError("count/kind size mismatch");
  if (p.order < 0) throw PreconditionError("selector order must be nonnegative");
  if (p.order > 24) throw BudgetError("selector order too large for an explicit tree");
  const auto d = p.target.rows();
  if (p.target.cols() != d) throw PreconditionError("target is not square");
  for (const Mat& k : p.kinds) {
    if (k.rows() != d || k.cols() != d) throw PreconditionError("operator dimension mismatch");
  }
  for (int64_t c : p.root_counts) {
    if (c < 0) throw PreconditionError("negative multiplicity");
  }
}

SearchOutcome Randomized(const SelectorProblem& problem, const SearchOptions& options) {
  const int restarts = std::max(options.restarts, 1);
  std::vector<SelectorTree> trees(restarts);
  std::vector<double> worst(restarts);
  std::vector<int64_t> evals(restarts);
  ParallelFor(restarts, [&](int64_t r) {
    Engine engine(problem);
    std::seed_seq seq{static_cast<uint32_t>(options.seed), static_cast<uint32_t>(options.seed >> 32),
                      static_cast<uint32_t>(r)};
    std::mt19937_64 rng(seq);
    // Restart 0 starts from the trace-balanced split.
    trees[r] = engine.BuildLocal(problem.root_counts, r == 0 ? nullptr : &rng);
    auto achieved = engine.Achieved(trees[r]);
    worst[r] = *std::max_element(achieved.begin(), achieved.end());
    evals[r] = engine.evaluations();
  });
  int best = 0;
  for (int r = 1; r < restarts; ++r) {
    if (worst[r] < worst[best]) best = r;
  }
  SearchOutcome out;
  Engine engine(problem);
  out.tree = std::move(trees[best]);
  out.achieved = engine.Achieved(out.tree);
  out.worst = *std::max_element(out.achieved.begin(), out.achieved.end());
  out.used = Strategy::kRandomized;
  for (int64_t e : evals) out.evaluations += e;
  return out;
}

}  // namespace

double LeafDeviation(std::span<const Mat> kinds, const std::vector<int64_t>& counts,
                     const Mat& target, int order) {
  if (counts.size() != kinds.size()) throw PreconditionError("count/kind size mismatch");
  return Deviation(kinds, counts, target, order);
}

SearchOutcome SearchSelectors(const SelectorProblem& problem, const SearchOptions& options) {
  ValidateProblem(problem);
  if (options.strategy == Strategy::kExhaustive) {
    Engine engine(problem);
    try {
      engine.Opt(problem.root_counts, 0, options.exhaustive_budget);
      SearchOutcome out;
      out.tree = engine.TreeFromMemo(problem.root_counts);
      out.achieved = engine.Achieved(out.tree);
      out.worst = *std::max_element(out.achieved.begin(), out.achieved.end());
      out.used = Strategy::kExhaustive;
      out.evaluations = engine.evaluations();
      return out;
    } catch (const BudgetExceeded&) {
      SearchOutcome out = Randomized(problem, options);
      out.fell_back = true;
      out.evaluations += engine.evaluations();
      return out;
    }
  }
  if (options.strategy == Strategy::kRandomized) return Randomized(problem, options);
  Engine engine(problem);
  SearchOutcome out;
  out.tree = engine.BuildLocal(problem.root_counts, nullptr);
  out.achieved = engine.Achieved(out.tree);
  out.worst = *std::max_element(out.achieved.begin(), out.achieved.end());
  out.used = Strategy::kGreedy;
  out.evaluations = engine.evaluations();
  return out;
}

SelectorResult BestSelector(const std::vector<PsdOperator>& ops, const PsdOperator& target,
                            int order, const BestSelectorOptions& options) {
  if (ops.empty()) throw PreconditionError("no operators");
  if (order < 1) throw PreconditionError("selector order must be at least 1");
  const int d = target.dim();
  Mat sum = Mat::Zero(d, d);
  double max_trace = 0.0;
  SelectorProblem problem;
  for (const PsdOperator& op : ops) {
    if (op.dim() != d) throw PreconditionError("operator dimension mismatch");
    sum += op.matrix();
    max_trace = std::max(max_trace, op.trace());
    problem.kinds.push_back(op.matrix());
  }
  if (Spectrum(sum).back() > 1.0 + kNumTol) throw PreconditionError("operators sum above identity");
  const double delta = options.delta > 0.0 ? options.delta : max_trace;
  if (max_trace > delta * (1.0 + kNumTol)) throw PreconditionError("an operator trace exceeds delta");
  if (!(delta > 0.0)) throw PreconditionError("all operators are zero");
  if (std::ldexp(delta, order) >= 1.0) throw PreconditionError("2^N * delta must be below 1");

  problem.root_counts.assign(ops.size(), 1);
  problem.target = target.matrix();
  problem.order = order;
  SearchOutcome found = SearchSelectors(problem, options.search);

  SelectorResult out;
  out.tree = std::move(found.tree);
  SelectorCertificate& cert = out.certificate;
  cert.delta = delta;
  cert.order = order;
  cert.c = options.c >= 0.0 ? options.c : ConstantC(delta, MaxOrder(delta));
  cert.achieved = std::move(found.achieved);
  cert.bound = cert.c * std::sqrt(std::ldexp(delta, order));
  cert.satisfied = found.worst <= cert.bound + kNumTol * std::max(1.0, cert.bound);
  cert.strategy = found.used;
  cert.fell_back = found.fell_back;
  return out;
}

bool VerifyCertificate(const SelectorCertificate& cert, const SelectorTree& tree,
                       std::span<const Mat> kinds, const Mat& target) {
  const int n = tree.order;
  if (n < 0 || n > 24 || static_cast<int>(tree.levels.size()) != n ||
      tree.leaves.size() != (size_t{1} << n)) {
    throw PreconditionError("selector tree has the wrong shape");
  }
  const size_t nk = static_cast<size_t>(tree.num_kinds);
  if (kinds.size() != nk) throw PreconditionError("operator count differs from tree kinds");
  for (int t = 0; t < n; ++t) {
    if (tree.levels[t].size() != (size_t{1} << t)) throw PreconditionError("selector tree has the wrong shape");
    for (const CellSplit& c : tree.levels[t]) {
      if (c.counts.size() != nk) throw PreconditionError("cell has the wrong kind count");
    }
  }
  for (const auto& leaf : tree.leaves) {
    if (leaf.size() != nk) throw PreconditionError("leaf has the wrong kind count");
    for (int64_t c : leaf) {
      if (c < 0) throw PreconditionError("negative leaf multiplicity");
    }
  }
  const std::vector<int64_t>& root = n == 0 ? tree.leaves[0] : tree.levels[0][0].counts;
  std::vector<int64_t> total(nk, 0);
  for (const auto& leaf : tree.leaves) {
    for (size_t k = 0; k < nk; ++k) total[k] += leaf[k];
  }
  if (total != root) throw PreconditionError("leaves do not partition the root");

  for (int t = 0; t < n; ++t) {
    for (size_t i = 0; i < tree.levels[t].size(); ++i) {
      std::pair<std::vector<int64_t>, std::vector<int64_t>> kids;
      try {
        kids = ApplySplit(tree.levels[t][i], tree.num_kinds);
      } catch (const PreconditionError&) {
        return false;
      }
      const auto& l = t + 1 < n ? tree.levels[t + 1][2 * i].counts : tree.leaves[2 * i];
      const auto& r = t + 1 < n ? tree.levels[t + 1][2 * i + 1].counts : tree.leaves[2 * i + 1];
      if (kids.first != l || kids.second != r) return false;
    }
  }
  if (cert.order != n || cert.achieved.size() != tree.leaves.size()) return false;
  const double bound = cert.c * std::sqrt(std::ldexp(cert.delta, n));
  if (std::abs(bound - cert.bound) > kNumTol * std::max(1.0, bound)) return false;
  bool all_within = true;
  for (size_t b = 0; b < tree.leaves.size(); ++b) {
    double v = Deviation(kinds, tree.leaves[b], target, n);
    if (std::abs(v - cert.achieved[b]) > kNumTol * std::max(1.0, v)) return false;
    if (v > bound + kNumTol * std::max(1.0, bound)) all_within = false;
  }
  if (all_within != cert.satisfied) return false;
  return all_within;
}

bool VerifyCertificate(const SelectorCertificate& cert, const SelectorTree& tree,
                       const std::vector<PsdOperator>& ops, const PsdOperator& target) {
  std::vector<Mat> kinds;
  kinds.reserve(ops.size());
  for (const PsdOperator& op : ops) kinds.push_back(op.matrix());
  return VerifyCertificate(cert, tree, kinds, target.matrix());
}

}  // namespace framex
