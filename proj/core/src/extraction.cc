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

#include "framex/extraction.h"

#include <algorithm>
#include <cmath>

#include "framex/errors.h"

namespace framex {

namespace {

std::vector<Scalar> ScalarsOrOnes(const VectorFamily& f) {
  if (f.has_scalars()) return f.scalars();
  return std::vector<Scalar>(f.size(), Scalar(1.0, 0.0));
}

bool AnyComplex(const std::vector<Scalar>& s) {
  return std::any_of(s.begin(), s.end(), [](Scalar c) { return c.imag() != 0.0; });
}

// Orthonormal basis of the span of the residuals (I - Q Q^*) v, v in `vs`,
// ignoring residuals that are negligible relative to their vector.
Mat ResidualBasis(int dim, const std::vector<Vec>& vs, int count, const Mat& q) {
  std::vector<Vec> kept;
  for (int n = 0; n < count; ++n) {
    const double norm = vs[n].norm();
    if (norm == 0.0) continue;
    Vec r = vs[n];
    for (int pass = 0; pass < 2; ++pass) {
      if (q.cols() > 0) r -= q * (q.adjoint() * r);
    }
    if (r.norm() > kRankDropTol * norm) kept.push_back(r);
  }
  Mat basis = ProjectOnto(dim, kept).basis();
  for (Eigen::Index k = 0; k < basis.cols(); ++k) {
    Vec b = basis.col(k);
    if (q.cols() > 0) b -= q * (q.adjoint() * b);
    basis.col(k) = b / b.norm();
  }
  return basis;
}

Mat Concat(const Mat& a, const Mat& b) {
  Mat out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

double CompressedEnergy(const Mat& basis, const Vec& v) {
  if (basis.cols() == 0) return 0.0;
  return (basis.adjoint() * v).squaredNorm();
}

}  // namespace

Projection ExtractionPlan::BlockComplement(int j) const {
  const int dim = subspaces.front().dim();
  const Projection& a = subspaces.at(j);
  if (j + 1 < static_cast<int>(subspaces.size())) return DirectSum(a, subspaces[j + 1]);
  return DirectSum(a, Projection(dim));
}

ExtractionPlan Plan(const VectorFamily& f, const ExtractOptions& options,
                    std::optional<double> lower, std::optional<double> upper) {
  if (f.empty()) throw PreconditionError("cannot extract from an empty family");
  const int dim = f.dim();
  const int m = static_cast<int>(f.size());
  const std::vector<Scalar> c = ScalarsOrOnes(f);
  FrameReport rep = FrameBounds(f.WithScalars(c), true);
  if (!rep.is_frame) throw PreconditionError("rescaled family is not a frame");

  ExtractionPlan plan;
  plan.lower = lower.value_or(rep.lower);
  plan.upper = upper.value_or(rep.upper);
  if (!(plan.lower > 0.0) || plan.upper < plan.lower) throw PreconditionError("invalid frame bounds");
  const double a = plan.lower, b = plan.upper;
  plan.c_constant = options.c_constant >= 0.0 ? options.c_constant : UniversalConstantC();
  if (!(plan.c_constant > 0.0)) throw PreconditionError("selector constant must be positive");
  plan.epsilon = std::min(a / (3.0 * b), std::sqrt(b) / (2.0 * plan.c_constant));
  BetaChoice beta = BetaFor(plan.epsilon, plan.c_constant, 1.0 / b);
  plan.beta = beta.beta;
  plan.beta_zero_fallback = beta.zero_fallback;

  std::vector<Vec> unit(m);
  for (int n = 0; n < m; ++n) {
    const double norm = f[n].norm();
    plan.weights.push_back(std::norm(c[n]) * norm * norm);
    unit[n] = norm > 0.0 ? Vec(f[n] / (norm * std::sqrt(b))) : Vec(Vec::Zero(dim));
  }
  auto eta = [&](int j) { return j == 0 ? 0.0 : plan.epsilon * plan.epsilon / (36.0 * std::pow(4.0, j)); };
  auto tail = [&](const Mat& q, int from) {
    double s = 0.0;
    for (int n = from; n < m; ++n) s += plan.weights[n] * CompressedEnergy(q, unit[n]);
    return s;
  };
  auto block_gamma = [&](const Mat& mperp, int from, int to) {
    double s = 0.0;
    for (int n = from; n < to; ++n) {
      Vec outside = unit[n];
      if (mperp.cols() > 0) outside -= mperp * (mperp.adjoint() * unit[n]);
      s += plan.weights[n] * outside.squaredNorm();
    }
    return s;
  };
  const double tol = kNumTol;

  // H_1 = {0}; H_2 spans x_0.
  std::vector<Mat> h{Mat(dim, 0)};
  plan.boundaries = {0, 1};
  plan.thresholds = {eta(0), eta(1)};
  plan.tail_traces = {0.0};
  h.push_back(ResidualBasis(dim, unit, 1, Mat(dim, 0)));
  plan.block_gammas.push_back(block_gamma(Concat(h[0], h[1]), 0, 1));
  plan.block_gammas_ok = plan.block_gammas[0] <= eta(0) + tol;
  Mat q = Concat(h[0], h[1]);  // Q_2

  for (int j = 1; plan.boundaries[j] < m; ++j) {
    const int kj = plan.boundaries[j];
    int chosen = -1;
    double chosen_tail = 0.0, chosen_gamma = 0.0;
    Mat chosen_next;
    for (int k = kj + 1; k <= m; ++k) {
      const double t = tail(q, k);
      if (t > eta(j + 1) + tol && k < m) continue;
      Mat next = ResidualBasis(dim, unit, k, q);
      const double g = block_gamma(Concat(h[j], next), kj, k);
      if (g <= eta(j) + tol || k == m) {
        chosen = k;
        chosen_tail = t;
        chosen_gamma = g;
        chosen_next = std::move(next);
        break;
      }
    }
    plan.boundaries.push_back(chosen);
    plan.thresholds.push_back(eta(j + 1));
    plan.tail_traces.push_back(chosen_tail);
    plan.block_gammas.push_back(chosen_gamma);
    if (chosen_gamma > eta(j) + tol) plan.block_gammas_ok = false;
    q = Concat(q, chosen_next);
    h.push_back(std::move(chosen_next));
  }
  plan.thresholds.pop_back();  // eta_0 .. eta_J

  for (const Mat& basis : h) plan.subspaces.emplace_back(dim, basis);
  const int blocks = plan.blocks();
  Mat sum = Mat::Zero(dim, dim);
  for (int j = 0; j <= blocks; ++j) sum += plan.BlockComplement(j).Matrix();
  Mat span = ProjectOnto(dim, f.vectors()).Matrix();
  plan.block_identity_defect = OperatorNorm(sum - 2.0 * span);
  return plan;
}

ExtractionResult Extract(const VectorFamily& f, const ExtractOptions& options) {
  ExtractionResult out;
  out.plan = Plan(f, options);
  const ExtractionPlan& plan = out.plan;
  const int dim = f.dim();
  const int m = static_cast<int>(f.size());
  const double b = plan.upper;

  std::vector<PsdOperator> ops;
  for (int n = 0; n < m; ++n) {
    const double norm = f[n].norm();
    ops.push_back(norm > 0.0 ? RankOne(f[n] / (norm * std::sqrt(b))) : PsdOperator::Zero(dim));
  }
  std::vector<int64_t> mult(m, 0);
  out.sandwich_ok = true;
  for (int j = 0; j < plan.blocks(); ++j) {
    BlockCertificate bc;
    bc.first = plan.boundaries[j];
    bc.last = plan.boundaries[j + 1];
    std::vector<PsdOperator> block_ops(ops.begin() + bc.first, ops.begin() + bc.last);
    std::vector<double> block_w(plan.weights.begin() + bc.first, plan.weights.begin() + bc.last);
    if (std::all_of(block_w.begin(), block_w.end(), [](double w) { return w == 0.0; })) {
      bc.skipped = true;
      out.blocks.push_back(std::move(bc));
      continue;
    }
    SampleOptions so;
    so.epsilon = plan.epsilon;
    so.search = options.search;
    so.c_constant = plan.c_constant;
    so.delta = 1.0 / b;
    so.gamma_bound = plan.thresholds[j];
    so.sum_cap = 1.0;
    so.replica_budget = options.replica_budget;
    so.max_levels = options.max_levels;
    so.seed = options.seed + static_cast<uint64_t>(j);
    SampleResult res = Sample(block_ops, block_w, plan.BlockComplement(j).Complement(), so);
    for (int n = bc.first; n < bc.last; ++n) mult[n] = res.sigma.multiplicity()[n - bc.first];
    out.sandwich_ok = out.sandwich_ok && res.certificate.sandwich_ok;
    bc.sampling = std::move(res.certificate);
    out.blocks.push_back(std::move(bc));
  }
  out.sigma = SamplingFunction(mult);

  std::vector<Vec> units;
  std::vector<Scalar> roots;
  for (int n = 0; n < m; ++n) {
    if (mult[n] == 0) continue;
    Vec u = f[n] / f[n].norm();
    if (f.field() == Field::kReal) u = u.real().cast<Scalar>();
    units.push_back(std::move(u));
    roots.emplace_back(std::sqrt(static_cast<double>(mult[n])), 0.0);
    out.selected.push_back(n);
    out.multiplicities.push_back(mult[n]);
  }
  out.normalized = VectorFamily(dim, f.field(), units);
  if (!units.empty()) {
    out.report = FrameBounds(VectorFamily(dim, f.field(), units, roots), true);
  }
  out.envelope_lower = std::ldexp(plan.lower / 3.0, plan.beta);
  out.envelope_upper = std::ldexp(3.0 * plan.upper, plan.beta);
  out.bounds_ok = out.report.lower > 0.0 &&
                  out.report.lower >= out.envelope_lower * (1.0 - kEnvelopeSlack) &&
                  out.report.upper <= out.envelope_upper * (1.0 + kEnvelopeSlack);
  const double c = plan.c_constant;
  out.mult_bound_l = std::max(144.0 * c * c * b / (plan.lower * plan.lower),
                              64.0 * c * c * c * c / (b * b));
  out.mult_ok = true;
  for (int n = 0; n < m; ++n) {
    if (static_cast<double>(mult[n]) > out.mult_bound_l * plan.weights[n]) out.mult_ok = false;
  }
  out.block_mult_ok = MultiplicityWithin(mult, plan.weights, plan.beta);
  return out;
}

CoefficientFamily EquivalenceBToA(const VectorFamily& f, int probes, uint64_t seed) {
  const std::vector<Scalar> c = ScalarsOrOnes(f);
  const Field field = AnyComplex(c) ? Field::kComplex : f.field();
  VectorFamily scaled(f.dim(), field, f.WithScalars(c).Weighted(true));
  VectorFamily duals = CanonicalDual(scaled);
  std::vector<Vec> out;
  for (size_t n = 0; n < f.size(); ++n) out.push_back(std::conj(c[n]) * duals[n]);
  CoefficientFamily cf{VectorFamily(f.dim(), field, std::move(out)), 0.0};
  for (const Vec& x : RandomProbes(f.dim(), field, probes, seed)) {
    Vec sum = Vec::Zero(f.dim());
    for (size_t n = 0; n < f.size(); ++n) sum += Inner(x, cf.functionals[n]) * f[n];
    cf.max_residual = std::max(cf.max_residual, (x - sum).norm() / x.norm());
  }
  return cf;
}

CollinearGroups GroupCollinear(const VectorFamily& f, double tol) {
  CollinearGroups g;
  g.class_of.assign(f.size(), -1);
  g.ratio.assign(f.size(), Scalar(0.0, 0.0));
  std::vector<Vec> rep_units;
  for (size_t n = 0; n < f.size(); ++n) {
    const double norm = f[n].norm();
    if (norm == 0.0) continue;
    Vec u = f[n] / norm;
    int found = -1;
    for (size_t k = 0; k < rep_units.size(); ++k) {
      if (std::abs(Inner(u, rep_units[k])) >= 1.0 - tol) {
        found = static_cast<int>(k);
        break;
      }
    }
    if (found < 0) {
      found = static_cast<int>(rep_units.size());
      rep_units.push_back(u);
      g.representative.push_back(static_cast<int>(n));
      g.members.emplace_back();
    }
    const Vec& rep = f[g.representative[found]];
    g.class_of[n] = found;
    g.members[found].push_back(static_cast<int>(n));
    g.ratio[n] = Inner(f[n], rep) / rep.squaredNorm();
  }
  return g;
}

NonCollinearSubfamily EquivalenceAToD(const VectorFamily& f, const ExtractOptions& options) {
  if (f.empty()) throw PreconditionError("empty family");
  NonCollinearSubfamily out;
  out.groups = GroupCollinear(f);
  std::vector<Vec> reps;
  for (int r : out.groups.representative) reps.push_back(f[r] / f[r].norm());
  if (reps.empty() || !FrameBounds(VectorFamily(f.dim(), f.field(), reps), false).is_frame) {
    throw PreconditionError("family does not span the space");
  }
  std::vector<Scalar> c;
  if (f.has_scalars()) {
    c = f.scalars();
  } else {
    for (const Vec& v : f.vectors()) {
      const double norm = v.norm();
      c.emplace_back(norm > 0.0 ? 1.0 / norm : 0.0, 0.0);
    }
  }
  const double b = FrameBounds(f.WithScalars(c), true).upper;
  const size_t classes = out.groups.representative.size();
  out.class_weights.assign(classes, 0.0);
  std::vector<double> grouped(classes, 0.0);  // sum |c_{n,k}|^2
  for (size_t n = 0; n < f.size(); ++n) {
    const int k = out.groups.class_of[n];
    if (k < 0) continue;
    const double rep_norm = f[out.groups.representative[k]].norm();
    const double cnk = std::norm(c[n] * out.groups.ratio[n]);
    grouped[k] += cnk;
    out.class_weights[k] += cnk * rep_norm * rep_norm;
  }
  out.class_weights_ok = std::all_of(out.class_weights.begin(), out.class_weights.end(),
                                     [&](double w) { return w <= b * (1.0 + kNumTol); });

  std::vector<Vec> rep_vectors;
  std::vector<Scalar> rep_scalars;
  for (size_t k = 0; k < classes; ++k) {
    rep_vectors.push_back(f[out.groups.representative[k]]);
    rep_scalars.emplace_back(std::sqrt(grouped[k]), 0.0);
  }
  out.extraction = Extract(VectorFamily(f.dim(), f.field(), rep_vectors, rep_scalars), options);
  for (int k : out.extraction.selected) out.indices.push_back(out.groups.representative[k]);
  out.pairwise_non_collinear = true;
  for (size_t i = 0; i < out.indices.size(); ++i) {
    for (size_t j = i + 1; j < out.indices.size(); ++j) {
      const Vec& u = f[out.indices[i]];
      const Vec& v = f[out.indices[j]];
      if (std::abs(Inner(u, v)) / (u.norm() * v.norm()) > 1.0 - kCollinearTol) {
        out.pairwise_non_collinear = false;
      }
    }
  }
  return out;
}

ReconstructionCheck EquivalenceCCheck(const VectorFamily& f, const VectorFamily& duals, int probes,
                                      uint64_t seed) {
  if (duals.size() != f.size() || duals.dim() != f.dim()) {
    throw PreconditionError("family and duals differ in size");
  }
  const Field field =
      f.field() == Field::kComplex || duals.field() == Field::kComplex ? Field::kComplex : Field::kReal;
  ReconstructionCheck r;
  for (const Vec& x : RandomProbes(f.dim(), field, probes, seed)) {
    Vec sum = Vec::Zero(f.dim());
    for (size_t n = 0; n < f.size(); ++n) sum += Inner(x, f[n]) * duals[n];
    r.max_residual = std::max(r.max_residual, (x - sum).norm() / x.norm());
  }
  r.holds = r.max_residual < kNumTol;
  return r;
}

}  // namespace framex
