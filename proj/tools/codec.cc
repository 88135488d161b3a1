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

#include "codec.h"

#include <fstream>
#include <sstream>

#include "framex/errors.h"

namespace framex::tools {

namespace {

const Json& Require(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw ParseError(std::string("missing field \"") + key + "\"");
  }
  return doc.at(key);
}

int RequireInt(const Json& doc, const char* key) {
  const Json& v = Require(doc, key);
  if (!v.is_number_integer()) throw ParseError(std::string("field \"") + key + "\" must be an integer");
  return v.get<int>();
}

double RequireNumber(const Json& v, const char* what) {
  if (!v.is_number()) throw ParseError(std::string(what) + " must be a number");
  return v.get<double>();
}

Scalar DecodeScalar(const Json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ParseError("scalar entries must be numbers or [re, im] pairs");
}

Vec DecodeVec(const Json& v, int dim) {
  if (!v.is_array() || static_cast<int>(v.size()) != dim) {
    throw ParseError("vector must be an array of length " + std::to_string(dim));
  }
  Vec out(dim);
  for (int i = 0; i < dim; ++i) out(i) = DecodeScalar(v[i]);
  return out;
}

Field DecodeField(const Json& doc) {
  if (!doc.contains("field")) return Field::kReal;
  const Json& f = doc.at("field");
  if (f == "real") return Field::kReal;
  if (f == "complex") return Field::kComplex;
  throw ParseError("field must be \"real\" or \"complex\"");
}

Json Number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

}  // namespace

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

VectorFamily DecodeFamily(const Json& doc) {
  const int dim = RequireInt(doc, "dim");
  if (dim < 1) throw ParseError("dim must be positive");
  const Field field = DecodeField(doc);
  const Json& vs = Require(doc, "vectors");
  if (!vs.is_array()) throw ParseError("vectors must be an array");
  std::vector<Vec> vectors;
  for (const Json& v : vs) vectors.push_back(DecodeVec(v, dim));
  std::optional<std::vector<Scalar>> scalars;
  if (doc.contains("scalars") && !doc.at("scalars").is_null()) {
    const Json& s = doc.at("scalars");
    if (!s.is_array()) throw ParseError("scalars must be an array");
    scalars.emplace();
    for (const Json& c : s) scalars->push_back(DecodeScalar(c));
  }
  std::optional<std::vector<std::string>> labels;
  if (doc.contains("labels") && !doc.at("labels").is_null()) {
    const Json& l = doc.at("labels");
    if (!l.is_array()) throw ParseError("labels must be an array");
    labels.emplace();
    for (const Json& s : l) {
      if (!s.is_string()) throw ParseError("labels must be strings");
      labels->push_back(s.get<std::string>());
    }
  }
  return VectorFamily(dim, field, std::move(vectors), std::move(scalars), std::move(labels));
}

Projection DecodeSubspace(const Json& doc, int dim, Field field) {
  if (!doc.contains("subspace") || doc.at("subspace").is_null()) return Projection(dim);
  const Json& s = doc.at("subspace");
  if (!s.is_array()) throw ParseError("subspace must be an array of vectors");
  std::vector<Vec> span;
  for (const Json& v : s) {
    span.push_back(DecodeVec(v, dim));
    if (field == Field::kReal && !IsRealValued(span.back())) {
      throw PreconditionError("real space given a complex subspace vector");
    }
  }
  return ProjectOnto(dim, span);
}

std::vector<PointSet> DecodePointSets(const Json& doc) {
  auto one = [](const Json& d) {
    const int k = RequireInt(d, "ambient_dim");
    if (k < 1) throw ParseError("ambient_dim must be positive");
    const double extent = RequireNumber(Require(d, "extent"), "extent");
    const Json& ps = Require(d, "points");
    if (!ps.is_array()) throw ParseError("points must be an array");
    std::vector<Point> pts;
    for (const Json& p : ps) {
      Point x(k);
      if (k == 1 && p.is_number()) {
        x(0) = p.get<double>();
      } else {
        if (!p.is_array() || static_cast<int>(p.size()) != k) {
          throw ParseError("point must have ambient_dim coordinates");
        }
        for (int i = 0; i < k; ++i) x(i) = RequireNumber(p[i], "coordinate");
      }
      pts.push_back(std::move(x));
    }
    return PointSet(k, std::move(pts), extent);
  };
  std::vector<PointSet> out;
  if (doc.is_object() && doc.contains("sets")) {
    const Json& sets = doc.at("sets");
    if (!sets.is_array() || sets.empty()) throw ParseError("sets must be a nonempty array");
    for (const Json& s : sets) out.push_back(one(s));
  } else {
    out.push_back(one(doc));
  }
  return out;
}

GaborSpec DecodeGabor(const Json& doc) {
  const int l = RequireInt(doc, "L");
  if (l < 1) throw ParseError("L must be positive");
  std::optional<CyclicSignal> window;
  const Json w = doc.contains("window") ? doc.at("window") : Json("gaussian");
  if (w.is_string()) {
    if (w != "gaussian") throw ParseError("window must be \"gaussian\" or an array of samples");
    window = CyclicSignal::Gaussian(l);
  } else if (w.is_object()) {
    double sigma = w.contains("sigma") ? RequireNumber(w.at("sigma"), "sigma") : 0.0;
    window = CyclicSignal::Gaussian(l, sigma);
  } else {
    window = CyclicSignal(DecodeVec(w, l));
  }
  std::vector<Shift> shifts;
  if (doc.contains("shifts")) {
    const Json& s = doc.at("shifts");
    if (!s.is_array()) throw ParseError("shifts must be an array of [a, b] pairs");
    for (const Json& p : s) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer()) {
        throw ParseError("shifts must be integer [a, b] pairs");
      }
      shifts.emplace_back(p[0].get<int64_t>(), p[1].get<int64_t>());
    }
  } else if (doc.contains("lattice")) {
    const Json& s = doc.at("lattice");
    if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() || !s[1].is_number_integer()) {
      throw ParseError("lattice must be [a_step, b_step]");
    }
    shifts = Lattice(l, s[0].get<int>(), s[1].get<int>());
  } else {
    throw ParseError("missing field \"shifts\" or \"lattice\"");
  }
  return GaborSpec{*window, std::move(shifts)};
}

Json Encode(const Vec& v, Field field) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (field == Field::kReal) {
      out.push_back(Number(v(i).real()));
    } else {
      out.push_back(Json::array({Number(v(i).real()), Number(v(i).imag())}));
    }
  }
  return out;
}

Json Encode(const VectorFamily& f) {
  Json out;
  out["dim"] = f.dim();
  out["field"] = f.field() == Field::kReal ? "real" : "complex";
  Json vs = Json::array();
  for (const Vec& v : f.vectors()) vs.push_back(Encode(v, f.field()));
  out["vectors"] = std::move(vs);
  if (f.has_scalars()) {
    Json s = Json::array();
    for (Scalar c : f.scalars()) {
      s.push_back(c.imag() == 0.0 ? Number(c.real())
                                  : Json::array({Number(c.real()), Number(c.imag())}));
    }
    out["scalars"] = std::move(s);
  }
  if (f.labels()) out["labels"] = *f.labels();
  return out;
}

Json Encode(const FrameReport& r) {
  return Json{{"lower", Number(r.lower)},
              {"upper", Number(r.upper)},
              {"is_frame", r.is_frame},
              {"is_bessel", r.is_bessel},
              {"is_tight", r.is_tight},
              {"is_riesz_basis", r.is_riesz_basis},
              {"count", r.count},
              {"dim", r.dim},
              {"probe_min", Number(r.probe_min)},
              {"probe_max", Number(r.probe_max)}};
}

Json Encode(const Classification& c) {
  return Json{{"label", ToString(c.label)},
              {"rescaling_recommended", c.rescaling_recommended},
              {"note", c.note},
              {"report", Encode(c.report)},
              {"normalized_report", Encode(c.normalized_report)},
              {"finite_dimensional_caveat",
               "in finite dimension a family can be rescaled into a frame exactly when it spans"}};
}

Json Encode(const SelectorTree& t, bool with_members) {
  Json levels = Json::array();
  for (const auto& level : t.levels) {
    Json cells = Json::array();
    for (const CellSplit& c : level) {
      Json pairs = Json::array();
      for (size_t i = 0; i < c.pairs.size(); ++i) {
        pairs.push_back(Json::array({c.pairs[i].first, c.pairs[i].second, c.pairs[i].count,
                                     c.first_to_left[i]}));
      }
      cells.push_back(Json{{"counts", c.counts}, {"pairs", std::move(pairs)}});
    }
    levels.push_back(std::move(cells));
  }
  Json leaves = Json::array();
  for (size_t b = 0; b < t.leaves.size(); ++b) {
    leaves.push_back(with_members ? Json(t.LeafMembers(static_cast<int64_t>(b))) : Json(t.leaves[b]));
  }
  return Json{{"order", t.order},
              {"kinds", t.num_kinds},
              {"pad_kind", t.pad_kind()},
              {"levels", std::move(levels)},
              {"leaves", std::move(leaves)}};
}

Json Encode(const SelectorCertificate& c) {
  Json achieved = Json::array();
  for (double a : c.achieved) achieved.push_back(Number(a));
  return Json{{"delta", Number(c.delta)},
              {"order", c.order},
              {"C", Number(c.c)},
              {"achieved", std::move(achieved)},
              {"bound", Number(c.bound)},
              {"satisfied", c.satisfied},
              {"strategy", ToString(c.strategy)},
              {"fell_back_to_randomized", c.fell_back}};
}

Json Encode(const DyadicDecomposition& d) {
  return Json{{"target", Number(d.target)},
              {"exponents", d.exponents},
              {"remainder", Number(d.remainder)},
              {"depth", d.depth}};
}

Json Encode(const PaddingSet& p) { return Json{{"exponents", p.exponents}}; }

Json Encode(const SamplingCertificate& c) {
  return Json{{"beta", c.beta},
              {"beta_zero_fallback", c.beta_zero_fallback},
              {"epsilon", Number(c.epsilon)},
              {"gamma", Number(c.gamma)},
              {"delta", Number(c.delta)},
              {"C", Number(c.c_constant)},
              {"eta", c.eta},
              {"levels", c.levels},
              {"depth", c.depth},
              {"tail_ok", c.tail_ok},
              {"pad_scale", Number(c.pad_scale)},
              {"chosen_leaf", c.chosen_leaf},
              {"pigeonhole_ok", c.pigeonhole_ok},
              {"sandwich_lo", Number(c.sandwich_lo)},
              {"sandwich_hi", Number(c.sandwich_hi)},
              {"sandwich_allowance", Number(c.sandwich_allowance)},
              {"sandwich_ok", c.sandwich_ok},
              {"mult_ok", c.mult_ok},
              {"selector", Encode(c.selector)}};
}

Json Encode(const ExtractionPlan& p) {
  Json ranks = Json::array();
  for (const Projection& h : p.subspaces) ranks.push_back(h.rank());
  Json gammas = Json::array(), thresholds = Json::array(), tails = Json::array();
  for (double g : p.block_gammas) gammas.push_back(Number(g));
  for (double t : p.thresholds) thresholds.push_back(Number(t));
  for (double t : p.tail_traces) tails.push_back(Number(t));
  return Json{{"lower", Number(p.lower)},
              {"upper", Number(p.upper)},
              {"epsilon", Number(p.epsilon)},
              {"C", Number(p.c_constant)},
              {"beta", p.beta},
              {"beta_zero_fallback", p.beta_zero_fallback},
              {"boundaries", p.boundaries},
              {"subspace_ranks", std::move(ranks)},
              {"thresholds", std::move(thresholds)},
              {"tail_traces", std::move(tails)},
              {"block_gammas", std::move(gammas)},
              {"block_gammas_ok", p.block_gammas_ok},
              {"block_identity_defect", Number(p.block_identity_defect)}};
}

Json Encode(const ExtractionResult& r) {
  Json blocks = Json::array();
  for (const BlockCertificate& b : r.blocks) {
    Json j{{"first", b.first}, {"last", b.last}, {"skipped", b.skipped}};
    if (!b.skipped) j["sampling"] = Encode(b.sampling);
    blocks.push_back(std::move(j));
  }
  return Json{{"plan", Encode(r.plan)},
              {"multiplicity", r.sigma.multiplicity()},
              {"domain_size", r.sigma.domain_size()},
              {"selected", r.selected},
              {"selected_multiplicity", r.multiplicities},
              {"normalized", Encode(r.normalized)},
              {"report", Encode(r.report)},
              {"envelope_lower", Number(r.envelope_lower)},
              {"envelope_upper", Number(r.envelope_upper)},
              {"bounds_ok", r.bounds_ok},
              {"mult_bound_L", Number(r.mult_bound_l)},
              {"mult_ok", r.mult_ok},
              {"block_mult_ok", r.block_mult_ok},
              {"sandwich_ok", r.sandwich_ok},
              {"blocks", std::move(blocks)}};
}

Json Encode(const DensityEstimate& d) {
  Json curve = Json::array();
  for (const WindowCurvePoint& w : d.per_window) {
    curve.push_back(Json{{"radius", Number(w.radius)},
                         {"step", Number(w.step)},
                         {"centers", w.centers},
                         {"min_count", w.min_count},
                         {"max_count", w.max_count},
                         {"lower", Number(w.lower)},
                         {"upper", Number(w.upper)}});
  }
  return Json{{"lower", Number(d.lower)},
              {"upper", Number(d.upper)},
              {"radii", d.radii},
              {"per_window", std::move(curve)}};
}

Json Encode(const ClusterReport& r) {
  Json clusters = Json::array();
  for (size_t n = 0; n < r.clusters.size(); ++n) {
    Json pts = Json::array();
    for (const ClusterPoint& p : r.clusters[n]) {
      pts.push_back(Json{{"a", p.shift.first},
                         {"b", p.shift.second},
                         {"parameter_distance", Number(p.parameter_distance)},
                         {"vector_distance", Number(p.vector_distance)}});
    }
    clusters.push_back(std::move(pts));
  }
  Json budgets = Json::array(), norms = Json::array();
  for (double b : r.budgets) budgets.push_back(Number(b));
  for (double x : r.functional_norms) norms.push_back(Number(x));
  return Json{{"base_report", Encode(r.base_report)},
              {"dual_sup_norm", Number(r.dual_sup_norm)},
              {"K", r.k},
              {"budgets", std::move(budgets)},
              {"clusters", std::move(clusters)},
              {"deviation", Number(r.deviation)},
              {"deviation_ok", r.deviation_ok},
              {"functional_norms", std::move(norms)},
              {"functionals_nonzero", r.functionals_nonzero},
              {"base_upper_density", Number(r.base_upper_density)},
              {"output_upper_density", Number(r.output_upper_density)},
              {"density_increased", r.density_increased},
              {"density_note", "window counts on the cyclic grid; finite-model evidence only"}};
}

}  // namespace framex::tools
