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

#include "job.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <Eigen/Core>

#include "codec.h"
#include "framex/errors.h"
#include "framex/version.h"

namespace framex::tools {

namespace {

// Typed access to --param values. Keys outside the command's allowlist are
// rejected before any work starts.
class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& raw) : raw_(raw) {}

  void Allow(const std::set<std::string>& allowed) const {
    for (const auto& [key, value] : raw_) {
      if (!allowed.count(key)) throw PreconditionError("unknown param: " + key);
    }
  }

  bool Has(const std::string& key) const { return raw_.count(key) > 0; }

  std::string String(const std::string& key, const std::string& fallback) const {
    auto it = raw_.find(key);
    return it == raw_.end() ? fallback : it->second;
  }

  double Double(const std::string& key, double fallback) const {
    auto it = raw_.find(key);
    return it == raw_.end() ? fallback : ToDouble(key, it->second);
  }

  int64_t Int(const std::string& key, int64_t fallback) const {
    auto it = raw_.find(key);
    return it == raw_.end() ? fallback : ToInt(key, it->second);
  }

  bool Bool(const std::string& key, bool fallback) const {
    auto it = raw_.find(key);
    if (it == raw_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ParseError("param " + key + " must be true or false");
  }

  std::vector<double> DoubleList(const std::string& key) const {
    std::vector<double> out;
    for (const std::string& s : Split(raw_.at(key))) out.push_back(ToDouble(key, s));
    return out;
  }

  std::vector<int> IntList(const std::string& key) const {
    std::vector<int> out;
    for (const std::string& s : Split(raw_.at(key))) out.push_back(static_cast<int>(ToInt(key, s)));
    return out;
  }

 private:
  static std::vector<std::string> Split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(item);
    return out;
  }

  static double ToDouble(const std::string& key, const std::string& s) {
    try {
      size_t used = 0;
      double v = std::stod(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw ParseError("param " + key + " is not a number: " + s);
  }

  static int64_t ToInt(const std::string& key, const std::string& s) {
    int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ParseError("param " + key + " is not an integer: " + s);
    }
    return v;
  }

  const std::map<std::string, std::string>& raw_;
};

// One flat table of the CSV export.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

struct Outcome {
  Json result;
  std::vector<Table> tables;
};

const std::set<std::string> kSearchKeys = {"strategy", "restarts", "exhaustive_budget"};

std::set<std::string> With(std::set<std::string> base, const std::set<std::string>& more) {
  base.insert(more.begin(), more.end());
  return base;
}

SearchOptions SearchFrom(const Params& p, uint64_t seed) {
  SearchOptions s;
  s.strategy = ParseStrategy(p.String("strategy", ToString(s.strategy)));
  s.restarts = static_cast<int>(p.Int("restarts", s.restarts));
  s.exhaustive_budget = p.Int("exhaustive_budget", s.exhaustive_budget);
  s.seed = seed;
  if (s.restarts < 1) throw PreconditionError("restarts must be positive");
  return s;
}

Mat DecodeMatrix(const Json& m, int dim) {
  if (!m.is_array() || static_cast<int>(m.size()) != dim) {
    throw ParseError("operator must have dim rows");
  }
  Mat out(dim, dim);
  for (int i = 0; i < dim; ++i) {
    if (!m[i].is_array() || static_cast<int>(m[i].size()) != dim) {
      throw ParseError("operator rows must have dim entries");
    }
    for (int j = 0; j < dim; ++j) {
      const Json& v = m[i][j];
      if (v.is_number()) {
        out(i, j) = v.get<double>();
      } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        out(i, j) = Scalar(v[0].get<double>(), v[1].get<double>());
      } else {
        throw ParseError("operator entries must be numbers or [re, im] pairs");
      }
    }
  }
  return out;
}

Json EncodeMatrix(const Mat& m, Field field) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(Encode(Vec(m.row(i).transpose()), field));
  return rows;
}

struct OperatorInput {
  int dim = 0;
  Field field = Field::kReal;
  std::vector<PsdOperator> ops;
  std::vector<double> weights;
};

// "operators" holds explicit matrices; otherwise each vector x gives x x^*.
OperatorInput DecodeOperators(const Json& doc) {
  OperatorInput in;
  if (doc.is_object() && doc.contains("operators")) {
    const Json& dim = doc.at("dim");
    if (!dim.is_number_integer() || dim.get<int>() < 1) throw ParseError("dim must be a positive integer");
    in.dim = dim.get<int>();
    if (doc.contains("field")) {
      if (doc.at("field") == "complex") {
        in.field = Field::kComplex;
      } else if (doc.at("field") != "real") {
        throw ParseError("field must be \"real\" or \"complex\"");
      }
    }
    if (!doc.at("operators").is_array()) throw ParseError("operators must be an array");
    for (const Json& m : doc.at("operators")) in.ops.push_back(PsdOperator::FromMatrix(DecodeMatrix(m, in.dim)));
  } else {
    VectorFamily f = DecodeFamily(doc);
    in.dim = f.dim();
    in.field = f.field();
    for (const Vec& v : f.vectors()) in.ops.push_back(RankOne(v));
  }
  if (in.ops.empty()) throw PreconditionError("at least one operator is required");
  if (doc.contains("weights")) {
    const Json& w = doc.at("weights");
    if (!w.is_array() || w.size() != in.ops.size()) throw ParseError("weights must match the operators");
    for (const Json& x : w) {
      if (!x.is_number()) throw ParseError("weights must be numbers");
      in.weights.push_back(x.get<double>());
    }
  } else {
    in.weights.assign(in.ops.size(), 1.0);
  }
  return in;
}

Table ReportTable(const std::string& name, const FrameReport& r) {
  return {name,
          {"lower", "upper", "is_frame", "is_bessel", "is_tight", "is_riesz_basis", "count", "dim"},
          {{r.lower, r.upper, r.is_frame, r.is_bessel, r.is_tight, r.is_riesz_basis, r.count, r.dim}}};
}

bool UseScalars(const Params& p, const VectorFamily& f) {
  return p.Bool("use_scalars", f.has_scalars());
}

Outcome Analyze(const Json& doc, const Params& p, const Job&) {
  p.Allow({"use_scalars"});
  VectorFamily f = DecodeFamily(doc);
  const bool use = UseScalars(p, f);
  FrameReport r = FrameBounds(f, use);
  std::vector<double> spectrum = Spectrum(FrameOperator(f, use).matrix());
  Table spec{"spectrum", {"index", "eigenvalue"}, {}};
  Json eig = Json::array();
  for (size_t i = 0; i < spectrum.size(); ++i) {
    spec.rows.push_back({static_cast<int64_t>(i), spectrum[i]});
    eig.push_back(spectrum[i]);
  }
  return {Json{{"frame_report", Encode(r)}, {"used_scalars", use}, {"frame_operator_spectrum", eig}},
          {ReportTable("frame_report", r), spec}};
}

Outcome Dual(const Json& doc, const Params& p, const Job& job) {
  p.Allow({"use_scalars", "probes"});
  VectorFamily f = DecodeFamily(doc);
  VectorFamily g(f.dim(), f.field(), f.Weighted(UseScalars(p, f)), std::nullopt, f.labels());
  VectorFamily duals = CanonicalDual(g);
  const int probes = static_cast<int>(p.Int("probes", 100));
  if (probes < 1) throw PreconditionError("probes must be positive");
  ReconstructionCheck check = EquivalenceCCheck(g, duals, probes, job.seed);
  Table t{"duals", {"index", "component", "re", "im"}, {}};
  for (size_t n = 0; n < duals.size(); ++n) {
    for (int i = 0; i < duals.dim(); ++i) {
      t.rows.push_back({static_cast<int64_t>(n), i, duals[n](i).real(), duals[n](i).imag()});
    }
  }
  return {Json{{"frame_report", Encode(FrameBounds(g, false))},
               {"duals", Encode(duals)},
               {"reconstruction", Json{{"probes", probes},
                                       {"holds", check.holds},
                                       {"max_residual", check.max_residual}}}},
          {t}};
}

Outcome ClassifyJob(const Json& doc, const Params& p, const Job&) {
  p.Allow({});
  Classification c = Classify(DecodeFamily(doc));
  Table t{"classification", {"label", "rescaling_recommended", "lower", "upper"},
          {{ToString(c.label), c.rescaling_recommended, c.report.lower, c.report.upper}}};
  return {Encode(c), {t}};
}

ExtractOptions ExtractFrom(const Params& p, uint64_t seed) {
  ExtractOptions o;
  o.c_constant = p.Double("c", o.c_constant);
  o.search = SearchFrom(p, seed);
  o.seed = seed;
  o.replica_budget = p.Int("replica_budget", o.replica_budget);
  o.max_levels = static_cast<int>(p.Int("max_levels", o.max_levels));
  return o;
}

Table SelectionTable(const ExtractionResult& r, const std::vector<int>& index_map) {
  Table t{"selection", {"index", "multiplicity"}, {}};
  for (size_t i = 0; i < r.selected.size(); ++i) {
    int n = r.selected[i];
    t.rows.push_back({index_map.empty() ? n : index_map[n], r.multiplicities[i]});
  }
  return t;
}

Outcome ExtractJob(const Json& doc, const Params& p, const Job& job) {
  p.Allow(With({"mode", "c", "replica_budget", "max_levels"}, kSearchKeys));
  VectorFamily f = DecodeFamily(doc);
  ExtractOptions o = ExtractFrom(p, job.seed);
  const std::string mode = p.String("mode", "extract");
  if (mode == "extract") {
    ExtractionResult r = Extract(f, o);
    return {Json{{"mode", mode}, {"extraction", Encode(r)}},
            {SelectionTable(r, {}), ReportTable("output_report", r.report)}};
  }
  if (mode != "a_to_d") throw PreconditionError("mode must be extract or a_to_d");
  NonCollinearSubfamily s = EquivalenceAToD(f, o);
  Json classes = Json::array();
  for (size_t k = 0; k < s.groups.representative.size(); ++k) {
    classes.push_back(Json{{"representative", s.groups.representative[k]},
                           {"members", s.groups.members[k]},
                           {"ratios", [&] {
                              Json r = Json::array();
                              for (int n : s.groups.members[k]) {
                                r.push_back(Encode(Vec::Constant(1, s.groups.ratio[n]), Field::kComplex)[0]);
                              }
                              return r;
                            }()},
                           {"class_weight", s.class_weights[k]}});
  }
  return {Json{{"mode", mode},
               {"classes", std::move(classes)},
               {"class_weights_ok", s.class_weights_ok},
               {"indices", s.indices},
               {"pairwise_non_collinear", s.pairwise_non_collinear},
               {"extraction", Encode(s.extraction)}},
          {SelectionTable(s.extraction, s.groups.representative),
           ReportTable("output_report", s.extraction.report)}};
}

Outcome SampleJob(const Json& doc, const Params& p, const Job& job) {
  p.Allow(With({"epsilon", "gamma", "delta", "c", "sum_cap", "max_depth", "max_levels",
                "replica_budget"},
               kSearchKeys));
  OperatorInput in = DecodeOperators(doc);
  Projection m = DecodeSubspace(doc, in.dim, in.field);
  SampleOptions o;
  o.epsilon = p.Double("epsilon", o.epsilon);
  if (p.Has("gamma")) o.gamma_bound = p.Double("gamma", 0.0);
  o.delta = p.Double("delta", o.delta);
  o.c_constant = p.Double("c", o.c_constant);
  o.sum_cap = p.Double("sum_cap", o.sum_cap);
  o.max_depth = static_cast<int>(p.Int("max_depth", o.max_depth));
  o.max_levels = static_cast<int>(p.Int("max_levels", o.max_levels));
  o.replica_budget = p.Int("replica_budget", o.replica_budget);
  o.search = SearchFrom(p, job.seed);
  o.seed = job.seed;
  SampleResult r = Sample(in.ops, in.weights, m, o);
  Json decomps = Json::array(), pads = Json::array();
  for (const auto& d : r.decompositions) decomps.push_back(Encode(d));
  for (const auto& d : r.paddings) pads.push_back(Encode(d));
  const std::vector<int64_t>& mult = r.sigma.multiplicity();
  Table t{"multiplicity", {"index", "multiplicity", "weight", "cap"}, {}};
  for (size_t n = 0; n < mult.size(); ++n) {
    t.rows.push_back({static_cast<int64_t>(n), mult[n], in.weights[n],
                      std::ldexp(in.weights[n], r.certificate.beta + 1)});
  }
  return {Json{{"certificate", Encode(r.certificate)},
               {"decompositions", std::move(decomps)},
               {"paddings", std::move(pads)},
               {"index_sets", Json{{"eta", r.index_sets.eta},
                                   {"op_counts", r.index_sets.op_counts},
                                   {"pad_counts", r.index_sets.pad_counts}}},
               {"multiplicity", mult},
               {"domain_size", r.sigma.domain_size()},
               {"leaf_pad_counts", r.leaf_pad_counts},
               {"multiplicity_within", MultiplicityWithin(mult, in.weights, r.certificate.beta)}},
          {t}};
}

Outcome SelectorJob(const Json& doc, const Params& p, const Job& job) {
  p.Allow(With({"order", "delta", "c"}, kSearchKeys));
  OperatorInput in = DecodeOperators(doc);
  Mat target;
  if (doc.contains("target")) {
    target = DecodeMatrix(doc.at("target"), in.dim);
  } else {
    target = Mat::Zero(in.dim, in.dim);
    for (const PsdOperator& op : in.ops) target += op.matrix();
  }
  PsdOperator t = PsdOperator::FromMatrix(target);
  BestSelectorOptions o;
  o.search = SearchFrom(p, job.seed);
  o.delta = p.Double("delta", o.delta);
  o.c = p.Double("c", o.c);
  const int order = static_cast<int>(p.Int("order", 1));
  SelectorResult r = BestSelector(in.ops, t, order, o);
  const bool verified = VerifyCertificate(r.certificate, r.tree, in.ops, t);
  Table table{"leaves", {"leaf", "deviation", "bound"}, {}};
  for (size_t b = 0; b < r.certificate.achieved.size(); ++b) {
    table.rows.push_back({static_cast<int64_t>(b), r.certificate.achieved[b], r.certificate.bound});
  }
  return {Json{{"certificate", Encode(r.certificate)},
               {"tree", Encode(r.tree, true)},
               {"target", EncodeMatrix(target, in.field)},
               {"verified", verified}},
          {table}};
}

Outcome DensityJob(const Json& doc, const Params& p, const Job&) {
  p.Allow({"radii", "step"});
  std::vector<PointSet> sets = DecodePointSets(doc);
  double extent = sets[0].extent();
  for (const PointSet& s : sets) extent = std::min(extent, s.extent());
  std::vector<double> radii = p.Has("radii") ? p.DoubleList("radii") : std::vector<double>{extent / 4};
  const double step = p.Double("step", 0.0);
  Json per_set = Json::array();
  Table t{"density", {"set", "radius", "step", "centers", "min_count", "max_count", "lower", "upper"}, {}};
  auto add_rows = [&t](const std::string& name, const DensityEstimate& d) {
    for (const WindowCurvePoint& w : d.per_window) {
      t.rows.push_back({name, w.radius, w.step, w.centers, w.min_count, w.max_count, w.lower, w.upper});
    }
  };
  for (size_t i = 0; i < sets.size(); ++i) {
    DensityEstimate d = Density(sets[i], radii, step);
    Separation sep = UniformlyDiscrete(sets[i]);
    add_rows(std::to_string(i), d);
    per_set.push_back(Json{{"density", Encode(d)},
                           {"uniformly_discrete", sep.uniformly_discrete},
                           {"separation", std::isfinite(sep.delta) ? Json(sep.delta) : Json(nullptr)}});
  }
  Json out{{"sets", std::move(per_set)}};
  if (sets.size() > 1) {
    DensityEstimate u = UnionDensity(sets, radii, step);
    add_rows("union", u);
    out["union"] = Encode(u);
  }
  return {out, {t}};
}

Outcome GaborJob(const Json& doc, const Params& p, const Job&) {
  p.Allow({});
  GaborSpec spec = DecodeGabor(doc);
  VectorFamily f = GaborFamily(spec);
  FrameReport r = FrameBounds(f, false);
  Mat s = FrameOperator(f, false).matrix();
  const double mean = s.trace().real() / s.rows();
  const double tight_defect = OperatorNorm(s - mean * Mat::Identity(s.rows(), s.cols()));
  Json shifts = Json::array();
  for (const Shift& x : spec.shifts) shifts.push_back(Json::array({x.first, x.second}));
  return {Json{{"frame_report", Encode(r)},
               {"window_norm_squared", spec.window.samples().squaredNorm()},
               {"mean_eigenvalue", mean},
               {"tight_defect", tight_defect},
               {"shifts", std::move(shifts)}},
          {ReportTable("frame_report", r)}};
}

Outcome Construct45(const Json& doc, const Params& p, const Job&) {
  p.Allow({"K", "profile", "density_radius", "density_step"});
  GaborSpec spec = DecodeGabor(doc);
  std::vector<int> k;
  if (p.Has("K")) {
    k = p.IntList("K");
  } else if (doc.contains("K")) {
    if (!doc.at("K").is_array()) throw ParseError("K must be an array of integers");
    for (const Json& x : doc.at("K")) {
      if (!x.is_number_integer()) throw ParseError("K must be an array of integers");
      k.push_back(x.get<int>());
    }
  } else {
    throw PreconditionError("K is required");
  }
  ClusterOptions o;
  std::string profile = doc.contains("profile") && doc.at("profile").is_string()
                            ? doc.at("profile").get<std::string>()
                            : ToString(o.profile);
  o.profile = ParseBudgetProfile(p.String("profile", profile));
  if (doc.contains("budgets")) {
    o.budgets.emplace();
    for (const Json& x : doc.at("budgets")) {
      if (!x.is_number()) throw ParseError("budgets must be numbers");
      o.budgets->push_back(x.get<double>());
    }
  }
  o.density_radius = p.Double("density_radius", o.density_radius);
  o.density_step = p.Double("density_step", o.density_step);
  ClusterResult r = ClusteredGabor(spec, k, o);
  Json shifts = Json::array();
  Table t{"shifts", {"a", "b", "owner", "functional_norm"}, {}};
  for (size_t i = 0; i < r.shifts.size(); ++i) {
    shifts.push_back(Json::array({r.shifts[i].first, r.shifts[i].second, r.owner[i]}));
  }
  for (size_t i = 0; i < r.shifts.size(); ++i) {
    t.rows.push_back({r.shifts[i].first, r.shifts[i].second, r.owner[i],
                      r.report.functional_norms[i]});
  }
  return {Json{{"profile", ToString(o.profile)},
               {"report", Encode(r.report)},
               {"shifts", std::move(shifts)}},
          {t}};
}

Outcome Dispatch(const Job& job, const Json& doc) {
  Params p(job.params);
  const std::string& c = job.command;
  if (c == "analyze") return Analyze(doc, p, job);
  if (c == "dual") return Dual(doc, p, job);
  if (c == "classify") return ClassifyJob(doc, p, job);
  if (c == "extract") return ExtractJob(doc, p, job);
  if (c == "sample") return SampleJob(doc, p, job);
  if (c == "selector") return SelectorJob(doc, p, job);
  if (c == "density") return DensityJob(doc, p, job);
  if (c == "gabor") return GaborJob(doc, p, job);
  if (c == "construct45") return Construct45(doc, p, job);
  throw PreconditionError("unknown command: " + c);
}

std::string CsvCell(const Json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  if (v.is_number_float() && !std::isfinite(v.get<double>())) return "";
  return v.dump();
}

void WriteCsv(const std::string& path, const std::vector<Table>& tables) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open CSV output: " + path);
  for (size_t i = 0; i < tables.size(); ++i) {
    if (i) out << '\n';
    out << "# " << tables[i].name << '\n';
    for (size_t j = 0; j < tables[i].columns.size(); ++j) out << (j ? "," : "") << tables[i].columns[j];
    out << '\n';
    for (const auto& row : tables[i].rows) {
      for (size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << CsvCell(row[j]);
      out << '\n';
    }
  }
}

Json Versions() {
  return Json{{"framex", kVersion},
              {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                            "." + std::to_string(EIGEN_MINOR_VERSION)},
              {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

}  // namespace

int Run(const Job& job) {
  const auto start = std::chrono::steady_clock::now();
  Json report;
  report["command"] = job.command;
  report["versions"] = Versions();
  report["seed"] = job.seed;
  report["params"] = job.params;
  int code = kExitOk;
  std::vector<Table> tables;
  try {
    Json doc = ReadJsonFile(job.input_path);
    report["input"] = Json{{"path", job.input_path}, {"document", doc}};
    try {
      Outcome o = Dispatch(job, doc);
      report["result"] = std::move(o.result);
      tables = std::move(o.tables);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed input: ") + e.what());
    }
  } catch (const PreconditionError& e) {
    code = kExitPrecondition;
    report["error"] = Json{{"kind", "precondition"}, {"message", e.what()}};
  } catch (const ParseError& e) {
    code = kExitParse;
    report["error"] = Json{{"kind", "parse"}, {"message", e.what()}};
  } catch (const BudgetError& e) {
    code = kExitBudget;
    report["error"] = Json{{"kind", "budget"}, {"message", e.what()}};
  } catch (const std::exception& e) {
    code = kExitInternal;
    report["error"] = Json{{"kind", "internal"}, {"message", e.what()}};
  }
  report["exit_code"] = code;
  if (job.timestamp) {
    report["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  std::ofstream out(job.output_path);
  if (!out) {
    std::cerr << "framex: cannot write report to " << job.output_path << '\n';
    return code == kExitOk ? kExitInternal : code;
  }
  out << report.dump(2) << '\n';
  if (report.contains("error")) std::cerr << "framex: " << report["error"]["message"].get<std::string>() << '\n';
  if (code == kExitOk && !job.csv_path.empty()) {
    try {
      WriteCsv(job.csv_path, tables);
    } catch (const Error& e) {
      std::cerr << "framex: " << e.what() << '\n';
      return kExitParse;
    }
  }
  return code;
}

}  // namespace framex::tools
