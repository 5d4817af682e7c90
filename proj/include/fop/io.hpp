#pragma once

#include "fop/euler.hpp"

#include "json.hpp"

#include <fstream>
#include <iomanip>

namespace fop {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "1.0.0";

// ---- scalars -------------------------------------------------------------

inline json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(), "complex numbers are [re, im] pairs");
  return cplx(j[0].get<double>(), j[1].get<double>());
}

inline json vector_to_json(const CVec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_to_json(v(i)));
  return a;
}

inline CVec vector_from_json(const json& j) {
  require(j.is_array(), "vector must be an array");
  CVec v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

inline json matrix_to_json(const CMat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vector_to_json(m.row(r).transpose()));
  return rows;
}

inline CMat matrix_from_json(const json& j) {
  require(j.is_array() && !j.empty(), "matrix must be a nonempty array of rows");
  const size_t cols = j[0].size();
  CMat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (size_t r = 0; r < j.size(); ++r) {
    require(j[r].is_array() && j[r].size() == cols, "matrix rows must have equal length");
    for (size_t c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(j[r][c]);
  }
  return m;
}

/// Non-finite reals are written as the strings "inf" / "-inf" / "nan".
inline json real_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline double real_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  require(j.is_string(), "expected a number");
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  throw ValidationError("expected a number, got \"" + s + "\"");
}

// ---- groups and representations -----------------------------------------

inline json group_spec_to_json(const GroupSpec& g) {
  switch (g.kind) {
    case GroupSpec::Kind::cyclic: return {{"kind", "cyclic"}, {"n", g.n}};
    case GroupSpec::Kind::product: return {{"kind", "product"}, {"orders", g.orders}};
    case GroupSpec::Kind::permutation: return {{"kind", "perm"}, {"degree", g.degree}, {"generators", g.generators}};
    default: throw ValidationError("table groups have no file representation");
  }
}

inline GroupSpec group_spec_from_json(const json& j) {
  require(j.is_object() && j.contains("kind"), "group spec needs a kind");
  const auto kind = j.at("kind").get<std::string>();
  try {
    if (kind == "cyclic") return GroupSpec::cyclic(j.at("n").get<int>());
    if (kind == "product") return GroupSpec::product(j.at("orders").get<std::vector<int>>());
    if (kind == "perm" || kind == "permutation")
      return GroupSpec::permutation(j.at("degree").get<int>(), j.at("generators").get<std::vector<std::vector<int>>>());
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed group spec: ") + e.what());
  }
  throw ValidationError("unknown group kind \"" + kind + "\"");
}

/// Weights: one entry per coordinate, an integer (cyclic groups) or a list
/// with one integer per cyclic factor.
inline json rep_spec_to_json(const RepSpec& r) {
  if (r.kind == RepSpec::Kind::weights) return {{"kind", "weights"}, {"weights", r.weights}};
  json gens = json::array();
  for (const auto& m : r.generators) gens.push_back(matrix_to_json(m));
  return {{"kind", "matrices"}, {"generators", gens}};
}

inline RepSpec rep_spec_from_json(const json& j) {
  require(j.is_object() && j.contains("kind"), "representation spec needs a kind");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "weights") {
    require(j.contains("weights") && j.at("weights").is_array(), "weights must be an array");
    std::vector<std::vector<int>> w;
    for (const auto& e : j.at("weights")) {
      if (e.is_number_integer()) w.push_back({e.get<int>()});
      else {
        require(e.is_array(), "each weight is an integer or a list of integers");
        w.push_back(e.get<std::vector<int>>());
      }
    }
    return RepSpec::from_weights(std::move(w));
  }
  if (kind == "matrices") {
    require(j.contains("generators") && j.at("generators").is_array(), "generators must be an array of matrices");
    std::vector<CMat> m;
    for (const auto& g : j.at("generators")) m.push_back(matrix_from_json(g));
    return RepSpec::from_matrices(std::move(m));
  }
  throw ValidationError("unknown representation kind \"" + kind + "\"");
}

// ---- polynomial maps -----------------------------------------------------

/// Records {exponents, target_coord, coeff} for the nonzero coefficients, in
/// graded-lex order with the target coordinate varying fastest.
inline json polymap_to_json(const PolyMap& p) {
  json a = json::array();
  const auto& b = p.basis();
  for (int i = 0; i < b.size(); ++i)
    for (int k = 0; k < p.ntarget; ++k)
      if (p.coeffs(i, k) != cplx(0.0))
        a.push_back({{"exponents", b.exponents(i)}, {"target_coord", k}, {"coeff", complex_to_json(p.coeffs(i, k))}});
  return a;
}

inline PolyMap polymap_from_json(const json& j, int nvars, int ntarget, int min_degree = 0) {
  require(j.is_array(), "polynomial map must be an array of records");
  int d = min_degree;
  for (const auto& r : j) {
    require(r.is_object() && r.contains("exponents") && r.contains("coeff"), "record needs exponents and coeff");
    auto e = r.at("exponents").get<std::vector<int>>();
    require(static_cast<int>(e.size()) == nvars, "exponent tuple length must equal dim V");
    int s = 0;
    for (int x : e) {
      require(x >= 0, "exponents must be nonnegative");
      s += x;
    }
    d = std::max(d, s);
  }
  PolyMap p(nvars, ntarget, d);
  for (const auto& r : j) {
    const int k = r.value("target_coord", 0);
    require(k >= 0 && k < ntarget, "target_coord out of range");
    p.coeffs(p.basis().index_of(r.at("exponents").get<std::vector<int>>()), k) += complex_from_json(r.at("coeff"));
  }
  return p;
}

// ---- problem file ----------------------------------------------------------

struct SectionSpec {
  bool split = false;  // explicit ring/normal parts
  PolyMap full;
  PolyMap ring;
  PolyMap normal;
  std::vector<LiftTerm> lift;

  bool operator==(const SectionSpec& o) const {
    if (split != o.split || lift.size() != o.lift.size()) return false;
    for (size_t i = 0; i < lift.size(); ++i)
      if (!(lift[i].coefficient == o.lift[i].coefficient) || !(lift[i].direction == o.lift[i].direction)) return false;
    return split ? (ring == o.ring && normal == o.normal) : full == o.full;
  }
};

struct ProblemOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> solver_seed;
  std::optional<double> magnitude;
  std::optional<int> threads;
  std::map<std::string, double> tolerances;  // recorded only; thresholds are fixed
  bool operator==(const ProblemOptions&) const = default;
};

struct ProblemFile {
  std::string name;
  GroupSpec group;
  RepSpec v;
  RepSpec w;
  std::optional<std::pair<CMat, CMat>> w_split;
  int degree = 0;
  bool degree_override = false;
  SectionSpec section;
  ProblemOptions options;

  bool operator==(const ProblemFile& o) const {
    auto rep_eq = [](const RepSpec& a, const RepSpec& b) {
      if (a.kind != b.kind || a.weights != b.weights || a.generators.size() != b.generators.size()) return false;
      for (size_t i = 0; i < a.generators.size(); ++i)
        if (a.generators[i] != b.generators[i]) return false;
      return true;
    };
    bool split_eq = w_split.has_value() == o.w_split.has_value() &&
                    (!w_split || (w_split->first == o.w_split->first && w_split->second == o.w_split->second));
    return name == o.name && group == o.group && rep_eq(v, o.v) && rep_eq(w, o.w) && split_eq && degree == o.degree &&
           degree_override == o.degree_override && section == o.section && options == o.options;
  }
};

inline int rep_dim(const RepSpec& r) {
  if (r.kind == RepSpec::Kind::weights) return static_cast<int>(r.weights.size());
  require(!r.generators.empty(), "matrix representation needs generators");
  return static_cast<int>(r.generators.front().rows());
}

inline ProblemFile problem_from_json(const json& j) {
  require(j.is_object(), "problem file must be a JSON object");
  for (const char* key : {"group", "V", "W", "degree", "section"})
    require(j.contains(key), std::string("problem file is missing \"") + key + "\"");
  ProblemFile p;
  p.name = j.value("name", "");
  p.group = group_spec_from_json(j.at("group"));
  p.v = rep_spec_from_json(j.at("V"));
  p.w = rep_spec_from_json(j.at("W"));
  require(j.at("degree").is_number_integer(), "degree must be an integer");
  p.degree = j.at("degree").get<int>();
  p.degree_override = j.value("degree_override", false);
  if (j.at("W").contains("split")) {
    const auto& s = j.at("W").at("split");
    p.w_split = std::make_pair(matrix_from_json(s.at("ring")), matrix_from_json(s.at("normal")));
  }
  const int nv = rep_dim(p.v), nw = rep_dim(p.w);
  const auto& sec = j.at("section");
  if (sec.is_array()) {
    p.section.full = polymap_from_json(sec, nv, nw, p.degree);
  } else {
    require(sec.is_object(), "section must be a record list or an object with ring/normal parts");
    p.section.split = true;
    p.section.ring = polymap_from_json(sec.value("ring", json::array()), nv, nw, p.degree);
    p.section.normal = polymap_from_json(sec.value("normal", json::array()), nv, nw, p.degree);
    for (const auto& t : sec.value("lift", json::array()))
      p.section.lift.push_back(LiftTerm{polymap_from_json(t.at("coefficient"), nv, 1), polymap_from_json(t.at("direction"), nv, nw)});
  }
  if (j.contains("options")) {
    const auto& o = j.at("options");
    if (o.contains("seed")) p.options.seed = o.at("seed").get<std::uint64_t>();
    if (o.contains("solver_seed")) p.options.solver_seed = o.at("solver_seed").get<std::uint64_t>();
    if (o.contains("magnitude")) p.options.magnitude = o.at("magnitude").get<double>();
    if (o.contains("threads")) p.options.threads = o.at("threads").get<int>();
    if (o.contains("tolerances")) p.options.tolerances = o.at("tolerances").get<std::map<std::string, double>>();
  }
  return p;
}

inline json problem_to_json(const ProblemFile& p) {
  json j;
  if (!p.name.empty()) j["name"] = p.name;
  j["group"] = group_spec_to_json(p.group);
  j["V"] = rep_spec_to_json(p.v);
  j["W"] = rep_spec_to_json(p.w);
  if (p.w_split) j["W"]["split"] = {{"ring", matrix_to_json(p.w_split->first)}, {"normal", matrix_to_json(p.w_split->second)}};
  j["degree"] = p.degree;
  if (p.degree_override) j["degree_override"] = true;
  if (!p.section.split) {
    j["section"] = polymap_to_json(p.section.full);
  } else {
    json s = {{"ring", polymap_to_json(p.section.ring)}, {"normal", polymap_to_json(p.section.normal)}};
    if (!p.section.lift.empty()) {
      json l = json::array();
      for (const auto& t : p.section.lift)
        l.push_back({{"coefficient", polymap_to_json(t.coefficient)}, {"direction", polymap_to_json(t.direction)}});
      s["lift"] = l;
    }
    j["section"] = s;
  }
  json o = json::object();
  if (p.options.seed) o["seed"] = *p.options.seed;
  if (p.options.solver_seed) o["solver_seed"] = *p.options.solver_seed;
  if (p.options.magnitude) o["magnitude"] = *p.options.magnitude;
  if (p.options.threads) o["threads"] = *p.options.threads;
  if (!p.options.tolerances.empty()) o["tolerances"] = p.options.tolerances;
  if (!o.empty()) j["options"] = o;
  return j;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("invalid JSON in " + path + ": " + e.what());
  }
}

/// A problem file turned into a chart plus a section.
struct LoadedProblem {
  GroupPtr group;
  ChartProblem chart;
  SectionDatum section;
  EulerOptions options;
};

inline LoadedProblem load_problem(const ProblemFile& f) {
  LoadedProblem l;
  l.group = make_group(f.group);
  auto v = make_rep(l.group, f.v);
  auto w = make_rep(l.group, f.w);
  l.chart = make_chart(v, w, f.degree, f.degree_override, f.w_split);
  if (f.section.split) {
    l.section.ring = f.section.ring;
    l.section.normal = f.section.normal;
    l.section.lift = f.section.lift;
  } else {
    l.section = split_section(l.chart, f.section.full);
  }
  validate_section(l.chart, l.section);
  if (f.options.seed) l.options.seed = *f.options.seed;
  if (f.options.solver_seed) l.options.solver_seed = *f.options.solver_seed;
  if (f.options.magnitude) l.options.magnitude = *f.options.magnitude;
  if (f.options.threads) l.options.threads = *f.options.threads;
  return l;
}

// ---- solver files ----------------------------------------------------------

inline PolySystem system_from_json(const json& j) {
  require(j.is_object() && j.contains("nvars") && j.contains("equations"), "system needs nvars and equations");
  PolySystem s;
  s.nvars = j.at("nvars").get<int>();
  require(s.nvars >= 1, "nvars must be positive");
  for (const auto& e : j.at("equations")) s.equations.push_back(polymap_from_json(e, s.nvars, 1));
  return s;
}

inline json system_to_json(const PolySystem& s) {
  json eqs = json::array();
  for (const auto& e : s.equations) eqs.push_back(polymap_to_json(e));
  return {{"nvars", s.nvars}, {"equations", eqs}};
}

inline json solutions_to_json(const SolutionSet& s) {
  json pts = json::array();
  for (const auto& p : s.points)
    pts.push_back({{"x", vector_to_json(p.x)}, {"residual", p.residual}, {"multiplicity", p.multiplicity}, {"singular", p.singular}});
  return {{"seed", s.seed}, {"paths", s.paths}, {"diverged", s.diverged}, {"stalled", s.stalled}, {"retracks", s.retracks}, {"points", pts}};
}

inline SolutionSet solutions_from_json(const json& j) {
  SolutionSet s;
  s.seed = j.at("seed").get<std::uint64_t>();
  s.paths = j.at("paths").get<int>();
  s.diverged = j.at("diverged").get<int>();
  s.stalled = j.value("stalled", 0);
  s.retracks = j.value("retracks", 0);
  for (const auto& p : j.at("points"))
    s.points.push_back(Solution{vector_from_json(p.at("x")), p.at("residual").get<double>(), p.at("multiplicity").get<int>(),
                                p.at("singular").get<bool>()});
  return s;
}

// ---- report file -----------------------------------------------------------

/// 64-bit FNV-1a, hex encoded.
inline std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

/// Digest of the canonical (compact, key-sorted) form of the input.
inline std::string input_digest(const json& input) { return fnv1a_hex(input.dump()); }

inline json certificate_to_json(const TransversalityCertificate& c) {
  return {{"stratum_order", c.h.order()},
          {"residual", real_to_json(c.residual)},
          {"scale", real_to_json(c.scale)},
          {"margin_ring", real_to_json(c.margin_ring)},
          {"margin_normal", real_to_json(c.margin_normal)},
          {"pass", c.pass},
          {"sign", c.sign},
          {"detail", c.detail}};
}

inline json report_to_json(const EulerReport& r) {
  json strata = json::array();
  for (const auto& s : r.strata)
    strata.push_back({{"class_id", s.class_id},
                      {"subgroup", s.h.members},
                      {"order", s.h.order()},
                      {"type", s.label},
                      {"v_mult", s.type.v_mult},
                      {"w_mult", s.type.w_mult},
                      {"dim_vh", s.dim_vh},
                      {"dim_wh", s.dim_wh},
                      {"n_gamma", s.n_gamma},
                      {"empty", s.empty},
                      {"chi", s.count},
                      {"paths", s.paths},
                      {"diverged", s.diverged}});
  json types = json::array();
  for (const auto& t : r.types)
    types.push_back({{"type", t.label}, {"order", t.type.group->order()}, {"n_gamma", t.n_gamma}, {"chi", t.count}, {"classes", t.class_ids}});
  json aggs = json::array();
  for (const auto& a : r.aggregates)
    aggs.push_back({{"type", a.label}, {"order", a.type.group->order()}, {"diff", a.type.diff}, {"chi", a.count}});
  json orbits = json::array();
  for (const auto& o : r.orbits)
    orbits.push_back({{"point", vector_to_json(o.point)},
                      {"stabilizer", o.stabilizer.members},
                      {"class_id", o.class_id},
                      {"orbit_size", o.orbit_size},
                      {"multiplicity", o.multiplicity},
                      {"sign", o.sign},
                      {"certificate", certificate_to_json(o.certificate)}});
  json audit = json::array();
  for (const auto& a : r.audit.rows)
    audit.push_back({{"class_id", a.class_id},
                     {"order", a.order},
                     {"dim_vh", a.dim_vh},
                     {"dim_wh", a.dim_wh},
                     {"n_gamma", a.n_gamma},
                     {"empty", a.empty},
                     {"generically_empty", a.generically_empty},
                     {"deeper", a.deeper},
                     {"boundary_bound", a.boundary_bound},
                     {"boundary_vacuous", a.boundary_vacuous},
                     {"min_distance_to_deeper", real_to_json(a.min_distance_to_deeper)},
                     {"pass", a.pass}});
  return {{"strata", strata},
          {"types", types},
          {"aggregates", aggs},
          {"orbits", orbits},
          {"audit", {{"rows", audit}, {"pass", r.audit.pass}}},
          {"perturbation",
           {{"perturbed", r.perturbed},
            {"seed", r.seed},
            {"seed_used", r.seed_used},
            {"magnitude", r.magnitude},
            {"attempts", r.attempts},
            {"halvings", r.halvings},
            {"stable", r.stable}}},
          {"section", {{"ring", polymap_to_json(r.section.ring)}, {"normal", polymap_to_json(r.section.normal)}}},
          {"solver", {{"paths", r.total_paths}, {"diverged", r.total_diverged}}},
          {"consistency",
           {{"applicable", r.consistency_applicable},
            {"sum", r.consistency_sum},
            {"oracle_count", r.oracle_count},
            {"holds", r.consistency_holds}}},
          {"warnings", r.warnings}};
}

struct ReportFile {
  std::string tool = "fop";
  std::string version = kToolVersion;
  std::string input_digest;
  json report;

  bool operator==(const ReportFile&) const = default;
};

inline json report_file_to_json(const ReportFile& f) {
  return {{"tool", f.tool}, {"version", f.version}, {"input_digest", f.input_digest}, {"report", f.report}};
}

inline ReportFile report_file_from_json(const json& j) {
  require(j.is_object() && j.contains("report") && j.contains("input_digest"), "report file needs report and input_digest");
  ReportFile f;
  f.tool = j.value("tool", "fop");
  f.version = j.value("version", "");
  f.input_digest = j.at("input_digest").get<std::string>();
  f.report = j.at("report");
  return f;
}

inline ReportFile make_report_file(const json& input, const EulerReport& r) {
  ReportFile f;
  f.input_digest = input_digest(input);
  f.report = report_to_json(r);
  return f;
}

}  // namespace fop
