// fop: command-line driver for equivariant Euler counts.

#include "fop/fop.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>

namespace {

using fop::json;

struct Flags {
  std::string file;
  std::optional<std::uint64_t> seed;
  std::optional<double> magnitude;
  std::optional<int> degree_override;
  std::optional<int> threads;
  bool json_out = false;
  bool pretty = false;
  std::string output;
};

void emit(const json& j, const Flags& f) { std::cout << (f.pretty ? j.dump(2) : j.dump()) << "\n"; }

// Seed precedence: problem file < FOP_SEED < --seed.
std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("FOP_SEED");
  if (!s || !*s) return std::nullopt;
  try {
    size_t used = 0;
    auto v = std::stoull(s, &used, 0);
    if (used != std::string(s).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw fop::ValidationError(std::string("FOP_SEED is not an unsigned integer: ") + s);
  }
}

struct Loaded {
  json input;
  fop::ProblemFile file;
  fop::LoadedProblem problem;
};

Loaded load(const Flags& f) {
  Loaded l;
  l.input = fop::read_json_file(f.file);
  l.file = fop::problem_from_json(l.input);
  if (f.degree_override) {
    l.file.degree = *f.degree_override;
    l.file.degree_override = true;
    std::cerr << "warning: degree overridden to " << *f.degree_override << "\n";
  }
  if (auto s = env_seed()) l.file.options.seed = *s;
  if (f.seed) l.file.options.seed = *f.seed;
  if (f.magnitude) l.file.options.magnitude = *f.magnitude;
  if (f.threads) l.file.options.threads = *f.threads;
  l.problem = fop::load_problem(l.file);
  for (const auto& w : l.problem.chart.warnings) std::cerr << "warning: " << w << "\n";
  return l;
}

int cmd_basis(const Flags& f) {
  auto l = load(f);
  const auto& c = l.problem.chart;
  auto b = fop::equivariant_basis(c.v, c.w, c.degree);
  if (f.json_out) {
    json rows = json::array();
    for (int i = 0; i < b.size(); ++i)
      rows.push_back({{"index", i}, {"degree", b.element_degree[i]}, {"map", fop::polymap_to_json(b.elements[i])}});
    emit({{"degree", c.degree}, {"per_degree", b.per_degree}, {"elements", rows}}, f);
    return 0;
  }
  std::cout << "equivariant basis, degree <= " << c.degree << ", " << b.size() << " elements\n";
  for (int i = 0; i < b.size(); ++i) std::cout << "  " << i << "  deg " << b.element_degree[i] << "  " << fop::to_string(b.elements[i]) << "\n";
  return 0;
}

json stratum_info_json(const fop::ZStratumInfo& z) {
  return {{"order", z.h.order()},      {"subgroup", z.h.members}, {"dim_poly", z.dim_poly},         {"dim_vh", z.dim_ring_v},
          {"dim_wh", z.dim_ring_w},    {"dim_c", z.dim_c},        {"empty", z.empty},               {"regular", z.regularity_verified},
          {"margin", fop::real_to_json(z.margin)}, {"observed_rank", z.observed_rank}, {"warnings", z.warnings}};
}

json audit_json(const fop::AuditTable& t) {
  json rows = json::array();
  for (const auto& a : t.rows)
    rows.push_back({{"class_id", a.class_id},
                    {"order", a.order},
                    {"dim_vh", a.dim_vh},
                    {"dim_wh", a.dim_wh},
                    {"n_gamma", a.n_gamma},
                    {"empty", a.empty},
                    {"generically_empty", a.generically_empty},
                    {"deeper", a.deeper},
                    {"boundary_bound", a.boundary_bound},
                    {"boundary_vacuous", a.boundary_vacuous},
                    {"min_distance_to_deeper", fop::real_to_json(a.min_distance_to_deeper)},
                    {"pass", a.pass}});
  return {{"rows", rows}, {"pass", t.pass}};
}

void print_audit(const fop::AuditTable& t) {
  std::cout << "dimension audit (" << (t.pass ? "pass" : "FAIL") << ")\n";
  std::cout << "  class  |H|  dimV^H  dimW^H  n   empty  deeper-bound\n";
  for (const auto& a : t.rows) {
    std::cout << "  " << std::setw(5) << a.class_id << "  " << std::setw(3) << a.order << "  " << std::setw(6) << a.dim_vh << "  " << std::setw(6)
              << a.dim_wh << "  " << std::setw(2) << a.n_gamma << "  " << std::setw(5) << (a.empty ? "yes" : "no") << "  "
              << (a.boundary_vacuous ? "vacuous" : std::to_string(a.boundary_bound)) << (a.pass ? "" : "  FAIL") << "\n";
  }
}

int cmd_strata(const Flags& f) {
  auto l = load(f);
  const auto& c = l.problem.chart;
  json infos = json::array();
  std::vector<fop::ZStratumInfo> zs;
  for (const auto& st : fop::action_strata(c.v)) {
    zs.push_back(fop::z_stratum_info(c.v, c.w, c.degree, st.h, c.degree_override, l.problem.options.seed));
    infos.push_back(stratum_info_json(zs.back()));
  }
  auto audit = fop::dimension_audit(c);
  if (f.json_out) {
    emit({{"strata", infos}, {"audit", audit_json(audit)}}, f);
    return 0;
  }
  std::cout << "strata of the evaluation variety, degree " << c.degree << "\n";
  std::cout << "  |H|  dimPoly  dimV^H  dimW^H  dimC  empty  regular  margin\n";
  for (const auto& z : zs)
    std::cout << "  " << std::setw(3) << z.h.order() << "  " << std::setw(7) << z.dim_poly << "  " << std::setw(6) << z.dim_ring_v << "  "
              << std::setw(6) << z.dim_ring_w << "  " << std::setw(4) << z.dim_c << "  " << std::setw(5) << (z.empty ? "yes" : "no") << "  "
              << std::setw(7) << (z.regularity_verified ? "yes" : "no") << "  " << z.margin << "\n";
  print_audit(audit);
  return 0;
}

int cmd_solve(const Flags& f) {
  auto sys = fop::system_from_json(fop::read_json_file(f.file));
  fop::SolveOptions so;
  if (auto s = env_seed()) so.seed = *s;
  if (f.seed) so.seed = *f.seed;
  if (f.threads) so.threads = *f.threads;
  emit(fop::solutions_to_json(fop::solve_system(sys, so)), f);
  return 0;
}

void print_report(const fop::EulerReport& r) {
  std::cout << "Euler counts per stratum\n";
  std::cout << "  |H|  type                          n   chi\n";
  for (const auto& s : r.strata)
    std::cout << "  " << std::setw(3) << s.h.order() << "  " << std::left << std::setw(28) << s.label << std::right << "  " << std::setw(2) << s.n_gamma << "  "
              << std::setw(4) << s.count << (s.empty ? "  (empty)" : "") << "\n";
  std::cout << "stabilized types\n";
  for (const auto& a : r.aggregates) std::cout << "  " << a.label << ": " << a.count << "\n";
  std::cout << "zero orbits: " << r.orbits.size() << ", solver paths " << r.total_paths << " (" << r.total_diverged << " diverged)\n";
  std::cout << "perturbation: " << (r.perturbed ? "seed " + std::to_string(r.seed_used) : std::string("none")) << ", magnitude " << r.magnitude
            << ", halvings " << r.halvings << (r.stable ? "" : ", UNSTABLE") << "\n";
  if (r.consistency_applicable)
    std::cout << "consistency: sum " << r.consistency_sum << " vs oracle " << r.oracle_count << (r.consistency_holds ? " (holds)" : " (FAILS)") << "\n";
  for (const auto& w : r.warnings) std::cout << "warning: " << w << "\n";
}

int cmd_euler(const Flags& f) {
  auto l = load(f);
  auto report = fop::euler_counts(l.problem.chart, l.problem.section, l.problem.options);
  auto file = fop::make_report_file(l.input, report);
  const json j = fop::report_file_to_json(file);
  if (!f.output.empty()) {
    std::ofstream out(f.output);
    if (!out) throw fop::ValidationError("cannot write " + f.output);
    out << j.dump(2) << "\n";
  }
  if (f.json_out) emit(j, f);
  else print_report(report);
  return report.stable && report.consistency_holds ? 0 : 3;
}

int cmd_audit(const Flags& f) {
  auto l = load(f);
  auto report = fop::euler_counts(l.problem.chart, l.problem.section, l.problem.options);
  json certs = json::array();
  for (const auto& o : report.orbits) certs.push_back(fop::certificate_to_json(o.certificate));
  if (f.json_out) {
    emit({{"audit", audit_json(report.audit)}, {"certificates", certs}}, f);
  } else {
    print_audit(report.audit);
    std::cout << "certificates\n";
    for (const auto& o : report.orbits)
      std::cout << "  |H|=" << o.stabilizer.order() << "  ring " << o.certificate.margin_ring << "  normal " << o.certificate.margin_normal << "  "
                << o.certificate.detail << "\n";
  }
  return report.audit.pass ? 0 : 3;
}

int cmd_selftest() { return fop::acceptance::run_all(std::cout) == 0 ? 0 : 1; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equivariant transversality and orbifold Euler counts over a point chart"};
  app.require_subcommand(1);
  Flags f;
  auto add_common = [&](CLI::App* c, bool problem) {
    c->add_option("file", f.file, problem ? "problem file (JSON)" : "polynomial system (JSON)")->required();
    c->add_option("--seed", f.seed, "perturbation / solver seed (overrides FOP_SEED)");
    c->add_option("--threads", f.threads, "worker threads for path tracking")->check(CLI::Range(1, 256));
    c->add_flag("--json", f.json_out, "emit JSON");
    c->add_flag("--pretty", f.pretty, "indent JSON output");
    if (problem) {
      c->add_option("--magnitude", f.magnitude, "relative perturbation magnitude (0, 0.1]");
      c->add_option("--degree-override", f.degree_override, "use degree D even below |G| (with a warning)");
    }
  };
  auto* basis = app.add_subcommand("basis", "list the equivariant polynomial basis");
  auto* strata = app.add_subcommand("strata", "stratum dimensions and dimension audit");
  auto* solve = app.add_subcommand("solve", "solve a polynomial system by homotopy continuation");
  auto* euler = app.add_subcommand("euler", "per-stratum Euler counts");
  auto* audit = app.add_subcommand("audit", "dimension audit and certificates of the counted zeros");
  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  for (auto* c : {basis, strata, euler, audit}) add_common(c, true);
  add_common(solve, false);
  euler->add_option("-o,--output", f.output, "also write the report file here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (*basis) return cmd_basis(f);
    if (*strata) return cmd_strata(f);
    if (*solve) return cmd_solve(f);
    if (*euler) return cmd_euler(f);
    if (*audit) return cmd_audit(f);
    if (*selftest) return cmd_selftest();
  } catch (const fop::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fop::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
