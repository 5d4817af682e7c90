#pragma once

#include "fop/psolve.hpp"
#include "fop/strata.hpp"

namespace fop {

struct EulerOptions {
  std::uint64_t seed = kLibrarySeed;  // perturbation seed
  std::uint64_t solver_seed = kSolverSeed;
  double magnitude = 1e-2;
  int threads = 1;
  bool perturb = true;
};

struct ZeroOrbit {
  CVec point;
  Subgroup stabilizer;
  int class_id = 0;
  int orbit_size = 1;
  int multiplicity = 1;  // solver cluster size; > 1 marks a degenerate zero
  IsotropyType type;
  TransversalityCertificate certificate;
  int sign = 0;
};

struct StratumSolve {
  int class_id = 0;
  int paths = 0;
  int diverged = 0;
};

struct ZeroSet {
  std::vector<ZeroOrbit> orbits;
  std::vector<StratumSolve> solves;

  bool all_certified() const {
    for (const auto& o : orbits)
      if (!o.certificate.pass) return false;
    return true;
  }
};

namespace detail {

inline double orbit_distance(const UnitaryRep& v, const CVec& x, const CVec& y) {
  double d = std::numeric_limits<double>::infinity();
  for (int g = 0; g < v.group().order(); ++g) d = std::min(d, (v.matrix(g) * x - y).norm());
  return d;
}

// Random square combinations of an overdetermined list of equations.
inline PolySystem square_up(const std::vector<PolyMap>& eqs, int n, RandomStream& rng) {
  PolySystem s;
  s.nvars = n;
  if (static_cast<int>(eqs.size()) == n) {
    s.equations = eqs;
    return s;
  }
  int deg = 0;
  for (const auto& e : eqs) deg = std::max(deg, e.degree);
  for (int i = 0; i < n; ++i) {
    PolyMap c(n, 1, deg);
    for (const auto& e : eqs) c += e * rng.complex_normal();
    s.equations.push_back(c);
  }
  return s;
}

inline std::vector<PolyMap> scalar_equations(const PolyMap& m) {
  std::vector<PolyMap> out;
  for (int k = 0; k < m.ntarget; ++k) out.push_back(component(m, k));
  return out;
}

}  // namespace detail

/// Zero orbits of s, found stratum by stratum on the fixed spaces V^H, where
/// the normal components of W^H vanish identically.
inline ZeroSet enumerate_zero_orbits(const ChartProblem& p, const SectionDatum& s, const EulerOptions& opts = {}) {
  ZeroSet out;
  const PolyMap total = s.total();
  const auto& g = *p.group;
  RandomStream rng(opts.solver_seed);
  for (const auto& st : action_strata(p.v)) {
    StratumSolve stats;
    stats.class_id = st.class_id;
    if (st.empty) {
      out.solves.push_back(stats);
      continue;
    }
    const CMat& bv = st.fixed_basis;
    CMat bw = fixed_subspace(p.w, st.h);
    const int m = static_cast<int>(bv.cols());
    const int k = static_cast<int>(bw.cols());
    PolyMap restricted = apply_target(bw.adjoint(), compose_linear(total, bv));
    std::vector<std::pair<CVec, int>> found;  // point in V, cluster multiplicity
    if (m == 0) {
      CVec z = CVec::Zero(p.v.dim());
      if (total.evaluate(z).norm() <= tol::zero_residual * section_scale(s, z, p.degree)) found.push_back({z, 1});
    } else {
      if (k < m) throw ValidationError("stratum with positive expected dimension cannot be counted over a point");
      // drop identically vanishing equations before squaring up
      std::vector<PolyMap> eqs;
      for (auto& e : detail::scalar_equations(restricted))
        if (e.actual_degree(1e-14 * std::max(1.0, restricted.sup_norm())) >= 0) eqs.push_back(e);
      if (static_cast<int>(eqs.size()) < m) throw NumericalError("ring equations degenerate on a fixed space");
      RandomStream local = rng.fork(static_cast<std::uint64_t>(st.class_id));
      PolySystem sys = detail::square_up(eqs, m, local);
      SolveOptions so;
      so.seed = local.next_u64();
      so.threads = opts.threads;
      auto sol = solve_system(sys, so);
      stats.paths = sol.paths;
      stats.diverged = sol.diverged;
      for (const auto& pt : sol.points) {
        CVec x = bv * pt.x;
        const double scale = section_scale(s, x, p.degree);
        if (total.evaluate(x).norm() > tol::zero_residual * scale) continue;  // spurious root of the combination
        found.push_back({x, pt.multiplicity});
      }
    }
    out.solves.push_back(stats);
    for (const auto& [x, mult] : found) {
      // points near a deeper fixed space belong to that stratum
      const double radius = (mult > 1 ? 1e-4 : tol::dedup) * std::max(1.0, x.norm());
      auto loose = isotropy_group(p.v, x, radius);
      if (!(loose == st.h)) continue;
      bool dup = false;
      for (const auto& o : out.orbits)
        if (o.class_id == st.class_id && detail::orbit_distance(p.v, o.point, x) <= tol::dedup * std::max(1.0, x.norm())) dup = true;
      if (dup) continue;
      ZeroOrbit o;
      o.point = x;
      o.stabilizer = st.h;
      o.class_id = st.class_id;
      o.orbit_size = g.order() / st.h.order();
      o.multiplicity = mult;
      o.type = isotropy_type_of(p.v, p.w, st.h);
      o.certificate = transversality_certificate(p, s, x, st.h);
      o.sign = o.certificate.sign;
      out.orbits.push_back(std::move(o));
    }
  }
  return out;
}

/// Bases of Poly_d^G(V, W-ring) and Poly_d^G(V, W-normal), each element scaled
/// to unit coefficient sup norm. Elements above `max_degree` are left out.
struct SplitBasis {
  std::vector<PolyMap> ring;
  std::vector<PolyMap> normal;
};

inline SplitBasis split_basis(const ChartProblem& p, int max_degree = -1) {
  auto full = equivariant_basis(p.v, p.w, p.degree);
  if (max_degree < 0) max_degree = p.degree;
  SplitBasis sb;
  auto collect = [&](const CMat& proj, std::vector<PolyMap>& out) {
    CMat q;
    for (int i = 0; i < full.size(); ++i) {
      if (full.element_degree[i] > max_degree) continue;
      PolyMap x = apply_target(proj, full.elements[i]);
      CVec f = detail::flatten(x.coeffs);
      CVec r = f;
      if (q.cols() > 0)
        for (int pass = 0; pass < 2; ++pass) r -= q * (q.adjoint() * r);
      if (r.norm() <= tol::pivot) continue;
      if (q.cols() == 0) q = CMat(f.size(), 0);
      q.conservativeResize(Eigen::NoChange, q.cols() + 1);
      q.col(q.cols() - 1) = r / r.norm();
      x.coeffs /= x.sup_norm();
      out.push_back(std::move(x));
    }
  };
  collect(p.w_ring * p.w_ring.adjoint(), sb.ring);
  collect(p.w_normal * p.w_normal.adjoint(), sb.normal);
  return sb;
}

/// Perturbations stay within the section's own degree, so the leading forms
/// keep their degrees and no zeros come in from infinity.
inline int perturbation_degree(const ChartProblem& p, const SectionDatum& s) {
  return std::min(p.degree, s.total().actual_degree());
}

/// Adds seeded complex Gaussian coefficients of relative size `magnitude` in
/// both split bases. Lift terms are kept.
inline SectionDatum perturb_section(const ChartProblem& p, const SectionDatum& s, std::uint64_t seed, double magnitude,
                                    const SplitBasis* basis = nullptr) {
  require(magnitude > 0.0 && magnitude <= 0.1, "perturbation magnitude must lie in (0, 0.1]");
  SplitBasis local;
  if (!basis) {
    local = split_basis(p, perturbation_degree(p, s));
    basis = &local;
  }
  RandomStream rng(seed);
  const double scale = std::max(1.0, s.coefficient_norm());
  SectionDatum out = s;
  out.ring = out.ring.with_degree(std::max(out.ring.degree, p.degree));
  out.normal = out.normal.with_degree(std::max(out.normal.degree, p.degree));
  for (const auto& e : basis->ring) out.ring += e * (magnitude * scale * rng.complex_normal());
  for (const auto& e : basis->normal) out.normal += e * (magnitude * scale * rng.complex_normal());
  return out;
}

struct PerturbOutcome {
  SectionDatum section;
  ZeroSet zeros;
  std::uint64_t seed_used = 0;
  int attempts = 0;
};

inline std::uint64_t attempt_seed(std::uint64_t seed, int attempt) {
  return attempt == 0 ? seed : RandomStream(seed).fork(static_cast<std::uint64_t>(attempt)).next_u64();
}

/// Perturbs until every zero found certifies, with at most 5 seeds.
inline PerturbOutcome perturb(const ChartProblem& p, const SectionDatum& s, std::uint64_t seed, double magnitude,
                              const EulerOptions& opts = {}) {
  require(magnitude > 0.0 && magnitude <= 0.1, "perturbation magnitude must lie in (0, 0.1]");
  auto basis = split_basis(p, perturbation_degree(p, s));
  std::string last;
  for (int a = 0; a < 5; ++a) {
    PerturbOutcome out;
    out.seed_used = attempt_seed(seed, a);
    out.attempts = a + 1;
    out.section = perturb_section(p, s, out.seed_used, magnitude, &basis);
    try {
      out.zeros = enumerate_zero_orbits(p, out.section, opts);
    } catch (const NumericalError& e) {
      last = e.what();
      continue;
    }
    if (out.zeros.all_certified()) return out;
    last = "certificate failure";
  }
  throw NumericalError("persistent degeneracy after 5 perturbation seeds (" + last + ")");
}

struct PropernessResult {
  bool ok = true;
  std::string warning;
};

/// Nonempty strata must have n_gamma <= 0, and the leading forms of the
/// section components must have no common zero off the origin.
inline PropernessResult validate_properness(const ChartProblem& p, const SectionDatum& s, const EulerOptions& opts = {}) {
  for (const auto& st : action_strata(p.v)) {
    if (st.empty) continue;
    auto t = isotropy_type_of(p.v, p.w, st.h);
    int n = expected_dimension(p, t);
    if (n > 0)
      throw ValidationError("point-base counting requires n_gamma <= 0 on every stratum; stratum of order " +
                            std::to_string(st.h.order()) + " has n_gamma = " + std::to_string(n));
  }
  PropernessResult r;
  PolyMap total = s.total();
  std::vector<PolyMap> tops;
  for (int k = 0; k < total.ntarget; ++k) {
    PolyMap c = component(total, k);
    int d = c.actual_degree(1e-14 * std::max(1.0, c.sup_norm()));
    if (d >= 1) tops.push_back(c.homogeneous_part(d).with_degree(d));
  }
  const int n = p.v.dim();
  RandomStream rng(opts.solver_seed ^ 0x5A5AULL);
  CVec l = rng.complex_vector(n);
  l /= l.norm();
  // slice {x : <l, x> = 1} parametrized as x0 + N y
  CVec x0 = l;
  CMat nb = orthonormal_columns(CMat::Identity(n, n) - l * l.adjoint(), tol::rank);
  std::vector<PolyMap> eqs;
  for (const auto& t : tops) eqs.push_back(compose_affine(t, nb, x0));
  auto common_zero = [&](const CVec& y) {
    CVec x = x0 + nb * y;
    for (const auto& t : tops)
      if (std::abs(t.evaluate(x)(0)) > 1e-8 * std::max(1.0, t.sup_norm()) * std::pow(std::max(1.0, x.norm()), t.degree)) return false;
    return true;
  };
  const int m = n - 1;
  if (static_cast<int>(tops.size()) < std::max(m, 1)) {
    r.ok = false;
    r.warning = "non-compact zero set possible: too few nonconstant components";
    return r;
  }
  if (m == 0) {
    if (common_zero(CVec(0))) {
      r.ok = false;
      r.warning = "non-compact zero set possible";
    }
    return r;
  }
  RandomStream comb = rng.fork(1);
  PolySystem sys = detail::square_up(eqs, m, comb);
  SolveOptions so;
  so.seed = opts.solver_seed;
  so.threads = opts.threads;
  auto sol = solve_system(sys, so);
  for (const auto& pt : sol.points) {
    if (common_zero(pt.x)) {
      r.ok = false;
      r.warning = "non-compact zero set possible";
    }
  }
  return r;
}

struct StratumCount {
  Subgroup h;
  int class_id = 0;
  IsotropyType type;
  std::string label;
  int dim_vh = 0;
  int dim_wh = 0;
  int n_gamma = 0;
  bool empty = false;
  int count = 0;
  int paths = 0;
  int diverged = 0;
};

struct TypeCount {
  IsotropyType type;
  std::string label;
  int n_gamma = 0;
  int count = 0;
  std::vector<int> class_ids;
};

struct AggregateEntry {
  StabilizedIsotropyType type;
  std::string label;
  int count = 0;
};

struct AuditRow {
  int class_id = 0;
  int order = 1;
  int dim_vh = 0;
  int dim_wh = 0;
  int n_gamma = 0;
  bool empty = false;
  bool generically_empty = false;  // n_gamma < 0
  std::vector<int> deeper;         // classes of strictly larger subgroups (up to conjugacy)
  int boundary_bound = 0;          // n_gamma - 2
  bool boundary_vacuous = true;    // finite zero set: no boundary
  double min_distance_to_deeper = std::numeric_limits<double>::infinity();
  bool pass = true;
};

struct AuditTable {
  std::vector<AuditRow> rows;
  bool pass = true;
};

struct EulerReport {
  std::vector<StratumCount> strata;
  std::vector<TypeCount> types;
  std::vector<AggregateEntry> aggregates;
  std::vector<ZeroOrbit> orbits;
  AuditTable audit;
  SectionDatum section;  // the section actually counted
  std::uint64_t seed = 0;
  std::uint64_t seed_used = 0;
  double magnitude = 0.0;
  int attempts = 0;
  int halvings = 0;
  bool stable = true;
  bool perturbed = true;
  std::vector<std::string> warnings;
  int total_paths = 0;
  int total_diverged = 0;
  // consistency sum against the oracle's zero set on all of V
  bool consistency_applicable = false;
  int consistency_sum = 0;
  int oracle_count = -1;
  bool consistency_holds = true;

  std::vector<int> count_table() const {
    std::vector<int> c;
    for (const auto& s : strata) c.push_back(s.count);
    return c;
  }
};

/// Audit of n_gamma per stratum and of the boundary codimension bound. For
/// a finite zero set the bound dim(boundary) <= n_gamma - 2 holds trivially.
inline AuditTable dimension_audit(const ChartProblem& p, const std::vector<ZeroOrbit>* zeros = nullptr) {
  AuditTable t;
  auto strata = action_strata(p.v);
  const auto& g = *p.group;
  for (const auto& st : strata) {
    AuditRow r;
    r.class_id = st.class_id;
    r.order = st.h.order();
    r.dim_vh = st.dim_fixed;
    r.dim_wh = static_cast<int>(fixed_subspace(p.w, st.h).cols());
    r.n_gamma = expected_dimension(p, isotropy_type_of(p.v, p.w, st.h));
    r.empty = st.empty;
    r.generically_empty = r.n_gamma < 0;
    r.boundary_bound = r.n_gamma - 2;
    r.boundary_vacuous = r.n_gamma <= 0;
    for (const auto& other : strata) {
      if (other.h.order() <= st.h.order()) continue;
      bool deeper = false;
      for (int x = 0; x < g.order() && !deeper; ++x) {
        auto c = conjugate_subgroup(g, st.h, x);
        deeper = std::includes(other.h.members.begin(), other.h.members.end(), c.members.begin(), c.members.end());
      }
      if (deeper) r.deeper.push_back(other.class_id);
    }
    if (zeros) {
      for (const auto& o : *zeros) {
        if (o.class_id != st.class_id) continue;
        for (const auto& other : strata) {
          if (std::find(r.deeper.begin(), r.deeper.end(), other.class_id) == r.deeper.end()) continue;
          // distance from the orbit to every conjugate of the deeper fixed space
          for (int x = 0; x < g.order(); ++x) {
            CMat f = fixed_subspace(p.v, conjugate_subgroup(g, other.h, x));
            CVec res = o.point - f * (f.adjoint() * o.point);
            r.min_distance_to_deeper = std::min(r.min_distance_to_deeper, res.norm());
          }
        }
      }
      if (r.min_distance_to_deeper <= tol::dedup) r.pass = false;
    }
    if (!r.boundary_vacuous) r.pass = false;  // positive-dimensional strata are rejected upstream
    t.pass = t.pass && r.pass;
    t.rows.push_back(std::move(r));
  }
  return t;
}

namespace detail {

inline EulerReport assemble(const ChartProblem& p, const ZeroSet& zs) {
  EulerReport rep;
  auto strata = action_strata(p.v);
  for (const auto& st : strata) {
    StratumCount c;
    c.h = st.h;
    c.class_id = st.class_id;
    c.type = isotropy_type_of(p.v, p.w, st.h);
    c.label = type_label(c.type);
    c.dim_vh = st.dim_fixed;
    c.dim_wh = static_cast<int>(fixed_subspace(p.w, st.h).cols());
    c.n_gamma = expected_dimension(p, c.type);
    c.empty = st.empty;
    for (const auto& s : zs.solves)
      if (s.class_id == st.class_id) {
        c.paths = s.paths;
        c.diverged = s.diverged;
      }
    for (const auto& o : zs.orbits)
      if (o.class_id == st.class_id) c.count += o.sign;
    rep.total_paths += c.paths;
    rep.total_diverged += c.diverged;
    rep.strata.push_back(std::move(c));
  }
  for (const auto& c : rep.strata) {
    bool merged = false;
    for (auto& t : rep.types) {
      if (isotropy_types_equal(t.type, c.type)) {
        t.count += c.count;
        t.class_ids.push_back(c.class_id);
        merged = true;
        break;
      }
    }
    if (!merged) rep.types.push_back(TypeCount{c.type, c.label, c.n_gamma, c.count, {c.class_id}});
  }
  rep.orbits = zs.orbits;
  return rep;
}

}  // namespace detail

/// Sums chi_gamma over isotropy types with the same stabilized form.
inline std::vector<AggregateEntry> aggregate_stabilized(const EulerReport& report) {
  std::vector<AggregateEntry> out;
  for (const auto& t : report.types) {
    auto st = stabilize_type(t.type);
    bool merged = false;
    for (auto& a : out) {
      if (types_equal(a.type, st)) {
        a.count += t.count;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back(AggregateEntry{st, type_label(st), t.count});
  }
  return out;
}

/// Distinct zeros of the full system s = 0 on V by the homotopy oracle.
inline SolutionSet oracle_zeros(const ChartProblem& p, const SectionDatum& s, const EulerOptions& opts = {}) {
  require(p.v.dim() == p.w.dim(), "oracle needs dim V == dim W");
  SolveOptions so;
  so.seed = opts.solver_seed;
  so.threads = opts.threads;
  return solve_system(PolySystem::from_map(s.total()), so);
}

/// Fills the oracle fields of a report from the section actually counted.
inline void attach_oracle(EulerReport& rep, const ChartProblem& p, const SectionDatum& counted, const EulerOptions& opts = {}) {
  if (!rep.consistency_applicable) return;
  auto sol = oracle_zeros(p, counted, opts);
  bool simple = true;
  for (const auto& pt : sol.points)
    if (pt.multiplicity > 1) simple = false;
  rep.oracle_count = static_cast<int>(sol.points.size());
  rep.consistency_holds = !simple || rep.oracle_count == rep.consistency_sum;
  if (!simple) rep.warnings.push_back("oracle reports singular clusters; consistency sum not applicable");
}

/// Counts chi_gamma of a point-base chart. Perturbs (unless disabled), then
/// recounts at half the magnitude until two consecutive counts agree.
inline EulerReport euler_counts(const ChartProblem& p, const SectionDatum& s, const EulerOptions& opts = {}) {
  validate_section(p, s);
  auto proper = validate_properness(p, s, opts);
  EulerReport rep;
  if (!opts.perturb) {
    auto zs = enumerate_zero_orbits(p, s, opts);
    rep = detail::assemble(p, zs);
    rep.section = s;
    rep.perturbed = false;
    if (!zs.all_certified()) rep.warnings.push_back("unperturbed section is not transverse at some zero");
  } else {
    double mag = opts.magnitude;
    auto cur = perturb(p, s, opts.seed, mag, opts);
    auto cur_rep = detail::assemble(p, cur.zeros);
    bool stable = false;
    int halvings = 0;
    for (; halvings < 4; ++halvings) {
      auto next = perturb(p, s, opts.seed, mag / 2.0, opts);
      auto next_rep = detail::assemble(p, next.zeros);
      if (next_rep.count_table() == cur_rep.count_table()) {
        stable = true;
        break;
      }
      mag /= 2.0;
      cur = std::move(next);
      cur_rep = std::move(next_rep);
    }
    rep = std::move(cur_rep);
    rep.section = cur.section;
    rep.seed_used = cur.seed_used;
    rep.attempts = cur.attempts;
    rep.magnitude = mag;
    rep.halvings = halvings;
    rep.stable = stable;
    if (!stable) rep.warnings.push_back("counts unstable under halving of the perturbation magnitude");
  }
  rep.seed = opts.seed;
  if (!opts.perturb) rep.magnitude = 0.0;
  if (!proper.ok) rep.warnings.push_back(proper.warning);
  for (const auto& w : p.warnings) rep.warnings.push_back(w);
  for (const auto& c : rep.strata)
    if (c.n_gamma < 0 && c.count != 0) throw NumericalError("stratum with negative expected dimension carries zeros");
  rep.aggregates = aggregate_stabilized(rep);
  rep.audit = dimension_audit(p, &rep.orbits);
  // consistency sum against the full square system on V
  if (p.v.dim() == p.w.dim() && p.v.dim() <= kMaxSolverVars) {
    rep.consistency_applicable = true;
    for (const auto& o : rep.orbits) rep.consistency_sum += o.sign * o.orbit_size;
    attach_oracle(rep, p, rep.section, opts);
  }
  return rep;
}

struct InvarianceVerdict {
  bool pass = false;
  bool seeds_agree = false;
  bool homotopy_ok = false;
  bool endpoint_counts_equal = false;
  int steps_used = 0;
  int refinements = 0;
  double max_displacement = 0.0;
  std::vector<std::string> detail;
};

/// Multi-seed agreement plus a linear homotopy between two perturbations.
inline InvarianceVerdict invariance_check(const ChartProblem& p, const SectionDatum& s, const std::vector<std::uint64_t>& seeds,
                                          int steps, const EulerOptions& opts = {}) {
  require(seeds.size() >= 2, "invariance check needs at least two seeds");
  require(steps >= 1, "invariance check needs at least one step");
  InvarianceVerdict v;
  std::vector<int> first;
  v.seeds_agree = true;
  for (size_t i = 0; i < seeds.size(); ++i) {
    EulerOptions o = opts;
    o.seed = seeds[i];
    auto rep = euler_counts(p, s, o);
    if (i == 0) first = rep.count_table();
    else if (rep.count_table() != first) {
      v.seeds_agree = false;
      v.detail.push_back("seed " + std::to_string(seeds[i]) + " gives a different count table");
    }
  }

  auto a = perturb(p, s, seeds[0], opts.magnitude, opts);
  auto b = perturb(p, s, seeds[1], opts.magnitude, opts);
  auto mix = [&](double t) {
    SectionDatum m = a.section;
    m.ring = a.section.ring * cplx(1.0 - t) + b.section.ring * cplx(t);
    m.normal = a.section.normal * cplx(1.0 - t) + b.section.normal * cplx(t);
    return m;
  };
  auto counts_of = [&](const ZeroSet& z) { return detail::assemble(p, z).count_table(); };
  v.endpoint_counts_equal = counts_of(a.zeros) == counts_of(b.zeros);

  int n = steps;
  for (int refine = 0; refine <= 4; ++refine) {
    bool ok = true;
    std::string why;
    double worst = 0.0;
    ZeroSet prev = a.zeros;
    for (int j = 1; j <= n && ok; ++j) {
      ZeroSet cur;
      try {
        cur = enumerate_zero_orbits(p, mix(static_cast<double>(j) / n), opts);
      } catch (const NumericalError& e) {
        ok = false;
        why = e.what();
        break;
      }
      if (!cur.all_certified()) {
        ok = false;
        why = "certificate failure at t = " + std::to_string(static_cast<double>(j) / n);
        break;
      }
      if (cur.orbits.size() != prev.orbits.size()) {
        ok = false;
        why = "orbit count changed along the homotopy";
        break;
      }
      for (const auto& o : prev.orbits) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : cur.orbits)
          if (q.class_id == o.class_id) best = std::min(best, detail::orbit_distance(p.v, o.point, q.point));
        worst = std::max(worst, best);
      }
      if (worst >= 0.1) {
        ok = false;
        why = "orbit displacement above 0.1 per step";
      }
      prev = std::move(cur);
    }
    v.steps_used = n;
    v.max_displacement = worst;
    if (ok) {
      v.homotopy_ok = true;
      break;
    }
    v.detail.push_back(why);
    if (refine == 4) break;
    n *= 2;
    ++v.refinements;
  }
  v.pass = v.seeds_agree && v.homotopy_ok && v.endpoint_counts_equal;
  return v;
}

struct DegreeStabilityVerdict {
  bool pass = false;
  bool verdicts_equal = false;
  bool counts_equal = false;
  std::vector<int> counts_low;
  std::vector<int> counts_high;
  std::vector<bool> verdicts_low;
  std::vector<bool> verdicts_high;
};

/// Compares the chart at degree d with the same section zero-padded to a
/// higher degree (default d + 1).
inline DegreeStabilityVerdict degree_stability_check(const ChartProblem& p, const SectionDatum& s, int high = -1,
                                                     const EulerOptions& opts = {}) {
  if (high < 0) high = p.degree + 1;
  require(high > p.degree, "comparison degree must exceed the chart degree");
  ChartProblem q = make_chart(p.v, p.w, high, p.degree_override);
  SectionDatum t = s;
  t.ring = s.ring.with_degree(std::max(s.ring.degree, high));
  t.normal = s.normal.with_degree(std::max(s.normal.degree, high));
  DegreeStabilityVerdict v;
  EulerOptions raw = opts;
  raw.perturb = false;
  auto zl = enumerate_zero_orbits(p, s, raw);
  auto zh = enumerate_zero_orbits(q, t, raw);
  v.verdicts_equal = zl.orbits.size() == zh.orbits.size();
  for (const auto& o : zl.orbits) {
    v.verdicts_low.push_back(o.certificate.pass);
    bool matched = false;
    for (const auto& r : zh.orbits) {
      if (r.class_id != o.class_id || detail::orbit_distance(p.v, o.point, r.point) > 1e-6 * std::max(1.0, o.point.norm())) continue;
      matched = true;
      if (r.certificate.pass != o.certificate.pass) v.verdicts_equal = false;
    }
    if (!matched) v.verdicts_equal = false;
  }
  for (const auto& r : zh.orbits) v.verdicts_high.push_back(r.certificate.pass);
  v.counts_low = euler_counts(p, s, opts).count_table();
  v.counts_high = euler_counts(q, t, opts).count_table();
  v.counts_equal = v.counts_low == v.counts_high;
  v.pass = v.verdicts_equal && v.counts_equal;
  return v;
}

}  // namespace fop
