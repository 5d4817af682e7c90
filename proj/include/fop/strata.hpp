#pragma once

#include "fop/chart.hpp"

namespace fop {

/// Stratum V_H^* of points with stabilizer exactly H (H up to conjugacy).
struct ActionStratum {
  Subgroup h;            // class representative: first member of the class in subgroup order
  int class_id = 0;
  int class_size = 1;
  CMat fixed_basis;      // orthonormal basis of V^H
  int dim_fixed = 0;
  bool empty = false;    // V^H is covered by fixed spaces of larger subgroups
  std::string open_condition = "stabilizer exactly H";
};

inline std::vector<ActionStratum> action_strata(const UnitaryRep& v) {
  const auto& g = v.group();
  const auto& subs = g.subgroups();
  std::vector<ActionStratum> out;
  std::vector<int> dims;
  for (const auto& s : subs) dims.push_back(static_cast<int>(fixed_subspace(v, s).cols()));
  std::vector<char> seen;
  for (size_t i = 0; i < subs.size(); ++i) {
    const int c = subs[i].conjugacy_class_id;
    if (c < static_cast<int>(seen.size()) && seen[c]) continue;
    if (c >= static_cast<int>(seen.size())) seen.resize(c + 1, 0);
    seen[c] = 1;
    ActionStratum st;
    st.h = subs[i];
    st.class_id = c;
    st.class_size = 0;
    for (const auto& s : subs)
      if (s.conjugacy_class_id == c) ++st.class_size;
    st.fixed_basis = fixed_subspace(v, subs[i]);
    st.dim_fixed = dims[i];
    // nonempty iff no strictly larger subgroup fixes all of V^H
    for (size_t j = 0; j < subs.size(); ++j) {
      if (subs[j].order() <= subs[i].order()) continue;
      bool contains = std::includes(subs[j].members.begin(), subs[j].members.end(), subs[i].members.begin(), subs[i].members.end());
      if (contains && dims[j] == dims[i]) st.empty = true;
    }
    out.push_back(std::move(st));
  }
  return out;
}

/// Index into `strata` of the stratum containing v.
inline int classify_point(const std::vector<ActionStratum>& strata, const UnitaryRep& v, const CVec& x) {
  auto h = isotropy_group(v, x);
  const int c = v.group().subgroups()[v.group().find_subgroup(h.members)].conjugacy_class_id;
  for (size_t i = 0; i < strata.size(); ++i)
    if (strata[i].class_id == c) return static_cast<int>(i);
  throw NumericalError("point stabilizer has no stratum");
}

/// Some x with x h x^{-1} == target, for conjugate subgroups.
inline int conjugating_element(const FiniteGroup& g, const Subgroup& h, const Subgroup& target) {
  for (int x = 0; x < g.order(); ++x)
    if (conjugate_subgroup(g, h, x) == target) return x;
  throw NumericalError("subgroups are not conjugate");
}

struct ZStratumInfo {
  Subgroup h;
  int degree = 0;
  int dim_poly = 0;
  int dim_ring_v = 0;  // dim V^H
  int dim_ring_w = 0;  // dim W^H
  int dim_c = 0;
  bool empty = false;
  bool regularity_verified = false;
  double margin = 0.0;    // smallest sigma_{dim W^H} over the samples
  int observed_rank = 0;  // rank of the ring evaluation differential
  std::vector<std::string> warnings;
};

/// Dimension of Z*_{d,H} and a sampled check that evaluation onto W^H is
/// surjective along V_H^*.
inline ZStratumInfo z_stratum_info(const UnitaryRep& v, const UnitaryRep& w, int d, const Subgroup& h, bool degree_override = false,
                                   std::uint64_t seed = kLibrarySeed, int samples = 20) {
  ZStratumInfo z;
  z.h = h;
  z.degree = d;
  if (d < v.group().order()) {
    require(degree_override, "degree is below the interpolation bound |G| (use the degree override)");
    z.warnings.push_back("degree below |G|");
  }
  auto basis = equivariant_basis(v, w, d);
  z.dim_poly = basis.size();
  CMat vh = fixed_subspace(v, h);
  CMat wh = fixed_subspace(w, h);
  z.dim_ring_v = static_cast<int>(vh.cols());
  z.dim_ring_w = static_cast<int>(wh.cols());
  z.dim_c = z.dim_poly + z.dim_ring_v - z.dim_ring_w;
  for (const auto& st : action_strata(v))
    if (st.class_id == h.conjugacy_class_id) z.empty = st.empty;
  if (z.empty) {
    z.regularity_verified = true;
    z.margin = std::numeric_limits<double>::infinity();
    z.observed_rank = z.dim_ring_w;
    z.warnings.push_back("stratum V_H^* is empty");
    return z;
  }
  RandomStream rng(seed);
  z.margin = std::numeric_limits<double>::infinity();
  z.observed_rank = z.dim_ring_w;
  int used = 0;
  for (int attempt = 0; used < samples && attempt < 4 * samples; ++attempt) {
    CVec x = vh * rng.complex_vector(vh.cols());
    if (!(isotropy_group(v, x) == h)) continue;
    ++used;
    CMat e(z.dim_ring_w, z.dim_poly);
    for (int i = 0; i < z.dim_poly; ++i) e.col(i) = wh.adjoint() * basis.elements[i].evaluate(x);
    const double scale = std::max(1.0, std::pow(x.norm(), d));
    z.margin = std::min(z.margin, singular_value_at(e, z.dim_ring_w) / scale);
    z.observed_rank = std::min(z.observed_rank, numerical_rank(e, tol::transversality * scale));
  }
  if (used == 0) throw NumericalError("could not sample the stratum V_H^*");
  z.regularity_verified = z.margin >= tol::transversality;
  return z;
}

/// n_gamma = dim_R X - rank_R E - dim_R V_gamma + dim_R W_gamma.
inline int expected_dimension(int base_real_dim, const UnitaryRep& v, const UnitaryRep& w, const IsotropyType& t) {
  return base_real_dim + 2 * v.dim() - 2 * w.dim() - 2 * t.v_dim() + 2 * t.w_dim();
}

inline int expected_dimension(const ChartProblem& p, const IsotropyType& t) {
  return expected_dimension(p.base_real_dim(), p.v, p.w, t);
}

struct TransversalityCertificate {
  CVec zero;
  Subgroup h;
  double residual = 0.0;
  double scale = 1.0;
  double margin_ring = 0.0;
  double margin_normal = 0.0;
  bool pass = false;
  int sign = 0;
  std::string detail;
};

namespace detail {

// min over nontrivial irreducibles of sigma_{d_i min(a,b)} of the isotypic block.
inline double normal_margin(const CMat& j, const UnitaryRep& vh, const UnitaryRep& wh, const Subgroup& all, std::string* note) {
  const auto& irreps = vh.group().irreducible_characters();
  double m = std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < irreps.size(); ++i) {
    const int di = static_cast<int>(std::lround(irreps[i][0].real()));
    const int a = multiplicity(irreps[i], vh.character());
    const int b = multiplicity(irreps[i], wh.character());
    const int need = di * std::min(a, b);
    if (need == 0) continue;
    CMat ev = isotypic_subspace(vh, all, irreps[i]);
    CMat ew = isotypic_subspace(wh, all, irreps[i]);
    double s = singular_value_at(ew.adjoint() * j * ev, need);
    if (s < m && note) *note = "irreducible " + std::to_string(i) + " (a=" + std::to_string(a) + ", b=" + std::to_string(b) + ")";
    m = std::min(m, s);
  }
  return m;
}

inline void finish(TransversalityCertificate& c) {
  const double tau = tol::transversality * c.scale;
  const bool ring_ok = c.margin_ring >= tau;
  const bool normal_ok = c.margin_normal >= tau;
  c.pass = ring_ok && normal_ok;
  c.sign = c.pass ? 1 : 0;
  if (!ring_ok) c.detail = "ring differential not surjective onto W^H";
  else if (!normal_ok) c.detail = "normal derivative rank deficient on " + c.detail;
  else c.detail = "pass";
}

}  // namespace detail

/// First-order transversality certificate at a zero with stabilizer H.
/// A pass over a point base counts with sign +1, since the real Jacobian
/// determinant of a holomorphic map is |det_C J|^2.
inline TransversalityCertificate transversality_certificate(const ChartProblem& p, const SectionDatum& s, const CVec& zero,
                                                            const Subgroup& h) {
  TransversalityCertificate c;
  c.zero = zero;
  c.h = h;
  PolyMap total = s.total();
  c.scale = section_scale(s, zero, p.degree);
  c.residual = total.evaluate(zero).norm();
  if (c.residual > tol::zero_residual * c.scale)
    throw NumericalError("zero fails the residual precondition (|s| = " + std::to_string(c.residual) + ")");
  if (!(isotropy_group(p.v, zero) == h)) throw NumericalError("stabilizer of the zero differs from the stratum subgroup");

  CMat vh = fixed_subspace(p.v, h);
  CMat wh = fixed_subspace(p.w, h);
  CMat jt = total.jacobian(zero);
  c.margin_ring = singular_value_at(wh.adjoint() * jt * vh, static_cast<int>(wh.cols()));
  if (wh.cols() > vh.cols()) c.margin_ring = 0.0;

  auto hg = subgroup_as_group(p.v.group(), h);
  auto vr = p.v.restricted(hg, h.members);
  auto wr = p.w.restricted(hg, h.members);
  CMat ju = s.lift_at(zero).jacobian(zero);
  std::string note;
  c.margin_normal = detail::normal_margin(ju, vr, wr, whole_group(*hg), &note);
  c.detail = note;
  detail::finish(c);
  return c;
}

/// The same certificate computed in the restricted H-problem on the normal
/// slice: base derivative by central differences of b -> Q_b(0), normal block
/// from the Jacobian of Q at 0.
inline TransversalityCertificate restricted_certificate(const ChartProblem& p, const SectionDatum& s, const CVec& zero,
                                                        const Subgroup& h) {
  TransversalityCertificate c;
  c.zero = zero;
  c.h = h;
  c.scale = section_scale(s, zero, p.degree);
  PolyMap total = s.total();
  auto r = restrict_theta(zero, s.lift_at(zero), p.v, p.w, h);
  c.residual = r.q.evaluate(CVec::Zero(r.q.nvars)).norm();
  if (c.residual > tol::zero_residual * c.scale) throw NumericalError("zero fails the residual precondition");

  CMat wh = fixed_subspace(p.w, h);
  const Eigen::Index m = r.ring_basis.cols();
  CMat jb(wh.cols(), m);
  const double step = 1e-5 * std::max(1.0, zero.norm());
  CVec base = r.ring_point;
  for (Eigen::Index k = 0; k < m; ++k) {
    CVec dir = r.ring_basis.col(k) * step;
    auto up = restrict_theta(base + dir, total, p.v, p.w, h);
    auto dn = restrict_theta(base - dir, total, p.v, p.w, h);
    CVec o = CVec::Zero(up.q.nvars);
    jb.col(k) = wh.adjoint() * (up.q.evaluate(o) - dn.q.evaluate(o)) / (2.0 * step);
  }
  c.margin_ring = singular_value_at(jb, static_cast<int>(wh.cols()));
  if (wh.cols() > m) c.margin_ring = 0.0;

  CMat jq = r.q.nvars > 0 ? r.q.jacobian(CVec::Zero(r.q.nvars)) : CMat(p.w.dim(), 0);
  std::string note;
  c.margin_normal = detail::normal_margin(jq, r.v_normal, r.w_h, whole_group(*r.h_group), &note);
  c.detail = note;
  detail::finish(c);
  return c;
}

}  // namespace fop
