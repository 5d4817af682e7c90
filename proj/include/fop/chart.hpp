#pragma once

#include "fop/equivariant.hpp"

#include <optional>

namespace fop {

/// Linear chart [V/G] over a point, with obstruction representation W split
/// into its G-fixed part (ring) and the complement (normal).
struct ChartProblem {
  GroupPtr group;
  UnitaryRep v;
  UnitaryRep w;
  int degree = 0;
  bool degree_override = false;
  CMat w_ring;    // orthonormal basis of W^G
  CMat w_normal;  // orthonormal basis of its complement
  std::vector<std::string> warnings;

  int base_real_dim() const { return 0; }
};

inline ChartProblem make_chart(const UnitaryRep& v, const UnitaryRep& w, int degree, bool degree_override = false,
                               std::optional<std::pair<CMat, CMat>> split = std::nullopt) {
  require(v.group().same_table(w.group()), "V and W must be representations of the same group");
  require(v.is_effective(), "V must be effective: only the identity may act trivially");
  require(degree >= 0, "degree must be nonnegative");
  ChartProblem p;
  p.group = v.group_ptr();
  p.v = v;
  p.w = w;
  p.degree = degree;
  p.degree_override = degree_override;
  auto dec = basic_decomposition(w, whole_group(v.group()));
  p.w_ring = dec.ring;
  p.w_normal = dec.normal;
  if (split) {
    // a user-supplied split must span the same subspaces
    const auto& [ring, normal] = *split;
    require(ring.rows() == w.dim() && normal.rows() == w.dim(), "W split has the wrong ambient dimension");
    require(ring.cols() == dec.ring.cols() && normal.cols() == dec.normal.cols(), "W split dimensions disagree with the fixed space");
    CMat pr = dec.ring * dec.ring.adjoint();
    require(ring.cols() == 0 || (pr * ring - ring).norm() <= 1e-8 * std::max(1.0, ring.norm()), "W ring part is not G-fixed");
    require(normal.cols() == 0 || (pr * normal).norm() <= 1e-8 * std::max(1.0, normal.norm()), "W normal part meets the fixed space");
    p.w_ring = orthonormal_columns(ring, tol::rank);
    p.w_normal = orthonormal_columns(normal, tol::rank);
  }
  if (degree < p.group->order()) {
    require(degree_override, "degree " + std::to_string(degree) + " is below the interpolation bound |G| = " +
                                 std::to_string(p.group->order()) + " (use the degree override)");
    p.warnings.push_back("degree below the interpolation bound |G|; results rely on the override");
  }
  return p;
}

/// One extra lift term h(v) * Q(u): an invariant scalar coefficient times an
/// equivariant direction. The section value gets h(v) * Q(v).
struct LiftTerm {
  PolyMap coefficient;
  PolyMap direction;
};

/// Normally polynomial section over a point base: the ring part plus a family
/// v -> P_v of equivariant maps into the normal part, P_v = normal + sum h_k(v) Q_k.
struct SectionDatum {
  PolyMap ring;
  PolyMap normal;
  std::vector<LiftTerm> lift;

  /// The section v -> s(v) as one polynomial map.
  PolyMap total() const {
    PolyMap t = ring + normal;
    for (const auto& term : lift) t += multiply(term.coefficient, term.direction);
    return t;
  }

  /// The polynomial map u -> ring(u) + P_v(u) attached to the base point v.
  PolyMap lift_at(const CVec& v) const {
    PolyMap t = ring + normal;
    for (const auto& term : lift) t += term.direction * term.coefficient.evaluate(v)(0);
    return t;
  }

  double coefficient_norm() const {
    double s = std::max(ring.sup_norm(), normal.sup_norm());
    for (const auto& term : lift) s = std::max(s, term.coefficient.sup_norm() * term.direction.sup_norm());
    return s;
  }

  int max_degree() const { return total().degree; }
};

/// Splits an equivariant map into ring and normal parts of the chart.
inline SectionDatum split_section(const ChartProblem& p, const PolyMap& s) {
  require(s.nvars == p.v.dim() && s.ntarget == p.w.dim(), "section shape does not match the chart");
  SectionDatum d;
  d.ring = apply_target(p.w_ring * p.w_ring.adjoint(), s);
  d.normal = apply_target(p.w_normal * p.w_normal.adjoint(), s);
  return d;
}

inline void validate_section(const ChartProblem& p, const SectionDatum& s) {
  for (const PolyMap* m : {&s.ring, &s.normal}) {
    require(m->nvars == p.v.dim() && m->ntarget == p.w.dim(), "section part shape does not match the chart");
    double r = equivariance_residual(*m, p.v, p.w);
    if (r > tol::span) throw ValidationError("section part is not equivariant (residual " + std::to_string(r) + ")");
  }
  const double scale = std::max(1.0, s.coefficient_norm());
  CMat off_ring = CMat::Identity(p.w.dim(), p.w.dim()) - p.w_ring * p.w_ring.adjoint();
  require(sup_norm(s.ring.coeffs * off_ring.transpose()) <= tol::span * scale, "ring part leaves the G-fixed part of W");
  CMat off_normal = p.w_ring * p.w_ring.adjoint();
  require(sup_norm(s.normal.coeffs * off_normal.transpose()) <= tol::span * scale, "normal part meets the G-fixed part of W");
  auto triv = trivial_rep(p.group);
  for (const auto& term : s.lift) {
    require(term.coefficient.nvars == p.v.dim() && term.coefficient.ntarget == 1, "lift coefficient must be a scalar on V");
    require(term.direction.nvars == p.v.dim() && term.direction.ntarget == p.w.dim(), "lift direction shape does not match the chart");
    require(equivariance_residual(term.coefficient, p.v, triv) <= tol::span, "lift coefficient is not invariant");
    require(equivariance_residual(term.direction, p.v, p.w) <= tol::span, "lift direction is not equivariant");
    require(sup_norm(term.direction.coeffs * off_normal.transpose()) <= tol::span * scale, "lift direction meets the G-fixed part of W");
  }
}

/// Certificate scale: max(1, coefficient sup norm, |zero|^d).
inline double section_scale(const SectionDatum& s, const CVec& zero, int degree) {
  return std::max({1.0, s.coefficient_norm(), std::pow(zero.norm(), degree)});
}

}  // namespace fop
