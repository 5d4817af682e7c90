#pragma once

#include "fop/polynomial.hpp"
#include "fop/random.hpp"
#include "fop/rep.hpp"

namespace fop {

inline constexpr int kMaxBasisDegree = 12;
inline constexpr int kMaxBasisVars = 4;

/// Dimension of degree-k homogeneous equivariants V -> W by character count:
/// (1/|G|) sum_g h_k(conj eigenvalues of rho_V(g)) chi_W(g).
inline int equivariant_dimension(const UnitaryRep& v, const UnitaryRep& w, int k) {
  require(k >= 0, "degree must be nonnegative");
  const auto& g = v.group();
  cplx total = 0.0;
  for (int x = 0; x < g.order(); ++x) {
    Eigen::ComplexEigenSolver<CMat> es(v.matrix(x));
    // complete homogeneous symmetric polynomials via the generating series
    std::vector<cplx> h(k + 1, 0.0);
    h[0] = 1.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      cplx lam = std::conj(es.eigenvalues()(i));
      for (int j = 1; j <= k; ++j) h[j] += lam * h[j - 1];
    }
    total += h[k] * w.character()[x];
  }
  total /= static_cast<double>(g.order());
  long r = std::lround(total.real());
  if (std::abs(total - static_cast<double>(r)) > tol::rank) throw NumericalError("equivariant dimension count is not integral");
  return static_cast<int>(r);
}

/// Reynolds projection (1/|G|) sum_g rho_W(g)^{-1} P(rho_V(g) v).
inline PolyMap reynolds(const PolyMap& p, const UnitaryRep& v, const UnitaryRep& w) {
  require(p.nvars == v.dim() && p.ntarget == w.dim(), "polynomial shape does not match the representations");
  const auto& g = v.group();
  PolyMap r(p.nvars, p.ntarget, p.degree);
  for (int x = 0; x < g.order(); ++x) r += apply_target(w.matrix(g.inv(x)), compose_linear(p, v.matrix(x)));
  r.coeffs /= static_cast<double>(g.order());
  return r;
}

/// max over samples of |P(gv) - gP(v)| / scale, scale = max(1, |P|_sup) * max(1, |v|)^deg.
inline double equivariance_residual(const PolyMap& p, const UnitaryRep& v, const UnitaryRep& w, int samples = 20,
                                    std::uint64_t seed = kLibrarySeed) {
  RandomStream rng(seed);
  const auto& g = v.group();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    int x = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(g.order()));
    CVec pt = rng.complex_vector(v.dim());
    double scale = std::max(1.0, p.sup_norm()) * std::pow(std::max(1.0, pt.norm()), p.degree);
    double r = (p.evaluate(v.matrix(x) * pt) - w.matrix(x) * p.evaluate(pt)).norm() / scale;
    worst = std::max(worst, r);
  }
  return worst;
}

namespace detail {

inline CVec flatten(const CMat& m) { return Eigen::Map<const CVec>(m.data(), m.size()); }

inline CMat unflatten(const CVec& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const CMat>(v.data(), rows, cols);
}

// Rows of degree k only, flattened.
inline CVec degree_slice(const PolyMap& p, int k) {
  const auto& b = p.basis();
  return flatten(p.coeffs.middleRows(b.degree_begin(k), b.count_of_degree(k)));
}

inline void check_basis_limits(const UnitaryRep& v, int d, int max_degree = kMaxBasisDegree) {
  require(d >= 0 && d <= max_degree, "basis degree must be in [0, " + std::to_string(max_degree) + "]");
  require(v.dim() <= kMaxBasisVars, "basis construction supports dim V <= 4");
}

}  // namespace detail

/// Basis of the degree-k homogeneous equivariants, each returned with degree
/// bound k. Reynolds images of monomial x coordinate vectors, kept greedily.
/// Degrees above 12 are reachable only through degree reduction tables.
inline std::vector<PolyMap> homogeneous_equivariants(const UnitaryRep& v, const UnitaryRep& w, int k) {
  detail::check_basis_limits(v, k, 2 * kMaxBasisDegree);
  const auto& g = v.group();
  const auto mb = MonomialBasis::get(v.dim(), k);
  const int nk = mb->count_of_degree(k);
  std::vector<CMat> blocks;
  std::vector<CMat> winv;
  for (int x = 0; x < g.order(); ++x) {
    blocks.push_back(linear_substitution_blocks(k, v.matrix(x))[k]);
    winv.push_back(w.matrix(g.inv(x)));
  }
  std::vector<PolyMap> out;
  CMat q(static_cast<Eigen::Index>(nk) * w.dim(), 0);
  for (int i = 0; i < nk; ++i) {
    for (int t = 0; t < w.dim(); ++t) {
      CMat c = CMat::Zero(nk, w.dim());
      for (int x = 0; x < g.order(); ++x) c += blocks[x].row(i).transpose() * winv[x].col(t).transpose();
      c /= static_cast<double>(g.order());
      CVec f = detail::flatten(c);
      CVec r = f;
      for (int pass = 0; pass < 2; ++pass)
        if (q.cols() > 0) r -= q * (q.adjoint() * r);
      if (r.norm() <= tol::pivot) continue;
      q.conservativeResize(Eigen::NoChange, q.cols() + 1);
      q.col(q.cols() - 1) = r / r.norm();
      // normalize so the first largest coefficient equals 1
      Eigen::Index best = 0;
      for (Eigen::Index j = 0; j < f.size(); ++j)
        if (std::abs(f(j)) > std::abs(f(best)) + 1e-12) best = j;
      c /= f(best);
      PolyMap p(v.dim(), w.dim(), k);
      p.coeffs.middleRows(mb->degree_begin(k), nk) = c;
      out.push_back(std::move(p));
    }
  }
  const int expected = equivariant_dimension(v, w, k);
  if (static_cast<int>(out.size()) != expected)
    throw NumericalError("Reynolds basis rank " + std::to_string(out.size()) + " disagrees with character count " +
                         std::to_string(expected) + " in degree " + std::to_string(k));
  return out;
}

/// Ordered basis of Poly_d^G(V, W), grouped by degree.
struct EquivariantBasis {
  UnitaryRep v;
  UnitaryRep w;
  int degree = 0;
  std::vector<PolyMap> elements;  // all with degree bound `degree`
  std::vector<int> element_degree;
  std::vector<int> per_degree;  // count of elements of each degree 0..degree

  int size() const { return static_cast<int>(elements.size()); }

  /// Columns are flattened coefficient arrays of the elements.
  CMat matrix() const {
    const Eigen::Index rows = static_cast<Eigen::Index>(MonomialBasis::get(v.dim(), degree)->size()) * w.dim();
    CMat m(rows, size());
    for (int i = 0; i < size(); ++i) m.col(i) = detail::flatten(elements[i].coeffs);
    return m;
  }

  PolyMap combine(const CVec& c) const {
    PolyMap p(v.dim(), w.dim(), degree);
    for (int i = 0; i < size(); ++i) p.coeffs += c(i) * elements[i].coeffs;
    return p;
  }

  /// Least-squares coordinates of P (padded to `degree`) in this basis.
  CVec coordinates(const PolyMap& p) const {
    CVec target = detail::flatten(p.with_degree(degree).coeffs);
    CMat m = matrix();
    if (m.cols() == 0) return CVec(0);
    return m.completeOrthogonalDecomposition().solve(target);
  }
};

inline EquivariantBasis equivariant_basis(const UnitaryRep& v, const UnitaryRep& w, int d) {
  detail::check_basis_limits(v, d);
  require(&v.group() == &w.group() || v.group().same_table(w.group()), "V and W must be representations of one group");
  EquivariantBasis b;
  b.v = v;
  b.w = w;
  b.degree = d;
  for (int k = 0; k <= d; ++k) {
    auto h = homogeneous_equivariants(v, w, k);
    b.per_degree.push_back(static_cast<int>(h.size()));
    for (auto& p : h) {
      b.elements.push_back(p.with_degree(d));
      b.element_degree.push_back(k);
    }
  }
  return b;
}

/// Generators Q_1..Q_m of Poly^G(V,W) over the invariant ring C[V]^G, with the
/// per-degree expression table used by degree reduction.
class ModuleGenerators {
 public:
  ModuleGenerators(UnitaryRep v, UnitaryRep w, int search_bound) : v_(std::move(v)), w_(std::move(w)), bound_(search_bound) {
    require(search_bound >= 0 && search_bound <= kMaxBasisDegree, "search bound must be in [0, 12]");
    detail::check_basis_limits(v_, search_bound);
    for (int k = 0; k <= bound_; ++k) {
      auto candidates = homogeneous_equivariants(v_, w_, k);
      auto products = products_of_degree(k);
      CMat span;
      for (const auto& pr : products) append(span, detail::degree_slice(pr.product, k));
      for (const auto& c : candidates) {
        CVec x = detail::degree_slice(c, k);
        if (in_span(span, x)) continue;
        gens_.push_back(c);
        gen_degree_.push_back(k);
        append(span, x);
      }
    }
    d0_ = gen_degree_.empty() ? 0 : gen_degree_.back();
    certified_ = d0_ < bound_ || gens_.empty();
  }

  const std::vector<PolyMap>& generators() const { return gens_; }
  const std::vector<int>& generator_degrees() const { return gen_degree_; }
  int d0() const { return d0_; }
  bool certified() const { return certified_; }
  int search_bound() const { return bound_; }
  const UnitaryRep& v() const { return v_; }
  const UnitaryRep& w() const { return w_; }

  /// Writes a homogeneous equivariant T of degree k as sum_j h_j Q_j with h_j
  /// homogeneous invariants. The choice is the minimal-norm one, hence linear
  /// in T. Throws NumericalError if T is not in the span.
  std::vector<PolyMap> expression(const PolyMap& t, int k) const {
    const auto& tab = table(k);
    CVec x = detail::degree_slice(t.with_degree(k), k);
    std::vector<PolyMap> h;
    for (size_t j = 0; j < gens_.size(); ++j) h.emplace_back(v_.dim(), 1, std::max(0, k - gen_degree_[j]));
    if (tab.products.empty()) {
      if (x.norm() > tol::span * std::max(1.0, x.norm())) throw NumericalError("top part is not expressible in the module generators");
      return h;
    }
    CVec c = tab.pinv * x;
    if ((tab.span * c - x).norm() > tol::span * std::max(1.0, x.norm()))
      throw NumericalError("top part is not expressible in the module generators");
    for (size_t m = 0; m < tab.products.size(); ++m) {
      const auto& pr = tab.products[m];
      h[pr.generator].coeffs += c(static_cast<Eigen::Index>(m)) * pr.invariant.coeffs;
    }
    return h;
  }

  /// h_ij table for the degree-k homogeneous basis elements P_i.
  std::vector<std::vector<PolyMap>> h_table(int k) const {
    std::vector<std::vector<PolyMap>> out;
    for (const auto& p : homogeneous_equivariants(v_, w_, k)) out.push_back(expression(p, k));
    return out;
  }

 private:
  struct Product {
    int generator;
    PolyMap invariant;  // homogeneous scalar invariant
    PolyMap product;    // invariant * generator, degree bound k
  };
  struct Table {
    std::vector<Product> products;
    CMat span;
    CMat pinv;
  };

  std::vector<Product> products_of_degree(int k) const {
    std::vector<Product> out;
    for (size_t j = 0; j < gens_.size(); ++j) {
      const int r = k - gen_degree_[j];
      if (r < 0) continue;
      for (const auto& f : invariants(r)) {
        Product p{static_cast<int>(j), f, multiply(f, gens_[j].with_degree(gen_degree_[j]))};
        out.push_back(std::move(p));
      }
    }
    return out;
  }

  const std::vector<PolyMap>& invariants(int r) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = invariants_.find(r);
    if (it != invariants_.end()) return it->second;
    auto triv = trivial_rep(v_.group_ptr());
    return invariants_.emplace(r, homogeneous_equivariants(v_, triv, r)).first->second;
  }

  const Table& table(int k) const {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = tables_.find(k);
      if (it != tables_.end()) return it->second;
    }
    require(k <= 2 * kMaxBasisDegree, "degree reduction beyond supported degree");
    Table t;
    t.products = products_of_degree(k);
    if (!t.products.empty()) {
      t.span = CMat(detail::degree_slice(t.products.front().product, k).size(), 0);
      for (const auto& pr : t.products) append(t.span, detail::degree_slice(pr.product, k));
      Eigen::CompleteOrthogonalDecomposition<CMat> cod(t.span);
      cod.setThreshold(1e-10);
      t.pinv = cod.pseudoInverse();
    }
    std::lock_guard<std::mutex> lock(mu_);
    return tables_.emplace(k, std::move(t)).first->second;
  }

  static void append(CMat& m, const CVec& x) {
    if (m.rows() == 0) m = CMat(x.size(), 0);
    m.conservativeResize(Eigen::NoChange, m.cols() + 1);
    m.col(m.cols() - 1) = x;
  }

  static bool in_span(const CMat& span, const CVec& x) {
    if (span.cols() == 0) return x.norm() <= tol::span;
    CVec c = span.completeOrthogonalDecomposition().solve(x);
    return (span * c - x).norm() <= tol::span * std::max(1.0, x.norm());
  }

  UnitaryRep v_, w_;
  int bound_;
  std::vector<PolyMap> gens_;
  std::vector<int> gen_degree_;
  int d0_ = 0;
  bool certified_ = false;
  mutable std::mutex mu_;
  mutable std::map<int, std::vector<PolyMap>> invariants_;
  mutable std::map<int, Table> tables_;
};

inline std::shared_ptr<const ModuleGenerators> module_generators(const UnitaryRep& v, const UnitaryRep& w, int search_bound) {
  return std::make_shared<const ModuleGenerators>(v, w, search_bound);
}

/// The map phi': lowers an equivariant P to degree <= d without changing its
/// value at v, peeling one top degree at a time.
inline PolyMap degree_reduce(const CVec& v, const PolyMap& p, int d, const ModuleGenerators& gens) {
  require(d >= gens.d0(), "target degree is below the certified generator degree");
  int top = p.actual_degree();
  if (top <= d) return p.with_degree(d);
  PolyMap cur = p;
  while (top > d) {
    PolyMap t = cur.homogeneous_part(top);
    auto h = gens.expression(t, top);
    const auto& b = cur.basis();
    cur.coeffs.middleRows(b.degree_begin(top), b.count_of_degree(top)).setZero();
    for (size_t j = 0; j < h.size(); ++j) {
      cplx hv = h[j].evaluate(v)(0);
      if (hv != cplx(0.0)) cur += gens.generators()[j] * hv;
    }
    cur = cur.with_degree(top - 1);
    top = cur.actual_degree();
  }
  return cur.with_degree(d);
}

namespace detail {

// Distinct points of the orbit G v, deduplicated at the solver radius.
inline std::vector<CVec> orbit_points(const UnitaryRep& rep, const CVec& x) {
  std::vector<CVec> pts;
  const double r = tol::dedup * std::max(1.0, x.norm());
  for (int g = 0; g < rep.group().order(); ++g) {
    CVec y = rep.matrix(g) * x;
    bool seen = false;
    for (const auto& p : pts)
      if ((p - y).norm() <= r) seen = true;
    if (!seen) pts.push_back(y);
  }
  return pts;
}

// Univariate Lagrange polynomial through (t_i, y_i), as coefficients c_0..c_{m-1}.
inline std::vector<cplx> lagrange_coefficients(const std::vector<cplx>& t, const std::vector<cplx>& y) {
  const size_t m = t.size();
  std::vector<cplx> out(m, 0.0);
  for (size_t i = 0; i < m; ++i) {
    if (y[i] == cplx(0.0)) continue;
    std::vector<cplx> basis{1.0};
    cplx denom = 1.0;
    for (size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      std::vector<cplx> next(basis.size() + 1, 0.0);
      for (size_t k = 0; k < basis.size(); ++k) {
        next[k + 1] += basis[k];
        next[k] -= t[j] * basis[k];
      }
      basis = std::move(next);
      denom *= t[i] - t[j];
    }
    for (size_t k = 0; k < basis.size(); ++k) out[k] += y[i] * basis[k] / denom;
  }
  return out;
}

}  // namespace detail

/// Scalar H-invariant polynomial equal to 1 on H v and 0 on the rest of G v.
inline PolyMap lagrange_selector(const UnitaryRep& rep, const Subgroup& h, const CVec& v, std::uint64_t seed = kLibrarySeed) {
  require(v.size() == rep.dim(), "point has the wrong dimension");
  const auto& g = rep.group();
  auto stab = isotropy_group(rep, v);
  for (int e : stab.members) require(h.contains(e), "stabilizer of the point is not contained in H");
  if (h.order() == g.order()) return PolyMap::constant(rep.dim(), CVec::Ones(1));

  auto pts = detail::orbit_points(rep, v);
  std::vector<cplx> target;
  const double r = tol::dedup * std::max(1.0, v.norm());
  for (const auto& p : pts) {
    bool in_hv = false;
    for (int x : h.members)
      if ((rep.matrix(x) * v - p).norm() <= r) in_hv = true;
    target.push_back(in_hv ? 1.0 : 0.0);
  }
  RandomStream rng(seed);
  for (int attempt = 0; attempt < 10; ++attempt) {
    CVec dir = rng.complex_vector(rep.dim());
    dir /= dir.norm();
    std::vector<cplx> t;
    for (const auto& p : pts) t.push_back(dir.dot(p));
    bool separated = true;
    for (size_t i = 0; i < t.size() && separated; ++i)
      for (size_t j = i + 1; j < t.size(); ++j)
        if (std::abs(t[i] - t[j]) < tol::separation) separated = false;
    if (!separated) continue;
    auto c = detail::lagrange_coefficients(t, target);
    const int m = static_cast<int>(c.size()) - 1;
    PolyMap uni(1, 1, m);
    for (int k = 0; k <= m; ++k) uni.coeffs(k, 0) = c[k];
    PolyMap lin = compose_linear(uni, dir.adjoint());
    PolyMap avg(rep.dim(), 1, m);
    for (int x : h.members) avg += compose_linear(lin, rep.matrix(x));
    avg.coeffs /= static_cast<double>(h.order());
    double worst = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) worst = std::max(worst, std::abs(avg.evaluate(pts[i])(0) - target[i]));
    if (worst <= 1e-9) return avg;
  }
  throw NumericalError("orbit projection collision: no separating direction in 10 attempts");
}

/// Equivariant P of degree <= |G| with P(v) = w, where H is the exact
/// stabilizer of v and w is H-fixed.
inline PolyMap interpolate(const UnitaryRep& vrep, const UnitaryRep& wrep, const Subgroup& h, const CVec& v, const CVec& w,
                           std::uint64_t seed = kLibrarySeed) {
  require(v.size() == vrep.dim() && w.size() == wrep.dim(), "point or value has the wrong dimension");
  auto stab = isotropy_group(vrep, v);
  require(stab == h, "H must be the exact stabilizer of v");
  for (int x : h.members)
    require((wrep.matrix(x) * w - w).norm() <= tol::span * (1.0 + w.norm()), "target value is not fixed by H");
  const auto& g = vrep.group();
  PolyMap f = lagrange_selector(vrep, h, v, seed);
  f.coeffs /= static_cast<double>(h.order());
  PolyMap p(vrep.dim(), wrep.dim(), g.order());
  for (int x = 0; x < g.order(); ++x) {
    PolyMap fx = compose_linear(f, vrep.matrix(x));
    p += multiply(fx, PolyMap::constant(vrep.dim(), wrep.matrix(g.inv(x)) * w));
  }
  if ((p.evaluate(v) - w).norm() > 1e-9 * (1.0 + w.norm())) throw NumericalError("interpolation residual above tolerance");
  return p;
}

/// Output of the restriction map theta: the H-problem on the normal slice.
struct Restriction {
  Subgroup h;
  GroupPtr h_group;    // H as an abstract group (element i = h.members[i])
  UnitaryRep v_normal;  // H acting on the normal slice V-check_H
  UnitaryRep w_h;       // W restricted to H
  CMat ring_basis;      // orthonormal basis of V-ring_H
  CMat normal_basis;    // orthonormal basis of V-check_H
  CVec ring_point;      // v-ring_H, in V coordinates
  CVec normal_coords;   // v-check_H, in normal_basis coordinates
  PolyMap q;            // u -> P(ring_point + normal_basis u)
};

inline Restriction restrict_theta(const CVec& v, const PolyMap& p, const UnitaryRep& vrep, const UnitaryRep& wrep, const Subgroup& h) {
  require(v.size() == vrep.dim() && p.nvars == vrep.dim() && p.ntarget == wrep.dim(), "restriction inputs have inconsistent shapes");
  Restriction r;
  r.h = h;
  r.h_group = subgroup_as_group(vrep.group(), h);
  auto dec = basic_decomposition(vrep, h);
  r.ring_basis = dec.ring;
  r.normal_basis = dec.normal;
  r.ring_point = dec.ring * (dec.ring.adjoint() * v);
  r.normal_coords = dec.normal.adjoint() * v;
  r.v_normal = vrep.restricted(r.h_group, h.members).on_subspace(dec.normal);
  r.w_h = wrep.restricted(r.h_group, h.members);
  r.q = compose_affine(p, dec.normal, r.ring_point);
  return r;
}

/// theta' = phi'' o theta'': extends an H-equivariant Q on the normal slice at
/// v to a G-equivariant map of degree <= d with value Q(v-check) at v.
inline PolyMap extend_theta_prime(const CVec& v, const Restriction& r, const UnitaryRep& vrep, const UnitaryRep& wrep, int d,
                                  const ModuleGenerators& gens, std::uint64_t seed = kLibrarySeed) {
  const auto& g = vrep.group();
  PolyMap sel = lagrange_selector(vrep, r.h, v, seed);
  // Q constant along the ring directions
  PolyMap qt = compose_linear(r.q, r.normal_basis.adjoint());
  PolyMap lq = multiply(sel, qt);
  PolyMap sum(vrep.dim(), wrep.dim(), lq.degree);
  for (int x = 0; x < g.order(); ++x) sum += apply_target(wrep.matrix(g.inv(x)), compose_linear(lq, vrep.matrix(x)));
  sum.coeffs /= static_cast<double>(r.h.order());
  return degree_reduce(v, sum, d, gens);
}

}  // namespace fop
