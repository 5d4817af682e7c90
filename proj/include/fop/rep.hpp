#pragma once

#include "fop/group.hpp"

#include <numbers>
#include <sstream>

namespace fop {

inline constexpr int kMaxRepDim = 6;

/// Representation description: diagonal weights for abelian presentations, or
/// one matrix per presentation generator.
struct RepSpec {
  enum class Kind { weights, matrices };
  Kind kind = Kind::weights;
  std::vector<std::vector<int>> weights;  // per coordinate, one entry per cyclic factor
  std::vector<CMat> generators;

  static RepSpec from_weights(std::vector<std::vector<int>> w) {
    RepSpec s;
    s.kind = Kind::weights;
    s.weights = std::move(w);
    return s;
  }
  static RepSpec from_matrices(std::vector<CMat> m) {
    RepSpec s;
    s.kind = Kind::matrices;
    s.generators = std::move(m);
    return s;
  }
};

/// Complex unitary representation, stored as one matrix per group element.
class UnitaryRep {
 public:
  UnitaryRep() = default;

  UnitaryRep(GroupPtr group, std::vector<CMat> matrices) : group_(std::move(group)), mats_(std::move(matrices)) {
    require(group_ != nullptr, "representation needs a group");
    require(static_cast<int>(mats_.size()) == group_->order(), "one matrix per group element required");
    dim_ = static_cast<int>(mats_.front().rows());
    for (const auto& m : mats_) require(m.rows() == dim_ && m.cols() == dim_, "representation matrices must be square of equal size");
    validate();
    chi_.resize(mats_.size());
    for (size_t g = 0; g < mats_.size(); ++g) chi_[g] = mats_[g].trace();
  }

  const GroupPtr& group_ptr() const { return group_; }
  const FiniteGroup& group() const { return *group_; }
  int dim() const { return dim_; }
  const CMat& matrix(int g) const { return mats_[g]; }
  const std::vector<CMat>& matrices() const { return mats_; }
  const Character& character() const { return chi_; }

  CVec act(int g, const CVec& v) const { return mats_[g] * v; }

  /// Restriction to a subgroup given as an abstract group with member map.
  UnitaryRep restricted(GroupPtr h, const std::vector<int>& members) const {
    std::vector<CMat> m;
    for (int e : members) m.push_back(mats_[e]);
    return UnitaryRep(std::move(h), std::move(m));
  }

  /// Representation on an invariant subspace spanned by orthonormal columns.
  UnitaryRep on_subspace(const CMat& basis) const {
    std::vector<CMat> m;
    for (const auto& a : mats_) m.push_back(basis.adjoint() * a * basis);
    if (basis.cols() == 0) return UnitaryRep(group_, std::move(m), Empty{});
    return UnitaryRep(group_, std::move(m));
  }

  bool is_effective() const {
    for (int g = 1; g < group_->order(); ++g)
      if ((mats_[g] - CMat::Identity(dim_, dim_)).cwiseAbs().maxCoeff() <= tol::structural) return false;
    return true;
  }

 private:
  struct Empty {};
  UnitaryRep(GroupPtr g, std::vector<CMat> m, Empty) : group_(std::move(g)), mats_(std::move(m)), dim_(0) {
    chi_.assign(mats_.size(), cplx(0.0));
  }

  void validate() const {
    const auto& g = *group_;
    for (int a = 0; a < g.order(); ++a) {
      double u = (mats_[a].adjoint() * mats_[a] - CMat::Identity(dim_, dim_)).cwiseAbs().maxCoeff();
      if (u > tol::structural) throw ValidationError("representation matrix is not unitary");
      for (int b = 0; b < g.order(); ++b) {
        double r = (mats_[a] * mats_[b] - mats_[g.mul(a, b)]).cwiseAbs().maxCoeff();
        if (r > tol::structural) throw ValidationError("matrices violate the group relations");
      }
    }
  }

  GroupPtr group_;
  std::vector<CMat> mats_;
  int dim_ = 0;
  Character chi_;
};

namespace detail {

inline std::vector<CMat> extend_over_tree(const FiniteGroup& g, const std::vector<CMat>& gens, int dim) {
  std::vector<CMat> m(g.order(), CMat::Identity(dim, dim));
  for (const auto& e : g.spanning_tree()) m[e.element] = m[e.parent] * gens[e.gen];
  return m;
}

// Conjugates by the square root of the G-averaged Gram matrix.
inline std::vector<CMat> unitarize(std::vector<CMat> m) {
  const Eigen::Index d = m.front().rows();
  CMat gram = CMat::Zero(d, d);
  for (const auto& a : m) gram += a.adjoint() * a;
  gram /= static_cast<double>(m.size());
  Eigen::SelfAdjointEigenSolver<CMat> es(gram);
  if (es.eigenvalues().minCoeff() <= 1e-12) throw ValidationError("representation matrices are singular");
  CMat s = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
  CMat s_inv = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
  for (auto& a : m) {
    a = s * a * s_inv;
    // re-orthonormalize to remove rounding drift
    Eigen::HouseholderQR<CMat> qr(a);
    CMat q = qr.householderQ();
    CMat r = q.adjoint() * a;
    for (Eigen::Index i = 0; i < d; ++i)
      if (std::abs(r(i, i)) > 0) q.col(i) *= r(i, i) / std::abs(r(i, i));
    a = q;
  }
  return m;
}

}  // namespace detail

inline UnitaryRep make_rep(const GroupPtr& g, const RepSpec& spec) {
  require(g != nullptr, "representation needs a group");
  const auto& grp = *g;
  const size_t ngen = grp.generators().size();
  if (spec.kind == RepSpec::Kind::weights) {
    const auto& p = grp.presentation();
    std::vector<int> orders;
    if (p.kind == GroupSpec::Kind::cyclic) orders = {p.n};
    else if (p.kind == GroupSpec::Kind::product) orders = p.orders;
    else throw ValidationError("weight representations need a cyclic or product group");
    const int dim = static_cast<int>(spec.weights.size());
    require(dim >= 1 && dim <= kMaxRepDim, "representation dimension must be in [1, 6]");
    std::vector<CMat> gens(ngen, CMat::Identity(dim, dim));
    for (int c = 0; c < dim; ++c) {
      require(spec.weights[c].size() == orders.size(), "each coordinate needs one weight per cyclic factor");
      for (size_t f = 0; f < orders.size(); ++f) {
        double angle = 2.0 * std::numbers::pi * spec.weights[c][f] / orders[f];
        gens[f](c, c) = std::polar(1.0, angle);
      }
    }
    return UnitaryRep(g, detail::extend_over_tree(grp, gens, dim));
  }
  require(spec.generators.size() == ngen, "one matrix per group generator required");
  const int dim = static_cast<int>(spec.generators.front().rows());
  require(dim >= 1 && dim <= kMaxRepDim, "representation dimension must be in [1, 6]");
  for (const auto& m : spec.generators) require(m.rows() == dim && m.cols() == dim, "generator matrices must be square of equal size");
  auto mats = detail::extend_over_tree(grp, spec.generators, dim);
  bool unitary = true;
  for (const auto& a : mats)
    if ((a.adjoint() * a - CMat::Identity(dim, dim)).cwiseAbs().maxCoeff() > tol::structural) unitary = false;
  if (!unitary) mats = detail::unitarize(std::move(mats));
  return UnitaryRep(g, std::move(mats));
}

inline UnitaryRep trivial_rep(const GroupPtr& g, int dim = 1) {
  return UnitaryRep(g, std::vector<CMat>(g->order(), CMat::Identity(dim, dim)));
}

inline UnitaryRep direct_sum(const UnitaryRep& a, const UnitaryRep& b) {
  std::vector<CMat> m;
  const int n = a.dim() + b.dim();
  for (int g = 0; g < a.group().order(); ++g) {
    CMat x = CMat::Zero(n, n);
    x.topLeftCorner(a.dim(), a.dim()) = a.matrix(g);
    x.bottomRightCorner(b.dim(), b.dim()) = b.matrix(g);
    m.push_back(std::move(x));
  }
  return UnitaryRep(a.group_ptr(), std::move(m));
}

/// Natural permutation representation of a permutation group.
inline UnitaryRep permutation_rep(const GroupPtr& g) {
  const auto& p = g->presentation();
  require(p.kind == GroupSpec::Kind::permutation, "permutation representation needs a permutation group");
  std::vector<CMat> gens;
  for (const auto& perm : p.generators) {
    CMat m = CMat::Zero(p.degree, p.degree);
    for (int i = 0; i < p.degree; ++i) m(perm[i], i) = 1.0;
    gens.push_back(m);
  }
  return UnitaryRep(g, detail::extend_over_tree(*g, gens, p.degree));
}

/// Averaging projector (1/|H|) sum_h rho(h).
inline CMat fixed_projector(const UnitaryRep& v, const Subgroup& h) {
  CMat p = CMat::Zero(v.dim(), v.dim());
  for (int e : h.members) p += v.matrix(e);
  return p / static_cast<double>(h.order());
}

/// Orthonormal basis of the H-fixed subspace V^H.
inline CMat fixed_subspace(const UnitaryRep& v, const Subgroup& h) {
  CMat p = fixed_projector(v, h);
  cplx avg = 0.0;
  for (int e : h.members) avg += v.character()[e];
  avg /= static_cast<double>(h.order());
  long expected = std::lround(avg.real());
  if (std::abs(avg - static_cast<double>(expected)) > tol::rank)
    throw NumericalError("character average is not an integer; invalid representation");
  CMat basis = orthonormal_columns(p, tol::rank);
  if (basis.cols() != expected) throw NumericalError("fixed-space projector rank disagrees with the character count");
  return basis;
}

struct BasicDecomposition {
  CMat ring;    // W-ring: the H-fixed part
  CMat normal;  // its orthogonal complement
};

inline BasicDecomposition basic_decomposition(const UnitaryRep& w, const Subgroup& h) {
  BasicDecomposition d;
  d.ring = fixed_subspace(w, h);
  CMat comp = CMat::Identity(w.dim(), w.dim()) - d.ring * d.ring.adjoint();
  d.normal = orthonormal_columns(comp, tol::rank);
  return d;
}

/// Orthonormal basis of the isotypic component of `chi` (an irreducible
/// character of the subgroup, indexed like h.members).
inline CMat isotypic_subspace(const UnitaryRep& v, const Subgroup& h, const Character& chi) {
  CMat p = CMat::Zero(v.dim(), v.dim());
  for (int i = 0; i < h.order(); ++i) p += std::conj(chi[i]) * v.matrix(h.members[i]);
  p *= chi[0].real() / static_cast<double>(h.order());
  return orthonormal_columns(p, tol::rank);
}

/// Multiplicity <chi_irrep, chi> over a group, rounded; throws if not integral.
inline int multiplicity(const Character& irrep, const Character& chi) {
  cplx s = 0.0;
  for (size_t g = 0; g < chi.size(); ++g) s += std::conj(irrep[g]) * chi[g];
  s /= static_cast<double>(chi.size());
  long m = std::lround(s.real());
  if (std::abs(s - static_cast<double>(m)) > tol::rank) throw NumericalError("non-integral multiplicity; invalid representation");
  return static_cast<int>(m);
}

/// Stabilizer {g : |rho(g)v - v| <= radius}; radius < 0 selects the default
/// relative radius. Throws NumericalError when the set is not a subgroup.
inline Subgroup isotropy_group(const UnitaryRep& v, const CVec& x, double radius = -1.0) {
  if (radius < 0) radius = tol::stabilizer * std::max(1.0, x.norm());
  std::vector<int> members;
  for (int g = 0; g < v.group().order(); ++g)
    if ((v.matrix(g) * x - x).norm() <= radius) members.push_back(g);
  return subgroup_from_members(v.group(), std::move(members));
}

/// Isotropy type: nontrivial irreducible multiplicities of V and W restricted
/// to H (trivial summands excluded).
struct IsotropyType {
  GroupPtr group;               // H as an abstract group
  std::vector<int> irrep_dims;  // dims of the nontrivial irreducibles of H
  std::vector<int> v_mult;
  std::vector<int> w_mult;

  int v_dim() const { return dot(v_mult); }
  int w_dim() const { return dot(w_mult); }

 private:
  int dot(const std::vector<int>& m) const {
    int s = 0;
    for (size_t i = 0; i < m.size(); ++i) s += m[i] * irrep_dims[i];
    return s;
  }
};

struct StabilizedIsotropyType {
  GroupPtr group;
  std::vector<int> irrep_dims;
  std::vector<int> diff;  // v_mult - w_mult per nontrivial irreducible

  std::vector<int> positive() const {
    std::vector<int> p;
    for (int d : diff) p.push_back(std::max(d, 0));
    return p;
  }
  std::vector<int> negative() const {
    std::vector<int> p;
    for (int d : diff) p.push_back(std::max(-d, 0));
    return p;
  }
};

inline std::vector<int> nontrivial_multiplicities(const FiniteGroup& h, const Character& chi) {
  const auto& irreps = h.irreducible_characters();
  std::vector<int> m;
  for (size_t i = 1; i < irreps.size(); ++i) m.push_back(multiplicity(irreps[i], chi));
  return m;
}

inline IsotropyType isotropy_type_of(const UnitaryRep& v, const UnitaryRep& w, const Subgroup& h) {
  IsotropyType t;
  t.group = subgroup_as_group(v.group(), h);
  auto dims = t.group->irreducible_dims();
  t.irrep_dims.assign(dims.begin() + 1, dims.end());
  Character cv, cw;
  for (int e : h.members) {
    cv.push_back(v.character()[e]);
    cw.push_back(w.character()[e]);
  }
  t.v_mult = nontrivial_multiplicities(*t.group, cv);
  t.w_mult = nontrivial_multiplicities(*t.group, cw);
  return t;
}

inline StabilizedIsotropyType stabilize_type(const IsotropyType& t) {
  StabilizedIsotropyType s;
  s.group = t.group;
  s.irrep_dims = t.irrep_dims;
  for (size_t i = 0; i < t.v_mult.size(); ++i) s.diff.push_back(t.v_mult[i] - t.w_mult[i]);
  return s;
}

namespace detail {

// Whether some isomorphism a -> b carries every multiplicity vector of `ma`
// onto the corresponding vector of `mb` (indices over nontrivial irreducibles).
inline bool multiplicities_match(const FiniteGroup& a, const FiniteGroup& b, const std::vector<std::vector<int>>& ma,
                                 const std::vector<std::vector<int>>& mb) {
  if (a.order() != b.order()) return false;
  if (a.same_table(b) && ma == mb) return true;
  if (a.order() > kMaxIsomorphismOrder) {
    if (a.same_table(b)) return false;
    throw ValidationError("cross-group isotropy comparison above order cap (24)");
  }
  const auto& ia = a.irreducible_characters();
  const auto& ib = b.irreducible_characters();
  if (ia.size() != ib.size()) return false;
  return for_each_isomorphism(a, b, [&](const std::vector<int>& phi) {
    // pull back each irreducible of b along phi and locate it among a's
    std::vector<int> to_a(ib.size(), -1);
    for (size_t j = 0; j < ib.size(); ++j) {
      for (size_t i = 0; i < ia.size(); ++i) {
        double d = 0.0;
        for (int x = 0; x < a.order(); ++x) d = std::max(d, std::abs(ia[i][x] - ib[j][phi[x]]));
        if (d < 1e-6) to_a[j] = static_cast<int>(i);
      }
      if (to_a[j] < 0) return false;
    }
    for (size_t k = 0; k < ma.size(); ++k)
      for (size_t j = 1; j < ib.size(); ++j)
        if (mb[k][j - 1] != ma[k][to_a[j] - 1]) return false;
    return true;
  });
}

}  // namespace detail

inline bool types_equal(const StabilizedIsotropyType& a, const StabilizedIsotropyType& b) {
  return detail::multiplicities_match(*a.group, *b.group, {a.diff}, {b.diff});
}

inline bool isotropy_types_equal(const IsotropyType& a, const IsotropyType& b) {
  return detail::multiplicities_match(*a.group, *b.group, {a.v_mult, a.w_mult}, {b.v_mult, b.w_mult});
}

inline std::string format_multiplicities(const std::vector<int>& m) {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < m.size(); ++i) os << (i ? "," : "") << m[i];
  os << ']';
  return os.str();
}

inline std::string type_label(const IsotropyType& t) {
  if (t.group->order() == 1) return "free";
  std::ostringstream os;
  os << "H" << t.group->order() << " v=" << format_multiplicities(t.v_mult) << " w=" << format_multiplicities(t.w_mult);
  return os.str();
}

inline std::string type_label(const StabilizedIsotropyType& t) {
  if (t.group->order() == 1) return "free";
  std::ostringstream os;
  os << "H" << t.group->order() << " diff=" << format_multiplicities(t.diff);
  return os.str();
}

}  // namespace fop
