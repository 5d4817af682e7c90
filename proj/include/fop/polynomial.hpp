#pragma once

#include "fop/common.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace fop {

/// Exponent tuples of total degree 0..d in graded-lex order. Within one degree,
/// tuples are sorted lexicographically descending, so z1^2 precedes z1*z2.
/// basis(n, d) is always a prefix of basis(n, d + 1).
class MonomialBasis {
 public:
  MonomialBasis(int nvars, int degree) : n_(nvars), d_(degree) {
    require(nvars >= 0 && degree >= 0, "monomial basis needs nonnegative sizes");
    std::vector<int> e(n_, 0);
    start_.push_back(0);
    for (int k = 0; k <= d_; ++k) {
      emit(k, 0, e);
      start_.push_back(static_cast<int>(exps_.size()));
    }
    for (size_t i = 0; i < exps_.size(); ++i) index_[key(exps_[i])] = static_cast<int>(i);
    parent_.resize(exps_.size(), {-1, -1});
    for (size_t i = 1; i < exps_.size(); ++i) {
      auto p = exps_[i];
      int v = 0;
      while (p[v] == 0) ++v;
      --p[v];
      parent_[i] = {index_.at(key(p)), v};
    }
  }

  /// Shared instance per (nvars, degree).
  static std::shared_ptr<const MonomialBasis> get(int nvars, int degree) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{nvars, degree}];
    if (!slot) slot = std::make_shared<const MonomialBasis>(nvars, degree);
    return slot;
  }

  int nvars() const { return n_; }
  int degree() const { return d_; }
  int size() const { return static_cast<int>(exps_.size()); }
  const std::vector<int>& exponents(int i) const { return exps_[i]; }
  int total_degree(int i) const {
    int s = 0;
    for (int x : exps_[i]) s += x;
    return s;
  }
  /// First index of degree k; degree_end(k) is one past the last.
  int degree_begin(int k) const { return start_[k]; }
  int degree_end(int k) const { return start_[k + 1]; }
  int count_of_degree(int k) const { return start_[k + 1] - start_[k]; }

  /// Index of an exponent tuple, or -1 if its degree exceeds the bound.
  int index_of(const std::vector<int>& e) const {
    auto it = index_.find(key(e));
    return it == index_.end() ? -1 : it->second;
  }

  /// Monomial i equals monomial parent(i).first times variable parent(i).second.
  std::pair<int, int> parent(int i) const { return parent_[i]; }

  /// All monomial values at v.
  CVec values(const CVec& v) const {
    CVec m(size());
    m(0) = 1.0;
    for (int i = 1; i < size(); ++i) m(i) = m(parent_[i].first) * v(parent_[i].second);
    return m;
  }

  std::string name(int i) const {
    const auto& e = exps_[i];
    std::ostringstream os;
    bool first = true;
    for (int v = 0; v < n_; ++v) {
      if (e[v] == 0) continue;
      if (!first) os << '*';
      first = false;
      os << (n_ == 1 ? std::string("z") : "z" + std::to_string(v + 1));
      if (e[v] > 1) os << '^' << e[v];
    }
    if (first) os << '1';
    return os.str();
  }

 private:
  std::uint64_t key(const std::vector<int>& e) const {
    std::uint64_t k = 0;
    for (int x : e) {
      if (x < 0 || x > 63) return ~0ULL;
      k = k * 64 + static_cast<std::uint64_t>(x);
    }
    return k;
  }

  void emit(int remaining, int var, std::vector<int>& e) {
    if (var == n_ - 1 || n_ == 0) {
      if (n_ == 0) {
        if (remaining == 0) exps_.push_back(e);
        return;
      }
      e[var] = remaining;
      exps_.push_back(e);
      e[var] = 0;
      return;
    }
    for (int x = remaining; x >= 0; --x) {
      e[var] = x;
      emit(remaining - x, var + 1, e);
    }
    e[var] = 0;
  }

  int n_, d_;
  std::vector<std::vector<int>> exps_;
  std::vector<int> start_;
  std::unordered_map<std::uint64_t, int> index_;
  std::vector<std::pair<int, int>> parent_;
};

/// Polynomial map C^nvars -> C^ntarget of degree <= degree, stored densely:
/// coeffs(i, k) multiplies monomial i in target coordinate k.
struct PolyMap {
  int nvars = 0;
  int ntarget = 0;
  int degree = 0;
  CMat coeffs;

  PolyMap() = default;
  PolyMap(int n, int t, int d) : nvars(n), ntarget(t), degree(d) {
    coeffs = CMat::Zero(MonomialBasis::get(n, d)->size(), t);
  }
  PolyMap(int n, int t, int d, CMat c) : nvars(n), ntarget(t), degree(d), coeffs(std::move(c)) {
    require(coeffs.rows() == MonomialBasis::get(n, d)->size() && coeffs.cols() == t, "coefficient array has the wrong shape");
  }

  static PolyMap constant(int n, const CVec& w) {
    PolyMap p(n, static_cast<int>(w.size()), 0);
    p.coeffs.row(0) = w.transpose();
    return p;
  }
  /// Single monomial with exponent e in target coordinate k.
  static PolyMap monomial(const std::vector<int>& e, int ntarget, int k, cplx c = 1.0) {
    int d = 0;
    for (int x : e) d += x;
    PolyMap p(static_cast<int>(e.size()), ntarget, d);
    p.coeffs(p.basis().index_of(e), k) = c;
    return p;
  }

  std::shared_ptr<const MonomialBasis> basis_ptr() const { return MonomialBasis::get(nvars, degree); }
  const MonomialBasis& basis() const { return *MonomialBasis::get(nvars, degree); }

  /// Largest degree carrying a coefficient above `threshold` (-1 for zero).
  int actual_degree(double threshold = 0.0) const {
    const auto& b = basis();
    for (int k = degree; k >= 0; --k)
      for (int i = b.degree_begin(k); i < b.degree_end(k); ++i)
        if (coeffs.row(i).cwiseAbs().maxCoeff() > threshold) return k;
    return -1;
  }

  /// Zero-padded or truncated copy at another degree bound.
  PolyMap with_degree(int d) const {
    PolyMap p(nvars, ntarget, d);
    const int rows = std::min<Eigen::Index>(p.coeffs.rows(), coeffs.rows());
    p.coeffs.topRows(rows) = coeffs.topRows(rows);
    return p;
  }

  PolyMap homogeneous_part(int k) const {
    PolyMap p(nvars, ntarget, degree);
    if (k < 0 || k > degree) return p;
    const auto& b = basis();
    p.coeffs.middleRows(b.degree_begin(k), b.count_of_degree(k)) = coeffs.middleRows(b.degree_begin(k), b.count_of_degree(k));
    return p;
  }

  CVec evaluate(const CVec& v) const {
    require(v.size() == nvars, "evaluation point has the wrong dimension");
    return coeffs.transpose() * basis().values(v);
  }

  /// ntarget x nvars complex Jacobian.
  CMat jacobian(const CVec& v) const {
    require(v.size() == nvars, "evaluation point has the wrong dimension");
    const auto& b = basis();
    CVec m = b.values(v);
    CMat j = CMat::Zero(ntarget, nvars);
    for (int i = 1; i < b.size(); ++i) {
      const auto& e = b.exponents(i);
      for (int x = 0; x < nvars; ++x) {
        if (e[x] == 0) continue;
        auto f = e;
        --f[x];
        j.col(x) += static_cast<double>(e[x]) * m(b.index_of(f)) * coeffs.row(i).transpose();
      }
    }
    return j;
  }

  double sup_norm() const { return fop::sup_norm(coeffs); }

  PolyMap& operator+=(const PolyMap& o) {
    require(nvars == o.nvars && ntarget == o.ntarget, "polynomial maps have different shapes");
    if (o.degree > degree) *this = with_degree(o.degree);
    coeffs.topRows(o.coeffs.rows()) += o.coeffs;
    return *this;
  }
  PolyMap& operator-=(const PolyMap& o) { return *this += o * cplx(-1.0); }
  PolyMap operator*(cplx s) const {
    PolyMap p = *this;
    p.coeffs *= s;
    return p;
  }
  friend PolyMap operator+(PolyMap a, const PolyMap& b) { return a += b; }
  friend PolyMap operator-(PolyMap a, const PolyMap& b) { return a -= b; }
  friend PolyMap operator*(cplx s, const PolyMap& p) { return p * s; }

  bool operator==(const PolyMap& o) const {
    return nvars == o.nvars && ntarget == o.ntarget && degree == o.degree && coeffs == o.coeffs;
  }
};

inline CVec evaluate(const PolyMap& p, const CVec& v) { return p.evaluate(v); }
inline CMat jacobian(const PolyMap& p, const CVec& v) { return p.jacobian(v); }

/// Post-composition with a linear map of the target: v -> m * P(v).
inline PolyMap apply_target(const CMat& m, const PolyMap& p) {
  require(m.cols() == p.ntarget, "target map has the wrong width");
  return PolyMap(p.nvars, static_cast<int>(m.rows()), p.degree, p.coeffs * m.transpose());
}

/// Row i holds the expansion of old monomial i under x = a*y + b, over the
/// monomials of the new variables y (same degree bound).
inline CMat substitution_matrix(int degree, const CMat& a, const CVec& b) {
  const int n_old = static_cast<int>(a.rows());
  const int n_new = static_cast<int>(a.cols());
  require(b.size() == n_old, "affine shift has the wrong dimension");
  auto ob = MonomialBasis::get(n_old, degree);
  auto nb = MonomialBasis::get(n_new, degree);
  // product table: monomial i times variable j
  std::vector<std::vector<int>> times(nb->size(), std::vector<int>(n_new, -1));
  for (int i = 0; i < nb->size(); ++i) {
    if (nb->total_degree(i) >= degree) continue;
    for (int j = 0; j < n_new; ++j) {
      auto e = nb->exponents(i);
      ++e[j];
      times[i][j] = nb->index_of(e);
    }
  }
  CMat s = CMat::Zero(ob->size(), nb->size());
  s(0, 0) = 1.0;
  for (int i = 1; i < ob->size(); ++i) {
    auto [p, v] = ob->parent(i);
    const int dp = ob->total_degree(p);
    for (int k = 0; k < nb->size(); ++k) {
      cplx c = s(p, k);
      if (c == cplx(0.0)) continue;
      if (nb->total_degree(k) > dp) break;
      s(i, k) += c * b(v);
      for (int j = 0; j < n_new; ++j)
        if (a(v, j) != cplx(0.0)) s(i, times[k][j]) += c * a(v, j);
    }
  }
  return s;
}

/// Pre-composition with an affine map: y -> P(a*y + b).
inline PolyMap compose_affine(const PolyMap& p, const CMat& a, const CVec& b) {
  require(a.rows() == p.nvars, "substitution has the wrong height");
  CMat s = substitution_matrix(p.degree, a, b);
  return PolyMap(static_cast<int>(a.cols()), p.ntarget, p.degree, s.transpose() * p.coeffs);
}

/// Per-degree blocks of the substitution x = a*y: block k maps the degree-k
/// monomials of x (rows) to those of y (columns).
inline std::vector<CMat> linear_substitution_blocks(int degree, const CMat& a) {
  const int n_old = static_cast<int>(a.rows());
  const int n_new = static_cast<int>(a.cols());
  auto ob = MonomialBasis::get(n_old, degree);
  auto nb = MonomialBasis::get(n_new, degree);
  std::vector<CMat> blocks;
  blocks.push_back(CMat::Identity(1, 1));
  for (int k = 1; k <= degree; ++k) {
    CMat blk = CMat::Zero(ob->count_of_degree(k), nb->count_of_degree(k));
    const CMat& prev = blocks.back();
    for (int i = ob->degree_begin(k); i < ob->degree_end(k); ++i) {
      auto [p, v] = ob->parent(i);
      const int pr = p - ob->degree_begin(k - 1);
      for (int c = 0; c < prev.cols(); ++c) {
        cplx x = prev(pr, c);
        if (x == cplx(0.0)) continue;
        for (int j = 0; j < n_new; ++j) {
          if (a(v, j) == cplx(0.0)) continue;
          auto e = nb->exponents(nb->degree_begin(k - 1) + c);
          ++e[j];
          blk(i - ob->degree_begin(k), nb->index_of(e) - nb->degree_begin(k)) += x * a(v, j);
        }
      }
    }
    blocks.push_back(std::move(blk));
  }
  return blocks;
}

inline PolyMap compose_linear(const PolyMap& p, const CMat& a) {
  require(a.rows() == p.nvars, "substitution has the wrong height");
  auto blocks = linear_substitution_blocks(p.degree, a);
  PolyMap r(static_cast<int>(a.cols()), p.ntarget, p.degree);
  const auto& ob = p.basis();
  const auto& nb = r.basis();
  for (int k = 0; k <= p.degree; ++k)
    r.coeffs.middleRows(nb.degree_begin(k), nb.count_of_degree(k)) =
        blocks[k].transpose() * p.coeffs.middleRows(ob.degree_begin(k), ob.count_of_degree(k));
  return r;
}

/// Product of a scalar polynomial with a polynomial map.
inline PolyMap multiply(const PolyMap& scalar, const PolyMap& q) {
  require(scalar.ntarget == 1 && scalar.nvars == q.nvars, "multiply needs a scalar polynomial on the same space");
  PolyMap r(q.nvars, q.ntarget, scalar.degree + q.degree);
  const auto& sb = scalar.basis();
  const auto& qb = q.basis();
  const auto& rb = r.basis();
  for (int i = 0; i < sb.size(); ++i) {
    if (scalar.coeffs(i, 0) == cplx(0.0)) continue;
    for (int j = 0; j < qb.size(); ++j) {
      auto e = sb.exponents(i);
      const auto& f = qb.exponents(j);
      for (int x = 0; x < q.nvars; ++x) e[x] += f[x];
      r.coeffs.row(rb.index_of(e)) += scalar.coeffs(i, 0) * q.coeffs.row(j);
    }
  }
  return r;
}

/// Scalar polynomial (v -> component k of P(v)).
inline PolyMap component(const PolyMap& p, int k) {
  return PolyMap(p.nvars, 1, p.degree, p.coeffs.col(k));
}

inline std::string to_string(const PolyMap& p, double threshold = 1e-12) {
  const auto& b = p.basis();
  std::ostringstream os;
  bool any = false;
  for (int k = 0; k < p.ntarget; ++k) {
    for (int i = 0; i < b.size(); ++i) {
      cplx c = p.coeffs(i, k);
      if (std::abs(c) <= threshold) continue;
      if (any) os << " + ";
      any = true;
      os << '(' << c.real();
      if (c.imag() != 0.0) os << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << 'i';
      os << ")*" << b.name(i);
      if (p.ntarget > 1) os << "*e" << k + 1;
    }
  }
  if (!any) os << '0';
  return os.str();
}

}  // namespace fop
