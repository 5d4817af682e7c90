#pragma once

#include "fop/common.hpp"
#include "fop/random.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <queue>
#include <unordered_map>

namespace fop {

inline constexpr int kMaxGroupOrder = 64;
inline constexpr int kMaxPermutationDegree = 12;
inline constexpr int kMaxIsomorphismOrder = 24;

/// User-facing group description, kept verbatim on the constructed group.
struct GroupSpec {
  enum class Kind { cyclic, product, permutation, table };
  Kind kind = Kind::cyclic;
  int n = 1;
  std::vector<int> orders;
  int degree = 0;
  std::vector<std::vector<int>> generators;

  static GroupSpec cyclic(int n) {
    GroupSpec s;
    s.kind = Kind::cyclic;
    s.n = n;
    return s;
  }
  static GroupSpec product(std::vector<int> orders) {
    GroupSpec s;
    s.kind = Kind::product;
    s.orders = std::move(orders);
    return s;
  }
  static GroupSpec permutation(int degree, std::vector<std::vector<int>> gens) {
    GroupSpec s;
    s.kind = Kind::permutation;
    s.degree = degree;
    s.generators = std::move(gens);
    return s;
  }
  bool operator==(const GroupSpec&) const = default;
};

using Character = std::vector<cplx>;

struct Subgroup {
  std::vector<int> members;  // sorted, members[0] == 0
  int conjugacy_class_id = -1;

  int order() const { return static_cast<int>(members.size()); }
  bool contains(int g) const { return std::binary_search(members.begin(), members.end(), g); }
  bool is_trivial() const { return members.size() == 1; }
  bool operator==(const Subgroup& o) const { return members == o.members; }
};

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

/// Finite group stored as a validated multiplication table. Element 0 is the
/// identity. Subgroups and irreducible characters are computed on first use.
class FiniteGroup {
 public:
  FiniteGroup(int order, std::vector<int> table, std::vector<int> generators, GroupSpec presentation)
      : n_(order), table_(std::move(table)), generators_(std::move(generators)), spec_(std::move(presentation)) {
    validate();
    build_derived();
  }

  FiniteGroup(const FiniteGroup&) = delete;
  FiniteGroup& operator=(const FiniteGroup&) = delete;

  int order() const { return n_; }
  int mul(int a, int b) const { return table_[static_cast<size_t>(a) * n_ + b]; }
  int inv(int a) const { return inverse_[a]; }
  int conj(int g, int h) const { return mul(mul(g, h), inv(g)); }
  int element_order(int a) const { return element_order_[a]; }
  const std::vector<int>& table() const { return table_; }
  const GroupSpec& presentation() const { return spec_; }

  /// Generators of the presentation (one per cyclic factor / permutation).
  const std::vector<int>& generators() const { return generators_; }
  /// Spanning tree over `generators()`: element e == mul(parent, generators()[gen]).
  /// Listed in breadth-first order, starting after the identity.
  struct TreeEdge {
    int element;
    int parent;
    int gen;
  };
  const std::vector<TreeEdge>& spanning_tree() const { return tree_; }

  const std::vector<std::vector<int>>& conjugacy_classes() const { return classes_; }
  int class_of(int g) const { return class_of_[g]; }

  bool same_table(const FiniteGroup& o) const { return n_ == o.n_ && table_ == o.table_; }

  const std::vector<Subgroup>& subgroups() const {
    std::call_once(subgroups_once_, [this] { subgroups_ = enumerate_subgroups(); });
    return subgroups_;
  }

  /// Irreducible characters indexed by element; the trivial one comes first.
  const std::vector<Character>& irreducible_characters() const {
    std::call_once(irreps_once_, [this] { irreps_ = compute_irreducible_characters(); });
    return irreps_;
  }

  std::vector<int> irreducible_dims() const {
    std::vector<int> dims;
    for (const auto& chi : irreducible_characters()) dims.push_back(static_cast<int>(std::lround(chi[0].real())));
    return dims;
  }

  /// Greedy small generating set (largest element orders first).
  std::vector<int> minimal_generators() const {
    std::vector<int> elems(n_);
    std::iota(elems.begin(), elems.end(), 0);
    std::stable_sort(elems.begin(), elems.end(), [&](int a, int b) { return element_order_[a] > element_order_[b]; });
    std::vector<int> gens;
    std::uint64_t span = 1;
    for (int g : elems) {
      if (span & bit(g)) continue;
      gens.push_back(g);
      span = closure(span, gens);
      if (std::popcount(span) == n_) break;
    }
    return gens;
  }

  /// Subgroup generated by the elements of `mask` and `extra`, as a bitmask.
  std::uint64_t closure(std::uint64_t mask, const std::vector<int>& extra = {}) const {
    std::vector<int> gens;
    for (int g = 0; g < n_; ++g)
      if (mask & bit(g)) gens.push_back(g);
    for (int g : extra) gens.push_back(g);
    std::uint64_t seen = bit(0);
    std::vector<int> frontier{0};
    while (!frontier.empty()) {
      int x = frontier.back();
      frontier.pop_back();
      for (int g : gens) {
        int y = mul(x, g);
        if (!(seen & bit(y))) {
          seen |= bit(y);
          frontier.push_back(y);
        }
      }
    }
    return seen;
  }

  static std::uint64_t bit(int g) { return std::uint64_t{1} << g; }

  std::uint64_t mask_of(const std::vector<int>& members) const {
    std::uint64_t m = 0;
    for (int g : members) m |= bit(g);
    return m;
  }

  /// Index into subgroups() of the subgroup with exactly these members, or -1.
  int find_subgroup(const std::vector<int>& sorted_members) const {
    subgroups();
    auto it = subgroup_index_.find(mask_of(sorted_members));
    return it == subgroup_index_.end() ? -1 : it->second;
  }

 private:
  void validate() const {
    require(n_ >= 1 && n_ <= kMaxGroupOrder, "group order must be in [1, 64]");
    require(table_.size() == static_cast<size_t>(n_) * n_, "multiplication table has wrong size");
    for (int v : table_) require(v >= 0 && v < n_, "multiplication table entry out of range");
    for (int a = 0; a < n_; ++a) {
      std::vector<char> row(n_, 0), col(n_, 0);
      for (int b = 0; b < n_; ++b) {
        row[mul(a, b)] = 1;
        col[mul(b, a)] = 1;
      }
      require(std::all_of(row.begin(), row.end(), [](char c) { return c; }) &&
                  std::all_of(col.begin(), col.end(), [](char c) { return c; }),
              "multiplication table rows/columns must be permutations");
      require(mul(0, a) == a && mul(a, 0) == a, "element 0 must be the identity");
    }
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        for (int c = 0; c < n_; ++c)
          require(mul(mul(a, b), c) == mul(a, mul(b, c)), "multiplication table is not associative");
    for (int g : generators_) require(g >= 0 && g < n_, "generator out of range");
  }

  void build_derived() {
    inverse_.assign(n_, -1);
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        if (mul(a, b) == 0) inverse_[a] = b;
    for (int a = 0; a < n_; ++a) require(inverse_[a] >= 0 && mul(inverse_[a], a) == 0, "element without inverse");

    element_order_.assign(n_, 1);
    for (int a = 0; a < n_; ++a) {
      int x = a, k = 1;
      while (x != 0) {
        x = mul(x, a);
        ++k;
      }
      element_order_[a] = k;
    }

    class_of_.assign(n_, -1);
    for (int a = 0; a < n_; ++a) {
      if (class_of_[a] >= 0) continue;
      int id = static_cast<int>(classes_.size());
      std::vector<int> cls;
      for (int g = 0; g < n_; ++g) {
        int c = conj(g, a);
        if (class_of_[c] < 0) {
          class_of_[c] = id;
          cls.push_back(c);
        }
      }
      std::sort(cls.begin(), cls.end());
      classes_.push_back(std::move(cls));
    }

    std::vector<char> seen(n_, 0);
    seen[0] = 1;
    std::queue<int> q;
    q.push(0);
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (size_t k = 0; k < generators_.size(); ++k) {
        int y = mul(x, generators_[k]);
        if (!seen[y]) {
          seen[y] = 1;
          tree_.push_back({y, x, static_cast<int>(k)});
          q.push(y);
        }
      }
    }
    require(static_cast<int>(tree_.size()) == n_ - 1, "presentation generators do not generate the group");
  }

  std::vector<Subgroup> enumerate_subgroups() const {
    std::vector<std::uint64_t> found;
    std::unordered_map<std::uint64_t, int> index;
    auto add = [&](std::uint64_t m) {
      if (index.emplace(m, static_cast<int>(found.size())).second) found.push_back(m);
    };
    for (int g = 0; g < n_; ++g) add(closure(0, {g}));
    for (size_t i = 0; i < found.size(); ++i) {
      std::uint64_t h = found[i];
      for (int g = 0; g < n_; ++g)
        if (!(h & bit(g))) add(closure(h, {g}));
    }

    std::vector<Subgroup> subs;
    for (auto m : found) {
      Subgroup s;
      for (int g = 0; g < n_; ++g)
        if (m & bit(g)) s.members.push_back(g);
      subs.push_back(std::move(s));
    }
    std::sort(subs.begin(), subs.end(), [](const Subgroup& a, const Subgroup& b) {
      if (a.order() != b.order()) return a.order() < b.order();
      return a.members < b.members;
    });
    subgroup_index_.clear();
    for (size_t i = 0; i < subs.size(); ++i) subgroup_index_[mask_of(subs[i].members)] = static_cast<int>(i);

    int next_id = 0;
    for (auto& s : subs) {
      if (s.conjugacy_class_id >= 0) continue;
      int id = next_id++;
      for (int g = 0; g < n_; ++g) {
        std::uint64_t cm = 0;
        for (int h : s.members) cm |= bit(conj(g, h));
        subs[subgroup_index_.at(cm)].conjugacy_class_id = id;
      }
    }
    return subs;
  }

  // Eigenspaces of a random Hermitian element of the commutant of the regular
  // representation are irreducible; their traces give the character table.
  std::vector<Character> compute_irreducible_characters() const {
    const int n = n_;
    for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
      RandomStream rng(kLibrarySeed + attempt);
      CMat m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
          cplx z = i == j ? cplx(rng.normal(), 0.0) : rng.complex_normal();
          m(i, j) = z;
          m(j, i) = std::conj(z);
        }
      CMat avg = CMat::Zero(n, n);
      for (int g = 0; g < n; ++g) {
        int gi = inv(g);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) avg(a, b) += m(mul(gi, a), mul(gi, b));
      }
      avg /= static_cast<double>(n);
      Eigen::SelfAdjointEigenSolver<CMat> es(avg);
      const auto& ev = es.eigenvalues();
      double spread = 1.0 + ev.cwiseAbs().maxCoeff();

      std::vector<Character> chars;
      bool ok = true;
      int start = 0;
      while (start < n && ok) {
        int end = start + 1;
        while (end < n && ev(end) - ev(end - 1) <= 1e-8 * spread) ++end;
        CMat u = es.eigenvectors().middleCols(start, end - start);
        Character chi(n);
        for (int g = 0; g < n; ++g) {
          int gi = inv(g);
          cplx t = 0.0;
          for (Eigen::Index i = 0; i < u.cols(); ++i)
            for (int a = 0; a < n; ++a) t += std::conj(u(a, i)) * u(mul(gi, a), i);
          chi[g] = t;
        }
        double norm = 0.0;
        for (auto c : chi) norm += std::norm(c);
        norm /= n;
        if (std::abs(norm - 1.0) > 1e-6) {
          ok = false;
          break;
        }
        bool dup = false;
        for (const auto& c : chars) {
          double d = 0.0;
          for (int g = 0; g < n; ++g) d = std::max(d, std::abs(c[g] - chi[g]));
          if (d < 1e-6) dup = true;
        }
        if (!dup) chars.push_back(std::move(chi));
        start = end;
      }
      if (!ok) continue;

      int sum_sq = 0;
      for (const auto& c : chars) {
        int d = static_cast<int>(std::lround(c[0].real()));
        sum_sq += d * d;
      }
      if (sum_sq != n || chars.size() != classes_.size()) continue;

      auto key = [](const Character& c) {
        std::vector<long long> k;
        bool trivial = std::all_of(c.begin(), c.end(), [](cplx z) { return std::abs(z - 1.0) < 1e-6; });
        k.push_back(trivial ? 0 : 1);
        k.push_back(std::llround(c[0].real()));
        for (auto z : c) {
          k.push_back(std::llround(z.real() * 1e6));
          k.push_back(std::llround(z.imag() * 1e6));
        }
        return k;
      };
      std::sort(chars.begin(), chars.end(), [&](const Character& a, const Character& b) { return key(a) < key(b); });
      return chars;
    }
    throw NumericalError("irreducible character computation did not separate the irreducibles");
  }

  int n_;
  std::vector<int> table_;
  std::vector<int> generators_;
  GroupSpec spec_;
  std::vector<int> inverse_;
  std::vector<int> element_order_;
  std::vector<std::vector<int>> classes_;
  std::vector<int> class_of_;
  std::vector<TreeEdge> tree_;

  mutable std::once_flag subgroups_once_;
  mutable std::once_flag irreps_once_;
  mutable std::vector<Subgroup> subgroups_;
  mutable std::unordered_map<std::uint64_t, int> subgroup_index_;
  mutable std::vector<Character> irreps_;
};

namespace detail {

inline std::vector<int> compose(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
  return c;
}

}  // namespace detail

/// Builds a validated group from a cyclic, product-of-cyclics or permutation
/// description. Element enumeration is fixed by the description.
inline GroupPtr make_group(const GroupSpec& spec) {
  switch (spec.kind) {
    case GroupSpec::Kind::cyclic: {
      require(spec.n >= 1, "cyclic group order must be positive");
      require(spec.n <= kMaxGroupOrder, "group order cap (64) exceeded");
      int n = spec.n;
      std::vector<int> t(static_cast<size_t>(n) * n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a * n + b] = (a + b) % n;
      return std::make_shared<const FiniteGroup>(n, std::move(t), std::vector<int>{n > 1 ? 1 : 0}, spec);
    }
    case GroupSpec::Kind::product: {
      require(!spec.orders.empty(), "product group needs at least one factor");
      long long n = 1;
      for (int o : spec.orders) {
        require(o >= 1, "cyclic factor order must be positive");
        n *= o;
        require(n <= kMaxGroupOrder, "group order cap (64) exceeded");
      }
      const size_t k = spec.orders.size();
      auto digits = [&](int e) {
        std::vector<int> d(k);
        for (size_t f = 0; f < k; ++f) {
          d[f] = e % spec.orders[f];
          e /= spec.orders[f];
        }
        return d;
      };
      auto index = [&](const std::vector<int>& d) {
        int e = 0, stride = 1;
        for (size_t f = 0; f < k; ++f) {
          e += d[f] * stride;
          stride *= spec.orders[f];
        }
        return e;
      };
      int order = static_cast<int>(n);
      std::vector<int> t(static_cast<size_t>(order) * order);
      for (int a = 0; a < order; ++a)
        for (int b = 0; b < order; ++b) {
          auto da = digits(a), db = digits(b);
          for (size_t f = 0; f < k; ++f) da[f] = (da[f] + db[f]) % spec.orders[f];
          t[a * order + b] = index(da);
        }
      std::vector<int> gens;
      for (size_t f = 0; f < k; ++f) {
        std::vector<int> d(k, 0);
        if (spec.orders[f] > 1) d[f] = 1;
        gens.push_back(index(d));
      }
      return std::make_shared<const FiniteGroup>(order, std::move(t), std::move(gens), spec);
    }
    case GroupSpec::Kind::permutation: {
      require(spec.degree >= 1 && spec.degree <= kMaxPermutationDegree, "permutation degree must be in [1, 12]");
      require(!spec.generators.empty(), "permutation group needs generators");
      for (const auto& g : spec.generators) {
        require(static_cast<int>(g.size()) == spec.degree, "generator length must equal the degree");
        std::vector<int> s = g;
        std::sort(s.begin(), s.end());
        for (int i = 0; i < spec.degree; ++i) require(s[i] == i, "generator is not a permutation");
      }
      std::vector<int> id(spec.degree);
      std::iota(id.begin(), id.end(), 0);
      std::vector<std::vector<int>> elems{id};
      std::map<std::vector<int>, int> index{{id, 0}};
      for (size_t i = 0; i < elems.size(); ++i) {
        for (const auto& g : spec.generators) {
          auto c = detail::compose(elems[i], g);
          if (index.emplace(c, static_cast<int>(elems.size())).second) {
            elems.push_back(std::move(c));
            if (static_cast<int>(elems.size()) > kMaxGroupOrder)
              throw ValidationError("generators do not generate a group within the order cap (64)");
          }
        }
      }
      int n = static_cast<int>(elems.size());
      std::vector<int> t(static_cast<size_t>(n) * n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a * n + b] = index.at(detail::compose(elems[a], elems[b]));
      std::vector<int> gens;
      for (const auto& g : spec.generators) gens.push_back(index.at(g));
      return std::make_shared<const FiniteGroup>(n, std::move(t), std::move(gens), spec);
    }
  }
  throw ValidationError("unknown group kind");
}

/// All subgroups sorted by (order, members), annotated with conjugacy class ids.
inline const std::vector<Subgroup>& subgroups(const FiniteGroup& g) { return g.subgroups(); }

inline Subgroup conjugate_subgroup(const FiniteGroup& g, const Subgroup& h, int x) {
  require(x >= 0 && x < g.order(), "conjugating element out of range");
  std::vector<int> m;
  for (int e : h.members) m.push_back(g.conj(x, e));
  std::sort(m.begin(), m.end());
  int idx = g.find_subgroup(m);
  if (idx < 0) throw ValidationError("conjugate is not a subgroup (input was not a subgroup)");
  return g.subgroups()[idx];
}

/// Looks up the annotated subgroup with these members; throws if not closed.
inline Subgroup subgroup_from_members(const FiniteGroup& g, std::vector<int> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  int idx = g.find_subgroup(members);
  if (idx < 0) throw NumericalError("element set is not closed under multiplication");
  return g.subgroups()[idx];
}

inline const Subgroup& trivial_subgroup(const FiniteGroup& g) { return g.subgroups().front(); }
inline const Subgroup& whole_group(const FiniteGroup& g) { return g.subgroups().back(); }

/// H as an abstract group; element i of the result is h.members[i].
inline GroupPtr subgroup_as_group(const FiniteGroup& g, const Subgroup& h) {
  const int n = h.order();
  std::unordered_map<int, int> local;
  for (int i = 0; i < n; ++i) local[h.members[i]] = i;
  std::vector<int> t(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a * n + b] = local.at(g.mul(h.members[a], h.members[b]));
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  GroupSpec spec;
  spec.kind = GroupSpec::Kind::table;
  spec.n = n;
  FiniteGroup probe(n, t, all, spec);
  auto gens = probe.minimal_generators();
  if (gens.empty()) gens.push_back(0);
  return std::make_shared<const FiniteGroup>(n, std::move(t), std::move(gens), spec);
}

/// Calls `visit(phi)` for each isomorphism a -> b until it returns true.
/// Returns whether some call returned true.
inline bool for_each_isomorphism(const FiniteGroup& a, const FiniteGroup& b,
                                 const std::function<bool(const std::vector<int>&)>& visit) {
  if (a.order() != b.order()) return false;
  const int n = a.order();
  std::vector<int> oa(n), ob(n);
  for (int i = 0; i < n; ++i) {
    oa[i] = a.element_order(i);
    ob[i] = b.element_order(i);
  }
  std::sort(oa.begin(), oa.end());
  std::sort(ob.begin(), ob.end());
  if (oa != ob) return false;

  const auto gens = a.minimal_generators();
  // words for every element of a over `gens`
  std::vector<std::pair<int, int>> tree;  // (parent, gen index)
  std::vector<int> order_seen{0};
  {
    std::vector<char> seen(n, 0);
    seen[0] = 1;
    for (size_t i = 0; i < order_seen.size(); ++i) {
      int x = order_seen[i];
      for (size_t k = 0; k < gens.size(); ++k) {
        int y = a.mul(x, gens[k]);
        if (!seen[y]) {
          seen[y] = 1;
          order_seen.push_back(y);
          tree.push_back({x, static_cast<int>(k)});
        }
      }
    }
  }
  std::vector<int> image(gens.size());
  std::function<bool(size_t)> assign = [&](size_t k) -> bool {
    if (k == gens.size()) {
      std::vector<int> phi(n, -1);
      phi[0] = 0;
      for (size_t i = 1; i < order_seen.size(); ++i) phi[order_seen[i]] = b.mul(phi[tree[i - 1].first], image[tree[i - 1].second]);
      std::vector<char> hit(n, 0);
      for (int x : phi) {
        if (x < 0 || hit[x]) return false;
        hit[x] = 1;
      }
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          if (phi[a.mul(x, y)] != b.mul(phi[x], phi[y])) return false;
      return visit(phi);
    }
    for (int c = 0; c < n; ++c) {
      if (b.element_order(c) != a.element_order(gens[k])) continue;
      image[k] = c;
      if (assign(k + 1)) return true;
    }
    return false;
  };
  return assign(0);
}

}  // namespace fop
