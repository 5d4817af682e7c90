#include "fop/group.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace fop;

namespace {

GroupPtr s3() { return make_group(GroupSpec::permutation(3, {{1, 0, 2}, {1, 2, 0}})); }

// Brute-force subgroup count: closures of all element triples, deduplicated.
// Every group tested here is generated by three elements.
size_t brute_subgroup_count(const FiniteGroup& g) {
  std::set<std::vector<int>> seen;
  for (int a = 0; a < g.order(); ++a)
    for (int b = a; b < g.order(); ++b)
      for (int c = b; c < g.order(); ++c) {
        bool grown = true;
        std::set<int> s{0, a, b, c};
        while (grown) {
          grown = false;
          std::vector<int> cur(s.begin(), s.end());
          for (int x : cur)
            for (int y : cur)
              if (s.insert(g.mul(x, y)).second) grown = true;
        }
        seen.insert(std::vector<int>(s.begin(), s.end()));
      }
  return seen.size();
}

}  // namespace

TEST(Group, CyclicTableIsAddition) {
  auto g = make_group(GroupSpec::cyclic(5));
  ASSERT_EQ(g->order(), 5);
  for (int a = 0; a < 5; ++a) {
    for (int b = 0; b < 5; ++b) EXPECT_EQ(g->mul(a, b), (a + b) % 5);
    EXPECT_EQ(g->mul(a, g->inv(a)), 0);
  }
}

TEST(Group, TrivialGroup) {
  auto g = make_group(GroupSpec::cyclic(1));
  EXPECT_EQ(g->order(), 1);
  EXPECT_EQ(g->subgroups().size(), 1u);
  EXPECT_EQ(g->irreducible_characters().size(), 1u);
}

TEST(Group, ProductOfCyclics) {
  auto g = make_group(GroupSpec::product({2, 2}));
  EXPECT_EQ(g->order(), 4);
  for (int a = 0; a < 4; ++a) EXPECT_EQ(g->mul(a, a), 0);
  EXPECT_EQ(g->subgroups().size(), 5u);
}

TEST(Group, SymmetricGroupStructure) {
  auto g = s3();
  EXPECT_EQ(g->order(), 6);
  EXPECT_EQ(g->conjugacy_classes().size(), 3u);
  auto dims = g->irreducible_dims();
  std::sort(dims.begin(), dims.end());
  EXPECT_EQ(dims, (std::vector<int>{1, 1, 2}));
  EXPECT_EQ(g->subgroups().size(), 6u);
}

TEST(Group, SubgroupLatticeMatchesBruteForce) {
  for (const auto& spec : {GroupSpec::cyclic(6), GroupSpec::cyclic(8), GroupSpec::product({2, 4}), GroupSpec::product({2, 2, 2}),
                           GroupSpec::permutation(4, {{1, 0, 2, 3}, {1, 2, 3, 0}})}) {
    auto g = make_group(spec);
    EXPECT_EQ(g->subgroups().size(), brute_subgroup_count(*g)) << "order " << g->order();
  }
}

TEST(Group, SubgroupOrdering) {
  auto g = s3();
  EXPECT_TRUE(trivial_subgroup(*g).is_trivial());
  EXPECT_EQ(whole_group(*g).order(), 6);
  const auto& subs = g->subgroups();
  for (size_t i = 1; i < subs.size(); ++i) EXPECT_LE(subs[i - 1].order(), subs[i].order());
}

TEST(Group, ConjugacyClassesOfSubgroups) {
  auto g = s3();
  std::map<int, int> class_sizes;
  for (const auto& h : g->subgroups()) ++class_sizes[h.conjugacy_class_id];
  std::multiset<int> sizes;
  for (auto [id, n] : class_sizes) sizes.insert(n);
  // {1}, three conjugate transposition groups, A3, S3
  EXPECT_EQ(sizes, (std::multiset<int>{1, 1, 1, 3}));
}

TEST(Group, ConjugateSubgroupIsSubgroup) {
  auto g = s3();
  for (const auto& h : g->subgroups())
    for (int x = 0; x < g->order(); ++x) {
      auto c = conjugate_subgroup(*g, h, x);
      EXPECT_EQ(c.conjugacy_class_id, h.conjugacy_class_id);
    }
}

TEST(Group, CharacterOrthogonality) {
  for (auto g : {s3(), make_group(GroupSpec::cyclic(4)), make_group(GroupSpec::product({2, 3}))}) {
    const auto& chars = g->irreducible_characters();
    int sum_sq = 0;
    for (size_t i = 0; i < chars.size(); ++i) {
      sum_sq += static_cast<int>(std::lround(std::norm(chars[i][0])));
      for (size_t j = 0; j < chars.size(); ++j) {
        cplx ip = 0.0;
        for (int x = 0; x < g->order(); ++x) ip += chars[i][x] * std::conj(chars[j][x]);
        ip /= static_cast<double>(g->order());
        EXPECT_NEAR(std::abs(ip - cplx(i == j ? 1.0 : 0.0)), 0.0, 1e-9);
      }
    }
    EXPECT_EQ(sum_sq, g->order());
  }
}

TEST(Group, IsomorphismSearch) {
  auto z4 = make_group(GroupSpec::cyclic(4));
  auto k4 = make_group(GroupSpec::product({2, 2}));
  auto z2z3 = make_group(GroupSpec::product({2, 3}));
  auto z6 = make_group(GroupSpec::cyclic(6));
  auto always = [](const std::vector<int>&) { return true; };
  EXPECT_FALSE(for_each_isomorphism(*z4, *k4, always));
  EXPECT_TRUE(for_each_isomorphism(*z2z3, *z6, always));
  EXPECT_FALSE(for_each_isomorphism(*z6, *s3(), always));
  int count = 0;
  for_each_isomorphism(*z4, *z4, [&](const std::vector<int>&) {
    ++count;
    return false;
  });
  EXPECT_EQ(count, 2);  // automorphisms of Z/4
}

TEST(Group, SubgroupAsGroup) {
  auto g = s3();
  for (const auto& h : g->subgroups()) {
    auto a = subgroup_as_group(*g, h);
    EXPECT_EQ(a->order(), h.order());
    for (int i = 0; i < a->order(); ++i)
      for (int j = 0; j < a->order(); ++j) EXPECT_EQ(h.members[a->mul(i, j)], g->mul(h.members[i], h.members[j]));
  }
}

TEST(Group, RejectsBadSpecs) {
  EXPECT_THROW(make_group(GroupSpec::cyclic(0)), ValidationError);
  EXPECT_THROW(make_group(GroupSpec::cyclic(65)), ValidationError);
  EXPECT_THROW(make_group(GroupSpec::product({8, 9})), ValidationError);
  EXPECT_THROW(make_group(GroupSpec::permutation(3, {{0, 0, 1}})), ValidationError);
  EXPECT_THROW(make_group(GroupSpec::permutation(13, {{0}})), ValidationError);
}
