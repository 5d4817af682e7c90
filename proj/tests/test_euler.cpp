#include "fop/acceptance.hpp"

#include <gtest/gtest.h>

using namespace fop;
namespace acc = fop::acceptance;

TEST(Euler, WorkedCounts) {
  for (const auto& w : acc::worked_problems()) {
    auto r = euler_counts(w.chart, w.section);
    EXPECT_EQ(acc::stratum_count_of_order(r, 1), w.expected[0]) << w.name;
    EXPECT_EQ(acc::stratum_count_of_order(r, w.chart.group->order()), w.expected[1]) << w.name;
    EXPECT_TRUE(r.consistency_applicable);
    EXPECT_TRUE(r.consistency_holds);
    EXPECT_EQ(r.oracle_count, w.oracle_count);
    EXPECT_TRUE(r.stable);
    EXPECT_TRUE(r.audit.pass);
    for (const auto& o : r.orbits) EXPECT_EQ(o.sign, 1);
  }
}

TEST(Euler, UnperturbedZerosOfTransverseSection) {
  auto w = acc::worked_problems()[0];
  EulerOptions raw;
  raw.perturb = false;
  auto zs = enumerate_zero_orbits(w.chart, w.section, raw);
  ASSERT_EQ(zs.orbits.size(), 2u);  // {0} and {+1, -1}
  EXPECT_TRUE(zs.all_certified());
  int sizes = 0;
  for (const auto& o : zs.orbits) sizes += o.orbit_size;
  EXPECT_EQ(sizes, 3);
}

TEST(Euler, DegenerateSectionNeedsPerturbation) {
  auto w = acc::worked_problems()[2];
  EulerOptions raw;
  raw.perturb = false;
  auto zs = enumerate_zero_orbits(w.chart, w.section, raw);
  ASSERT_EQ(zs.orbits.size(), 1u);  // only the origin
  EXPECT_EQ(zs.orbits[0].stabilizer.order(), 2);
  EXPECT_FALSE(zs.all_certified());
  auto out = perturb(w.chart, w.section, 7, 1e-2);
  EXPECT_TRUE(out.zeros.all_certified());
  EXPECT_EQ(out.zeros.orbits.size(), 2u);
}

TEST(Euler, PerturbationStaysEquivariantAndSmall) {
  auto w = acc::worked_problems()[1];
  auto s = perturb_section(w.chart, w.section, 3, 1e-2);
  validate_section(w.chart, s);
  EXPECT_LE((s.normal.coeffs - w.section.normal.with_degree(s.normal.degree).coeffs).cwiseAbs().maxCoeff(), 0.1);
  EXPECT_EQ(s.total().actual_degree(), 4);
  EXPECT_THROW(perturb_section(w.chart, w.section, 3, 0.5), ValidationError);
  EXPECT_THROW(perturb_section(w.chart, w.section, 3, 0.0), ValidationError);
}

TEST(Euler, SeedInvariance) {
  for (const auto& w : acc::worked_problems()) {
    std::vector<int> first;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      EulerOptions o;
      o.seed = seed;
      auto t = euler_counts(w.chart, w.section, o).count_table();
      if (seed == 1) first = t;
      EXPECT_EQ(t, first) << w.name << " seed " << seed;
    }
  }
}

TEST(Euler, SameSeedSameReport) {
  auto w = acc::worked_problems()[2];
  auto a = euler_counts(w.chart, w.section), b = euler_counts(w.chart, w.section);
  ASSERT_EQ(a.orbits.size(), b.orbits.size());
  for (size_t i = 0; i < a.orbits.size(); ++i) EXPECT_EQ(a.orbits[i].point, b.orbits[i].point);
  EXPECT_EQ(a.section.normal, b.section.normal);
}

TEST(Euler, InvarianceCheckNeedsTwoSeeds) {
  auto w = acc::worked_problems()[0];
  EXPECT_THROW(invariance_check(w.chart, w.section, {1}, 4), ValidationError);
}

TEST(Euler, DegreeStabilityFarApart) {
  auto w = acc::worked_problems()[0];
  auto v = degree_stability_check(w.chart, w.section, 5);
  EXPECT_TRUE(v.pass);
  auto t = acc::worked_problems()[1];
  EXPECT_TRUE(degree_stability_check(t.chart, t.section, 7).pass);
}

TEST(Euler, TrivialGroupQuadratic) {
  auto g = make_group(GroupSpec::cyclic(1));
  auto v = make_rep(g, RepSpec::from_weights({{0}}));
  auto chart = make_chart(v, v, 2);
  auto r = euler_counts(chart, split_section(chart, acc::univariate({-1.0, 0.0, 1.0})));
  ASSERT_EQ(r.strata.size(), 1u);
  EXPECT_EQ(r.strata[0].count, 2);
  EXPECT_TRUE(degree_stability_check(chart, split_section(chart, acc::univariate({-1.0, 0.0, 1.0}))).pass);
}

TEST(Euler, PositiveDimensionRejected) {
  // dim V = 2, dim W = 1: the free stratum has n > 0
  auto g = make_group(GroupSpec::cyclic(2));
  auto v = make_rep(g, RepSpec::from_weights({{1}, {1}}));
  auto w = make_rep(g, RepSpec::from_weights({{1}}));
  auto chart = make_chart(v, w, 3);
  RandomStream rng(1);
  auto s = split_section(chart, acc::random_equivariant(equivariant_basis(v, w, 3), rng));
  EXPECT_THROW(euler_counts(chart, s), ValidationError);
}

TEST(Euler, OverdeterminedStrataAreEmpty) {
  auto g = make_group(GroupSpec::cyclic(2));
  auto v = make_rep(g, RepSpec::from_weights({{1}}));
  auto w = make_rep(g, RepSpec::from_weights({{1}, {0}}));
  auto chart = make_chart(v, w, 2);
  // (z + z^2 ... ) : odd part z, even part 1 + z^2: no common zero
  PolyMap p(1, 2, 2);
  p.coeffs(1, 0) = 1.0;
  p.coeffs(0, 1) = 1.0;
  p.coeffs(2, 1) = 1.0;
  auto r = euler_counts(chart, split_section(chart, p));
  for (const auto& s : r.strata) {
    EXPECT_LT(s.n_gamma, 0);
    EXPECT_EQ(s.count, 0);
  }
}

TEST(Euler, AggregatesMergeIsomorphicTypes) {
  auto g = make_group(acc::s3_spec());
  auto v = make_rep(g, RepSpec::from_matrices(acc::s3_standard_generators()));
  auto chart = make_chart(v, v, 6);
  auto audit = dimension_audit(chart);
  EXPECT_TRUE(audit.pass);
  EXPECT_EQ(audit.rows.size(), 4u);
}
