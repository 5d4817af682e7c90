#include "fop/acceptance.hpp"

#include <gtest/gtest.h>

using namespace fop;
namespace acc = fop::acceptance;

TEST(Strata, ActionStrataOfStandardRep) {
  auto g = make_group(acc::s3_spec());
  auto v = make_rep(g, RepSpec::from_matrices(acc::s3_standard_generators()));
  auto st = action_strata(v);
  ASSERT_EQ(st.size(), 4u);  // {1}, <(12)>, A3, S3 up to conjugacy
  std::map<int, bool> empty_by_order;
  for (const auto& s : st) empty_by_order[s.h.order()] = s.empty;
  EXPECT_FALSE(empty_by_order[1]);
  EXPECT_FALSE(empty_by_order[2]);
  EXPECT_TRUE(empty_by_order[3]);  // A3 fixes only the origin, which S3 fixes too
  EXPECT_FALSE(empty_by_order[6]);
}

TEST(Strata, ClassifyPoint) {
  auto g = make_group(GroupSpec::cyclic(2));
  auto v = make_rep(g, RepSpec::from_weights({{1}}));
  auto st = action_strata(v);
  EXPECT_EQ(st[classify_point(st, v, CVec::Zero(1))].h.order(), 2);
  EXPECT_EQ(st[classify_point(st, v, CVec::Constant(1, 0.5))].h.order(), 1);
}

TEST(Strata, ZStratumDimension) {
  auto g = make_group(GroupSpec::cyclic(2));
  auto v = make_rep(g, RepSpec::from_weights({{1}}));
  auto free = z_stratum_info(v, v, 3, trivial_subgroup(*g));
  EXPECT_EQ(free.dim_poly, 2);
  EXPECT_EQ(free.dim_c, 2);  // 2 + 1 - 1
  EXPECT_TRUE(free.regularity_verified);
  auto fixed = z_stratum_info(v, v, 3, whole_group(*g));
  EXPECT_EQ(fixed.dim_ring_v, 0);
  EXPECT_EQ(fixed.dim_ring_w, 0);
  EXPECT_TRUE(fixed.regularity_verified);
}

TEST(Strata, ZStratumNeedsDegreeBound) {
  auto g = make_group(GroupSpec::cyclic(3));
  auto v = make_rep(g, RepSpec::from_weights({{1}}));
  EXPECT_THROW(z_stratum_info(v, v, 2, trivial_subgroup(*g)), ValidationError);
  auto z = z_stratum_info(v, v, 2, trivial_subgroup(*g), true);
  EXPECT_FALSE(z.warnings.empty());
}

TEST(Strata, ExpectedDimension) {
  auto g = make_group(GroupSpec::cyclic(2));
  auto v = make_rep(g, RepSpec::from_weights({{1}}));
  auto w = make_rep(g, RepSpec::from_weights({{1}, {0}}));
  auto chart = make_chart(v, w, 2);
  EXPECT_EQ(expected_dimension(chart, isotropy_type_of(v, w, trivial_subgroup(*g))), -2);
  EXPECT_EQ(expected_dimension(chart, isotropy_type_of(v, w, whole_group(*g))), -2);
  auto square = make_chart(v, v, 2);
  EXPECT_EQ(expected_dimension(square, isotropy_type_of(v, v, whole_group(*g))), 0);
}

TEST(Strata, CertificatePassAndFail) {
  auto simple = acc::cyclic_problem("z", 2, {0.0, 1.0}, 2);
  auto g = simple.chart.group;
  auto pass = transversality_certificate(simple.chart, simple.section, CVec::Zero(1), whole_group(*g));
  EXPECT_TRUE(pass.pass);
  EXPECT_EQ(pass.sign, 1);
  auto deg = acc::cyclic_problem("z^3", 2, {0.0, 0.0, 0.0, 1.0}, 3);
  auto fail = transversality_certificate(deg.chart, deg.section, CVec::Zero(1), whole_group(*g));
  EXPECT_FALSE(fail.pass);
  EXPECT_EQ(fail.sign, 0);
  EXPECT_NE(fail.detail.find("normal"), std::string::npos);
}

TEST(Strata, CertificateRequiresZero) {
  auto p = acc::cyclic_problem("z - z^3", 2, {0.0, 1.0, 0.0, -1.0}, 3);
  auto g = p.chart.group;
  EXPECT_THROW(transversality_certificate(p.chart, p.section, CVec::Constant(1, 0.5), trivial_subgroup(*g)), NumericalError);
  // right point, wrong stratum subgroup
  EXPECT_THROW(transversality_certificate(p.chart, p.section, CVec::Constant(1, 1.0), whole_group(*g)), NumericalError);
}

TEST(Strata, RestrictedCertificateAgrees) {
  for (const auto& w : acc::worked_problems()) {
    EulerOptions raw;
    raw.perturb = false;
    auto zs = enumerate_zero_orbits(w.chart, w.section, raw);
    for (const auto& o : zs.orbits) {
      auto a = transversality_certificate(w.chart, w.section, o.point, o.stabilizer);
      auto b = restricted_certificate(w.chart, w.section, o.point, o.stabilizer);
      EXPECT_EQ(a.pass, b.pass) << w.name;
    }
  }
}

TEST(Strata, S3CertificatesAtAxisZero) {
  auto g = make_group(acc::s3_spec());
  auto v = make_rep(g, RepSpec::from_matrices(acc::s3_standard_generators()));
  auto chart = make_chart(v, v, 6);
  // z + conj(z)^2 in real coordinates: (x + x^2 - y^2, y - 2xy)
  PolyMap p(2, 2, 2);
  const auto& b = p.basis();
  p.coeffs(b.index_of({1, 0}), 0) = 1.0;
  p.coeffs(b.index_of({0, 1}), 1) = 1.0;
  p.coeffs(b.index_of({2, 0}), 0) = 1.0;
  p.coeffs(b.index_of({0, 2}), 0) = -1.0;
  p.coeffs(b.index_of({1, 1}), 1) = -2.0;
  auto s = split_section(chart, p);
  validate_section(chart, s);
  CVec x(2);
  x << -1.0, 0.0;
  auto h = isotropy_group(v, x);
  EXPECT_EQ(h.order(), 2);
  auto c = transversality_certificate(chart, s, x, h);
  EXPECT_TRUE(c.pass);
  auto r = restricted_certificate(chart, s, x, h);
  EXPECT_TRUE(r.pass);
}
