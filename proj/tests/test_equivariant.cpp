#include "fop/acceptance.hpp"

#include <gtest/gtest.h>

using namespace fop;
namespace acc = fop::acceptance;

namespace {

UnitaryRep cyc(int n, std::vector<std::vector<int>> w) { return make_rep(make_group(GroupSpec::cyclic(n)), RepSpec::from_weights(std::move(w))); }

UnitaryRep s3_standard() { return make_rep(make_group(acc::s3_spec()), RepSpec::from_matrices(acc::s3_standard_generators())); }

}  // namespace

TEST(Equivariant, Z2OddPolynomials) {
  auto v = cyc(2, {{1}});
  auto b = equivariant_basis(v, v, 5);
  ASSERT_EQ(b.size(), 3);
  EXPECT_EQ(b.per_degree, (std::vector<int>{0, 1, 0, 1, 0, 1}));
  for (int i = 0; i < 3; ++i) EXPECT_EQ(b.elements[i].actual_degree(), 2 * i + 1);
}

TEST(Equivariant, S3PermutationCounts) {
  auto g = make_group(acc::s3_spec());
  auto p = permutation_rep(g);
  std::vector<int> counts;
  for (int k = 0; k <= 6; ++k) counts.push_back(equivariant_dimension(p, p, k));
  // invariant-times-equivariant generating counts for the permutation action
  EXPECT_EQ(counts, (std::vector<int>{1, 2, 4, 6, 9, 12, 16}));
}

TEST(Equivariant, BasisAgreesWithOracles) {
  auto v = s3_standard();
  for (int k = 0; k <= 6; ++k) {
    auto h = homogeneous_equivariants(v, v, k);
    EXPECT_EQ(static_cast<int>(h.size()), acc::oracle::nullspace_count(v, v, k)) << "k=" << k;
  }
  auto w = cyc(4, {{1}, {3}});
  for (int k = 0; k <= 6; ++k) EXPECT_EQ(equivariant_dimension(w, w, k), acc::oracle::diagonal_count(w, w, k));
}

TEST(Equivariant, ReynoldsIsProjection) {
  auto v = s3_standard();
  RandomStream rng(11);
  PolyMap p(2, 2, 3);
  for (Eigen::Index i = 0; i < p.coeffs.size(); ++i) p.coeffs.data()[i] = rng.complex_normal();
  auto r = reynolds(p, v, v);
  EXPECT_LT(acc::oracle::equivariance_residual(r, v, v), 1e-12);
  auto rr = reynolds(r, v, v);
  EXPECT_LT((rr.coeffs - r.coeffs).norm(), 1e-12);
  EXPECT_GT(equivariance_residual(p, v, v), 1e-3);
}

TEST(Equivariant, BasisElementsAreNormalized) {
  auto v = cyc(3, {{1}, {2}});
  auto b = equivariant_basis(v, v, 4);
  for (const auto& e : b.elements) {
    EXPECT_NEAR(e.sup_norm(), 1.0, 1e-12);
    EXPECT_LT(acc::oracle::equivariance_residual(e, v, v), 1e-12);
  }
  auto m = b.matrix();
  Eigen::JacobiSVD<CMat> svd(m);
  EXPECT_GT(svd.singularValues()(m.cols() - 1), 1e-6);  // independent
}

TEST(Equivariant, BasisLimits) {
  auto v = cyc(2, {{1}});
  EXPECT_THROW(equivariant_basis(v, v, 13), ValidationError);
  EXPECT_THROW(equivariant_basis(v, v, -1), ValidationError);
}

TEST(Equivariant, ModuleGeneratorsZ2) {
  auto v = cyc(2, {{1}});
  auto g = module_generators(v, v, 4);
  EXPECT_TRUE(g->certified());
  EXPECT_EQ(g->d0(), 1);
  ASSERT_EQ(g->generators().size(), 1u);
}

TEST(Equivariant, ModuleGeneratorsS3Standard) {
  auto v = s3_standard();
  auto g = module_generators(v, v, 6);
  EXPECT_TRUE(g->certified());
  EXPECT_EQ(g->d0(), 2);  // identity and the quadratic conjugate-square map
  EXPECT_EQ(g->generator_degrees(), (std::vector<int>{1, 2}));
}

TEST(Equivariant, DegreeReduceClosedForm) {
  auto v = cyc(2, {{1}});
  auto g = module_generators(v, v, 3);
  const cplx a(1.5, -0.5), b(0.25, 2.0), x(0.7, 0.3);
  auto q = degree_reduce(CVec::Constant(1, x), acc::univariate({0.0, a, 0.0, b}), 1, *g);
  EXPECT_EQ(q.degree, 1);
  EXPECT_LT(std::abs(q.coeffs(1, 0) - (a + b * x * x)), 1e-14);
  EXPECT_EQ(q.coeffs(0, 0), cplx(0.0));
}

TEST(Equivariant, LagrangeSelector) {
  auto g = make_group(GroupSpec::cyclic(4));
  auto v = make_rep(g, RepSpec::from_weights({{1}}));
  CVec x = CVec::Constant(1, cplx(0.8, 0.1));
  auto h = subgroup_from_members(*g, {0});
  auto f = lagrange_selector(v, h, x);
  EXPECT_NEAR(std::abs(f.evaluate(x)(0) - 1.0), 0.0, 1e-9);
  for (int e = 1; e < 4; ++e) EXPECT_NEAR(std::abs(f.evaluate(v.matrix(e) * x)(0)), 0.0, 1e-9);
}

TEST(Equivariant, InterpolateZ2) {
  auto v = cyc(2, {{1}});
  CVec x = CVec::Constant(1, 1.0);
  CVec w = CVec::Constant(1, 5.0);
  auto p = interpolate(v, v, trivial_subgroup(v.group()), x, w);
  EXPECT_LT((p.evaluate(x) - w).norm(), 1e-12);
  EXPECT_LE(p.actual_degree(), 2);
  EXPECT_LT(acc::oracle::equivariance_residual(p, v, v), 1e-12);
}

TEST(Equivariant, InterpolateRejectsWrongStabilizer) {
  auto v = cyc(2, {{1}});
  CVec zero = CVec::Zero(1);
  EXPECT_THROW(interpolate(v, v, trivial_subgroup(v.group()), zero, CVec::Zero(1)), ValidationError);
  CVec x = CVec::Constant(1, 1.0);
  auto z2 = whole_group(v.group());
  EXPECT_THROW(interpolate(v, v, z2, x, CVec::Constant(1, 1.0)), ValidationError);
}

TEST(Equivariant, RestrictionShapes) {
  auto g = make_group(GroupSpec::cyclic(4));
  auto v = make_rep(g, RepSpec::from_weights({{1}, {2}}));
  auto h = subgroup_from_members(*g, {0, 2});
  CVec x(2);
  x << 0.0, 0.6;
  RandomStream rng(2);
  auto p = acc::random_equivariant(equivariant_basis(v, v, 4), rng);
  auto r = restrict_theta(x, p, v, v, h);
  EXPECT_EQ(r.ring_basis.cols(), 1);
  EXPECT_EQ(r.normal_basis.cols(), 1);
  EXPECT_EQ(r.q.nvars, 1);
  EXPECT_LT((r.q.evaluate(r.normal_coords) - p.evaluate(x)).norm(), 1e-12);
  // Q is H-equivariant on the slice
  EXPECT_LT(acc::oracle::equivariance_residual(r.q, r.v_normal, r.w_h), 1e-12);
}
