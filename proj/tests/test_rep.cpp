#include "fop/acceptance.hpp"

#include <gtest/gtest.h>

using namespace fop;
using acceptance::s3_spec;
using acceptance::s3_standard_generators;

TEST(Rep, WeightRepresentation) {
  auto g = make_group(GroupSpec::cyclic(4));
  auto v = make_rep(g, RepSpec::from_weights({{1}, {2}}));
  ASSERT_EQ(v.dim(), 2);
  EXPECT_NEAR(std::abs(v.matrix(1)(0, 0) - cplx(0.0, 1.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(v.matrix(1)(1, 1) + 1.0), 0.0, 1e-14);
  EXPECT_TRUE(v.is_effective());
  EXPECT_FALSE(make_rep(g, RepSpec::from_weights({{2}})).is_effective());
}

TEST(Rep, MatrixRepresentationIsUnitarized) {
  auto g = make_group(GroupSpec::cyclic(3));
  // a non-unitary conjugate of rotation by 120 degrees
  CMat a(2, 2);
  a << 2.0, 1.0, 0.0, 1.0;
  const double c = -0.5, s = std::sqrt(3.0) / 2.0;
  CMat r(2, 2);
  r << c, -s, s, c;
  CMat m = a * r * a.inverse();
  auto v = make_rep(g, RepSpec::from_matrices({m}));
  for (int x = 0; x < 3; ++x) EXPECT_LT((v.matrix(x).adjoint() * v.matrix(x) - CMat::Identity(2, 2)).norm(), 1e-10);
  // character is a conjugation invariant
  EXPECT_NEAR(std::abs(v.character()[1] - (2.0 * c)), 0.0, 1e-10);
}

TEST(Rep, RejectsNonHomomorphism) {
  auto g = make_group(GroupSpec::cyclic(2));
  CMat m = CMat::Identity(1, 1) * cplx(0.0, 1.0);  // i has order 4
  EXPECT_THROW(make_rep(g, RepSpec::from_matrices({m})), ValidationError);
  EXPECT_THROW(make_rep(g, RepSpec::from_weights({})), ValidationError);
  EXPECT_THROW(make_rep(g, RepSpec::from_weights({{1}, {1}, {1}, {1}, {1}, {1}, {1}})), ValidationError);
}

TEST(Rep, FixedSubspaceDimensions) {
  auto g = make_group(s3_spec());
  auto perm = permutation_rep(g);
  EXPECT_EQ(fixed_subspace(perm, whole_group(*g)).cols(), 1);
  EXPECT_EQ(fixed_subspace(perm, trivial_subgroup(*g)).cols(), 3);
  auto std2 = make_rep(g, RepSpec::from_matrices(s3_standard_generators()));
  for (const auto& h : g->subgroups()) {
    // dimension of the fixed space equals the averaged character
    cplx avg = 0.0;
    for (int x : h.members) avg += std2.character()[x];
    avg /= static_cast<double>(h.order());
    EXPECT_EQ(fixed_subspace(std2, h).cols(), std::lround(avg.real()));
  }
}

TEST(Rep, BasicDecompositionIsOrthogonal) {
  auto g = make_group(GroupSpec::cyclic(4));
  auto v = make_rep(g, RepSpec::from_weights({{0}, {2}, {1}}));
  auto h = subgroup_from_members(*g, {0, 2});
  auto d = basic_decomposition(v, h);
  EXPECT_EQ(d.ring.cols(), 2);
  EXPECT_EQ(d.normal.cols(), 1);
  EXPECT_LT((d.ring.adjoint() * d.normal).norm(), 1e-12);
}

TEST(Rep, IsotropyGroups) {
  auto g = make_group(s3_spec());
  auto v = make_rep(g, RepSpec::from_matrices(s3_standard_generators()));
  CVec zero = CVec::Zero(2);
  EXPECT_EQ(isotropy_group(v, zero).order(), 6);
  CVec axis(2);
  axis << 1.0, 0.0;  // fixed by the reflection diag(1, -1)
  EXPECT_EQ(isotropy_group(v, axis).order(), 2);
  CVec generic(2);
  generic << 0.3, 0.7;
  EXPECT_TRUE(isotropy_group(v, generic).is_trivial());
}

TEST(Rep, IsotropyTypesUpToIsomorphism) {
  auto g = make_group(s3_spec());
  auto v = make_rep(g, RepSpec::from_matrices(s3_standard_generators()));
  std::vector<IsotropyType> transposition_types;
  for (const auto& h : g->subgroups())
    if (h.order() == 2) transposition_types.push_back(isotropy_type_of(v, v, h));
  ASSERT_EQ(transposition_types.size(), 3u);
  EXPECT_TRUE(isotropy_types_equal(transposition_types[0], transposition_types[1]));
  EXPECT_TRUE(isotropy_types_equal(transposition_types[1], transposition_types[2]));
  // Z/2 inside S3 and Z/2 acting on C by -1 give the same type
  auto z2 = make_group(GroupSpec::cyclic(2));
  auto c = make_rep(z2, RepSpec::from_weights({{1}}));
  EXPECT_TRUE(isotropy_types_equal(transposition_types[0], isotropy_type_of(c, c, whole_group(*z2))));
}

TEST(Rep, StabilizedTypeCancelsCommonSummands) {
  auto z2 = make_group(GroupSpec::cyclic(2));
  auto a = isotropy_type_of(make_rep(z2, RepSpec::from_weights({{1}, {1}})), make_rep(z2, RepSpec::from_weights({{1}})), whole_group(*z2));
  auto b = isotropy_type_of(make_rep(z2, RepSpec::from_weights({{1}})), make_rep(z2, RepSpec::from_weights({{0}})), whole_group(*z2));
  EXPECT_FALSE(isotropy_types_equal(a, b));
  EXPECT_TRUE(types_equal(stabilize_type(a), stabilize_type(b)));
  EXPECT_EQ(type_label(stabilize_type(a)), "H2 diff=[1]");
}
