#include "fop/polynomial.hpp"
#include "fop/random.hpp"

#include <gtest/gtest.h>

using namespace fop;

namespace {

long binom(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

PolyMap random_map(int n, int t, int d, RandomStream& rng) {
  PolyMap p(n, t, d);
  for (Eigen::Index i = 0; i < p.coeffs.size(); ++i) p.coeffs.data()[i] = rng.complex_normal();
  return p;
}

}  // namespace

TEST(MonomialBasis, SizesAndPrefix) {
  for (int n = 1; n <= 4; ++n)
    for (int d = 0; d <= 6; ++d) {
      auto b = MonomialBasis::get(n, d);
      EXPECT_EQ(b->size(), binom(n + d, d));
      auto c = MonomialBasis::get(n, d + 1);
      for (int i = 0; i < b->size(); ++i) EXPECT_EQ(b->exponents(i), c->exponents(i));
    }
}

TEST(MonomialBasis, GradedLexOrder) {
  auto b = MonomialBasis::get(2, 2);
  std::vector<std::vector<int>> expect{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  for (int i = 0; i < b->size(); ++i) EXPECT_EQ(b->exponents(i), expect[i]);
  EXPECT_EQ(b->index_of({1, 1}), 4);
  EXPECT_EQ(b->name(4), "z1*z2");
}

TEST(PolyMap, EvaluateMatchesDirectSum) {
  RandomStream rng(3);
  auto p = random_map(2, 2, 3, rng);
  CVec x = rng.complex_vector(2);
  CVec direct = CVec::Zero(2);
  const auto& b = p.basis();
  for (int i = 0; i < b.size(); ++i) {
    cplx m = std::pow(x(0), b.exponents(i)[0]) * std::pow(x(1), b.exponents(i)[1]);
    direct += m * p.coeffs.row(i).transpose();
  }
  EXPECT_LT((p.evaluate(x) - direct).norm(), 1e-12 * direct.norm());
}

TEST(PolyMap, JacobianMatchesFiniteDifferences) {
  RandomStream rng(4);
  auto p = random_map(3, 2, 4, rng);
  CVec x = rng.complex_vector(3) * 0.5;
  CMat j = p.jacobian(x);
  const double h = 1e-6;
  for (int k = 0; k < 3; ++k) {
    CVec e = CVec::Zero(3);
    e(k) = h;
    CVec fd = (p.evaluate(x + e) - p.evaluate(x - e)) / (2.0 * h);
    EXPECT_LT((j.col(k) - fd).norm(), 1e-6 * std::max(1.0, fd.norm()));
  }
}

TEST(PolyMap, LinearCompositionEvaluates) {
  RandomStream rng(5);
  auto p = random_map(2, 1, 5, rng);
  CMat a(2, 2);
  a << rng.complex_normal(), rng.complex_normal(), rng.complex_normal(), rng.complex_normal();
  auto q = compose_linear(p, a);
  for (int s = 0; s < 5; ++s) {
    CVec x = rng.complex_vector(2);
    EXPECT_LT((q.evaluate(x) - p.evaluate(a * x)).norm(), 1e-9 * std::max(1.0, p.evaluate(a * x).norm()));
  }
}

TEST(PolyMap, AffineCompositionEvaluates) {
  RandomStream rng(6);
  auto p = random_map(3, 2, 3, rng);
  CMat a = CMat::Zero(3, 1);
  a(0, 0) = 1.0;
  a(2, 0) = cplx(0.0, 1.0);
  CVec b = rng.complex_vector(3);
  auto q = compose_affine(p, a, b);
  EXPECT_EQ(q.nvars, 1);
  for (int s = 0; s < 5; ++s) {
    CVec u = rng.complex_vector(1);
    EXPECT_LT((q.evaluate(u) - p.evaluate(a * u + b)).norm(), 1e-9 * std::max(1.0, p.evaluate(a * u + b).norm()));
  }
}

TEST(PolyMap, ScalarProduct) {
  RandomStream rng(7);
  auto h = random_map(2, 1, 2, rng);
  auto q = random_map(2, 3, 3, rng);
  auto p = multiply(h, q);
  EXPECT_EQ(p.degree, 5);
  CVec x = rng.complex_vector(2);
  EXPECT_LT((p.evaluate(x) - h.evaluate(x)(0) * q.evaluate(x)).norm(), 1e-10 * std::max(1.0, p.evaluate(x).norm()));
}

TEST(PolyMap, DegreesAndParts) {
  PolyMap p = PolyMap::monomial({2, 1}, 1, 0) + PolyMap::monomial({1, 0}, 1, 0).with_degree(3);
  EXPECT_EQ(p.actual_degree(), 3);
  auto top = p.homogeneous_part(3);
  EXPECT_EQ(top.actual_degree(), 3);
  EXPECT_EQ(p.with_degree(5).actual_degree(), 3);
  EXPECT_EQ(p.with_degree(5).with_degree(3), p);
  EXPECT_EQ(to_string(PolyMap::monomial({0, 2}, 1, 0)), "(1)*z2^2");
}

TEST(PolyMap, ShapeChecks) {
  PolyMap a(2, 1, 2), b(1, 1, 2);
  EXPECT_THROW(a += b, ValidationError);
}
