#include "fop/acceptance.hpp"

#include <gtest/gtest.h>

using namespace fop;
namespace acc = fop::acceptance;

namespace {

PolySystem univariate_system(const std::vector<cplx>& c) {
  PolySystem s;
  s.nvars = 1;
  s.equations.push_back(acc::univariate(c));
  return s;
}

}  // namespace

TEST(Solver, QuadraticRoots) {
  auto sol = solve_system(univariate_system({-1.0, 0.0, 1.0}));
  ASSERT_EQ(sol.points.size(), 2u);
  EXPECT_NEAR(sol.points[0].x(0).real(), -1.0, 1e-10);
  EXPECT_NEAR(sol.points[1].x(0).real(), 1.0, 1e-10);
  EXPECT_EQ(sol.diverged, 0);
}

TEST(Solver, RootsOfUnity) {
  auto sol = solve_system(univariate_system({-1.0, 0.0, 0.0, 1.0}));
  ASSERT_EQ(sol.points.size(), 3u);
  for (const auto& p : sol.points) EXPECT_NEAR(std::abs(p.x(0)), 1.0, 1e-10);
}

TEST(Solver, TripleRootIsOneCluster) {
  auto sol = solve_system(univariate_system({0.0, 0.0, 0.0, 1.0}));
  ASSERT_EQ(sol.points.size(), 1u);
  EXPECT_EQ(sol.points[0].multiplicity, 3);
  EXPECT_TRUE(sol.points[0].singular);
  EXPECT_LT(std::abs(sol.points[0].x(0)), 1e-6);
}

TEST(Solver, CircleAndLine) {
  PolySystem s;
  s.nvars = 2;
  PolyMap circle(2, 1, 2), line(2, 1, 1);
  circle.coeffs(circle.basis().index_of({2, 0}), 0) = 1.0;
  circle.coeffs(circle.basis().index_of({0, 2}), 0) = 1.0;
  circle.coeffs(0, 0) = -1.0;
  line.coeffs(line.basis().index_of({1, 0}), 0) = 1.0;
  line.coeffs(line.basis().index_of({0, 1}), 0) = -1.0;
  s.equations = {circle, line};
  auto sol = solve_system(s);
  ASSERT_EQ(sol.points.size(), 2u);
  for (const auto& p : sol.points) EXPECT_LT(s.evaluate(p.x).norm(), 1e-10);
}

TEST(Solver, BezoutCompleteRandomDense) {
  RandomStream rng(99);
  for (int t = 0; t < 5; ++t) {
    auto s = acc::random_dense_system(rng, 3, {4, 3, 2});
    EXPECT_EQ(count_with_multiplicity(s), 24);
  }
}

TEST(Solver, DeterministicAcrossRunsAndThreads) {
  RandomStream rng(5);
  auto s = acc::random_dense_system(rng, 2, {3, 3});
  SolveOptions one, four;
  four.threads = 4;
  auto a = solve_system(s, one), b = solve_system(s, one), c = solve_system(s, four);
  ASSERT_EQ(a.points.size(), 9u);
  ASSERT_EQ(a.points.size(), b.points.size());
  ASSERT_EQ(a.points.size(), c.points.size());
  for (size_t i = 0; i < a.points.size(); ++i) {
    EXPECT_EQ(a.points[i].x, b.points[i].x);
    EXPECT_EQ(a.points[i].x, c.points[i].x);
  }
}

TEST(Solver, InconsistentAndInvalidSystems) {
  EXPECT_TRUE(solve_system(univariate_system({1.0})).points.empty());
  EXPECT_THROW(solve_system(univariate_system({0.0})), ValidationError);
  PolySystem wide;
  wide.nvars = 2;
  wide.equations.push_back(PolyMap::monomial({1, 0}, 1, 0));
  EXPECT_THROW(solve_system(wide), ValidationError);
}

TEST(Solver, NewtonPolishConverges) {
  auto s = univariate_system({-2.0, 0.0, 1.0});
  auto r = newton_polish(s, CVec::Constant(1, 1.3));
  EXPECT_TRUE(r.ok);
  EXPECT_NEAR(r.x(0).real(), std::sqrt(2.0), 1e-14);
}
