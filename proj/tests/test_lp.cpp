#include <gtest/gtest.h>

#include <random>

#include "previsio/lp.hpp"

using namespace previsio;
using namespace previsio::lp;

namespace {

std::vector<Rational> row(std::initializer_list<long> v) {
  std::vector<Rational> r;
  for (auto x : v) r.emplace_back(x);
  return r;
}

}  // namespace

TEST(Lp, SimpleOptimum) {
  LinearProgram p(1);
  p.set_objective(row({1}), Sense::Maximize);
  p.add_constraint(row({1}), Relation::LessEqual, Rational(3));
  auto r = solve(p);
  ASSERT_TRUE(r.optimal());
  EXPECT_EQ(r.as_optimal().value, 3);
  EXPECT_EQ(r.as_optimal().point[0], 3);
}

TEST(Lp, InfeasibleWithCertificate) {
  LinearProgram p(1);
  p.set_objective(row({1}), Sense::Maximize);
  p.add_constraint(row({1}), Relation::LessEqual, Rational(-1));
  auto r = solve(p);
  ASSERT_TRUE(r.infeasible());
  EXPECT_TRUE(verify_farkas(p, std::get<Infeasible>(r.outcome).certificate));
}

TEST(Lp, UnboundedWithRay) {
  LinearProgram p(1);
  p.set_objective(row({1}), Sense::Maximize);
  auto r = solve(p);
  ASSERT_TRUE(r.unbounded());
  const auto& u = std::get<Unbounded>(r.outcome);
  EXPECT_TRUE(verify_ray(p, u));
  EXPECT_EQ(u.ray[0], 1);
}

TEST(Lp, ZeroObjectiveIsFeasibilityTest) {
  LinearProgram p(2);
  p.add_constraint(row({1, 1}), Relation::Equal, Rational(1));
  auto r = solve(p);
  ASSERT_TRUE(r.optimal());
  EXPECT_EQ(r.as_optimal().value, 0);
  EXPECT_TRUE(is_feasible_point(p, r.as_optimal().point));
}

TEST(Lp, FreeAndBoundedVariables) {
  // min x - y, -2 <= x <= 5 free-ish, y <= 4 with no lower bound, x + y >= 1.
  LinearProgram p(2);
  p.set_bounds(0, Rational(-2), Rational(5));
  p.set_bounds(1, std::nullopt, Rational(4));
  p.set_objective(row({1, -1}), Sense::Minimize);
  p.add_constraint(row({1, 1}), Relation::GreaterEqual, Rational(1));
  auto r = solve(p);
  ASSERT_TRUE(r.optimal());
  EXPECT_EQ(r.as_optimal().value, -6);
  EXPECT_TRUE(is_feasible_point(p, r.as_optimal().point));
}

TEST(Lp, InconsistentBounds) {
  LinearProgram p(1);
  p.set_bounds(0, Rational(2), Rational(1));
  auto r = solve(p);
  ASSERT_TRUE(r.infeasible());
  EXPECT_TRUE(verify_farkas(p, std::get<Infeasible>(r.outcome).certificate));
}

TEST(Lp, EqualityInfeasible) {
  LinearProgram p(2);
  p.set_free(0);
  p.set_free(1);
  p.add_constraint(row({1, 1}), Relation::Equal, Rational(1));
  p.add_constraint(row({2, 2}), Relation::Equal, Rational(3));
  auto r = solve(p);
  ASSERT_TRUE(r.infeasible());
  EXPECT_TRUE(verify_farkas(p, std::get<Infeasible>(r.outcome).certificate));
}

TEST(Lp, RedundantRowsAndDegeneracy) {
  LinearProgram p(3);
  p.set_objective(row({1, 1, 1}), Sense::Maximize);
  p.add_constraint(row({1, 1, 0}), Relation::LessEqual, Rational(1));
  p.add_constraint(row({1, 1, 0}), Relation::LessEqual, Rational(1));
  p.add_constraint(row({0, 1, 1}), Relation::LessEqual, Rational(1));
  p.add_constraint(row({1, 2, 1}), Relation::Equal, Rational(2));
  p.add_constraint(row({2, 4, 2}), Relation::Equal, Rational(4));
  auto r = solve(p);
  ASSERT_TRUE(r.optimal());
  EXPECT_EQ(r.as_optimal().value, 2);
}

TEST(Lp, MalformedRow) {
  LinearProgram p(2);
  p.add_constraint(row({1}), Relation::LessEqual, Rational(1));
  try {
    solve(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::MalformedProgram);
  }
}

TEST(Lp, TextDump) {
  LinearProgram p(2);
  p.set_objective(row({1, -2}), Sense::Maximize);
  p.set_free(1);
  p.add_constraint(row({1, 1}), Relation::LessEqual, Rational(3));
  auto text = p.to_text({"s", "eps"});
  EXPECT_NE(text.find("obj: s - 2/1 eps"), std::string::npos);
  EXPECT_NE(text.find("c0: s + eps <= 3/1"), std::string::npos);
  EXPECT_NE(text.find("eps free"), std::string::npos);
}

// Random small programs: every outcome re-verifies, and for bounded feasible
// ones the optimum of  max c.x, Ax <= b, x >= 0  equals that of the dual
// min b.y, A^T y >= c, y >= 0.
TEST(Lp, RandomCertificatesAndStrongDuality) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-4, 4);
  int optimal = 0, infeasible = 0, unbounded = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 1 + trial % 4, m = 1 + (trial / 4) % 4;
    LinearProgram p(n);
    std::vector<Rational> c(n);
    for (auto& v : c) v = coef(rng);
    p.set_objective(c, Sense::Maximize);
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(n));
    std::vector<Rational> b(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (auto& v : a[i]) v = coef(rng);
      b[i] = coef(rng);
      p.add_constraint(a[i], Relation::LessEqual, b[i]);
    }
    auto r = solve(p);
    if (r.infeasible()) {
      ++infeasible;
      EXPECT_TRUE(verify_farkas(p, std::get<Infeasible>(r.outcome).certificate));
      continue;
    }
    if (r.unbounded()) {
      ++unbounded;
      EXPECT_TRUE(verify_ray(p, std::get<Unbounded>(r.outcome)));
      continue;
    }
    ++optimal;
    EXPECT_TRUE(is_feasible_point(p, r.as_optimal().point));
    LinearProgram d(m);
    d.set_objective(b, Sense::Minimize);
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Rational> col(m);
      for (std::size_t i = 0; i < m; ++i) col[i] = a[i][j];
      d.add_constraint(col, Relation::GreaterEqual, c[j]);
    }
    auto rd = solve(d);
    ASSERT_TRUE(rd.optimal());
    EXPECT_EQ(rd.as_optimal().value, r.as_optimal().value);
  }
  EXPECT_GT(optimal, 0);
  EXPECT_GT(infeasible, 0);
  EXPECT_GT(unbounded, 0);
}
