#include <doctest.h>

#include <cmath>

#include "optdes/gallery.hpp"
#include "optdes/semialgebraic.hpp"

using namespace optdes;

TEST_CASE("interval validates with one constraint of half-degree 1") {
  SemiAlgebraicSet X = interval_problem().X;
  ValidationReport report = X.validate();
  CHECK(report.ok);
  REQUIRE(report.constraint_degrees.size() == 1);
  CHECK(report.constraint_degrees[0].first == 2);
  CHECK(report.constraint_degrees[0].second == 1);
  CHECK(report.ball_radius == doctest::Approx(1.0));
}

TEST_CASE("polygon validates through its redundant ball constraint") {
  SemiAlgebraicSet X = wynn_polygon_problem().X;
  ValidationReport report = X.validate();
  CHECK(report.ok);
  CHECK(X.constraints().size() == 5);
  CHECK(report.ball_constraint == 4);
  for (size_t j = 0; j < 4; ++j) {
    CHECK(report.constraint_degrees[j] == std::pair<int, int>{1, 1});
  }
}

TEST_CASE("polygon without the ball constraint is rejected") {
  const double s = std::sqrt(2.0);
  SemiAlgebraicSet X(2);
  Polynomial g1(2);
  g1.add_term(MultiIndex::unit(2, 0), 1.0);
  g1.add_term(MultiIndex::zero(2), s / 4.0);
  X.add_inequality(g1);
  CHECK_FALSE(X.validate().ok);
  CHECK_THROWS_AS(X.validated(), MissingBallCertificate);
}

TEST_CASE("half-degree invariant holds for every registered constraint") {
  for (const auto& problem :
       {interval_problem(), wynn_polygon_problem(), sphere_problem()}) {
    for (const Constraint& c : problem.X.constraints()) {
      CHECK(c.half_degree == (c.degree + 1) / 2);
    }
  }
}

TEST_CASE("membership") {
  SUBCASE("sphere surface point") {
    SemiAlgebraicSet X = sphere_problem().X;
    const double x[] = {1.0, 0.0, 0.0};
    CHECK(X.contains(x, 1e-9));
    const double inside[] = {0.5, 0.0, 0.0};  // not on the variety
    CHECK_FALSE(X.contains(inside, 1e-9));
  }
  SUBCASE("interval endpoint and outside point") {
    SemiAlgebraicSet X = interval_problem().X;
    const double in[] = {1.0};
    const double outside[] = {1.5};
    CHECK(X.contains(in, 1e-9));
    CHECK_FALSE(X.contains(outside, 1e-9));
  }
  SUBCASE("scaled polygon vertex") {
    SemiAlgebraicSet X = wynn_polygon_problem().X;
    const double s = std::sqrt(2.0);
    const double vertex[] = {s / 2.0, s / 2.0};
    CHECK(X.contains(vertex, 1e-9));
  }
  SUBCASE("all polygon vertices are members") {
    SemiAlgebraicSet X = wynn_polygon_problem().X;
    for (const Eigen::Vector2d& v : wynn_polygon_vertices()) {
      const double x[] = {v[0], v[1]};
      CHECK(X.contains(x, 1e-9));
    }
  }
}

TEST_CASE("equality encoding registers both signed copies") {
  SemiAlgebraicSet X(3);
  Polynomial ball(3);
  ball.add_term(MultiIndex::zero(3), 1.0);
  for (int i = 0; i < 3; ++i) ball.add_term(MultiIndex::unit(3, i, 2), -1.0);
  X.add_equality(ball);
  REQUIRE(X.constraints().size() == 2);
  CHECK(X.constraints()[0].equality_partner == 1);
  CHECK(X.constraints()[1].equality_partner == 0);
  CHECK(X.constraints()[0].degree == X.constraints()[1].degree);
  CHECK(X.constraints()[0].half_degree == X.constraints()[1].half_degree);

  // The two copies cancel pointwise.
  const double x[] = {0.3, -0.2, 0.8};
  CHECK(X.constraints()[0].g(x) + X.constraints()[1].g(x) ==
        doctest::Approx(0.0));

  // The + copy is the ball certificate, so the encoded sphere validates.
  CHECK(X.validate().ok);
  CHECK(X.validate().ball_constraint == 0);
  CHECK(X.has_equalities());
  CHECK(X.equality_polynomials().size() == 1);
}
