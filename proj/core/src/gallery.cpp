#include "optdes/gallery.hpp"

#include <cmath>

namespace optdes {

namespace {

Polynomial unit_ball_polynomial(int n) {
  Polynomial g = Polynomial::constant(n, 1.0);
  for (int i = 0; i < n; ++i) {
    g.add_term(MultiIndex::unit(n, i, 2), -1.0);
  }
  return g;
}

}  // namespace

DesignProblem interval_problem(int d, int delta) {
  DesignProblem problem;
  problem.name = "interval";
  problem.X = SemiAlgebraicSet(1);
  problem.X.add_inequality(unit_ball_polynomial(1));  // 1 - x^2 >= 0
  problem.d = d;
  problem.delta = delta;
  return problem;
}

DesignProblem wynn_polygon_problem(int d, int delta) {
  const double s = std::sqrt(2.0);
  DesignProblem problem;
  problem.name = "polygon";
  problem.X = SemiAlgebraicSet(2);

  Polynomial g1(2);  // x1 >= -sqrt(2)/4
  g1.add_term(MultiIndex::unit(2, 0), 1.0);
  g1.add_term(MultiIndex::zero(2), s / 4.0);
  problem.X.add_inequality(g1);

  Polynomial g2(2);  // x2 >= -sqrt(2)/4
  g2.add_term(MultiIndex::unit(2, 1), 1.0);
  g2.add_term(MultiIndex::zero(2), s / 4.0);
  problem.X.add_inequality(g2);

  Polynomial g3(2);  // x1 <= (x2 + sqrt(2)) / 3
  g3.add_term(MultiIndex::unit(2, 1), 1.0);
  g3.add_term(MultiIndex::zero(2), s);
  g3.add_term(MultiIndex::unit(2, 0), -3.0);
  problem.X.add_inequality(g3);

  Polynomial g4(2);  // x2 <= (x1 + sqrt(2)) / 3
  g4.add_term(MultiIndex::unit(2, 0), 1.0);
  g4.add_term(MultiIndex::zero(2), s);
  g4.add_term(MultiIndex::unit(2, 1), -3.0);
  problem.X.add_inequality(g4);

  problem.X.add_inequality(unit_ball_polynomial(2));  // redundant certificate

  problem.d = d;
  problem.delta = delta;
  return problem;
}

DesignProblem sphere_problem(int d, int delta) {
  DesignProblem problem;
  problem.name = "sphere";
  problem.X = SemiAlgebraicSet(3);
  problem.X.add_equality(unit_ball_polynomial(3));  // |x|^2 = 1
  problem.d = d;
  problem.delta = delta;
  problem.sampling.hook = SamplingHook::SphereNormalized;
  return problem;
}

std::optional<DesignProblem> gallery_problem(std::string_view name,
                                             std::optional<int> d,
                                             std::optional<int> delta) {
  DesignProblem problem;
  if (name == "interval") {
    problem = interval_problem();
  } else if (name == "polygon") {
    problem = wynn_polygon_problem();
  } else if (name == "sphere") {
    problem = sphere_problem();
  } else {
    return std::nullopt;
  }
  if (d) problem.d = *d;
  if (delta) problem.delta = *delta;
  return problem;
}

std::vector<Eigen::Vector2d> wynn_polygon_vertices() {
  const double s = std::sqrt(2.0);
  // Active pairs: {x1 = -s/4, x2 = -s/4}, {x1 = -s/4, 3 x2 = x1 + s},
  // {3 x1 = x2 + s, x2 = -s/4}, {3 x1 = x2 + s, 3 x2 = x1 + s}.
  std::vector<Eigen::Vector2d> v;
  v.emplace_back(-s / 4.0, -s / 4.0);
  v.emplace_back(-s / 4.0, (-s / 4.0 + s) / 3.0);
  v.emplace_back((-s / 4.0 + s) / 3.0, -s / 4.0);
  v.emplace_back(s / 2.0, s / 2.0);
  return v;
}

}  // namespace optdes
