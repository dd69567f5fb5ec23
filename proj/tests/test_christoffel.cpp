#include <doctest.h>

#include <cmath>
#include <random>

#include "optdes/christoffel.hpp"
#include "optdes/gallery.hpp"

using namespace optdes;

namespace {

MomentSequence uniform_interval_moments(int order) {
  MomentSequence y(1, order);
  for (int k = 0; k <= order; ++k) {
    y[k] = (k % 2 == 0) ? 1.0 / (k + 1) : 0.0;
  }
  return y;
}

// Classical Gram-Schmidt against the Riesz inner product, as an oracle.
std::vector<Polynomial> gram_schmidt(const MomentSequence& y, int d) {
  const MonomialBasis& basis = shared_basis(y.dim(), d);
  std::vector<Polynomial> out;
  for (int k = 0; k < basis.size(); ++k) {
    Polynomial p = Polynomial::monomial(basis[k]);
    for (const Polynomial& q : out) {
      p = p - q * riesz(y, p * q);
    }
    const double norm = std::sqrt(riesz(y, p * p));
    out.push_back(p * (1.0 / norm));
  }
  return out;
}

// Sequence whose order-1 moment matrix is the identity: unit mass, unit
// pure second moments, zeros elsewhere.
MomentSequence identity_moment_sequence(int n, int order) {
  MomentSequence y(n, order);
  y[0] = 1.0;
  const MonomialBasis& basis = y.basis();
  for (int i = 0; i < n; ++i) {
    y[basis.index_of(MultiIndex::unit(n, i, 2))] = 1.0;
  }
  return y;
}

}  // namespace

TEST_CASE("orthonormal family on the uniform interval measure") {
  MomentSequence y = uniform_interval_moments(4);
  OrthonormalFamily family = orthonormal_family(y, 2);

  SUBCASE("matches the Gram-Schmidt oracle") {
    std::vector<Polynomial> oracle = gram_schmidt(y, 2);
    for (int k = 0; k < 3; ++k) {
      Polynomial p = family.polynomial(k);
      for (const auto& [alpha, c] : oracle[static_cast<size_t>(k)].terms()) {
        CHECK(p.coeff(alpha) == doctest::Approx(c).epsilon(1e-10));
      }
    }
    // P_1 = sqrt(3) x and P_2 proportional to the Legendre polynomial.
    CHECK(family.polynomial(1).coeff(MultiIndex({1})) ==
          doctest::Approx(std::sqrt(3.0)));
    const double lead = family.polynomial(2).coeff(MultiIndex({2}));
    const double constant = family.polynomial(2).coeff(MultiIndex({0}));
    CHECK(lead / constant == doctest::Approx(-3.0));  // 3x^2 - 1 direction
  }

  SUBCASE("orthonormality via the Riesz functional") {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const double inner =
            riesz(y, family.polynomial(a) * family.polynomial(b));
        CHECK(inner == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(0).margin(1e-8));
      }
    }
  }

  SUBCASE("L M L^T is the identity") {
    Eigen::MatrixXd M = moment_matrix(y, 2).entries;
    Eigen::MatrixXd I = family.coeffs * M * family.coeffs.transpose();
    CHECK((I - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("rank-deficient moment matrix is rejected") {
  Design dirac;
  dirac.atoms.push_back(Eigen::VectorXd::Constant(1, 0.5));
  dirac.weights = Eigen::VectorXd::Constant(1, 1.0);
  MomentSequence y = moments_of_atoms(dirac, 4);
  CHECK_THROWS_AS(orthonormal_family(y, 2), SingularMomentMatrix);
  const double x[] = {0.1};
  CHECK_THROWS_AS(christoffel_eval(y, 2, x), SingularMomentMatrix);
  CHECK_THROWS_AS(dual_polynomial(y, 2), SingularMomentMatrix);
}

TEST_CASE("christoffel evaluation") {
  SUBCASE("identity moment matrix gives the squared monomial norm") {
    MomentSequence y = identity_moment_sequence(2, 2);
    const double origin[] = {0.0, 0.0};
    CHECK(christoffel_eval(y, 1, origin) == doctest::Approx(1.0));
    const double x[] = {0.5, -0.5};
    CHECK(christoffel_eval(y, 1, x) == doctest::Approx(1.0 + 0.25 + 0.25));
  }
  SUBCASE("two evaluation routes agree") {
    MomentSequence y = uniform_interval_moments(8);
    OrthonormalFamily family = orthonormal_family(y, 4);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      const double x[] = {unif(rng)};
      double sum_sq = 0.0;
      for (int k = 0; k < family.coeffs.rows(); ++k) {
        const double pk = family.polynomial(k)(x);
        sum_sq += pk * pk;
      }
      CHECK(christoffel_eval(y, 4, x) ==
            doctest::Approx(sum_sq).epsilon(0).margin(1e-8));
      CHECK(christoffel_eval(y, 4, x) > 0.0);
    }
  }
}

TEST_CASE("dual polynomial") {
  SUBCASE("identity moment matrix, n=1, d=1: p* = 1 - x^2") {
    MomentSequence y = identity_moment_sequence(1, 2);
    Polynomial p = dual_polynomial(y, 1);
    CHECK(p.coeff(MultiIndex({0})) == doctest::Approx(1.0));
    CHECK(p.coeff(MultiIndex({1})) == doctest::Approx(0.0));
    CHECK(p.coeff(MultiIndex({2})) == doctest::Approx(-1.0));
  }
  SUBCASE("agrees with binom - christoffel_eval at random points") {
    MomentSequence y = uniform_interval_moments(6);
    Polynomial p = dual_polynomial(y, 3);
    CHECK(p.degree() == 6);
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      const double x[] = {unif(rng)};
      CHECK(p(x) == doctest::Approx(4.0 - christoffel_eval(y, 3, x))
                        .epsilon(0).margin(1e-8));
    }
  }
}

TEST_CASE("trace identity: L_y of the christoffel polynomial is binom(n+d,n)") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 2);
    Design design;
    const int atoms = 8;
    Eigen::VectorXd w(atoms);
    for (int i = 0; i < atoms; ++i) {
      Eigen::VectorXd x(n);
      for (int k = 0; k < n; ++k) x[k] = unif(rng);
      design.atoms.push_back(x);
      w[i] = 0.5 + unif(rng) * 0.25;
    }
    design.weights = w / w.sum();
    MomentSequence y = moments_of_atoms(design, 4);
    const double C = static_cast<double>(binomial(n + 2, n));
    Polynomial christoffel =
        Polynomial::constant(n, C) - dual_polynomial(y, 2);
    CHECK(riesz(y, christoffel) == doctest::Approx(C).epsilon(0).margin(1e-8));
  }
}

TEST_CASE("levelset sampling") {
  MomentSequence y = uniform_interval_moments(4);
  SUBCASE("grid size and membership flags") {
    GridSpec spec;
    spec.points_per_axis = 1001;
    auto samples = levelset_samples(y, 2, interval_problem().X, spec);
    CHECK(samples.size() == 1001);
    int inside = 0;
    for (const auto& s : samples) {
      if (s.inside) ++inside;
      CHECK(s.value > 0.0);
    }
    CHECK(inside > 900);  // box is only slightly wider than [-1, 1]
    const std::string csv = levelset_csv(samples);
    CHECK(csv.rfind("x1,value,inside\n", 0) == 0);
  }
  SUBCASE("dimension guard") {
    SemiAlgebraicSet X4(4);
    Polynomial ball(4);
    ball.add_term(MultiIndex::zero(4), 1.0);
    for (int i = 0; i < 4; ++i) ball.add_term(MultiIndex::unit(4, i, 2), -1.0);
    X4.add_inequality(ball);
    MomentSequence y4(4, 2);
    y4[0] = 1.0;
    CHECK_THROWS_AS(levelset_samples(y4, 1, X4, GridSpec{}),
                    UnsupportedDimension);
  }
}
