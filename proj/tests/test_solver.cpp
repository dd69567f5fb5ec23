#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "optdes/gallery.hpp"
#include "optdes/solver.hpp"

using namespace optdes;

namespace {

SdpSolution solve_gallery(const DesignProblem& problem,
                          const SolverOptions& opts = {}) {
  MaxDetProblem sdp = build_design_sdp(problem.X, problem.d, problem.delta);
  MomentSequence start =
      sample_interior_moments(problem.X, sdp.y_order, problem.sampling.seed,
                              problem.sampling.count, problem.sampling.hook);
  return solve(sdp, start, opts);
}

}  // namespace

TEST_CASE("interval d=5 delta=0 reproduces the optimal moments") {
  DesignProblem problem = interval_problem(5, 0);
  MaxDetProblem sdp = build_design_sdp(problem.X, 5, 0);
  MomentSequence start = sample_interior_moments(problem.X, 10, 7, 4096);
  SdpSolution sol = solve(sdp, start);
  REQUIRE(sol.status == SolveStatus::Optimal);

  const double expected[11] = {1.0, 0.0, 0.56, 0.0, 0.45, 0.0,
                               0.40, 0.0, 0.37, 0.0, 0.36};
  for (int k = 0; k < 11; ++k) {
    CHECK(sol.y[k] == doctest::Approx(expected[k]).epsilon(0).margin(5e-3));
  }

  SUBCASE("KKT multiplier equals the regression space dimension") {
    KktReport kkt = check_kkt(sdp, sol);
    CHECK(kkt.lambda_star == doctest::Approx(6.0).epsilon(0).margin(1e-4));
    CHECK(kkt.lambda_star_expected == 6.0);
    CHECK(kkt.max_complementarity <= 1e-6);
    CHECK(kkt.stationarity_residual <= 1e-6);
  }

  SUBCASE("objective agrees with an eigenvalue recomputation") {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        sdp.logdet_block->eval(sol.y.values()));
    const double logdet = eig.eigenvalues().array().log().sum();
    CHECK(sol.objective == doctest::Approx(logdet).epsilon(0).margin(1e-8));
  }

  SUBCASE("barrier objective is nondecreasing within each stage") {
    for (const OuterRecord& rec : sol.trace) {
      CHECK(rec.barrier_value >= rec.barrier_start - 1e-12);
    }
  }

  SUBCASE("a mid-path snapshot was captured") {
    REQUIRE(sol.snapshot.has_value());
    CHECK(sol.snapshot_mu <= 1e-4);
  }
}

TEST_CASE("sphere d=1: uniform second moments, zeros elsewhere") {
  DesignProblem problem = sphere_problem(1, 0);
  SdpSolution sol = solve_gallery(problem);
  REQUIRE(sol.status == SolveStatus::Optimal);
  const MonomialBasis& basis = sol.y.basis();
  CHECK(sol.y[0] == doctest::Approx(1.0).epsilon(1e-12));
  for (int k = 1; k < sol.y.size(); ++k) {
    const MultiIndex& alpha = basis[k];
    const bool diagonal = alpha.degree() == 2 &&
                          (alpha[0] == 2 || alpha[1] == 2 || alpha[2] == 2);
    if (diagonal) {
      CHECK(sol.y[k] == doctest::Approx(1.0 / 3.0).epsilon(0).margin(1e-3));
    } else {
      CHECK(std::abs(sol.y[k]) <= 1e-6);
    }
  }

  MaxDetProblem sdp = build_design_sdp(problem.X, 1, 0);
  KktReport kkt = check_kkt(sdp, sol);
  CHECK(kkt.lambda_star == doctest::Approx(4.0).epsilon(0).margin(1e-4));
  CHECK(kkt.objective_kernel_dim == 0);
}

TEST_CASE("degree-0 logdet block solves trivially") {
  // M_0(y) = [y0] with y0 pinned to one: the objective is identically zero.
  MaxDetProblem p;
  p.n = 1;
  p.y_order = 0;
  p.num_vars = 1;
  p.objective = ObjectiveKind::LogDet;
  AffineBlock block;
  block.label = "M_0(y)";
  block.size = 1;
  block.by_var.resize(1);
  block.by_var[0].push_back({0, 0, 1.0});
  block.touched.push_back(0);
  p.logdet_block = block;
  p.logdet_order = 0;
  p.psd_blocks.push_back(block);
  LinearEquality eq;
  eq.terms.emplace_back(0, 1.0);
  eq.rhs = 1.0;
  p.equalities.push_back(eq);

  MomentSequence start(1, 0);
  start[0] = 1.0;
  SdpSolution sol = solve(p, start);
  CHECK(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(0.0));
}

TEST_CASE("infeasible start is rejected") {
  DesignProblem problem = interval_problem(2, 0);
  MaxDetProblem sdp = build_design_sdp(problem.X, 2, 0);
  MomentSequence start(1, 4);
  start[0] = 1.0;  // mass only: moment matrix is singular
  CHECK_THROWS_AS(solve(sdp, start), InfeasibleStart);
}

TEST_CASE("start violating the equalities is rejected") {
  DesignProblem problem = interval_problem(2, 0);
  MaxDetProblem sdp = build_design_sdp(problem.X, 2, 0);
  MomentSequence start = sample_interior_moments(problem.X, 4, 7, 1024);
  start[0] = 2.0;
  CHECK_THROWS_AS(solve(sdp, start), InfeasibleStart);
}

TEST_CASE("identical inputs give bit-identical solutions") {
  DesignProblem problem = wynn_polygon_problem(1, 1);
  SdpSolution a = solve_gallery(problem);
  SdpSolution b = solve_gallery(problem);
  REQUIRE(a.y.size() == b.y.size());
  for (int k = 0; k < a.y.size(); ++k) {
    CHECK(a.y[k] == b.y[k]);  // exact equality, not approximate
  }
  CHECK(a.objective == b.objective);
  CHECK(a.mu_final == b.mu_final);
}

TEST_CASE("feasibility is preserved at the returned iterate") {
  DesignProblem problem = wynn_polygon_problem(1, 2);
  MaxDetProblem sdp = build_design_sdp(problem.X, 1, 2);
  MomentSequence start = sample_interior_moments(problem.X, sdp.y_order, 7, 4096);
  SdpSolution sol = solve(sdp, start);
  REQUIRE(sol.status == SolveStatus::Optimal);
  for (const AffineBlock& block : sdp.psd_blocks) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        block.eval_quotient(sol.y.values()));
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
  }
}
