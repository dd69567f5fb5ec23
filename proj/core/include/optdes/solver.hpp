#ifndef OPTDES_SOLVER_HPP
#define OPTDES_SOLVER_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "optdes/moments.hpp"
#include "optdes/relaxation.hpp"

namespace optdes {

struct SolverOptions {
  double barrier_mu_init = 1.0;
  double mu_shrink = 0.2;
  double newton_tol = 1e-9;
  double kkt_tol = 1e-8;
  int max_outer = 60;
  int max_newton = 50;
  double line_search_beta = 0.5;
  /// First centered iterate with mu at or below this value is kept as a
  /// well-conditioned interior snapshot (warm-start material for the
  /// recovery problems, which live on thin feasible fibers).
  double snapshot_mu = 1e-4;
};

enum class SolveStatus { Optimal, MaxIterations, NumericalFailure, Infeasible };

std::string to_string(SolveStatus status);

/// One outer stage of the path-following loop.
struct OuterRecord {
  double mu = 0.0;
  double barrier_start = 0.0;  // barrier objective entering the stage
  double barrier_value = 0.0;  // barrier objective after centering
  double objective = 0.0;
  int newton_steps = 0;
  bool centered = false;
};

struct SdpSolution {
  MomentSequence y;  // full lifted vector
  double objective = 0.0;
  SolveStatus status = SolveStatus::NumericalFailure;
  double kkt_residual = 0.0;
  std::vector<Eigen::MatrixXd> block_multipliers;  // Lambda_j, full size
  Eigen::VectorXd equality_multipliers;            // one per equality row
  double lambda_star = 0.0;                        // multiplier of y0 = 1
  double mu_final = 0.0;
  int outer_iterations = 0;
  int newton_iterations = 0;
  std::vector<OuterRecord> trace;
  /// Centered iterate captured at snapshot_mu (see SolverOptions).
  std::optional<Eigen::VectorXd> snapshot;
  double snapshot_mu = 0.0;

  SdpSolution() : y(1, 0) {}
};

/// Feasible-start path-following for MaxDetProblem. The start must satisfy
/// the equalities and make every PSD block positive definite (on its
/// quotient); otherwise InfeasibleStart is thrown. MaxIterations and
/// NumericalFailure are reported through the returned status.
SdpSolution solve(const MaxDetProblem& problem, const MomentSequence& start,
                  const SolverOptions& opts = {});

struct KktReport {
  double stationarity_residual = 0.0;  // scaled, along the feasible subspace
  std::vector<double> complementarity;  // scaled <S_b, Lambda_b> per block
  double max_complementarity = 0.0;
  double lambda_star = 0.0;
  double lambda_star_expected = 0.0;  // quotient size of the objective block
  double lambda_star_deviation = 0.0;
  int objective_kernel_dim = 0;
};

/// Recomputes the KKT identities of the logdet problem at an Optimal
/// solution: stationarity, per-block complementarity, and the scalar
/// identity tying the y0-multiplier to the objective block size.
KktReport check_kkt(const MaxDetProblem& problem, const SdpSolution& solution);

}  // namespace optdes

#endif  // OPTDES_SOLVER_HPP
