#ifndef OPTDES_PROBLEM_IO_HPP
#define OPTDES_PROBLEM_IO_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "optdes/gallery.hpp"
#include "optdes/pipeline.hpp"

namespace optdes {

using nlohmann::json;

/// Problem file schema: name, n, d, delta, constraints as exponent /
/// coefficient term lists (optionally flagged as equalities), sampling and
/// recovery options. Parse errors name the offending field.
DesignProblem problem_from_json(const json& j);
json problem_to_json(const DesignProblem& problem);

DesignProblem load_problem(const std::string& path);

/// Self-contained result of one or both pipeline steps: embeds the problem,
/// the solver outcome and moments, and (after step two) the design and its
/// verification. Timings live in their own object so deterministic
/// comparisons can drop them.
struct Report {
  DesignProblem problem;

  std::string status;
  double objective = 0.0;
  double kkt_residual = 0.0;
  double mu_final = 0.0;
  int outer_iterations = 0;
  int newton_iterations = 0;
  double lambda_star = 0.0;
  double lambda_star_expected = 0.0;
  double stationarity_residual = 0.0;
  double max_complementarity = 0.0;

  MomentSequence y_star;   // order 2d
  MomentSequence lifted;   // order 2(d + delta)
  std::optional<Eigen::VectorXd> snapshot;
  double snapshot_mu = 0.0;

  bool recovered = false;
  std::string method;
  std::string fallback_note;
  Design design;
  FlatnessReport flatness;
  VerificationReport verification;
  double recovery_objective = 0.0;
  double moment_residual = 0.0;

  double solve_seconds = 0.0;
  double recover_seconds = 0.0;

  Report() : y_star(1, 0), lifted(1, 0) {}
};

Report make_report(const DesignProblem& problem, const SolveArtifacts& step1);
void attach_recovery(Report& report, const RecoverArtifacts& step2);

json report_to_json(const Report& report);
Report report_from_json(const json& j);

Report load_report(const std::string& path);
void write_json(const json& j, const std::string& path);

/// Rebuilds the step-one artifacts recorded in a report so step two can run
/// from the file alone.
SolveArtifacts artifacts_from_report(const Report& report);

}  // namespace optdes

#endif  // OPTDES_PROBLEM_IO_HPP
