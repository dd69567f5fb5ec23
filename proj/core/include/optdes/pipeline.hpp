#ifndef OPTDES_PIPELINE_HPP
#define OPTDES_PIPELINE_HPP

#include <optional>
#include <string>

#include "optdes/recovery.hpp"
#include "optdes/relaxation.hpp"
#include "optdes/semialgebraic.hpp"
#include "optdes/solver.hpp"

namespace optdes {

struct SamplingSpec {
  SamplingHook hook = SamplingHook::Ball;
  std::uint64_t seed = 7;
  int count = 4096;
};

enum class RecoveryMethod { Nie, ChristoffelLevelset, ChristoffelTrace };

std::string to_string(RecoveryMethod method);
RecoveryMethod recovery_method_from_string(const std::string& name);

struct RecoverySpec {
  RecoveryMethod method = RecoveryMethod::Nie;
  int r_max = 3;
  double rank_tol = 1e-6;
  std::uint64_t seed = 2024;
};

/// In-memory form of a problem file: the design space plus the regression
/// degree, relaxation increment, and step options.
struct DesignProblem {
  std::string name;
  SemiAlgebraicSet X;
  int d = 1;
  int delta = 0;
  SamplingSpec sampling;
  RecoverySpec recovery;

  DesignProblem() : X(1) {}
};

/// Step one: the moment vector of the optimal design measure.
struct SolveArtifacts {
  SdpSolution solution;      // full lifted vector, multipliers, trace
  KktReport kkt;
  MomentSequence y_star;     // truncation to order 2d
  double seconds = 0.0;

  SolveArtifacts() : y_star(1, 0) {}
};

/// Step two: the atomic measure representing y_star.
struct RecoverArtifacts {
  RecoveryResult result;
  VerificationReport verification;
  std::string fallback_note;  // set when a christoffel variant fell back
  double seconds = 0.0;
};

SolveArtifacts run_step1(const DesignProblem& problem,
                         const SolverOptions& opts = {});

RecoveryOptions recovery_options(const DesignProblem& problem,
                                 const SolveArtifacts& step1);

RecoverArtifacts run_step2(const DesignProblem& problem,
                           const SolveArtifacts& step1);
RecoverArtifacts run_step2(const DesignProblem& problem,
                           const SolveArtifacts& step1,
                           const RecoveryOptions& opts,
                           RecoveryMethod method);

}  // namespace optdes

#endif  // OPTDES_PIPELINE_HPP
