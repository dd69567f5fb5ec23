#include "optdes/pipeline.hpp"

#include <chrono>

namespace optdes {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

std::string to_string(RecoveryMethod method) {
  switch (method) {
    case RecoveryMethod::Nie: return "nie";
    case RecoveryMethod::ChristoffelLevelset: return "christoffel-levelset";
    case RecoveryMethod::ChristoffelTrace: return "christoffel-trace";
  }
  return "unknown";
}

RecoveryMethod recovery_method_from_string(const std::string& name) {
  if (name == "nie") return RecoveryMethod::Nie;
  if (name == "christoffel-levelset") return RecoveryMethod::ChristoffelLevelset;
  if (name == "christoffel-trace") return RecoveryMethod::ChristoffelTrace;
  throw ParseError("unknown recovery method '" + name + "'");
}

SolveArtifacts run_step1(const DesignProblem& problem,
                         const SolverOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  MaxDetProblem sdp = build_design_sdp(problem.X, problem.d, problem.delta);
  MomentSequence start =
      sample_interior_moments(problem.X, sdp.y_order, problem.sampling.seed,
                              problem.sampling.count, problem.sampling.hook);
  SolveArtifacts artifacts;
  artifacts.solution = solve(sdp, start, opts);
  artifacts.kkt = check_kkt(sdp, artifacts.solution);
  artifacts.y_star = artifacts.solution.y.truncated(2 * problem.d);
  artifacts.seconds = seconds_since(t0);
  return artifacts;
}

RecoveryOptions recovery_options(const DesignProblem& problem,
                                 const SolveArtifacts& step1) {
  RecoveryOptions opts;
  opts.r_max = problem.recovery.r_max;
  opts.rank_tol = problem.recovery.rank_tol;
  opts.seed = problem.recovery.seed;
  opts.hook = problem.sampling.hook;
  opts.sampling_seed = problem.sampling.seed;
  opts.sampling_count = problem.sampling.count;
  opts.delta = problem.delta;
  opts.lifted = step1.solution.y;
  opts.lifted_snapshot = step1.solution.snapshot;
  return opts;
}

RecoverArtifacts run_step2(const DesignProblem& problem,
                           const SolveArtifacts& step1) {
  return run_step2(problem, step1, recovery_options(problem, step1),
                   problem.recovery.method);
}

RecoverArtifacts run_step2(const DesignProblem& problem,
                           const SolveArtifacts& step1,
                           const RecoveryOptions& opts,
                           RecoveryMethod method) {
  const auto t0 = std::chrono::steady_clock::now();
  RecoverArtifacts artifacts;
  if (method == RecoveryMethod::Nie) {
    artifacts.result = nie_recover(problem.X, step1.y_star, problem.d, opts);
  } else {
    const ChristoffelVariant variant =
        method == RecoveryMethod::ChristoffelLevelset
            ? ChristoffelVariant::LevelsetMin
            : ChristoffelVariant::TraceMin;
    const int r_first = std::max(1, problem.delta);
    bool done = false;
    std::string failures;
    for (int r = r_first; r <= std::max(r_first, opts.r_max) && !done; ++r) {
      try {
        artifacts.result = christoffel_recover(problem.X, step1.y_star,
                                               problem.d, r, variant, opts);
        done = true;
      } catch (const Error& e) {
        failures += std::string(failures.empty() ? "" : "; ") + e.what();
      }
    }
    if (!done) {
      // The dual-certificate recoveries are allowed to fail; fall back to
      // the pinned-trace route and record why.
      artifacts.result = nie_recover(problem.X, step1.y_star, problem.d, opts);
      artifacts.fallback_note = to_string(variant) +
                                " failed, fell back to nie (" + failures + ")";
    }
  }
  artifacts.verification =
      verify_design(problem.X, artifacts.result.design, step1.y_star,
                    problem.d, step1.solution.objective);
  artifacts.seconds = seconds_since(t0);
  return artifacts;
}

}  // namespace optdes
