#ifndef OPTDES_RECOVERY_HPP
#define OPTDES_RECOVERY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "optdes/design.hpp"
#include "optdes/moments.hpp"
#include "optdes/solver.hpp"

namespace optdes {

/// Rank test rank M_{d+r} = rank M_{d+r-v} with v = max_j v_j.
struct FlatnessReport {
  int r = 0;
  int rank_high = 0;
  int rank_low = 0;
  int v = 1;
  bool flat = false;
  double tol_used = 1e-6;
};

struct RecoveryOptions {
  int r_max = 3;
  double rank_tol = 1e-6;
  std::uint64_t seed = 2024;  // shift-matrix combination seed
  SolverOptions solver;
  /// Start construction for the recovery SDPs.
  SamplingHook hook = SamplingHook::Ball;
  std::uint64_t sampling_seed = 7;
  int sampling_count = 4096;
  /// Warm-start material from the design solve: its relaxation increment,
  /// the full lifted vector, and the mid-path snapshot.
  int delta = 0;
  std::optional<MomentSequence> lifted;
  std::optional<Eigen::VectorXd> lifted_snapshot;
};

struct RecoveryResult {
  Design design;
  FlatnessReport flatness;
  SdpSolution solution;  // the recovery SDP solution (full lifted vector)
  std::string method;
  double moment_residual = 0.0;  // max deviation from the pinned moments
};

/// Count of singular values above tol_rel times the largest one.
int numeric_rank(const Eigen::MatrixXd& M, double tol_rel = 1e-6);

/// Flat-extension extraction: truncated eigenfactorization of M_t(y),
/// column echelon of the factor, shift matrices, and a seeded random convex
/// combination whose Schur basis reads off the atom coordinates.
std::vector<Eigen::VectorXd> extract_atoms(const MomentSequence& y, int t,
                                           double tol_rel = 1e-6,
                                           std::uint64_t seed = 2024);

/// Least-squares weights for sum_i w_i x_i^alpha = y_alpha over all alpha up
/// to the order of y_star. Throws BadFit when the relative residual exceeds
/// 1e-4 and NegativeWeight when a weight falls below -1e-9.
Eigen::VectorXd compute_weights(const std::vector<Eigen::VectorXd>& atoms,
                                const MomentSequence& y_star,
                                double* relative_residual = nullptr);

/// Recovery loop over r: solve the pinned-trace SDP, test flatness, extract.
RecoveryResult nie_recover(const SemiAlgebraicSet& X,
                           const MomentSequence& y_star, int d,
                           const RecoveryOptions& opts);

enum class ChristoffelVariant { LevelsetMin, TraceMin };

std::string to_string(ChristoffelVariant variant);

/// Recovery through the dual certificate: minimize L_y(p*) on X, or
/// minimize trace M_{d+r}(y) subject to L_y(p*) = 0. Extraction failures
/// here are expected outcomes and surface as NotFlat / ExtractionFailed.
RecoveryResult christoffel_recover(const SemiAlgebraicSet& X,
                                   const MomentSequence& y_star, int d, int r,
                                   ChristoffelVariant variant,
                                   const RecoveryOptions& opts);

struct VerificationReport {
  double moment_residual = 0.0;      // (i) max |sum w x^a - y*_a|, |a| <= 2d
  bool christoffel_evaluated = false;
  double christoffel_contact = 0.0;  // (ii) max_i |p_d(x_i) - binom(n+d, n)|
  bool membership_ok = false;        // (iii) all atoms inside X at 1e-6
  double worst_membership = 0.0;     // most negative g_j over atoms
  int atom_count = 0;                // (iv) with the Tchakaloff-type bounds
  std::int64_t count_lower = 0;
  std::int64_t count_upper = 0;
  bool count_within_bounds = false;
  bool objective_evaluated = false;
  double objective_gap = 0.0;        // (v) logdet at atoms vs solver value
  double weight_sum_error = 0.0;
  double min_weight = 0.0;
};

VerificationReport verify_design(const SemiAlgebraicSet& X,
                                 const Design& design,
                                 const MomentSequence& y_star, int d,
                                 std::optional<double> solver_objective = {});

/// logdet of M_d(y) restricted to the complement of the variety ideal's
/// degree-d multiples (plain logdet when X has no equality pairs).
double design_logdet(const SemiAlgebraicSet& X, int d, const MomentSequence& y);

/// Projects a guess onto the affine subspace cut out by the problem's
/// equalities; used to assemble warm starts for the recovery SDPs.
MomentSequence project_onto_equalities(const MaxDetProblem& problem,
                                       const Eigen::VectorXd& guess);

}  // namespace optdes

#endif  // OPTDES_RECOVERY_HPP
