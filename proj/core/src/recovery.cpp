#include "optdes/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

#include "optdes/christoffel.hpp"
#include "optdes/relaxation.hpp"

namespace optdes {

std::string to_string(ChristoffelVariant variant) {
  return variant == ChristoffelVariant::LevelsetMin ? "christoffel-levelset"
                                                    : "christoffel-trace";
}

int numeric_rank(const Eigen::MatrixXd& M, double tol_rel) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double cutoff = tol_rel * sv[0];
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > cutoff) ++rank;
  }
  return rank;
}

std::vector<Eigen::VectorXd> extract_atoms(const MomentSequence& y, int t,
                                           double tol_rel,
                                           std::uint64_t seed) {
  const int n = y.dim();
  const MomentMatrix M = moment_matrix(y, t);
  const int S = static_cast<int>(M.entries.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M.entries);
  if (eig.info() != Eigen::Success) {
    throw ExtractionFailed("eigendecomposition of the moment matrix failed");
  }
  const Eigen::VectorXd& eigenvalues = eig.eigenvalues();  // ascending
  const double max_eig = eigenvalues[S - 1];
  if (!(max_eig > 0.0)) {
    throw ExtractionFailed("moment matrix has no positive eigenvalue");
  }
  int rank = 0;
  for (int i = 0; i < S; ++i) {
    if (eigenvalues[i] > tol_rel * max_eig) ++rank;
  }
  if (rank == 0) throw ExtractionFailed("numeric rank zero");

  // Truncated factor M ~ V V^T, V: S x rank.
  Eigen::MatrixXd V(S, rank);
  for (int k = 0; k < rank; ++k) {
    const int col = S - rank + k;
    V.col(k) = eig.eigenvectors().col(col) * std::sqrt(eigenvalues[col]);
  }

  // Column echelon of V^T over the monomial columns; pivots must stay below
  // degree t so the shift by any variable remains inside the basis.
  const MonomialBasis& basis = shared_basis(n, t);
  const int max_pivot_col = shared_basis(n, t - 1).size();
  Eigen::MatrixXd W = V.transpose();  // rank x S
  const double pivot_tol = 1e-8 * V.norm();
  std::vector<int> pivot_cols;
  int cur = 0;
  for (int col = 0; col < max_pivot_col && cur < rank; ++col) {
    int best = -1;
    double best_abs = pivot_tol;
    for (int row = cur; row < rank; ++row) {
      if (std::abs(W(row, col)) > best_abs) {
        best_abs = std::abs(W(row, col));
        best = row;
      }
    }
    if (best < 0) continue;
    W.row(cur).swap(W.row(best));
    W.row(cur) /= W(cur, col);
    for (int row = 0; row < rank; ++row) {
      if (row != cur && W(row, col) != 0.0) {
        W.row(row) -= W(row, col) * W.row(cur);
      }
    }
    pivot_cols.push_back(col);
    ++cur;
  }
  if (cur < rank) {
    throw EchelonFailure("only " + std::to_string(cur) + " pivots of " +
                         std::to_string(rank) +
                         " found below degree " + std::to_string(t) +
                         " (next candidate column " +
                         std::to_string(max_pivot_col) + ")");
  }

  // x^gamma = sum_k U(gamma, k) x^{beta_k} on the support; shift matrices
  // N_i realize multiplication by x_i in that basis.
  std::vector<Eigen::MatrixXd> shifts;
  shifts.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd Ni(rank, rank);
    for (int k = 0; k < rank; ++k) {
      const MultiIndex shifted =
          basis[pivot_cols[static_cast<size_t>(k)]] + MultiIndex::unit(n, i);
      const int gamma = basis.index_of(shifted);
      Ni.col(k) = W.col(gamma);
    }
    shifts.push_back(std::move(Ni));
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  Eigen::VectorXd lambda(n);
  for (int i = 0; i < n; ++i) lambda[i] = unif(rng);
  lambda /= lambda.sum();
  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(rank, rank);
  for (int i = 0; i < n; ++i) N += lambda[i] * shifts[static_cast<size_t>(i)];

  Eigen::RealSchur<Eigen::MatrixXd> schur(N);
  if (schur.info() != Eigen::Success) {
    throw ExtractionFailed("Schur decomposition failed");
  }
  const Eigen::MatrixXd& Q = schur.matrixU();
  std::vector<Eigen::VectorXd> atoms;
  atoms.reserve(static_cast<size_t>(rank));
  for (int j = 0; j < rank; ++j) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) {
      x[i] = Q.col(j).dot(shifts[static_cast<size_t>(i)] * Q.col(j));
    }
    atoms.push_back(std::move(x));
  }
  return atoms;
}

Eigen::VectorXd compute_weights(const std::vector<Eigen::VectorXd>& atoms,
                                const MomentSequence& y_star,
                                double* relative_residual) {
  const int ell = static_cast<int>(atoms.size());
  if (ell < 1) throw Error("compute_weights: no atoms");
  for (int i = 0; i < ell; ++i) {
    for (int j = i + 1; j < ell; ++j) {
      if ((atoms[static_cast<size_t>(i)] - atoms[static_cast<size_t>(j)])
              .norm() <= 1e-8) {
        throw Error("compute_weights: atoms " + std::to_string(i) + " and " +
                    std::to_string(j) + " coincide");
      }
    }
  }
  const MonomialBasis& basis = y_star.basis();
  Eigen::MatrixXd A(basis.size(), ell);
  for (int i = 0; i < ell; ++i) {
    const Eigen::VectorXd& x = atoms[static_cast<size_t>(i)];
    A.col(i) = basis.eval(
        std::span<const double>(x.data(), static_cast<size_t>(x.size())));
  }
  Eigen::VectorXd w = A.colPivHouseholderQr().solve(y_star.values());
  const double residual =
      (A * w - y_star.values()).norm() / std::max(1e-30, y_star.values().norm());
  if (relative_residual) *relative_residual = residual;
  if (residual > 1e-4) {
    throw BadFit("weight system relative residual " + std::to_string(residual));
  }
  double min_w = w.minCoeff();
  if (min_w < -1e-9) {
    throw NegativeWeight("weight " + std::to_string(min_w));
  }
  for (int i = 0; i < ell; ++i) w[i] = std::max(w[i], 0.0);
  const double total = w.sum();
  if (std::abs(total - 1.0) <= 1e-8 && total > 0.0) w /= total;
  return w;
}

namespace {

int max_half_degree(const SemiAlgebraicSet& X) {
  int v = 1;
  for (const Constraint& c : X.constraints()) v = std::max(v, c.half_degree);
  return v;
}

/// Start for a recovery SDP whose pins come from y_star: free coordinates
/// from a mid-path iterate of the corresponding design relaxation (fat
/// interior), pinned coordinates overwritten, then projected back onto the
/// equality subspace.
MomentSequence pinned_start(const SemiAlgebraicSet& X, int d, int r,
                            const MaxDetProblem& problem,
                            const MomentSequence& y_star,
                            const RecoveryOptions& opts, double loose_kkt) {
  const int pinned = shared_basis(X.dim(), 2 * d).size();
  Eigen::VectorXd guess;
  if (r == opts.delta && opts.lifted &&
      opts.lifted->size() == problem.num_vars) {
    guess = opts.lifted_snapshot ? *opts.lifted_snapshot
                                 : opts.lifted->values();
  } else {
    SolverOptions aux_opts = opts.solver;
    aux_opts.kkt_tol = loose_kkt;
    MaxDetProblem aux = build_design_sdp(X, d, r);
    MomentSequence aux_start = sample_interior_moments(
        X, aux.y_order, opts.sampling_seed, opts.sampling_count, opts.hook);
    SdpSolution aux_sol = solve(aux, aux_start, aux_opts);
    if (aux_sol.status == SolveStatus::NumericalFailure) {
      throw NumericalFailure("auxiliary design solve for the recovery start");
    }
    guess = aux_sol.y.values();
  }
  guess.head(pinned) = y_star.values().head(pinned);
  return project_onto_equalities(problem, guess);
}

double pinned_moment_residual(const Design& design,
                              const MomentSequence& y_star) {
  const MomentSequence reproduced = moments_of_atoms(design, y_star.order());
  return (reproduced.values() - y_star.values()).cwiseAbs().maxCoeff();
}

FlatnessReport flatness_of(const MomentSequence& y, int d, int r, int v,
                           double tol) {
  FlatnessReport report;
  report.r = r;
  report.v = v;
  report.tol_used = tol;
  report.rank_high = numeric_rank(moment_matrix(y, d + r).entries, tol);
  report.rank_low = numeric_rank(moment_matrix(y, d + r - v).entries, tol);
  report.flat = report.rank_high == report.rank_low;
  return report;
}

RecoveryResult finish_recovery(const MomentSequence& y_star, int d, int r,
                               SdpSolution&& sol, const FlatnessReport& flat,
                               const RecoveryOptions& opts,
                               const std::string& method) {
  std::vector<Eigen::VectorXd> atoms =
      extract_atoms(sol.y, d + r, opts.rank_tol, opts.seed);
  RecoveryResult result;
  result.design.atoms = std::move(atoms);
  result.design.weights =
      compute_weights(result.design.atoms, y_star);
  result.flatness = flat;
  result.solution = std::move(sol);
  result.method = method;
  result.moment_residual = pinned_moment_residual(result.design, y_star);
  return result;
}

}  // namespace

RecoveryResult nie_recover(const SemiAlgebraicSet& X,
                           const MomentSequence& y_star, int d,
                           const RecoveryOptions& opts) {
  const int v = max_half_degree(X);
  const int r_first = std::max(1, opts.delta);
  std::ostringstream log;
  for (int r = r_first; r <= std::max(r_first, opts.r_max); ++r) {
    MaxDetProblem problem = build_nie_sdp(X, y_star, d, r);
    MomentSequence start =
        pinned_start(X, d, r, problem, y_star, opts, 1e-3);
    SdpSolution sol = solve(problem, start, opts.solver);
    if (sol.status == SolveStatus::NumericalFailure) {
      throw NumericalFailure("recovery SDP at r = " + std::to_string(r));
    }
    FlatnessReport flat = flatness_of(sol.y, d, r, v, opts.rank_tol);
    if (!flat.flat) {
      log << "r=" << r << ": ranks " << flat.rank_high << " vs "
          << flat.rank_low << "; ";
      continue;
    }
    RecoveryResult result =
        finish_recovery(y_star, d, r, std::move(sol), flat, opts, "nie");
    if (result.moment_residual > 1e-6 * (1.0 + y_star.values().norm())) {
      log << "r=" << r << ": flat but moment residual "
          << result.moment_residual << "; ";
      continue;
    }
    return result;
  }
  throw NotFlat("rank condition not met up to r_max = " +
                std::to_string(opts.r_max) + " (" + log.str() + ")");
}

RecoveryResult christoffel_recover(const SemiAlgebraicSet& X,
                                   const MomentSequence& y_star, int d, int r,
                                   ChristoffelVariant variant,
                                   const RecoveryOptions& opts) {
  const int v = max_half_degree(X);
  const Polynomial p_star = dual_polynomial(y_star.truncated(2 * d), d);
  SdpSolution sol;
  if (variant == ChristoffelVariant::LevelsetMin) {
    MaxDetProblem problem = build_christoffel_min_sdp(X, p_star, d, r);
    MomentSequence start = sample_interior_moments(
        X, problem.y_order, opts.sampling_seed, opts.sampling_count, opts.hook);
    sol = solve(problem, start, opts.solver);
  } else {
    // The zero-contact face is thin; approach it along the levelset-min
    // central path, then pivot to the trace objective on the face.
    MaxDetProblem stage1 = build_christoffel_min_sdp(X, p_star, d, r);
    SolverOptions stage1_opts = opts.solver;
    stage1_opts.kkt_tol = 1e-6;
    MomentSequence start1 = sample_interior_moments(
        X, stage1.y_order, opts.sampling_seed, opts.sampling_count, opts.hook);
    SdpSolution warm = solve(stage1, start1, stage1_opts);
    MaxDetProblem problem = build_trace_min_sdp(X, p_star, d, r);
    MomentSequence start = project_onto_equalities(problem, warm.y.values());
    sol = solve(problem, start, opts.solver);
  }
  if (sol.status == SolveStatus::NumericalFailure) {
    throw NumericalFailure("christoffel recovery SDP");
  }
  FlatnessReport flat = flatness_of(sol.y, d, r, v, opts.rank_tol);
  if (!flat.flat) {
    throw NotFlat("christoffel recovery: ranks " +
                  std::to_string(flat.rank_high) + " vs " +
                  std::to_string(flat.rank_low) + " at r = " +
                  std::to_string(r));
  }
  try {
    return finish_recovery(y_star, d, r, std::move(sol), flat, opts,
                           to_string(variant));
  } catch (const EchelonFailure& e) {
    throw ExtractionFailed(e.what());
  } catch (const BadFit& e) {
    throw ExtractionFailed(e.what());
  } catch (const NegativeWeight& e) {
    throw ExtractionFailed(e.what());
  }
}

double design_logdet(const SemiAlgebraicSet& X, int d,
                     const MomentSequence& y) {
  const MomentMatrix M = moment_matrix(y, d);
  Eigen::MatrixXd projected = M.entries;
  if (X.has_equalities()) {
    const MonomialBasis& rows = shared_basis(X.dim(), d);
    std::vector<Eigen::VectorXd> cols;
    for (const Polynomial& h : X.equality_polynomials()) {
      const int max_beta = d - h.degree();
      if (max_beta < 0) continue;
      const MonomialBasis& betas = shared_basis(X.dim(), max_beta);
      for (int b = 0; b < betas.size(); ++b) {
        const Polynomial multiple = h * Polynomial::monomial(betas[b]);
        Eigen::VectorXd col = Eigen::VectorXd::Zero(rows.size());
        for (const auto& [alpha, coeff] : multiple.terms()) {
          col[rows.index_of(alpha)] = coeff;
        }
        cols.push_back(std::move(col));
      }
    }
    if (!cols.empty()) {
      Eigen::MatrixXd K(rows.size(), static_cast<Eigen::Index>(cols.size()));
      for (size_t i = 0; i < cols.size(); ++i) {
        K.col(static_cast<Eigen::Index>(i)) = cols[i];
      }
      const Eigen::MatrixXd Q = orthonormal_complement(K, rows.size());
      if (Q.size() > 0) projected = Q.transpose() * M.entries * Q;
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(projected);
  if (llt.info() != Eigen::Success) {
    return -std::numeric_limits<double>::infinity();
  }
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

MomentSequence project_onto_equalities(const MaxDetProblem& problem,
                                       const Eigen::VectorXd& guess) {
  const int m = problem.num_vars;
  const int rows = static_cast<int>(problem.equalities.size());
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(rows, m);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
  for (int r = 0; r < rows; ++r) {
    for (const auto& [k, c] : problem.equalities[static_cast<size_t>(r)].terms) {
      E(r, k) += c;
    }
    b[r] = problem.equalities[static_cast<size_t>(r)].rhs;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(E);
  Eigen::VectorXd particular = lu.solve(b);
  Eigen::MatrixXd kernel = lu.kernel();
  Eigen::VectorXd projected = particular;
  if (!(kernel.cols() == 1 && kernel.isZero(0.0))) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(kernel);
    Eigen::MatrixXd N =
        qr.householderQ() *
        Eigen::MatrixXd::Identity(m, static_cast<int>(kernel.cols()));
    projected += N * (N.transpose() * (guess - particular));
  }
  return MomentSequence(problem.n, problem.y_order, projected);
}

VerificationReport verify_design(const SemiAlgebraicSet& X,
                                 const Design& design,
                                 const MomentSequence& y_star, int d,
                                 std::optional<double> solver_objective) {
  VerificationReport report;
  const int n = X.dim();
  report.atom_count = design.size();
  report.count_lower = binomial(n + d, n);
  report.count_upper = binomial(n + 2 * d, n);
  report.count_within_bounds = report.atom_count >= report.count_lower &&
                               report.atom_count <= report.count_upper;

  report.moment_residual = pinned_moment_residual(design, y_star);

  const double contact = static_cast<double>(binomial(n + d, n));
  try {
    double worst = 0.0;
    for (const Eigen::VectorXd& x : design.atoms) {
      const double p = christoffel_eval(
          y_star.truncated(2 * d), d,
          std::span<const double>(x.data(), static_cast<size_t>(x.size())));
      worst = std::max(worst, std::abs(p - contact));
    }
    report.christoffel_contact = worst;
    report.christoffel_evaluated = true;
  } catch (const SingularMomentMatrix&) {
    report.christoffel_evaluated = false;
  }

  report.membership_ok = true;
  double worst_g = std::numeric_limits<double>::infinity();
  for (const Eigen::VectorXd& x : design.atoms) {
    const std::span<const double> xs(x.data(), static_cast<size_t>(x.size()));
    if (!X.contains(xs, 1e-6)) report.membership_ok = false;
    for (const Constraint& c : X.constraints()) {
      worst_g = std::min(worst_g, c.g(xs));
    }
  }
  report.worst_membership = worst_g;

  if (solver_objective) {
    const double at_atoms =
        design_logdet(X, d, moments_of_atoms(design, 2 * d));
    report.objective_gap = std::abs(at_atoms - *solver_objective);
    report.objective_evaluated = std::isfinite(at_atoms);
  }

  report.weight_sum_error = std::abs(design.weights.sum() - 1.0);
  report.min_weight =
      design.size() > 0 ? design.weights.minCoeff() : 0.0;
  return report;
}

}  // namespace optdes
