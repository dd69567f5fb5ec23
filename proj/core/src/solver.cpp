#include "optdes/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/QR>

namespace optdes {

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::MaxIterations: return "max_iterations";
    case SolveStatus::NumericalFailure: return "numerical_failure";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

namespace {

struct Subspace {
  Eigen::MatrixXd E;             // stacked equality rows
  Eigen::VectorXd b;             // right-hand sides
  Eigen::VectorXd y_particular;  // one solution of E y = b
  Eigen::MatrixXd N;             // orthonormal basis of ker E
};

Subspace build_subspace(const MaxDetProblem& problem) {
  const int m = problem.num_vars;
  const int rows = static_cast<int>(problem.equalities.size());
  Subspace sub;
  sub.E = Eigen::MatrixXd::Zero(rows, m);
  sub.b = Eigen::VectorXd::Zero(rows);
  for (int r = 0; r < rows; ++r) {
    const LinearEquality& eq = problem.equalities[static_cast<size_t>(r)];
    for (const auto& [k, c] : eq.terms) sub.E(r, k) += c;
    sub.b[r] = eq.rhs;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(sub.E);
  sub.y_particular = lu.solve(sub.b);
  const double residual = (sub.E * sub.y_particular - sub.b).cwiseAbs().maxCoeff();
  if (residual > 1e-8 * (1.0 + sub.b.cwiseAbs().maxCoeff())) {
    throw Error("equality system is inconsistent (residual " +
                std::to_string(residual) + ")");
  }
  Eigen::MatrixXd kernel = lu.kernel();
  if (kernel.cols() == 1 && kernel.isZero(0.0)) {
    // Eigen returns a single zero column for a trivial kernel.
    sub.N = Eigen::MatrixXd(m, 0);
  } else {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(kernel);
    sub.N = qr.householderQ() *
            Eigen::MatrixXd::Identity(m, static_cast<int>(kernel.cols()));
  }
  return sub;
}

struct BlockState {
  Eigen::MatrixXd S;        // quotient-projected block
  Eigen::LLT<Eigen::MatrixXd> llt;
  double logdet = 0.0;
  bool pd = false;
  Eigen::MatrixXd W;        // full-size Q (Q^T S Q)^{-1} Q^T
};

/// Cholesky-based evaluation; W is only formed when requested.
void eval_block(const AffineBlock& block, const Eigen::VectorXd& y,
                bool need_inverse, BlockState& state) {
  state.S = block.eval_quotient(y);
  state.llt.compute(state.S);
  state.pd = state.llt.info() == Eigen::Success &&
             state.llt.matrixLLT().diagonal().minCoeff() > 0.0;
  if (!state.pd) return;
  state.logdet = 2.0 * state.llt.matrixLLT().diagonal().array().log().sum();
  if (!need_inverse) return;
  const int q = static_cast<int>(state.S.rows());
  Eigen::MatrixXd inv = state.llt.solve(Eigen::MatrixXd::Identity(q, q));
  if (block.quotient.size() == 0) {
    state.W = std::move(inv);
  } else {
    state.W = block.quotient * inv * block.quotient.transpose();
  }
}

void accumulate_gradient(const AffineBlock& block, const Eigen::MatrixXd& W,
                         double weight, Eigen::VectorXd& g) {
  for (int k : block.touched) {
    double acc = 0.0;
    for (const BlockTerm& t : block.by_var[static_cast<size_t>(k)]) {
      acc += t.coeff * W(t.row, t.col);
    }
    g[k] += weight * acc;
  }
}

void accumulate_hessian(const AffineBlock& block, const Eigen::MatrixXd& W,
                        double weight, Eigen::MatrixXd& H) {
  const auto& touched = block.touched;
  for (size_t a = 0; a < touched.size(); ++a) {
    const int k = touched[a];
    const auto& terms_k = block.by_var[static_cast<size_t>(k)];
    for (size_t bidx = a; bidx < touched.size(); ++bidx) {
      const int l = touched[bidx];
      const auto& terms_l = block.by_var[static_cast<size_t>(l)];
      double acc = 0.0;
      for (const BlockTerm& e : terms_k) {
        for (const BlockTerm& f : terms_l) {
          acc += e.coeff * f.coeff * W(f.col, e.row) * W(e.col, f.row);
        }
      }
      H(k, l) -= weight * acc;
      if (l != k) H(l, k) -= weight * acc;
    }
  }
}

struct Evaluation {
  double objective = 0.0;      // logdet objective block or -c'y (max form)
  double barrier_value = 0.0;  // objective + mu * sum logdet blocks
  bool feasible = false;
};

class Engine {
 public:
  explicit Engine(const MaxDetProblem& problem)
      : problem_(problem), sub_(build_subspace(problem)) {
    nu_total_ = 0;
    for (const AffineBlock& b : problem.psd_blocks) nu_total_ += b.quotient_size();
    if (problem_.objective == ObjectiveKind::LogDet && !problem_.logdet_block) {
      throw Error("logdet objective without an objective block");
    }
  }

  const Subspace& subspace() const { return sub_; }
  int free_dims() const { return static_cast<int>(sub_.N.cols()); }

  Eigen::VectorXd lift(const Eigen::VectorXd& u) const {
    return sub_.y_particular + sub_.N * u;
  }

  /// Feasibility + barrier value at y; no derivatives.
  Evaluation evaluate(const Eigen::VectorXd& y, double mu,
                      std::vector<BlockState>& states, BlockState& obj_state,
                      bool need_inverse) const {
    Evaluation ev;
    states.resize(problem_.psd_blocks.size());
    double barrier = 0.0;
    for (size_t b = 0; b < problem_.psd_blocks.size(); ++b) {
      eval_block(problem_.psd_blocks[b], y, need_inverse, states[b]);
      if (!states[b].pd) return ev;
      barrier += states[b].logdet;
    }
    if (problem_.objective == ObjectiveKind::LogDet) {
      eval_block(*problem_.logdet_block, y, need_inverse, obj_state);
      if (!obj_state.pd) return ev;
      ev.objective = obj_state.logdet;
    } else {
      ev.objective = -problem_.linear_objective.dot(y);
    }
    ev.barrier_value = ev.objective + mu * barrier;
    ev.feasible = true;
    return ev;
  }

  /// Gradient of objective + mu * barrier in y coordinates. Also exposes the
  /// KKT residual vector r_y = grad f + sum_b <mu W_b, A_.> by construction.
  Eigen::VectorXd gradient(double mu, const std::vector<BlockState>& states,
                           const BlockState& obj_state) const {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(problem_.num_vars);
    if (problem_.objective == ObjectiveKind::LogDet) {
      accumulate_gradient(*problem_.logdet_block, obj_state.W, 1.0, g);
    } else {
      g -= problem_.linear_objective;
    }
    for (size_t b = 0; b < problem_.psd_blocks.size(); ++b) {
      accumulate_gradient(problem_.psd_blocks[b], states[b].W, mu, g);
    }
    return g;
  }

  Eigen::MatrixXd hessian(double mu, const std::vector<BlockState>& states,
                          const BlockState& obj_state) const {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(problem_.num_vars, problem_.num_vars);
    if (problem_.objective == ObjectiveKind::LogDet) {
      accumulate_hessian(*problem_.logdet_block, obj_state.W, 1.0, H);
    }
    for (size_t b = 0; b < problem_.psd_blocks.size(); ++b) {
      accumulate_hessian(problem_.psd_blocks[b], states[b].W, mu, H);
    }
    return H;
  }

  int nu_total() const { return nu_total_; }

 private:
  const MaxDetProblem& problem_;
  Subspace sub_;
  int nu_total_ = 0;
};

/// Solve (-H_u) delta = g_u with diagonal equilibration; one ridge retry.
bool newton_step(const Eigen::MatrixXd& H_u, const Eigen::VectorXd& g_u,
                 Eigen::VectorXd& delta) {
  const int f = static_cast<int>(g_u.size());
  Eigen::MatrixXd A = -H_u;
  Eigen::VectorXd scale(f);
  for (int i = 0; i < f; ++i) {
    scale[i] = A(i, i) > 0.0 ? 1.0 / std::sqrt(A(i, i)) : 1.0;
  }
  Eigen::MatrixXd As = scale.asDiagonal() * A * scale.asDiagonal();
  Eigen::VectorXd gs = scale.asDiagonal() * g_u;
  Eigen::LLT<Eigen::MatrixXd> llt(As);
  if (llt.info() != Eigen::Success) {
    const double ridge = 1e-12 * As.trace() / std::max(1, f);
    As.diagonal().array() += ridge;
    llt.compute(As);
    if (llt.info() != Eigen::Success) return false;
  }
  delta = scale.asDiagonal() * llt.solve(gs);
  return delta.allFinite();
}

}  // namespace

SdpSolution solve(const MaxDetProblem& problem, const MomentSequence& start,
                  const SolverOptions& opts) {
  if (start.dim() != problem.n || start.size() != problem.num_vars) {
    throw DimensionMismatch("solver start has length " +
                            std::to_string(start.size()) + ", problem needs " +
                            std::to_string(problem.num_vars));
  }
  Engine engine(problem);
  const Subspace& sub = engine.subspace();

  // The start must already satisfy the equalities; we then re-project so the
  // affine parameterization is exact.
  const double eq_residual =
      (sub.E * start.values() - sub.b).cwiseAbs().maxCoeff();
  if (eq_residual > 1e-6 * (1.0 + sub.b.cwiseAbs().maxCoeff())) {
    throw InfeasibleStart("equalities violated by " +
                          std::to_string(eq_residual));
  }
  Eigen::VectorXd u = sub.N.transpose() * (start.values() - sub.y_particular);
  Eigen::VectorXd y = engine.lift(u);

  std::vector<BlockState> states;
  BlockState obj_state;
  double mu = opts.barrier_mu_init;
  Evaluation ev = engine.evaluate(y, mu, states, obj_state, true);
  if (!ev.feasible) {
    for (size_t b = 0; b < problem.psd_blocks.size(); ++b) {
      if (!states[b].pd) {
        throw InfeasibleStart("block " + problem.psd_blocks[b].label +
                              " is not positive definite at the start");
      }
    }
    throw InfeasibleStart("objective block is not positive definite at start");
  }

  SdpSolution sol;
  sol.y = MomentSequence(problem.n, problem.y_order, y);
  sol.status = SolveStatus::MaxIterations;
  bool numerical_failure = false;
  bool gap_reached = false;
  Eigen::VectorXd g_y;

  for (int outer = 0; outer < opts.max_outer; ++outer) {
    OuterRecord record;
    record.mu = mu;
    record.barrier_start = ev.barrier_value;
    bool centered = false;
    for (int it = 0; it < opts.max_newton; ++it) {
      g_y = engine.gradient(mu, states, obj_state);
      Eigen::MatrixXd H_y = engine.hessian(mu, states, obj_state);
      Eigen::VectorXd g_u = sub.N.transpose() * g_y;
      Eigen::MatrixXd H_u = sub.N.transpose() * H_y * sub.N;
      Eigen::VectorXd delta;
      if (engine.free_dims() == 0) {
        centered = true;
        break;
      }
      if (!newton_step(H_u, g_u, delta)) {
        numerical_failure = true;
        break;
      }
      const double decrement = g_u.dot(delta);
      if (decrement * 0.5 < opts.newton_tol) {
        centered = true;
        break;
      }
      // Backtracking: keep every block positive definite and require an
      // Armijo increase of the barrier objective.
      double t = 1.0;
      bool accepted = false;
      std::vector<BlockState> trial_states;
      BlockState trial_obj;
      while (t > 1e-14) {
        Eigen::VectorXd y_trial = engine.lift(u + t * delta);
        Evaluation trial =
            engine.evaluate(y_trial, mu, trial_states, trial_obj, false);
        if (trial.feasible &&
            trial.barrier_value >= ev.barrier_value + 1e-4 * t * decrement) {
          u += t * delta;
          y = std::move(y_trial);
          accepted = true;
          break;
        }
        t *= opts.line_search_beta;
      }
      if (!accepted) break;  // stalled at this mu; shrink and continue
      record.newton_steps++;
      sol.newton_iterations++;
      ev = engine.evaluate(y, mu, states, obj_state, true);
      if (!ev.feasible) {
        numerical_failure = true;
        break;
      }
    }
    record.centered = centered;
    record.objective = ev.objective;
    record.barrier_value = ev.barrier_value;
    sol.trace.push_back(record);
    sol.outer_iterations = outer + 1;
    if (numerical_failure) break;
    if (!sol.snapshot && mu <= opts.snapshot_mu) {
      sol.snapshot = y;
      sol.snapshot_mu = mu;
    }
    if (mu * engine.nu_total() < opts.kkt_tol) {
      gap_reached = true;
      break;
    }
    mu *= opts.mu_shrink;
    ev = engine.evaluate(y, mu, states, obj_state, true);
  }

  sol.mu_final = mu;
  sol.y = MomentSequence(problem.n, problem.y_order, y);
  sol.objective = problem.objective == ObjectiveKind::MinimizeLinear
                      ? problem.linear_objective.dot(y)
                      : ev.objective;

  // Multipliers from the central-path correspondence Lambda = mu * W.
  sol.block_multipliers.clear();
  for (size_t b = 0; b < problem.psd_blocks.size(); ++b) {
    sol.block_multipliers.push_back(mu * states[b].W);
  }
  g_y = engine.gradient(mu, states, obj_state);
  const double obj_scale =
      problem.objective == ObjectiveKind::MinimizeLinear
          ? 1.0 + problem.linear_objective.cwiseAbs().maxCoeff()
          : 1.0 + g_y.cwiseAbs().maxCoeff();
  if (engine.free_dims() > 0) {
    sol.kkt_residual =
        (sub.N.transpose() * g_y).cwiseAbs().maxCoeff() / obj_scale;
  } else {
    sol.kkt_residual = 0.0;
  }
  if (sub.E.rows() > 0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub.E.transpose());
    sol.equality_multipliers = qr.solve(g_y);
    for (size_t r = 0; r < problem.equalities.size(); ++r) {
      const LinearEquality& eq = problem.equalities[r];
      if (eq.terms.size() == 1 && eq.terms[0].first == 0 &&
          eq.terms[0].second == 1.0) {
        sol.lambda_star = sol.equality_multipliers[static_cast<Eigen::Index>(r)];
        break;
      }
    }
  }

  if (numerical_failure) {
    sol.status = SolveStatus::NumericalFailure;
  } else if (gap_reached && sol.kkt_residual <= opts.kkt_tol) {
    sol.status = SolveStatus::Optimal;
  } else {
    sol.status = SolveStatus::MaxIterations;
  }
  return sol;
}

KktReport check_kkt(const MaxDetProblem& problem, const SdpSolution& solution) {
  KktReport report;
  const Eigen::VectorXd& y = solution.y.values();

  Eigen::VectorXd r = Eigen::VectorXd::Zero(problem.num_vars);
  double obj_scale = 1.0;
  if (problem.objective == ObjectiveKind::LogDet) {
    BlockState obj_state;
    eval_block(*problem.logdet_block, y, true, obj_state);
    if (!obj_state.pd) {
      throw SingularMomentMatrix("objective block singular in check_kkt");
    }
    accumulate_gradient(*problem.logdet_block, obj_state.W, 1.0, r);
    obj_scale += r.cwiseAbs().maxCoeff();
    report.objective_kernel_dim =
        problem.logdet_block->size - problem.logdet_block->quotient_size();
    report.lambda_star_expected = problem.logdet_block->quotient_size();
  } else {
    r -= problem.linear_objective;
    obj_scale += problem.linear_objective.cwiseAbs().maxCoeff();
    report.lambda_star_expected = std::numeric_limits<double>::quiet_NaN();
  }

  for (size_t b = 0; b < problem.psd_blocks.size(); ++b) {
    const AffineBlock& block = problem.psd_blocks[b];
    const Eigen::MatrixXd& Lambda = solution.block_multipliers[b];
    accumulate_gradient(block, Lambda, 1.0, r);
    const Eigen::MatrixXd S = block.eval(y);
    const double comp = (S.array() * Lambda.array()).sum();
    const double scale = 1.0 + S.norm() * Lambda.norm();
    report.complementarity.push_back(std::abs(comp) / scale);
  }
  report.max_complementarity =
      report.complementarity.empty()
          ? 0.0
          : *std::max_element(report.complementarity.begin(),
                              report.complementarity.end());

  Subspace sub = build_subspace(problem);
  if (sub.N.cols() > 0) {
    report.stationarity_residual =
        (sub.N.transpose() * r).cwiseAbs().maxCoeff() / obj_scale;
  }
  if (sub.E.rows() > 0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub.E.transpose());
    Eigen::VectorXd lambda = qr.solve(r);
    for (size_t idx = 0; idx < problem.equalities.size(); ++idx) {
      const LinearEquality& eq = problem.equalities[idx];
      if (eq.terms.size() == 1 && eq.terms[0].first == 0 &&
          eq.terms[0].second == 1.0) {
        report.lambda_star = lambda[static_cast<Eigen::Index>(idx)];
        break;
      }
    }
  }
  report.lambda_star_deviation =
      std::abs(report.lambda_star - report.lambda_star_expected);
  return report;
}

}  // namespace optdes
