#include "optdes/relaxation.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/QR>

namespace optdes {

Eigen::MatrixXd AffineBlock::eval(const Eigen::VectorXd& y) const {
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(size, size);
  for (int k : touched) {
    const double yk = y[k];
    for (const BlockTerm& t : by_var[static_cast<size_t>(k)]) {
      S(t.row, t.col) += yk * t.coeff;
    }
  }
  return S;
}

Eigen::MatrixXd AffineBlock::eval_quotient(const Eigen::VectorXd& y) const {
  Eigen::MatrixXd S = eval(y);
  if (quotient.size() == 0) return S;
  return quotient.transpose() * S * quotient;
}

double MaxDetProblem::objective_value(const Eigen::VectorXd& y) const {
  if (objective == ObjectiveKind::MinimizeLinear) {
    return linear_objective.dot(y);
  }
  const Eigen::MatrixXd S = logdet_block->eval_quotient(y);
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) {
    return -std::numeric_limits<double>::infinity();
  }
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

std::string MaxDetProblem::debug_dump() const {
  std::ostringstream out;
  out << "max-det problem: n=" << n << " y_order=" << y_order
      << " num_vars=" << num_vars << "\n";
  if (objective == ObjectiveKind::LogDet) {
    out << "objective: logdet " << logdet_block->label << " (size "
        << logdet_block->size << ", quotient " << logdet_block->quotient_size()
        << ")\n";
  } else {
    out << "objective: minimize c'y with " << linear_objective.size()
        << " coefficients, " << (linear_objective.array() != 0.0).count()
        << " nonzero\n";
  }
  for (const AffineBlock& b : psd_blocks) {
    out << "psd block: " << b.label << " size " << b.size << " quotient "
        << b.quotient_size() << "\n";
  }
  out << "equalities: " << equalities.size() << "\n";
  for (const LinearEquality& e : equalities) {
    if (e.terms.size() == 1 && e.terms[0].second == 1.0) {
      out << "  pin y[" << e.terms[0].first << "] = " << e.rhs;
    } else {
      out << "  functional (" << e.terms.size() << " terms) = " << e.rhs;
    }
    if (!e.label.empty()) out << "  [" << e.label << "]";
    out << "\n";
  }
  return out.str();
}

Polynomial even_monomial_sum(int n, int half_degree) {
  Polynomial f(n);
  const MonomialBasis& basis = shared_basis(n, half_degree);
  for (int k = 0; k < basis.size(); ++k) {
    f.add_term(basis[k] + basis[k], 1.0);
  }
  return f;
}

Polynomial random_positive_polynomial(int n, int half_degree,
                                      std::uint64_t seed) {
  const MonomialBasis& basis = shared_basis(n, half_degree);
  const int s = basis.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd G(s, s);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) G(i, j) = gauss(rng);
  }
  Eigen::MatrixXd A = G.transpose() * G / static_cast<double>(s) +
                      1e-2 * Eigen::MatrixXd::Identity(s, s);
  Polynomial p(n);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      p.add_term(basis[i] + basis[j], A(i, j));
    }
  }
  return p;
}

Eigen::MatrixXd structural_kernel(const SemiAlgebraicSet& X, int t_block,
                                  int level, int g_degree) {
  const int n = X.dim();
  const MonomialBasis& rows = shared_basis(n, t_block);
  std::vector<Eigen::VectorXd> columns;
  for (size_t j = 0; j < X.constraints().size(); ++j) {
    const Constraint& c = X.constraints()[j];
    if (c.equality_partner <= static_cast<int>(j)) continue;  // one per pair
    const int coverage = 2 * (level - c.half_degree);
    const int max_beta = t_block - c.degree;
    for (int deg_beta = 0; deg_beta <= max_beta; ++deg_beta) {
      // Every matrix entry of the candidate column must be forced to zero
      // by the relaxation's equalities L_y(h x^gamma) = 0, |gamma| <= coverage.
      if (g_degree + deg_beta + t_block > coverage) break;
      const MonomialBasis& betas = shared_basis(n, deg_beta);
      const int first = deg_beta == 0 ? 0 : shared_basis(n, deg_beta - 1).size();
      for (int b = first; b < betas.size(); ++b) {
        const Polynomial multiple = c.g * Polynomial::monomial(betas[b]);
        Eigen::VectorXd col = Eigen::VectorXd::Zero(rows.size());
        for (const auto& [alpha, coeff] : multiple.terms()) {
          col[rows.index_of(alpha)] = coeff;
        }
        columns.push_back(std::move(col));
      }
    }
  }
  Eigen::MatrixXd K(rows.size(), static_cast<Eigen::Index>(columns.size()));
  for (size_t i = 0; i < columns.size(); ++i) {
    K.col(static_cast<Eigen::Index>(i)) = columns[i];
  }
  return K;
}

Eigen::MatrixXd orthonormal_complement(const Eigen::MatrixXd& columns,
                                       int size) {
  if (columns.cols() == 0) return Eigen::MatrixXd();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(columns);
  const int rank = static_cast<int>(qr.rank());
  if (rank == 0) return Eigen::MatrixXd();
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(size, size);
  return Q.rightCols(size - rank);
}

namespace {

AffineBlock make_moment_block(const SemiAlgebraicSet& X, int t_block,
                              int level, int y_order, int num_vars,
                              const std::string& label) {
  const int n = X.dim();
  const Eigen::MatrixXi& slots = moment_slot_table(n, t_block, y_order);
  AffineBlock block;
  block.label = label;
  block.size = static_cast<int>(slots.rows());
  block.by_var.resize(static_cast<size_t>(num_vars));
  for (int i = 0; i < block.size; ++i) {
    for (int j = i; j < block.size; ++j) {
      const int k = slots(i, j);
      block.by_var[static_cast<size_t>(k)].push_back({i, j, 1.0});
      if (i != j) block.by_var[static_cast<size_t>(k)].push_back({j, i, 1.0});
    }
  }
  for (int k = 0; k < num_vars; ++k) {
    if (!block.by_var[static_cast<size_t>(k)].empty()) block.touched.push_back(k);
  }
  if (X.has_equalities()) {
    block.quotient = orthonormal_complement(
        structural_kernel(X, t_block, level, 0), block.size);
  }
  return block;
}

AffineBlock make_localizing_block(const SemiAlgebraicSet& X,
                                  const Polynomial& g, int t_block, int level,
                                  int y_order, int num_vars,
                                  const std::string& label) {
  const int n = X.dim();
  const MonomialBasis& rows = shared_basis(n, t_block);
  const MonomialBasis& lifted = shared_basis(n, y_order);
  AffineBlock block;
  block.label = label;
  block.size = rows.size();
  block.by_var.resize(static_cast<size_t>(num_vars));
  for (int i = 0; i < block.size; ++i) {
    for (int j = i; j < block.size; ++j) {
      const MultiIndex pair = rows[i] + rows[j];
      for (const auto& [gamma, coeff] : g.terms()) {
        const int k = lifted.index_of(gamma + pair);
        if (k < 0) {
          throw DegreeOverflow("localizing block exceeds the decision vector");
        }
        block.by_var[static_cast<size_t>(k)].push_back({i, j, coeff});
        if (i != j) {
          block.by_var[static_cast<size_t>(k)].push_back({j, i, coeff});
        }
      }
    }
  }
  for (int k = 0; k < num_vars; ++k) {
    if (!block.by_var[static_cast<size_t>(k)].empty()) block.touched.push_back(k);
  }
  if (X.has_equalities()) {
    block.quotient = orthonormal_complement(
        structural_kernel(X, t_block, level, g.degree()), block.size);
  }
  return block;
}

/// Moment block M_level(y), localizing blocks for plain inequalities, and
/// the linear equalities realizing the localizing pairs of equalities.
void add_level_structure(MaxDetProblem& problem, const SemiAlgebraicSet& X,
                         int level) {
  const int n = X.dim();
  problem.psd_blocks.push_back(
      make_moment_block(X, level, level, problem.y_order, problem.num_vars,
                        "M_" + std::to_string(level) + "(y)"));
  const MonomialBasis& lifted = shared_basis(n, problem.y_order);
  for (size_t j = 0; j < X.constraints().size(); ++j) {
    const Constraint& c = X.constraints()[j];
    const int t_loc = level - c.half_degree;
    if (t_loc < 0) {
      throw NegativeBlockOrder("constraint #" + std::to_string(j) +
                               " has v_j = " + std::to_string(c.half_degree) +
                               " > relaxation level " + std::to_string(level));
    }
    if (c.equality_partner >= 0) {
      if (c.equality_partner <= static_cast<int>(j)) continue;
      // M_{t}(h y) >= 0 and M_{t}(-h y) >= 0 pin every entry to zero;
      // emit the distinct entries L_y(h x^gamma) = 0, |gamma| <= 2t.
      const MonomialBasis& gammas = shared_basis(n, 2 * t_loc);
      for (int gi = 0; gi < gammas.size(); ++gi) {
        LinearEquality eq;
        eq.label = "variety[" + std::to_string(j) + "] gamma=" +
                   gammas[gi].to_string();
        eq.rhs = 0.0;
        for (const auto& [kappa, coeff] : c.g.terms()) {
          eq.terms.emplace_back(lifted.index_of(kappa + gammas[gi]), coeff);
        }
        problem.equalities.push_back(std::move(eq));
      }
    } else {
      problem.psd_blocks.push_back(make_localizing_block(
          X, c.g, t_loc, level, problem.y_order, problem.num_vars,
          "M_" + std::to_string(t_loc) + "(g" + std::to_string(j) + ".y)"));
    }
  }
}

void pin(MaxDetProblem& problem, int var, double value,
         const std::string& label) {
  LinearEquality eq;
  eq.terms.emplace_back(var, 1.0);
  eq.rhs = value;
  eq.label = label;
  problem.equalities.push_back(std::move(eq));
}

MaxDetProblem init_problem(const SemiAlgebraicSet& X, int level) {
  MaxDetProblem problem;
  problem.n = X.dim();
  problem.y_order = 2 * level;
  problem.num_vars = shared_basis(X.dim(), problem.y_order).size();
  return problem;
}

Eigen::VectorXd functional_coefficients(const Polynomial& f, int n,
                                        int y_order) {
  const MonomialBasis& lifted = shared_basis(n, y_order);
  if (f.degree() > y_order) {
    throw DegreeOverflow("objective polynomial degree " +
                         std::to_string(f.degree()) +
                         " exceeds the decision vector order " +
                         std::to_string(y_order));
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(lifted.size());
  for (const auto& [alpha, coeff] : f.terms()) {
    c[lifted.index_of(alpha)] = coeff;
  }
  return c;
}

}  // namespace

MaxDetProblem build_design_sdp(const SemiAlgebraicSet& X, int d, int delta) {
  if (d < 1) throw Error("build_design_sdp: regression degree must be >= 1");
  if (delta < 0) throw Error("build_design_sdp: delta must be >= 0");
  X.validated();
  const int level = d + delta;
  MaxDetProblem problem = init_problem(X, level);
  problem.objective = ObjectiveKind::LogDet;
  pin(problem, 0, 1.0, "y0");
  add_level_structure(problem, X, level);
  problem.logdet_block =
      make_moment_block(X, d, level, problem.y_order, problem.num_vars,
                        "M_" + std::to_string(d) + "(y) [objective]");
  problem.logdet_order = d;
  return problem;
}

MaxDetProblem build_nie_sdp(const SemiAlgebraicSet& X,
                            const MomentSequence& y_star, int d, int r,
                            const Polynomial* f_r) {
  if (r < 1) throw Error("build_nie_sdp: r must be >= 1");
  if (y_star.order() < 2 * d) {
    throw DegreeOverflow("build_nie_sdp: y_star must have order >= 2d");
  }
  X.validated();
  const int level = d + r;
  MaxDetProblem problem = init_problem(X, level);
  problem.objective = ObjectiveKind::MinimizeLinear;
  const Polynomial objective =
      f_r ? *f_r : even_monomial_sum(X.dim(), level);
  problem.linear_objective =
      functional_coefficients(objective, X.dim(), problem.y_order);
  const int pinned = shared_basis(X.dim(), 2 * d).size();
  for (int k = 0; k < pinned; ++k) {
    pin(problem, k, y_star[k], k == 0 ? "y0" : "pin y*");
  }
  add_level_structure(problem, X, level);
  return problem;
}

MaxDetProblem build_christoffel_min_sdp(const SemiAlgebraicSet& X,
                                        const Polynomial& p_star, int d,
                                        int r) {
  if (r < 1) throw Error("build_christoffel_min_sdp: r must be >= 1");
  X.validated();
  const int level = d + r;
  MaxDetProblem problem = init_problem(X, level);
  problem.objective = ObjectiveKind::MinimizeLinear;
  problem.linear_objective =
      functional_coefficients(p_star, X.dim(), problem.y_order);
  pin(problem, 0, 1.0, "y0");
  add_level_structure(problem, X, level);
  return problem;
}

MaxDetProblem build_trace_min_sdp(const SemiAlgebraicSet& X,
                                  const Polynomial& p_star, int d, int r) {
  if (r < 1) throw Error("build_trace_min_sdp: r must be >= 1");
  X.validated();
  const int level = d + r;
  MaxDetProblem problem = init_problem(X, level);
  problem.objective = ObjectiveKind::MinimizeLinear;
  problem.linear_objective = functional_coefficients(
      even_monomial_sum(X.dim(), level), X.dim(), problem.y_order);
  pin(problem, 0, 1.0, "y0");
  LinearEquality contact;
  contact.label = "L_y(p*) = 0";
  contact.rhs = 0.0;
  const Eigen::VectorXd coeffs =
      functional_coefficients(p_star, X.dim(), problem.y_order);
  for (int k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] != 0.0) contact.terms.emplace_back(k, coeffs[k]);
  }
  problem.equalities.push_back(std::move(contact));
  add_level_structure(problem, X, level);
  return problem;
}

}  // namespace optdes
