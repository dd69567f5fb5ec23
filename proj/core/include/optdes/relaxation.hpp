#ifndef OPTDES_RELAXATION_HPP
#define OPTDES_RELAXATION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "optdes/moments.hpp"
#include "optdes/polynomial.hpp"
#include "optdes/semialgebraic.hpp"

namespace optdes {

/// One coefficient of an affine symmetric-matrix map: the variable y[var]
/// contributes coeff to entry (row, col). Off-diagonal entries are stored
/// in both orientations so trace formulas need no case split.
struct BlockTerm {
  int row;
  int col;
  double coeff;
};

/// S(y) = sum_k y_k * A_k, with an optional quotient basis Q whose columns
/// span the orthogonal complement of the structural kernel of S on the
/// feasible subspace. The solver works with Q^T S Q; an empty Q means the
/// identity (no kernel).
struct AffineBlock {
  std::string label;
  int size = 0;
  std::vector<std::vector<BlockTerm>> by_var;  // indexed by y position
  std::vector<int> touched;                    // vars with nonempty lists
  Eigen::MatrixXd quotient;                    // size x q, orthonormal

  int quotient_size() const {
    return quotient.size() == 0 ? size : static_cast<int>(quotient.cols());
  }
  Eigen::MatrixXd eval(const Eigen::VectorXd& y) const;
  Eigen::MatrixXd eval_quotient(const Eigen::VectorXd& y) const;
};

/// c^T y = rhs over the decision vector.
struct LinearEquality {
  std::vector<std::pair<int, double>> terms;
  double rhs = 0.0;
  std::string label;
};

enum class ObjectiveKind { LogDet, MinimizeLinear };

/// Solver-facing description shared by the four SDPs: maximize
/// logdet of an affine moment block, or minimize a linear functional,
/// subject to PSD blocks and linear equalities on y.
struct MaxDetProblem {
  int n = 0;
  int y_order = 0;
  int num_vars = 0;
  ObjectiveKind objective = ObjectiveKind::LogDet;

  std::optional<AffineBlock> logdet_block;
  int logdet_order = -1;
  Eigen::VectorXd linear_objective;

  std::vector<AffineBlock> psd_blocks;
  std::vector<LinearEquality> equalities;  // y0 = 1 is always present

  double objective_value(const Eigen::VectorXd& y) const;
  std::string debug_dump() const;
};

/// rho_delta problem: maximize logdet M_d(y) over the order-(d+delta)
/// relaxation of the moment cone, with y0 = 1.
MaxDetProblem build_design_sdp(const SemiAlgebraicSet& X, int d, int delta);

/// Recovery step via a strictly positive objective: minimize L_y(f_r)
/// subject to the order-(d+r) structure and y_alpha pinned to y_star for
/// all |alpha| <= 2d. A null f_r selects the even-monomial default, whose
/// objective equals trace M_{d+r}(y).
MaxDetProblem build_nie_sdp(const SemiAlgebraicSet& X,
                            const MomentSequence& y_star, int d, int r,
                            const Polynomial* f_r = nullptr);

/// minimize L_y(p_star) subject to the order-(d+r) structure, y0 = 1.
MaxDetProblem build_christoffel_min_sdp(const SemiAlgebraicSet& X,
                                        const Polynomial& p_star, int d,
                                        int r);

/// minimize trace M_{d+r}(y) subject to L_y(p_star) = 0 and y0 = 1.
MaxDetProblem build_trace_min_sdp(const SemiAlgebraicSet& X,
                                  const Polynomial& p_star, int d, int r);

/// sum_{|alpha| <= half_degree} x^{2 alpha}; L_y of it is trace M_{half}(y).
Polynomial even_monomial_sum(int n, int half_degree);

/// Seeded random SOS polynomial plus a small constant: strictly positive
/// everywhere, degree 2*half_degree.
Polynomial random_positive_polynomial(int n, int half_degree,
                                      std::uint64_t seed);

/// Coefficient vectors (in MonomialBasis(n, t)) of all products h * x^beta
/// of the set's equality polynomials that are structurally annihilated at
/// relaxation level `level_t` (i.e. the linear equalities of the relaxation
/// force M_t(g y) q = 0). Used to build block quotients.
Eigen::MatrixXd structural_kernel(const SemiAlgebraicSet& X, int t,
                                  int level_t, int constraint_degree);

/// Orthonormal basis of the complement of span(columns) in R^size.
Eigen::MatrixXd orthonormal_complement(const Eigen::MatrixXd& columns,
                                       int size);

}  // namespace optdes

#endif  // OPTDES_RELAXATION_HPP
