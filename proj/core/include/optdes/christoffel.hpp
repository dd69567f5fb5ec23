#ifndef OPTDES_CHRISTOFFEL_HPP
#define OPTDES_CHRISTOFFEL_HPP

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "optdes/moments.hpp"
#include "optdes/polynomial.hpp"
#include "optdes/semialgebraic.hpp"

namespace optdes {

/// Polynomials P_alpha orthonormal with respect to L_y, stored row-wise in
/// the monomial basis: coeffs is lower triangular and P_k = sum_{j<=k}
/// coeffs(k, j) x^{ordering[j]}.
struct OrthonormalFamily {
  int n = 0;
  int d = 0;
  Eigen::MatrixXd coeffs;

  Polynomial polynomial(int k) const;
};

/// Inverse Cholesky factor of M_d(y); throws SingularMomentMatrix when the
/// moment matrix is not numerically positive definite (relative eigenvalue
/// floor 1e-10).
OrthonormalFamily orthonormal_family(const MomentSequence& y, int d);

/// p_d(x) = v_d(x)^T M_d(y)^{-1} v_d(x), evaluated through the Cholesky
/// factor (triangular solve, then squared norm).
double christoffel_eval(const MomentSequence& y, int d,
                        std::span<const double> x);

/// Expanded coefficients of binom(n+d, n) - sum_alpha P_alpha(x)^2, the
/// dual certificate polynomial of degree 2d.
Polynomial dual_polynomial(const MomentSequence& y, int d);

struct LevelsetSample {
  Eigen::VectorXd x;
  double value = 0.0;  // p_d(x)
  bool inside = false;
};

struct GridSpec {
  int points_per_axis = 101;
  double padding = 0.05;  // box margin relative to the certificate radius
};

/// Grid evaluation of the Christoffel polynomial over the bounding box of
/// the certificate ball, with membership flags; n <= 3 only.
std::vector<LevelsetSample> levelset_samples(const MomentSequence& y, int d,
                                             const SemiAlgebraicSet& X,
                                             const GridSpec& grid);

/// Writes levelset samples as CSV (coordinates, value, inside flag).
std::string levelset_csv(const std::vector<LevelsetSample>& samples);

}  // namespace optdes

#endif  // OPTDES_CHRISTOFFEL_HPP
