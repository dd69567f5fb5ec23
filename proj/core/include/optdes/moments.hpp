#ifndef OPTDES_MOMENTS_HPP
#define OPTDES_MOMENTS_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "optdes/design.hpp"
#include "optdes/polynomial.hpp"
#include "optdes/semialgebraic.hpp"

namespace optdes {

/// Truncated moment vector y = (y_alpha), |alpha| <= order, aligned with
/// MonomialBasis(n, order).
class MomentSequence {
 public:
  MomentSequence(int n, int order);
  MomentSequence(int n, int order, Eigen::VectorXd values);

  int dim() const { return n_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(values_.size()); }
  const MonomialBasis& basis() const { return shared_basis(n_, order_); }

  double operator[](int k) const { return values_[k]; }
  double& operator[](int k) { return values_[k]; }
  double value(const MultiIndex& alpha) const;
  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }
  double mass() const { return values_[0]; }

  /// Copy of the leading coefficients up to the given (smaller) order.
  MomentSequence truncated(int order) const;

 private:
  int n_;
  int order_;
  Eigen::VectorXd values_;
};

/// Symmetric matrix indexed by MonomialBasis(n, d) on both sides.
struct MomentMatrix {
  int n = 0;
  int d = 0;
  Eigen::MatrixXd entries;
};

/// Riesz functional L_y(f) = sum_alpha f_alpha y_alpha.
double riesz(const MomentSequence& y, const Polynomial& f);

/// M_d(y) with entries y_{alpha+beta}. Requires order(y) >= 2d.
MomentMatrix moment_matrix(const MomentSequence& y, int d);

/// M_d(g y) with entries sum_gamma g_gamma y_{gamma+alpha+beta}.
/// Requires order(y) >= 2d + deg g.
MomentMatrix localizing_matrix(const MomentSequence& y, const Polynomial& g,
                               int d);

/// Moments y_alpha = sum_i w_i x_i^alpha of an atomic measure.
MomentSequence moments_of_atoms(const Design& design, int order);

/// How sample_interior_moments draws points: uniformly inside the
/// certificate ball, or pushed onto the sphere of that radius (for design
/// spaces supported on the sphere itself).
enum class SamplingHook { Ball, SphereNormalized };

/// Empirical moments of `count` accepted rejection samples from the
/// certificate ball; deterministic for a fixed seed.
MomentSequence sample_interior_moments(const SemiAlgebraicSet& X, int order,
                                       std::uint64_t seed, int count,
                                       SamplingHook hook = SamplingHook::Ball);

/// Table mapping matrix slots of M_d(.) to positions in the length-
/// C(n+y_order, n) moment vector: slot(i, j) = index of ordering[i] +
/// ordering[j]. Cached per (n, d, y_order); the reference is stable.
const Eigen::MatrixXi& moment_slot_table(int n, int d, int y_order);

}  // namespace optdes

#endif  // OPTDES_MOMENTS_HPP
