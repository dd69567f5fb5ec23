#ifndef OPTDES_SEMIALGEBRAIC_HPP
#define OPTDES_SEMIALGEBRAIC_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "optdes/polynomial.hpp"

namespace optdes {

/// One inequality g(x) >= 0 of a basic semialgebraic description.
struct Constraint {
  Polynomial g;
  int degree = 0;       // d_j
  int half_degree = 0;  // v_j = ceil(d_j / 2)
  /// Index of the partner constraint when this one is half of an equality
  /// pair {g >= 0, -g >= 0}; -1 for a plain inequality.
  int equality_partner = -1;
};

struct ValidationReport {
  bool ok = false;
  int ball_constraint = -1;  // index of the compactness certificate
  double ball_radius = 0.0;
  std::vector<std::pair<int, int>> constraint_degrees;  // (d_j, v_j)
  std::string message;
};

/// The design space X = {x : g_j(x) >= 0}. Equalities h(x) = 0 are stored as
/// the pair {h >= 0, -h >= 0}; the pairing is kept explicit so the moment
/// relaxation can turn the two localizing constraints into linear equalities
/// on the moment vector.
class SemiAlgebraicSet {
 public:
  explicit SemiAlgebraicSet(int dim) : dim_(dim) {}

  void add_inequality(Polynomial g);
  /// Registers both signed copies with the same d_j and v_j.
  void add_equality(Polynomial g);

  int dim() const { return dim_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  bool has_equalities() const;

  /// Polynomials whose equality pair pins the support to a variety (one
  /// representative per pair, the copy registered with the + sign).
  std::vector<Polynomial> equality_polynomials() const;

  ValidationReport validate() const;
  /// validate() and throw MissingBallCertificate when the report is not ok.
  ValidationReport validated() const;

  /// True iff g_j(x) >= -tol for every constraint.
  bool contains(std::span<const double> x, double tol) const;

  /// Radius of the ball certificate, if present.
  std::optional<double> ball_radius() const;

 private:
  int dim_;
  std::vector<Constraint> constraints_;
};

/// Detects g == c * (R^2 - sum x_i^2) for some c > 0; returns R.
std::optional<double> ball_certificate_radius(const Polynomial& g);

}  // namespace optdes

#endif  // OPTDES_SEMIALGEBRAIC_HPP
