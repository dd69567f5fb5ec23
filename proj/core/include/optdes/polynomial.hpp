#ifndef OPTDES_POLYNOMIAL_HPP
#define OPTDES_POLYNOMIAL_HPP

#include <map>
#include <span>
#include <string>

#include "optdes/monomials.hpp"

namespace optdes {

/// Sparse multivariate polynomial with double coefficients. Terms whose
/// coefficient falls below 1e-14 in absolute value are dropped on insertion,
/// so the zero polynomial stores no terms and has degree 0 by convention.
class Polynomial {
 public:
  static constexpr double kCoefficientDropTol = 1e-14;

  explicit Polynomial(int dim) : dim_(dim) {}
  static Polynomial constant(int dim, double value);
  static Polynomial monomial(const MultiIndex& alpha, double coeff = 1.0);

  int dim() const { return dim_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }

  /// Accumulates `coeff` onto the term x^alpha.
  void add_term(const MultiIndex& alpha, double coeff);
  double coeff(const MultiIndex& alpha) const;
  const std::map<MultiIndex, double>& terms() const { return terms_; }

  double operator()(std::span<const double> x) const;

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator-() const;
  Polynomial operator*(double scale) const;
  Polynomial operator*(const Polynomial& other) const;

  std::string to_string() const;

 private:
  int dim_;
  std::map<MultiIndex, double> terms_;
};

}  // namespace optdes

#endif  // OPTDES_POLYNOMIAL_HPP
