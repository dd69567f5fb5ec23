#ifndef OPTDES_MONOMIALS_HPP
#define OPTDES_MONOMIALS_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "optdes/errors.hpp"

namespace optdes {

/// binomial(n, k) as an exact 64-bit integer.
std::int64_t binomial(int n, int k);

/// Exponent vector of a monomial x^alpha, with its total degree cached.
class MultiIndex {
 public:
  explicit MultiIndex(std::vector<int> exponents);
  static MultiIndex zero(int dim);
  /// Unit exponent e_k scaled by `power`.
  static MultiIndex unit(int dim, int k, int power = 1);

  int dim() const { return static_cast<int>(exponents_.size()); }
  int degree() const { return degree_; }
  int operator[](int i) const { return exponents_[static_cast<size_t>(i)]; }
  const std::vector<int>& exponents() const { return exponents_; }

  MultiIndex operator+(const MultiIndex& other) const;

  bool operator==(const MultiIndex& other) const {
    return exponents_ == other.exponents_;
  }
  bool operator!=(const MultiIndex& other) const { return !(*this == other); }

  /// Graded order: by total degree, then lexicographically with x1 highest.
  /// This is exactly the position order of MonomialBasis.
  bool operator<(const MultiIndex& other) const;

  std::string to_string() const;

 private:
  std::vector<int> exponents_;
  int degree_;
};

/// All monomials of degree <= d in n variables, in graded-lexicographic
/// order: degree blocks ascending, and within a block x1^t first, xn^t last.
class MonomialBasis {
 public:
  MonomialBasis(int n, int d);

  int dim() const { return n_; }
  int max_degree() const { return d_; }
  int size() const { return static_cast<int>(ordering_.size()); }
  const MultiIndex& operator[](int k) const {
    return ordering_[static_cast<size_t>(k)];
  }
  const std::vector<MultiIndex>& ordering() const { return ordering_; }

  /// Position of alpha in the ordering; -1 if deg(alpha) > d.
  int index_of(const MultiIndex& alpha) const;

  /// The vector v_d(x): entry k equals x^{ordering[k]}.
  Eigen::VectorXd eval(std::span<const double> x) const;

 private:
  int n_;
  int d_;
  std::vector<MultiIndex> ordering_;
  std::map<std::vector<int>, int> index_;
};

/// Shared, lazily built basis instances; the returned reference is stable
/// for the lifetime of the process.
const MonomialBasis& shared_basis(int n, int d);

}  // namespace optdes

#endif  // OPTDES_MONOMIALS_HPP
