#include "optdes/polynomial.hpp"

#include <cmath>
#include <sstream>

namespace optdes {

Polynomial Polynomial::constant(int dim, double value) {
  Polynomial p(dim);
  p.add_term(MultiIndex::zero(dim), value);
  return p;
}

Polynomial Polynomial::monomial(const MultiIndex& alpha, double coeff) {
  Polynomial p(alpha.dim());
  p.add_term(alpha, coeff);
  return p;
}

int Polynomial::degree() const {
  int deg = 0;
  for (const auto& [alpha, c] : terms_) deg = std::max(deg, alpha.degree());
  return deg;
}

void Polynomial::add_term(const MultiIndex& alpha, double coeff) {
  if (alpha.dim() != dim_) {
    throw DimensionMismatch("Polynomial term has dim " +
                            std::to_string(alpha.dim()) + ", polynomial has " +
                            std::to_string(dim_));
  }
  auto it = terms_.find(alpha);
  double value = (it == terms_.end() ? 0.0 : it->second) + coeff;
  if (std::abs(value) < kCoefficientDropTol) {
    if (it != terms_.end()) terms_.erase(it);
    return;
  }
  if (it == terms_.end()) {
    terms_.emplace(alpha, value);
  } else {
    it->second = value;
  }
}

double Polynomial::coeff(const MultiIndex& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) {
    throw DimensionMismatch("Polynomial eval: point has dim " +
                            std::to_string(x.size()));
  }
  double sum = 0.0;
  for (const auto& [alpha, c] : terms_) {
    double mono = 1.0;
    for (int i = 0; i < dim_; ++i) {
      for (int e = 0; e < alpha[i]; ++e) mono *= x[static_cast<size_t>(i)];
    }
    sum += c * mono;
  }
  return sum;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  if (dim_ != other.dim_) throw DimensionMismatch("Polynomial add");
  Polynomial out = *this;
  for (const auto& [alpha, c] : other.terms_) out.add_term(alpha, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  return *this + (-other);
}

Polynomial Polynomial::operator-() const { return *this * -1.0; }

Polynomial Polynomial::operator*(double scale) const {
  Polynomial out(dim_);
  for (const auto& [alpha, c] : terms_) out.add_term(alpha, c * scale);
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  if (dim_ != other.dim_) throw DimensionMismatch("Polynomial multiply");
  Polynomial out(dim_);
  for (const auto& [a, ca] : terms_) {
    for (const auto& [b, cb] : other.terms_) {
      out.add_term(a + b, ca * cb);
    }
  }
  return out;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [alpha, c] : terms_) {
    if (!first) out << " + ";
    out << c;
    for (int i = 0; i < dim_; ++i) {
      if (alpha[i] > 0) {
        out << "*x" << (i + 1);
        if (alpha[i] > 1) out << "^" << alpha[i];
      }
    }
    first = false;
  }
  return out.str();
}

}  // namespace optdes
