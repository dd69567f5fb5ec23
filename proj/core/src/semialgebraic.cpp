#include "optdes/semialgebraic.hpp"

#include <cmath>
#include <sstream>

namespace optdes {

namespace {

Constraint make_constraint(Polynomial g) {
  Constraint c{std::move(g), 0, 0, -1};
  c.degree = c.g.degree();
  c.half_degree = (c.degree + 1) / 2;
  return c;
}

}  // namespace

void SemiAlgebraicSet::add_inequality(Polynomial g) {
  if (g.dim() != dim_) throw DimensionMismatch("constraint dimension");
  if (g.is_zero()) throw Error("constraint polynomial is identically zero");
  constraints_.push_back(make_constraint(std::move(g)));
}

void SemiAlgebraicSet::add_equality(Polynomial g) {
  if (g.dim() != dim_) throw DimensionMismatch("constraint dimension");
  if (g.is_zero()) throw Error("constraint polynomial is identically zero");
  Constraint plus = make_constraint(g);
  Constraint minus = make_constraint(-g);
  minus.degree = plus.degree;
  minus.half_degree = plus.half_degree;
  const int base = static_cast<int>(constraints_.size());
  plus.equality_partner = base + 1;
  minus.equality_partner = base;
  constraints_.push_back(std::move(plus));
  constraints_.push_back(std::move(minus));
}

bool SemiAlgebraicSet::has_equalities() const {
  for (const Constraint& c : constraints_) {
    if (c.equality_partner >= 0) return true;
  }
  return false;
}

std::vector<Polynomial> SemiAlgebraicSet::equality_polynomials() const {
  std::vector<Polynomial> out;
  for (size_t j = 0; j < constraints_.size(); ++j) {
    const Constraint& c = constraints_[j];
    if (c.equality_partner > static_cast<int>(j)) out.push_back(c.g);
  }
  return out;
}

std::optional<double> ball_certificate_radius(const Polynomial& g) {
  const int n = g.dim();
  const MultiIndex zero = MultiIndex::zero(n);
  const double constant = g.coeff(zero);
  if (constant <= 0.0) return std::nullopt;
  double quad = 0.0;
  bool quad_set = false;
  size_t recognized = 1;  // the constant term
  for (int i = 0; i < n; ++i) {
    double c = g.coeff(MultiIndex::unit(n, i, 2));
    if (c >= 0.0) return std::nullopt;
    if (!quad_set) {
      quad = c;
      quad_set = true;
    } else if (std::abs(c - quad) > 1e-12 * std::abs(quad)) {
      return std::nullopt;
    }
    ++recognized;
  }
  if (g.term_count() != recognized) return std::nullopt;
  return std::sqrt(constant / -quad);
}

std::optional<double> SemiAlgebraicSet::ball_radius() const {
  for (const Constraint& c : constraints_) {
    if (auto r = ball_certificate_radius(c.g)) return r;
  }
  return std::nullopt;
}

ValidationReport SemiAlgebraicSet::validate() const {
  ValidationReport report;
  for (size_t j = 0; j < constraints_.size(); ++j) {
    const Constraint& c = constraints_[j];
    report.constraint_degrees.emplace_back(c.degree, c.half_degree);
    if (report.ball_constraint < 0) {
      if (auto r = ball_certificate_radius(c.g)) {
        report.ball_constraint = static_cast<int>(j);
        report.ball_radius = *r;
      }
    }
  }
  if (constraints_.empty()) {
    report.message = "no constraints given";
    return report;
  }
  if (report.ball_constraint < 0) {
    report.message =
        "no constraint of the form R^2 - |x|^2 >= 0; the relaxation needs a "
        "ball certificate of compactness";
    return report;
  }
  report.ok = true;
  std::ostringstream msg;
  msg << "ok: " << constraints_.size() << " constraints, ball certificate at #"
      << report.ball_constraint << " with R = " << report.ball_radius;
  report.message = msg.str();
  return report;
}

ValidationReport SemiAlgebraicSet::validated() const {
  ValidationReport report = validate();
  if (!report.ok) throw MissingBallCertificate(report.message);
  return report;
}

bool SemiAlgebraicSet::contains(std::span<const double> x, double tol) const {
  if (static_cast<int>(x.size()) != dim_) {
    throw DimensionMismatch("membership: point dimension");
  }
  for (const Constraint& c : constraints_) {
    if (c.g(x) < -tol) return false;
  }
  return true;
}

}  // namespace optdes
