#include "optdes/moments.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <tuple>

namespace optdes {

MomentSequence::MomentSequence(int n, int order)
    : n_(n),
      order_(order),
      values_(Eigen::VectorXd::Zero(shared_basis(n, order).size())) {}

MomentSequence::MomentSequence(int n, int order, Eigen::VectorXd values)
    : n_(n), order_(order), values_(std::move(values)) {
  if (values_.size() != shared_basis(n, order).size()) {
    throw DimensionMismatch("moment vector has length " +
                            std::to_string(values_.size()) + ", basis needs " +
                            std::to_string(shared_basis(n, order).size()));
  }
}

double MomentSequence::value(const MultiIndex& alpha) const {
  const int k = basis().index_of(alpha);
  if (k < 0) {
    throw DegreeOverflow("moment " + alpha.to_string() + " beyond order " +
                         std::to_string(order_));
  }
  return values_[k];
}

MomentSequence MomentSequence::truncated(int order) const {
  if (order > order_) throw DegreeOverflow("truncation above stored order");
  const int len = shared_basis(n_, order).size();
  return MomentSequence(n_, order, values_.head(len));
}

double riesz(const MomentSequence& y, const Polynomial& f) {
  if (f.dim() != y.dim()) throw DimensionMismatch("riesz");
  if (f.degree() > y.order()) {
    throw DegreeOverflow("riesz: polynomial degree " +
                         std::to_string(f.degree()) + " exceeds order " +
                         std::to_string(y.order()));
  }
  double sum = 0.0;
  for (const auto& [alpha, c] : f.terms()) sum += c * y.value(alpha);
  return sum;
}

const Eigen::MatrixXi& moment_slot_table(int n, int d, int y_order) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, std::unique_ptr<Eigen::MatrixXi>>
      cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{n, d, y_order}];
  if (!slot) {
    const MonomialBasis& rows = shared_basis(n, d);
    const MonomialBasis& lifted = shared_basis(n, y_order);
    auto table = std::make_unique<Eigen::MatrixXi>(rows.size(), rows.size());
    for (int i = 0; i < rows.size(); ++i) {
      for (int j = i; j < rows.size(); ++j) {
        const int k = lifted.index_of(rows[i] + rows[j]);
        if (k < 0) {
          throw DegreeOverflow("moment matrix of order " + std::to_string(d) +
                               " needs moments beyond order " +
                               std::to_string(y_order));
        }
        (*table)(i, j) = k;
        (*table)(j, i) = k;
      }
    }
    slot = std::move(table);
  }
  return *slot;
}

MomentMatrix moment_matrix(const MomentSequence& y, int d) {
  if (y.order() < 2 * d) {
    throw DegreeOverflow("moment matrix of order " + std::to_string(d) +
                         " needs moments to order " + std::to_string(2 * d));
  }
  const Eigen::MatrixXi& slots = moment_slot_table(y.dim(), d, y.order());
  MomentMatrix m{y.dim(), d, Eigen::MatrixXd(slots.rows(), slots.cols())};
  for (Eigen::Index i = 0; i < slots.rows(); ++i) {
    for (Eigen::Index j = 0; j < slots.cols(); ++j) {
      m.entries(i, j) = y[slots(i, j)];
    }
  }
  return m;
}

MomentMatrix localizing_matrix(const MomentSequence& y, const Polynomial& g,
                               int d) {
  if (g.dim() != y.dim()) throw DimensionMismatch("localizing matrix");
  if (y.order() < 2 * d + g.degree()) {
    throw DegreeOverflow("localizing matrix of order " + std::to_string(d) +
                         " with deg g = " + std::to_string(g.degree()) +
                         " needs moments to order " +
                         std::to_string(2 * d + g.degree()));
  }
  const MonomialBasis& rows = shared_basis(y.dim(), d);
  const MonomialBasis& lifted = y.basis();
  MomentMatrix m{y.dim(), d, Eigen::MatrixXd::Zero(rows.size(), rows.size())};
  for (int i = 0; i < rows.size(); ++i) {
    for (int j = i; j < rows.size(); ++j) {
      const MultiIndex pair = rows[i] + rows[j];
      double value = 0.0;
      for (const auto& [gamma, c] : g.terms()) {
        value += c * y[lifted.index_of(gamma + pair)];
      }
      m.entries(i, j) = value;
      m.entries(j, i) = value;
    }
  }
  return m;
}

MomentSequence moments_of_atoms(const Design& design, int order) {
  if (design.size() == 0) throw Error("moments_of_atoms: empty design");
  const int n = design.dim();
  MomentSequence y(n, order);
  const MonomialBasis& basis = y.basis();
  for (int i = 0; i < design.size(); ++i) {
    const Eigen::VectorXd& x = design.atoms[static_cast<size_t>(i)];
    if (static_cast<int>(x.size()) != n) {
      throw DimensionMismatch("moments_of_atoms: atom dimension");
    }
    y.values() +=
        design.weights[i] *
        basis.eval(std::span<const double>(x.data(), static_cast<size_t>(n)));
  }
  return y;
}

MomentSequence sample_interior_moments(const SemiAlgebraicSet& X, int order,
                                       std::uint64_t seed, int count,
                                       SamplingHook hook) {
  if (count < 1) throw Error("sample_interior_moments: count must be >= 1");
  const auto radius = X.ball_radius();
  if (!radius) {
    throw MissingBallCertificate("sampling needs the certificate ball");
  }
  const int n = X.dim();
  const double R = *radius;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  MomentSequence y(n, order);
  const MonomialBasis& basis = y.basis();
  std::vector<double> x(static_cast<size_t>(n));
  long proposals = 0;
  const long max_proposals = std::max(200L * count, 100000L);
  int accepted = 0;
  while (accepted < count) {
    if (++proposals > max_proposals) {
      throw SamplingFailed("no accepted samples after " +
                           std::to_string(max_proposals) + " proposals");
    }
    double norm2 = 0.0;
    for (int i = 0; i < n; ++i) {
      x[static_cast<size_t>(i)] = gauss(rng);
      norm2 += x[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
    }
    const double norm = std::sqrt(norm2);
    if (norm == 0.0) continue;
    double target;
    if (hook == SamplingHook::SphereNormalized) {
      target = R;
    } else {
      target = R * std::pow(unif(rng), 1.0 / n);
    }
    for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] *= target / norm;
    if (!X.contains(x, hook == SamplingHook::SphereNormalized ? 1e-12 : 0.0)) {
      continue;
    }
    y.values() += basis.eval(x);
    ++accepted;
  }
  y.values() /= static_cast<double>(count);
  return y;
}

}  // namespace optdes
