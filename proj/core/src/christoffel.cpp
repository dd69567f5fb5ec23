#include "optdes/christoffel.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace optdes {

namespace {

constexpr double kPdFloor = 1e-10;

/// Cholesky factor of M_d(y) after the positive-definiteness gate.
Eigen::MatrixXd checked_cholesky(const MomentSequence& y, int d) {
  const MomentMatrix M = moment_matrix(y, d);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigs(M.entries,
                                                      Eigen::EigenvaluesOnly);
  const double max_eig = eigs.eigenvalues().maxCoeff();
  const double min_eig = eigs.eigenvalues().minCoeff();
  if (!(max_eig > 0.0) || min_eig <= kPdFloor * max_eig) {
    throw SingularMomentMatrix(
        "M_" + std::to_string(d) + "(y) has eigenvalue range [" +
        std::to_string(min_eig) + ", " + std::to_string(max_eig) + "]");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(M.entries);
  if (llt.info() != Eigen::Success) {
    throw SingularMomentMatrix("Cholesky of M_" + std::to_string(d) +
                               "(y) failed");
  }
  return llt.matrixL();
}

}  // namespace

Polynomial OrthonormalFamily::polynomial(int k) const {
  const MonomialBasis& basis = shared_basis(n, d);
  Polynomial p(n);
  for (int j = 0; j <= k; ++j) p.add_term(basis[j], coeffs(k, j));
  return p;
}

OrthonormalFamily orthonormal_family(const MomentSequence& y, int d) {
  const Eigen::MatrixXd L = checked_cholesky(y, d);
  OrthonormalFamily family;
  family.n = y.dim();
  family.d = d;
  // Rows of L^{-1} give P_k with L_y(P_j P_k) = delta_{jk}: with M = L L^T,
  // (L^{-1}) M (L^{-1})^T = I, and row k only touches monomials 0..k.
  family.coeffs = L.triangularView<Eigen::Lower>().solve(
      Eigen::MatrixXd::Identity(L.rows(), L.cols()));
  return family;
}

double christoffel_eval(const MomentSequence& y, int d,
                        std::span<const double> x) {
  const Eigen::MatrixXd L = checked_cholesky(y, d);
  const Eigen::VectorXd v = shared_basis(y.dim(), d).eval(x);
  const Eigen::VectorXd z = L.triangularView<Eigen::Lower>().solve(v);
  return z.squaredNorm();
}

Polynomial dual_polynomial(const MomentSequence& y, int d) {
  const OrthonormalFamily family = orthonormal_family(y, d);
  const MonomialBasis& basis = shared_basis(y.dim(), d);
  const int s = basis.size();
  Polynomial p = Polynomial::constant(y.dim(), static_cast<double>(binomial(
                                                   y.dim() + d, y.dim())));
  for (int k = 0; k < s; ++k) {
    for (int i = 0; i <= k; ++i) {
      for (int j = 0; j <= k; ++j) {
        p.add_term(basis[i] + basis[j],
                   -family.coeffs(k, i) * family.coeffs(k, j));
      }
    }
  }
  return p;
}

std::vector<LevelsetSample> levelset_samples(const MomentSequence& y, int d,
                                             const SemiAlgebraicSet& X,
                                             const GridSpec& grid) {
  const int n = X.dim();
  if (n > 3) {
    throw UnsupportedDimension("levelset grids support n <= 3, got n = " +
                               std::to_string(n));
  }
  const auto radius = X.ball_radius();
  if (!radius) throw MissingBallCertificate("levelset grid needs the ball");
  const double R = *radius * (1.0 + grid.padding);
  const int m = std::max(2, grid.points_per_axis);
  const Eigen::MatrixXd L = checked_cholesky(y, d);
  const MonomialBasis& basis = shared_basis(n, d);

  std::vector<LevelsetSample> out;
  std::vector<int> idx(static_cast<size_t>(n), 0);
  const long total = static_cast<long>(std::pow(m, n));
  out.reserve(static_cast<size_t>(total));
  for (long flat = 0; flat < total; ++flat) {
    long rest = flat;
    LevelsetSample sample;
    sample.x = Eigen::VectorXd(n);
    for (int i = 0; i < n; ++i) {
      const int k = static_cast<int>(rest % m);
      rest /= m;
      sample.x[i] = -R + 2.0 * R * k / (m - 1);
    }
    const std::span<const double> xs(sample.x.data(),
                                     static_cast<size_t>(n));
    const Eigen::VectorXd v = basis.eval(xs);
    sample.value = L.triangularView<Eigen::Lower>().solve(v).squaredNorm();
    sample.inside = X.contains(xs, 1e-12);
    out.push_back(std::move(sample));
  }
  return out;
}

std::string levelset_csv(const std::vector<LevelsetSample>& samples) {
  std::ostringstream out;
  if (samples.empty()) return "";
  const int n = static_cast<int>(samples[0].x.size());
  for (int i = 0; i < n; ++i) out << "x" << (i + 1) << ",";
  out << "value,inside\n";
  out.precision(17);
  for (const LevelsetSample& s : samples) {
    for (int i = 0; i < n; ++i) out << s.x[i] << ",";
    out << s.value << "," << (s.inside ? 1 : 0) << "\n";
  }
  return out.str();
}

}  // namespace optdes
