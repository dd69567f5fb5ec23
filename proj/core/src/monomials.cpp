#include "optdes/monomials.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <utility>

namespace optdes {

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t result = 1;
  for (int i = 0; i < k; ++i) {
    result = result * (n - i) / (i + 1);
  }
  return result;
}

MultiIndex::MultiIndex(std::vector<int> exponents)
    : exponents_(std::move(exponents)),
      degree_(std::accumulate(exponents_.begin(), exponents_.end(), 0)) {
  for (int e : exponents_) {
    if (e < 0) throw Error("MultiIndex: negative exponent");
  }
}

MultiIndex MultiIndex::zero(int dim) {
  return MultiIndex(std::vector<int>(static_cast<size_t>(dim), 0));
}

MultiIndex MultiIndex::unit(int dim, int k, int power) {
  std::vector<int> e(static_cast<size_t>(dim), 0);
  e[static_cast<size_t>(k)] = power;
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (dim() != other.dim()) {
    throw DimensionMismatch("MultiIndex add: " + std::to_string(dim()) +
                            " vs " + std::to_string(other.dim()));
  }
  std::vector<int> sum(exponents_.size());
  for (size_t i = 0; i < sum.size(); ++i) {
    sum[i] = exponents_[i] + other.exponents_[i];
  }
  return MultiIndex(std::move(sum));
}

bool MultiIndex::operator<(const MultiIndex& other) const {
  if (degree_ != other.degree_) return degree_ < other.degree_;
  // Within a degree block, x1-heavy monomials come first.
  return exponents_ > other.exponents_;
}

std::string MultiIndex::to_string() const {
  std::ostringstream out;
  out << "(";
  for (size_t i = 0; i < exponents_.size(); ++i) {
    if (i) out << ",";
    out << exponents_[i];
  }
  out << ")";
  return out.str();
}

namespace {

void enumerate_degree(int n, int remaining, int pos, std::vector<int>& work,
                      std::vector<MultiIndex>& out) {
  if (pos == n - 1) {
    work[static_cast<size_t>(pos)] = remaining;
    out.emplace_back(work);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    work[static_cast<size_t>(pos)] = e;
    enumerate_degree(n, remaining - e, pos + 1, work, out);
  }
}

}  // namespace

MonomialBasis::MonomialBasis(int n, int d) : n_(n), d_(d) {
  if (n < 1) throw Error("MonomialBasis: dimension must be >= 1");
  if (d < 0) throw Error("MonomialBasis: degree must be >= 0");
  ordering_.reserve(static_cast<size_t>(binomial(n + d, n)));
  std::vector<int> work(static_cast<size_t>(n), 0);
  for (int t = 0; t <= d; ++t) {
    enumerate_degree(n, t, 0, work, ordering_);
  }
  for (size_t k = 0; k < ordering_.size(); ++k) {
    index_.emplace(ordering_[k].exponents(), static_cast<int>(k));
  }
}

int MonomialBasis::index_of(const MultiIndex& alpha) const {
  auto it = index_.find(alpha.exponents());
  return it == index_.end() ? -1 : it->second;
}

Eigen::VectorXd MonomialBasis::eval(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_) {
    throw DimensionMismatch("monomial vector: point has dim " +
                            std::to_string(x.size()) + ", basis has " +
                            std::to_string(n_));
  }
  Eigen::VectorXd v(size());
  for (int k = 0; k < size(); ++k) {
    const MultiIndex& alpha = ordering_[static_cast<size_t>(k)];
    double value = 1.0;
    for (int i = 0; i < n_; ++i) {
      for (int e = 0; e < alpha[i]; ++e) value *= x[static_cast<size_t>(i)];
    }
    v[k] = value;
  }
  return v;
}

const MonomialBasis& shared_basis(int n, int d) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<MonomialBasis>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{n, d}];
  if (!slot) slot = std::make_unique<MonomialBasis>(n, d);
  return *slot;
}

}  // namespace optdes
