#include "cqaoa/subspace.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace cqaoa {

SubspaceIndex::SubspaceIndex(int n, int k) : n_(n), k_(k) {
  if (k <= 0 || k >= n) throw std::invalid_argument("SubspaceIndex: need 0 < k < n");
  if (n > 62) throw CapacityError("SubspaceIndex: n > 62");
  binom_.assign(static_cast<std::size_t>(n + 1) * (k + 1), 0);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= std::min(i, k); ++j) {
      std::uint64_t v;
      if (j == 0 || j == i) {
        v = 1;
      } else {
        v = binom_[(i - 1) * (k_ + 1) + j - 1] + binom_[(i - 1) * (k_ + 1) + j];
      }
      binom_[i * (k_ + 1) + j] = v;
    }
  }
  const std::uint64_t d = binom(n_, k_);
  if (d > kMaxSubspaceDim)
    throw CapacityError("SubspaceIndex: C(n,k) exceeds subspace budget");
  dim_ = static_cast<std::size_t>(d);
}

std::uint64_t SubspaceIndex::binom(int n, int k) const {
  if (k < 0 || k > k_ || n < 0 || n > n_) return 0;
  if (k > n) return 0;
  return binom_[n * (k_ + 1) + k];
}

std::size_t SubspaceIndex::rank(std::uint64_t x) const {
  if (std::popcount(x) != k_ || (x >> n_) != 0)
    throw std::invalid_argument("rank: not a weight-k bitstring of length n");
  std::uint64_t r = 0;
  int i = 1;
  for (int c = 0; c < n_; ++c) {
    if ((x >> c) & 1u) {
      r += binom(c, i);
      ++i;
    }
  }
  return static_cast<std::size_t>(r);
}

std::uint64_t SubspaceIndex::unrank(std::size_t r) const {
  if (r >= dim_) throw std::out_of_range("unrank: rank out of range");
  std::uint64_t x = 0;
  std::uint64_t rem = r;
  int c = n_ - 1;
  for (int i = k_; i >= 1; --i) {
    while (binom(c, i) > rem) --c;
    x |= (1ull << c);
    rem -= binom(c, i);
    --c;
  }
  return x;
}

SubspaceState dicke_state(const SubspaceIndex& index) {
  SubspaceState s;
  const double amp = 1.0 / std::sqrt(static_cast<double>(index.dim()));
  s.amplitudes = Eigen::VectorXcd::Constant(static_cast<Eigen::Index>(index.dim()), amp);
  return s;
}

CostVector build_cost_vector(const ProblemInstance& instance,
                             const SubspaceIndex& index) {
  if (instance.n() != index.n() || instance.k != index.k())
    throw std::invalid_argument("build_cost_vector: index does not match instance");
  CostVector cost;
  cost.values.resize(index.dim());
  for (std::size_t r = 0; r < index.dim(); ++r)
    cost.values[r] = objective(instance, index.unrank(r));
  cost.c_max = *std::max_element(cost.values.begin(), cost.values.end());
  cost.c_min = *std::min_element(cost.values.begin(), cost.values.end());
  return cost;
}

std::string cost_vector_csv(const CostVector& cost, const SubspaceIndex& index) {
  std::ostringstream os;
  os << "rank,bitstring,cost\n";
  for (std::size_t r = 0; r < cost.dim(); ++r) {
    const std::uint64_t x = index.unrank(r);
    os << r << ',';
    for (int b = index.n() - 1; b >= 0; --b) os << ((x >> b) & 1u);
    os << ',' << cost.values[r] << '\n';
  }
  return os.str();
}

}  // namespace cqaoa
