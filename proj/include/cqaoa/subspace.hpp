#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "cqaoa/graph.hpp"

namespace cqaoa {

/// Thrown when a requested subspace or operator exceeds the memory budget.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxSubspaceDim = 1'000'000;

/// Bijection between ranks [0, C(n,k)) and the n-bit strings of Hamming
/// weight k, via the combinatorial number system. Ranks are strictly
/// increasing in the numeric value of the bitstring.
class SubspaceIndex {
 public:
  SubspaceIndex(int n, int k);

  int n() const { return n_; }
  int k() const { return k_; }
  std::size_t dim() const { return dim_; }

  std::size_t rank(std::uint64_t x) const;
  std::uint64_t unrank(std::size_t r) const;

 private:
  std::uint64_t binom(int n, int k) const;

  int n_;
  int k_;
  std::size_t dim_;
  std::vector<std::uint64_t> binom_;  // (n_+1) x (k_+1), row-major
};

/// Integer objective values over the whole subspace, indexed by rank.
struct CostVector {
  std::vector<int> values;
  int c_max = 0;
  int c_min = 0;

  std::size_t dim() const { return values.size(); }
};

/// Complex amplitude vector over the feasible subspace.
struct SubspaceState {
  Eigen::VectorXcd amplitudes;

  double norm() const { return amplitudes.norm(); }
};

/// Uniform superposition over all weight-k basis states (the Dicke state).
SubspaceState dicke_state(const SubspaceIndex& index);

CostVector build_cost_vector(const ProblemInstance& instance,
                             const SubspaceIndex& index);

/// Debug export: one line per rank, "rank,bitstring,cost".
std::string cost_vector_csv(const CostVector& cost, const SubspaceIndex& index);

}  // namespace cqaoa
