#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "cqaoa/subspace.hpp"

namespace cqaoa {

enum class MixerKind { Clique, Ring, Grover };

std::string to_string(MixerKind kind);
MixerKind mixer_kind_from_string(const std::string& s);

inline constexpr std::size_t kMaxOperatorDim = 5000;

/// Unordered qubit pairs coupled by the XX+YY mixer Hamiltonian.
/// Clique: all pairs. Ring: (i, i+1 mod n), deduplicated, so Ring(n=2)
/// has a single pair.
std::vector<std::pair<int, int>> mixer_pairs(MixerKind kind, int n);

/// Dense subspace matrix of the mixer Hamiltonian: entry (r,s) is 2 for each
/// coupled pair whose transposition maps unrank(r) to unrank(s); diagonal 0.
Eigen::MatrixXd mixer_matrix(MixerKind kind, const SubspaceIndex& index);

/// A mixer with a precomputed exact-exponential representation: spectral
/// (eigendecomposition of the dense subspace matrix) for Clique/Ring, rank-1
/// closed form for Grover. Immutable and shareable.
struct MixerOperator {
  MixerKind kind;
  int n = 0;
  int k = 0;
  std::size_t dim = 0;
  // Spectral representation; empty for Grover.
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;

  bool spectral() const { return kind != MixerKind::Grover; }
};

MixerOperator build_mixer(MixerKind kind, const SubspaceIndex& index);

/// In-place application of e^{-i beta H_M}. Norm-preserving.
void apply_mixer(SubspaceState& state, const MixerOperator& op, double beta);

enum class SeparatorKind { Objective, Threshold };

std::string to_string(SeparatorKind kind);

/// In-place application of the phase separator. Objective: amp[r] *=
/// e^{-i gamma cost[r]}. Threshold: amp[r] *= e^{-i gamma} exactly when
/// cost[r] > threshold (integer comparison).
void apply_phase_separator(SubspaceState& state, SeparatorKind kind,
                           const CostVector& cost, double gamma,
                           std::optional<int> threshold = std::nullopt);

/// Construct-once cache of mixers keyed by (kind, n, k); safe for concurrent
/// readers.
class MixerCache {
 public:
  std::shared_ptr<const MixerOperator> get(MixerKind kind,
                                           const SubspaceIndex& index);

  static MixerCache& global();

 private:
  std::mutex mutex_;
  std::map<std::tuple<MixerKind, int, int>, std::shared_ptr<const MixerOperator>> cache_;
};

}  // namespace cqaoa
