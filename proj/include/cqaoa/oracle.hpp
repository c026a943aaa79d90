#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "cqaoa/qaoa.hpp"

namespace cqaoa::oracle {

/// Brute-force validators built from first principles: explicit Kronecker
/// Pauli matrices and exhaustive enumeration. Shares only the bit convention
/// with the fast path. Test/validation use only; n <= 12.

/// Single-qubit Pauli op embedded on qubit `q` of an n-qubit register
/// (bit q of the basis-state index is qubit q).
Eigen::MatrixXcd pauli_x(int n, int q);
Eigen::MatrixXcd pauli_y(int n, int q);

/// Full 2^n x 2^n mixer Hamiltonian from raw Pauli sums; Grover is the
/// projector onto the weight-k uniform superposition.
Eigen::MatrixXcd full_mixer_hamiltonian(MixerKind kind, int n, int k);

/// Full-space alternating evolution, exponentiating by dense Hermitian
/// eigendecomposition. Returns the 2^n amplitude vector.
Eigen::VectorXcd full_space_run(const ProblemInstance& instance,
                                const VariantSpec& variant,
                                const AngleSchedule& schedule,
                                std::optional<int> threshold = std::nullopt);

/// Exhaustive maximum of the objective over weight-k strings; ties broken
/// toward the lowest-valued bitstring.
std::pair<int, std::uint64_t> brute_force_optimum(const ProblemInstance& instance);

/// Marked-state probability after p Grover iterations:
/// sin^2((2p+1) asin(sqrt(M/N))).
double amplitude_amplification_probability(std::uint64_t N, std::uint64_t M, int p);

}  // namespace cqaoa::oracle
