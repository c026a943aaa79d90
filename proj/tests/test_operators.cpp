#include <doctest.h>

#include <bit>
#include <numbers>
#include <random>

#include "cqaoa/operators.hpp"
#include "cqaoa/oracle.hpp"

using namespace cqaoa;
using std::numbers::pi;

namespace {

SubspaceState random_state(std::size_t dim, std::mt19937_64& rng) {
  auto uni = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5; };
  SubspaceState s;
  s.amplitudes.resize(static_cast<Eigen::Index>(dim));
  for (auto& a : s.amplitudes) a = {uni(), uni()};
  s.amplitudes /= s.amplitudes.norm();
  return s;
}

CostVector simple_cost(const SubspaceIndex& idx, const ProblemInstance& inst) {
  return build_cost_vector(inst, idx);
}

}  // namespace

TEST_CASE("ring pair set deduplicates at n=2") {
  CHECK(mixer_pairs(MixerKind::Ring, 2) ==
        std::vector<std::pair<int, int>>{{0, 1}});
  CHECK(mixer_pairs(MixerKind::Ring, 4).size() == 4);
  CHECK(mixer_pairs(MixerKind::Clique, 5).size() == 10);
}

TEST_CASE("ring mixer matrix at n=2 k=1") {
  SubspaceIndex idx(2, 1);
  const Eigen::MatrixXd h = mixer_matrix(MixerKind::Ring, idx);
  CHECK(h(0, 0) == 0.0);
  CHECK(h(0, 1) == 2.0);
  CHECK(h(1, 0) == 2.0);
  CHECK(h(1, 1) == 0.0);
}

TEST_CASE("clique mixer matrix at n=3 k=1 matches the Pauli construction") {
  SubspaceIndex idx(3, 1);
  const Eigen::MatrixXd h = mixer_matrix(MixerKind::Clique, idx);
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s) CHECK(h(r, s) == (r == s ? 0.0 : 2.0));
  // Restrict the raw 8x8 Pauli sum to the weight-1 sector.
  const Eigen::MatrixXcd full = oracle::full_mixer_hamiltonian(MixerKind::Clique, 3, 1);
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s) {
      const auto x = static_cast<Eigen::Index>(idx.unrank(r));
      const auto y = static_cast<Eigen::Index>(idx.unrank(s));
      CHECK(std::abs(full(x, y) - std::complex<double>(h(r, s))) < 1e-14);
    }
}

TEST_CASE("spectral representation reconstructs the mixer matrix") {
  for (auto kind : {MixerKind::Clique, MixerKind::Ring}) {
    SubspaceIndex idx(6, 3);
    const MixerOperator op = build_mixer(kind, idx);
    const Eigen::MatrixXd h = mixer_matrix(kind, idx);
    const auto dim = static_cast<Eigen::Index>(idx.dim());
    CHECK((op.eigenvectors.transpose() * op.eigenvectors -
           Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-10);
    const Eigen::MatrixXd recon = op.eigenvectors *
                                  op.eigenvalues.asDiagonal() *
                                  op.eigenvectors.transpose();
    CHECK((recon - h).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("grover mixer has no stored matrix") {
  SubspaceIndex idx(6, 3);
  const MixerOperator op = build_mixer(MixerKind::Grover, idx);
  CHECK_FALSE(op.spectral());
  CHECK(op.eigenvalues.size() == 0);
}

TEST_CASE("operator budget enforced for spectral mixers only") {
  SubspaceIndex idx(20, 10);  // dim 184756
  CHECK_THROWS_AS(build_mixer(MixerKind::Clique, idx), CapacityError);
  CHECK_NOTHROW(build_mixer(MixerKind::Grover, idx));
}

TEST_CASE("beta = 0 is the identity") {
  std::mt19937_64 rng(3);
  SubspaceIndex idx(6, 3);
  for (auto kind : {MixerKind::Clique, MixerKind::Ring, MixerKind::Grover}) {
    const MixerOperator op = build_mixer(kind, idx);
    SubspaceState s = random_state(idx.dim(), rng);
    const Eigen::VectorXcd before = s.amplitudes;
    apply_mixer(s, op, 0.0);
    CHECK((s.amplitudes - before).norm() < 1e-14);
  }
}

TEST_CASE("grover mixer at beta = pi flips the dicke state") {
  SubspaceIndex idx(5, 2);
  const MixerOperator op = build_mixer(MixerKind::Grover, idx);
  SubspaceState s = dicke_state(idx);
  const Eigen::VectorXcd psi0 = s.amplitudes;
  apply_mixer(s, op, pi);
  CHECK((s.amplitudes + psi0).norm() < 1e-12);
}

TEST_CASE("ring at n=2: e^{-i beta H} = cos(2b) I - i sin(2b) X") {
  SubspaceIndex idx(2, 1);
  const MixerOperator op = build_mixer(MixerKind::Ring, idx);
  SubspaceState s;
  s.amplitudes.resize(2);
  s.amplitudes << 1.0, 0.0;
  apply_mixer(s, op, pi / 4);
  CHECK(std::abs(s.amplitudes[0]) < 1e-14);
  CHECK(std::abs(s.amplitudes[1] - std::complex<double>(0, -1)) < 1e-14);
}

TEST_CASE("threshold separator at gamma = pi negates marked amplitudes") {
  SubspaceIndex idx(4, 2);
  ProblemInstance inst(Graph(4, {{0, 1}, {1, 2}, {2, 3}}),
                       ProblemKind::DensestSubgraph, 2);
  const CostVector cost = simple_cost(idx, inst);
  SubspaceState s = dicke_state(idx);
  const Eigen::VectorXcd before = s.amplitudes;
  apply_phase_separator(s, SeparatorKind::Threshold, cost, pi, 0);
  for (Eigen::Index r = 0; r < 6; ++r) {
    const double sign = cost.values[r] > 0 ? -1.0 : 1.0;
    CHECK(std::abs(s.amplitudes[r] - sign * before[r]) < 1e-14);
  }
}

TEST_CASE("objective separator has period 2 pi on integer costs") {
  std::mt19937_64 rng(11);
  SubspaceIndex idx(5, 2);
  ProblemInstance inst(generate_erdos_renyi(5, 0.6, 8), ProblemKind::VertexCover, 2);
  const CostVector cost = simple_cost(idx, inst);
  SubspaceState s = random_state(idx.dim(), rng);
  const Eigen::VectorXcd before = s.amplitudes;
  apply_phase_separator(s, SeparatorKind::Objective, cost, 2 * pi);
  CHECK((s.amplitudes - before).norm() < 1e-12);
  apply_phase_separator(s, SeparatorKind::Objective, cost, 0.0);
  CHECK((s.amplitudes - before).norm() < 1e-12);
}

TEST_CASE("threshold separator requires a threshold") {
  SubspaceIndex idx(4, 2);
  ProblemInstance inst(Graph(4, {{0, 1}}), ProblemKind::DensestSubgraph, 2);
  const CostVector cost = simple_cost(idx, inst);
  SubspaceState s = dicke_state(idx);
  CHECK_THROWS_AS(apply_phase_separator(s, SeparatorKind::Threshold, cost, 1.0),
                  std::invalid_argument);
}

TEST_CASE("operators are unitary on random states") {
  std::mt19937_64 rng(17);
  auto uni = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  SubspaceIndex idx(7, 3);
  ProblemInstance inst(generate_erdos_renyi(7, 0.5, 5), ProblemKind::DensestSubgraph, 3);
  const CostVector cost = simple_cost(idx, inst);
  for (auto kind : {MixerKind::Clique, MixerKind::Ring, MixerKind::Grover}) {
    const MixerOperator op = build_mixer(kind, idx);
    for (int trial = 0; trial < 10; ++trial) {
      SubspaceState s = random_state(idx.dim(), rng);
      apply_phase_separator(s, SeparatorKind::Objective, cost, uni() * 2 * pi);
      CHECK(std::abs(s.norm() - 1.0) < 1e-12);
      apply_phase_separator(s, SeparatorKind::Threshold, cost, uni() * 2 * pi,
                            static_cast<int>(rng() % (cost.c_max + 1)) - 1);
      CHECK(std::abs(s.norm() - 1.0) < 1e-12);
      apply_mixer(s, op, uni() * 2 * pi);
      CHECK(std::abs(s.norm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("mixer application forms a one-parameter group") {
  std::mt19937_64 rng(23);
  auto uni = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  SubspaceIndex idx(6, 3);
  for (auto kind : {MixerKind::Clique, MixerKind::Ring, MixerKind::Grover}) {
    const MixerOperator op = build_mixer(kind, idx);
    for (int trial = 0; trial < 5; ++trial) {
      const double b1 = uni() * 2 * pi, b2 = uni() * 2 * pi;
      SubspaceState a = random_state(idx.dim(), rng);
      SubspaceState b = a;
      apply_mixer(a, op, b1);
      apply_mixer(a, op, b2);
      apply_mixer(b, op, b1 + b2);
      CHECK((a.amplitudes - b.amplitudes).norm() < 1e-10);
    }
  }
}

TEST_CASE("grover rank-1 closed form matches dense exponentiation") {
  std::mt19937_64 rng(31);
  auto uni = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  SubspaceIndex idx(8, 4);  // dim 70
  const auto dim = static_cast<Eigen::Index>(idx.dim());
  Eigen::VectorXd psi0 = Eigen::VectorXd::Constant(dim, 1.0 / std::sqrt(double(dim)));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(psi0 * psi0.transpose());
  const MixerOperator op = build_mixer(MixerKind::Grover, idx);
  for (int trial = 0; trial < 5; ++trial) {
    const double beta = uni() * 2 * pi;
    SubspaceState s = random_state(idx.dim(), rng);
    Eigen::VectorXcd dense = es.eigenvectors().transpose() * s.amplitudes;
    for (Eigen::Index j = 0; j < dim; ++j)
      dense[j] *= std::polar(1.0, -beta * es.eigenvalues()[j]);
    dense = es.eigenvectors() * dense;
    apply_mixer(s, op, beta);
    CHECK((s.amplitudes - dense).norm() < 1e-12);
  }
}

TEST_CASE("mixer cache returns the same operator instance") {
  SubspaceIndex idx(6, 3);
  MixerCache cache;
  const auto a = cache.get(MixerKind::Clique, idx);
  const auto b = cache.get(MixerKind::Clique, idx);
  CHECK(a.get() == b.get());
}

TEST_CASE("full-space mixers do not leak out of the weight-k sector") {
  // [H_M, sum Z_i] = 0; evolving the embedded Dicke state keeps all
  // amplitude at Hamming weight k.
  for (auto kind : {MixerKind::Clique, MixerKind::Ring, MixerKind::Grover}) {
    const int n = 6, k = 3;
    ProblemInstance inst(generate_erdos_renyi(n, 0.5, 9),
                         ProblemKind::DensestSubgraph, k);
    const VariantSpec variant{kind, SeparatorKind::Objective};
    const AngleSchedule schedule({0.7, 2.1}, {1.3, 0.4});
    const Eigen::VectorXcd full = oracle::full_space_run(inst, variant, schedule);
    double leak = 0;
    for (Eigen::Index x = 0; x < full.size(); ++x)
      if (std::popcount(static_cast<std::uint64_t>(x)) != k)
        leak += std::norm(full[x]);
    CHECK(leak < 1e-12);
  }
}
