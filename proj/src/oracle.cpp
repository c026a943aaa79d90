#include "cqaoa/oracle.hpp"

#include <bit>
#include <cmath>
#include <complex>

namespace cqaoa::oracle {

using std::complex;

namespace {
constexpr complex<double> kI{0.0, 1.0};

Eigen::MatrixXcd single_qubit_embedded(int n, int q, const Eigen::Matrix2cd& op) {
  if (n < 1 || n > 12) throw std::invalid_argument("oracle: n must be in [1,12]");
  if (q < 0 || q >= n) throw std::invalid_argument("oracle: qubit out of range");
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const int bit = (col >> q) & 1;
    for (int row_bit = 0; row_bit < 2; ++row_bit) {
      const complex<double> v = op(row_bit, bit);
      if (v == complex<double>{}) continue;
      const Eigen::Index row = (col & ~(Eigen::Index{1} << q)) |
                               (Eigen::Index{row_bit} << q);
      m(row, col) += v;
    }
  }
  return m;
}
}  // namespace

Eigen::MatrixXcd pauli_x(int n, int q) {
  Eigen::Matrix2cd x;
  x << 0, 1, 1, 0;
  return single_qubit_embedded(n, q, x);
}

Eigen::MatrixXcd pauli_y(int n, int q) {
  Eigen::Matrix2cd y;
  y << 0, -kI, kI, 0;
  return single_qubit_embedded(n, q, y);
}

Eigen::MatrixXcd full_mixer_hamiltonian(MixerKind kind, int n, int k) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (kind == MixerKind::Grover) {
    Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(dim);
    std::size_t count = 0;
    for (Eigen::Index x = 0; x < dim; ++x)
      if (std::popcount(static_cast<std::uint64_t>(x)) == k) ++count;
    const double amp = 1.0 / std::sqrt(static_cast<double>(count));
    for (Eigen::Index x = 0; x < dim; ++x)
      if (std::popcount(static_cast<std::uint64_t>(x)) == k) psi0[x] = amp;
    return psi0 * psi0.adjoint();
  }
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [i, j] : mixer_pairs(kind, n)) {
    h += pauli_x(n, i) * pauli_x(n, j);
    h += pauli_y(n, i) * pauli_y(n, j);
  }
  return h;
}

Eigen::VectorXcd full_space_run(const ProblemInstance& instance,
                                const VariantSpec& variant,
                                const AngleSchedule& schedule,
                                std::optional<int> threshold) {
  const int n = instance.n();
  if (n > 12) throw std::invalid_argument("full_space_run: n > 12");
  if (variant.separator == SeparatorKind::Threshold && !threshold)
    throw std::invalid_argument("full_space_run: missing threshold");
  const Eigen::Index dim = Eigen::Index{1} << n;

  // Objective per basis state; infeasible states never carry amplitude.
  std::vector<int> cost(static_cast<std::size_t>(dim), 0);
  for (Eigen::Index x = 0; x < dim; ++x)
    if (std::popcount(static_cast<std::uint64_t>(x)) == instance.k)
      cost[x] = objective(instance, static_cast<std::uint64_t>(x));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      full_mixer_hamiltonian(variant.mixer, n, instance.k));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("full_space_run: eigendecomposition failed");
  const Eigen::MatrixXcd& v = es.eigenvectors();
  const Eigen::VectorXd& lambda = es.eigenvalues();

  Eigen::VectorXcd state = Eigen::VectorXcd::Zero(dim);
  {
    std::size_t count = 0;
    for (Eigen::Index x = 0; x < dim; ++x)
      if (std::popcount(static_cast<std::uint64_t>(x)) == instance.k) ++count;
    const double amp = 1.0 / std::sqrt(static_cast<double>(count));
    for (Eigen::Index x = 0; x < dim; ++x)
      if (std::popcount(static_cast<std::uint64_t>(x)) == instance.k)
        state[x] = amp;
  }

  for (int i = 0; i < schedule.rounds(); ++i) {
    const double gamma = schedule.gammas[i];
    if (variant.separator == SeparatorKind::Objective) {
      for (Eigen::Index x = 0; x < dim; ++x)
        state[x] *= std::exp(-kI * gamma * static_cast<double>(cost[x]));
    } else {
      for (Eigen::Index x = 0; x < dim; ++x)
        if (cost[x] > *threshold) state[x] *= std::exp(-kI * gamma);
    }
    Eigen::VectorXcd y = v.adjoint() * state;
    for (Eigen::Index j = 0; j < dim; ++j)
      y[j] *= std::exp(-kI * schedule.betas[i] * lambda[j]);
    state = v * y;
  }
  return state;
}

std::pair<int, std::uint64_t> brute_force_optimum(const ProblemInstance& instance) {
  const int n = instance.n();
  int best = -1;
  std::uint64_t best_x = 0;
  for (std::uint64_t x = 0; x < (1ull << n); ++x) {
    if (std::popcount(x) != instance.k) continue;
    const int c = objective(instance, x);
    if (c > best) {
      best = c;
      best_x = x;
    }
  }
  return {best, best_x};
}

double amplitude_amplification_probability(std::uint64_t N, std::uint64_t M, int p) {
  if (N < 1 || M > N) throw std::invalid_argument("need 0 <= M <= N, N >= 1");
  if (M == 0) return 0.0;
  if (M == N) return 1.0;
  const double theta = std::asin(std::sqrt(static_cast<double>(M) / static_cast<double>(N)));
  const double s = std::sin((2.0 * p + 1.0) * theta);
  return s * s;
}

}  // namespace cqaoa::oracle
