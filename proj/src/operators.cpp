#include "cqaoa/operators.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <set>

namespace cqaoa {

using std::complex;
namespace {
constexpr complex<double> kI{0.0, 1.0};
}

std::string to_string(MixerKind kind) {
  switch (kind) {
    case MixerKind::Clique: return "Clique";
    case MixerKind::Ring: return "Ring";
    case MixerKind::Grover: return "Grover";
  }
  throw std::logic_error("unknown MixerKind");
}

MixerKind mixer_kind_from_string(const std::string& s) {
  if (s == "Clique") return MixerKind::Clique;
  if (s == "Ring") return MixerKind::Ring;
  if (s == "Grover") return MixerKind::Grover;
  throw std::invalid_argument("unknown mixer kind: " + s);
}

std::string to_string(SeparatorKind kind) {
  return kind == SeparatorKind::Objective ? "Obj" : "Th";
}

std::vector<std::pair<int, int>> mixer_pairs(MixerKind kind, int n) {
  std::set<std::pair<int, int>> pairs;
  switch (kind) {
    case MixerKind::Clique:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace(i, j);
      break;
    case MixerKind::Ring:
      for (int i = 0; i < n; ++i) {
        int j = (i + 1) % n;
        pairs.emplace(std::min(i, j), std::max(i, j));
      }
      break;
    case MixerKind::Grover:
      throw std::invalid_argument("mixer_pairs: Grover mixer has no pair set");
  }
  return {pairs.begin(), pairs.end()};
}

Eigen::MatrixXd mixer_matrix(MixerKind kind, const SubspaceIndex& index) {
  const auto pairs = mixer_pairs(kind, index.n());
  const auto dim = static_cast<Eigen::Index>(index.dim());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const std::uint64_t x = index.unrank(static_cast<std::size_t>(r));
    for (const auto& [i, j] : pairs) {
      const bool bi = (x >> i) & 1u;
      const bool bj = (x >> j) & 1u;
      if (bi == bj) continue;
      const std::uint64_t y = x ^ (1ull << i) ^ (1ull << j);
      h(r, static_cast<Eigen::Index>(index.rank(y))) += 2.0;
    }
  }
  return h;
}

MixerOperator build_mixer(MixerKind kind, const SubspaceIndex& index) {
  MixerOperator op;
  op.kind = kind;
  op.n = index.n();
  op.k = index.k();
  op.dim = index.dim();
  if (kind == MixerKind::Grover) return op;
  if (index.dim() > kMaxOperatorDim)
    throw CapacityError("build_mixer: dense operator exceeds budget");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mixer_matrix(kind, index));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("build_mixer: eigendecomposition failed");
  op.eigenvalues = es.eigenvalues();
  op.eigenvectors = es.eigenvectors();
  return op;
}

void apply_mixer(SubspaceState& state, const MixerOperator& op, double beta) {
  const auto dim = static_cast<Eigen::Index>(op.dim);
  if (state.amplitudes.size() != dim)
    throw std::invalid_argument("apply_mixer: dimension mismatch");
  if (op.kind == MixerKind::Grover) {
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(op.dim));
    const complex<double> overlap = state.amplitudes.sum() * inv_sqrt;
    const complex<double> scale = (std::exp(-kI * beta) - 1.0) * overlap * inv_sqrt;
    state.amplitudes.array() += scale;
    return;
  }
  // Complex amplitudes viewed as a 2 x dim real matrix (re,im per column):
  // one GEMM per basis change instead of separate real/imag passes.
  const Eigen::MatrixXd& q = op.eigenvectors;
  Eigen::Map<Eigen::Matrix<double, 2, Eigen::Dynamic>> a(
      reinterpret_cast<double*>(state.amplitudes.data()), 2, dim);
  Eigen::Matrix<double, 2, Eigen::Dynamic> y = a * q;  // y.col(j) = <q_j | a>
  Eigen::Map<Eigen::VectorXcd> yc(reinterpret_cast<complex<double>*>(y.data()), dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    yc[j] *= std::polar(1.0, -beta * op.eigenvalues[j]);
  a.noalias() = y * q.transpose();
}

void apply_phase_separator(SubspaceState& state, SeparatorKind kind,
                           const CostVector& cost, double gamma,
                           std::optional<int> threshold) {
  const auto dim = static_cast<Eigen::Index>(cost.dim());
  if (state.amplitudes.size() != dim)
    throw std::invalid_argument("apply_phase_separator: dimension mismatch");
  if (kind == SeparatorKind::Objective) {
    std::vector<complex<double>> phase(static_cast<std::size_t>(cost.c_max) + 1);
    for (int c = 0; c <= cost.c_max; ++c) phase[c] = std::polar(1.0, -gamma * c);
    for (Eigen::Index r = 0; r < dim; ++r)
      state.amplitudes[r] *= phase[cost.values[r]];
  } else {
    if (!threshold)
      throw std::invalid_argument("apply_phase_separator: missing threshold");
    const complex<double> phase = std::polar(1.0, -gamma);
    for (Eigen::Index r = 0; r < dim; ++r)
      if (cost.values[r] > *threshold) state.amplitudes[r] *= phase;
  }
}

std::shared_ptr<const MixerOperator> MixerCache::get(MixerKind kind,
                                                     const SubspaceIndex& index) {
  const auto key = std::make_tuple(kind, index.n(), index.k());
  std::lock_guard lock(mutex_);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  auto op = std::make_shared<const MixerOperator>(build_mixer(kind, index));
  cache_.emplace(key, op);
  return op;
}

MixerCache& MixerCache::global() {
  static MixerCache cache;
  return cache;
}

}  // namespace cqaoa
