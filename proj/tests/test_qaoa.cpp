#include <doctest.h>

#include <algorithm>
#include <bit>
#include <numbers>
#include <numeric>
#include <random>

#include "cqaoa/oracle.hpp"
#include "cqaoa/qaoa.hpp"

using namespace cqaoa;
using std::numbers::pi;

namespace {
Graph k4() { return Graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}); }
Graph path4() { return Graph(4, {{0, 1}, {1, 2}, {2, 3}}); }
}  // namespace

TEST_CASE("variant names round trip") {
  CHECK(all_variants().size() == 6);
  for (const auto& v : all_variants())
    CHECK(variant_from_string(to_string(v)) == v);
  CHECK_THROWS_AS(variant_from_string("Clique"), std::invalid_argument);
  CHECK_THROWS_AS(variant_from_string("Foo-Obj"), std::invalid_argument);
}

TEST_CASE("angle schedules are normalized into [0, 2 pi)") {
  const AngleSchedule s({-0.5, 7.0}, {2 * pi, 0.25});
  CHECK(s.betas[0] == doctest::Approx(2 * pi - 0.5));
  CHECK(s.betas[1] == doctest::Approx(7.0 - 2 * pi));
  CHECK(s.gammas[0] == doctest::Approx(0.0));
}

TEST_CASE("grover schedule with overshoot guard") {
  const AngleSchedule full = grover_th_schedule(3, 3);
  CHECK(full.betas == std::vector<double>{pi, pi, pi});
  CHECK(full.gammas == std::vector<double>{pi, pi, pi});
  const AngleSchedule guarded = grover_th_schedule(3, 1);
  CHECK(guarded.betas == std::vector<double>{pi, 0.0, 0.0});
  CHECK(grover_th_schedule(0, 0).rounds() == 0);
  CHECK_THROWS_AS(grover_th_schedule(2, 3), std::invalid_argument);
}

TEST_CASE("p = 0 gives the subspace mean cost") {
  ProblemInstance inst(path4(), ProblemKind::DensestSubgraph, 2);
  const RunResult res = run_qaoa(inst, {MixerKind::Clique, SeparatorKind::Objective},
                                 AngleSchedule({}, {}));
  CHECK(res.expectation == doctest::Approx(0.5).epsilon(1e-12));  // 3 of 6 cost 1
  CHECK(res.approx_ratio == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(res.per_round_ratios.size() == 1);
}

TEST_CASE("K4 densest subgraph has ratio 1 at every round") {
  ProblemInstance inst(k4(), ProblemKind::DensestSubgraph, 2);
  std::mt19937_64 rng(4);
  auto uni = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2 * pi; };
  for (const auto& variant : all_variants()) {
    const AngleSchedule schedule({uni(), uni()}, {uni(), uni()});
    const std::optional<int> th =
        variant.separator == SeparatorKind::Threshold ? std::optional<int>(0)
                                                      : std::nullopt;
    const RunResult res = run_qaoa(inst, variant, schedule, th);
    for (double r : res.per_round_ratios) CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("empty graph ratio is 1 by the 0/0 convention") {
  ProblemInstance inst(Graph(4, {}), ProblemKind::DensestSubgraph, 2);
  const RunResult res = run_qaoa(inst, {MixerKind::Grover, SeparatorKind::Threshold},
                                 grover_th_schedule(2, 2), -1);
  CHECK(res.approx_ratio == 1.0);
}

TEST_CASE("a maximal-cost basis state has ratio 1") {
  ProblemInstance inst(path4(), ProblemKind::DensestSubgraph, 2);
  QaoaContext ctx(inst, {MixerKind::Clique, SeparatorKind::Objective});
  SubspaceState s;
  s.amplitudes = Eigen::VectorXcd::Zero(6);
  s.amplitudes[ctx.index.rank(0b0011)] = 1.0;  // {0,1}, cost 1 = c_max
  CHECK(expectation_and_ratio(s, ctx.cost).second == doctest::Approx(1.0));
}

TEST_CASE("expectation is invariant under a global phase") {
  ProblemInstance inst(generate_erdos_renyi(6, 0.5, 2), ProblemKind::VertexCover, 3);
  QaoaContext ctx(inst, {MixerKind::Ring, SeparatorKind::Objective});
  RunResult res = run_qaoa(ctx, AngleSchedule({0.3, 1.2}, {0.8, 2.2}));
  SubspaceState rotated = res.final_state;
  rotated.amplitudes *= std::polar(1.0, 1.234);
  CHECK(expectation_and_ratio(rotated, ctx.cost).first ==
        doctest::Approx(res.expectation).epsilon(1e-12));
}

TEST_CASE("missing threshold is rejected") {
  ProblemInstance inst(path4(), ProblemKind::DensestSubgraph, 2);
  CHECK_THROWS_AS(run_qaoa(inst, {MixerKind::Grover, SeparatorKind::Threshold},
                           AngleSchedule({pi}, {pi})),
                  std::invalid_argument);
}

TEST_CASE("subspace evolution matches the full Pauli simulation") {
  std::mt19937_64 rng(12);
  auto uni = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2 * pi; };
  for (const auto& variant : all_variants()) {
    for (int n : {4, 6}) {
      ProblemInstance inst(generate_erdos_renyi(n, 0.5, rng()),
                           ProblemKind::DensestSubgraph, n / 2);
      QaoaContext ctx(inst, variant);
      const AngleSchedule schedule({uni(), uni()}, {uni(), uni()});
      std::optional<int> th;
      if (variant.separator == SeparatorKind::Threshold)
        th = ctx.cost.c_max / 2;
      const RunResult fast = run_qaoa(ctx, schedule, th);
      const Eigen::VectorXcd full = oracle::full_space_run(inst, variant, schedule, th);
      for (std::size_t r = 0; r < ctx.index.dim(); ++r) {
        const auto x = static_cast<Eigen::Index>(ctx.index.unrank(r));
        CHECK(std::abs(fast.final_state.amplitudes[static_cast<Eigen::Index>(r)] -
                       full[x]) < 1e-10);
      }
    }
  }
}

TEST_CASE("grover-th pi schedule follows the amplitude amplification law") {
  ProblemInstance inst(generate_erdos_renyi(8, 0.5, 21),
                       ProblemKind::DensestSubgraph, 4);
  QaoaContext ctx(inst, {MixerKind::Grover, SeparatorKind::Threshold});
  const int th = ctx.cost.c_max - 1;
  std::uint64_t marked = 0;
  for (int c : ctx.cost.values)
    if (c > th) ++marked;
  for (int p = 0; p <= 6; ++p) {
    const RunResult res = run_qaoa(ctx, grover_th_schedule(p, p), th);
    double prob = 0;
    for (Eigen::Index r = 0; r < res.final_state.amplitudes.size(); ++r)
      if (ctx.cost.values[r] > th) prob += std::norm(res.final_state.amplitudes[r]);
    CHECK(prob == doctest::Approx(oracle::amplitude_amplification_probability(
                      ctx.index.dim(), marked, p)).epsilon(1e-9));
  }
}

TEST_CASE("per-round ratios are invariant under vertex relabeling") {
  // Clique and Grover mixers are permutation symmetric; Ring under cyclic shifts.
  std::mt19937_64 rng(77);
  auto uni = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2 * pi; };
  const int n = 6, k = 3;
  const Graph g = generate_erdos_renyi(n, 0.5, 13);
  const AngleSchedule schedule({uni(), uni()}, {uni(), uni()});

  auto relabeled = [&](const std::vector<int>& perm) {
    std::vector<std::pair<int, int>> edges;
    for (auto [u, v] : g.edges) edges.emplace_back(perm[u], perm[v]);
    return Graph(n, std::move(edges));
  };
  auto ratios = [&](const Graph& graph, MixerKind mixer) {
    ProblemInstance inst(graph, ProblemKind::DensestSubgraph, k);
    return run_qaoa(inst, {mixer, SeparatorKind::Objective}, schedule)
        .per_round_ratios;
  };

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  for (auto mixer : {MixerKind::Clique, MixerKind::Grover}) {
    const auto a = ratios(g, mixer);
    const auto b = ratios(relabeled(perm), mixer);
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-10));
  }
  // cyclic shift for the ring
  std::vector<int> shift(n);
  for (int i = 0; i < n; ++i) shift[i] = (i + 2) % n;
  const auto a = ratios(g, MixerKind::Ring);
  const auto b = ratios(relabeled(shift), MixerKind::Ring);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-10));
}
