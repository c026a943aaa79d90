#include "cqaoa/graph.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

namespace cqaoa {

Graph::Graph(int n_, std::vector<std::pair<int, int>> edges_)
    : n(n_), edges(std::move(edges_)) {
  if (n < 1) throw std::invalid_argument("Graph: vertex count must be >= 1");
  for (auto& [u, v] : edges) {
    if (u > v) std::swap(u, v);
    if (u == v) throw std::invalid_argument("Graph: self-loop");
    if (u < 0 || v >= n) throw std::invalid_argument("Graph: endpoint out of range");
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("Graph: duplicate edge");
}

bool operator==(const Graph& a, const Graph& b) {
  return a.n == b.n && a.edges == b.edges;
}

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::DensestSubgraph: return "densest";
    case ProblemKind::VertexCover: return "cover";
    case ProblemKind::Bisection: return "bisection";
  }
  throw std::logic_error("unknown ProblemKind");
}

ProblemKind problem_kind_from_string(const std::string& s) {
  if (s == "densest") return ProblemKind::DensestSubgraph;
  if (s == "cover") return ProblemKind::VertexCover;
  if (s == "bisection") return ProblemKind::Bisection;
  throw std::invalid_argument("unknown problem kind: " + s);
}

ProblemInstance::ProblemInstance(Graph g, ProblemKind kind_, int k_,
                                 std::optional<std::uint64_t> seed_)
    : graph(std::move(g)), kind(kind_), k(k_), seed(seed_) {
  if (k <= 0 || k >= graph.n)
    throw std::invalid_argument("ProblemInstance: need 0 < k < n");
  if (kind == ProblemKind::Bisection && 2 * k != graph.n)
    throw std::invalid_argument("ProblemInstance: Bisection requires k = n/2");
}

int objective(const ProblemInstance& instance, std::uint64_t x) {
  if (std::popcount(x) != instance.k)
    throw std::invalid_argument("objective: bitstring popcount != k");
  int total = 0;
  for (const auto& [u, v] : instance.graph.edges) {
    const bool a = (x >> u) & 1u;
    const bool b = (x >> v) & 1u;
    switch (instance.kind) {
      case ProblemKind::DensestSubgraph: total += (a && b); break;
      case ProblemKind::VertexCover: total += (a || b); break;
      case ProblemKind::Bisection: total += (a != b); break;
    }
  }
  return total;
}

namespace {
// 53-bit uniform in [0,1); avoids the unspecified std::uniform_real_distribution.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
}  // namespace

Graph generate_erdos_renyi(int n, double edge_probability, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_erdos_renyi: n >= 1");
  if (edge_probability < 0.0 || edge_probability > 1.0)
    throw std::invalid_argument("generate_erdos_renyi: p in [0,1]");
  std::mt19937_64 rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (uniform01(rng) < edge_probability) edges.emplace_back(u, v);
  return Graph(n, std::move(edges));
}

std::vector<Graph> all_four_vertex_graphs() {
  const std::pair<int, int> pairs[6] = {{0, 1}, {0, 2}, {0, 3},
                                        {1, 2}, {1, 3}, {2, 3}};
  std::vector<Graph> out;
  out.reserve(64);
  for (unsigned mask = 0; mask < 64; ++mask) {
    std::vector<std::pair<int, int>> edges;
    for (int j = 0; j < 6; ++j)
      if ((mask >> j) & 1u) edges.push_back(pairs[j]);
    out.emplace_back(4, std::move(edges));
  }
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64(splitmix64(master_seed) ^ (index + 1));
}

void to_json(nlohmann::json& j, const Graph& g) {
  j = nlohmann::json{{"n", g.n}, {"edges", nlohmann::json::array()}};
  for (const auto& [u, v] : g.edges) j["edges"].push_back({u, v});
}

void from_json(const nlohmann::json& j, Graph& g) {
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges"))
    edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  g = Graph(j.at("n").get<int>(), std::move(edges));
}

void to_json(nlohmann::json& j, const ProblemInstance& inst) {
  to_json(j, inst.graph);
  j["kind"] = to_string(inst.kind);
  j["k"] = inst.k;
  if (inst.seed) j["seed"] = *inst.seed;
}

void from_json(const nlohmann::json& j, ProblemInstance& inst) {
  Graph g;
  from_json(j, g);
  std::optional<std::uint64_t> seed;
  if (j.contains("seed")) seed = j.at("seed").get<std::uint64_t>();
  inst = ProblemInstance(std::move(g),
                         problem_kind_from_string(j.at("kind").get<std::string>()),
                         j.at("k").get<int>(), seed);
}

}  // namespace cqaoa
