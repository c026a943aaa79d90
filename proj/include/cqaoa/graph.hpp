#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace cqaoa {

/// Undirected simple graph on vertices 0..n-1. Edges are stored with u < v,
/// sorted lexicographically. Bit convention used throughout: bit i of a
/// bitstring (value 2^i) corresponds to vertex i.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  Graph() = default;
  Graph(int n_, std::vector<std::pair<int, int>> edges_);

  int edge_count() const { return static_cast<int>(edges.size()); }
};

bool operator==(const Graph& a, const Graph& b);

enum class ProblemKind { DensestSubgraph, VertexCover, Bisection };

std::string to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(const std::string& s);

/// A graph plus problem kind and constraint weight k. Feasible solutions are
/// the weight-k bitstrings; bit i set means vertex i is selected.
struct ProblemInstance {
  Graph graph;
  ProblemKind kind = ProblemKind::DensestSubgraph;
  int k = 0;
  std::optional<std::uint64_t> seed;  // provenance only

  ProblemInstance() = default;
  ProblemInstance(Graph g, ProblemKind kind_, int k_,
                  std::optional<std::uint64_t> seed_ = std::nullopt);

  int n() const { return graph.n; }
};

/// Edge-sum objective: AND (DensestSubgraph), OR (VertexCover),
/// XOR (Bisection) over the selected-vertex indicators of each edge.
/// Rejects bitstrings whose popcount differs from k.
int objective(const ProblemInstance& instance, std::uint64_t x);

/// G(n,p) with each of the C(n,2) edges, taken in lexicographic (u,v) order,
/// included independently with probability p. Pure function of (n, p, seed):
/// uses mt19937_64 with the 53-bit uniform double construction, so the edge
/// set is identical across platforms.
Graph generate_erdos_renyi(int n, double edge_probability, std::uint64_t seed);

/// All 2^6 graphs on 4 vertices, ordered by the edge-subset mask where bit j
/// selects the j-th pair in lexicographic order (0,1),(0,2),(0,3),(1,2),(1,3),(2,3).
std::vector<Graph> all_four_vertex_graphs();

/// splitmix64 step; the basis of per-instance seed derivation.
std::uint64_t splitmix64(std::uint64_t x);

/// Splittable per-instance seed: splitmix64(splitmix64(master) ^ (index+1)).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

void to_json(nlohmann::json& j, const Graph& g);
void from_json(const nlohmann::json& j, Graph& g);
void to_json(nlohmann::json& j, const ProblemInstance& inst);
void from_json(const nlohmann::json& j, ProblemInstance& inst);

}  // namespace cqaoa
