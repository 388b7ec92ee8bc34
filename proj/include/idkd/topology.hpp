#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace idkd {

enum class TopologyKind { ring, chain, florentine, complete };

std::string topology_kind_name(TopologyKind k);

// Undirected connected graph. Adjacency is symmetric with no self-loops;
// both are checked at construction.
struct Graph {
  size_t n = 0;
  std::vector<uint8_t> adjacency;  // n x n
  TopologyKind name = TopologyKind::ring;

  bool adjacent(size_t i, size_t j) const { return adjacency[i * n + j] != 0; }
  size_t degree(size_t i) const;
  std::vector<size_t> neighbors(size_t i) const;  // ascending ids

  static Graph from_edges(size_t n, const std::vector<std::pair<size_t, size_t>>& edges,
                          TopologyKind kind);

  // {"n":N,"edges":[[i,j],...]} with i < j, lexicographically sorted
  std::string to_json() const;
  static Graph from_json(const std::string& text, TopologyKind kind);
};

Graph build_ring(size_t n);      // n >= 3
Graph build_chain(size_t n);     // n >= 2
Graph build_complete(size_t n);  // n >= 2

// The 15-node Florentine-families marriage graph (Pucci excluded).
Graph build_florentine();
const std::vector<std::string>& florentine_family_names();

// Doubly stochastic gossip weights. Stored dense, row-major double.
struct MixingMatrix {
  size_t n = 0;
  std::vector<double> w;

  double at(size_t i, size_t j) const { return w[i * n + j]; }
  double& at(size_t i, size_t j) { return w[i * n + j]; }
};

// w[i][j] = 1/(1 + max(deg i, deg j)) on edges, remainder on the diagonal.
MixingMatrix metropolis_weights(const Graph& g);

// 1 - |lambda_2|, computed by power iteration on the deflated matrix.
// Throws std::runtime_error if the iteration fails to converge.
double spectral_gap(const MixingMatrix& w);

}  // namespace idkd
