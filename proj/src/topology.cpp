#include "idkd/topology.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace idkd {

std::string topology_kind_name(TopologyKind k) {
  switch (k) {
    case TopologyKind::ring: return "ring";
    case TopologyKind::chain: return "chain";
    case TopologyKind::florentine: return "florentine";
    case TopologyKind::complete: return "complete";
  }
  return "unknown";
}

size_t Graph::degree(size_t i) const {
  size_t d = 0;
  for (size_t j = 0; j < n; ++j) d += adjacency[i * n + j];
  return d;
}

std::vector<size_t> Graph::neighbors(size_t i) const {
  std::vector<size_t> out;
  for (size_t j = 0; j < n; ++j)
    if (adjacency[i * n + j]) out.push_back(j);
  return out;
}

namespace {

void check_connected(const Graph& g) {
  if (g.n == 0) throw std::invalid_argument("graph: empty");
  std::vector<uint8_t> seen(g.n, 0);
  std::vector<size_t> stack{0};
  seen[0] = 1;
  size_t visited = 1;
  while (!stack.empty()) {
    size_t i = stack.back();
    stack.pop_back();
    for (size_t j = 0; j < g.n; ++j) {
      if (g.adjacent(i, j) && !seen[j]) {
        seen[j] = 1;
        ++visited;
        stack.push_back(j);
      }
    }
  }
  if (visited != g.n) throw std::invalid_argument("graph: not connected");
}

}  // namespace

Graph Graph::from_edges(size_t n, const std::vector<std::pair<size_t, size_t>>& edges,
                        TopologyKind kind) {
  Graph g;
  g.n = n;
  g.name = kind;
  g.adjacency.assign(n * n, 0);
  for (auto [a, b] : edges) {
    if (a >= n || b >= n) throw std::invalid_argument("graph: edge endpoint out of range");
    if (a == b) throw std::invalid_argument("graph: self-loop");
    g.adjacency[a * n + b] = 1;
    g.adjacency[b * n + a] = 1;
  }
  check_connected(g);
  return g;
}

std::string Graph::to_json() const {
  nlohmann::json doc;
  doc["n"] = n;
  auto edges = nlohmann::json::array();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (adjacent(i, j)) edges.push_back({i, j});
  doc["edges"] = std::move(edges);
  return doc.dump();
}

Graph Graph::from_json(const std::string& text, TopologyKind kind) {
  nlohmann::json doc = nlohmann::json::parse(text);
  size_t n = doc.at("n").get<size_t>();
  std::vector<std::pair<size_t, size_t>> edges;
  for (const auto& e : doc.at("edges"))
    edges.emplace_back(e.at(0).get<size_t>(), e.at(1).get<size_t>());
  return from_edges(n, edges, kind);
}

Graph build_ring(size_t n) {
  if (n < 3) throw std::invalid_argument("build_ring: n must be >= 3");
  std::vector<std::pair<size_t, size_t>> edges;
  for (size_t i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph::from_edges(n, edges, TopologyKind::ring);
}

Graph build_chain(size_t n) {
  if (n < 2) throw std::invalid_argument("build_chain: n must be >= 2");
  std::vector<std::pair<size_t, size_t>> edges;
  for (size_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph::from_edges(n, edges, TopologyKind::chain);
}

Graph build_complete(size_t n) {
  if (n < 2) throw std::invalid_argument("build_complete: n must be >= 2");
  std::vector<std::pair<size_t, size_t>> edges;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return Graph::from_edges(n, edges, TopologyKind::complete);
}

const std::vector<std::string>& florentine_family_names() {
  static const std::vector<std::string> names = {
      "Acciaiuoli", "Albizzi",  "Barbadori",    "Bischeri", "Castellani",
      "Ginori",     "Guadagni", "Lamberteschi", "Medici",   "Pazzi",
      "Peruzzi",    "Ridolfi",  "Salviati",     "Strozzi",  "Tornabuoni"};
  return names;
}

Graph build_florentine() {
  // Canonical 15-family marriage network, 20 edges, indices alphabetical.
  static const std::vector<std::pair<size_t, size_t>> edges = {
      {0, 8},    // Acciaiuoli - Medici
      {1, 5},    // Albizzi - Ginori
      {1, 6},    // Albizzi - Guadagni
      {1, 8},    // Albizzi - Medici
      {2, 4},    // Barbadori - Castellani
      {2, 8},    // Barbadori - Medici
      {3, 6},    // Bischeri - Guadagni
      {3, 10},   // Bischeri - Peruzzi
      {3, 13},   // Bischeri - Strozzi
      {4, 10},   // Castellani - Peruzzi
      {4, 13},   // Castellani - Strozzi
      {6, 7},    // Guadagni - Lamberteschi
      {6, 14},   // Guadagni - Tornabuoni
      {8, 11},   // Medici - Ridolfi
      {8, 12},   // Medici - Salviati
      {8, 14},   // Medici - Tornabuoni
      {9, 12},   // Pazzi - Salviati
      {10, 13},  // Peruzzi - Strozzi
      {11, 13},  // Ridolfi - Strozzi
      {11, 14},  // Ridolfi - Tornabuoni
  };
  return Graph::from_edges(15, edges, TopologyKind::florentine);
}

MixingMatrix metropolis_weights(const Graph& g) {
  MixingMatrix m;
  m.n = g.n;
  m.w.assign(g.n * g.n, 0.0);
  std::vector<size_t> deg(g.n);
  for (size_t i = 0; i < g.n; ++i) deg[i] = g.degree(i);
  for (size_t i = 0; i < g.n; ++i) {
    double off = 0.0;
    for (size_t j = 0; j < g.n; ++j) {
      if (!g.adjacent(i, j)) continue;
      double w = 1.0 / (1.0 + static_cast<double>(std::max(deg[i], deg[j])));
      m.at(i, j) = w;
      off += w;
    }
    m.at(i, i) = 1.0 - off;
  }
  return m;
}

double spectral_gap(const MixingMatrix& w) {
  size_t n = w.n;
  if (n == 0) throw std::invalid_argument("spectral_gap: empty matrix");
  if (n == 1) return 1.0;

  // Deflate the eigenvalue-1 component: B = W - (1/n) 11^T. Power iteration
  // applies B twice per step so eigenvalue pairs +/-a cannot stall it.
  auto apply_deflated = [&](const std::vector<double>& x, std::vector<double>& y) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    for (size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (size_t j = 0; j < n; ++j) acc += w.at(i, j) * x[j];
      y[i] = acc - mean;
    }
  };

  std::vector<double> x(n), y(n), z(n);
  for (size_t i = 0; i < n; ++i) x[i] = 1.0 + static_cast<double>(i % 7) * 0.125;
  double prev = -1.0;
  const int max_iters = 100000;
  for (int it = 0; it < max_iters; ++it) {
    double norm = 0.0;
    for (double v : x) norm += v * v;
    norm = std::sqrt(norm);
    if (norm < 1e-280) return 1.0;  // numerically rank-one mixing
    for (double& v : x) v /= norm;
    apply_deflated(x, y);
    apply_deflated(y, z);
    double num = 0.0;
    for (double v : z) num += v * v;
    double estimate = std::pow(num, 0.25);  // |lambda_2| from two applications
    if (it > 4 && std::abs(estimate - prev) < 1e-13 * std::max(1.0, estimate)) {
      return 1.0 - estimate;
    }
    prev = estimate;
    x = z;
  }
  throw std::runtime_error("spectral_gap: power iteration did not converge");
}

}  // namespace idkd
