#pragma once

// Graphs with pinned edge orders and orientations, their incidence matrices,
// and brute-force automorphism groups.

#include <algorithm>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "lissajous/exactmat.hpp"

namespace lissajous {

/// Vertices are 1-based; edge (k, j) is oriented k -> j and its position fixes the column of A.
struct Graph {
  std::size_t num_vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

inline Graph from_edges(std::size_t m, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  if (m < 2) throw Error(ErrorCode::InvalidGraph, "a graph needs at least two vertices");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& [k, j] : edges) {
    if (k < 1 || j < 1 || k > m || j > m) throw Error(ErrorCode::InvalidGraph, "edge endpoint out of range");
    if (k == j) throw Error(ErrorCode::InvalidGraph, "loops are not allowed");
    if (!seen.insert({std::min(k, j), std::max(k, j)}).second) throw Error(ErrorCode::InvalidGraph, "duplicate edge");
  }
  return {m, edges};
}

/// Edges 1->2, 2->3, ..., n->1.
inline Graph cycle_graph(std::size_t n) {
  if (n < 3) throw Error(ErrorCode::InvalidGraph, "cycle graphs need n >= 3");
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t k = 1; k <= n; ++k) e.emplace_back(k, k % n + 1);
  return from_edges(n, e);
}

/// Edges k->j for k < j in lexicographic order.
inline Graph complete_graph(std::size_t m) {
  if (m < 2) throw Error(ErrorCode::InvalidGraph, "complete graphs need m >= 2");
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t k = 1; k <= m; ++k)
    for (std::size_t j = k + 1; j <= m; ++j) e.emplace_back(k, j);
  return from_edges(m, e);
}

inline bool is_connected(const Graph& g) {
  std::vector<std::size_t> parent(g.num_vertices);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::size_t components = g.num_vertices;
  for (const auto& [k, j] : g.edges) {
    std::size_t a = find(k - 1), b = find(j - 1);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

struct Incidence {
  IntMatrix full;     // m x n, column e_k - e_j per edge
  IntMatrix reduced;  // last row removed, rank m - 1
};

inline Incidence incidence(const Graph& g) {
  if (!is_connected(g)) throw Error(ErrorCode::Disconnected, "incidence matrices are built for connected graphs only");
  IntMatrix full(g.num_vertices, g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    full(g.edges[e].first - 1, e) += 1;
    full(g.edges[e].second - 1, e) -= 1;
  }
  std::vector<std::size_t> rows(g.num_vertices - 1);
  std::iota(rows.begin(), rows.end(), 0);
  return {full, full.select_rows(rows)};
}

inline constexpr std::size_t kMaxAutomorphismVertices = 8;

/// Every vertex permutation (0-based images, perm[v] = sigma(v)) preserving adjacency.
inline std::vector<std::vector<std::size_t>> automorphisms(const Graph& g) {
  const std::size_t m = g.num_vertices;
  if (m > kMaxAutomorphismVertices) throw Error(ErrorCode::TooLarge, "automorphism enumeration supports m <= 8");
  std::vector<std::vector<bool>> adj(m, std::vector<bool>(m, false));
  for (const auto& [k, j] : g.edges) adj[k - 1][j - 1] = adj[j - 1][k - 1] = true;
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<std::size_t>> out;
  do {
    bool ok = true;
    for (std::size_t a = 0; a < m && ok; ++a)
      for (std::size_t b = a + 1; b < m && ok; ++b) ok = adj[a][b] == adj[perm[a]][perm[b]];
    if (ok) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace lissajous
