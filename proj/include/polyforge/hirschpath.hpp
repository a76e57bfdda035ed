#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <limits>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "polyforge/complexcore.hpp"

namespace polyforge {

struct hirsch_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/**
 * A facet path in a host complex, with the pearls of its necklace and the
 * breakpoints where each X_i is reached.
 */
struct FacetPath {
  std::vector<int> facets;  // indices into host.facets
  std::vector<int> pearls;
  std::vector<int> breakpoints;
};

constexpr int kUnreachable = std::numeric_limits<int>::max();

inline std::vector<int> bfs_distances(const std::vector<std::set<int>>& adj, const std::set<int>& sources) {
  std::vector<int> dist(adj.size(), kUnreachable);
  std::queue<int> q;
  for (int s : sources) {
    if (s < 0 || s >= static_cast<int>(adj.size())) continue;
    dist[s] = 0;
    q.push(s);
  }
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    for (int y : adj[x])
      if (dist[y] == kUnreachable) {
        dist[y] = dist[x] + 1;
        q.push(y);
      }
  }
  return dist;
}

/** Multi-source BFS in the 1-skeleton; kUnreachable for vertices not reached. */
inline std::vector<int> bfs_distances(const SimplicialComplex& c, const std::set<int>& sources) {
  return bfs_distances(vertex_graph(c), sources);
}

struct VertexDistance {
  int distance = 0;
  std::vector<int> nearest;  // p(x, Y)
};

inline VertexDistance vertex_distance(const std::vector<std::set<int>>& adj, int x, const std::set<int>& Y) {
  auto dist = bfs_distances(adj, {x});
  int n = static_cast<int>(adj.size());
  VertexDistance r;
  r.distance = kUnreachable;
  for (int y : Y)
    if (y >= 0 && y < n) r.distance = std::min(r.distance, dist[y]);
  if (r.distance == kUnreachable) throw hirsch_error("disconnected: target not reachable");
  for (int y : Y)
    if (y >= 0 && y < n && dist[y] == r.distance) r.nearest.push_back(y);
  return r;
}

/** d_co(x, Y) and the elements of Y realizing it. */
inline VertexDistance vertex_distance(const SimplicialComplex& c, int x, const std::set<int>& Y) {
  return vertex_distance(vertex_graph(c), x, Y);
}

namespace detail {

struct RawPath {
  std::vector<Face> facets;
  std::vector<int> pearls;
  std::vector<int> breaks;
};

inline bool meets(const Face& f, const std::set<int>& Y) {
  for (int v : f)
    if (Y.count(v)) return true;
  return false;
}

inline void append_lifted(RawPath& path, const std::vector<Face>& sub, int apex) {
  for (std::size_t i = 1; i < sub.size(); ++i) {
    Face f = sub[i];
    f.push_back(apex);
    path.facets.push_back(sorted_face(f));
  }
}

// Part 1: from facet X to a facet meeting the vertex set Y.
inline RawPath segment_to_set(const SimplicialComplex& c, const Face& X, const std::set<int>& Y) {
  RawPath path;
  path.facets.push_back(X);
  if (Y.empty()) throw hirsch_error("unreachable target: empty vertex set");
  if (c.dim() <= 0) {
    if (!X.empty()) path.pearls.push_back(X.front());
    path.breaks.push_back(0);
    if (meets(X, Y)) return path;
    for (int y : Y)
      if (c.contains({y})) {
        path.facets.push_back({y});
        return path;
      }
    throw hirsch_error("unreachable target: no facet meets the target set");
  }
  auto adj = vertex_graph(c);
  auto distY = bfs_distances(adj, Y);
  int x = -1;
  for (int v : X)
    if (x < 0 || distY[v] < distY[x]) x = v;
  if (distY[x] == kUnreachable) throw hirsch_error("unreachable target");
  std::set<int> Yi;
  for (int y : vertex_distance(adj, x, Y).nearest) Yi.insert(y);
  Face Xi = X;
  path.pearls.push_back(x);
  path.breaks.push_back(0);
  while (!meets(Xi, Y)) {
    auto dYi = bfs_distances(adj, Yi);
    std::set<int> T;
    for (int y : adj[x])
      if (dYi[y] != kUnreachable && dYi[y] + 1 == dYi[x]) T.insert(y);
    SimplicialComplex lk = link_raw(c, {x});
    RawPath sub = segment_to_set(lk, face_minus(Xi, {x}), T);
    append_lifted(path, sub.facets, x);
    Xi = path.facets.back();
    int next = -1;
    for (int v : Xi)
      if (T.count(v)) {
        next = v;
        break;
      }
    if (next < 0) throw hirsch_error("segment in link missed its target");
    std::set<int> Ynext;
    for (int y : vertex_distance(adj, next, Yi).nearest) Ynext.insert(y);
    Yi = std::move(Ynext);
    x = next;
    path.pearls.push_back(x);
    path.breaks.push_back(static_cast<int>(path.facets.size()) - 1);
  }
  return path;
}

// Part 2: from facet X to facet Y.
inline RawPath segment_to_facet(const SimplicialComplex& c, const Face& X, const Face& Y) {
  std::set<int> Yset(Y.begin(), Y.end());
  RawPath path = segment_to_set(c, X, Yset);
  if (c.dim() <= 0) {
    path.breaks.push_back(static_cast<int>(path.facets.size()) - 1);
    return path;
  }
  Face Xl = path.facets.back();
  Face shared = face_intersection(Xl, Y);
  if (shared.empty()) throw hirsch_error("last facet of part 1 shares no vertex with the target");
  int xl = shared.front();
  SimplicialComplex lk = link_raw(c, {xl});
  RawPath sub = segment_to_facet(lk, face_minus(Xl, {xl}), face_minus(Y, {xl}));
  append_lifted(path, sub.facets, xl);
  path.breaks.push_back(static_cast<int>(path.facets.size()) - 1);
  return path;
}

}  // namespace detail

inline int facet_index(const SimplicialComplex& c, const Face& f) {
  Face s = sorted_face(f);
  auto it = std::lower_bound(c.facets.begin(), c.facets.end(), s);
  if (it == c.facets.end() || *it != s) return -1;
  return static_cast<int>(it - c.facets.begin());
}

inline void check_normal_flag(const SimplicialComplex& c) {
  if (!is_normal(c)) throw hirsch_error("precondition-violation: complex is not normal");
  if (!is_flag(c)) throw hirsch_error("precondition-violation: complex is not flag");
}

inline FacetPath to_facet_path(const SimplicialComplex& c, const detail::RawPath& raw) {
  FacetPath p;
  for (auto& f : raw.facets) {
    int id = facet_index(c, f);
    if (id < 0) throw hirsch_error("constructed path left the complex");
    p.facets.push_back(id);
  }
  p.pearls = raw.pearls;
  p.breakpoints = raw.breaks;
  return p;
}

/** Combinatorial segment from facet X to facet Y, without precondition checks. */
inline FacetPath combinatorial_segment_unchecked(const SimplicialComplex& c, int X, int Y) {
  return to_facet_path(c, detail::segment_to_facet(c, c.facets.at(X), c.facets.at(Y)));
}

/** Combinatorial segment between two facets of a normal flag complex. */
inline FacetPath combinatorial_segment(const SimplicialComplex& c, int X, int Y) {
  if (X < 0 || Y < 0 || X >= static_cast<int>(c.facets.size()) ||
      Y >= static_cast<int>(c.facets.size()))
    throw hirsch_error("facet index out of range");
  check_normal_flag(c);
  return combinatorial_segment_unchecked(c, X, Y);
}

/** Combinatorial segment from facet X to a vertex set (first part of the construction). */
inline FacetPath combinatorial_segment_to_set(const SimplicialComplex& c, int X,
                                              const std::set<int>& Y, bool checked = true) {
  if (checked) check_normal_flag(c);
  return to_facet_path(c, detail::segment_to_set(c, c.facets.at(X), Y));
}

inline bool is_valid_path(const SimplicialComplex& c, const FacetPath& p) {
  if (p.facets.empty()) return false;
  int d = c.dim();
  for (std::size_t i = 0; i < p.facets.size(); ++i) {
    if (p.facets[i] < 0 || p.facets[i] >= static_cast<int>(c.facets.size())) return false;
    if (i == 0) continue;
    auto& a = c.facets[p.facets[i - 1]];
    auto& b = c.facets[p.facets[i]];
    if (static_cast<int>(face_intersection(a, b).size()) != d) return false;
  }
  return true;
}

/** For every vertex, the path indices whose facet contains it form an interval. */
inline bool is_non_revisiting(const SimplicialComplex& c, const FacetPath& p) {
  if (!is_valid_path(c, p)) throw hirsch_error("invalid path");
  std::map<int, std::vector<int>> hits;
  for (std::size_t i = 0; i < p.facets.size(); ++i)
    for (int v : c.facets[p.facets[i]]) hits[v].push_back(static_cast<int>(i));
  for (auto& [v, idx] : hits)
    if (idx.back() - idx.front() + 1 != static_cast<int>(idx.size())) return false;
  return true;
}

/** BFS distances in the dual graph from one facet. */
inline std::vector<int> dual_distances(const std::vector<std::vector<int>>& g, int from) {
  std::vector<int> dist(g.size(), kUnreachable);
  std::queue<int> q;
  dist[from] = 0;
  q.push(from);
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    for (int y : g[x])
      if (dist[y] == kUnreachable) {
        dist[y] = dist[x] + 1;
        q.push(y);
      }
  }
  return dist;
}

inline int dual_diameter(const SimplicialComplex& c) {
  auto g = dual_graph(c);
  int diam = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto d = dual_distances(g, static_cast<int>(i));
    for (int x : d) {
      if (x == kUnreachable) throw hirsch_error("disconnected dual graph");
      diam = std::max(diam, x);
    }
  }
  return diam;
}

/**
 * Random normal flag complex: barycentric subdivision of a small seed
 * followed by random edge subdivisions while staying within max_vertices.
 */
inline SimplicialComplex random_normal_flag_complex(std::mt19937_64& rng, int dim,
                                                    int max_vertices = 40) {
  std::vector<SimplicialComplex> seeds;
  if (dim == 1) seeds = {simplex_boundary(2), simplex(1)};
  else if (dim == 2) seeds = {simplex_boundary(3), simplex(2)};
  else if (dim == 3) seeds = {simplex_boundary(4), simplex(3)};
  else throw hirsch_error("random complexes supported for dim 1..3");
  SimplicialComplex c = derived_subdivision(seeds[rng() % seeds.size()]);
  std::uniform_int_distribution<int> steps(0, std::max(0, max_vertices - c.num_vertices));
  int k = steps(rng);
  for (int i = 0; i < k; ++i) {
    auto edges = c.faces_by_dim()[1];
    const Face& e = edges[rng() % edges.size()];
    SimplicialComplex next = stellar_subdivision(c, e);
    if (is_flag(next) && is_normal(next)) c = std::move(next);
  }
  return c;
}

inline nlohmann::json to_json_value(const SimplicialComplex& c, const FacetPath& p) {
  nlohmann::json facets = nlohmann::json::array();
  for (int id : p.facets) facets.push_back(c.facets[id]);
  return {{"facet_ids", p.facets},
          {"facets", facets},
          {"pearls", p.pearls},
          {"breakpoints", p.breakpoints},
          {"length", static_cast<int>(p.facets.size()) - 1}};
}

}  // namespace polyforge
