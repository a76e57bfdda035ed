#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace polyforge {

using Face = std::vector<int>;

struct complex_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Face sorted_face(Face f) {
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

inline bool is_subset(const Face& small, const Face& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

inline Face face_union(const Face& x, const Face& y) {
  Face r;
  std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(r));
  return r;
}

inline Face face_minus(const Face& x, const Face& y) {
  Face r;
  std::set_difference(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(r));
  return r;
}

inline Face face_intersection(const Face& x, const Face& y) {
  Face r;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(r));
  return r;
}

/**
 * Simplicial complex stored by its facets.
 *
 * The void complex has no facets; the complex {∅} has a single empty facet.
 */
class SimplicialComplex {
 public:
  int num_vertices = 0;
  std::vector<Face> facets;

  SimplicialComplex() = default;

  /** Sorts, deduplicates and drops non-maximal faces. */
  static SimplicialComplex from_facets(int n, std::vector<Face> fs) {
    SimplicialComplex c;
    c.num_vertices = n;
    for (auto& f : fs) {
      f = sorted_face(std::move(f));
      for (int v : f)
        if (v < 0 || v >= n) throw complex_error("vertex id out of range");
    }
    std::sort(fs.begin(), fs.end(), [](const Face& x, const Face& y) {
      if (x.size() != y.size()) return x.size() > y.size();
      return x < y;
    });
    fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
    std::vector<Face> keep;
    if (!fs.empty() && fs.front().size() == fs.back().size()) {
      keep = std::move(fs);  // equal sizes: no facet can contain another
    } else {
      for (auto& f : fs) {
        bool covered = false;
        for (const auto& g : keep)
          if (g.size() > f.size() && is_subset(f, g)) {
            covered = true;
            break;
          }
        if (!covered) keep.push_back(f);
      }
    }
    std::sort(keep.begin(), keep.end());
    c.facets = std::move(keep);
    return c;
  }

  bool is_void() const { return facets.empty(); }

  int dim() const {
    int d = -2;
    for (const auto& f : facets) d = std::max(d, static_cast<int>(f.size()) - 1);
    return d;
  }

  bool is_pure() const {
    for (const auto& f : facets)
      if (static_cast<int>(f.size()) - 1 != dim()) return false;
    return true;
  }

  bool contains(const Face& f) const {
    Face s = sorted_face(f);
    for (const auto& g : facets)
      if (is_subset(s, g)) return true;
    return false;
  }

  /** Vertices actually used by some facet. */
  std::vector<int> vertices() const {
    std::set<int> s;
    for (const auto& f : facets) s.insert(f.begin(), f.end());
    return {s.begin(), s.end()};
  }

  /** All nonempty faces, ordered by dimension then lexicographically. */
  std::vector<Face> faces() const {
    std::set<Face> all;
    for (const auto& f : facets) {
      const std::size_t k = f.size();
      if (k > 24) throw complex_error("facet too large for face enumeration");
      for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
        Face g;
        for (std::size_t i = 0; i < k; ++i)
          if (mask & (1u << i)) g.push_back(f[i]);
        all.insert(std::move(g));
      }
    }
    std::vector<Face> out(all.begin(), all.end());
    std::stable_sort(out.begin(), out.end(),
                     [](const Face& x, const Face& y) { return x.size() < y.size(); });
    return out;
  }

  std::vector<std::vector<Face>> faces_by_dim() const {
    std::vector<std::vector<Face>> r(std::max(0, dim() + 1));
    for (auto& f : faces()) r[f.size() - 1].push_back(f);
    return r;
  }

  friend bool operator==(const SimplicialComplex& x, const SimplicialComplex& y) {
    return x.facets == y.facets;
  }
};

/** A complex on compacted vertex ids plus the map back to the parent ids. */
struct Relabeled {
  SimplicialComplex complex;
  std::vector<int> to_parent;
};

/** Renumbers used vertices to 0..m-1 in increasing order. */
inline Relabeled compact(const SimplicialComplex& c) {
  Relabeled r;
  r.to_parent = c.vertices();
  std::map<int, int> inv;
  for (std::size_t i = 0; i < r.to_parent.size(); ++i) inv[r.to_parent[i]] = static_cast<int>(i);
  std::vector<Face> fs;
  for (const auto& f : c.facets) {
    Face g;
    for (int v : f) g.push_back(inv[v]);
    fs.push_back(g);
  }
  r.complex = SimplicialComplex::from_facets(static_cast<int>(r.to_parent.size()), fs);
  return r;
}

inline std::vector<int> f_vector(const SimplicialComplex& c) {
  std::vector<int> f(std::max(0, c.dim() + 1), 0);
  for (auto& g : c.faces()) f[g.size() - 1]++;
  return f;
}

inline long euler_characteristic(const SimplicialComplex& c) {
  long chi = 0;
  auto f = f_vector(c);
  for (std::size_t i = 0; i < f.size(); ++i) chi += (i % 2 ? -1 : 1) * f[i];
  return chi;
}

/** Closed star: the facets containing the face. */
inline SimplicialComplex star(const SimplicialComplex& c, const Face& face) {
  Face s = sorted_face(face);
  std::vector<Face> fs;
  for (const auto& f : c.facets)
    if (is_subset(s, f)) fs.push_back(f);
  return SimplicialComplex::from_facets(c.num_vertices, fs);
}

/** Link on the parent's vertex ids (no relabeling). */
inline SimplicialComplex link_raw(const SimplicialComplex& c, const Face& face) {
  Face s = sorted_face(face);
  if (!c.contains(s)) throw complex_error("face-not-in-complex");
  std::vector<Face> fs;
  for (const auto& f : c.facets)
    if (is_subset(s, f)) fs.push_back(face_minus(f, s));
  return SimplicialComplex::from_facets(c.num_vertices, fs);
}

/** Link of a face, re-indexed, with index map. */
inline Relabeled link(const SimplicialComplex& c, const Face& face) {
  return compact(link_raw(c, face));
}

/** Faces of c avoiding every vertex in vs. */
inline SimplicialComplex deletion(const SimplicialComplex& c, const Face& vs) {
  Face s = sorted_face(vs);
  std::vector<Face> fs;
  for (const auto& f : c.faces())
    if (face_intersection(f, s).empty()) fs.push_back(f);
  return SimplicialComplex::from_facets(c.num_vertices, fs);
}

/** Subcomplex induced on a vertex set. */
inline SimplicialComplex induced(const SimplicialComplex& c, const Face& vs) {
  Face s = sorted_face(vs);
  std::vector<Face> fs;
  for (const auto& f : c.facets) {
    Face g = face_intersection(f, s);
    if (!g.empty()) fs.push_back(g);
  }
  return SimplicialComplex::from_facets(c.num_vertices, fs);
}

inline SimplicialComplex skeleton(const SimplicialComplex& c, int k) {
  std::vector<Face> fs;
  for (auto& f : c.faces())
    if (static_cast<int>(f.size()) - 1 <= k) fs.push_back(f);
  return SimplicialComplex::from_facets(c.num_vertices, fs);
}

inline SimplicialComplex simplex(int d) {
  Face f(d + 1);
  std::iota(f.begin(), f.end(), 0);
  return SimplicialComplex::from_facets(d + 1, {f});
}

inline SimplicialComplex simplex_boundary(int d) {
  std::vector<Face> fs;
  for (int skip = 0; skip <= d; ++skip) {
    Face f;
    for (int v = 0; v <= d; ++v)
      if (v != skip) f.push_back(v);
    fs.push_back(f);
  }
  return SimplicialComplex::from_facets(d + 1, fs);
}

/** Boundary of the d-dimensional cross-polytope; vertices 2i, 2i+1 are antipodal. */
inline SimplicialComplex cross_polytope_boundary(int d) {
  std::vector<Face> fs;
  for (int mask = 0; mask < (1 << d); ++mask) {
    Face f;
    for (int i = 0; i < d; ++i) f.push_back(2 * i + ((mask >> i) & 1));
    fs.push_back(f);
  }
  return SimplicialComplex::from_facets(2 * d, fs);
}

/** Cone with apex num_vertices. */
inline SimplicialComplex cone(const SimplicialComplex& c) {
  int apex = c.num_vertices;
  std::vector<Face> fs;
  for (auto f : c.facets) {
    f.push_back(apex);
    fs.push_back(f);
  }
  if (fs.empty()) fs.push_back({apex});
  return SimplicialComplex::from_facets(c.num_vertices + 1, fs);
}

/**
 * Stellar subdivision at a face: every facet F containing the face t is
 * replaced by the cones (F - t) * g * {new vertex} for g a facet of the
 * boundary of t.
 */
inline SimplicialComplex stellar_subdivision(const SimplicialComplex& c, const Face& face) {
  Face t = sorted_face(face);
  if (t.empty() || !c.contains(t)) throw complex_error("face-not-in-complex");
  int nv = c.num_vertices;
  std::vector<Face> fs;
  for (const auto& f : c.facets) {
    if (!is_subset(t, f)) {
      fs.push_back(f);
      continue;
    }
    Face rest = face_minus(f, t);
    for (std::size_t skip = 0; skip < t.size(); ++skip) {
      Face g = rest;
      for (std::size_t i = 0; i < t.size(); ++i)
        if (i != skip) g.push_back(t[i]);
      g.push_back(nv);
      fs.push_back(g);
    }
  }
  return SimplicialComplex::from_facets(nv + 1, fs);
}

/** Facet-ridge graph; adjacency lists over facet indices. Requires purity. */
inline std::vector<std::vector<int>> dual_graph(const SimplicialComplex& c) {
  if (!c.is_pure()) throw complex_error("not-pure");
  std::map<Face, std::vector<int>> ridges;
  for (std::size_t i = 0; i < c.facets.size(); ++i) {
    const Face& f = c.facets[i];
    for (std::size_t skip = 0; skip < f.size(); ++skip) {
      Face r;
      for (std::size_t j = 0; j < f.size(); ++j)
        if (j != skip) r.push_back(f[j]);
      ridges[r].push_back(static_cast<int>(i));
    }
  }
  std::vector<std::set<int>> adj(c.facets.size());
  for (auto& [r, fs] : ridges)
    for (int x : fs)
      for (int y : fs)
        if (x != y) adj[x].insert(y);
  std::vector<std::vector<int>> out;
  for (auto& s : adj) out.emplace_back(s.begin(), s.end());
  return out;
}

inline bool graph_connected(const std::vector<std::vector<int>>& adj) {
  if (adj.empty()) return true;
  std::vector<char> seen(adj.size(), 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  std::size_t cnt = 1;
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    for (int y : adj[x])
      if (!seen[y]) {
        seen[y] = 1;
        ++cnt;
        q.push(y);
      }
  }
  return cnt == adj.size();
}

/** Vertex adjacency of the 1-skeleton, indexed by vertex id. */
inline std::vector<std::set<int>> vertex_graph(const SimplicialComplex& c) {
  std::vector<std::set<int>> adj(c.num_vertices);
  for (const auto& f : c.facets)
    for (int x : f)
      for (int y : f)
        if (x != y) adj[x].insert(y);
  return adj;
}

/** Every inclusion-minimal non-face is an edge. */
inline bool is_flag(const SimplicialComplex& c) {
  auto adj = vertex_graph(c);
  auto verts = c.vertices();
  for (const auto& s : c.faces()) {
    for (int w : verts) {
      if (std::binary_search(s.begin(), s.end(), w)) continue;
      bool all = true;
      for (int v : s)
        if (!adj[w].count(v)) {
          all = false;
          break;
        }
      if (!all) continue;
      Face g = s;
      g.push_back(w);
      if (!c.contains(g)) return false;
    }
  }
  return true;
}

/** Dual graph of the star of every face, the empty face included, is connected. */
inline bool is_normal(const SimplicialComplex& c) {
  if (!c.is_pure()) return false;
  std::vector<Face> all = c.faces();
  all.insert(all.begin(), Face{});
  for (const auto& s : all) {
    SimplicialComplex st = star(c, s);
    if (!graph_connected(dual_graph(st))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Cubical complexes

struct Cube {
  int dim = 0;
  std::vector<int> corners;  // indexed by corner bit pattern in {0,1}^dim
};

class CubicalComplex {
 public:
  int num_vertices = 0;
  std::vector<Cube> cubes;

  /** A face of a cube: the corners with the bits in `mask` fixed to `value`. */
  static Cube subcube(const Cube& q, unsigned mask, unsigned value) {
    Cube r;
    std::vector<int> free;
    for (int i = 0; i < q.dim; ++i)
      if (!(mask & (1u << i))) free.push_back(i);
    r.dim = static_cast<int>(free.size());
    r.corners.resize(std::size_t{1} << r.dim);
    for (unsigned b = 0; b < (1u << r.dim); ++b) {
      unsigned idx = value & mask;
      for (int k = 0; k < r.dim; ++k)
        if (b & (1u << k)) idx |= 1u << free[k];
      r.corners[b] = q.corners[idx];
    }
    return r;
  }

  /** All faces keyed by sorted vertex set; each with one corner-ordered witness. */
  std::map<Face, Cube> face_map() const {
    std::map<Face, Cube> out;
    for (const auto& q : cubes) {
      if (q.corners.size() != (std::size_t{1} << q.dim))
        throw complex_error("cube corner count mismatch");
      for (unsigned mask = 0; mask < (1u << q.dim); ++mask)
        for (unsigned value = 0; value < (1u << q.dim); ++value) {
          if ((value & ~mask) != 0) continue;
          Cube s = subcube(q, mask, value);
          Face key = sorted_face(s.corners);
          if (key.size() != s.corners.size()) throw complex_error("degenerate cube");
          out.emplace(key, s);
        }
    }
    return out;
  }

  int dim() const {
    int d = -1;
    for (const auto& q : cubes) d = std::max(d, q.dim);
    return d;
  }
};

inline std::vector<int> f_vector(const CubicalComplex& c) {
  std::vector<int> f(std::max(0, c.dim() + 1), 0);
  for (auto& [k, q] : c.face_map()) f[q.dim]++;
  return f;
}

/** Drops cubes that are faces of other listed cubes and duplicates. */
inline CubicalComplex normalize(const CubicalComplex& c) {
  std::map<Face, Cube> top;
  std::set<Face> lower;
  for (const auto& q : c.cubes) {
    CubicalComplex one;
    one.cubes = {q};
    for (auto& [k, s] : one.face_map())
      if (s.dim < q.dim) lower.insert(k);
  }
  for (const auto& q : c.cubes) {
    Face k = sorted_face(q.corners);
    if (!lower.count(k)) top.emplace(k, q);
  }
  CubicalComplex r;
  r.num_vertices = c.num_vertices;
  for (auto& [k, q] : top) r.cubes.push_back(q);
  return r;
}

/**
 * St(v) - v for a cubical complex: the faces of cubes through v that miss v,
 * on re-indexed vertices.
 */
inline std::pair<CubicalComplex, std::vector<int>> cubical_link(const CubicalComplex& c, int v) {
  std::vector<Cube> parts;
  for (const auto& [k, q] : c.face_map()) {
    if (std::binary_search(k.begin(), k.end(), v)) continue;
    // keep faces lying in some cube that contains v
    for (const auto& big : c.cubes)
      if (std::find(big.corners.begin(), big.corners.end(), v) != big.corners.end()) {
        Face bk = sorted_face(big.corners);
        if (is_subset(k, bk)) {
          parts.push_back(q);
          break;
        }
      }
  }
  std::set<int> used;
  for (auto& q : parts) used.insert(q.corners.begin(), q.corners.end());
  std::vector<int> to_parent(used.begin(), used.end());
  std::map<int, int> inv;
  for (std::size_t i = 0; i < to_parent.size(); ++i) inv[to_parent[i]] = static_cast<int>(i);
  CubicalComplex r;
  r.num_vertices = static_cast<int>(to_parent.size());
  for (auto& q : parts) {
    for (auto& x : q.corners) x = inv[x];
    r.cubes.push_back(q);
  }
  return {normalize(r), to_parent};
}

// ---------------------------------------------------------------------------
// Face posets and order complexes

/**
 * Face poset of nonempty faces with cover relations. Elements are ordered by
 * dimension then by sorted vertex set.
 */
struct FacePoset {
  std::vector<int> dim;
  std::vector<Face> verts;
  std::vector<std::vector<int>> down;  // codimension-one faces
  std::vector<std::vector<int>> up;    // codimension-one cofaces
  std::map<Face, int> index;

  std::size_t size() const { return dim.size(); }

  int find(const Face& f) const {
    auto it = index.find(sorted_face(f));
    return it == index.end() ? -1 : it->second;
  }

  int max_dim() const {
    int d = -1;
    for (int x : dim) d = std::max(d, x);
    return d;
  }

  long euler_characteristic() const {
    long chi = 0;
    for (int x : dim) chi += (x % 2 ? -1 : 1);
    return chi;
  }

  void finish() {
    up.assign(size(), {});
    for (std::size_t i = 0; i < size(); ++i)
      for (int j : down[i]) up[j].push_back(static_cast<int>(i));
    for (auto& u : up) std::sort(u.begin(), u.end());
  }
};

inline bool face_order_less(const std::pair<int, Face>& x, const std::pair<int, Face>& y) {
  if (x.first != y.first) return x.first < y.first;
  return x.second < y.second;
}

inline FacePoset face_poset(const SimplicialComplex& c) {
  FacePoset p;
  auto fs = c.faces();
  for (std::size_t i = 0; i < fs.size(); ++i) {
    p.index[fs[i]] = static_cast<int>(i);
    p.dim.push_back(static_cast<int>(fs[i].size()) - 1);
    p.verts.push_back(fs[i]);
  }
  p.down.assign(fs.size(), {});
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (fs[i].size() < 2) continue;
    for (std::size_t skip = 0; skip < fs[i].size(); ++skip) {
      Face g;
      for (std::size_t j = 0; j < fs[i].size(); ++j)
        if (j != skip) g.push_back(fs[i][j]);
      p.down[i].push_back(p.index.at(g));
    }
    std::sort(p.down[i].begin(), p.down[i].end());
  }
  p.finish();
  return p;
}

inline FacePoset face_poset(const CubicalComplex& c) {
  auto fm = c.face_map();
  std::vector<std::pair<int, Face>> order;
  for (auto& [k, q] : fm) order.push_back({q.dim, k});
  std::sort(order.begin(), order.end(), face_order_less);
  FacePoset p;
  for (std::size_t i = 0; i < order.size(); ++i) {
    p.index[order[i].second] = static_cast<int>(i);
    p.dim.push_back(order[i].first);
    p.verts.push_back(order[i].second);
  }
  p.down.assign(order.size(), {});
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Cube& q = fm.at(order[i].second);
    for (int b = 0; b < q.dim; ++b)
      for (unsigned val = 0; val < 2; ++val) {
        Cube s = CubicalComplex::subcube(q, 1u << b, val << b);
        p.down[i].push_back(p.index.at(sorted_face(s.corners)));
      }
    std::sort(p.down[i].begin(), p.down[i].end());
  }
  p.finish();
  return p;
}

/**
 * Order complex of a graded poset given by down-covers: vertices are the
 * elements, facets the maximal chains.
 */
inline SimplicialComplex order_complex(std::size_t n, const std::vector<std::vector<int>>& down,
                                       const std::vector<std::vector<int>>& up) {
  std::vector<Face> chains;
  std::function<void(int, Face&)> descend = [&](int x, Face& chain) {
    chain.push_back(x);
    if (down[x].empty()) chains.push_back(chain);
    for (int y : down[x]) descend(y, chain);
    chain.pop_back();
  };
  for (std::size_t x = 0; x < n; ++x)
    if (up[x].empty()) {
      Face chain;
      descend(static_cast<int>(x), chain);
    }
  return SimplicialComplex::from_facets(static_cast<int>(n), chains);
}

/** Order complex of an arbitrary finite poset given by a strict order predicate. */
inline SimplicialComplex order_complex(std::size_t n, const std::function<bool(int, int)>& less) {
  std::vector<std::vector<int>> down(n), up(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (!less(static_cast<int>(a), static_cast<int>(b))) continue;
      bool cover = true;
      for (std::size_t m = 0; m < n && cover; ++m)
        if (less(static_cast<int>(a), static_cast<int>(m)) &&
            less(static_cast<int>(m), static_cast<int>(b)))
          cover = false;
      if (cover) {
        down[b].push_back(static_cast<int>(a));
        up[a].push_back(static_cast<int>(b));
      }
    }
  if (n == 0) return SimplicialComplex{};
  return order_complex(n, down, up);
}

inline SimplicialComplex derived_subdivision(const FacePoset& p) {
  return order_complex(p.size(), p.down, p.up);
}
inline SimplicialComplex derived_subdivision(const SimplicialComplex& c) {
  return derived_subdivision(face_poset(c));
}
inline SimplicialComplex derived_subdivision(const CubicalComplex& c) {
  return derived_subdivision(face_poset(c));
}

/** The standard k-cube on vertices 0..2^k-1 with corner index = vertex id. */
inline CubicalComplex unit_cube(int k) {
  CubicalComplex c;
  c.num_vertices = 1 << k;
  Cube q;
  q.dim = k;
  for (int i = 0; i < (1 << k); ++i) q.corners.push_back(i);
  c.cubes = {q};
  return c;
}

// JSON: {"vertices": n, "facets": [[ids]]} and {"vertices": n, "cubes": [{"dim":k,"corners":[..]}]}

inline nlohmann::json to_json_value(const SimplicialComplex& c) {
  return {{"vertices", c.num_vertices}, {"facets", c.facets}};
}

inline SimplicialComplex simplicial_from_json(const nlohmann::json& j) {
  if (!j.contains("facets")) throw complex_error("complex JSON lacks \"facets\"");
  auto fs = j.at("facets").get<std::vector<Face>>();
  int n = 0;
  if (j.contains("vertices")) n = j.at("vertices").get<int>();
  for (auto& f : fs)
    for (int v : f) n = std::max(n, v + 1);
  return SimplicialComplex::from_facets(n, fs);
}

inline nlohmann::json to_json_value(const CubicalComplex& c) {
  nlohmann::json cubes = nlohmann::json::array();
  for (auto& q : c.cubes) cubes.push_back({{"dim", q.dim}, {"corners", q.corners}});
  return {{"vertices", c.num_vertices}, {"cubes", cubes}};
}

inline CubicalComplex cubical_from_json(const nlohmann::json& j) {
  CubicalComplex c;
  c.num_vertices = j.value("vertices", 0);
  for (auto& q : j.at("cubes")) {
    Cube cube;
    cube.dim = q.at("dim").get<int>();
    cube.corners = q.at("corners").get<std::vector<int>>();
    for (int v : cube.corners) c.num_vertices = std::max(c.num_vertices, v + 1);
    c.cubes.push_back(cube);
  }
  return c;
}

}  // namespace polyforge
