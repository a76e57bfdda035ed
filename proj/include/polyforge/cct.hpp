#pragma once

#include <nlohmann/json.hpp>

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyforge/complexcore.hpp"
#include "polyforge/exactfield.hpp"

namespace polyforge {

struct cct_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Abstract tori

/**
 * Vertex (x,y,z) of the cubical lattice in canonical coordinates (layer, a, b):
 * v - (layer,0,0) = a(-1,1,0) + b(0,-1,1), reduced modulo the quotient lattice,
 * which reads (-3,0) and (2,4) in (a,b). Representatives: 0 <= a < 3, 0 <= b < 4.
 */
struct LatticeVertex {
  int layer, a, b;
};

inline long floor_div(long x, long m) { return (x >= 0) ? x / m : -((-x + m - 1) / m); }

inline LatticeVertex canonical_vertex(long x, long y, long z) {
  long l = x + y + z, a = y + z, b = z;
  long q = floor_div(b, 4);
  a -= 2 * q;
  b -= 4 * q;
  a = ((a % 3) + 3) % 3;
  return {static_cast<int>(l), static_cast<int>(a), static_cast<int>(b)};
}

inline int vertex_id(int layer, int a, int b) { return layer * 12 + b * 3 + a; }

inline std::array<long, 3> representative(int layer, int a, int b) {
  return {layer - a, a - b, b};
}

struct AbstractCCT {
  int width = 0;
  CubicalComplex complex;
  std::vector<int> layer;  // by vertex id

  int num_vertices() const { return 12 * (width + 1); }

  LatticeVertex coords_of(int id) const { return {id / 12, id % 3, (id % 12) / 3}; }

  std::array<long, 3> rep(int id) const {
    auto c = coords_of(id);
    return representative(c.layer, c.a, c.b);
  }

  /** Vertex id of a lattice point, or -1 outside layers 0..width. */
  int at(long x, long y, long z) const {
    auto c = canonical_vertex(x, y, z);
    if (c.layer < 0 || c.layer > width) return -1;
    return vertex_id(c.layer, c.a, c.b);
  }

  int shifted(int id, std::array<long, 3> d) const {
    auto r = rep(id);
    return at(r[0] + d[0], r[1] + d[1], r[2] + d[2]);
  }
};

inline AbstractCCT abstract_cct(int k) {
  if (k < 0) throw cct_error("width must be nonnegative");
  AbstractCCT t;
  t.width = k;
  t.complex.num_vertices = 12 * (k + 1);
  for (int v = 0; v < t.complex.num_vertices; ++v) t.layer.push_back(v / 12);
  int m = std::min(k, 3);
  std::vector<std::vector<int>> dirs;
  for (unsigned s = 0; s < 8; ++s)
    if (__builtin_popcount(s) == m) {
      std::vector<int> d;
      for (int i = 0; i < 3; ++i)
        if (s & (1u << i)) d.push_back(i);
      dirs.push_back(d);
    }
  for (int l = 0; l + m <= k; ++l)
    for (int b = 0; b < 4; ++b)
      for (int a = 0; a < 3; ++a)
        for (auto& d : dirs) {
          Cube q;
          q.dim = m;
          auto r = representative(l, a, b);
          for (unsigned mask = 0; mask < (1u << m); ++mask) {
            auto p = r;
            for (int i = 0; i < m; ++i)
              if (mask & (1u << i)) ++p[d[i]];
            q.corners.push_back(t.at(p[0], p[1], p[2]));
          }
          t.complex.cubes.push_back(q);
        }
  return t;
}

// ---------------------------------------------------------------------------
// Rotations

/** r34^e r12^b. */
inline const MatF& rotation(int e, int b) {
  static const std::vector<MatF> table = [] {
    std::vector<MatF> t;
    for (int ee = 0; ee < 6; ++ee)
      for (int bb = 0; bb < 4; ++bb)
        t.push_back(mat_pow(rotation_r34(), ee) * mat_pow(rotation_r12(), bb));
    return t;
  }();
  return table[(((e % 6) + 6) % 6) * 4 + ((b % 4) + 4) % 4];
}

/** Symmetry carried by translation in the (a,b) coordinates of a layer. */
inline const MatF& psi(int a, int b) { return rotation(-2 * a + b, b); }

/** The twelve elements r34^e r12^b with e = b mod 2. */
inline std::vector<MatF> symmetry_group() {
  std::vector<MatF> g;
  for (int e = 0; e < 6; ++e)
    for (int b = 0; b < 4; ++b)
      if ((e - b) % 2 == 0) g.push_back(rotation(e, b));
  return g;
}

// ---------------------------------------------------------------------------
// Clifford parameters and the iteration

inline Vec5 theta0() { return {FieldElem(-1, 1, 0, 0), FieldElem(1, -1, 0, 0), 2, 0, 1}; }
inline Vec5 theta1() { return {1, 0, 1, 0, 1}; }

/** λ = 2(y3²+y4²)/(y1²+y2²+y3²+y4²) of the equatorial projection. */
inline FieldElem clifford_lambda_exact(const Vec5& p) {
  FieldElem num = p[2] * p[2] + p[3] * p[3];
  FieldElem den = p[0] * p[0] + p[1] * p[1] + num;
  if (den.is_zero()) throw cct_error("undefined-projection");
  return FieldElem(2) * num / den;
}

inline double clifford_lambda(const Vec5& p) { return clifford_lambda_exact(p).to_double(); }

inline FieldElem mu(const Vec5& a, const Vec5& b) {
  const FieldElem &a1 = a[0], &a2 = a[1], &a3 = a[2], &b1 = b[0], &b2 = b[1], &b3 = b[2];
  if (b3.is_zero()) throw cct_error("degenerate-denominator");
  FieldElem two(2), three(3);
  FieldElem num = (a3 * b3 - two * b3 * b3) * b2 + (a3 * b3 - b3 * b3) * b1 - a2 * b3 * b3;
  FieldElem den = two * (a3 * b3 - b3 * b3) * a1 - (two * a3 * b3 - b3 * b3) * a2 -
                  (two * a3 * a3 - three * a3 * b3 + b3 * b3) * b1 -
                  (two * a3 * a3 - three * a3 * b3 + two * b3 * b3) * b2;
  if (den.is_zero()) throw cct_error("degenerate-denominator");
  return num / den;
}

inline Vec5 iterate(const Vec5& a, const Vec5& b) {
  FieldElem m = mu(a, b);
  Vec5 x = rotation(1, 1) * b, y = rotation(-1, 1) * b;
  Vec5 c;
  FieldElem half(Rat(1, 2));
  for (int i = 0; i < 5; ++i) c[i] = m * a[i] + (FieldElem(1) - m) * (x[i] + y[i]) * half;
  if (c[4].is_zero()) throw cct_error("point-at-infinity");
  return dehomogenize(c);
}

/** κ_0 .. κ_upto with κ_{k+1} = r12² i(κ_{k-1}, κ_k). */
inline std::vector<Vec5> kappa_chain(int upto) {
  std::vector<Vec5> k{theta0(), rotation(0, 2) * theta1()};
  while (static_cast<int>(k.size()) <= upto)
    k.push_back(rotation(0, 2) * iterate(k[k.size() - 2], k.back()));
  k.resize(std::max(upto + 1, 0));
  return k;
}

// ---------------------------------------------------------------------------
// Geometric tori

struct GeoCCT {
  AbstractCCT abs;
  std::vector<Vec5> coords;  // by vertex id, last coordinate 1
  std::vector<Vec5> kappa;   // κ_0 .. κ_width

  int width() const { return abs.width; }
  const Vec5& at(long x, long y, long z) const {
    int id = abs.at(x, y, z);
    if (id < 0) throw cct_error("vertex outside the torus");
    return coords[id];
  }
};

/** The seed 1-torus: layer 0 from ϑ0, layer 1 from ϑ1, spread by the symmetries. */
inline GeoCCT seed_ct1() {
  GeoCCT t;
  t.abs = abstract_cct(1);
  t.coords.resize(24);
  Vec5 base1 = rotation(1, -1) * theta1();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 4; ++b) {
      t.coords[vertex_id(0, a, b)] = psi(a, b) * theta0();
      t.coords[vertex_id(1, a, b)] = psi(a, b) * base1;
    }
  t.kappa = kappa_chain(1);
  return t;
}

/**
 * Solves for the vertex w from the three squares of the cube below it: w lies in
 * the linear span of each square's three known corners.
 */
inline Vec5 reconstruct_vertex(const GeoCCT& t, std::array<long, 3> w) {
  std::array<std::array<Vec5, 3>, 3> quads;
  const int pairs[3][2] = {{0, 1}, {1, 2}, {0, 2}};
  for (int q = 0; q < 3; ++q) {
    int i = pairs[q][0], j = pairs[q][1];
    auto wi = w, wj = w, wij = w;
    --wi[i];
    --wj[j];
    --wij[i];
    --wij[j];
    quads[q] = {t.at(wi[0], wi[1], wi[2]), t.at(wij[0], wij[1], wij[2]), t.at(wj[0], wj[1], wj[2])};
  }
  // Σα q0 = Σβ q1 and Σα q0 = Σγ q2
  MatF m(10, 9);
  for (int blk = 0; blk < 2; ++blk)
    for (int r = 0; r < 5; ++r) {
      for (int c = 0; c < 3; ++c) {
        m(5 * blk + r, c) = quads[0][c][r];
        m(5 * blk + r, 3 * (blk + 1) + c) = -quads[blk + 1][c][r];
      }
    }
  auto ker = nullspace(m);
  if (ker.size() != 1) throw cct_error("degenerate geometry: reconstruction kernel has dimension " +
                                       std::to_string(ker.size()));
  Vec5 x{};
  for (int c = 0; c < 3; ++c)
    for (int r = 0; r < 5; ++r) x[r] += ker[0][c] * quads[0][c][r];
  if (x[4].is_zero()) throw cct_error("point-at-infinity");
  return dehomogenize(x);
}

inline bool same_point(const Vec5& x, const Vec5& y) { return x == y; }

/** Rank of the 8x5 vertex matrix of a cube. */
inline std::size_t cube_rank(const GeoCCT& t, const Cube& q) {
  MatF m(q.corners.size(), 5);
  for (std::size_t i = 0; i < q.corners.size(); ++i)
    for (int j = 0; j < 5; ++j) m(i, j) = t.coords[q.corners[i]][j];
  return rank(m);
}

bool check_symmetric(const GeoCCT& t, std::string* why = nullptr);
bool check_transversal(const GeoCCT& t, std::string* why = nullptr);
bool check_slope_obtuse(const GeoCCT& t, std::string* why = nullptr);
bool check_oriented(const GeoCCT& t, std::string* why = nullptr);

/**
 * One more layer. Every new vertex is reconstructed from its cube; the layer must
 * be the symmetry orbit of its base vertex and contain the next κ.
 */
inline GeoCCT extend(const GeoCCT& t, bool check = true) {
  int k = t.width();
  if (k < 1) throw cct_error("extension needs width at least 1");
  if (check && k >= 3) {
    std::string why;
    if (!check_symmetric(t, &why) || !check_transversal(t, &why) ||
        !check_slope_obtuse(t, &why) || !check_oriented(t, &why))
      throw cct_error("predicate-failure: " + why);
  }
  GeoCCT n;
  n.abs = abstract_cct(k + 1);
  n.coords = t.coords;
  n.coords.resize(12 * (k + 2));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 4; ++b)
      n.coords[vertex_id(k + 1, a, b)] = reconstruct_vertex(t, representative(k + 1, a, b));
  const Vec5& base = n.coords[vertex_id(k + 1, 0, 0)];
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 4; ++b)
      if (!same_point(psi(a, b) * base, n.coords[vertex_id(k + 1, a, b)]))
        throw cct_error("degenerate geometry: new layer is not a symmetry orbit");
  n.kappa = t.kappa;
  if (static_cast<int>(n.kappa.size()) < k + 1) n.kappa = kappa_chain(k);
  n.kappa.push_back(rotation(0, 2) * iterate(n.kappa[k - 1], n.kappa[k]));
  bool found = false;
  for (int i = 0; i < 12 && !found; ++i) found = same_point(n.coords[12 * (k + 1) + i], n.kappa.back());
  if (!found) throw cct_error("iteration formula disagrees with the reconstruction");
  for (auto& q : n.abs.complex.cubes)
    if (n.abs.layer[q.corners.back()] == k + 1 && cube_rank(n, q) != static_cast<std::size_t>(q.dim + 1))
      throw cct_error("non-coplanar-facet in new layer");
  return n;
}

/** CT^s[n] from the seed by n-1 extensions. */
inline GeoCCT generate_cct(int n, bool check = true) {
  if (n < 1) throw cct_error("n must be at least 1");
  GeoCCT t = seed_ct1();
  while (t.width() < n) t = extend(t, check);
  return t;
}

inline GeoCCT seed_ct3() { return generate_cct(3); }

// ---------------------------------------------------------------------------
// Predicates. Everything is decided on the first four coordinates (the control torus).

namespace detail {

struct V2 {
  FieldElem x, y;
};
inline V2 pi0(const Vec5& p) { return {p[0], p[1]}; }
inline V2 pi2(const Vec5& p) { return {p[2], p[3]}; }
inline FieldElem cross(const V2& u, const V2& v) { return u.x * v.y - u.y * v.x; }
inline FieldElem dot2(const V2& u, const V2& v) { return u.x * v.x + u.y * v.y; }
inline bool same_dir(const V2& u, const V2& v) {
  return cross(u, v).is_zero() && dot2(u, v).sign() > 0;
}
/** x strictly inside the short arc from a to b. */
inline bool in_relint(const V2& x, const V2& a, const V2& b) {
  FieldElem d = cross(a, b);
  if (d.is_zero()) return false;
  int s = d.sign();
  return cross(x, b).sign() * s > 0 && cross(a, x).sign() * s > 0;
}
/** Some open half-plane contains all the vectors. */
inline bool open_half_plane(const std::vector<V2>& vs) {
  for (auto& v : vs)
    if (v.x.is_zero() && v.y.is_zero()) return false;
  // candidate normals: each vector, and perpendiculars of pairwise boundaries
  std::vector<V2> cands;
  for (auto& v : vs) cands.push_back(v);
  for (auto& u : vs)
    for (auto& v : vs) {
      V2 pu{-u.y, u.x}, pv{v.y, -v.x};
      cands.push_back({pu.x + pv.x, pu.y + pv.y});
      cands.push_back(pu);
      cands.push_back(pv);
    }
  for (auto& n : cands) {
    bool ok = true;
    for (auto& v : vs)
      if (dot2(n, v).sign() <= 0) {
        ok = false;
        break;
      }
    if (ok) return true;
  }
  return false;
}

}  // namespace detail

inline bool check_fixed_point_free(const GeoCCT& t, std::string* why = nullptr) {
  for (std::size_t i = 0; i < t.coords.size(); ++i) {
    auto& p = t.coords[i];
    if ((p[0].is_zero() && p[1].is_zero()) || (p[2].is_zero() && p[3].is_zero())) {
      if (why) *why = "vertex " + std::to_string(i) + " lies on a Clifford circle";
      return false;
    }
  }
  return true;
}

/**
 * The torus translations act as rotations: t2 as r34 r12, (1,-1,0) as r34², and
 * the swap of the first two lattice coordinates as the reflection of e4.
 */
inline bool check_symmetric(const GeoCCT& t, std::string* why) {
  const MatF s = reflection_e4();
  for (int id = 0; id < t.abs.num_vertices(); ++id) {
    auto r = t.abs.rep(id);
    const Vec5& p = t.coords[id];
    if (!same_point(t.at(r[0], r[1] - 1, r[2] + 1), rotation(1, 1) * p) ||
        !same_point(t.at(r[0] + 1, r[1] - 1, r[2]), rotation(2, 0) * p) ||
        !same_point(t.at(r[1], r[0], r[2]), s * p)) {
      if (why) *why = "symmetry-violation at vertex " + std::to_string(id);
      return false;
    }
  }
  return check_fixed_point_free(t, why);
}

/**
 * Local injectivity criterion for the Clifford projection around every vertex of
 * the bottom layer of each window of three consecutive layers.
 */
inline bool check_transversal(const GeoCCT& t, std::string* why) {
  using namespace detail;
  if (!check_symmetric(t, why)) throw cct_error("symmetry-violation");
  const std::array<std::array<long, 3>, 3> E{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  for (int l = 0; l + 2 <= t.width(); ++l)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 4; ++b) {
        auto r = representative(l, a, b);
        auto P = [&](std::array<long, 3> d) -> const Vec5& {
          return t.at(r[0] + d[0], r[1] + d[1], r[2] + d[2]);
        };
        const Vec5& v = P({0, 0, 0});
        int iu = -1;
        for (int i = 0; i < 3; ++i)
          if (same_dir(pi2(P(E[i])), pi2(v))) iu = i;
        bool ok = false;
        if (iu >= 0)
          for (int swap = 0; swap < 2 && !ok; ++swap) {
            int iq = (iu + 1 + swap) % 3, ir = (iu + 2 - swap) % 3;
            auto add = [&](int i, int j) {
              std::array<long, 3> d{0, 0, 0};
              ++d[i];
              ++d[j];
              return d;
            };
            const Vec5 &u = P(E[iu]), &q = P(E[iq]), &rr = P(E[ir]);
            const Vec5 &tt = P(add(iu, iq)), &s = P(add(iu, ir)), &p = P(add(iq, ir));
            std::vector<std::array<const Vec5*, 4>> quads{{&u, &tt, &v, &q}, {&u, &s, &v, &rr},
                                                          {&p, &q, &v, &rr}};
            bool cond_a = true;
            for (auto& qd : quads) {
              std::vector<V2> p0s, p2s;
              for (auto* x : qd) {
                p0s.push_back(pi0(*x));
                p2s.push_back(pi2(*x));
              }
              cond_a = cond_a && open_half_plane(p0s) && open_half_plane(p2s);
            }
            bool cond_b = same_dir(pi2(s), pi2(rr)) && same_dir(pi2(p), pi2(v)) &&
                          same_dir(pi2(v), pi2(u)) && same_dir(pi2(tt), pi2(q));
            bool cond_c = same_dir(pi0(tt), pi0(s)) && same_dir(pi0(q), pi0(rr));
            bool cond_d = in_relint(pi2(p), pi2(s), pi2(tt));
            bool cond_e = in_relint(pi0(v), pi0(u), pi0(p)) && in_relint(pi0(rr), pi0(u), pi0(p));
            bool cond_f = in_relint(pi0(s), pi0(u), pi0(rr));
            ok = cond_a && cond_b && cond_c && cond_d && cond_e && cond_f;
          }
        if (!ok) {
          if (why)
            *why = "transversality criterion fails at layer " + std::to_string(l) + " vertex " +
                   std::to_string(vertex_id(l, a, b));
          return false;
        }
      }
  return true;
}

struct SlopeReport {
  FieldElem cos_numerator;  // sign of cos α
  double angle = 0;         // radians, report only
  bool obtuse = false;
};

/** Slope of the top window: angle at m = mid(s, r34² s) between [m, π0(m)] and [m, u]. */
inline SlopeReport slope(const GeoCCT& t) {
  if (t.width() < 2) throw cct_error("slope needs width at least 2");
  int k = t.width();
  auto r = representative(k, 0, 0);
  const Vec5& s = t.at(r[0], r[1], r[2]);
  const Vec5& tt = t.at(r[0] + 1, r[1] - 1, r[2]);
  if (!same_point(tt, rotation(2, 0) * s)) throw cct_error("symmetry-violation");
  const Vec5& u = t.at(r[0], r[1] - 1, r[2]);
  Vec m(4), w(4), uu(4);
  for (int i = 0; i < 4; ++i) {
    m[i] = s[i] + tt[i];
    uu[i] = u[i];
  }
  w[0] = m[0];
  w[1] = m[1];
  FieldElem mm = dot(m, m), wm = dot(w, m), um = dot(uu, m), wu = dot(w, uu);
  SlopeReport rep;
  rep.cos_numerator = mm * wu - wm * um;
  rep.obtuse = rep.cos_numerator.sign() < 0;
  // float angle between the two tangent vectors at m
  std::array<double, 4> tw{}, tu{};
  double mmd = mm.to_double();
  for (int i = 0; i < 4; ++i) {
    tw[i] = w[i].to_double() - wm.to_double() / mmd * m[i].to_double();
    tu[i] = uu[i].to_double() - um.to_double() / mmd * m[i].to_double();
  }
  double d = 0, nw = 0, nu = 0;
  for (int i = 0; i < 4; ++i) {
    d += tw[i] * tu[i];
    nw += tw[i] * tw[i];
    nu += tu[i] * tu[i];
  }
  rep.angle = std::acos(std::max(-1.0, std::min(1.0, d / std::sqrt(nw * nu))));
  return rep;
}

inline bool check_slope_obtuse(const GeoCCT& t, std::string* why) {
  if (!check_symmetric(t, why)) throw cct_error("symmetry-violation");
  bool ok = slope(t).obtuse;
  if (!ok && why) *why = "slope is not obtuse";
  return ok;
}

/** The top layer lies strictly closer to C0 than the layer below it, compared via λ. */
inline bool check_oriented(const GeoCCT& t, std::string* why) {
  if (!check_symmetric(t, why)) throw cct_error("symmetry-violation");
  int k = t.width();
  if (k < 1) return true;
  FieldElem top = clifford_lambda_exact(t.coords[vertex_id(k, 0, 0)]);
  FieldElem below = clifford_lambda_exact(t.coords[vertex_id(k - 1, 0, 0)]);
  bool ok = top < below;
  if (!ok && why) *why = "top layer is not oriented towards C0";
  return ok;
}

struct ConvexCertificate {
  std::vector<Vec5> normals;  // one per cube, all other vertices strictly negative
};

inline ConvexCertificate check_convex_position(const GeoCCT& t) {
  if (t.width() < 3) throw cct_error("convex position needs width at least 3");
  ConvexCertificate cert;
  for (std::size_t ci = 0; ci < t.abs.complex.cubes.size(); ++ci) {
    auto& q = t.abs.complex.cubes[ci];
    MatF m(q.corners.size(), 5);
    for (std::size_t i = 0; i < q.corners.size(); ++i)
      for (int j = 0; j < 5; ++j) m(i, j) = t.coords[q.corners[i]][j];
    auto ker = nullspace(m);
    if (ker.size() != 1) throw cct_error("non-coplanar-facet: cube " + std::to_string(ci));
    Vec5 n = to_vec5(ker[0]);
    int orient = 0;
    std::vector<char> on(t.coords.size(), 0);
    for (int v : q.corners) on[v] = 1;
    for (std::size_t v = 0; v < t.coords.size(); ++v) {
      if (on[v]) continue;
      int s = dot(n, t.coords[v]).sign();
      if (s == 0 || (orient != 0 && s != orient))
        throw cct_error("exposure-failure: cube " + std::to_string(ci) + " witness vertex " +
                        std::to_string(v));
      orient = s;
    }
    if (orient > 0)
      for (auto& x : n) x = -x;
    cert.normals.push_back(n);
  }
  return cert;
}

// ---------------------------------------------------------------------------
// The polytope

struct CCTPReport {
  int n = 0;
  std::vector<Vec5> vertices;
  std::vector<int> layers;
  ConvexCertificate certificate;
  int rs_bound = 0;  // 4 f0(CT^s[1])
};

inline CCTPReport cctp(int n) {
  if (n < 1) throw cct_error("n must be at least 1");
  GeoCCT t = generate_cct(n);
  CCTPReport r;
  r.n = n;
  r.vertices = t.coords;
  r.layers = t.abs.layer;
  if (n >= 3) r.certificate = check_convex_position(t);
  r.rs_bound = 4 * 24;
  return r;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json_value(const GeoCCT& t) {
  nlohmann::json vs = nlohmann::json::array();
  for (int id = 0; id < t.abs.num_vertices(); ++id) {
    auto c = t.abs.coords_of(id);
    vs.push_back({{"id", id},
                  {"layer", c.layer},
                  {"a", c.a},
                  {"b", c.b},
                  {"coords", vec_to_json(t.coords[id])}});
  }
  nlohmann::json kap = nlohmann::json::array();
  for (auto& k : t.kappa) kap.push_back(vec_to_json(k));
  return {{"width", t.width()}, {"vertices", vs}, {"kappa", kap}};
}

inline GeoCCT geocct_from_json(const nlohmann::json& j) {
  GeoCCT t;
  t.abs = abstract_cct(j.at("width").get<int>());
  t.coords.resize(t.abs.num_vertices());
  std::vector<char> seen(t.coords.size(), 0);
  for (auto& v : j.at("vertices")) {
    int id = v.at("id").get<int>();
    if (id < 0 || id >= t.abs.num_vertices()) throw cct_error("vertex id out of range");
    t.coords[id] = to_vec5(vec_from_json(v.at("coords")));
    seen[id] = 1;
  }
  for (char s : seen)
    if (!s) throw cct_error("missing vertex coordinates");
  if (j.contains("kappa"))
    for (auto& k : j.at("kappa")) t.kappa.push_back(to_vec5(vec_from_json(k)));
  return t;
}

}  // namespace polyforge
