#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyforge/complexcore.hpp"
#include "polyforge/exactfield.hpp"

namespace polyforge {

struct arrangement_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using RatVec = std::vector<Rat>;

/**
 * Affine subspace {x : A x = b} of Q^d. The augmented system [A|b] is kept in
 * reduced row echelon form, which makes equality a plain comparison.
 */
class AffineSubspace {
 public:
  int ambient_dim = 0;
  MatQ eqs;  // rows [a | b], rref, no zero rows

  AffineSubspace() = default;

  static AffineSubspace whole(int d) {
    AffineSubspace s;
    s.ambient_dim = d;
    s.eqs = MatQ(0, d + 1);
    return s;
  }

  /** From equations A x = b; returns nullopt if inconsistent. */
  static std::optional<AffineSubspace> from_equations(int d, const std::vector<RatVec>& A,
                                                      const RatVec& b) {
    MatQ m(A.size(), d + 1);
    for (std::size_t i = 0; i < A.size(); ++i) {
      if (static_cast<int>(A[i].size()) != d) throw arrangement_error("dimension mismatch");
      for (int j = 0; j < d; ++j) m(i, j) = A[i][j];
      m(i, d) = b[i];
    }
    return canonical(d, std::move(m));
  }

  /** offset + span(basis). */
  static AffineSubspace from_basis(const std::vector<RatVec>& basis, const RatVec& offset) {
    int d = static_cast<int>(offset.size());
    MatQ B(basis.size(), d);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (static_cast<int>(basis[i].size()) != d) throw arrangement_error("dimension mismatch");
      for (int j = 0; j < d; ++j) B(i, j) = basis[i][j];
    }
    if (rank(B) != basis.size()) throw arrangement_error("basis not linearly independent");
    std::vector<RatVec> normals = B.rows ? nullspace(B) : std::vector<RatVec>{};
    if (!B.rows) {
      for (int i = 0; i < d; ++i) {
        RatVec e(d);
        e[i] = 1;
        normals.push_back(e);
      }
    }
    RatVec rhs;
    for (auto& n : normals) rhs.push_back(dot(n, offset));
    return *from_equations(d, normals, rhs);
  }

  int dim() const { return ambient_dim - static_cast<int>(eqs.rows); }

  std::vector<RatVec> normals() const {
    std::vector<RatVec> r;
    for (std::size_t i = 0; i < eqs.rows; ++i) {
      auto row = eqs.row(i);
      row.pop_back();
      r.push_back(row);
    }
    return r;
  }
  RatVec rhs() const {
    RatVec r;
    for (std::size_t i = 0; i < eqs.rows; ++i) r.push_back(eqs(i, ambient_dim));
    return r;
  }

  /** Some point of the subspace: free coordinates set to zero. */
  RatVec offset() const {
    RatVec x;
    MatQ A(eqs.rows, ambient_dim);
    for (std::size_t i = 0; i < eqs.rows; ++i)
      for (int j = 0; j < ambient_dim; ++j) A(i, j) = eqs(i, j);
    solve_linear(A, rhs(), x);
    return x;
  }

  std::vector<RatVec> basis() const {
    if (eqs.rows == 0) {
      std::vector<RatVec> r;
      for (int i = 0; i < ambient_dim; ++i) {
        RatVec e(ambient_dim);
        e[i] = 1;
        r.push_back(e);
      }
      return r;
    }
    MatQ A(eqs.rows, ambient_dim);
    for (std::size_t i = 0; i < eqs.rows; ++i)
      for (int j = 0; j < ambient_dim; ++j) A(i, j) = eqs(i, j);
    return nullspace(A);
  }

  bool contains_point(const RatVec& x) const {
    for (std::size_t i = 0; i < eqs.rows; ++i) {
      Rat s = 0;
      for (int j = 0; j < ambient_dim; ++j) s += eqs(i, j) * x[j];
      if (s != eqs(i, ambient_dim)) return false;
    }
    return true;
  }

  std::string key() const {
    std::string k = std::to_string(ambient_dim) + "|";
    for (auto& x : eqs.e) k += rat_str(x) + ",";
    return k;
  }

  friend bool operator==(const AffineSubspace& x, const AffineSubspace& y) {
    return x.ambient_dim == y.ambient_dim && x.eqs == y.eqs;
  }

  static std::optional<AffineSubspace> canonical(int d, MatQ m) {
    auto piv = rref(m);
    if (!piv.empty() && piv.back() == static_cast<std::size_t>(d)) return std::nullopt;
    AffineSubspace s;
    s.ambient_dim = d;
    s.eqs = MatQ(piv.size(), d + 1);
    for (std::size_t i = 0; i < piv.size(); ++i)
      for (int j = 0; j <= d; ++j) s.eqs(i, j) = m(i, j);
    return s;
  }
};

inline std::optional<AffineSubspace> intersect(const AffineSubspace& x, const AffineSubspace& y) {
  if (x.ambient_dim != y.ambient_dim) throw arrangement_error("dimension mismatch");
  int d = x.ambient_dim;
  MatQ m(x.eqs.rows + y.eqs.rows, d + 1);
  for (std::size_t i = 0; i < x.eqs.rows; ++i)
    for (int j = 0; j <= d; ++j) m(i, j) = x.eqs(i, j);
  for (std::size_t i = 0; i < y.eqs.rows; ++i)
    for (int j = 0; j <= d; ++j) m(x.eqs.rows + i, j) = y.eqs(i, j);
  return AffineSubspace::canonical(d, std::move(m));
}

inline bool is_contained(const AffineSubspace& small, const AffineSubspace& big) {
  auto m = intersect(small, big);
  return m && *m == small;
}

/** Nonempty intersections of nonempty subfamilies, ordered by reverse inclusion. */
struct IntersectionPoset {
  int ambient_dim = 0;
  std::vector<AffineSubspace> nodes;
  std::vector<std::vector<char>> below;  // below[p][q]: q strictly contains p

  std::size_t size() const { return nodes.size(); }

  /** Indices q with q strictly containing p, i.e. P_{<p}. */
  std::vector<int> lower_set(int p) const {
    std::vector<int> r;
    for (std::size_t q = 0; q < size(); ++q)
      if (below[p][q]) r.push_back(static_cast<int>(q));
    return r;
  }

  int find(const AffineSubspace& s) const {
    for (std::size_t i = 0; i < size(); ++i)
      if (nodes[i] == s) return static_cast<int>(i);
    return -1;
  }
};

inline IntersectionPoset intersection_poset(const std::vector<AffineSubspace>& arr) {
  IntersectionPoset P;
  if (arr.empty()) return P;
  P.ambient_dim = arr[0].ambient_dim;
  std::map<std::string, int> seen;
  auto add = [&](const AffineSubspace& s) {
    auto [it, fresh] = seen.emplace(s.key(), static_cast<int>(P.nodes.size()));
    if (fresh) P.nodes.push_back(s);
    return fresh;
  };
  for (auto& a : arr) {
    if (a.ambient_dim != P.ambient_dim) throw arrangement_error("dimension mismatch");
    add(a);
  }
  for (std::size_t i = 0; i < P.nodes.size(); ++i)
    for (auto& a : arr) {
      auto m = intersect(P.nodes[i], a);
      if (m) add(*m);
    }
  std::vector<std::size_t> order(P.nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return P.nodes[x].dim() > P.nodes[y].dim();
  });
  std::vector<AffineSubspace> sorted;
  for (auto i : order) sorted.push_back(P.nodes[i]);
  P.nodes = std::move(sorted);
  std::size_t n = P.nodes.size();
  P.below.assign(n, std::vector<char>(n, 0));
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      if (p != q && P.nodes[q].dim() > P.nodes[p].dim() && is_contained(P.nodes[p], P.nodes[q]))
        P.below[p][q] = 1;
  return P;
}

/** Order complex of P_{<p}, vertices numbered by position in lower_set(p). */
inline SimplicialComplex lower_order_complex(const IntersectionPoset& P, int p) {
  auto L = P.lower_set(p);
  if (L.empty()) return SimplicialComplex::from_facets(0, {Face{}});
  return order_complex(L.size(), [&](int a, int b) {
    // a below b in reverse inclusion: a strictly contains b
    return P.below[L[b]][L[a]] != 0;
  });
}

// ---------------------------------------------------------------------------
// Rational simplicial homology

namespace detail {

inline MatQ boundary_matrix(const std::vector<Face>& rows_faces, const std::vector<Face>& cols_faces) {
  std::map<Face, std::size_t> index;
  for (std::size_t i = 0; i < rows_faces.size(); ++i) index[rows_faces[i]] = i;
  MatQ m(rows_faces.size(), cols_faces.size());
  for (std::size_t j = 0; j < cols_faces.size(); ++j) {
    const Face& f = cols_faces[j];
    for (std::size_t k = 0; k < f.size(); ++k) {
      Face g;
      for (std::size_t t = 0; t < f.size(); ++t)
        if (t != k) g.push_back(f[t]);
      m(index.at(g), j) = (k % 2 ? -1 : 1);
    }
  }
  return m;
}

}  // namespace detail

/** Reduced Betti numbers over Q for k = -1..dim; index 0 of the result is k = -1. */
inline std::vector<int> reduced_betti_numbers(const SimplicialComplex& c) {
  if (c.is_void()) return {};
  int d = c.dim();
  // chain groups C_{-1} .. C_d; C_{-1} spanned by the empty face
  std::vector<std::vector<Face>> chains(d + 2);
  chains[0].push_back(Face{});
  if (d >= 0) {
    auto byd = c.faces_by_dim();
    for (int k = 0; k <= d; ++k) chains[k + 1] = byd[k];
  }
  std::vector<std::size_t> rk(d + 3, 0);  // rk[k+1] = rank of boundary C_k -> C_{k-1}
  for (int k = 0; k <= d; ++k)
    rk[k + 1] = chains[k + 1].empty() ? 0 : rank(detail::boundary_matrix(chains[k], chains[k + 1]));
  std::vector<int> betti;
  for (int k = -1; k <= d; ++k) {
    long b = static_cast<long>(chains[k + 1].size()) - static_cast<long>(rk[k + 1]) -
             static_cast<long>(rk[k + 2]);
    betti.push_back(static_cast<int>(b));
  }
  return betti;
}

inline int betti_reduced_homology(const SimplicialComplex& c, int k) {
  auto b = reduced_betti_numbers(c);
  if (k < -1 || k + 1 >= static_cast<int>(b.size())) return 0;
  return b[k + 1];
}

// ---------------------------------------------------------------------------
// Goresky-MacPherson

/** Reduced Betti number of the complement, as a sum over the intersection poset. */
inline int gm_reduced_betti(const IntersectionPoset& P, int i) {
  int d = P.ambient_dim, total = 0;
  for (std::size_t p = 0; p < P.size(); ++p) {
    int idx = d - 2 - i - P.nodes[p].dim();
    if (idx < -1) continue;
    total += betti_reduced_homology(lower_order_complex(P, static_cast<int>(p)), idx);
  }
  return total;
}

/** Betti number of the complement; degree 0 counts components. */
inline int gm_betti(const IntersectionPoset& P, int i) {
  return gm_reduced_betti(P, i) + (i == 0 ? 1 : 0);
}

inline int gm_betti(const std::vector<AffineSubspace>& arr, int i) {
  return gm_betti(intersection_poset(arr), i);
}

/** Betti numbers b_0 .. b_{d-1} of the complement. */
inline std::vector<int> gm_betti_vector(const std::vector<AffineSubspace>& arr, int d) {
  auto P = intersection_poset(arr);
  P.ambient_dim = d;
  std::vector<int> r;
  for (int i = 0; i < d; ++i) r.push_back(gm_betti(P, i));
  return r;
}

// ---------------------------------------------------------------------------
// Slicing by a hyperplane

/** Generic: every node of positive dimension meets H in codimension one; points may miss H. */
inline bool in_general_position(const IntersectionPoset& P, const AffineSubspace& H) {
  for (auto& p : P.nodes) {
    auto m = intersect(p, H);
    if (!m) {
      if (p.dim() > 0) return false;
      continue;
    }
    if (m->dim() != p.dim() - 1) return false;
  }
  return true;
}

/** Arrangement traced on H, in coordinates of H = offset + span(basis). */
inline std::vector<AffineSubspace> slice_arrangement(const std::vector<AffineSubspace>& arr,
                                                     const AffineSubspace& H) {
  auto B = H.basis();
  auto h0 = H.offset();
  int e = static_cast<int>(B.size());
  std::vector<AffineSubspace> out;
  std::set<std::string> seen;
  for (auto& a : arr) {
    std::vector<RatVec> A;
    RatVec b;
    auto N = a.normals();
    auto r = a.rhs();
    for (std::size_t i = 0; i < N.size(); ++i) {
      RatVec row(e);
      for (int t = 0; t < e; ++t) row[t] = dot(N[i], B[t]);
      A.push_back(row);
      b.push_back(r[i] - dot(N[i], h0));
    }
    auto s = AffineSubspace::from_equations(e, A, b);
    if (s && seen.insert(s->key()).second) out.push_back(*s);
  }
  return out;
}

struct LefschetzReport {
  std::vector<int> full;    // b_i(R^d - A)
  std::vector<int> sliced;  // b_i(H - A^H)
  std::vector<bool> holds;
  bool all_hold = true;
};

inline LefschetzReport lefschetz_inequality_check(const std::vector<AffineSubspace>& arr,
                                                  const AffineSubspace& H) {
  if (arr.empty()) throw arrangement_error("empty arrangement");
  int d = arr[0].ambient_dim;
  if (H.ambient_dim != d || H.dim() != d - 1) throw arrangement_error("not a hyperplane");
  auto P = intersection_poset(arr);
  if (!in_general_position(P, H)) throw arrangement_error("not-in-general-position");
  auto slice = slice_arrangement(arr, H);
  LefschetzReport r;
  r.full = gm_betti_vector(arr, d);
  r.sliced = gm_betti_vector(slice, d - 1);
  r.sliced.resize(d, 0);
  for (int i = 0; i < d; ++i) {
    r.holds.push_back(r.full[i] >= r.sliced[i]);
    r.all_hold = r.all_hold && r.holds.back();
  }
  return r;
}

// ---------------------------------------------------------------------------
// JSON: {"dim": d, "subspaces": [{"basis": [[rat]], "offset": [rat]}]}

inline Rat rat_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_rat(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_number()) return parse_rat(j.dump());
  throw arrangement_error("expected a rational number");
}

inline RatVec ratvec_from_json(const nlohmann::json& j) {
  RatVec v;
  for (auto& x : j) v.push_back(rat_from_json(x));
  return v;
}

inline nlohmann::json to_json_value(const RatVec& v) {
  nlohmann::json j = nlohmann::json::array();
  for (auto& x : v) j.push_back(rat_str(x));
  return j;
}

inline std::vector<AffineSubspace> arrangement_from_json(const nlohmann::json& j) {
  int d = j.at("dim").get<int>();
  std::vector<AffineSubspace> arr;
  for (auto& s : j.at("subspaces")) {
    std::vector<RatVec> basis;
    for (auto& b : s.at("basis")) basis.push_back(ratvec_from_json(b));
    RatVec off = ratvec_from_json(s.at("offset"));
    if (static_cast<int>(off.size()) != d) throw arrangement_error("dimension mismatch");
    arr.push_back(AffineSubspace::from_basis(basis, off));
  }
  return arr;
}

inline nlohmann::json to_json_value(const AffineSubspace& s) {
  nlohmann::json basis = nlohmann::json::array();
  for (auto& b : s.basis()) basis.push_back(to_json_value(b));
  return {{"basis", basis}, {"offset", to_json_value(s.offset())}};
}

}  // namespace polyforge
