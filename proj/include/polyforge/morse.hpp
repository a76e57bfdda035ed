#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "polyforge/complexcore.hpp"

namespace polyforge {

struct morse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/** Pairs (face, coface) given as indices into a FacePoset. */
struct MorseMatching {
  std::vector<std::pair<int, int>> pairs;
};

struct OutJLedger {
  int j = 0;
  std::vector<int> outward;  // poset indices of faces of D matched outside D
};

// Checks the matching condition and returns the partner array (-1 = critical).
inline std::vector<int> partner_map(const FacePoset& p, const MorseMatching& m) {
  std::vector<int> partner(p.size(), -1);
  for (auto [s, S] : m.pairs) {
    if (s < 0 || S < 0 || s >= static_cast<int>(p.size()) || S >= static_cast<int>(p.size()))
      throw morse_error("malformed pair: face not in complex");
    if (!std::binary_search(p.down[S].begin(), p.down[S].end(), s))
      throw morse_error("malformed pair: not a cover relation");
    if (partner[s] >= 0 || partner[S] >= 0) throw morse_error("malformed pair: face reused");
    partner[s] = S;
    partner[S] = s;
  }
  return partner;
}

/**
 * Acyclicity of the Hasse digraph with matched edges reversed. Unmatched covers
 * point from coface to face; matched ones from face to coface.
 */
inline bool gradient_acyclic(const FacePoset& p, const std::vector<int>& partner) {
  std::size_t n = p.size();
  std::vector<std::vector<int>> out(n);
  std::vector<int> indeg(n, 0);
  for (std::size_t S = 0; S < n; ++S)
    for (int s : p.down[S]) {
      if (partner[s] == static_cast<int>(S)) out[s].push_back(static_cast<int>(S));
      else out[S].push_back(s);
    }
  for (auto& o : out)
    for (int y : o) ++indeg[y];
  std::vector<int> stack;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) stack.push_back(static_cast<int>(i));
  std::size_t seen = 0;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    ++seen;
    for (int y : out[x])
      if (--indeg[y] == 0) stack.push_back(y);
  }
  return seen == n;
}

/** True iff m is a matching on cover relations without closed gradient paths. */
inline bool validate_matching(const FacePoset& p, const MorseMatching& m) {
  return gradient_acyclic(p, partner_map(p, m));
}

/** Critical faces grouped by dimension. */
inline std::vector<std::vector<int>> critical_faces(const FacePoset& p, const MorseMatching& m) {
  auto partner = partner_map(p, m);
  if (!gradient_acyclic(p, partner)) throw morse_error("invalid matching: closed gradient path");
  std::vector<std::vector<int>> crit(std::max(0, p.max_dim() + 1));
  for (std::size_t i = 0; i < p.size(); ++i)
    if (partner[i] < 0) crit[p.dim[i]].push_back(static_cast<int>(i));
  return crit;
}

inline std::vector<int> critical_counts(const FacePoset& p, const MorseMatching& m) {
  std::vector<int> c;
  for (auto& v : critical_faces(p, m)) c.push_back(static_cast<int>(v.size()));
  return c;
}

// ---------------------------------------------------------------------------
// Collapse search

struct CollapseOptions {
  long budget = 1000000;  // backtracking node budget
  std::uint64_t seed = 0;
  int restarts = 16;
  bool random_only = false;  // skip greedy and backtracking
};

struct CollapseResult {
  bool success = false;
  MorseMatching matching;
  std::string strategy;
  std::vector<std::uint64_t> seeds;
  long nodes = 0;
};

namespace detail {

class Collapser {
 public:
  using Allow = std::function<bool(int, int)>;
  using Done = std::function<bool(const std::vector<char>&, std::size_t)>;

  Collapser(const FacePoset& p, std::vector<char> keep, Allow allow, Done done)
      : p_(p), keep_(std::move(keep)), allow_(std::move(allow)), done_(std::move(done)) {
    reset();
  }

  void reset() {
    alive_.assign(p_.size(), 1);
    live_ = p_.size();
    upcount_.assign(p_.size(), 0);
    for (std::size_t i = 0; i < p_.size(); ++i) upcount_[i] = static_cast<int>(p_.up[i].size());
    seq_.clear();
  }

  // Free pairs available now, ordered by coface dimension (high first) then face index.
  std::vector<std::pair<int, int>> candidates() const {
    std::vector<std::pair<int, int>> c;
    for (std::size_t s = 0; s < p_.size(); ++s) {
      if (!alive_[s] || keep_[s] || upcount_[s] != 1) continue;
      int S = -1;
      for (int u : p_.up[s])
        if (alive_[u]) S = u;
      if (S < 0 || upcount_[S] != 0) continue;
      if (allow_ && !allow_(static_cast<int>(s), S)) continue;
      c.push_back({static_cast<int>(s), S});
    }
    std::stable_sort(c.begin(), c.end(), [&](auto& x, auto& y) {
      return p_.dim[x.second] > p_.dim[y.second];
    });
    return c;
  }

  void apply(std::pair<int, int> pr) {
    for (int f : {pr.second, pr.first}) {
      alive_[f] = 0;
      --live_;
      for (int d : p_.down[f]) --upcount_[d];
    }
    seq_.push_back(pr);
  }

  void undo() {
    auto pr = seq_.back();
    seq_.pop_back();
    for (int f : {pr.first, pr.second}) {
      alive_[f] = 1;
      ++live_;
      for (int d : p_.down[f]) ++upcount_[d];
    }
  }

  bool done() const { return done_(alive_, live_); }

  bool greedy() {
    reset();
    for (;;) {
      auto c = candidates();
      if (c.empty()) break;
      apply(c.front());
    }
    return done();
  }

  bool randomized(std::mt19937_64& rng) {
    reset();
    for (;;) {
      auto c = candidates();
      if (c.empty()) break;
      std::size_t top = 0;
      while (top < c.size() && p_.dim[c[top].second] == p_.dim[c[0].second]) ++top;
      apply(c[rng() % top]);
    }
    return done();
  }

  bool backtrack(long& nodes, long budget) {
    reset();
    return dfs(nodes, budget);
  }

  const std::vector<std::pair<int, int>>& sequence() const { return seq_; }

 private:
  bool dfs(long& nodes, long budget) {
    if (++nodes > budget) return false;
    auto c = candidates();
    if (c.empty()) return done();
    for (auto& pr : c) {
      apply(pr);
      if (dfs(nodes, budget)) return true;
      undo();
      if (nodes > budget) return false;
    }
    return false;
  }

  const FacePoset& p_;
  std::vector<char> keep_;
  Allow allow_;
  Done done_;
  std::vector<char> alive_;
  std::size_t live_ = 0;
  std::vector<int> upcount_;
  std::vector<std::pair<int, int>> seq_;
};

inline CollapseResult run_search(Collapser& col, const CollapseOptions& opt) {
  CollapseResult r;
  auto finish = [&](const char* how) {
    r.success = true;
    r.strategy = how;
    r.matching.pairs = col.sequence();
    return r;
  };
  if (!opt.random_only) {
    if (col.greedy()) return finish("greedy");
    if (col.backtrack(r.nodes, opt.budget)) return finish("backtracking");
  }
  for (int k = 0; k < opt.restarts; ++k) {
    std::uint64_t s = opt.seed + static_cast<std::uint64_t>(k);
    r.seeds.push_back(s);
    std::mt19937_64 rng(s);
    if (col.randomized(rng)) return finish("random-restart");
  }
  r.strategy = "search-exhausted";
  return r;
}

}  // namespace detail

inline std::vector<char> membership(const FacePoset& p, const std::vector<int>& ids) {
  std::vector<char> m(p.size(), 0);
  for (int i : ids) {
    if (i < 0 || i >= static_cast<int>(p.size())) throw morse_error("target face not in complex");
    m[i] = 1;
  }
  return m;
}

/** Poset indices of the faces of a subcomplex of the complex underlying p. */
inline std::vector<int> subcomplex_ids(const FacePoset& p, const SimplicialComplex& d) {
  std::vector<int> ids;
  if (d.is_void()) return ids;
  for (auto& f : d.faces()) {
    int i = p.find(f);
    if (i < 0) throw morse_error("subcomplex is not contained in the complex");
    ids.push_back(i);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

/**
 * Search for a sequence of elementary collapses from the complex onto the target
 * subcomplex (given as downward closed poset ids); an empty target means a point.
 */
inline CollapseResult collapse_search(const FacePoset& p, const std::vector<int>& target,
                                      const CollapseOptions& opt = {}) {
  auto keep = membership(p, target);
  std::size_t tsize = target.size();
  detail::Collapser col(p, keep, nullptr, [tsize](const std::vector<char>&, std::size_t live) {
    return tsize == 0 ? live == 1 : live == tsize;
  });
  return detail::run_search(col, opt);
}

struct OutJResult {
  CollapseResult search;
  OutJLedger ledger;
};

/**
 * Collapse to a vertex of D such that every face of D matched outside D has
 * dimension j. With D empty this is plain collapsibility.
 */
inline OutJResult out_j_collapse(const FacePoset& p, const std::vector<int>& d, int j,
                                 const CollapseOptions& opt = {}) {
  auto inD = membership(p, d);
  std::vector<char> keep(p.size(), 0);
  auto allow = [&](int s, int S) { return !(inD[s] && !inD[S]) || p.dim[s] == j; };
  bool empty = d.empty();
  detail::Collapser col(p, keep, allow, [&](const std::vector<char>& alive, std::size_t live) {
    if (live != 1) return false;
    if (empty) return true;
    for (std::size_t i = 0; i < alive.size(); ++i)
      if (alive[i]) return static_cast<bool>(inD[i]);
    return false;
  });
  OutJResult r;
  r.search = detail::run_search(col, opt);
  r.ledger.j = j;
  if (r.search.success)
    for (auto [s, S] : r.search.matching.pairs)
      if (inD[s] && !inD[S]) r.ledger.outward.push_back(s);
  return r;
}

// ---------------------------------------------------------------------------
// Deformation process

struct DeformationEvent {
  enum Kind { Collapse, Attach } kind;
  int face;       // critical face, or the free face of a collapse
  int coface;     // -1 for attachments
  int dimension;  // dimension of the attached cell, or of the coface removed
};

/**
 * Removes sources of the gradient digraph outside D one at a time: a critical
 * source is a cell attachment (read backwards), a free matched face an
 * elementary collapse.
 */
inline std::vector<DeformationEvent> deformation_trace(const FacePoset& p,
                                                       const std::vector<int>& d,
                                                       const MorseMatching& m) {
  auto partner = partner_map(p, m);
  if (!gradient_acyclic(p, partner)) throw morse_error("invalid matching: closed gradient path");
  auto inD = membership(p, d);
  for (auto [s, S] : m.pairs)
    if (inD[s] != inD[S]) throw morse_error("outward-face-present");
  std::size_t n = p.size();
  std::vector<int> indeg(n, 0);
  for (std::size_t S = 0; S < n; ++S)
    for (int s : p.down[S]) {
      if (inD[S]) continue;
      if (partner[s] == static_cast<int>(S)) ++indeg[S];
      else ++indeg[s];
    }
  std::vector<char> gone(n, 0);
  std::set<int> sources;
  for (std::size_t i = 0; i < n; ++i)
    if (!inD[i] && indeg[i] == 0) sources.insert(static_cast<int>(i));
  auto remove = [&](int x) {
    gone[x] = 1;
    sources.erase(x);
    auto drop = [&](int y) {
      if (!inD[y] && !gone[y] && --indeg[y] == 0) sources.insert(y);
    };
    for (int s : p.down[x]) {
      if (partner[s] == x) continue;
      drop(s);
    }
    if (partner[x] >= 0 && p.dim[partner[x]] > p.dim[x]) drop(partner[x]);
  };
  std::vector<DeformationEvent> events;
  while (!sources.empty()) {
    int x = *sources.begin();
    if (partner[x] < 0) {
      events.push_back({DeformationEvent::Attach, x, -1, p.dim[x]});
      remove(x);
    } else {
      int S = partner[x];
      events.push_back({DeformationEvent::Collapse, x, S, p.dim[S]});
      remove(x);
      remove(S);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!inD[i] && !gone[i]) throw morse_error("deformation stalled");
  return events;
}

// ---------------------------------------------------------------------------
// Non-evasiveness

namespace detail {

// Relabel by (degree, facet count) with index tiebreak and serialize the facets.
inline std::string nonevasive_key(const SimplicialComplex& c) {
  auto adj = vertex_graph(c);
  std::vector<int> inc(c.num_vertices, 0);
  for (auto& f : c.facets)
    for (int v : f) ++inc[v];
  std::vector<int> order(c.num_vertices);
  for (int i = 0; i < c.num_vertices; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (adj[a].size() != adj[b].size()) return adj[a].size() < adj[b].size();
    return inc[a] < inc[b];
  });
  std::vector<int> rank(c.num_vertices);
  for (int i = 0; i < c.num_vertices; ++i) rank[order[i]] = i;
  std::vector<Face> fs;
  for (auto& f : c.facets) {
    Face g;
    for (int v : f) g.push_back(rank[v]);
    fs.push_back(sorted_face(g));
  }
  std::sort(fs.begin(), fs.end());
  std::string key = std::to_string(c.num_vertices) + ":";
  for (auto& f : fs) {
    for (int v : f) key += std::to_string(v) + ",";
    key += ";";
  }
  return key;
}

inline bool nonevasive_rec(const SimplicialComplex& raw, std::unordered_map<std::string, bool>& memo) {
  SimplicialComplex c = compact(raw).complex;
  if (c.num_vertices == 0) return false;
  if (c.num_vertices == 1) return true;
  std::string key = nonevasive_key(c);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  bool result = false;
  for (int v = 0; v < c.num_vertices && !result; ++v) {
    SimplicialComplex lk = link_raw(c, {v});
    if (lk.facets.size() == 1 && lk.facets[0].empty()) continue;
    if (!nonevasive_rec(lk, memo)) continue;
    if (nonevasive_rec(deletion(c, {v}), memo)) result = true;
  }
  memo[key] = result;
  return result;
}

}  // namespace detail

/** Exact recursive decision of non-evasiveness. */
inline bool is_nonevasive(const SimplicialComplex& c, std::size_t max_faces = 4000) {
  if (!c.is_void() && c.faces().size() > max_faces) throw morse_error("size-limit-exceeded");
  std::unordered_map<std::string, bool> memo;
  return detail::nonevasive_rec(c, memo);
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json_value(const FacePoset& p, const MorseMatching& m) {
  nlohmann::json pairs = nlohmann::json::array();
  for (auto [s, S] : m.pairs) pairs.push_back({p.verts[s], p.verts[S]});
  return {{"pairs", pairs}};
}

inline MorseMatching matching_from_json(const FacePoset& p, const nlohmann::json& j) {
  MorseMatching m;
  for (auto& pr : j.at("pairs")) {
    int s = p.find(pr.at(0).get<Face>()), S = p.find(pr.at(1).get<Face>());
    if (s < 0 || S < 0) throw morse_error("malformed pair: face not in complex");
    m.pairs.push_back({s, S});
  }
  return m;
}

inline nlohmann::json to_json_value(const FacePoset& p, const OutJLedger& l) {
  nlohmann::json out = nlohmann::json::array();
  for (int s : l.outward) out.push_back(p.verts[s]);
  return {{"j", l.j}, {"outward", out}, {"count", l.outward.size()}};
}

}  // namespace polyforge
