#include <gtest/gtest.h>

#include <random>

#include "polyforge/morse.hpp"

using namespace polyforge;

namespace {

// Two triangles glued along their whole boundary, as a regular CW face poset.
FacePoset pillow() {
  FacePoset p;
  p.dim = {0, 0, 0, 1, 1, 1, 2, 2};
  p.verts = {{0}, {1}, {2}, {0, 1}, {1, 2}, {0, 2}, {0, 1, 2}, {0, 1, 2}};
  p.down = {{}, {}, {}, {0, 1}, {1, 2}, {0, 2}, {3, 4, 5}, {3, 4, 5}};
  p.finish();
  return p;
}

SimplicialComplex random_ball_subdivision(std::mt19937_64& rng, int steps) {
  SimplicialComplex c = simplex(3);
  for (int i = 0; i < steps; ++i) {
    auto fs = c.faces();
    Face f = fs[rng() % fs.size()];
    if (f.size() < 2) continue;
    c = stellar_subdivision(c, f);
  }
  return c;
}

FacePoset flipped(const FacePoset& p) {
  FacePoset q;
  q.dim = p.dim;
  for (auto& d : q.dim) d = -d;
  q.verts = p.verts;
  q.down = p.up;
  q.finish();
  return q;
}

long alternating(const std::vector<int>& counts) {
  long s = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) s += (i % 2 ? -1 : 1) * counts[i];
  return s;
}

}  // namespace

TEST(Validate, EmptyMatching) {
  auto p = face_poset(simplex_boundary(3));
  EXPECT_TRUE(validate_matching(p, {}));
  EXPECT_EQ(critical_counts(p, {}), (std::vector<int>{4, 6, 4}));
}

TEST(Validate, EdgeWithEndpoint) {
  auto p = face_poset(simplex(1));
  MorseMatching m{{{p.find({0}), p.find({0, 1})}}};
  EXPECT_TRUE(validate_matching(p, m));
  EXPECT_EQ(critical_counts(p, m), (std::vector<int>{1, 0}));
}

TEST(Validate, ClosedGradientPath) {
  auto p = pillow();
  // (01, T) then (12, T') and back to 01 through T'
  MorseMatching m{{{3, 6}, {4, 7}}};
  EXPECT_FALSE(validate_matching(p, m));
  MorseMatching ok{{{3, 6}}};
  EXPECT_TRUE(validate_matching(p, ok));
}

TEST(Validate, MalformedPairs) {
  auto p = face_poset(simplex(2));
  MorseMatching noncover{{{p.find({0}), p.find({0, 1, 2})}}};
  EXPECT_THROW(validate_matching(p, noncover), morse_error);
  MorseMatching reused{{{p.find({0}), p.find({0, 1})}, {p.find({0}), p.find({0, 2})}}};
  EXPECT_THROW(validate_matching(p, reused), morse_error);
}

TEST(Collapse, ConesCollapseToAPoint) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    std::uniform_int_distribution<int> nf(1, 5), sz(1, 3), vx(0, 5);
    std::vector<Face> fs;
    for (int i = nf(rng); i > 0; --i) {
      Face f;
      for (int j = sz(rng); j > 0; --j) f.push_back(vx(rng));
      fs.push_back(f);
    }
    auto c = cone(SimplicialComplex::from_facets(6, fs));
    auto p = face_poset(c);
    auto r = collapse_search(p, {});
    ASSERT_TRUE(r.success);
    ASSERT_TRUE(validate_matching(p, r.matching));
    EXPECT_EQ(critical_counts(p, r.matching)[0], 1);
  }
}

TEST(Collapse, SphereFails) {
  auto p = face_poset(derived_subdivision(simplex_boundary(3)));
  CollapseOptions opt;
  opt.budget = 1000;
  opt.restarts = 2;
  auto r = collapse_search(p, {}, opt);
  EXPECT_FALSE(r.success);
  EXPECT_EQ(r.strategy, "search-exhausted");
}

TEST(Collapse, SdCubeHasOneCriticalVertex) {
  auto p = face_poset(derived_subdivision(unit_cube(3)));
  auto r = collapse_search(p, {});
  ASSERT_TRUE(r.success);
  auto crit = critical_counts(p, r.matching);
  EXPECT_EQ(crit, (std::vector<int>{1, 0, 0, 0}));
}

TEST(Collapse, SdOfSubdividedSimplex) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 4; ++t) {
    auto c = derived_subdivision(random_ball_subdivision(rng, 8));
    auto p = face_poset(c);
    auto r = collapse_search(p, {});
    ASSERT_TRUE(r.success);
    auto crit = critical_faces(p, r.matching);
    ASSERT_EQ(alternating(critical_counts(p, r.matching)), 1);
    ASSERT_EQ(crit[0].size(), 1u);
  }
}

TEST(Collapse, OntoSubcomplexTarget) {
  // the triangle collapses onto any of its edges
  auto p = face_poset(simplex(2));
  std::vector<int> edge{p.find({0}), p.find({1}), p.find({0, 1})};
  std::sort(edge.begin(), edge.end());
  auto r = collapse_search(p, edge);
  ASSERT_TRUE(r.success);
  auto crit = critical_faces(p, r.matching);
  std::vector<int> all;
  for (auto& v : crit) all.insert(all.end(), v.begin(), v.end());
  std::sort(all.begin(), all.end());
  EXPECT_EQ(all, edge);
}

TEST(Collapse, MorseEquationOnRandomSearches) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 10; ++t) {
    auto c = random_ball_subdivision(rng, 6);
    auto p = face_poset(c);
    CollapseOptions opt;
    opt.random_only = true;
    opt.seed = t;
    opt.restarts = 1;
    auto r = collapse_search(p, {}, opt);
    // even a failed run leaves a partial matching; the Morse equation still holds
    ASSERT_TRUE(validate_matching(p, r.matching));
    ASSERT_EQ(alternating(critical_counts(p, r.matching)), euler_characteristic(c));
  }
}

TEST(Collapse, ReversalSymmetry) {
  auto p = face_poset(derived_subdivision(simplex(2)));
  auto r = collapse_search(p, {});
  ASSERT_TRUE(r.success);
  auto q = flipped(p);
  MorseMatching rev;
  for (auto [s, S] : r.matching.pairs) rev.pairs.push_back({S, s});
  EXPECT_TRUE(validate_matching(q, rev));
}

TEST(NonEvasive, Examples) {
  EXPECT_TRUE(is_nonevasive(simplex(0)));
  EXPECT_FALSE(is_nonevasive(simplex_boundary(2)));
  EXPECT_TRUE(is_nonevasive(simplex(3)));
  auto path = SimplicialComplex::from_facets(4, {{0, 1}, {1, 2}, {2, 3}});
  EXPECT_TRUE(is_nonevasive(path));
  auto two_points = SimplicialComplex::from_facets(2, {{0}, {1}});
  EXPECT_FALSE(is_nonevasive(two_points));
  EXPECT_FALSE(is_nonevasive(simplex_boundary(3)));
}

TEST(NonEvasive, ConesAreNonEvasive) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 15; ++t) {
    std::uniform_int_distribution<int> nf(1, 4), sz(1, 3), vx(0, 5);
    std::vector<Face> fs;
    for (int i = nf(rng); i > 0; --i) {
      Face f;
      for (int j = sz(rng); j > 0; --j) f.push_back(vx(rng));
      fs.push_back(f);
    }
    ASSERT_TRUE(is_nonevasive(cone(SimplicialComplex::from_facets(6, fs))));
  }
}

TEST(NonEvasive, SizeLimit) {
  EXPECT_THROW(is_nonevasive(derived_subdivision(simplex(3)), 10), morse_error);
}

TEST(OutJ, FullSubcomplexHasEmptyLedger) {
  auto c = derived_subdivision(simplex(2));
  auto p = face_poset(c);
  std::vector<int> all(p.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  for (int j = 0; j < 3; ++j) {
    auto r = out_j_collapse(p, all, j);
    ASSERT_TRUE(r.search.success);
    EXPECT_TRUE(r.ledger.outward.empty());
  }
  auto e = out_j_collapse(p, {}, 1);
  ASSERT_TRUE(e.search.success);
  EXPECT_TRUE(e.ledger.outward.empty());
}

TEST(OutJ, SkeletonLedgerMatchesEulerFormula) {
  for (int d : {2, 3}) {
    auto c = derived_subdivision(simplex(d));
    auto p = face_poset(c);
    for (int k = 0; k < d; ++k) {
      auto skel = skeleton(c, k);
      auto ids = subcomplex_ids(p, skel);
      long chiD = euler_characteristic(skel);
      long expect = (k % 2 ? -1 : 1) * (chiD - 1);
      std::vector<std::size_t> sizes;
      for (std::uint64_t seed : {1u, 2u}) {
        CollapseOptions opt;
        opt.random_only = true;
        opt.seed = seed * 1000;
        opt.restarts = 200;
        auto r = out_j_collapse(p, ids, k, opt);
        ASSERT_TRUE(r.search.success) << d << " " << k;
        for (int s : r.ledger.outward) ASSERT_EQ(p.dim[s], k);
        sizes.push_back(r.ledger.outward.size());
      }
      EXPECT_EQ(sizes[0], sizes[1]);
      EXPECT_EQ(static_cast<long>(sizes[0]), expect);
    }
  }
}

TEST(Deformation, CollapsibleGivesOnlyCollapses) {
  auto p = face_poset(derived_subdivision(simplex(2)));
  auto r = collapse_search(p, {});
  ASSERT_TRUE(r.success);
  auto crit = critical_faces(p, r.matching);
  auto ev = deformation_trace(p, {crit[0][0]}, r.matching);
  for (auto& e : ev) EXPECT_EQ(e.kind, DeformationEvent::Collapse);
  EXPECT_EQ(ev.size(), r.matching.pairs.size());
}

TEST(Deformation, TriangleBoundaryEmptyMatching) {
  auto p = face_poset(simplex_boundary(2));
  auto ev = deformation_trace(p, {p.find({0})}, {});
  ASSERT_EQ(ev.size(), 5u);
  int v = 0, e = 0;
  for (auto& x : ev) {
    EXPECT_EQ(x.kind, DeformationEvent::Attach);
    (x.dimension == 0 ? v : e)++;
  }
  EXPECT_EQ(v, 2);
  EXPECT_EQ(e, 3);
}

TEST(Deformation, SphereSingleTopCell) {
  auto p = face_poset(simplex_boundary(3));
  // collapse the sphere minus one triangle, leaving that triangle critical
  int top = p.find({1, 2, 3});
  auto minus = SimplicialComplex::from_facets(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}});
  auto q = face_poset(minus);
  auto r = collapse_search(q, {});
  ASSERT_TRUE(r.success);
  MorseMatching m;
  for (auto [s, S] : r.matching.pairs) m.pairs.push_back({p.find(q.verts[s]), p.find(q.verts[S])});
  auto crit = critical_faces(p, m);
  ASSERT_EQ(crit[2], (std::vector<int>{top}));
  auto ev = deformation_trace(p, {crit[0][0]}, m);
  int attach = 0;
  for (auto& e : ev)
    if (e.kind == DeformationEvent::Attach) {
      ++attach;
      EXPECT_EQ(e.dimension, 2);
    }
  EXPECT_EQ(attach, 1);
}

TEST(Deformation, OutwardFaceThrows) {
  auto p = face_poset(simplex(1));
  MorseMatching m{{{p.find({0}), p.find({0, 1})}}};
  EXPECT_THROW(deformation_trace(p, {p.find({0})}, m), morse_error);
}

TEST(Json, MatchingRoundTrip) {
  auto p = face_poset(simplex(2));
  auto r = collapse_search(p, {});
  auto back = matching_from_json(p, to_json_value(p, r.matching));
  EXPECT_EQ(back.pairs, r.matching.pairs);
}
