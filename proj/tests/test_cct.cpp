#include <gtest/gtest.h>

#include <set>

#include "polyforge/cct.hpp"

using namespace polyforge;

namespace {

FieldElem q2(long r, long s, long den) { return FieldElem(Rat(r, den), Rat(s, den), 0, 0); }

// κ table: first three coordinates as (rational, √2) numerators over a common denominator
struct KRow {
  long x[3][2];
  long den;
};
const KRow kTable[] = {
    {{{-1, 1}, {1, -1}, {2, 0}}, 1},
    {{{-1, 0}, {0, 0}, {1, 0}}, 1},
    {{{11, -7}, {9, 11}, {16, -6}}, 23},
    {{{37, 11}, {-11, 6}, {22, -12}}, 49},
    {{{-241, 145}, {-407, -241}, {260, -168}}, 697},
    {{{-457, -192}, {192, -111}, {202, -138}}, 679},
    {{{577, -341}, {1155, 577}, {464, -324}}, 1837},
    {{{25057, 11471}, {-11471, 6708}, {8116, -5712}}, 38473},
    {{{-233, 137}, {-487, -233}, {136, -96}}, 761},
    {{{-353893, -165588}, {165588, -97098}, {82564, -58344}}, 548089},
    {{{5033675, -2955751}, {10637625, 5033675}, {2108416, -1490520}}, 16549127},
};

Vec5 table_row(int i) {
  const auto& r = kTable[i];
  return {q2(r.x[0][0], r.x[0][1], r.den), q2(r.x[1][0], r.x[1][1], r.den),
          q2(r.x[2][0], r.x[2][1], r.den), 0, 1};
}

// Quotient oracle: p ~ q iff p - q lies in (3,-3,0)Z + (-2,-2,4)Z.
bool equivalent(std::array<long, 3> p, std::array<long, 3> q) {
  long d0 = p[0] - q[0], d1 = p[1] - q[1], d2 = p[2] - q[2];
  if (d0 + d1 + d2 != 0 || d2 % 4 != 0) return false;
  long m = d2 / 4;
  return (d0 + 2 * m) % 3 == 0;
}

std::vector<int> brute_f_vector(int k) {
  std::vector<std::array<long, 3>> reps;
  auto rep_of = [&](std::array<long, 3> p) {
    for (std::size_t i = 0; i < reps.size(); ++i)
      if (equivalent(p, reps[i])) return static_cast<int>(i);
    reps.push_back(p);
    return static_cast<int>(reps.size() - 1);
  };
  std::vector<std::set<std::vector<int>>> faces(4);
  const int R = 8;
  for (long x = -R; x <= R; ++x)
    for (long y = -R; y <= R; ++y)
      for (long z = -R; z <= R; ++z)
        for (unsigned dirs = 0; dirs < 8; ++dirs) {
          int d = __builtin_popcount(dirs);
          long lo = x + y + z;
          if (lo < 0 || lo + d > k) continue;
          std::vector<int> vs;
          for (unsigned sub = 0; sub < 8; ++sub) {
            if ((sub & dirs) != sub) continue;
            std::array<long, 3> p{x + ((sub & 1) ? 1 : 0), y + ((sub & 2) ? 1 : 0),
                                  z + ((sub & 4) ? 1 : 0)};
            vs.push_back(rep_of(p));
          }
          std::sort(vs.begin(), vs.end());
          faces[d].insert(vs);
        }
  std::vector<int> f;
  for (int d = 0; d <= std::min(k, 3); ++d) f.push_back(static_cast<int>(faces[d].size()));
  return f;
}

std::vector<int> formula(int k) {
  std::vector<int> f{12 * (k + 1), 36 * k, 36 * (k - 1), 12 * (k - 2)};
  f.resize(std::min(k, 3) + 1);
  return f;
}

// Corner c of a cube from the other seven: the common point of the spans of the
// three squares through c.
Vec5 corner_from_seven(const GeoCCT& t, const Cube& q, unsigned c) {
  std::array<std::array<Vec5, 3>, 3> sq;
  const unsigned pairs[3][2] = {{1, 2}, {2, 4}, {1, 4}};
  for (int s = 0; s < 3; ++s) {
    unsigned i = pairs[s][0], j = pairs[s][1];
    sq[s] = {t.coords[q.corners[c ^ i]], t.coords[q.corners[c ^ j]],
             t.coords[q.corners[c ^ i ^ j]]};
  }
  MatF m(10, 9);
  for (int blk = 0; blk < 2; ++blk)
    for (int r = 0; r < 5; ++r)
      for (int k = 0; k < 3; ++k) {
        m(5 * blk + r, k) = sq[0][k][r];
        m(5 * blk + r, 3 * (blk + 1) + k) = -sq[blk + 1][k][r];
      }
  auto ker = nullspace(m);
  EXPECT_EQ(ker.size(), 1u);
  Vec5 x{};
  for (int k = 0; k < 3; ++k)
    for (int r = 0; r < 5; ++r) x[r] += ker[0][k] * sq[0][k][r];
  return dehomogenize(x);
}

const GeoCCT& ct(int n) {
  static std::map<int, GeoCCT> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GeoCCT t = n <= 1 ? seed_ct1() : extend(ct(n - 1));
  return cache.emplace(n, std::move(t)).first->second;
}

bool in_layer(const GeoCCT& t, int l, const Vec5& p) {
  for (int i = 0; i < 12; ++i)
    if (t.coords[12 * l + i] == p) return true;
  return false;
}

}  // namespace

TEST(AbstractCCT, FVectorMatchesQuotientEnumeration) {
  for (int k = 0; k <= 6; ++k) {
    auto t = abstract_cct(k);
    EXPECT_EQ(f_vector(t.complex), brute_f_vector(k)) << k;
    EXPECT_EQ(f_vector(t.complex), formula(k)) << k;
  }
  EXPECT_EQ(f_vector(abstract_cct(5).complex), (std::vector<int>{72, 180, 144, 36}));
}

TEST(AbstractCCT, WidthOneIsCubicBipartite) {
  auto t = abstract_cct(1);
  std::vector<int> deg(24, 0);
  for (auto& q : t.complex.cubes) {
    ASSERT_EQ(q.dim, 1);
    EXPECT_NE(t.layer[q.corners[0]], t.layer[q.corners[1]]);
    ++deg[q.corners[0]];
    ++deg[q.corners[1]];
  }
  for (int d : deg) EXPECT_EQ(d, 3);
}

TEST(AbstractCCT, CanonicalIdsRoundTrip) {
  auto t = abstract_cct(4);
  for (int id = 0; id < t.num_vertices(); ++id) {
    auto r = t.rep(id);
    EXPECT_EQ(t.at(r[0], r[1], r[2]), id);
    EXPECT_EQ(t.at(r[0] + 3, r[1] - 3, r[2]), id);
    EXPECT_EQ(t.at(r[0] - 2, r[1] - 2, r[2] + 4), id);
  }
  EXPECT_EQ(t.at(0, 0, -1), -1);
}

TEST(Rotations, GroupHasTwelveElementsAndOrbitsAreFree) {
  auto g = symmetry_group();
  EXPECT_EQ(g.size(), 12u);
  for (const Vec5& p : {theta0(), theta1()}) {
    std::vector<Vec5> orbit;
    for (auto& m : g) {
      Vec5 x = m * p;
      for (auto& y : orbit) EXPECT_FALSE(x == y);
      orbit.push_back(x);
    }
  }
}

TEST(Iteration, WorkedExample) {
  Vec5 b = rotation(0, 2) * theta1();
  EXPECT_EQ(b, (Vec5{-1, 0, 1, 0, 1}));
  EXPECT_EQ(mu(theta0(), b), q2(3, -4, 23));
  Vec5 th2 = iterate(theta0(), b);
  EXPECT_EQ(th2, (Vec5{q2(-11, 7, 23), q2(-9, -11, 23), q2(16, -6, 23), 0, 1}));
  // renormalizing a normalized input changes nothing
  EXPECT_EQ(mu(dehomogenize(theta0()), dehomogenize(b)), mu(theta0(), b));
}

TEST(Iteration, Errors) {
  EXPECT_THROW(mu(theta0(), Vec5{1, 1, 0, 0, 1}), cct_error);
  try {
    iterate(Vec5{1, 0, 2, 0, 1}, Vec5{0, 0, 1, 0, 0});
    FAIL();
  } catch (const cct_error& e) {
    EXPECT_STREQ(e.what(), "point-at-infinity");
  }
}

TEST(Iteration, KappaTable) {
  auto k = kappa_chain(10);
  ASSERT_EQ(k.size(), 11u);
  for (int i = 0; i <= 10; ++i) EXPECT_EQ(k[i], table_row(i)) << i;
}

TEST(Clifford, Lambda) {
  EXPECT_EQ(clifford_lambda_exact(Vec5{-1, 0, 1, 0, 1}), FieldElem(1));
  auto k = kappa_chain(12);
  EXPECT_NEAR(clifford_lambda(k[0]), 1.84198, 1e-5);
  EXPECT_NEAR(clifford_lambda(k[2]), 0.1709, 1e-4);
  EXPECT_NEAR(clifford_lambda(k[3]), 0.0181, 1e-4);
  for (int i = 0; i < 12; ++i) EXPECT_LT(clifford_lambda_exact(k[i + 1]), clifford_lambda_exact(k[i]));
  EXPECT_THROW(clifford_lambda_exact(Vec5{0, 0, 0, 0, 1}), cct_error);
}

TEST(Seeds, WidthOne) {
  const auto& t = ct(1);
  EXPECT_EQ(t.coords.size(), 24u);
  EXPECT_EQ(f_vector(t.abs.complex), (std::vector<int>{24, 36}));
  EXPECT_TRUE(in_layer(t, 0, theta0()));
  EXPECT_TRUE(in_layer(t, 1, theta1()));
  EXPECT_TRUE(check_symmetric(t));
}

TEST(Seeds, WidthThree) {
  const auto& t = ct(3);
  Vec5 th2{q2(-11, 7, 23), q2(-9, -11, 23), q2(16, -6, 23), 0, 1};
  EXPECT_TRUE(in_layer(t, 2, th2));
  EXPECT_TRUE(in_layer(t, 3, table_row(3)));
  EXPECT_EQ(t.coords.size(), 48u);
}

TEST(Extension, EveryCornerDeterminedByTheOtherSeven) {
  const auto& t = ct(5);
  for (auto& q : t.abs.complex.cubes)
    for (unsigned c = 0; c < 8; ++c) EXPECT_EQ(corner_from_seven(t, q, c), t.coords[q.corners[c]]);
}

TEST(Extension, CubesCoplanarAndCountsGrow) {
  for (int n = 3; n <= 6; ++n) {
    const auto& t = ct(n);
    EXPECT_EQ(static_cast<int>(t.coords.size()), 12 * (n + 1));
    for (auto& q : t.abs.complex.cubes) EXPECT_EQ(cube_rank(t, q), 4u);
  }
}

TEST(Extension, KappaLiesInLayers) {
  const auto& t = ct(10);
  auto k = kappa_chain(10);
  for (int i = 0; i <= 10; ++i) EXPECT_TRUE(in_layer(t, i, k[i])) << i;
}

TEST(Predicates, SeedThreeIsIdeal) {
  const auto& t = ct(3);
  EXPECT_TRUE(check_symmetric(t));
  EXPECT_TRUE(check_fixed_point_free(t));
  EXPECT_TRUE(check_transversal(t));
  EXPECT_TRUE(check_slope_obtuse(t));
  EXPECT_TRUE(check_oriented(t));
  EXPECT_GT(slope(t).angle, std::acos(-1.0) / 2);
}

TEST(Predicates, WidthTenIsIdealAndSlopeStaysObtuse) {
  for (int n = 3; n <= 10; ++n) {
    const auto& t = ct(n);
    EXPECT_TRUE(check_slope_obtuse(t)) << n;
    EXPECT_TRUE(check_oriented(t)) << n;
  }
  EXPECT_TRUE(check_transversal(ct(10)));
}

TEST(Predicates, SymmetryViolationIsReported) {
  GeoCCT t = ct(3);
  t.coords[5][0] += FieldElem(1);
  std::string why;
  EXPECT_FALSE(check_symmetric(t, &why));
  EXPECT_NE(why.find("symmetry-violation"), std::string::npos);
  EXPECT_THROW(check_transversal(t), cct_error);
  EXPECT_THROW(extend(t), cct_error);
}

TEST(Predicates, MirrorImageRelabelsToItself) {
  // the reflection composed with the swap of the first two lattice coordinates
  const auto& t = ct(3);
  GeoCCT m = t;
  for (int id = 0; id < t.abs.num_vertices(); ++id) {
    auto r = t.abs.rep(id);
    m.coords[t.abs.at(r[1], r[0], r[2])] = reflection_e4() * t.coords[id];
  }
  EXPECT_EQ(m.coords, t.coords);
  EXPECT_EQ(check_oriented(m), check_oriented(t));
  EXPECT_EQ(check_transversal(m), check_transversal(t));
}

TEST(Convexity, SeedThreeFacets) {
  const auto& t = ct(3);
  auto cert = check_convex_position(t);
  ASSERT_EQ(cert.normals.size(), 12u);
  Vec5 expect{FieldElem(7, 5, 0, 0), FieldElem(-8, -5, 0, 0), 2, 0, FieldElem(-9, -5, 0, 0)};
  int id0 = -1;
  for (int i = 0; i < 12; ++i)
    if (t.coords[i] == theta0()) id0 = i;
  ASSERT_GE(id0, 0);
  int matches = 0;
  for (std::size_t c = 0; c < cert.normals.size(); ++c) {
    auto& q = t.abs.complex.cubes[c];
    if (std::find(q.corners.begin(), q.corners.end(), id0) == q.corners.end()) continue;
    const Vec5& n = cert.normals[c];
    // proportional with positive factor
    FieldElem f = n[2] / expect[2];
    bool prop = f.sign() > 0;
    for (int i = 0; i < 5; ++i) prop = prop && n[i] == f * expect[i];
    matches += prop;
  }
  EXPECT_EQ(matches, 1);
}

TEST(Convexity, SeedSixFacets) {
  auto cert = check_convex_position(ct(6));
  EXPECT_EQ(cert.normals.size(), 48u);
  for (std::size_t c = 0; c < cert.normals.size(); ++c)
    for (int v : ct(6).abs.complex.cubes[c].corners)
      EXPECT_TRUE(dot(cert.normals[c], ct(6).coords[v]).is_zero());
}

TEST(Convexity, ExposureFailureHasWitness) {
  GeoCCT t = ct(3);
  // push a vertex of layer 1 far outside along its own direction
  for (int i = 0; i < 4; ++i) t.coords[12][i] *= FieldElem(50);
  try {
    check_convex_position(t);
    FAIL();
  } catch (const cct_error& e) {
    std::string w = e.what();
    EXPECT_TRUE(w.find("exposure-failure") != std::string::npos ||
                w.find("non-coplanar-facet") != std::string::npos);
  }
}

TEST(CCTP, Counts) {
  EXPECT_EQ(cctp(1).vertices.size(), 24u);
  auto r = cctp(3);
  EXPECT_EQ(r.vertices.size(), 48u);
  EXPECT_EQ(r.rs_bound, 96);
  EXPECT_EQ(r.certificate.normals.size(), 12u);
  EXPECT_EQ(r.layers[47], 3);
}

TEST(CCTJson, RoundTrip) {
  auto j = to_json_value(ct(3));
  auto t = geocct_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(t.coords, ct(3).coords);
  EXPECT_EQ(t.kappa, ct(3).kappa);
  EXPECT_TRUE(check_symmetric(t));
}
