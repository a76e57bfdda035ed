// Acceptance harness: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Tolerances are pinned here, not taken from flags.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <nlohmann/json.hpp>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "polyforge/arrangement.hpp"
#include "polyforge/cct.hpp"
#include "polyforge/hirschpath.hpp"
#include "polyforge/morse.hpp"
#include "polyforge/projective.hpp"

using namespace polyforge;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kLambdaSigFigs = 3;
constexpr double kKappaSeconds = 1.0;
constexpr double kGenerateSeconds = 60.0;
constexpr double kHirschSeconds = 30.0;
constexpr double kGmSeconds = 30.0;

struct Outcome {
  bool pass = true;
  std::string note;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!note.empty()) note += "; ";
      note += what;
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

FieldElem q2(long r, long s, long den) { return FieldElem(Rat(r, den), Rat(s, den), 0, 0); }

// Table rows: first three coordinates as (rational, √2) numerators, denominator, printed λ.
struct KRow {
  long x[3][2];
  long den;
  double lambda;
};
const KRow kTable[] = {
    {{{-1, 1}, {1, -1}, {2, 0}}, 1, 1.8419},
    {{{-1, 0}, {0, 0}, {1, 0}}, 1, 1},
    {{{11, -7}, {9, 11}, {16, -6}}, 23, 0.1709},
    {{{37, 11}, {-11, 6}, {22, -12}}, 49, 0.0181},
    {{{-241, 145}, {-407, -241}, {260, -168}}, 697, 1.7906e-2},
    {{{-457, -192}, {192, -111}, {202, -138}}, 679, 1.7580e-3},
    {{{577, -341}, {1155, 577}, {464, -324}}, 1837, 1.7247e-5},
    {{{25057, 11471}, {-11471, 6708}, {8116, -5712}}, 38473, 1.6920e-6},
    {{{-233, 137}, {-487, -233}, {136, -96}}, 761, 1.6598e-7},
    {{{-353893, -165588}, {165588, -97098}, {82564, -58344}}, 548089, 1.6283e-8},
    {{{5033675, -2955751}, {10637625, 5033675}, {2108416, -1490520}}, 16549127, 1.5974e-9},
};

bool same_sig_figs(double x, double y, double figs) {
  if (x == y) return true;
  double scale = std::pow(10.0, std::floor(std::log10(std::fabs(y))) - figs + 1);
  return std::fabs(x - y) <= 0.5 * scale;
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(POLYFORGE_CLI) + " " + args + " >/dev/null 2>&1";
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

// ---------------------------------------------------------------------------

Outcome kappa_table() {
  Outcome o;
  auto t0 = Clock::now();
  auto k = kappa_chain(10);
  for (int i = 0; i <= 10; ++i) {
    const auto& r = kTable[i];
    Vec5 expect{q2(r.x[0][0], r.x[0][1], r.den), q2(r.x[1][0], r.x[1][1], r.den),
                q2(r.x[2][0], r.x[2][1], r.den), 0, 1};
    o.require(k[i] == expect, "kappa" + std::to_string(i) + " coordinates");
    double l = clifford_lambda(k[i]);
    if (!same_sig_figs(l, r.lambda, kLambdaSigFigs))
      o.require(false, "lambda(kappa" + std::to_string(i) + ")=" + fmt6(l) + " vs table " + fmt6(r.lambda));
  }
  double s = seconds_since(t0);
  o.require(s < kKappaSeconds, "runtime " + fmt6(s) + " s");
  return o;
}

Outcome worked_iteration() {
  Outcome o;
  Vec5 b = rotation(0, 2) * theta1();
  o.require(mu(theta0(), b) == q2(3, -4, 23), "mu");
  Vec5 th2{q2(-11, 7, 23), q2(-9, -11, 23), q2(16, -6, 23), 0, 1};
  o.require(iterate(theta0(), b) == th2, "iterate");
  return o;
}

Outcome seed_certificates() {
  Outcome o;
  GeoCCT t = generate_cct(3);
  o.require(check_symmetric(t), "symmetry");
  o.require(check_transversal(t), "transversality");
  o.require(check_slope_obtuse(t), "slope");
  o.require(check_oriented(t), "orientation");
  ConvexCertificate cert;
  try {
    cert = check_convex_position(t);
  } catch (const cct_error& e) {
    o.require(false, e.what());
    return o;
  }
  Vec5 expect{FieldElem(7, 5, 0, 0), FieldElem(-8, -5, 0, 0), 2, 0, FieldElem(-9, -5, 0, 0)};
  int id0 = -1;
  for (int i = 0; i < 12; ++i)
    if (t.coords[i] == theta0()) id0 = i;
  int matches = 0;
  for (std::size_t c = 0; c < cert.normals.size(); ++c) {
    auto& q = t.abs.complex.cubes[c];
    if (std::find(q.corners.begin(), q.corners.end(), id0) == q.corners.end()) continue;
    FieldElem f = cert.normals[c][2] / expect[2];
    bool prop = f.sign() > 0;
    for (int i = 0; i < 5; ++i) prop = prop && cert.normals[c][i] == f * expect[i];
    matches += prop;
  }
  o.require(id0 >= 0 && matches == 1, "exposing normal at theta0");
  return o;
}

Outcome pipeline_scaling() {
  Outcome o;
  auto out = std::filesystem::temp_directory_path() / "polyforge_acceptance_ct12.json";
  auto t0 = Clock::now();
  int code = run_cli("cct generate --n 12 --out " + out.string());
  double s = seconds_since(t0);
  o.require(code == 0, "exit code " + std::to_string(code));
  o.require(s < kGenerateSeconds, "runtime " + fmt6(s) + " s");
  std::ifstream in(out);
  if (!in) {
    o.require(false, "no output");
    return o;
  }
  json b = json::parse(in);
  o.require(b.at("data").at("f0") == 12 * 13, "f0");
  std::set<std::string> passed;
  for (auto& c : b.at("checks"))
    if (c.at("pass").get<bool>()) passed.insert(c.at("name").get<std::string>());
  for (auto n : {"coplanar-cubes", "convex-position", "symmetric", "transversal"})
    o.require(passed.count(n) > 0, n);
  o.require(b.at("data").at("facet_normals").size() == 12 * 10, "certificate size");
  return o;
}

Outcome f_vector_law() {
  Outcome o;
  for (int k = 0; k <= 8; ++k) {
    std::vector<int> f = f_vector(abstract_cct(k).complex);
    f.resize(4, 0);
    std::vector<int> expect;
    if (k == 0) expect = {12, 0, 0, 0};
    else if (k == 1) expect = {24, 36, 0, 0};
    else expect = {12 * (k + 1), 36 * k, 36 * (k - 1), 12 * (k - 2)};
    o.require(f == expect, "k=" + std::to_string(k));
  }
  return o;
}

// Independent BFS from the vertices of X to the nearest vertex of Y.
int set_distance(const SimplicialComplex& c, const Face& X, const std::set<int>& Y) {
  std::vector<std::set<int>> adj(c.num_vertices);
  for (auto& f : c.facets)
    for (int a : f)
      for (int b : f)
        if (a != b) adj[a].insert(b);
  std::vector<int> dist(c.num_vertices, -1), frontier(X.begin(), X.end());
  for (int v : X) dist[v] = 0;
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    int v = frontier[i];
    if (Y.count(v)) return dist[v];
    for (int w : adj[v])
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        frontier.push_back(w);
      }
  }
  return -1;
}

// Every ordered facet pair: segment is non-revisiting, within the Hirsch bound, no
// shorter than the BFS dual distance, and its pearls realize the vertex distance.
void hirsch_all_pairs(Outcome& o, const SimplicialComplex& c, const std::string& label, int stride) {
  int n = static_cast<int>(c.facets.size());
  int bound = f_vector(c)[0] - c.dim() - 1;
  auto g = dual_graph(c);
  o.require(dual_diameter(c) <= bound, label + " diameter");
  if (!is_normal(c) || !is_flag(c)) {
    o.require(false, label + " not normal flag");
    return;
  }
  for (int X = 0; X < n; X += stride) {
    auto dd = dual_distances(g, X);
    for (int Y = 0; Y < n; Y += stride) {
      auto p = combinatorial_segment_unchecked(c, X, Y);
      int len = static_cast<int>(p.facets.size()) - 1;
      std::set<int> Yv(c.facets[Y].begin(), c.facets[Y].end());
      bool ok = is_non_revisiting(c, p) && len >= dd[Y] && len <= bound &&
                static_cast<int>(p.pearls.size()) - 1 == set_distance(c, c.facets[X], Yv);
      if (!ok) {
        o.require(false, label + " pair " + std::to_string(X) + "->" + std::to_string(Y));
        return;
      }
    }
  }
}

Outcome hirsch_suite() {
  Outcome o;
  auto t0 = Clock::now();
  hirsch_all_pairs(o, derived_subdivision(simplex_boundary(3)), "sd(bd D3)", 1);
  hirsch_all_pairs(o, derived_subdivision(simplex_boundary(4)), "sd(bd D4)", 1);
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 30; ++t) {
    auto c = random_normal_flag_complex(rng, 1 + t % 3, 40);
    if (f_vector(c)[0] > 40) o.require(false, "generator");
    hirsch_all_pairs(o, c, "random " + std::to_string(t), 1);
  }
  double s = seconds_since(t0);
  o.require(s < kHirschSeconds, "runtime " + fmt6(s) + " s");
  return o;
}

SimplicialComplex random_subdivision(std::mt19937_64& rng, SimplicialComplex c, int steps) {
  for (int i = 0; i < steps; ++i) {
    auto fs = c.faces();
    Face f = fs[rng() % fs.size()];
    if (f.size() >= 2) c = stellar_subdivision(c, f);
  }
  return c;
}

bool collapses_to_point(const FacePoset& p) {
  auto r = collapse_search(p, {});
  if (!r.success || !validate_matching(p, r.matching)) return false;
  auto crit = critical_counts(p, r.matching);
  int total = 0;
  for (int x : crit) total += x;
  return total == 1 && crit[0] == 1;
}

Outcome morse_suite() {
  Outcome o;
  std::mt19937_64 rng(31);
  for (int t = 0; t < 10; ++t) {
    auto c = derived_subdivision(random_subdivision(rng, simplex(3), 4 + t));
    o.require(collapses_to_point(face_poset(c)), "sd subdivision " + std::to_string(t));
  }
  o.require(collapses_to_point(face_poset(derived_subdivision(unit_cube(3)))), "sd 3-cube");

  // (C, D) pairs: C a derived subdivision of a ball, D its k-skeleton, j = k.
  std::vector<std::pair<SimplicialComplex, int>> pairs;
  for (int d : {2, 3})
    for (int k = 0; k < d; ++k) pairs.push_back({derived_subdivision(simplex(d)), k});
  std::mt19937_64 g(77);
  while (pairs.size() < 20) {
    auto c = derived_subdivision(random_subdivision(g, simplex(2), 1 + pairs.size() % 4));
    pairs.push_back({c, static_cast<int>(pairs.size() % 2)});
  }
  int idx = 0;
  for (auto& [c, k] : pairs) {
    auto p = face_poset(c);
    auto skel = skeleton(c, k);
    auto ids = subcomplex_ids(p, skel);
    long expect = (k % 2 ? -1 : 1) * (euler_characteristic(skel) - 1);
    std::vector<MorseMatching> seen;
    for (std::uint64_t seed : {101u, 202u}) {
      CollapseOptions opt;
      opt.random_only = true;
      opt.seed = seed * (idx + 1);
      opt.restarts = 400;
      auto r = out_j_collapse(p, ids, k, opt);
      bool ok = r.search.success && validate_matching(p, r.search.matching) &&
                static_cast<long>(r.ledger.outward.size()) == expect;
      for (int s : r.ledger.outward) ok = ok && p.dim[s] == k;
      o.require(ok, "out-j pair " + std::to_string(idx) + " seed " + std::to_string(seed));
      seen.push_back(r.search.matching);
    }
    o.require(seen[0].pairs != seen[1].pairs, "out-j pair " + std::to_string(idx) + " sequences coincide");
    ++idx;
  }
  return o;
}

AffineSubspace coordinate(int d, std::vector<int> zero) {
  std::vector<RatVec> A;
  for (int i : zero) {
    RatVec r(d);
    r[i] = 1;
    A.push_back(r);
  }
  return *AffineSubspace::from_equations(d, A, RatVec(zero.size()));
}

Outcome gm_suite() {
  Outcome o;
  auto t0 = Clock::now();
  for (int n = 1; n <= 6; ++n) {
    std::vector<AffineSubspace> arr;
    for (int i = 0; i < n; ++i) arr.push_back(AffineSubspace::from_basis({}, RatVec{Rat(i), Rat(i * i)}));
    o.require(gm_betti(arr, 0) == 1 && gm_betti(arr, 1) == n, std::to_string(n) + " points");
  }
  o.require(gm_betti({coordinate(4, {0, 1})}, 1) == 1, "one plane");
  o.require(gm_betti_vector({coordinate(4, {0, 1}), coordinate(4, {2, 3})}, 4) == std::vector<int>{1, 2, 1, 0},
            "two planes");
  std::mt19937_64 rng(50);
  std::uniform_int_distribution<int> u(-3, 3), w(-7, 7);
  int checked = 0;
  while (checked < 10) {
    std::vector<AffineSubspace> arr;
    int n = 2 + checked % 3;
    for (int k = 0; k < n; ++k) {
      std::vector<RatVec> A(2, RatVec(4));
      for (auto& row : A)
        for (auto& x : row) x = u(rng);
      auto s = AffineSubspace::from_equations(4, A, {Rat(u(rng) % 2), 0});
      if (s && s->dim() == 2) arr.push_back(*s);
    }
    if (arr.empty()) continue;
    RatVec nrm(4);
    for (auto& x : nrm) x = w(rng);
    if (std::all_of(nrm.begin(), nrm.end(), [](const Rat& x) { return x == 0; })) nrm[0] = 1;
    auto H = *AffineSubspace::from_equations(4, {nrm}, {Rat(w(rng), 3)});
    if (!in_general_position(intersection_poset(arr), H)) continue;
    auto r = lefschetz_inequality_check(arr, H);
    o.require(r.all_hold, "lefschetz " + std::to_string(checked));
    ++checked;
  }
  double s = seconds_since(t0);
  o.require(s < kGmSeconds, "runtime " + fmt6(s) + " s");
  return o;
}

FieldElem rnd_rat(std::mt19937& g, int lo, int hi, int den) {
  std::uniform_int_distribution<int> d(lo, hi), q(1, den);
  return FieldElem(Rat(d(g), q(g)));
}

Outcome projective_suite() {
  Outcome o;
  std::mt19937 g(19);
  for (int t = 0; t < 10; ++t) {
    std::vector<int> xs{-3, -2, -1, 0, 1, 2, 3};
    std::shuffle(xs.begin(), xs.end(), g);
    PPConfig c;
    c.dim = 2;
    int np = 3 + t % 3, nr = 1 + t % 3;
    for (int i = 0; i < np; ++i) c.polytope.push_back({xs[i], xs[i] * xs[i]});
    for (int i = 0; i < nr; ++i) {
      FieldElem s = rnd_rat(g, -3, 3, 2);
      c.free_points.push_back({s, s * s - FieldElem(1) - rnd_rat(g, 0, 3, 7)});
    }
    try {
      auto r = lawrence_extension(c);
      bool ok = r.dim == 2 + nr && static_cast<int>(r.vertices.size()) == np + 2 * nr;
      for (std::size_t i = 0; i < r.vertices.size(); ++i) ok = ok && is_hull_vertex(r.vertices, i);
      o.require(ok, "lawrence " + std::to_string(t));
    } catch (const projective_error& e) {
      o.require(false, "lawrence " + std::to_string(t) + ": " + e.what());
    }
  }
  auto prog = compile_polynomial(parse_poly("x^2-2"));
  auto in = plane_frame_inputs();
  in["x"] = affine_point(FieldElem::sqrt2(), 0);
  auto v = evaluate_slp(prog, in);
  o.require(normalize_projective(v[prog.outputs[0]]) == Vec{0, 0, 1}, "staudt origin");

  auto K = build_k_configuration();
  o.require(K.config.size() == 64 && K.free_points.size() == 40, "K counts");
  o.require(frame_replay(K.config, K.derivation), "K replay");
  o.require(cohyperplanar(step6_points(FieldElem(-1, 1, 0, 0))), "step six at sqrt2-1");
  o.require(!cohyperplanar(step6_points(FieldElem(Rat(1, 2)))), "step six at 1/2");
  for (int n = 1; n <= 10; ++n) {
    auto c = pcctp_counts(n);
    o.require(c.dim == 69 && c.f0 == 12 * (n + 1) + 129, "pcctp n=" + std::to_string(n));
  }
  return o;
}

FieldElem random_elem(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  auto q = [&] { return Rat(num(rng), den(rng)); };
  return {q(), q(), q(), q()};
}

Outcome property_suites() {
  Outcome o;
  std::mt19937_64 rng(5);
  bool axioms = true, hom = true;
  for (int i = 0; i < 500; ++i) {
    FieldElem x = random_elem(rng), y = random_elem(rng), z = random_elem(rng);
    axioms = axioms && (x * y) * z == x * (y * z) && (x + y) + z == x + (y + z) &&
             x * (y + z) == x * y + x * z && x * y == y * x;
    if (!x.is_zero()) axioms = axioms && x * x.inverse() == FieldElem(1);
    hom = hom && field_sign(x) * field_sign(y) == field_sign(x * y);
  }
  o.require(axioms, "field axioms");
  o.require(hom, "sign homomorphism");

  auto K = build_k_configuration();
  std::mt19937 g(23);
  int maps = 0;
  while (maps < 20) {
    MatF m(5, 5);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) m(i, j) = rnd_rat(g, -5, 5, 3);
    if (rank(m) != 5) continue;
    o.require(frame_replay(map_config(K.config, m), K.derivation), "replay under map " + std::to_string(maps));
    ++maps;
  }

  GeoCCT t = generate_cct(12);
  bool mono = t.kappa.size() >= 13;
  for (std::size_t i = 1; i < t.kappa.size(); ++i)
    mono = mono && clifford_lambda_exact(t.kappa[i]) < clifford_lambda_exact(t.kappa[i - 1]);
  o.require(mono, "lambda monotone to 12");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"kappa table reproduction", kappa_table},
      {"worked iteration example", worked_iteration},
      {"seed certificates", seed_certificates},
      {"pipeline scaling to n=12", pipeline_scaling},
      {"f-vector law", f_vector_law},
      {"hirsch suite", hirsch_suite},
      {"morse suite", morse_suite},
      {"gm suite", gm_suite},
      {"projective suite", projective_suite},
      {"property suites", property_suites},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    auto t0 = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    double s = seconds_since(t0);
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << " ("
              << fmt6(s) << " s)";
    if (!o.note.empty()) std::cout << ": " << o.note;
    std::cout << std::endl;
    failed += !o.pass;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass\n";
  return failed ? 1 : 0;
}
