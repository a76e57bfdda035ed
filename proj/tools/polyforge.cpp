// polyforge command line: thin wiring of the library modules.
// Exit codes: 0 success, 1 a check failed, 2 usage or input error.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "polyforge/arrangement.hpp"
#include "polyforge/cct.hpp"
#include "polyforge/complexcore.hpp"
#include "polyforge/hirschpath.hpp"
#include "polyforge/morse.hpp"
#include "polyforge/projective.hpp"

using namespace polyforge;
using nlohmann::json;

namespace {

constexpr const char* kFormat = "polyforge/1";

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string out;
  int jobs = 1;
  std::uint64_t seed = 0;
  long budget = 0;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw usage_error(path + ": " + e.what());
  }
}

long budget_from_env(long flag) {
  if (flag > 0) return flag;
  if (const char* s = std::getenv("POLYFORGE_BUDGET")) {
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end && *end == 0 && v > 0) return v;
    throw usage_error("POLYFORGE_BUDGET must be a positive integer");
  }
  return 1000000;
}

/** Checks accumulate into a bundle; the exit code follows the overall verdict. */
class Bundle {
 public:
  Bundle(std::string kind, json params) {
    j_ = {{"format", kFormat}, {"subject", {{"kind", std::move(kind)}, {"params", std::move(params)}}}};
    j_["checks"] = json::array();
  }
  void check(const std::string& name, bool pass, json witness = nullptr) {
    j_["checks"].push_back({{"name", name}, {"pass", pass}, {"witness", std::move(witness)}});
    ok_ = ok_ && pass;
  }
  json& data() { return j_["data"]; }
  int emit(const Globals& g) {
    j_["pass"] = ok_;
    std::string s = j_.dump(2) + "\n";
    if (g.out.empty()) {
      std::cout << s;
    } else {
      std::ofstream f(g.out);
      if (!f) throw usage_error("cannot write " + g.out);
      f << s;
    }
    return ok_ ? 0 : 1;
  }

 private:
  json j_;
  bool ok_ = true;
};

std::string field_str(const FieldElem& x) { return x.str(); }

// ---------------------------------------------------------------------------

int hirsch_segment(const Globals& g, const std::string& file, int from, int to) {
  auto c = simplicial_from_json(read_json(file));
  Bundle b("hirsch-segment", {{"complex", file}, {"from", from}, {"to", to}});
  auto p = combinatorial_segment(c, from, to);
  b.data() = to_json_value(c, p);
  b.check("valid-path", is_valid_path(c, p));
  b.check("non-revisiting", is_non_revisiting(c, p));
  return b.emit(g);
}

int hirsch_diameter(const Globals& g, const std::string& file) {
  auto c = simplicial_from_json(read_json(file));
  Bundle b("hirsch-diameter", {{"complex", file}});
  int d = dual_diameter(c);
  int f0 = static_cast<int>(c.vertices().size()), dim = c.dim() + 1;
  b.data() = {{"diameter", d}, {"f0", f0}, {"facet_dim", dim - 1}, {"hirsch_bound", f0 - dim}};
  b.check("hirsch-bound", d <= f0 - dim, {{"diameter", d}, {"bound", f0 - dim}});
  return b.emit(g);
}

int morse_collapse(const Globals& g, const std::string& file, const std::string& target, int outj) {
  auto c = simplicial_from_json(read_json(file));
  auto p = face_poset(c);
  CollapseOptions opt;
  opt.budget = g.budget;
  opt.seed = g.seed;
  std::vector<int> tids;
  if (!target.empty()) tids = subcomplex_ids(p, simplicial_from_json(read_json(target)));
  Bundle b("morse-collapse", {{"complex", file}, {"target", target}, {"out_j", outj},
                              {"budget", g.budget}, {"seed", g.seed}});
  CollapseResult r;
  if (outj >= 0) {
    auto o = out_j_collapse(p, tids, outj, opt);
    r = o.search;
    b.data()["ledger"] = to_json_value(p, o.ledger);
  } else {
    r = collapse_search(p, tids, opt);
  }
  b.data()["matching"] = to_json_value(p, r.matching);
  b.data()["strategy"] = r.strategy;
  b.data()["nodes"] = r.nodes;
  b.check("collapse-found", r.success, {{"strategy", r.strategy}});
  if (r.success) b.check("acyclic-matching", validate_matching(p, r.matching));
  return b.emit(g);
}

int morse_validate(const Globals& g, const std::string& file, const std::string& mfile) {
  auto c = simplicial_from_json(read_json(file));
  auto p = face_poset(c);
  Bundle b("morse-validate", {{"complex", file}, {"matching", mfile}});
  MorseMatching m;
  try {
    json mj = read_json(mfile);
    if (mj.contains("data") && mj.at("data").contains("matching")) mj = mj.at("data").at("matching");
    m = matching_from_json(p, mj);
    partner_map(p, m);
  } catch (const usage_error&) {
    throw;
  } catch (const std::exception& e) {
    b.check("well-formed", false, e.what());
    return b.emit(g);
  }
  b.check("well-formed", true);
  bool ok = validate_matching(p, m);
  b.check("acyclic", ok);
  if (ok) b.data()["critical_counts"] = critical_counts(p, m);
  return b.emit(g);
}

int arr_betti(const Globals& g, const std::string& file, int i) {
  auto j = read_json(file);
  auto arr = arrangement_from_json(j);
  int d = j.at("dim").get<int>();
  Bundle b("arr-betti", {{"file", file}, {"i", i}});
  if (i >= 0) {
    b.data() = {{"i", i}, {"betti", gm_betti(arr, i)}};
  } else {
    b.data() = {{"betti", gm_betti_vector(arr, d)}};
  }
  return b.emit(g);
}

json cct_checks(Bundle& b, const GeoCCT& t) {
  std::string why;
  bool sym = check_symmetric(t, &why);
  b.check("symmetric", sym, why.empty() ? json(nullptr) : json(why));
  bool cop = true;
  for (std::size_t i = 0; i < t.abs.complex.cubes.size() && cop; ++i) {
    auto& q = t.abs.complex.cubes[i];
    if (cube_rank(t, q) != static_cast<std::size_t>(q.dim + 1)) {
      cop = false;
      b.check("coplanar-cubes", false, {{"cube", i}});
    }
  }
  if (cop) b.check("coplanar-cubes", true, {{"cubes", t.abs.complex.cubes.size()}});
  json cert = nullptr;
  if (!sym) return cert;
  if (t.width() >= 2) {
    auto s = slope(t);
    b.check("slope-obtuse", s.obtuse, {{"angle", fmt6(s.angle)}});
    b.check("oriented", check_oriented(t));
  }
  if (t.width() >= 3) {
    b.check("transversal", check_transversal(t));
    try {
      auto c = check_convex_position(t);
      cert = json::array();
      for (auto& n : c.normals) cert.push_back(vec_to_json(n));
      b.check("convex-position", true, {{"facets", c.normals.size()}});
    } catch (const cct_error& e) {
      b.check("convex-position", false, e.what());
    }
  }
  bool kap = true;
  for (std::size_t i = 0; i < t.kappa.size() && static_cast<int>(i) <= t.width(); ++i) {
    bool found = false;
    for (int k = 0; k < 12; ++k) found = found || t.coords[12 * i + k] == t.kappa[i];
    kap = kap && found;
  }
  b.check("kappa-in-layers", kap);
  return cert;
}

int cct_generate(const Globals& g, int n) {
  Bundle b("cct-generate", {{"n", n}});
  GeoCCT t = generate_cct(n);
  auto cert = cct_checks(b, t);
  b.data() = to_json_value(t);
  b.data()["f0"] = t.coords.size();
  b.data()["rs_bound"] = 4 * 24;
  b.data()["facet_normals"] = cert;
  return b.emit(g);
}

int cct_verify(const Globals& g, const std::string& file) {
  auto j = read_json(file);
  const json& d = j.contains("data") ? j.at("data") : j;
  GeoCCT t;
  try {
    t = geocct_from_json(d);
  } catch (const std::exception& e) {
    throw usage_error(file + ": " + e.what());
  }
  Bundle b("cct-verify", {{"file", file}, {"width", t.width()}});
  auto cert = cct_checks(b, t);
  if (d.contains("facet_normals") && !d.at("facet_normals").is_null() && !cert.is_null())
    b.check("stored-normals-match", d.at("facet_normals") == cert);
  return b.emit(g);
}

int cct_kappa(const Globals& g, int upto) {
  if (upto < 0) throw usage_error("--upto must be nonnegative");
  std::ostringstream os;
  os << "# " << kFormat << " kappa table: first three coordinates, lambda exact, lambda float\n";
  auto k = kappa_chain(upto);
  for (int i = 0; i <= upto; ++i) {
    FieldElem l = clifford_lambda_exact(k[i]);
    os << "kappa" << i << " | " << field_str(k[i][0]) << " | " << field_str(k[i][1]) << " | "
       << field_str(k[i][2]) << " | " << field_str(l) << " | " << fmt6(l.to_double()) << "\n";
  }
  if (g.out.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(g.out);
    if (!f) throw usage_error("cannot write " + g.out);
    f << os.str();
  }
  return 0;
}

int proj_staudt(const Globals& g, const std::string& poly, const std::string& at, const std::string& emit) {
  IntPoly p;
  FieldElem x;
  try {
    p = parse_poly(poly);
    x = parse_field(at);
  } catch (const projective_error& e) {
    throw usage_error(e.what());
  }
  auto prog = compile_polynomial(p);
  Bundle b("proj-staudt", {{"poly", poly}, {"at", at}});
  auto in = plane_frame_inputs();
  in["x"] = affine_point(x, 0);
  auto vals = evaluate_slp(prog, in);
  Vec outp = normalize_projective(vals.at(prog.outputs.at(0)));
  FieldElem v = axis_value(outp);
  b.data() = {{"value", to_json_value(v)}, {"value_str", field_str(v)}, {"output_point", vec_to_json(outp)},
              {"steps", prog.steps.size()}};
  b.check("output-equals-polynomial", v == p(x), {{"expected", field_str(p(x))}});
  if (!emit.empty()) {
    json j = to_json_value(prog);
    j["format"] = kFormat;
    std::ofstream f(emit);
    if (!f) throw usage_error("cannot write " + emit);
    f << j.dump(2) << "\n";
  }
  return b.emit(g);
}

int proj_lawrence(const Globals& g, const std::string& file) {
  PPConfig c;
  try {
    c = pp_from_json(read_json(file));
  } catch (const usage_error&) {
    throw;
  } catch (const std::exception& e) {
    throw usage_error(file + ": " + e.what());
  }
  Bundle b("proj-lawrence", {{"config", file}});
  try {
    auto r = lawrence_extension(c);
    int dp = affine_dimension(c.polytope), k = static_cast<int>(c.free_points.size());
    json vs = json::array();
    for (auto& v : r.vertices) vs.push_back(vec_to_json(v));
    b.data() = {{"dim", r.dim}, {"f0", r.vertices.size()}, {"vertices", vs}};
    b.check("vertices-certified", true, {{"count", r.vertices.size()}});
    b.check("dimension-formula", r.dim == dp + k, {{"expected", dp + k}});
    b.check("vertex-count-formula", static_cast<int>(r.vertices.size()) == static_cast<int>(c.polytope.size()) + 2 * k);
  } catch (const projective_error& e) {
    b.check("vertices-certified", false, e.what());
  }
  return b.emit(g);
}

int proj_kconfig(const Globals& g, bool verify) {
  auto K = build_k_configuration();
  Bundle b("proj-k-config", {{"verify", verify}});
  json pts = json::array();
  for (std::size_t i = 0; i < K.config.size(); ++i)
    pts.push_back({{"name", K.config.names[i]}, {"coords", vec_to_json(K.config.points[i])}});
  b.data() = {{"f0_K", K.config.size()}, {"f0_R", K.free_points.size()},
              {"lambda", to_json_value(K.lambda)}, {"points", pts}};
  b.check("f0-K", K.config.size() == 64, K.config.size());
  b.check("f0-R", K.free_points.size() == 40, K.free_points.size());
  if (verify) {
    b.check("frame-replay", frame_replay(K.config, K.derivation));
    b.check("lambda-certificate", K.certificate.divisible && K.certificate.nontrivial);
    b.check("step6-cohyperplanar", cohyperplanar(step6_points(K.lambda)));
    b.check("step6-generic-lambda-fails", !cohyperplanar(step6_points(FieldElem(Rat(1, 2)))));
    auto t = seed_ct1();
    bool same = true;
    for (int i : K.torus_points) {
      bool f = false;
      for (auto& p : t.coords) f = f || to_vec(p) == K.config.points[i];
      same = same && f;
    }
    b.check("torus-points-match-seed", same);
  }
  return b.emit(g);
}

int proj_pcctp(const Globals& g, int n) {
  auto c = pcctp_counts(n);
  Bundle b("proj-pcctp", {{"n", n}});
  b.data() = {{"dim", c.dim}, {"f0", c.f0}};
  b.check("counts", c.dim == 69 && c.f0 == 12 * (n + 1) + 129);
  return b.emit(g);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polyforge: exact combinatorial and polytope constructions"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--out", g.out, "write the artifact to this file");
  app.add_option("--jobs", g.jobs, "worker count (runs are sequential)")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--budget", g.budget, "search node budget (default POLYFORGE_BUDGET or 1e6)");

  std::function<int()> action;
  std::string file, target, matching, poly, at, emit;
  int from = -1, to = -1, outj = -1, idx = -1, n = 0, upto = 10;
  bool verify = false, counts = false;

  auto* hirsch = app.add_subcommand("hirsch", "combinatorial segments and dual diameters");
  hirsch->require_subcommand(1);
  auto* hseg = hirsch->add_subcommand("segment", "segment between two facets");
  hseg->add_option("--complex", file)->required();
  hseg->add_option("--from", from)->required();
  hseg->add_option("--to", to)->required();
  hseg->callback([&] { action = [&] { return hirsch_segment(g, file, from, to); }; });
  auto* hdia = hirsch->add_subcommand("diameter", "dual graph diameter");
  hdia->add_option("--complex", file)->required();
  hdia->callback([&] { action = [&] { return hirsch_diameter(g, file); }; });

  auto* morse = app.add_subcommand("morse", "collapse search and matching checks");
  morse->require_subcommand(1);
  auto* mcol = morse->add_subcommand("collapse", "search for a collapse");
  mcol->add_option("--complex", file)->required();
  mcol->add_option("--target", target);
  mcol->add_option("--out-j", outj);
  mcol->add_option("--budget", g.budget);
  mcol->add_option("--seed", g.seed);
  mcol->callback([&] { action = [&] { return morse_collapse(g, file, target, outj); }; });
  auto* mval = morse->add_subcommand("validate", "validate a matching");
  mval->add_option("--complex", file)->required();
  mval->add_option("--matching", matching)->required();
  mval->callback([&] { action = [&] { return morse_validate(g, file, matching); }; });

  auto* arr = app.add_subcommand("arr", "subspace arrangements");
  arr->require_subcommand(1);
  auto* abet = arr->add_subcommand("betti", "complement Betti numbers");
  abet->add_option("--file", file)->required();
  abet->add_option("--i", idx);
  abet->callback([&] { action = [&] { return arr_betti(g, file, idx); }; });

  auto* cct = app.add_subcommand("cct", "cross-bedding cubical tori");
  cct->require_subcommand(1);
  auto* cgen = cct->add_subcommand("generate", "build CT^s[n] with certificates");
  cgen->add_option("--n", n)->required()->check(CLI::Range(1, 1000));
  cgen->callback([&] { action = [&] { return cct_generate(g, n); }; });
  auto* cver = cct->add_subcommand("verify", "re-check a generated torus");
  cver->add_option("--file", file)->required();
  cver->callback([&] { action = [&] { return cct_verify(g, file); }; });
  auto* ckap = cct->add_subcommand("kappa", "the kappa table");
  ckap->add_option("--upto", upto);
  ckap->callback([&] { action = [&] { return cct_kappa(g, upto); }; });

  auto* proj = app.add_subcommand("proj", "projective constructions");
  proj->require_subcommand(1);
  auto* pst = proj->add_subcommand("staudt", "compile and evaluate a polynomial");
  pst->add_option("--poly", poly)->required();
  pst->add_option("--at", at)->required();
  pst->add_option("--emit", emit);
  pst->callback([&] { action = [&] { return proj_staudt(g, poly, at, emit); }; });
  auto* plaw = proj->add_subcommand("lawrence", "Lawrence extension of a PP configuration");
  plaw->add_option("--config", file)->required();
  plaw->callback([&] { action = [&] { return proj_lawrence(g, file); }; });
  auto* pk = proj->add_subcommand("k-config", "the 64-point configuration");
  pk->add_flag("--verify", verify);
  pk->callback([&] { action = [&] { return proj_kconfig(g, verify); }; });
  auto* ppc = proj->add_subcommand("pcctp", "PCCTP count arithmetic");
  ppc->add_option("--n", n)->required()->check(CLI::Range(1, 100000));
  ppc->add_flag("--counts", counts);
  ppc->callback([&] { action = [&] { return proj_pcctp(g, n); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    g.budget = budget_from_env(g.budget);
    return action();
  } catch (const usage_error& e) {
    std::cerr << "polyforge: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "polyforge: malformed input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "polyforge: " << e.what() << "\n";
    return 1;
  }
}
