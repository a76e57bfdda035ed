#pragma once

#include <nlohmann/json.hpp>

#include <cctype>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyforge/cct.hpp"
#include "polyforge/exactfield.hpp"

namespace polyforge {

struct projective_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Flats in homogeneous coordinates

/** Linear span basis of the given vectors (independent subset). */
inline std::vector<Vec> span_basis(const std::vector<Vec>& vs) {
  if (vs.empty()) return {};
  MatF m(vs.size(), vs[0].size());
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < vs[0].size(); ++j) m(i, j) = vs[i][j];
  rref(m);
  std::vector<Vec> out;
  for (std::size_t i = 0; i < m.rows; ++i) {
    Vec r = m.row(i);
    bool z = true;
    for (auto& x : r) z = z && x.is_zero();
    if (!z) out.push_back(r);
  }
  return out;
}

/** Intersection of two linear subspaces given by bases. */
inline std::vector<Vec> intersect_spans(const std::vector<Vec>& u, const std::vector<Vec>& v) {
  if (u.empty() || v.empty()) return {};
  std::size_t n = u[0].size();
  MatF m(n, u.size() + v.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < u.size(); ++j) m(i, j) = u[j][i];
    for (std::size_t j = 0; j < v.size(); ++j) m(i, u.size() + j) = -v[j][i];
  }
  std::vector<Vec> out;
  for (auto& k : nullspace(m)) {
    Vec x(n);
    for (std::size_t j = 0; j < u.size(); ++j)
      for (std::size_t i = 0; i < n; ++i) x[i] += k[j] * u[j][i];
    out.push_back(x);
  }
  return span_basis(out);
}

/** Representative with last coordinate 1, or first nonzero coordinate 1 at infinity. */
inline Vec normalize_projective(const Vec& x) {
  std::size_t piv = x.size();
  if (!x.empty() && !x.back().is_zero()) piv = x.size() - 1;
  for (std::size_t i = 0; i < x.size() && piv == x.size(); ++i)
    if (!x[i].is_zero()) piv = i;
  if (piv == x.size()) throw projective_error("zero vector is not a projective point");
  Vec r(x);
  FieldElem inv = x[piv].inverse();
  for (auto& c : r) c *= inv;
  return r;
}

inline bool projectively_equal(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) return false;
  return normalize_projective(x) == normalize_projective(y);
}

/** The unique point common to the spans of the given point groups. */
inline Vec meet_flats(const std::vector<std::vector<Vec>>& flats) {
  if (flats.empty()) throw projective_error("ill-formed step: no flats");
  std::vector<Vec> cur = span_basis(flats[0]);
  for (std::size_t i = 1; i < flats.size(); ++i) cur = intersect_spans(cur, span_basis(flats[i]));
  if (cur.size() != 1)
    throw projective_error("ill-formed step: flats meet in dimension " + std::to_string(cur.size()));
  return normalize_projective(cur[0]);
}

// ---------------------------------------------------------------------------
// Named configurations and frame derivations

struct NamedConfig {
  std::vector<std::string> names;
  std::vector<Vec> points;  // homogeneous

  int find(const std::string& n) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return static_cast<int>(i);
    return -1;
  }
  int id(const std::string& n) const {
    int i = find(n);
    if (i < 0) throw projective_error("unknown point " + n);
    return i;
  }
  const Vec& at(const std::string& n) const { return points[id(n)]; }
  int add(const std::string& n, const Vec& p) {
    if (find(n) >= 0) throw projective_error("duplicate point " + n);
    names.push_back(n);
    points.push_back(p);
    return static_cast<int>(points.size() - 1);
  }
  std::size_t size() const { return points.size(); }
};

struct DerivationStep {
  int target;
  std::vector<std::vector<int>> flats;
};

struct FrameDerivation {
  std::vector<int> base;
  std::vector<DerivationStep> steps;
};

/** Replays every step from the base and compares with the stored points. */
inline bool frame_replay(const NamedConfig& cfg, const FrameDerivation& der) {
  std::vector<std::optional<Vec>> known(cfg.size());
  for (int b : der.base) known.at(b) = cfg.points.at(b);
  for (auto& s : der.steps) {
    std::vector<std::vector<Vec>> flats;
    for (auto& f : s.flats) {
      std::vector<Vec> g;
      for (int id : f) {
        if (!known.at(id)) throw projective_error("ill-formed step: uses an underived point");
        g.push_back(*known[id]);
      }
      flats.push_back(g);
    }
    Vec x = meet_flats(flats);
    if (!projectively_equal(x, cfg.points.at(s.target))) return false;
    known[s.target] = x;
  }
  return true;
}

/** Applies a linear map to every point of a configuration. */
inline NamedConfig map_config(const NamedConfig& cfg, const MatF& m) {
  NamedConfig out = cfg;
  for (auto& p : out.points) p = normalize_projective(m.apply(p));
  return out;
}

// ---------------------------------------------------------------------------
// Lattice configurations

/** All points of {-1,0,1}^d, lexicographic. */
inline std::vector<Vec> lattice_qd(int d) {
  if (d < 1) throw projective_error("d must be positive");
  std::vector<Vec> out{Vec{}};
  for (int i = 0; i < d; ++i) {
    std::vector<Vec> next;
    for (auto& p : out)
      for (int c = -1; c <= 1; ++c) {
        Vec q = p;
        q.push_back(FieldElem(c));
        next.push_back(q);
      }
    out = next;
  }
  return out;
}

struct ProjConfig {
  std::vector<Vec> points;  // affine
  std::vector<Vec> frame;   // 0, p_i e_i, p_i e_i / 2
};

inline ProjConfig proj_config(const Vec& p) {
  int d = static_cast<int>(p.size());
  if (d < 3) throw projective_error("proj_config needs d >= 3");
  for (auto& x : p)
    if (x.sign() <= 0) throw projective_error("non-positive coordinate");
  ProjConfig c;
  FieldElem half(Rat(1, 2));
  for (auto& q : lattice_qd(d)) {
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = half * p[i] * (q[i] + FieldElem(1));
    c.points.push_back(x);
  }
  c.frame.push_back(Vec(d));
  for (int i = 0; i < d; ++i) {
    Vec e(d), h(d);
    e[i] = p[i];
    h[i] = half * p[i];
    c.frame.push_back(e);
    c.frame.push_back(h);
  }
  return c;
}

/** The derivation of Q³ from the cube vertices and the center, homogeneous coordinates. */
inline std::pair<NamedConfig, FrameDerivation> cube_lattice_derivation() {
  NamedConfig cfg;
  FrameDerivation der;
  auto name = [](const Vec& q) {
    std::string s = "q";
    for (auto& x : q) s += x.sign() > 0 ? "+" : (x.sign() < 0 ? "-" : "0");
    return s;
  };
  auto hom = [](const Vec& q) {
    Vec h = q;
    h.push_back(FieldElem(1));
    return h;
  };
  auto pts = lattice_qd(3);
  for (auto& q : pts) {
    int nz = 0;
    for (auto& x : q) nz += !x.is_zero();
    if (nz == 3 || nz == 0) der.base.push_back(cfg.add(name(q), hom(q)));
  }
  // facet centers as the meet of two diagonals of the facet
  for (int i = 0; i < 3; ++i)
    for (int s : {1, -1}) {
      Vec c(3);
      c[i] = s;
      auto corner = [&](int a, int b) {
        Vec v(3);
        v[i] = s;
        v[(i + 1) % 3] = a;
        v[(i + 2) % 3] = b;
        return cfg.id(name(v));
      };
      int t = cfg.add(name(c), hom(c));
      der.steps.push_back({t, {{corner(1, 1), corner(-1, -1)}, {corner(1, -1), corner(-1, 1)}}});
    }
  // edge midpoints: edge meets the coordinate plane through the center and two facet centers
  for (auto& q : pts) {
    int nz = 0, zi = -1;
    for (int i = 0; i < 3; ++i) {
      if (!q[i].is_zero()) ++nz;
      else zi = i;
    }
    if (nz != 2) continue;
    Vec hi = q, lo = q;
    hi[zi] = 1;
    lo[zi] = -1;
    Vec f1(3), f2(3);
    f1[(zi + 1) % 3] = 1;
    f2[(zi + 2) % 3] = 1;
    int t = cfg.add(name(q), hom(q));
    der.steps.push_back(
        {t, {{cfg.id(name(hi)), cfg.id(name(lo))}, {cfg.id("q000"), cfg.id(name(f1)), cfg.id(name(f2))}}});
  }
  return {cfg, der};
}

// ---------------------------------------------------------------------------
// Incidence programs in the projective plane

struct SlpStep {
  enum Op { Join, Meet } op;
  int a, b;
};

struct IncidenceProgram {
  std::vector<std::string> inputs;
  std::vector<SlpStep> steps;
  std::vector<int> outputs;  // ids: inputs first, then steps
};

inline Vec cross3(const Vec& x, const Vec& y) {
  return {x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]};
}

inline bool is_zero_vec(const Vec& v) {
  for (auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

/** Values of all ids; points and lines as homogeneous triples. */
inline std::vector<Vec> evaluate_slp(const IncidenceProgram& p, const std::map<std::string, Vec>& in) {
  std::vector<Vec> val;
  for (auto& n : p.inputs) {
    auto it = in.find(n);
    if (it == in.end()) throw projective_error("missing input " + n);
    if (it->second.size() != 3) throw projective_error("input " + n + " must have 3 homogeneous coordinates");
    val.push_back(it->second);
  }
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    auto& s = p.steps[i];
    int cur = static_cast<int>(val.size());
    if (s.a < 0 || s.b < 0 || s.a >= cur || s.b >= cur) throw projective_error("ill-formed step: forward reference");
    Vec r = cross3(val[s.a], val[s.b]);
    if (is_zero_vec(r))
      throw projective_error(s.op == SlpStep::Join ? "ill-formed step: join of equal points"
                                                   : "ill-formed step: meet of identical lines");
    val.push_back(r);
  }
  return val;
}

inline Vec affine_point(const FieldElem& x, const FieldElem& y) { return {x, y, FieldElem(1)}; }

/** Inputs of the frame Q²+1 = {0,1,2}². */
inline std::map<std::string, Vec> plane_frame_inputs() {
  std::map<std::string, Vec> m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m["q" + std::to_string(i) + std::to_string(j)] = affine_point(i, j);
  return m;
}

/** Builds programs over the frame Q²+1; extra inputs follow the nine frame points. */
class SlpBuilder {
 public:
  IncidenceProgram prog;
  std::vector<int> vars;
  int xaxis, yaxis, h, xinf, yinf, linf, origin, unit, up;

  explicit SlpBuilder(const std::vector<std::string>& extra = {}) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) prog.inputs.push_back("q" + std::to_string(i) + std::to_string(j));
    for (auto& n : extra) {
      vars.push_back(static_cast<int>(prog.inputs.size()));
      prog.inputs.push_back(n);
    }
    origin = q(0, 0);
    unit = q(1, 0);
    up = q(0, 1);
    xaxis = join(origin, unit);
    yaxis = join(origin, up);
    h = join(up, q(1, 1));
    xinf = meet(xaxis, h);
    yinf = meet(yaxis, join(unit, q(1, 1)));
    linf = join(xinf, yinf);
  }

  int q(int i, int j) const { return i * 3 + j; }
  int join(int a, int b) { return push(SlpStep::Join, a, b); }
  int meet(int a, int b) { return push(SlpStep::Meet, a, b); }

  // Arithmetic on points a e1 of the x-axis.
  int add(int a, int b) {
    int q1 = meet(join(a, yinf), h);
    int d1 = meet(join(origin, q1), linf);
    int q2 = meet(join(b, d1), h);
    return meet(join(q2, yinf), xaxis);
  }
  int sub(int c, int b) {
    int q2 = meet(join(c, yinf), h);
    int d1 = meet(join(b, q2), linf);
    int q1 = meet(join(origin, d1), h);
    return meet(join(q1, yinf), xaxis);
  }
  int mul(int a, int b) {
    int d1 = meet(join(up, unit), linf);
    int c = meet(join(a, d1), yaxis);
    int d2 = meet(join(up, b), linf);
    return meet(join(c, d2), xaxis);
  }
  int div(int c, int b) {
    int d2 = meet(join(up, b), linf);
    int y = meet(join(c, d2), yaxis);
    int d1 = meet(join(up, unit), linf);
    return meet(join(y, d1), xaxis);
  }
  /** n e1 from 0 and 1 by additions (binary doubling). */
  int constant(long n) {
    if (n == 0) return origin;
    if (n < 0) return sub(origin, constant(-n));
    int acc = -1, pw = unit;
    for (long m = n;;) {
      if (m & 1) acc = acc < 0 ? pw : add(acc, pw);
      m >>= 1;
      if (!m) break;
      pw = add(pw, pw);
    }
    return acc;
  }

 private:
  int push(SlpStep::Op op, int a, int b) {
    prog.steps.push_back({op, a, b});
    return static_cast<int>(prog.inputs.size() + prog.steps.size() - 1);
  }
};

namespace detail {
inline IncidenceProgram binary_gadget(int which) {
  SlpBuilder b({"a", "b"});
  int x = b.vars[0], y = b.vars[1];
  int out = which == 0 ? b.add(x, y) : which == 1 ? b.mul(x, y) : which == 2 ? b.sub(x, y) : b.div(x, y);
  b.prog.outputs = {out};
  return b.prog;
}
}  // namespace detail

inline IncidenceProgram gadget_add() { return detail::binary_gadget(0); }
inline IncidenceProgram gadget_mul() { return detail::binary_gadget(1); }
/** ADD with the output and first input swapped: (c, b) -> c - b. */
inline IncidenceProgram gadget_sub() { return detail::binary_gadget(2); }
/** MLT with the output and first input swapped: (c, b) -> c / b. */
inline IncidenceProgram gadget_div() { return detail::binary_gadget(3); }

/** Integer polynomial, coefficients low to high. */
struct IntPoly {
  std::vector<long> coeffs;
  int degree() const {
    for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i)
      if (coeffs[i] != 0) return i;
    return -1;
  }
  FieldElem operator()(const FieldElem& x) const {
    FieldElem r;
    for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) r = r * x + FieldElem(coeffs[i]);
    return r;
  }
};

/** Parses sums of terms c, c*x, c x^k, x^k with integer c. */
inline IntPoly parse_poly(const std::string& s) {
  IntPoly p;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  bool any = false;
  while (true) {
    skip();
    if (i >= s.size()) break;
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
      skip();
    } else if (any) {
      throw projective_error("bad polynomial: " + s);
    }
    long c = 1;
    bool has_c = false;
    if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      c = 0;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) c = c * 10 + (s[i++] - '0');
      has_c = true;
      skip();
      if (i < s.size() && s[i] == '*') {
        ++i;
        skip();
      }
    }
    int e = 0;
    if (i < s.size() && s[i] == 'x') {
      ++i;
      e = 1;
      skip();
      if (i < s.size() && s[i] == '^') {
        ++i;
        skip();
        e = 0;
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
          throw projective_error("bad polynomial: " + s);
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) e = e * 10 + (s[i++] - '0');
      }
    } else if (!has_c) {
      throw projective_error("bad polynomial: " + s);
    }
    if (static_cast<int>(p.coeffs.size()) <= e) p.coeffs.resize(e + 1, 0);
    p.coeffs[e] += sign * c;
    any = true;
  }
  if (!any) throw projective_error("bad polynomial: empty");
  return p;
}

/** Parses "p/q", "sqrt2", "3sqrt6", "1+sqrt2", "-sqrt3/2" style field constants. */
inline FieldElem parse_field(const std::string& s) {
  FieldElem r;
  std::size_t i = 0;
  bool any = false;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (any) {
      throw projective_error("bad field constant: " + s);
    }
    std::size_t j = i;
    while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '/')) ++j;
    std::string num = s.substr(i, j - i);
    i = j;
    FieldElem unit(1);
    if (s.compare(i, 4, "sqrt") == 0) {
      char k = i + 4 < s.size() ? s[i + 4] : '?';
      unit = k == '2' ? FieldElem::sqrt2() : k == '3' ? FieldElem::sqrt3()
           : k == '6' ? FieldElem::sqrt6() : throw projective_error("bad field constant: " + s);
      i += 5;
      if (i < s.size() && s[i] == '/') {
        std::size_t k2 = ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        unit = unit / FieldElem(parse_rat(s.substr(k2, i - k2)));
      }
    } else if (num.empty()) {
      throw projective_error("bad field constant: " + s);
    }
    FieldElem c = num.empty() ? FieldElem(1) : FieldElem(parse_rat(num));
    r += FieldElem(sign) * c * unit;
    any = true;
  }
  if (!any) throw projective_error("bad field constant: empty");
  return r;
}

/** A program with input x e1 and output ψ(x) e1, by Horner composition of gadgets. */
inline IncidenceProgram compile_polynomial(const IntPoly& psi) {
  int deg = psi.degree();
  if (deg < 0) throw projective_error("zero polynomial");
  SlpBuilder b({"x"});
  int x = b.vars[0];
  if (deg == 1 && psi.coeffs[1] == 1 && psi.coeffs[0] == 0) {
    b.prog.outputs = {x};
    return b.prog;
  }
  int acc = b.constant(psi.coeffs[deg]);
  for (int i = deg - 1; i >= 0; --i) {
    acc = b.mul(acc, x);
    if (psi.coeffs[i] != 0) acc = b.add(acc, b.constant(psi.coeffs[i]));
  }
  b.prog.outputs = {acc};
  return b.prog;
}

/** x-coordinate of a point on the x-axis. */
inline FieldElem axis_value(const Vec& p) {
  if (p[2].is_zero()) throw projective_error("point at infinity");
  if (!p[1].is_zero()) throw projective_error("point off the axis");
  return p[0] / p[2];
}

inline FieldElem evaluate_on_axis(const IncidenceProgram& prog, const FieldElem& x) {
  auto in = plane_frame_inputs();
  in[prog.inputs.back()] = affine_point(x, 0);
  auto v = evaluate_slp(prog, in);
  return axis_value(v.at(prog.outputs.at(0)));
}

struct CoorConfig {
  FieldElem zeta, lower, upper;
  IntPoly psi;
  std::vector<Vec> points;  // every value point of the three evaluations, plus the frame
  bool sign_change = false;
  bool isolation_asserted = true;  // root isolation is the caller's claim
};

inline CoorConfig coor_config(const FieldElem& zeta, const IntPoly& psi, const FieldElem& lower,
                              const FieldElem& upper) {
  if (!psi(zeta).is_zero()) throw projective_error("psi(zeta) is not zero");
  CoorConfig c{zeta, lower, upper, psi, {}, false, true};
  c.sign_change = psi.degree() <= 4 && psi(lower).sign() * psi(upper).sign() < 0;
  auto collect = [&](const IncidenceProgram& p, const FieldElem& x) {
    auto in = plane_frame_inputs();
    in[p.inputs.back()] = affine_point(x, 0);
    auto v = evaluate_slp(p, in);
    std::size_t n = p.inputs.size();
    for (std::size_t i = 0; i < v.size(); ++i) {
      bool is_point = i < n || p.steps[i - n].op == SlpStep::Meet;
      if (!is_point) continue;
      Vec q = normalize_projective(v[i]);
      bool seen = false;
      for (auto& r : c.points) seen = seen || r == q;
      if (!seen) c.points.push_back(q);
    }
  };
  auto rational_endpoint = [&](const FieldElem& r) {
    if (!r.is_rational()) throw projective_error("interval endpoints must be rational");
    Rat q = r.a;
    IntPoly lin{{-static_cast<long>(boost::multiprecision::numerator(q)),
                 static_cast<long>(boost::multiprecision::denominator(q))}};
    collect(compile_polynomial(lin), r);
  };
  rational_endpoint(lower);
  collect(compile_polynomial(psi), zeta);
  rational_endpoint(upper);
  return c;
}

// ---------------------------------------------------------------------------
// Exact linear programming

/** Whether x lies in the convex hull of pts: phase-one simplex with Bland's rule. */
inline bool in_convex_hull(const std::vector<Vec>& pts, const Vec& x) {
  if (pts.empty()) return false;
  std::size_t d = x.size(), n = pts.size(), m = d + 1;
  // rows: coordinates and the affine sum; columns: n lambdas, m artificials, rhs
  MatF t(m + 1, n + m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    FieldElem rhs = i < d ? x[i] : FieldElem(1);
    int s = rhs.sign() < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) t(i, j) = FieldElem(s) * (i < d ? pts[j][i] : FieldElem(1));
    t(i, n + i) = 1;
    t(i, n + m) = FieldElem(s) * rhs;
  }
  // objective row: minimize sum of artificials, stored as reduced costs
  for (std::size_t j = 0; j <= n + m; ++j) {
    if (j >= n && j < n + m) continue;
    FieldElem c;
    for (std::size_t i = 0; i < m; ++i) c -= t(i, j);
    t(m, j) = c;
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;
  while (true) {
    std::size_t enter = n + m;
    for (std::size_t j = 0; j < n + m; ++j)
      if (t(m, j).sign() < 0) {
        enter = j;
        break;
      }
    if (enter == n + m) break;
    std::size_t leave = m;
    FieldElem best;
    for (std::size_t i = 0; i < m; ++i) {
      if (t(i, enter).sign() <= 0) continue;
      FieldElem r = t(i, n + m) / t(i, enter);
      if (leave == m || r < best || (r == best && basis[i] < basis[leave])) {
        leave = i;
        best = r;
      }
    }
    if (leave == m) break;  // unbounded cannot happen in phase one
    FieldElem piv = t(leave, enter).inverse();
    for (std::size_t j = 0; j <= n + m; ++j) t(leave, j) *= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave || t(i, enter).is_zero()) continue;
      FieldElem f = t(i, enter);
      for (std::size_t j = 0; j <= n + m; ++j) t(i, j) -= f * t(leave, j);
    }
    basis[leave] = enter;
  }
  return t(m, n + m).is_zero();
}

inline bool is_hull_vertex(const std::vector<Vec>& pts, std::size_t i) {
  std::vector<Vec> rest;
  for (std::size_t j = 0; j < pts.size(); ++j)
    if (j != i && !(pts[j] == pts[i])) rest.push_back(pts[j]);
  return !in_convex_hull(rest, pts[i]);
}

inline int affine_dimension(const std::vector<Vec>& pts) {
  if (pts.empty()) return -1;
  std::vector<Vec> diffs;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    Vec d(pts[i].size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = pts[i][k] - pts[0][k];
    diffs.push_back(d);
  }
  return static_cast<int>(span_basis(diffs).size());
}

// ---------------------------------------------------------------------------
// Polytope-point configurations

struct PPConfig {
  int dim = 0;
  std::vector<Vec> polytope;
  std::vector<Vec> free_points;
};

inline void validate_pp(const PPConfig& c) {
  for (auto& p : c.polytope)
    if (static_cast<int>(p.size()) != c.dim) throw projective_error("coordinate count mismatch");
  for (auto& p : c.free_points)
    if (static_cast<int>(p.size()) != c.dim) throw projective_error("coordinate count mismatch");
  for (std::size_t i = 0; i < c.polytope.size(); ++i)
    if (!is_hull_vertex(c.polytope, i)) throw projective_error("polytope point " + std::to_string(i) + " is not a vertex");
  for (std::size_t i = 0; i < c.free_points.size(); ++i)
    if (in_convex_hull(c.polytope, c.free_points[i]))
      throw projective_error("free point " + std::to_string(i) + " meets the polytope");
}

struct LawrenceResult {
  int dim = 0;
  std::vector<Vec> vertices;
  Vec face_normal;  // zero on the lifted polytope, negative on the lifted free points
};

/** Lifts each free point to heights 1 and 2 on a private new axis. */
inline LawrenceResult lawrence_extension(const PPConfig& c) {
  validate_pp(c);
  std::size_t k = c.free_points.size(), D = c.dim + k;
  LawrenceResult r;
  for (auto& p : c.polytope) {
    Vec x(D);
    for (int i = 0; i < c.dim; ++i) x[i] = p[i];
    r.vertices.push_back(x);
  }
  for (std::size_t j = 0; j < k; ++j)
    for (int h : {1, 2}) {
      Vec x(D);
      for (int i = 0; i < c.dim; ++i) x[i] = c.free_points[j][i];
      x[c.dim + j] = h;
      r.vertices.push_back(x);
    }
  for (std::size_t i = 0; i < r.vertices.size(); ++i)
    if (!is_hull_vertex(r.vertices, i))
      throw projective_error("lifted point " + std::to_string(i) + " is not a vertex");
  r.dim = affine_dimension(r.vertices);
  r.face_normal.assign(D, FieldElem());
  for (std::size_t j = 0; j < k; ++j) r.face_normal[c.dim + j] = -1;
  return r;
}

struct SubdirectCone {
  PPConfig config;  // pyramid vertices (apex last), free points Q then R
  Vec apex;
  Vec lift_normal;  // Ĥ = {y : lift_normal . (y,1) = 0}
  std::size_t f0_pyramid = 0;
};

/**
 * Cone over P with apex e_{d+1}, cut by the hyperplane through the wedge tilted by
 * slope 1 towards the apex. wedge_ids index into R and span the wedge hyperplane.
 */
inline SubdirectCone subdirect_cone(const std::vector<Vec>& P, const std::vector<Vec>& Q,
                                    const std::vector<Vec>& R, const std::vector<int>& wedge_ids) {
  if (P.empty()) throw projective_error("empty polytope");
  std::size_t d = P[0].size();
  std::vector<Vec> hw;
  for (int i : wedge_ids) {
    Vec h = R.at(i);
    h.push_back(FieldElem(1));
    hw.push_back(h);
  }
  MatF m(hw.size(), d + 1);
  for (std::size_t i = 0; i < hw.size(); ++i)
    for (std::size_t j = 0; j <= d; ++j) m(i, j) = hw[i][j];
  auto ker = nullspace(m);
  if (ker.size() != 1) throw projective_error("wedge points do not span a hyperplane");
  Vec a(ker[0].begin(), ker[0].begin() + d);
  FieldElem c = -ker[0][d];  // H = {a.x = c}
  int side = 0;
  for (auto& p : P) {
    int s = (dot(a, p) - c).sign();
    if (s == 0 || (side != 0 && s != side)) throw projective_error("wedge-meets-P");
    side = s;
  }
  if (side < 0) {
    for (auto& x : a) x = -x;
    c = -c;
  }
  // scale the wedge equation so that c >= -1/2; the unit tilt then separates
  if (c.sign() < 0) {
    FieldElem f = FieldElem(Rat(-1, 2)) / c;
    for (auto& x : a) x *= f;
    c = FieldElem(Rat(-1, 2));
  }
  // Ĥ: a.x - c - t = 0; P side positive, apex (0,1) must be negative
  if ((-c - FieldElem(1)).sign() >= 0) throw projective_error("separation-failure");
  SubdirectCone out;
  out.apex = Vec(d + 1);
  out.apex[d] = 1;
  out.lift_normal = a;
  out.lift_normal.push_back(FieldElem(-1));
  out.lift_normal.push_back(-c);
  out.config.dim = static_cast<int>(d + 1);
  for (auto& p : P) {
    FieldElem s = (c + FieldElem(1)) / (dot(a, p) + FieldElem(1));
    if (s.sign() <= 0 || !(s < FieldElem(1))) throw projective_error("separation-failure");
    Vec y(d + 1);
    for (std::size_t i = 0; i < d; ++i) y[i] = s * p[i];
    y[d] = FieldElem(1) - s;
    out.config.polytope.push_back(y);
  }
  out.config.polytope.push_back(out.apex);
  for (auto* grp : {&Q, &R})
    for (auto& q : *grp) {
      Vec y = q;
      y.push_back(FieldElem());
      out.config.free_points.push_back(y);
    }
  out.f0_pyramid = out.config.polytope.size();
  return out;
}

struct TripleCounts {
  int dim, f0;
};

/** Lawrence lift of a subdirect cone over a weak projective triple. */
inline TripleCounts weak_triple_counts(int dim_p, int f0_p, int f0_q, int f0_r) {
  return {dim_p + f0_q + f0_r + 1, f0_p + 2 * f0_q + 2 * f0_r + 1};
}

inline TripleCounts pcctp_counts(int n) {
  if (n < 1) throw projective_error("n must be at least 1");
  return weak_triple_counts(4, 12 * (n + 1), 24, 40);
}

// ---------------------------------------------------------------------------
// The configuration K

/** Polynomials in λ over the field, low to high. */
struct LPoly {
  std::vector<FieldElem> c;
  LPoly() = default;
  LPoly(FieldElem x) : c{std::move(x)} {}  // NOLINT
  static LPoly lambda() {
    LPoly p;
    p.c = {FieldElem(), FieldElem(1)};
    return p;
  }
  void trim() {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
  }
  friend LPoly operator+(const LPoly& x, const LPoly& y) {
    LPoly r;
    r.c.resize(std::max(x.c.size(), y.c.size()));
    for (std::size_t i = 0; i < r.c.size(); ++i)
      r.c[i] = (i < x.c.size() ? x.c[i] : FieldElem()) + (i < y.c.size() ? y.c[i] : FieldElem());
    r.trim();
    return r;
  }
  friend LPoly operator-(const LPoly& x, const LPoly& y) {
    LPoly n = y;
    for (auto& a : n.c) a = -a;
    return x + n;
  }
  friend LPoly operator*(const LPoly& x, const LPoly& y) {
    LPoly r;
    if (x.c.empty() || y.c.empty()) return r;
    r.c.resize(x.c.size() + y.c.size() - 1);
    for (std::size_t i = 0; i < x.c.size(); ++i)
      for (std::size_t j = 0; j < y.c.size(); ++j) r.c[i + j] += x.c[i] * y.c[j];
    r.trim();
    return r;
  }
  bool is_zero() const { return c.empty(); }
  FieldElem operator()(const FieldElem& x) const {
    FieldElem r;
    for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
    return r;
  }
};

/** Remainder modulo a monic polynomial. */
inline LPoly poly_mod(LPoly a, const LPoly& m) {
  a.trim();
  std::size_t dm = m.c.size() - 1;
  while (a.c.size() > dm) {
    FieldElem lead = a.c.back();
    std::size_t shift = a.c.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) a.c[shift + i] -= lead * m.c[i];
    a.trim();
  }
  return a;
}

inline LPoly poly_det(std::vector<std::vector<LPoly>> m) {
  std::size_t n = m.size();
  if (n == 1) return m[0][0];
  LPoly r;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<LPoly>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<LPoly> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(row);
    }
    LPoly t = m[0][j] * poly_det(minor);
    r = (j % 2 == 0) ? r + t : r - t;
  }
  return r;
}

/**
 * The six points that must share a hyperplane: three layer-1 points and three
 * corners of the λ-squares.
 */
inline std::vector<std::vector<LPoly>> step6_points_symbolic() {
  LPoly L = LPoly::lambda(), mL = LPoly(FieldElem(-1)) * L;
  FieldElem h(Rat(1, 2)), s3 = FieldElem::sqrt3(), hs3 = FieldElem(Rat(1, 2)) * FieldElem::sqrt3();
  return {{FieldElem(1), FieldElem(), FieldElem(1), FieldElem(), FieldElem(1)},
          {FieldElem(), FieldElem(1), h, hs3, FieldElem(1)},
          {FieldElem(), FieldElem(1), h, -hs3, FieldElem(1)},
          {mL, L, FieldElem(2), FieldElem(), FieldElem(1)},
          {L, L, FieldElem(1), s3, FieldElem(1)},
          {L, L, FieldElem(1), -s3, FieldElem(1)}};
}

inline std::vector<Vec> step6_points(const FieldElem& lambda) {
  std::vector<Vec> out;
  for (auto& row : step6_points_symbolic()) {
    Vec p;
    for (auto& e : row) p.push_back(e(lambda));
    out.push_back(p);
  }
  return out;
}

inline bool cohyperplanar(const std::vector<Vec>& homogeneous_points) {
  return span_basis(homogeneous_points).size() < homogeneous_points.at(0).size();
}

struct LambdaCertificate {
  std::vector<LPoly> minors;  // the six maximal minors
  bool divisible = false;     // every minor vanishes modulo λ²+2λ-1
  bool nontrivial = false;    // some minor is a nonzero polynomial
};

inline LambdaCertificate lambda_certificate() {
  auto pts = step6_points_symbolic();
  LPoly m;
  m.c = {FieldElem(-1), FieldElem(2), FieldElem(1)};
  LambdaCertificate cert;
  cert.divisible = true;
  for (std::size_t drop = 0; drop < pts.size(); ++drop) {
    std::vector<std::vector<LPoly>> sq;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (i != drop) sq.push_back(pts[i]);
    LPoly d = poly_det(sq);
    cert.minors.push_back(d);
    cert.nontrivial = cert.nontrivial || !d.is_zero();
    cert.divisible = cert.divisible && poly_mod(d, m).is_zero();
  }
  return cert;
}

struct KConfiguration {
  NamedConfig config;         // 64 points, homogeneous in R^5
  FrameDerivation derivation; // from the nine vertices of Δ2×Δ2 and the λ-corner
  FieldElem lambda;
  std::vector<int> torus_points;  // the 24 points of F0(CT^s[1])
  std::vector<int> free_points;   // the remaining 40
  LambdaCertificate certificate;
};

inline KConfiguration build_k_configuration() {
  KConfiguration K;
  auto& cfg = K.config;
  auto& der = K.derivation;
  const FieldElem r3 = FieldElem::sqrt3(), lam = FieldElem(-1, 1, 0, 0);
  K.lambda = lam;
  auto P = [](FieldElem a, FieldElem b, FieldElem c, FieldElem d) { return Vec{a, b, c, d, FieldElem(1)}; };
  auto I = [&](const std::string& n) { return cfg.id(n); };
  // step: compute the meet, store it, and record it
  auto derive = [&](const std::string& n, const std::vector<std::vector<std::string>>& flats) {
    std::vector<std::vector<Vec>> pts;
    std::vector<std::vector<int>> ids;
    for (auto& f : flats) {
      std::vector<Vec> g;
      std::vector<int> gi;
      for (auto& s : f) {
        g.push_back(cfg.at(s));
        gi.push_back(I(s));
      }
      pts.push_back(g);
      ids.push_back(gi);
    }
    Vec x;
    try {
      x = meet_flats(pts);
    } catch (const projective_error& e) {
      throw projective_error(std::string(e.what()) + " deriving " + n);
    }
    if (!x.back().is_zero() && x.back().sign() < 0) throw projective_error("meet left the upper hemisphere");
    int t = cfg.add(n, x);
    der.steps.push_back({t, ids});
  };
  auto base = [&](const std::string& n, const Vec& p) { der.base.push_back(cfg.add(n, p)); };

  const std::string idx[3] = {"1", "2", "3"};
  FieldElem z3[3] = {FieldElem(-2), FieldElem(1), FieldElem(1)};
  FieldElem z4[3] = {FieldElem(), r3, -r3};
  for (int i = 0; i < 3; ++i) {
    base("a" + idx[i] + "+", P(1, 0, z3[i], z4[i]));
    base("a" + idx[i] + "-", P(-1, 0, z3[i], z4[i]));
    base("oa" + idx[i] + "+", P(0, 1, z3[i], z4[i]));
  }
  // the corner of W1, fixed by the λ certificate
  base("w1++", P(lam, lam, -2, 0));

  // I
  for (auto [i, j] : {std::pair{1, 2}, {1, 3}, {2, 3}}) {
    std::string a = std::to_string(i), b = std::to_string(j);
    derive("b" + a + b, {{"a" + a + "+", "a" + b + "-"}, {"a" + a + "-", "a" + b + "+"}});
  }
  auto bname = [](int i, int j) { return "b" + std::to_string(std::min(i, j)) + std::to_string(std::max(i, j)); };
  for (int i = 1; i <= 3; ++i) {
    int j = i % 3 + 1;
    std::string a = std::to_string(i), b = std::to_string(j);
    derive("oa" + a + "-", {{"a" + a + "+", "a" + a + "-", "oa" + a + "+"}, {bname(i, j), "oa" + b + "+"}});
  }
  derive("b0", {{"a1+", "a1-", "b23"}, {"oa1+", "oa1-", "b23"}, {"a2+", "a2-", "b13"}});
  // II
  for (int k = 1; k <= 3; ++k) {
    std::string s = std::to_string(k);
    derive("ta" + s + "+", {{"a1+", "a2+", "a3+"}, {"b0", "a" + s + "-"}});
    derive("ta" + s + "-", {{"a1-", "a2-", "a3-"}, {"b0", "a" + s + "+"}});
    derive("ota" + s + "+", {{"oa1+", "oa2+", "oa3+"}, {"b0", "oa" + s + "-"}});
    derive("ota" + s + "-", {{"oa1-", "oa2-", "oa3-"}, {"b0", "oa" + s + "+"}});
  }
  // III
  for (int k = 1; k <= 3; ++k) {
    std::string s = std::to_string(k), i = std::to_string(k % 3 + 1), j = std::to_string((k + 1) % 3 + 1);
    derive("psi" + s + "+", {{"a" + s + "+", "ta" + s + "+"}, {"a" + i + "+", "a" + j + "+"}});
    derive("psi" + s + "-", {{"a" + s + "-", "ta" + s + "-"}, {"a" + i + "-", "a" + j + "-"}});
    for (std::string sg : {"+", "-"})
      derive("otpsi" + s + sg, {{"oa" + s + sg, "ota" + s + sg}, {"ota" + i + sg, "ota" + j + sg}});
  }
  // IV
  derive("b1", {{"a1+", "a1-"}, {"oa1+", "oa1-"}});
  derive("b12++", {{"a1+", "oa2+"}, {"a2+", "oa1+"}});
  derive("b12+-", {{"a1+", "oa2-"}, {"a2+", "oa1-"}});
  const std::vector<std::string> X{"b1", "b12", "b12++"}, Y{"b1", "b12", "b12+-"};
  derive("wab", {{"w1++", "oa1-"}, {"a1+", "a1-"}});
  derive("w1+-", {{"wab", "oa1+"}, Y});
  derive("wad", {{"w1++", "a1-"}, {"oa1+", "oa1-"}});
  derive("w1-+", {{"wad", "a1+"}, Y});
  derive("wbc", {{"w1+-", "a1-"}, {"oa1+", "oa1-"}});
  derive("w1--", {{"wbc", "a1+"}, X});
  // V
  for (int i = 2; i <= 3; ++i) {
    std::string s = std::to_string(i);
    for (std::string sg : {"++", "--"})
      derive("w" + s + sg, {{"a" + s + "+", "a" + s + "-", "oa" + s + "+", "oa" + s + "-"},
                             {"a1+", "a" + s + "+", "w1" + sg},
                             {"oa1+", "oa" + s + "+", "w1" + sg}});
  }
  for (int i = 1; i <= 3; ++i) {
    std::string s = std::to_string(i);
    for (std::string sg : {"+-", "-+"})
      derive("tw" + s + sg, {{"ta" + s + "+", "ta" + s + "-", "ota" + s + "+", "ota" + s + "-"},
                              {"a1+", "ta" + s + "+", "w1" + sg},
                              {"oa1+", "ota" + s + "+", "w1" + sg}});
  }
  // VII
  derive("inf1", {{"a1+", "a2+"}, {"a1-", "a2-"}});
  derive("inf2", {{"a3+", "a2+"}, {"a3-", "a2-"}});
  derive("inf3", {{"a1+", "a1-"}, {"a2+", "a2-"}});
  derive("inf4", {{"oa1+", "oa1-"}, {"oa2+", "oa2-"}});

  for (std::size_t i = 0; i < cfg.size(); ++i) {
    const std::string& n = cfg.names[i];
    bool torus = n.rfind("psi", 0) == 0 || n.rfind("otpsi", 0) == 0 || n.rfind("tw", 0) == 0 ||
                 n == "w1++" || n == "w1--" || n.rfind("w2", 0) == 0 || n.rfind("w3", 0) == 0;
    (torus ? K.torus_points : K.free_points).push_back(static_cast<int>(i));
  }
  K.certificate = lambda_certificate();
  return K;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json_value(const IncidenceProgram& p) {
  nlohmann::json steps = nlohmann::json::array();
  for (auto& s : p.steps)
    steps.push_back({{"op", s.op == SlpStep::Join ? "join" : "meet"}, {"args", {s.a, s.b}}});
  return {{"inputs", p.inputs}, {"steps", steps}, {"outputs", p.outputs}};
}

inline IncidenceProgram program_from_json(const nlohmann::json& j) {
  IncidenceProgram p;
  p.inputs = j.at("inputs").get<std::vector<std::string>>();
  for (auto& s : j.at("steps")) {
    std::string op = s.at("op").get<std::string>();
    if (op != "join" && op != "meet") throw projective_error("unknown op " + op);
    auto args = s.at("args").get<std::vector<int>>();
    if (args.size() != 2) throw projective_error("steps take two arguments");
    p.steps.push_back({op == "join" ? SlpStep::Join : SlpStep::Meet, args[0], args[1]});
  }
  p.outputs = j.at("outputs").get<std::vector<int>>();
  return p;
}

inline PPConfig pp_from_json(const nlohmann::json& j) {
  PPConfig c;
  c.dim = j.at("dim").get<int>();
  for (auto& p : j.at("polytope")) c.polytope.push_back(vec_from_json(p));
  if (j.contains("free"))
    for (auto& p : j.at("free")) c.free_points.push_back(vec_from_json(p));
  return c;
}

inline nlohmann::json to_json_value(const PPConfig& c) {
  nlohmann::json P = nlohmann::json::array(), R = nlohmann::json::array();
  for (auto& p : c.polytope) P.push_back(vec_to_json(p));
  for (auto& p : c.free_points) R.push_back(vec_to_json(p));
  return {{"dim", c.dim}, {"polytope", P}, {"free", R}};
}

}  // namespace polyforge
