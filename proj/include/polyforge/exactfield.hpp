#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <nlohmann/json.hpp>

#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace polyforge {

using BigInt = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

struct field_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool is_zero(const Rat& x) { return x.is_zero(); }
inline int sign_of(const Rat& x) { return x.sign(); }
inline double to_double(const Rat& x) { return x.convert_to<double>(); }

/** Parses "p/q", "p" or a plain decimal like "-1.25". */
inline Rat parse_rat(std::string_view s) {
  std::string t(s);
  auto dot = t.find('.');
  if (dot == std::string::npos) {
    try {
      return Rat(t);
    } catch (const std::exception&) {
      throw field_error("bad rational literal: " + t);
    }
  }
  std::string digits = t.substr(0, dot) + t.substr(dot + 1);
  std::size_t frac = t.size() - dot - 1;
  BigInt den = 1;
  for (std::size_t i = 0; i < frac; ++i) den *= 10;
  try {
    return Rat(BigInt(digits), den);
  } catch (const std::exception&) {
    throw field_error("bad rational literal: " + t);
  }
}

inline std::string rat_str(const Rat& x) {
  return numerator(x).str() + "/" + denominator(x).str();
}

// Elements p + q*sqrt2 of Q(sqrt2); only used for sign decisions.
struct Q2 {
  Rat p, q;
};

inline Q2 q2_mul(const Q2& x, const Q2& y) {
  return {x.p * y.p + 2 * x.q * y.q, x.p * y.q + x.q * y.p};
}

inline int q2_sign(const Q2& x) {
  int sp = x.p.sign(), sq = x.q.sign();
  if (sq == 0) return sp;
  if (sp == 0) return sq;
  if (sp == sq) return sp;
  // opposite signs: compare p^2 with 2 q^2
  Rat diff = x.p * x.p - 2 * x.q * x.q;
  return sp * diff.sign();
}

/**
 * Exact element a + b*sqrt2 + c*sqrt3 + d*sqrt6 of Q(sqrt2, sqrt3).
 */
class FieldElem {
 public:
  Rat a, b, c, d;

  FieldElem() = default;
  FieldElem(long v) : a(v) {}  // NOLINT implicit on purpose
  FieldElem(int v) : a(v) {}   // NOLINT
  FieldElem(const Rat& v) : a(v) {}  // NOLINT
  FieldElem(Rat a_, Rat b_, Rat c_, Rat d_)
      : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}

  static FieldElem sqrt2() { return {0, 1, 0, 0}; }
  static FieldElem sqrt3() { return {0, 0, 1, 0}; }
  static FieldElem sqrt6() { return {0, 0, 0, 1}; }

  bool is_zero() const { return a.is_zero() && b.is_zero() && c.is_zero() && d.is_zero(); }
  bool is_rational() const { return b.is_zero() && c.is_zero() && d.is_zero(); }

  // x = P + Q sqrt3 with P, Q in Q(sqrt2)
  Q2 p_part() const { return {a, b}; }
  Q2 q_part() const { return {c, d}; }

  int sign() const {
    Q2 P = p_part(), Q = q_part();
    int sp = q2_sign(P), sq = q2_sign(Q);
    if (sq == 0) return sp;
    if (sp == 0) return sq;
    if (sp == sq) return sp;
    Q2 pp = q2_mul(P, P), qq = q2_mul(Q, Q);
    Q2 diff{pp.p - 3 * qq.p, pp.q - 3 * qq.q};
    return sp * q2_sign(diff);
  }

  FieldElem operator-() const { return {-a, -b, -c, -d}; }
  FieldElem& operator+=(const FieldElem& o) {
    a += o.a; b += o.b; c += o.c; d += o.d;
    return *this;
  }
  FieldElem& operator-=(const FieldElem& o) {
    a -= o.a; b -= o.b; c -= o.c; d -= o.d;
    return *this;
  }
  FieldElem& operator*=(const FieldElem& o) {
    *this = *this * o;
    return *this;
  }
  FieldElem& operator/=(const FieldElem& o) {
    *this = *this * o.inverse();
    return *this;
  }

  friend FieldElem operator+(FieldElem x, const FieldElem& y) { return x += y; }
  friend FieldElem operator-(FieldElem x, const FieldElem& y) { return x -= y; }
  friend FieldElem operator*(const FieldElem& x, const FieldElem& y) {
    if (x.is_rational()) return {x.a * y.a, x.a * y.b, x.a * y.c, x.a * y.d};
    if (y.is_rational()) return {y.a * x.a, y.a * x.b, y.a * x.c, y.a * x.d};
    // basis products: s2*s2=2, s3*s3=3, s6*s6=6, s2*s3=s6, s2*s6=2 s3, s3*s6=3 s2
    return {x.a * y.a + 2 * x.b * y.b + 3 * x.c * y.c + 6 * x.d * y.d,
            x.a * y.b + x.b * y.a + 3 * (x.c * y.d + x.d * y.c),
            x.a * y.c + x.c * y.a + 2 * (x.b * y.d + x.d * y.b),
            x.a * y.d + x.d * y.a + x.b * y.c + x.c * y.b};
  }
  friend FieldElem operator/(const FieldElem& x, const FieldElem& y) { return x * y.inverse(); }

  friend bool operator==(const FieldElem& x, const FieldElem& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
  }
  friend bool operator!=(const FieldElem& x, const FieldElem& y) { return !(x == y); }
  friend bool operator<(const FieldElem& x, const FieldElem& y) { return (x - y).sign() < 0; }
  friend bool operator>(const FieldElem& x, const FieldElem& y) { return (x - y).sign() > 0; }

  /** Multiplies by conjugates; throws on zero. */
  FieldElem inverse() const {
    if (is_zero()) throw field_error("division by zero in Q(sqrt2,sqrt3)");
    if (is_rational()) return FieldElem(Rat(1) / a);
    // 1/(P + Q s3) = (P - Q s3) / (P^2 - 3 Q^2)
    Q2 P = p_part(), Q = q_part();
    Q2 pp = q2_mul(P, P), qq = q2_mul(Q, Q);
    Q2 n{pp.p - 3 * qq.p, pp.q - 3 * qq.q};
    // 1/(r + s s2) = (r - s s2) / (r^2 - 2 s^2)
    Rat den = n.p * n.p - 2 * n.q * n.q;
    Q2 ninv{n.p / den, -n.q / den};
    Q2 np = q2_mul(P, ninv), nq = q2_mul(Q, ninv);
    return {np.p, np.q, -nq.p, -nq.q};
  }

  double to_double() const {
    const long double s2 = 1.41421356237309504880L, s3 = 1.73205080756887729353L,
                      s6 = 2.44948974278317809820L;
    long double v = a.convert_to<long double>() + b.convert_to<long double>() * s2 +
                    c.convert_to<long double>() * s3 + d.convert_to<long double>() * s6;
    return static_cast<double>(v);
  }

  std::string str() const {
    std::ostringstream os;
    bool any = false;
    auto term = [&](const Rat& r, const char* unit) {
      if (r.is_zero()) return;
      if (any) os << (r.sign() < 0 ? " - " : " + ");
      else if (r.sign() < 0) os << "-";
      Rat m = abs(r);
      if (*unit == 0) os << m;
      else if (m == 1) os << unit;
      else os << m << "*" << unit;
      any = true;
    };
    term(a, "");
    term(b, "sqrt2");
    term(c, "sqrt3");
    term(d, "sqrt6");
    if (!any) os << "0";
    return os.str();
  }
};

inline bool is_zero(const FieldElem& x) { return x.is_zero(); }
inline int sign_of(const FieldElem& x) { return x.sign(); }
inline int field_sign(const FieldElem& x) { return x.sign(); }
inline double to_double(const FieldElem& x) { return x.to_double(); }

inline std::ostream& operator<<(std::ostream& os, const FieldElem& x) { return os << x.str(); }

/** Conjugate sqrt2 -> -sqrt2; a field automorphism. */
inline FieldElem conj2(const FieldElem& x) { return {x.a, -x.b, x.c, -x.d}; }
/** Conjugate sqrt3 -> -sqrt3. */
inline FieldElem conj3(const FieldElem& x) { return {x.a, x.b, -x.c, -x.d}; }

using Vec = std::vector<FieldElem>;
using Vec5 = std::array<FieldElem, 5>;

template <class T>
T dot(const std::vector<T>& x, const std::vector<T>& y) {
  T s{};
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) s += x[i] * y[i];
  return s;
}

inline FieldElem dot(const Vec5& x, const Vec5& y) {
  FieldElem s;
  for (int i = 0; i < 5; ++i) s += x[i] * y[i];
  return s;
}

inline Vec to_vec(const Vec5& x) { return Vec(x.begin(), x.end()); }
inline Vec5 to_vec5(const Vec& x) {
  if (x.size() != 5) throw field_error("expected 5 coordinates");
  Vec5 r;
  for (int i = 0; i < 5; ++i) r[i] = x[i];
  return r;
}

/** Scales a homogeneous point so the last coordinate is 1. */
inline Vec5 dehomogenize(const Vec5& x) {
  if (x[4].is_zero()) throw field_error("point at infinity");
  FieldElem inv = x[4].inverse();
  Vec5 r;
  for (int i = 0; i < 5; ++i) r[i] = x[i] * inv;
  return r;
}

/** Dense row-major matrix over a field type T (Rat or FieldElem). */
template <class T>
class Matrix {
 public:
  std::size_t rows = 0, cols = 0;
  std::vector<T> e;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), e(r * c) {}
  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }
  static Matrix from_rows(const std::vector<std::vector<T>>& rs) {
    Matrix m(rs.size(), rs.empty() ? 0 : rs[0].size());
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (rs[i].size() != m.cols) throw field_error("ragged matrix rows");
      for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = rs[i][j];
    }
    return m;
  }

  T& operator()(std::size_t i, std::size_t j) { return e[i * cols + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return e[i * cols + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(e.begin() + i * cols, e.begin() + (i + 1) * cols);
  }

  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.cols != y.rows) throw field_error("matrix shape mismatch");
    Matrix r(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
      for (std::size_t k = 0; k < x.cols; ++k) {
        if (is_zero(x(i, k))) continue;
        for (std::size_t j = 0; j < y.cols; ++j) r(i, j) += x(i, k) * y(k, j);
      }
    return r;
  }
  friend bool operator==(const Matrix& x, const Matrix& y) {
    return x.rows == y.rows && x.cols == y.cols && x.e == y.e;
  }

  std::vector<T> apply(const std::vector<T>& v) const {
    if (v.size() != cols) throw field_error("matrix-vector shape mismatch");
    std::vector<T> r(rows);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        if (!is_zero((*this)(i, j))) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  Matrix transpose() const {
    Matrix r(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) r(j, i) = (*this)(i, j);
    return r;
  }
};

using MatF = Matrix<FieldElem>;
using MatQ = Matrix<Rat>;

inline Vec5 operator*(const MatF& m, const Vec5& v) { return to_vec5(m.apply(to_vec(v))); }

template <class T>
Matrix<T> mat_pow(const Matrix<T>& m, int k) {
  Matrix<T> r = Matrix<T>::identity(m.rows), b = m;
  if (k < 0) throw field_error("negative matrix power");
  while (k > 0) {
    if (k & 1) r = r * b;
    b = b * b;
    k >>= 1;
  }
  return r;
}

/**
 * Reduced row echelon form by exact Gauss-Jordan elimination.
 * Returns the pivot columns.
 */
template <class T>
std::vector<std::size_t> rref(Matrix<T>& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
    std::size_t p = r;
    while (p < m.rows && is_zero(m(p, c))) ++p;
    if (p == m.rows) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(p, j), m(r, j));
    T inv = T(1) / m(r, c);
    for (std::size_t j = c; j < m.cols; ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == r || is_zero(m(i, c))) continue;
      T f = m(i, c);
      for (std::size_t j = c; j < m.cols; ++j)
        if (!is_zero(m(r, j))) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class T>
std::size_t rank(Matrix<T> m) {
  return rref(m).size();
}

/** Kernel basis; dimension = cols - rank. */
template <class T>
std::vector<std::vector<T>> nullspace(Matrix<T> m) {
  auto piv = rref(m);
  std::vector<bool> is_piv(m.cols, false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<std::vector<T>> basis;
  for (std::size_t f = 0; f < m.cols; ++f) {
    if (is_piv[f]) continue;
    std::vector<T> v(m.cols);
    v[f] = T(1);
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -m(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

inline std::vector<Vec> solve_nullspace(const MatF& m) { return nullspace(m); }

/** Determinant of a square matrix via elimination. */
template <class T>
T determinant(Matrix<T> m) {
  if (m.rows != m.cols) throw field_error("determinant of non-square matrix");
  T det(1);
  for (std::size_t c = 0; c < m.cols; ++c) {
    std::size_t p = c;
    while (p < m.rows && is_zero(m(p, c))) ++p;
    if (p == m.rows) return T(0);
    if (p != c) {
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    T inv = T(1) / m(c, c);
    for (std::size_t i = c + 1; i < m.rows; ++i) {
      if (is_zero(m(i, c))) continue;
      T f = m(i, c) * inv;
      for (std::size_t j = c; j < m.cols; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

/**
 * Solves m x = b. Returns false if inconsistent; free variables are set to 0.
 */
template <class T>
bool solve_linear(const Matrix<T>& m, const std::vector<T>& b, std::vector<T>& x) {
  Matrix<T> aug(m.rows, m.cols + 1);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) aug(i, j) = m(i, j);
    aug(i, m.cols) = b[i];
  }
  auto piv = rref(aug);
  if (!piv.empty() && piv.back() == m.cols) return false;
  x.assign(m.cols, T(0));
  for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug(i, m.cols);
  return true;
}

// Rotations of R^5 acting on homogeneous coordinates of S^4.

/** Quarter turn of the (x1,x2)-plane. */
inline MatF rotation_r12() {
  MatF m = MatF::identity(5);
  m(0, 0) = 0; m(0, 1) = -1;
  m(1, 0) = 1; m(1, 1) = 0;
  return m;
}

/** Sixth turn of the (x3,x4)-plane. */
inline MatF rotation_r34() {
  MatF m = MatF::identity(5);
  FieldElem half(Rat(1, 2)), h3(Rat(0), Rat(0), Rat(1, 2), Rat(0));
  m(2, 2) = half; m(2, 3) = -h3;
  m(3, 2) = h3; m(3, 3) = half;
  return m;
}

/** Reflection negating the fourth coordinate. */
inline MatF reflection_e4() {
  MatF m = MatF::identity(5);
  m(3, 3) = -1;
  return m;
}

// JSON: FieldElem = {"a":"p/q","b":..,"c":..,"d":..}; Vec = array of FieldElem.

inline nlohmann::json to_json_value(const FieldElem& x) {
  return {{"a", rat_str(x.a)}, {"b", rat_str(x.b)}, {"c", rat_str(x.c)}, {"d", rat_str(x.d)}};
}

inline FieldElem field_from_json(const nlohmann::json& j) {
  auto get = [&](const char* k) -> Rat {
    if (!j.contains(k)) return Rat(0);
    const auto& v = j.at(k);
    if (v.is_string()) return parse_rat(v.get<std::string>());
    if (v.is_number_integer()) return Rat(v.get<long long>());
    throw field_error("field coordinate must be a \"p/q\" string");
  };
  if (j.is_string()) return FieldElem(parse_rat(j.get<std::string>()));
  if (j.is_number_integer()) return FieldElem(Rat(j.get<long long>()));
  if (!j.is_object()) throw field_error("field element must be an object");
  return {get("a"), get("b"), get("c"), get("d")};
}

template <class V>
nlohmann::json vec_to_json(const V& v) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& x : v) a.push_back(to_json_value(x));
  return a;
}

inline Vec vec_from_json(const nlohmann::json& j) {
  Vec v;
  for (const auto& x : j) v.push_back(field_from_json(x));
  return v;
}

/** Formats a double with 6 significant digits. */
inline std::string fmt6(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace polyforge
