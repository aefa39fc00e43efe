#pragma once

// Sparse multigraded polynomials over Q in the variables
//   X0, Y0, Z0   (degree-p forms housing S^p g^v),
//   x0, y0       (binary forms of degree 2m housing V_2m),
//   x_i, y_i     (factor i of (P^1)^n, 1 <= i <= n),
// together with the infinitesimal sl2 action and the distinguished
// elements used by the Koszul complexes: Pluecker minors, the sections s_i,
// the conic X0*Z0 - Y0^2 and the splitting S^m = V_2m + (conic)*S^(m-2).

#include "bott/rational.hpp"

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <cstring>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace bott {

inline constexpr std::size_t kMaxVars = 32;
/// Largest vertex index representable (x_i, y_i for i <= kMaxVertex).
inline constexpr int kMaxVertex = 13;

struct Var {
  std::uint8_t index = 0;
  friend auto operator<=>(Var, Var) = default;
};

inline constexpr Var X0{0};
inline constexpr Var Y0{1};
inline constexpr Var Z0{2};

inline Var x_var(int vertex) {
  if (vertex < 0 || vertex > kMaxVertex) throw Error("vertex index out of range: " + std::to_string(vertex));
  return Var{static_cast<std::uint8_t>(3 + 2 * vertex)};
}

inline Var y_var(int vertex) {
  if (vertex < 0 || vertex > kMaxVertex) throw Error("vertex index out of range: " + std::to_string(vertex));
  return Var{static_cast<std::uint8_t>(4 + 2 * vertex)};
}

inline std::string var_name(Var v) {
  switch (v.index) {
    case 0: return "X0";
    case 1: return "Y0";
    case 2: return "Z0";
    default: break;
  }
  int vertex = (v.index - 3) / 2;
  return ((v.index - 3) % 2 == 0 ? "x" : "y") + std::to_string(vertex);
}

inline std::optional<Var> parse_var(const std::string& name) {
  if (name == "X0") return X0;
  if (name == "Y0") return Y0;
  if (name == "Z0") return Z0;
  if (name.size() < 2 || (name[0] != 'x' && name[0] != 'y')) return std::nullopt;
  int vertex = 0;
  for (std::size_t i = 1; i < name.size(); ++i) {
    if (name[i] < '0' || name[i] > '9') return std::nullopt;
    vertex = vertex * 10 + (name[i] - '0');
    if (vertex > kMaxVertex) return std::nullopt;
  }
  if (name.size() > 2 && name[1] == '0') return std::nullopt;
  return name[0] == 'x' ? x_var(vertex) : y_var(vertex);
}

class Monomial {
 public:
  Monomial() = default;

  static Monomial of(Var v, unsigned exponent = 1) {
    Monomial m;
    m.set(v, exponent);
    return m;
  }

  unsigned operator[](Var v) const { return e_[v.index]; }
  unsigned at(std::size_t index) const { return e_[index]; }

  void set(Var v, unsigned exponent) {
    if (exponent > 255) throw Error("exponent overflow");
    e_[v.index] = static_cast<std::uint8_t>(exponent);
  }

  unsigned degree() const {
    unsigned d = 0;
    for (auto x : e_) d += x;
    return d;
  }

  bool is_one() const { return degree() == 0; }

  /// h-weight of the monomial under the diagonal sl2 action.
  int weight() const {
    int w = 2 * (int(e_[0]) - int(e_[2]));
    for (std::size_t i = 3; i + 1 < kMaxVars; i += 2) w += int(e_[i]) - int(e_[i + 1]);
    return w;
  }

  bool divides(const Monomial& m) const {
    for (std::size_t i = 0; i < kMaxVars; ++i)
      if (e_[i] > m.e_[i]) return false;
    return true;
  }

  /// m / *this; requires divides(m).
  Monomial cofactor_in(const Monomial& m) const {
    Monomial q;
    for (std::size_t i = 0; i < kMaxVars; ++i) q.e_[i] = static_cast<std::uint8_t>(m.e_[i] - e_[i]);
    return q;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial c;
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      unsigned s = unsigned(a.e_[i]) + b.e_[i];
      if (s > 255) throw Error("exponent overflow");
      c.e_[i] = static_cast<std::uint8_t>(s);
    }
    return c;
  }

  /// Adds delta to the exponent of v (caller guarantees the result is >= 0).
  Monomial shifted(Var v, int delta) const {
    Monomial c = *this;
    c.set(v, static_cast<unsigned>(int(e_[v.index]) + delta));
    return c;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.e_ == b.e_; }

  std::size_t hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto x : e_) {
      h ^= x;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }

  /// Canonical text, e.g. "X0^2*x1*y3^4"; the unit monomial is "1".
  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      if (e_[i] == 0) continue;
      if (!out.empty()) out += '*';
      out += var_name(Var{static_cast<std::uint8_t>(i)});
      if (e_[i] > 1) out += '^' + std::to_string(e_[i]);
    }
    return out.empty() ? "1" : out;
  }

  /// Highest vertex index whose variables occur, or -1.
  int max_vertex() const {
    for (std::size_t i = kMaxVars; i-- > 3;)
      if (e_[i]) return static_cast<int>((i - 3) / 2);
    return -1;
  }

  const std::array<std::uint8_t, kMaxVars>& exponents() const { return e_; }

 private:
  std::array<std::uint8_t, kMaxVars> e_{};
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

/// Graded lexicographic order with X0 > Y0 > Z0 > x0 > y0 > x1 > y1 > ...
inline bool grlex_greater(const Monomial& a, const Monomial& b) {
  unsigned da = a.degree(), db = b.degree();
  if (da != db) return da > db;
  return std::memcmp(a.exponents().data(), b.exponents().data(), kMaxVars) > 0;
}

/// Grade of a homogeneous space: p in X0,Y0,Z0; 2m in x0,y0; d_i in x_i,y_i.
struct Multidegree {
  int sym_grade = 0;
  int vertex0_grade = 0;
  std::vector<int> factor_grades;

  Multidegree() = default;
  Multidegree(int sym, int vertex0, std::vector<int> factors)
      : sym_grade(sym), vertex0_grade(vertex0), factor_grades(std::move(factors)) {}

  static Multidegree factors(std::vector<int> d) { return Multidegree(0, 0, std::move(d)); }

  int n() const { return static_cast<int>(factor_grades.size()); }

  /// False when some grade is negative (the zero space).
  bool is_valid() const {
    if (sym_grade < 0 || vertex0_grade < 0) return false;
    return std::all_of(factor_grades.begin(), factor_grades.end(), [](int d) { return d >= 0; });
  }

  int binary_total() const {
    int s = vertex0_grade;
    for (int d : factor_grades) s += d;
    return s;
  }

  std::string to_string() const {
    std::string out = "s" + std::to_string(sym_grade) + ";v" + std::to_string(vertex0_grade) + ";";
    for (std::size_t i = 0; i < factor_grades.size(); ++i) out += (i ? "," : "") + std::to_string(factor_grades[i]);
    return out;
  }

  static Multidegree parse(const std::string& text);

  friend bool operator==(const Multidegree&, const Multidegree&) = default;
  friend auto operator<=>(const Multidegree&, const Multidegree&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Multidegree& m) { return os << m.to_string(); }

inline Multidegree Multidegree::parse(const std::string& text) {
  Multidegree m;
  char s = 0, v = 0, semi1 = 0, semi2 = 0;
  std::istringstream in(text);
  if (!(in >> s >> m.sym_grade >> semi1 >> v >> m.vertex0_grade >> semi2) || s != 's' || v != 'v' || semi1 != ';' ||
      semi2 != ';')
    throw Error("malformed multidegree: '" + text + "'");
  std::string rest;
  std::getline(in, rest);
  if (!rest.empty()) {
    std::istringstream parts(rest);
    std::string item;
    while (std::getline(parts, item, ',')) {
      try {
        std::size_t used = 0;
        m.factor_grades.push_back(std::stoi(item, &used));
        if (used != item.size()) throw Error("");
      } catch (...) {
        throw Error("malformed multidegree: '" + text + "'");
      }
    }
  }
  return m;
}

class Polynomial {
 public:
  using Term = std::pair<Monomial, Rational>;

  Polynomial() = default;
  Polynomial(const Rational& c) {  // NOLINT: implicit constant promotion is intended
    if (c != 0) terms_.emplace_back(Monomial(), c);
  }
  Polynomial(long c) : Polynomial(Rational(c)) {}  // NOLINT

  static Polynomial variable(Var v) { return monomial(Monomial::of(v), 1); }

  static Polynomial monomial(const Monomial& m, const Rational& c) {
    Polynomial p;
    if (c != 0) p.terms_.emplace_back(m, c);
    return p;
  }

  /// Combines like terms, drops zeros, sorts into canonical order.
  static Polynomial from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return grlex_greater(a.first, b.first); });
    Polynomial p;
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().first == t.first)
        p.terms_.back().second += t.second;
      else {
        if (!p.terms_.empty() && p.terms_.back().second == 0) p.terms_.pop_back();
        p.terms_.push_back(std::move(t));
      }
    }
    if (!p.terms_.empty() && p.terms_.back().second == 0) p.terms_.pop_back();
    return p;
  }

  template <typename Map>
  static Polynomial from_map(const Map& acc) {
    std::vector<Term> terms;
    terms.reserve(acc.size());
    for (const auto& [m, c] : acc)
      if (c != 0) terms.emplace_back(m, c);
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return grlex_greater(a.first, b.first); });
    Polynomial p;
    p.terms_ = std::move(terms);
    return p;
  }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Rational coefficient(const Monomial& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, const Monomial& key) { return grlex_greater(t.first, key); });
    if (it != terms_.end() && it->first == m) return it->second;
    return 0;
  }

  const Term& leading_term() const {
    if (terms_.empty()) throw Error("leading term of the zero polynomial");
    return terms_.front();
  }

  Polynomial operator-() const {
    Polynomial p = *this;
    for (auto& t : p.terms_) t.second = -t.second;
    return p;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) { return merge(a, b, 1); }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return merge(a, b, -1); }
  Polynomial& operator+=(const Polynomial& b) { return *this = merge(*this, b, 1); }
  Polynomial& operator-=(const Polynomial& b) { return *this = merge(*this, b, -1); }

  friend Polynomial operator*(const Rational& c, const Polynomial& p) {
    if (c == 0) return {};
    Polynomial out = p;
    for (auto& t : out.terms_) t.second *= c;
    return out;
  }
  friend Polynomial operator*(long c, const Polynomial& p) { return Rational(c) * p; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.size() == 1 || b.size() == 1) {
      const Polynomial& single = a.size() == 1 ? a : b;
      const Polynomial& other = a.size() == 1 ? b : a;
      const auto& [m, c] = single.terms_.front();
      Polynomial out;
      out.terms_.reserve(other.size());
      // multiplication by a monomial preserves the graded lex order
      for (const auto& [mo, co] : other.terms_) out.terms_.emplace_back(mo * m, co * c);
      return out;
    }
    std::unordered_map<Monomial, Rational, MonomialHash> acc;
    acc.reserve(a.size() * b.size());
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        auto [it, inserted] = acc.try_emplace(ma * mb, ca);
        if (inserted)
          it->second *= cb;
        else
          mpq_addmul_helper(it->second, ca, cb);
      }
    return from_map(acc);
  }

  Polynomial& operator*=(const Polynomial& b) { return *this = *this * b; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

  Polynomial pow(unsigned k) const {
    Polynomial out = 1;
    for (unsigned i = 0; i < k; ++i) out *= *this;
    return out;
  }

  /// Multidegree when the polynomial is homogeneous in every slot and uses
  /// only vertices 0..n; nullopt otherwise. The zero polynomial has none.
  std::optional<Multidegree> multidegree(int n) const {
    if (terms_.empty()) return std::nullopt;
    std::optional<Multidegree> first;
    for (const auto& [m, c] : terms_) {
      if (m.max_vertex() > n) return std::nullopt;
      Multidegree d(int(m[X0] + m[Y0] + m[Z0]), int(m[x_var(0)] + m[y_var(0)]), std::vector<int>(std::size_t(n)));
      for (int i = 1; i <= n; ++i) d.factor_grades[std::size_t(i - 1)] = int(m[x_var(i)] + m[y_var(i)]);
      if (!first)
        first = std::move(d);
      else if (!(*first == d))
        return std::nullopt;
    }
    return first;
  }

  int max_vertex() const {
    int v = -1;
    for (const auto& t : terms_) v = std::max(v, t.first.max_vertex());
    return v;
  }

  /// Canonical text: terms in graded lex order, explicit signed rational
  /// coefficients, e.g. "+1*x1*y2 -1*x2*y1"; the zero polynomial is "0".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms_) {
      if (!out.empty()) out += ' ';
      out += c < 0 ? '-' : '+';
      out += Rational(abs(c)).get_str();
      if (!m.is_one()) out += '*' + m.to_string();
    }
    return out;
  }

  static Polynomial parse(const std::string& text);

 private:
  static void mpq_addmul_helper(Rational& acc, const Rational& a, const Rational& b) { acc += a * b; }

  static Polynomial merge(const Polynomial& a, const Polynomial& b, int sign) {
    Polynomial out;
    out.terms_.reserve(a.size() + b.size());
    auto i = a.terms_.begin();
    auto j = b.terms_.begin();
    while (i != a.terms_.end() || j != b.terms_.end()) {
      if (j == b.terms_.end() || (i != a.terms_.end() && grlex_greater(i->first, j->first))) {
        out.terms_.push_back(*i++);
      } else if (i == a.terms_.end() || grlex_greater(j->first, i->first)) {
        out.terms_.emplace_back(j->first, sign > 0 ? j->second : Rational(-j->second));
        ++j;
      } else {
        Rational c = sign > 0 ? Rational(i->second + j->second) : Rational(i->second - j->second);
        if (c != 0) out.terms_.emplace_back(i->first, std::move(c));
        ++i;
        ++j;
      }
    }
    return out;
  }

  std::vector<Term> terms_;
};

inline std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.to_string(); }

inline Polynomial Polynomial::parse(const std::string& text) {
  std::istringstream in(text);
  std::string token;
  std::vector<Term> terms;
  bool saw_zero = false;
  while (in >> token) {
    if (token == "0") {
      saw_zero = true;
      continue;
    }
    if (token[0] != '+' && token[0] != '-') throw Error("malformed polynomial term: '" + token + "'");
    std::vector<std::string> factors;
    std::size_t start = 1;
    for (std::size_t pos; (pos = token.find('*', start)) != std::string::npos; start = pos + 1)
      factors.push_back(token.substr(start, pos - start));
    factors.push_back(token.substr(start));
    Rational c = parse_rational(factors.front());
    if (token[0] == '-') c = -c;
    Monomial m;
    for (std::size_t k = 1; k < factors.size(); ++k) {
      const std::string& f = factors[k];
      auto caret = f.find('^');
      auto v = parse_var(f.substr(0, caret));
      if (!v) throw Error("unknown variable in polynomial: '" + f + "'");
      unsigned e = 1;
      if (caret != std::string::npos) {
        try {
          e = static_cast<unsigned>(std::stoul(f.substr(caret + 1)));
        } catch (...) {
          throw Error("malformed exponent in polynomial: '" + f + "'");
        }
      }
      m = m * Monomial::of(*v, e);
    }
    terms.emplace_back(m, c);
  }
  if (saw_zero && !terms.empty()) throw Error("malformed polynomial: '" + text + "'");
  return Polynomial::from_terms(std::move(terms));
}

// ---------------------------------------------------------------------------
// Distinguished elements

/// Pluecker minor x_i*y_k - x_k*y_i (index 0 uses the binary-form slot).
inline Polynomial plucker(int i, int k) {
  if (i == k) throw Error("plucker minor with equal indices (self-loop)");
  Polynomial a = Polynomial::monomial(Monomial::of(x_var(i)) * Monomial::of(y_var(k)), 1);
  Polynomial b = Polynomial::monomial(Monomial::of(x_var(k)) * Monomial::of(y_var(i)), 1);
  return a - b;
}

/// s_i = x_i^2 Z0 - 2 x_i y_i Y0 + y_i^2 X0.
inline Polynomial s_section(int i) {
  if (i < 1 || i > kMaxVertex) throw Error("section index out of range: " + std::to_string(i));
  Monomial xi = Monomial::of(x_var(i)), yi = Monomial::of(y_var(i));
  return Polynomial::from_terms({{xi * xi * Monomial::of(Z0), 1},
                                 {xi * yi * Monomial::of(Y0), -2},
                                 {yi * yi * Monomial::of(X0), 1}});
}

/// The invariant conic X0*Z0 - Y0^2.
inline Polynomial conic() {
  return Polynomial::from_terms({{Monomial::of(X0) * Monomial::of(Z0), 1}, {Monomial::of(Y0, 2), -1}});
}

// ---------------------------------------------------------------------------
// sl2 action. On each binary slot: e = x d/dy, f = y d/dx, h = x d/dx - y d/dy.
// On X0,Y0,Z0: e: X0->0, Y0->X0, Z0->2Y0; f: X0->2Y0, Y0->Z0, Z0->0.

namespace detail {

template <typename Emit>
void for_each_e_image(const Monomial& m, Emit&& emit) {
  if (unsigned b = m[Y0]) emit(m.shifted(Y0, -1).shifted(X0, 1), Rational(b));
  if (unsigned c = m[Z0]) emit(m.shifted(Z0, -1).shifted(Y0, 1), Rational(2 * c));
  for (int v = 0; v <= kMaxVertex; ++v) {
    Var x = x_var(v), y = y_var(v);
    if (unsigned b = m[y]) emit(m.shifted(y, -1).shifted(x, 1), Rational(b));
  }
}

template <typename Emit>
void for_each_f_image(const Monomial& m, Emit&& emit) {
  if (unsigned a = m[X0]) emit(m.shifted(X0, -1).shifted(Y0, 1), Rational(2 * a));
  if (unsigned b = m[Y0]) emit(m.shifted(Y0, -1).shifted(Z0, 1), Rational(b));
  for (int v = 0; v <= kMaxVertex; ++v) {
    Var x = x_var(v), y = y_var(v);
    if (unsigned a = m[x]) emit(m.shifted(x, -1).shifted(y, 1), Rational(a));
  }
}

template <typename ForEach>
Polynomial apply_derivation(const Polynomial& p, ForEach&& for_each) {
  std::unordered_map<Monomial, Rational, MonomialHash> acc;
  for (const auto& [m, c] : p.terms())
    for_each(m, [&](const Monomial& image, const Rational& factor) {
      auto [it, inserted] = acc.try_emplace(image, 0);
      it->second += c * factor;
    });
  return Polynomial::from_map(acc);
}

}  // namespace detail

inline Polynomial apply_e(const Polynomial& p) {
  return detail::apply_derivation(p, [](const Monomial& m, auto&& emit) { detail::for_each_e_image(m, emit); });
}

inline Polynomial apply_f(const Polynomial& p) {
  return detail::apply_derivation(p, [](const Monomial& m, auto&& emit) { detail::for_each_f_image(m, emit); });
}

inline Polynomial apply_h(const Polynomial& p) {
  std::vector<Polynomial::Term> terms;
  for (const auto& [m, c] : p.terms())
    if (int w = m.weight()) terms.emplace_back(m, c * w);
  return Polynomial::from_terms(std::move(terms));
}

inline bool is_sl2_invariant(const Polynomial& p) { return apply_e(p).is_zero() && apply_f(p).is_zero(); }

// ---------------------------------------------------------------------------
// The rational normal curve: X0 -> x0^2, Y0 -> x0*y0, Z0 -> y0^2.

/// Ring homomorphism substituting X0,Y0,Z0 by x0^2, x0*y0, y0^2.
inline Polynomial subst0(const Polynomial& p) {
  std::vector<Polynomial::Term> terms;
  terms.reserve(p.size());
  Var x0 = x_var(0), y0 = y_var(0);
  for (const auto& [m, c] : p.terms()) {
    if (m[x0] || m[y0]) throw Error("subst0 expects a polynomial without x0, y0");
    unsigned a = m[X0], b = m[Y0], z = m[Z0];
    Monomial out = m;
    out.set(X0, 0);
    out.set(Y0, 0);
    out.set(Z0, 0);
    out.set(x0, 2 * a + b);
    out.set(y0, b + 2 * z);
    terms.emplace_back(out, c);
  }
  return Polynomial::from_terms(std::move(terms));
}

namespace detail {

/// lift(x0^(2m-k) y0^k) = f^k(X0^m) * (2m-k)!/(2m)!, the unique sl2-equivariant
/// section of subst0 on V_2m. Table indexed by k.
inline const std::vector<Polynomial>& lift_table(unsigned m) {
  static std::mutex mutex;
  static std::map<unsigned, std::vector<Polynomial>> tables;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = tables.find(m);
  if (it != tables.end()) return it->second;
  std::vector<Polynomial> table;
  Polynomial current = Polynomial::monomial(Monomial::of(X0, m), 1);
  Rational scale = 1;  // (2m)!/(2m-k)!
  for (unsigned k = 0; k <= 2 * m; ++k) {
    Rational inv = 1 / scale;
    table.push_back(inv * current);
    current = apply_f(current);
    scale *= Rational(2 * m - k);
  }
  return tables.emplace(m, std::move(table)).first->second;
}

}  // namespace detail

/// Equivariant lift V_2m -> S^m g^v acting on the x0,y0 part; other variables
/// are carried along as coefficients. Requires no X0,Y0,Z0 in p and even
/// x0,y0-degree in every term.
inline Polynomial lift0(const Polynomial& p) {
  Var x0 = x_var(0), y0 = y_var(0);
  std::unordered_map<Monomial, Rational, MonomialHash> acc;
  for (const auto& [m, c] : p.terms()) {
    if (m[X0] || m[Y0] || m[Z0]) throw Error("lift0 expects a polynomial without X0, Y0, Z0");
    unsigned a = m[x0], k = m[y0];
    if ((a + k) % 2) throw Error("lift0 expects even degree in x0, y0");
    Monomial rest = m;
    rest.set(x0, 0);
    rest.set(y0, 0);
    for (const auto& [lm, lc] : detail::lift_table((a + k) / 2)[k].terms()) {
      auto [it, inserted] = acc.try_emplace(lm * rest, 0);
      it->second += lc * c;
    }
  }
  return Polynomial::from_map(acc);
}

/// Exact division by X0*Z0 - Y0^2; throws when not divisible.
inline Polynomial divide_by_conic(const Polynomial& p) {
  // Group by the non-X0Y0Z0 cofactor; each group is a form in X0,Y0,Z0.
  std::map<std::array<std::uint8_t, kMaxVars>, std::map<std::array<unsigned, 3>, Rational>> groups;
  for (const auto& [m, c] : p.terms()) {
    Monomial rest = m;
    rest.set(X0, 0);
    rest.set(Y0, 0);
    rest.set(Z0, 0);
    groups[rest.exponents()][{m[X0], m[Y0], m[Z0]}] = c;
  }
  std::vector<Polynomial::Term> quotient;
  for (auto& [rest_exp, form] : groups) {
    Monomial rest;
    for (std::size_t i = 0; i < kMaxVars; ++i) rest.set(Var{static_cast<std::uint8_t>(i)}, rest_exp[i]);
    // Divide with X0*Z0 as leading term: repeatedly take the lex-largest
    // exponent triple, which must contain X0*Z0.
    while (!form.empty()) {
      auto it = std::prev(form.end());
      auto [e, c] = *it;
      if (e[0] == 0 || e[2] == 0) throw Error("polynomial is not divisible by the conic X0*Z0 - Y0^2");
      std::array<unsigned, 3> q{e[0] - 1, e[1], e[2] - 1};
      Monomial qm = rest * Monomial::of(X0, q[0]) * Monomial::of(Y0, q[1]) * Monomial::of(Z0, q[2]);
      quotient.emplace_back(qm, c);
      form.erase(it);
      std::array<unsigned, 3> other{q[0], q[1] + 2, q[2]};
      auto [jt, inserted] = form.try_emplace(other, 0);
      jt->second += c;  // subtracting c*(X0 Z0 - Y0^2)*q adds c*Y0^2*q
      if (jt->second == 0) form.erase(jt);
    }
  }
  return Polynomial::from_terms(std::move(quotient));
}

struct SymmetricSplit {
  Polynomial top;   // V_2m component, written in x0,y0
  Polynomial rest;  // S^(m-2) component
};

/// Splits p in S^m g^v (other variables as coefficients) as
/// p = lift0(top) + (X0*Z0 - Y0^2) * rest.
inline SymmetricSplit split_symmetric(const Polynomial& p) {
  for (const auto& [m, c] : p.terms())
    if (m[x_var(0)] || m[y_var(0)]) throw Error("split_symmetric expects a polynomial without x0, y0");
  SymmetricSplit out;
  out.top = subst0(p);
  out.rest = divide_by_conic(p - lift0(out.top));
  return out;
}

// ---------------------------------------------------------------------------

using Point = std::map<Var, Rational>;

inline Rational evaluate(const Polynomial& p, const Point& point) {
  Rational total = 0;
  std::map<std::pair<std::uint8_t, unsigned>, Rational> powers;
  for (const auto& [m, c] : p.terms()) {
    Rational term = c;
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      unsigned e = m.at(i);
      if (!e) continue;
      Var v{static_cast<std::uint8_t>(i)};
      auto it = point.find(v);
      if (it == point.end()) throw Error("no value assigned to variable " + var_name(v));
      auto [pw, inserted] = powers.try_emplace({v.index, e}, 1);
      if (inserted)
        for (unsigned k = 0; k < e; ++k) pw->second *= it->second;
      term *= pw->second;
    }
    total += term;
  }
  return total;
}

}  // namespace bott

template <>
struct std::hash<bott::Monomial> {
  std::size_t operator()(const bott::Monomial& m) const { return m.hash(); }
};
