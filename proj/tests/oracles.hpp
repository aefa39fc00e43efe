#pragma once

// Independent reference computations used by the tests: dense Gaussian
// elimination over Q, brute-force weight counting, random generators.

#include "bott/exact_linalg.hpp"
#include "bott/graph_calc.hpp"
#include "bott/polyring.hpp"

#include <random>
#include <vector>

namespace oracle {

using bott::Rational;

/// Rank by textbook Gaussian elimination on a dense rational copy.
inline std::size_t dense_rank(std::vector<std::vector<Rational>> a) {
  std::size_t rank = 0;
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][c] == 0) continue;
      Rational f = a[r][c] / a[rank][c];
      for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

inline std::vector<std::vector<Rational>> to_dense(const bott::SparseMatrix& m) {
  std::vector<std::vector<Rational>> a(m.rows(), std::vector<Rational>(m.cols(), 0));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (const auto& [c, v] : m.row(r)) a[r][c] = v;
  return a;
}

/// Number of invariants of V_l1 (x) ... (x) V_lk by listing every weight
/// vector: (#weight 0) - (#weight 2).
inline long brute_force_invariant_count(const std::vector<int>& l) {
  long n0 = 0, n2 = 0;
  std::vector<int> choice(l.size(), 0);
  for (;;) {
    int w = 0;
    for (std::size_t i = 0; i < l.size(); ++i) w += l[i] - 2 * choice[i];
    n0 += (w == 0);
    n2 += (w == 2);
    std::size_t k = 0;
    while (k < l.size() && choice[k] == l[k]) choice[k++] = 0;
    if (k == l.size()) break;
    ++choice[k];
  }
  return n0 - n2;
}

inline Rational random_rational(std::mt19937& rng, int span = 9) {
  std::uniform_int_distribution<int> num(-span, span), den(1, 4);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

/// Random polynomial in the given variables with exponents <= max_exp.
inline bott::Polynomial random_polynomial(std::mt19937& rng, const std::vector<bott::Var>& vars, int terms,
                                          int max_exp = 3) {
  std::uniform_int_distribution<int> e(0, max_exp);
  std::vector<bott::Polynomial::Term> out;
  for (int t = 0; t < terms; ++t) {
    bott::Monomial m;
    for (auto v : vars) m.set(v, unsigned(e(rng)));
    out.emplace_back(m, random_rational(rng));
  }
  return bott::Polynomial::from_terms(std::move(out));
}

/// Random homogeneous form of degree m in X0, Y0, Z0 times random monomials
/// in x_i, y_i (i = 1..n).
inline bott::Polynomial random_symmetric_form(std::mt19937& rng, int m, int n, int terms) {
  std::uniform_int_distribution<int> part(0, m), e(0, 2);
  std::vector<bott::Polynomial::Term> out;
  for (int t = 0; t < terms; ++t) {
    int a = part(rng);
    int b = std::uniform_int_distribution<int>(0, m - a)(rng);
    bott::Monomial mono = bott::Monomial::of(bott::X0, unsigned(a)) * bott::Monomial::of(bott::Y0, unsigned(b)) *
                          bott::Monomial::of(bott::Z0, unsigned(m - a - b));
    for (int i = 1; i <= n; ++i) mono = mono * bott::Monomial::of(bott::x_var(i), unsigned(e(rng))) *
                                        bott::Monomial::of(bott::y_var(i), unsigned(e(rng)));
    out.emplace_back(mono, random_rational(rng));
  }
  return bott::Polynomial::from_terms(std::move(out));
}

inline bott::Tableau random_tableau(std::mt19937& rng, int max_edges, int min_vertex, int max_vertex,
                                    bool allow_loops = false) {
  std::uniform_int_distribution<int> count(1, max_edges), vertex(min_vertex, max_vertex);
  bott::Tableau t;
  int k = count(rng);
  while (static_cast<int>(t.edges.size()) < k) {
    int a = vertex(rng), b = vertex(rng);
    if (a == b && !allow_loops) continue;
    t.edges.emplace_back(a, b);
  }
  return t;
}

inline bott::Point random_point(std::mt19937& rng, int max_vertex) {
  bott::Point pt;
  pt[bott::X0] = random_rational(rng);
  pt[bott::Y0] = random_rational(rng);
  pt[bott::Z0] = random_rational(rng);
  for (int i = 0; i <= max_vertex; ++i) {
    pt[bott::x_var(i)] = random_rational(rng);
    pt[bott::y_var(i)] = random_rational(rng);
  }
  return pt;
}

}  // namespace oracle
