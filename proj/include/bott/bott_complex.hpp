#pragma once

// The invariant Koszul complexes built from the sections s_i:
//
//   F:     term q = sum over |S| = j-q of Inv(S^q coadjoint (x) V_(d - 2*1_S))
//   F-bar: the same with S^q replaced by V_2q (binary slot 0), s_i by p_0i^2
//
// with differential components S -> S\{i} equal to (-1)^#{i' in S, i' < i}
// times multiplication by the section. Matrices are expressed in the bases
// provided by a BasisStore; cohomology comes from exact ranks.

#include "bott/exact_linalg.hpp"
#include "bott/git_stability.hpp"
#include "bott/graph_calc.hpp"
#include "bott/invariants.hpp"
#include "bott/polyring.hpp"

#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace bott {

struct Summand {
  std::vector<int> subset;  // 1-based, increasing
  std::shared_ptr<const InvariantBasis> basis;
  std::size_t offset = 0;   // first coordinate inside the term
};

struct ComplexTerm {
  int degree = 0;
  std::vector<Summand> summands;
  std::size_t dim = 0;
};

struct ChainComplex {
  Polarization polarization;
  int j = 0;
  bool bar = false;
  std::vector<ComplexTerm> terms;            // degrees 0..j
  std::vector<SparseMatrix> differentials;  // differentials[q]: term q -> term q+1

  std::vector<std::size_t> term_dims() const {
    std::vector<std::size_t> dims;
    for (const auto& t : terms) dims.push_back(t.dim);
    return dims;
  }

  long euler() const {
    long e = 0;
    for (const auto& t : terms) e += (t.degree % 2 ? -1 : 1) * static_cast<long>(t.dim);
    return e;
  }
};

/// Shared state for building complexes: the basis store and a progress sink.
struct ComplexContext {
  BasisStore* store = nullptr;
  std::function<void(const std::string&)> progress;

  BasisStore& bases() const {
    if (!store) throw Error("complex context without a basis store");
    return *store;
  }
  void log(const std::string& message) const {
    if (progress) progress(message);
  }
};

inline ComplexContext& default_context() {
  static BasisStore store = BasisStore::from_environment();
  static ComplexContext ctx{&store, nullptr};
  return ctx;
}

namespace detail {

inline void for_each_subset(int n, int size, const std::function<void(const std::vector<int>&)>& visit) {
  if (size < 0 || size > n) return;
  std::vector<int> s(static_cast<std::size_t>(size));
  for (int k = 0; k < size; ++k) s[std::size_t(k)] = k + 1;
  for (;;) {
    visit(s);
    int k = size - 1;
    while (k >= 0 && s[std::size_t(k)] == n - size + k + 1) --k;
    if (k < 0) return;
    ++s[std::size_t(k)];
    for (int t = k + 1; t < size; ++t) s[std::size_t(t)] = s[std::size_t(t - 1)] + 1;
  }
}

inline Multidegree summand_degree(const Polarization& p, const std::vector<int>& subset, int q, bool bar) {
  std::vector<int> grades = p.d;
  for (int i : subset) grades[std::size_t(i - 1)] -= 2;
  return bar ? Multidegree(0, 2 * q, grades) : Multidegree(q, 0, grades);
}

inline Polynomial section(int i, bool bar) {
  if (!bar) return s_section(i);
  Polynomial p = plucker(0, i);
  return p * p;
}

inline void check_complex_input(const Polarization& p, int j) {
  if (p.n() < 1) throw Error("polarization needs at least one factor");
  if (p.n() > kMaxVertex) throw Error("at most " + std::to_string(kMaxVertex) + " factors are supported");
  if (j < 0) throw Error("form degree j must be nonnegative");
}

}  // namespace detail

inline ChainComplex build_complex(const ComplexContext& ctx, const Polarization& p, int j, bool bar) {
  detail::check_complex_input(p, j);
  ChainComplex c;
  c.polarization = p;
  c.j = j;
  c.bar = bar;
  const int n = p.n();
  for (int q = 0; q <= j; ++q) {
    ComplexTerm term;
    term.degree = q;
    detail::for_each_subset(n, j - q, [&](const std::vector<int>& s) {
      Multidegree md = detail::summand_degree(p, s, q, bar);
      if (!md.is_valid()) return;
      ctx.log("basis " + md.to_string());
      Summand sm{s, ctx.bases().get(md), term.dim};
      term.dim += sm.basis->size();
      term.summands.push_back(std::move(sm));
    });
    c.terms.push_back(std::move(term));
  }
  for (int q = 0; q < j; ++q) {
    const ComplexTerm& src = c.terms[std::size_t(q)];
    const ComplexTerm& dst = c.terms[std::size_t(q + 1)];
    SparseMatrix d(dst.dim, src.dim);
    ctx.log("differential " + std::to_string(q) + " (" + std::to_string(dst.dim) + "x" + std::to_string(src.dim) + ")");
    for (const auto& target : dst.summands) {
      for (const auto& source : src.summands) {
        // source = target + {i}
        if (source.subset.size() != target.subset.size() + 1) continue;
        if (!std::includes(source.subset.begin(), source.subset.end(), target.subset.begin(), target.subset.end()))
          continue;
        int i = 0, position = 0;
        for (std::size_t k = 0; k < source.subset.size(); ++k)
          if (!std::binary_search(target.subset.begin(), target.subset.end(), source.subset[k])) {
            i = source.subset[k];
            position = static_cast<int>(k);
          }
        const Polynomial factor = detail::section(i, bar);
        const Rational sign = position % 2 ? -1 : 1;
        for (std::size_t col = 0; col < source.basis->size(); ++col) {
          SparseVector v = product_coordinates(*target.basis, factor, source.basis->basis[col]);
          for (const auto& [row, x] : v.entries()) d.set(target.offset + row, source.offset + col, sign * x);
        }
      }
    }
    c.differentials.push_back(std::move(d));
  }
  return c;
}

inline ChainComplex build_F(const ComplexContext& ctx, const Polarization& p, int j) { return build_complex(ctx, p, j, false); }
inline ChainComplex build_Fbar(const ComplexContext& ctx, const Polarization& p, int j) { return build_complex(ctx, p, j, true); }
inline ChainComplex build_F(const Polarization& p, int j) { return build_F(default_context(), p, j); }
inline ChainComplex build_Fbar(const Polarization& p, int j) { return build_Fbar(default_context(), p, j); }

/// True when every composite of consecutive differentials vanishes.
inline bool differentials_square_to_zero(const ChainComplex& c) {
  for (std::size_t q = 0; q + 1 < c.differentials.size(); ++q)
    if (!(c.differentials[q + 1] * c.differentials[q]).is_zero()) return false;
  return true;
}

struct CohomologyResult {
  std::vector<std::size_t> ranks;  // ranks[q] = rank of differential q
  std::vector<long> dims;          // dims[q] = dim H^q
  long euler_terms = 0;
  long euler_cohomology = 0;
  bool consistent = true;          // no negative dimension, Euler sums agree
};

inline CohomologyResult compute_cohomology(const ChainComplex& c) {
  CohomologyResult r;
  for (const auto& d : c.differentials) r.ranks.push_back(rank(d));
  for (std::size_t q = 0; q < c.terms.size(); ++q) {
    long h = static_cast<long>(c.terms[q].dim);
    if (q < r.ranks.size()) h -= static_cast<long>(r.ranks[q]);
    if (q > 0) h -= static_cast<long>(r.ranks[q - 1]);
    if (h < 0) r.consistent = false;
    r.dims.push_back(h);
    r.euler_cohomology += (q % 2 ? -1 : 1) * h;
  }
  r.euler_terms = c.euler();
  if (r.euler_terms != r.euler_cohomology) r.consistent = false;
  return r;
}

/// dim H^q for every degree q.
inline std::vector<long> cohomology_dims(const ChainComplex& c) { return compute_cohomology(c).dims; }

// ---------------------------------------------------------------------------
// Verdicts

struct BottJRecord {
  int j = 0;
  std::vector<std::size_t> term_dims;
  std::vector<long> cohomology_dims;
  long euler = 0;
  bool last_map_surjective = false;
  bool d_squared_zero = true;
  bool euler_consistent = true;
  std::vector<std::pair<std::size_t, std::size_t>> matrix_shapes;  // rows x cols
  double wall_clock_ms = 0;
};

struct BottReport {
  Polarization polarization;
  int n = 0;
  int dim_y = 0;
  std::vector<BottJRecord> per_j;
  bool verdict = false;      // H^i = 0 for i >= 1 and j <= n-3, structural checks pass
  bool top_exact = false;    // j = n-2: every H^i vanishes
  double wall_clock_ms = 0;
};

namespace detail {

inline void check_verifiable(const Polarization& p) {
  if (p.n() < 3) throw Error("the quotient needs at least 3 factors");
  if (has_strictly_semistable(p)) throw Error("polarization " + p.to_string() + " has strictly semistable points");
  if (p.total() % 2) throw Error("polarization " + p.to_string() + " has odd total degree; use the doubled polarization");
}

inline double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

inline BottJRecord analyze_complex(const ChainComplex& c) {
  BottJRecord rec;
  rec.j = c.j;
  rec.term_dims = c.term_dims();
  auto h = compute_cohomology(c);
  rec.cohomology_dims = h.dims;
  rec.euler = h.euler_terms;
  rec.euler_consistent = h.consistent;
  rec.d_squared_zero = differentials_square_to_zero(c);
  const std::size_t last_dim = c.terms.back().dim;
  rec.last_map_surjective = c.differentials.empty() ? last_dim == 0 : h.ranks.back() == last_dim;
  for (const auto& d : c.differentials) rec.matrix_shapes.emplace_back(d.rows(), d.cols());
  return rec;
}

/// Builds F for j = 0..n-2 and checks the vanishing of H^i, i >= 1, for
/// j <= n-3, and full exactness at j = n-2.
inline BottReport verify_bott(const ComplexContext& ctx, const Polarization& p) {
  detail::check_verifiable(p);
  const auto start = std::chrono::steady_clock::now();
  BottReport report;
  report.polarization = p;
  report.n = p.n();
  report.dim_y = p.n() - 3;
  report.verdict = true;
  report.top_exact = true;
  for (int j = 0; j <= p.n() - 2; ++j) {
    ctx.log("verify j=" + std::to_string(j));
    const auto t0 = std::chrono::steady_clock::now();
    BottJRecord rec = analyze_complex(build_F(ctx, p, j));
    rec.wall_clock_ms = detail::elapsed_ms(t0);
    const bool structural = rec.d_squared_zero && rec.euler_consistent;
    bool higher_vanish = true;
    for (std::size_t i = 1; i < rec.cohomology_dims.size(); ++i)
      if (rec.cohomology_dims[i] != 0) higher_vanish = false;
    if (j <= p.n() - 3) {
      if (!structural || !higher_vanish) report.verdict = false;
    } else {
      if (!structural) report.verdict = false;
      report.top_exact = higher_vanish && rec.cohomology_dims[0] == 0;
    }
    report.per_j.push_back(std::move(rec));
  }
  report.wall_clock_ms = detail::elapsed_ms(start);
  return report;
}

inline BottReport verify_bott(const Polarization& p) { return verify_bott(default_context(), p); }

/// The last differential of F(p, j) is onto its target.
inline bool check_tj_surjective(const ComplexContext& ctx, const Polarization& p, int j) {
  detail::check_verifiable(p);
  ChainComplex c = build_F(ctx, p, j);
  const std::size_t target = c.terms.back().dim;
  if (c.differentials.empty()) return target == 0;
  return rank(c.differentials.back()) == target;
}

inline bool check_tj_surjective(const Polarization& p, int j) { return check_tj_surjective(default_context(), p, j); }

struct FbarExactness {
  std::vector<long> cohomology_dims;
  bool ok = false;  // H^i = 0 for i >= 2 and structural checks pass
};

inline FbarExactness check_fbar_exactness(const ComplexContext& ctx, const Polarization& p, int j) {
  detail::check_verifiable(p);
  ChainComplex c = build_Fbar(ctx, p, j);
  auto h = compute_cohomology(c);
  FbarExactness out;
  out.cohomology_dims = h.dims;
  out.ok = h.consistent && differentials_square_to_zero(c);
  for (std::size_t i = 2; i < h.dims.size(); ++i)
    if (h.dims[i] != 0) out.ok = false;
  return out;
}

inline FbarExactness check_fbar_exactness(const Polarization& p, int j) {
  return check_fbar_exactness(default_context(), p, j);
}

// ---------------------------------------------------------------------------
// Splitting of the last differential along S^m = V_2m + conic * S^(m-2)

struct SplittingCheck {
  bool bases_split = false;       // dimensions add up on both sides
  bool zero_block = false;        // conic part -> V_2j part vanishes
  bool top_block_is_fbar = false;  // V -> V block equals F-bar's last differential
  bool lower_block_is_f = false;   // conic part -> conic part equals F(j-2)'s last differential
  bool tprime_matches = true;      // j = 2 only: the V -> conic block is (2/3) t'
  std::size_t tprime_checked = 0;

  bool ok() const { return bases_split && zero_block && top_block_is_fbar && lower_block_is_f && tprime_matches; }
};

inline SplittingCheck check_splitting_diagram(const ComplexContext& ctx, const Polarization& p, int j) {
  if (j < 2) throw Error("the splitting diagram needs j >= 2");
  detail::check_complex_input(p, j);
  SplittingCheck out;
  const int n = p.n();
  const Polynomial q = conic();
  const ChainComplex fbar = build_Fbar(ctx, p, j);
  const ChainComplex lower = build_F(ctx, p, j - 2);
  const SparseMatrix& fbar_last = fbar.differentials.back();
  // lower's last differential maps sym j-3 summands to sym j-2 (j = 2: none)
  const auto top_target = ctx.bases().get(Multidegree(0, 2 * j, p.d));
  const auto rest_target = ctx.bases().get(Multidegree(j - 2, 0, p.d));
  const auto full_target = ctx.bases().get(Multidegree(j, 0, p.d));
  out.bases_split = full_target->size() == top_target->size() + rest_target->size();
  out.zero_block = true;
  out.top_block_is_fbar = true;
  out.lower_block_is_f = true;
  std::size_t fbar_offset = 0, lower_offset = 0;
  for (int i = 1; i <= n; ++i) {
    std::vector<int> grades = p.d;
    grades[std::size_t(i - 1)] -= 2;
    if (grades[std::size_t(i - 1)] < 0) continue;
    const auto top_source = ctx.bases().get(Multidegree(0, 2 * j - 2, grades));
    const auto full_source = ctx.bases().get(Multidegree(j - 1, 0, grades));
    std::shared_ptr<const InvariantBasis> rest_source;
    if (j >= 3) rest_source = ctx.bases().get(Multidegree(j - 3, 0, grades));
    const std::size_t rest_size = rest_source ? rest_source->size() : 0;
    if (full_source->size() != top_source->size() + rest_size) out.bases_split = false;
    // Only vertex i leaves the subset {i}; the Koszul sign is +1.
    const Polynomial s = s_section(i);
    for (std::size_t col = 0; col < top_source->size(); ++col) {
      const Polynomial image = s * lift0(top_source->basis[col]);
      SymmetricSplit split = split_symmetric(image);
      SparseVector top = coordinates(*top_target, split.top);
      for (std::size_t row = 0; row < top_target->size(); ++row)
        if (top.get(row) != fbar_last.get(row, fbar_offset + col)) out.top_block_is_fbar = false;
    }
    for (std::size_t col = 0; col < rest_size; ++col) {
      const Polynomial image = s * q * rest_source->basis[col];
      SymmetricSplit split = split_symmetric(image);
      if (!split.top.is_zero()) out.zero_block = false;
      SparseVector rest = coordinates(*rest_target, split.rest);
      const SparseMatrix& lower_last = lower.differentials.back();
      for (std::size_t row = 0; row < rest_target->size(); ++row)
        if (rest.get(row) != lower_last.get(row, lower_offset + col)) out.lower_block_is_f = false;
    }
    if (j == 2) {
      Multidegree source_degree(0, 2, grades);
      for (const Tableau& t : enumerate_standard(source_degree)) {
        const Polynomial image = s * lift0(to_polynomial(t));
        SymmetricSplit split = split_symmetric(image);
        if (!(split.rest == make_rational(2, 3) * to_polynomial(tprime_move(t, i)))) out.tprime_matches = false;
        ++out.tprime_checked;
      }
    }
    fbar_offset += top_source->size();
    lower_offset += rest_size;
  }
  if (fbar_offset != fbar_last.cols()) out.top_block_is_fbar = false;
  if (j >= 3 && lower_offset != lower.differentials.back().cols()) out.lower_block_is_f = false;
  return out;
}

inline SplittingCheck check_splitting_diagram(const Polarization& p, int j) {
  return check_splitting_diagram(default_context(), p, j);
}

// ---------------------------------------------------------------------------
// Image of t1 through the graph calculus

struct T1ImageCheck {
  std::size_t rank_differential = 0;
  std::size_t rank_graphs = 0;
  std::size_t rank_joint = 0;
  std::size_t graphs = 0;

  bool ok() const { return rank_differential == rank_graphs && rank_graphs == rank_joint; }
};

/// Compares the image of the j = 1 last differential of F-bar with the span
/// of straighten(t1_move(T, i)) over standard T of multidegree d - 2e_i.
inline T1ImageCheck check_t1_image(const ComplexContext& ctx, const Polarization& p) {
  detail::check_complex_input(p, 1);
  const ChainComplex c = build_Fbar(ctx, p, 1);
  const SparseMatrix& g1 = c.differentials.back();
  const auto target = ctx.bases().get(Multidegree(0, 2, p.d));
  std::vector<SparseVector> columns;
  for (int i = 1; i <= p.n(); ++i) {
    std::vector<int> grades = p.d;
    grades[std::size_t(i - 1)] -= 2;
    if (grades[std::size_t(i - 1)] < 0) continue;
    for (const Tableau& t : enumerate_standard(Multidegree(0, 0, grades))) {
      GraphElement g = straighten(t1_move(t, i));
      columns.push_back(coordinates(*target, to_polynomial(g)));
    }
  }
  SparseMatrix g2(target->size(), columns.size());
  for (std::size_t col = 0; col < columns.size(); ++col)
    for (const auto& [row, x] : columns[col].entries()) g2.set(row, col, x);
  SparseMatrix joint(target->size(), g1.cols() + g2.cols());
  for (std::size_t r = 0; r < target->size(); ++r) {
    for (const auto& [col, x] : g1.row(r)) joint.set(r, col, x);
    for (const auto& [col, x] : g2.row(r)) joint.set(r, g1.cols() + col, x);
  }
  T1ImageCheck out;
  out.graphs = columns.size();
  out.rank_differential = rank(g1);
  out.rank_graphs = rank(g2);
  out.rank_joint = rank(joint);
  return out;
}

}  // namespace bott
