#pragma once

// Exact sparse linear algebra over the rationals.
//
// All rank and nullspace computations go through a fraction-free row
// echelon engine: each row is scaled to a primitive integer vector, rows are
// combined with integer multipliers (r <- a*r - b*p, divided by gcd(a, b)),
// and the content of every reduced row is divided out. No floating point is
// involved anywhere.

#include "bott/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <ostream>
#include <utility>
#include <vector>

namespace bott {

class SparseVector {
 public:
  SparseVector() = default;
  explicit SparseVector(std::size_t length) : length_(length) {}

  std::size_t length() const { return length_; }
  const std::map<std::size_t, Rational>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }

  Rational get(std::size_t i) const {
    check(i);
    auto it = entries_.find(i);
    return it == entries_.end() ? Rational(0) : it->second;
  }

  void set(std::size_t i, const Rational& value) {
    check(i);
    if (value == 0)
      entries_.erase(i);
    else
      entries_[i] = value;
  }

  void add(std::size_t i, const Rational& value) {
    check(i);
    if (value == 0) return;
    auto [it, inserted] = entries_.try_emplace(i, value);
    if (!inserted) {
      it->second += value;
      if (it->second == 0) entries_.erase(it);
    }
  }

  friend bool operator==(const SparseVector& a, const SparseVector& b) {
    return a.length_ == b.length_ && a.entries_ == b.entries_;
  }

 private:
  void check(std::size_t i) const {
    if (i >= length_) throw Error("vector index out of range");
  }

  std::size_t length_ = 0;
  std::map<std::size_t, Rational> entries_;
};

using Vector = SparseVector;

class SparseMatrix {
 public:
  using Row = std::map<std::size_t, Rational>;

  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : cols_(cols), data_(rows) {}

  static SparseMatrix from_dense(const std::vector<std::vector<long>>& dense) {
    std::size_t cols = dense.empty() ? 0 : dense.front().size();
    SparseMatrix m(dense.size(), cols);
    for (std::size_t r = 0; r < dense.size(); ++r) {
      if (dense[r].size() != cols) throw Error("ragged dense matrix");
      for (std::size_t c = 0; c < cols; ++c) m.set(r, c, Rational(dense[r][c]));
    }
    return m;
  }

  std::size_t rows() const { return data_.size(); }
  std::size_t cols() const { return cols_; }
  const Row& row(std::size_t r) const { return data_.at(r); }

  std::size_t nnz() const {
    std::size_t total = 0;
    for (const auto& row : data_) total += row.size();
    return total;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Row& r) { return r.empty(); });
  }

  Rational get(std::size_t r, std::size_t c) const {
    check(r, c);
    auto it = data_[r].find(c);
    return it == data_[r].end() ? Rational(0) : it->second;
  }

  void set(std::size_t r, std::size_t c, const Rational& value) {
    check(r, c);
    if (value == 0)
      data_[r].erase(c);
    else
      data_[r][c] = value;
  }

  void add(std::size_t r, std::size_t c, const Rational& value) {
    check(r, c);
    if (value == 0) return;
    auto [it, inserted] = data_[r].try_emplace(c, value);
    if (!inserted) {
      it->second += value;
      if (it->second == 0) data_[r].erase(it);
    }
  }

  SparseMatrix transpose() const {
    SparseMatrix t(cols_, rows());
    for (std::size_t r = 0; r < rows(); ++r)
      for (const auto& [c, v] : data_[r]) t.data_[c].emplace(r, v);
    return t;
  }

  /// Appends v as a new last column.
  SparseMatrix with_column(const SparseVector& v) const {
    if (v.length() != rows()) throw Error("dimension mismatch: column length differs from row count");
    SparseMatrix m = *this;
    m.cols_ += 1;
    for (const auto& [r, x] : v.entries()) m.data_[r].emplace(cols_, x);
    return m;
  }

  friend SparseVector operator*(const SparseMatrix& m, const SparseVector& v) {
    if (v.length() != m.cols()) throw Error("dimension mismatch in matrix-vector product");
    SparseVector out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
      Rational acc = 0;
      for (const auto& [c, x] : m.data_[r]) {
        auto it = v.entries().find(c);
        if (it != v.entries().end()) acc += x * it->second;
      }
      out.set(r, acc);
    }
    return out;
  }

  friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols() != b.rows()) throw Error("dimension mismatch in matrix product");
    SparseMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
      for (const auto& [k, x] : a.data_[r])
        for (const auto& [c, y] : b.data_[k]) out.add(r, c, x * y);
    return out;
  }

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    return a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  void check(std::size_t r, std::size_t c) const {
    if (r >= rows() || c >= cols_) throw Error("matrix index out of range");
  }

  std::size_t cols_ = 0;
  std::vector<Row> data_;
};

inline std::ostream& operator<<(std::ostream& os, const SparseMatrix& m) {
  os << m.rows() << "x" << m.cols() << " [";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    os << (r ? "; " : "");
    bool first = true;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      os << (first ? "" : " ") << m.get(r, c);
      first = false;
    }
  }
  return os << "]";
}

namespace detail {

using IntEntry = std::pair<std::uint32_t, Integer>;
using IntRow = std::vector<IntEntry>;

inline void divide_content(IntRow& row) {
  if (row.empty()) return;
  Integer g = abs(row.front().second);
  for (std::size_t i = 1; i < row.size() && g != 1; ++i) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), row[i].second.get_mpz_t());
  if (g != 1)
    for (auto& e : row) mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
}

/// Clears denominators and content: returns the primitive integer row
/// proportional to the given rational row.
template <typename Range>
IntRow primitive_row(const Range& entries) {
  Integer lcm = 1;
  for (const auto& [c, q] : entries) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den_mpz_t());
  IntRow row;
  row.reserve(entries.size());
  for (const auto& [c, q] : entries) {
    Integer v = lcm / q.get_den();
    v *= q.get_num();
    row.emplace_back(static_cast<std::uint32_t>(c), std::move(v));
  }
  std::sort(row.begin(), row.end(), [](const IntEntry& a, const IntEntry& b) { return a.first < b.first; });
  divide_content(row);
  return row;
}

/// Incremental fraction-free row echelon form.
///
/// Rows are inserted one at a time and reduced against the existing pivot
/// rows in creation order; after that single pass the row has no entry in
/// any existing pivot column. The pivot column of a new row is its
/// structurally sparsest column (weights supplied by the caller), ties broken
/// by lowest index.
class Echelon {
 public:
  explicit Echelon(std::size_t cols, std::vector<std::uint32_t> column_weight = {})
      : cols_(cols), owner_(cols, -1), weight_(std::move(column_weight)) {
    if (!weight_.empty() && weight_.size() != cols) throw Error("column weight vector has wrong length");
  }

  std::size_t cols() const { return cols_; }
  std::size_t rank() const { return rows_.size(); }
  const std::vector<IntRow>& rows() const { return rows_; }
  const std::vector<std::uint32_t>& pivot_columns() const { return pivot_col_; }

  /// Returns true when the row was independent of the rows inserted so far.
  bool insert(IntRow row) {
    fully_reduced_ = false;
    reduce(row, 0);
    if (row.empty()) return false;
    divide_content(row);
    std::size_t best = 0;
    for (std::size_t i = 1; i < row.size(); ++i) {
      if (!weight_.empty() && weight_[row[i].first] < weight_[row[best].first]) best = i;
    }
    if (row[best].second < 0)
      for (auto& e : row) e.second = -e.second;
    std::uint32_t col = row[best].first;
    owner_[col] = static_cast<std::int32_t>(rows_.size());
    pivot_col_.push_back(col);
    rows_.push_back(std::move(row));
    return true;
  }

  /// Brings the pivot rows to reduced form: afterwards each pivot row is
  /// zero in every other pivot column.
  void reduce_fully() {
    if (fully_reduced_) return;
    for (std::size_t k = rows_.size(); k-- > 0;) {
      reduce(rows_[k], k + 1);
      divide_content(rows_[k]);
    }
    fully_reduced_ = true;
  }

  /// Right nullspace basis, one vector per non-pivot column f with a 1 at f
  /// and 0 at every other non-pivot column. Calls reduce_fully().
  std::vector<SparseVector> kernel() {
    reduce_fully();
    std::vector<std::int64_t> slot(cols_, -1);
    std::vector<SparseVector> basis;
    for (std::size_t c = 0; c < cols_; ++c) {
      if (owner_[c] >= 0) continue;
      slot[c] = static_cast<std::int64_t>(basis.size());
      basis.emplace_back(cols_);
      basis.back().set(c, 1);
    }
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const IntRow& row = rows_[k];
      const Integer& lead = lead_of(k);
      for (const auto& [c, v] : row) {
        if (c == pivot_col_[k]) continue;
        Rational x(-v, lead);
        x.canonicalize();
        basis[static_cast<std::size_t>(slot[c])].set(pivot_col_[k], x);
      }
    }
    return basis;
  }

 private:
  const Integer& lead_of(std::size_t k) const {
    const IntRow& row = rows_[k];
    auto it = std::lower_bound(row.begin(), row.end(), pivot_col_[k],
                               [](const IntEntry& e, std::uint32_t c) { return e.first < c; });
    return it->second;
  }

  // Eliminates every pivot column owned by a row with index >= min_owner.
  void reduce(IntRow& row, std::size_t min_owner) {
    IntRow scratch;
    Integer g, a, b, t;
    for (;;) {
      std::int64_t best = -1;
      for (const auto& e : row) {
        std::int32_t o = owner_[e.first];
        if (o >= 0 && static_cast<std::size_t>(o) >= min_owner && (best < 0 || o < best)) best = o;
      }
      if (best < 0) return;
      const auto k = static_cast<std::size_t>(best);
      const IntRow& piv = rows_[k];
      const std::uint32_t col = pivot_col_[k];
      const Integer& lead = lead_of(k);
      auto at = std::lower_bound(row.begin(), row.end(), col,
                                 [](const IntEntry& e, std::uint32_t c) { return e.first < c; });
      mpz_gcd(g.get_mpz_t(), lead.get_mpz_t(), at->second.get_mpz_t());
      mpz_divexact(a.get_mpz_t(), lead.get_mpz_t(), g.get_mpz_t());
      mpz_divexact(b.get_mpz_t(), at->second.get_mpz_t(), g.get_mpz_t());
      const bool scale = (a != 1);
      // row <- a*row - b*piv
      scratch.clear();
      scratch.reserve(row.size() + piv.size());
      auto i = row.begin();
      auto j = piv.begin();
      while (i != row.end() || j != piv.end()) {
        if (j == piv.end() || (i != row.end() && i->first < j->first)) {
          if (scale) i->second *= a;
          scratch.push_back(std::move(*i));
          ++i;
        } else if (i == row.end() || j->first < i->first) {
          t = j->second * b;
          t = -t;
          scratch.emplace_back(j->first, t);
          ++j;
        } else {
          if (scale) i->second *= a;
          mpz_submul(i->second.get_mpz_t(), j->second.get_mpz_t(), b.get_mpz_t());
          if (i->second != 0) scratch.push_back(std::move(*i));
          ++i;
          ++j;
        }
      }
      row.swap(scratch);
      if (scale) divide_content(row);
    }
  }

  std::size_t cols_;
  std::vector<std::int32_t> owner_;
  std::vector<std::uint32_t> weight_;
  std::vector<IntRow> rows_;
  std::vector<std::uint32_t> pivot_col_;
  bool fully_reduced_ = false;
};

inline std::vector<std::uint32_t> column_weights(const SparseMatrix& m) {
  std::vector<std::uint32_t> w(m.cols(), 0);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (const auto& e : m.row(r)) ++w[e.first];
  return w;
}

inline Echelon echelon_of(const SparseMatrix& m) {
  if (m.cols() > std::numeric_limits<std::uint32_t>::max()) throw Error("matrix too wide");
  Echelon e(m.cols(), column_weights(m));
  for (std::size_t r = 0; r < m.rows(); ++r)
    if (!m.row(r).empty()) e.insert(primitive_row(m.row(r)));
  return e;
}


/// Row echelon form over Z/p for p = 2^61 - 1, mirroring Echelon's pivot
/// rule. Used to guess a reduced kernel cheaply; callers must verify.
class ModularEchelon {
 public:
  static constexpr std::uint64_t kPrime = (std::uint64_t(1) << 61) - 1;
  using Entry = std::pair<std::uint32_t, std::uint64_t>;
  using Row = std::vector<Entry>;

  ModularEchelon(std::size_t cols, std::vector<std::uint32_t> column_weight)
      : cols_(cols), owner_(cols, -1), weight_(std::move(column_weight)) {}

  static std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    unsigned __int128 t = static_cast<unsigned __int128>(a) * b;
    std::uint64_t lo = static_cast<std::uint64_t>(t & kPrime), hi = static_cast<std::uint64_t>(t >> 61);
    std::uint64_t r = lo + hi;
    r = (r & kPrime) + (r >> 61);
    return r >= kPrime ? r - kPrime : r;
  }
  static std::uint64_t sub(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kPrime - b; }
  static std::uint64_t inverse(std::uint64_t a) {
    std::uint64_t result = 1, e = kPrime - 2;
    while (e) {
      if (e & 1) result = mul(result, a);
      a = mul(a, a);
      e >>= 1;
    }
    return result;
  }
  /// Image of an integer in Z/p.
  static std::uint64_t reduce_integer(const Integer& v) {
    Integer r = v % Integer(static_cast<unsigned long>(kPrime));
    if (r < 0) r += static_cast<unsigned long>(kPrime);
    return r.get_ui();
  }

  std::size_t rank() const { return rows_.size(); }

  void insert(Row row) {
    reduce(row, 0);
    if (row.empty()) return;
    std::size_t best = 0;
    for (std::size_t i = 1; i < row.size(); ++i)
      if (weight_[row[i].first] < weight_[row[best].first]) best = i;
    const std::uint64_t inv = inverse(row[best].second);
    for (auto& e : row) e.second = mul(e.second, inv);
    owner_[row[best].first] = static_cast<std::int32_t>(rows_.size());
    pivot_col_.push_back(row[best].first);
    rows_.push_back(std::move(row));
  }

  /// Reduced kernel basis over Z/p: one vector per free column f, 1 at f.
  std::vector<Row> kernel() {
    for (std::size_t k = rows_.size(); k-- > 0;) reduce(rows_[k], k + 1);
    std::vector<std::int64_t> slot(cols_, -1);
    std::vector<Row> basis;
    for (std::size_t c = 0; c < cols_; ++c)
      if (owner_[c] < 0) {
        slot[c] = static_cast<std::int64_t>(basis.size());
        basis.push_back({{static_cast<std::uint32_t>(c), 1}});
      }
    for (std::size_t k = 0; k < rows_.size(); ++k)
      for (const auto& [c, v] : rows_[k])
        if (c != pivot_col_[k]) basis[static_cast<std::size_t>(slot[c])].emplace_back(pivot_col_[k], sub(0, v));
    for (auto& v : basis) std::sort(v.begin(), v.end());
    return basis;
  }

 private:
  // Scatters the row into a dense accumulator and eliminates owned columns
  // in increasing owner order, tracked by a min-heap.
  void reduce(Row& row, std::size_t min_owner) {
    if (dense_.size() != cols_) {
      dense_.assign(cols_, 0);
      touched_.assign(cols_, 0);
    }
    std::vector<std::uint32_t> support;
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> heap;
    auto touch = [&](std::uint32_t c) {
      if (touched_[c]) return;
      touched_[c] = 1;
      support.push_back(c);
      std::int32_t o = owner_[c];
      if (o >= 0 && static_cast<std::size_t>(o) >= min_owner) heap.push(static_cast<std::size_t>(o));
    };
    for (const auto& [c, v] : row) {
      dense_[c] = v;
      touch(c);
    }
    while (!heap.empty()) {
      const std::size_t k = heap.top();
      heap.pop();
      const std::uint64_t factor = dense_[pivot_col_[k]];
      if (!factor) continue;
      for (const auto& [c, v] : rows_[k]) {
        touch(c);
        dense_[c] = sub(dense_[c], mul(v, factor));
      }
    }
    std::sort(support.begin(), support.end());
    row.clear();
    for (std::uint32_t c : support) {
      if (dense_[c]) row.emplace_back(c, dense_[c]);
      dense_[c] = 0;
      touched_[c] = 0;
    }
  }

  std::size_t cols_;
  std::vector<std::int32_t> owner_;
  std::vector<std::uint32_t> weight_;
  std::vector<Row> rows_;
  std::vector<std::uint32_t> pivot_col_;
  std::vector<std::uint64_t> dense_;
  std::vector<char> touched_;
};

/// Rational number n/d with |n|, d <= sqrt(p/2) congruent to a mod p, if any.
inline bool rational_reconstruct(std::uint64_t a, Rational& out) {
  using I = __int128;
  const I p = ModularEchelon::kPrime;
  const I bound = static_cast<I>(1) << 30;  // sqrt(2^61 / 2)
  I r0 = p, r1 = a, t0 = 0, t1 = 1;
  while (r1 >= bound) {
    I q = r0 / r1;
    I r2 = r0 - q * r1, t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  if (t1 == 0) return false;
  I num = r1, den = t1;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (den >= bound) return false;
  out = Rational(Integer(static_cast<long>(num)), Integer(static_cast<long>(den)));
  out.canonicalize();
  return true;
}

/// Kernel of the integer-valued rows guessed modulo a prime and lifted by
/// rational reconstruction. Returns false when reconstruction fails; a true
/// return still has to be verified by the caller.
inline bool modular_kernel_guess(std::size_t cols, const std::vector<IntRow>& rows,
                                 const std::vector<std::uint32_t>& column_weight, std::vector<SparseVector>& out) {
  ModularEchelon echelon(cols, column_weight);
  for (const auto& row : rows) {
    ModularEchelon::Row r;
    r.reserve(row.size());
    for (const auto& [c, v] : row) {
      std::uint64_t x = ModularEchelon::reduce_integer(v);
      if (x) r.emplace_back(c, x);
    }
    echelon.insert(std::move(r));
  }
  out.clear();
  for (const auto& v : echelon.kernel()) {
    SparseVector vec(cols);
    for (const auto& [c, x] : v) {
      Rational q;
      if (!rational_reconstruct(x, q)) return false;
      vec.set(c, q);
    }
    out.push_back(std::move(vec));
  }
  return true;
}

}  // namespace detail

/// Rank over Q.
inline std::size_t rank(const SparseMatrix& m) { return detail::echelon_of(m).rank(); }

/// Basis of the right nullspace; for an empty (0-row) matrix this is the
/// standard basis of Q^cols.
inline std::vector<SparseVector> kernel_basis(const SparseMatrix& m) { return detail::echelon_of(m).kernel(); }

/// True iff v lies in the column span of m.
inline bool in_image(const SparseMatrix& m, const SparseVector& v) {
  if (v.length() != m.rows()) throw Error("dimension mismatch: vector length differs from row count");
  if (v.is_zero()) return true;
  return rank(m.with_column(v)) == rank(m);
}

}  // namespace bott
