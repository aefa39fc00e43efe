#pragma once

// SL2-invariant subspaces of multigraded pieces of the polynomial ring:
// a weight-count dimension formula, explicit bases (kernel of e on the
// weight-0 monomial span), coordinates in those bases, and a basis store
// with an in-memory cache and an optional on-disk cache.

#include "bott/exact_linalg.hpp"
#include "bott/polyring.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace bott {

namespace detail {

// Weight multiplicities of one slot, offset so that index k <-> weight k - max.
inline std::vector<Integer> slot_weight_counts(int grade, bool symmetric) {
  if (symmetric) {
    // X0^a Y0^b Z0^c with a+b+c = grade has weight 2(a-c).
    std::vector<Integer> w(std::size_t(4 * grade + 1), 0);
    for (int a = 0; a <= grade; ++a)
      for (int c = 0; a + c <= grade; ++c) w[std::size_t(2 * (a - c) + 2 * grade)] += 1;
    return w;
  }
  std::vector<Integer> w(std::size_t(2 * grade + 1), 0);
  for (int k = 0; k <= grade; ++k) w[std::size_t(2 * k)] = 1;
  return w;
}

inline std::vector<Integer> convolve(const std::vector<Integer>& a, const std::vector<Integer>& b) {
  std::vector<Integer> c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (b[j] != 0) c[i + j] += a[i] * b[j];
  }
  return c;
}

}  // namespace detail

/// dim of the invariant subspace: N_0 - N_2, with N_w the number of weight
/// vectors of h-weight w. Zero for invalid (negative) grades or odd total.
inline std::size_t invariant_dim(const Multidegree& l) {
  if (!l.is_valid() || l.binary_total() % 2 != 0) return 0;
  std::vector<Integer> counts{1};
  if (l.sym_grade > 0) counts = detail::convolve(counts, detail::slot_weight_counts(l.sym_grade, true));
  if (l.vertex0_grade > 0) counts = detail::convolve(counts, detail::slot_weight_counts(l.vertex0_grade, false));
  for (int d : l.factor_grades)
    if (d > 0) counts = detail::convolve(counts, detail::slot_weight_counts(d, false));
  const std::size_t zero = (counts.size() - 1) / 2;
  Integer n0 = counts[zero];
  Integer n2 = zero + 2 < counts.size() ? counts[zero + 2] : Integer(0);
  return static_cast<std::size_t>(Integer(n0 - n2).get_ui());
}

struct InvariantBasis {
  Multidegree degree;
  std::vector<Polynomial> basis;
  /// Per basis element: a monomial occurring in that element only, and its
  /// coefficient there. Coordinates are read off at these monomials.
  std::vector<std::pair<Monomial, Rational>> readout;
  std::unordered_map<Monomial, std::size_t, MonomialHash> index;

  std::size_t size() const { return basis.size(); }

  /// Fills readout/index from the basis; throws if some element has no
  /// private monomial.
  void build_index() {
    std::unordered_map<Monomial, std::size_t, MonomialHash> occurrences;
    for (const auto& b : basis)
      for (const auto& [m, c] : b.terms()) ++occurrences[m];
    readout.clear();
    index.clear();
    for (std::size_t j = 0; j < basis.size(); ++j) {
      bool found = false;
      for (const auto& [m, c] : basis[j].terms()) {
        if (occurrences[m] == 1) {
          readout.emplace_back(m, c);
          index.emplace(m, j);
          found = true;
          break;
        }
      }
      if (!found) throw Error("invariant basis of " + degree.to_string() + " has an element without a private monomial");
    }
  }
};

namespace detail {

struct SlotChoice {
  Monomial part;
  int weight;
};

inline std::vector<SlotChoice> binary_slot(int vertex, int grade) {
  std::vector<SlotChoice> out;
  for (int a = grade; a >= 0; --a)
    out.push_back({Monomial::of(x_var(vertex), unsigned(a)) * Monomial::of(y_var(vertex), unsigned(grade - a)),
                   2 * a - grade});
  return out;
}

inline std::vector<SlotChoice> symmetric_slot(int grade) {
  std::vector<SlotChoice> out;
  for (int a = grade; a >= 0; --a)
    for (int b = grade - a; b >= 0; --b) {
      int c = grade - a - b;
      out.push_back({Monomial::of(X0, unsigned(a)) * Monomial::of(Y0, unsigned(b)) * Monomial::of(Z0, unsigned(c)),
                     2 * (a - c)});
    }
  return out;
}

/// All monomials of multidegree l with h-weight equal to target, sorted in
/// descending graded lex order.
inline std::vector<Monomial> weight_monomials(const Multidegree& l, int target) {
  if (l.n() > kMaxVertex) throw Error("too many factors for the polynomial ring: " + std::to_string(l.n()));
  std::vector<std::vector<SlotChoice>> slots;
  std::vector<int> span;  // max |weight| per slot
  if (l.sym_grade > 0) {
    slots.push_back(symmetric_slot(l.sym_grade));
    span.push_back(2 * l.sym_grade);
  }
  if (l.vertex0_grade > 0) {
    slots.push_back(binary_slot(0, l.vertex0_grade));
    span.push_back(l.vertex0_grade);
  }
  for (int i = 1; i <= l.n(); ++i) {
    int d = l.factor_grades[std::size_t(i - 1)];
    if (d > 0) {
      slots.push_back(binary_slot(i, d));
      span.push_back(d);
    }
  }
  std::vector<int> tail(slots.size() + 1, 0);
  for (std::size_t k = slots.size(); k-- > 0;) tail[k] = tail[k + 1] + span[k];
  std::vector<Monomial> out;
  std::function<void(std::size_t, const Monomial&, int)> rec = [&](std::size_t k, const Monomial& acc, int w) {
    if (k == slots.size()) {
      if (w == target) out.push_back(acc);
      return;
    }
    for (const auto& choice : slots[k]) {
      int nw = w + choice.weight;
      if (std::abs(target - nw) > tail[k + 1]) continue;
      rec(k + 1, acc * choice.part, nw);
    }
  };
  rec(0, Monomial(), 0);
  std::sort(out.begin(), out.end(), grlex_greater);
  return out;
}

inline InvariantBasis compute_invariant_basis(const Multidegree& l) {
  InvariantBasis result;
  result.degree = l;
  if (!l.is_valid() || l.binary_total() % 2 != 0) return result;
  const std::vector<Monomial> columns = weight_monomials(l, 0);
  // Rows of e restricted to weight 0, one per weight-2 monomial.
  std::unordered_map<Monomial, std::size_t, MonomialHash> row_of;
  std::vector<std::vector<std::pair<std::uint32_t, Rational>>> rows;
  for (std::size_t c = 0; c < columns.size(); ++c)
    for_each_e_image(columns[c], [&](const Monomial& image, const Rational& factor) {
      auto [it, inserted] = row_of.try_emplace(image, rows.size());
      if (inserted) rows.emplace_back();
      rows[it->second].emplace_back(static_cast<std::uint32_t>(c), factor);
    });
  std::vector<std::uint32_t> weights(columns.size(), 0);
  for (const auto& row : rows)
    for (const auto& e : row) ++weights[e.first];
  std::vector<IntRow> int_rows;
  int_rows.reserve(rows.size());
  for (const auto& row : rows) int_rows.push_back(primitive_row(row));
  const std::size_t expected = invariant_dim(l);
  auto to_polynomials = [&](const std::vector<SparseVector>& kernel) {
    std::vector<Polynomial> out;
    for (const auto& v : kernel) {
      std::vector<Polynomial::Term> terms;
      for (const auto& [c, x] : v.entries()) terms.emplace_back(columns[c], x);
      out.push_back(Polynomial::from_terms(std::move(terms)));
    }
    return out;
  };
  auto all_invariant = [](const std::vector<Polynomial>& candidates) {
    return std::all_of(candidates.begin(), candidates.end(),
                       [](const Polynomial& b) { return apply_e(b).is_zero() && apply_f(b).is_zero(); });
  };
  // Fast path: reduced kernel modulo a prime, lifted and then checked exactly.
  // Vectors with a 1 in distinct free columns are independent, so passing the
  // check with the right count certifies a basis.
  std::vector<SparseVector> guess;
  bool certified = false;
  if (modular_kernel_guess(columns.size(), int_rows, weights, guess) && guess.size() == expected) {
    result.basis = to_polynomials(guess);
    certified = all_invariant(result.basis);
  }
  if (!certified) {
    Echelon echelon(columns.size(), std::move(weights));
    for (auto& row : int_rows) echelon.insert(std::move(row));
    result.basis = to_polynomials(echelon.kernel());
    if (!all_invariant(result.basis))
      throw Error("internal: e-kernel element of " + l.to_string() + " is not sl2-invariant");
    if (result.basis.size() != expected)
      throw Error("internal: invariant basis size disagrees with the weight count for " + l.to_string());
  }
  std::stable_sort(result.basis.begin(), result.basis.end(), [](const Polynomial& a, const Polynomial& b) {
    return grlex_greater(a.leading_term().first, b.leading_term().first);
  });
  result.build_index();
  return result;
}

inline std::string cache_file_name(const Multidegree& l) {
  std::string name = l.to_string();
  for (char& ch : name) {
    if (ch == ';') ch = '_';
    if (ch == ',') ch = '.';
  }
  return name + ".basis";
}

}  // namespace detail

/// Basis of the invariants of multidegree l. Bypasses every cache.
inline InvariantBasis invariant_basis(const Multidegree& l) { return detail::compute_invariant_basis(l); }

/// Coordinates of an invariant p in the basis; verified exactly.
inline SparseVector coordinates(const InvariantBasis& b, const Polynomial& p) {
  SparseVector v(b.size());
  if (p.is_zero()) return v;
  auto md = p.multidegree(b.degree.n());
  if (!md || !(*md == b.degree))
    throw Error("polynomial does not have multidegree " + b.degree.to_string());
  if (!apply_e(p).is_zero() || !apply_f(p).is_zero()) throw Error("polynomial is not sl2-invariant");
  for (std::size_t j = 0; j < b.size(); ++j) v.set(j, p.coefficient(b.readout[j].first) / b.readout[j].second);
  Polynomial check;
  for (const auto& [j, x] : v.entries()) check += x * b.basis[j];
  if (!(check == p)) throw Error("internal: invariant not in the span of the basis of " + b.degree.to_string());
  return v;
}

/// Coordinates of factor * source in target, where both factor and source
/// are invariant (so the product is). Only the readout coefficients of the
/// product are computed.
inline SparseVector product_coordinates(const InvariantBasis& target, const Polynomial& factor,
                                        const Polynomial& source) {
  SparseVector v(target.size());
  for (std::size_t j = 0; j < target.size(); ++j) {
    const auto& [m, scale] = target.readout[j];
    Rational acc = 0;
    for (const auto& [fm, fc] : factor.terms()) {
      if (!fm.divides(m)) continue;
      Rational c = source.coefficient(fm.cofactor_in(m));
      if (c != 0) acc += fc * c;
    }
    if (acc != 0) v.set(j, acc / scale);
  }
  return v;
}

/// Memoizing source of invariant bases, optionally persisted to a directory.
class BasisStore {
 public:
  /// Memory-only store.
  BasisStore() = default;
  explicit BasisStore(std::filesystem::path cache_dir) : dir_(std::move(cache_dir)) {}

  /// Store configured from the BOTT_CACHE_DIR environment variable
  /// (memory-only when unset or empty).
  static BasisStore from_environment() {
    const char* env = std::getenv("BOTT_CACHE_DIR");
    if (env && *env) return BasisStore(std::filesystem::path(env));
    return BasisStore();
  }

  const std::filesystem::path& directory() const { return dir_; }
  bool persistent() const { return !dir_.empty(); }

  std::shared_ptr<const InvariantBasis> get(const Multidegree& l) {
    const std::string key = l.to_string();
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = memory_.find(key);
      if (it != memory_.end()) return it->second;
    }
    std::shared_ptr<const InvariantBasis> basis;
    if (persistent()) basis = load(l);
    if (!basis) {
      basis = std::make_shared<const InvariantBasis>(detail::compute_invariant_basis(l));
      ++computed_;
      if (persistent()) save(*basis);
    }
    std::lock_guard<std::mutex> lock(mutex_);
    return memory_.emplace(key, basis).first->second;
  }

  std::size_t computed_count() const { return computed_; }
  std::size_t loaded_count() const { return loaded_; }

  struct DiskStats {
    std::size_t files = 0;
    std::uintmax_t bytes = 0;
  };

  DiskStats disk_stats() const {
    DiskStats s;
    if (!persistent() || !std::filesystem::exists(dir_)) return s;
    for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
      if (entry.is_regular_file() && entry.path().extension() == ".basis") {
        ++s.files;
        s.bytes += entry.file_size();
      }
    }
    return s;
  }

  /// Removes every cached basis file; returns how many were removed.
  std::size_t clear_disk() {
    std::size_t removed = 0;
    if (!persistent() || !std::filesystem::exists(dir_)) return 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir_))
      if (entry.is_regular_file() && entry.path().extension() == ".basis") removed += std::filesystem::remove(entry.path());
    return removed;
  }

 private:
  std::shared_ptr<const InvariantBasis> load(const Multidegree& l) {
    std::ifstream in(dir_ / detail::cache_file_name(l));
    if (!in) return nullptr;
    std::string header;
    if (!std::getline(in, header)) return nullptr;
    const std::string expected = "multidegree " + l.to_string() + " count ";
    if (header.rfind(expected, 0) != 0) return nullptr;
    std::size_t count = 0;
    try {
      count = std::stoul(header.substr(expected.size()));
    } catch (...) {
      return nullptr;
    }
    if (count != invariant_dim(l)) return nullptr;
    auto basis = std::make_shared<InvariantBasis>();
    basis->degree = l;
    std::string line;
    try {
      while (basis->basis.size() < count && std::getline(in, line)) {
        Polynomial p = Polynomial::parse(line);
        auto md = p.multidegree(l.n());
        if (!md || !(*md == l)) return nullptr;
        basis->basis.push_back(std::move(p));
      }
      if (basis->basis.size() != count) return nullptr;
      basis->build_index();
    } catch (const Error&) {
      return nullptr;
    }
    ++loaded_;
    return basis;
  }

  void save(const InvariantBasis& b) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error("cannot create cache directory " + dir_.string() + ": " + ec.message());
    const auto final_path = dir_ / detail::cache_file_name(b.degree);
    auto tmp = final_path;
    tmp += ".tmp" + std::to_string(reinterpret_cast<std::uintptr_t>(this));
    {
      std::ofstream out(tmp);
      if (!out) throw Error("cannot write cache file " + tmp.string());
      out << "multidegree " << b.degree.to_string() << " count " << b.size() << '\n';
      for (const auto& p : b.basis) out << p.to_string() << '\n';
      if (!out) throw Error("cannot write cache file " + tmp.string());
    }
    std::filesystem::rename(tmp, final_path, ec);
    if (ec) throw Error("cannot move cache file into place: " + ec.message());
  }

  std::filesystem::path dir_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const InvariantBasis>> memory_;
  std::size_t computed_ = 0;
  std::size_t loaded_ = 0;
};

}  // namespace bott
