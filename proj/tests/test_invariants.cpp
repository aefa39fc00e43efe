#include "bott/graph_calc.hpp"
#include "bott/invariants.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

using namespace bott;

namespace {

Multidegree factors(std::vector<int> d) { return Multidegree::factors(std::move(d)); }

Polynomial combination(const InvariantBasis& b, const SparseVector& v) {
  Polynomial p;
  for (const auto& [j, x] : v.entries()) p += x * b.basis[j];
  return p;
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() / ("bott-test-" + std::to_string(::getpid()) + "-" +
                                                      std::to_string(counter_++));
    std::filesystem::remove_all(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

}  // namespace

TEST(InvariantDim, Examples) {
  EXPECT_EQ(invariant_dim(factors({2, 2})), 1u);
  EXPECT_EQ(invariant_dim(factors({1, 1, 1, 1})), 2u);
  EXPECT_EQ(invariant_dim(factors({1, 2})), 0u);
  EXPECT_EQ(invariant_dim(factors({2, 2, 2, 2, 2})), 6u);
  EXPECT_EQ(invariant_dim(factors({2, -1, 3})), 0u);
  EXPECT_EQ(invariant_dim(factors({})), 1u);
}

TEST(InvariantDim, MatchesBruteForceWeightCount) {
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4; ++b)
      for (int c = 0; c <= 4; ++c)
        for (int d = 0; d <= 3; ++d) {
          std::vector<int> l{a, b, c, d};
          EXPECT_EQ(static_cast<long>(invariant_dim(factors(l))), oracle::brute_force_invariant_count(l));
        }
}

TEST(InvariantDim, RiordanNumbersForAdjointPowers) {
  const std::size_t riordan[] = {1, 0, 1, 1, 3, 6, 15, 36};
  for (int n = 0; n < 8; ++n) EXPECT_EQ(invariant_dim(factors(std::vector<int>(std::size_t(n), 2))), riordan[n]);
}

TEST(InvariantDim, SymmetricSlotMatchesBinaryDecomposition) {
  // S^p = V_2p + V_2p-4 + ...
  for (int p = 0; p <= 4; ++p)
    for (auto d : {std::vector<int>{2, 2, 2}, std::vector<int>{1, 3, 4}, std::vector<int>{2, 2, 2, 2}}) {
      std::size_t sum = 0;
      for (int k = 2 * p; k >= 0; k -= 4) sum += invariant_dim(Multidegree(0, k, d));
      EXPECT_EQ(invariant_dim(Multidegree(p, 0, d)), sum);
    }
}

TEST(InvariantBasis, Examples) {
  auto b = invariant_basis(factors({2, 2}));
  ASSERT_EQ(b.size(), 1u);
  Polynomial p12sq = plucker(1, 2).pow(2);
  auto lead = b.basis[0].leading_term();
  EXPECT_EQ(b.basis[0], (lead.second / p12sq.coefficient(lead.first)) * p12sq);

  b = invariant_basis(factors({0, 0, 0}));
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b.basis[0], Polynomial(1));

  b = invariant_basis(factors({1, 1, 1, 1}));
  ASSERT_EQ(b.size(), 2u);
  SparseVector a = coordinates(b, plucker(1, 2) * plucker(3, 4));
  SparseVector c = coordinates(b, plucker(1, 4) * plucker(2, 3));
  SparseVector m = coordinates(b, plucker(1, 3) * plucker(2, 4));
  for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(m.get(j), a.get(j) + c.get(j));
}

TEST(InvariantBasis, ElementsAreInvariantWithPrivateReadout) {
  for (const auto& l : {Multidegree(0, 0, {2, 2, 2, 2, 2}), Multidegree(2, 0, {2, 2, 2, 2}),
                        Multidegree(0, 4, {1, 1, 3, 3}), Multidegree(3, 0, {2, 2, 2})}) {
    auto b = invariant_basis(l);
    EXPECT_EQ(b.size(), invariant_dim(l));
    for (std::size_t j = 0; j < b.size(); ++j) {
      EXPECT_TRUE(apply_e(b.basis[j]).is_zero());
      EXPECT_TRUE(apply_f(b.basis[j]).is_zero());
      EXPECT_TRUE(apply_h(b.basis[j]).is_zero());
      auto md = b.basis[j].multidegree(l.n());
      ASSERT_TRUE(md.has_value());
      EXPECT_EQ(*md, l);
      for (std::size_t k = 0; k < b.size(); ++k)
        EXPECT_EQ(b.basis[k].coefficient(b.readout[j].first) != 0, j == k);
    }
    for (std::size_t j = 1; j < b.size(); ++j)
      EXPECT_FALSE(grlex_greater(b.basis[j].leading_term().first, b.basis[j - 1].leading_term().first));
  }
}

TEST(InvariantBasis, OddOrNegativeDegreesGiveEmptyBasis) {
  EXPECT_EQ(invariant_basis(factors({1, 2})).size(), 0u);
  EXPECT_EQ(invariant_basis(factors({2, -2})).size(), 0u);
}

TEST(Coordinates, Examples) {
  auto b = invariant_basis(factors({2, 2}));
  SparseVector v = coordinates(b, b.basis[0]);
  EXPECT_EQ(v.get(0), 1);
  EXPECT_TRUE(coordinates(b, Polynomial()).is_zero());
}

TEST(Coordinates, RejectsNonInvariantsAndWrongDegrees) {
  auto b = invariant_basis(factors({2, 2}));
  EXPECT_THROW(coordinates(b, Polynomial::variable(x_var(1)) * Polynomial::variable(x_var(2)).pow(2) *
                                  Polynomial::variable(x_var(1))),
               Error);
  EXPECT_THROW(coordinates(b, plucker(1, 2)), Error);
  EXPECT_THROW(coordinates(b, plucker(1, 3).pow(2)), Error);
}

TEST(Coordinates, InvertsRandomCombinations) {
  std::mt19937 rng(9);
  for (const auto& l : {Multidegree(0, 0, {2, 2, 2, 2, 2}), Multidegree(1, 0, {2, 2, 2, 2}), Multidegree(0, 2, {1, 1, 2, 2})}) {
    auto b = invariant_basis(l);
    for (int trial = 0; trial < 10; ++trial) {
      SparseVector v(b.size());
      for (std::size_t j = 0; j < b.size(); ++j) v.set(j, oracle::random_rational(rng));
      EXPECT_EQ(coordinates(b, combination(b, v)), v);
    }
  }
}

TEST(Coordinates, ProductShortcutAgreesWithFullProduct) {
  Multidegree source(0, 0, {2, 2, 0, 2});
  Multidegree target(1, 0, {2, 2, 2, 2});
  auto bs = invariant_basis(source);
  auto bt = invariant_basis(target);
  for (const auto& p : bs.basis) {
    Polynomial full = s_section(3) * p;
    EXPECT_EQ(product_coordinates(bt, s_section(3), p), coordinates(bt, full));
  }
}

TEST(Coordinates, StandardTableauxSpanTheInvariants) {
  for (const auto& l : {factors({2, 2, 2, 2}), factors({1, 1, 2, 2, 2}), Multidegree(0, 2, {1, 1, 2})}) {
    auto b = invariant_basis(l);
    auto tableaux = enumerate_standard(l);
    SparseMatrix m(b.size(), tableaux.size());
    for (std::size_t c = 0; c < tableaux.size(); ++c) {
      const SparseVector v = coordinates(b, to_polynomial(tableaux[c]));
      for (const auto& [r, x] : v.entries()) m.set(r, c, x);
    }
    EXPECT_EQ(rank(m), b.size());
  }
}

TEST(BasisStore, MemoizesInMemory) {
  BasisStore store;
  auto a = store.get(factors({2, 2, 2}));
  auto b = store.get(factors({2, 2, 2}));
  EXPECT_EQ(a.get(), b.get());
  EXPECT_EQ(store.computed_count(), 1u);
  EXPECT_FALSE(store.persistent());
}

TEST(BasisStore, DiskRoundTrip) {
  TempDir dir;
  Multidegree l(2, 0, {2, 2, 2, 2});
  {
    BasisStore store(dir.path());
    store.get(l);
    EXPECT_EQ(store.computed_count(), 1u);
    EXPECT_EQ(store.disk_stats().files, 1u);
  }
  BasisStore again(dir.path());
  auto loaded = again.get(l);
  EXPECT_EQ(again.computed_count(), 0u);
  EXPECT_EQ(again.loaded_count(), 1u);
  auto fresh = invariant_basis(l);
  EXPECT_EQ(loaded->basis, fresh.basis);
  Polynomial p = s_section(1) * invariant_basis(Multidegree(1, 0, {0, 2, 2, 2})).basis[0];
  EXPECT_EQ(coordinates(*loaded, p), coordinates(fresh, p));
  EXPECT_EQ(again.clear_disk(), 1u);
  EXPECT_EQ(again.disk_stats().files, 0u);
}

TEST(BasisStore, CorruptCacheFileIsRecomputed) {
  TempDir dir;
  Multidegree l(0, 0, {2, 2, 2, 2});
  std::filesystem::create_directories(dir.path());
  {
    std::ofstream out(dir.path() / detail::cache_file_name(l));
    out << "multidegree " << l.to_string() << " count 3\n+1*x1 garbage\n";
  }
  BasisStore store(dir.path());
  auto b = store.get(l);
  EXPECT_EQ(store.computed_count(), 1u);
  EXPECT_EQ(b->size(), 3u);
  BasisStore reread(dir.path());
  reread.get(l);
  EXPECT_EQ(reread.loaded_count(), 1u);
}

TEST(TripleAgreement, SmallMultidegrees) {
  // exhaustive for n <= 4, sum <= 8
  for (int n = 1; n <= 4; ++n) {
    std::vector<int> l(std::size_t(n), 0);
    for (;;) {
      int sum = 0;
      for (int x : l) sum += x;
      if (sum <= 8) {
        auto md = factors(l);
        const std::size_t dim = invariant_dim(md);
        EXPECT_EQ(invariant_basis(md).size(), dim) << md.to_string();
        EXPECT_EQ(enumerate_standard(md).size(), dim) << md.to_string();
      }
      std::size_t k = 0;
      while (k < l.size() && l[k] == 8) l[k++] = 0;
      if (k == l.size()) break;
      ++l[k];
    }
  }
}
