#include "bott/exact_linalg.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace bott;

namespace {

SparseMatrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols, double density = 0.6) {
  std::uniform_int_distribution<int> entry(-9, 9);
  std::bernoulli_distribution keep(density);
  SparseMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (keep(rng)) m.set(r, c, entry(rng));
  return m;
}

SparseVector random_vector(std::mt19937& rng, std::size_t n) {
  SparseVector v(n);
  for (std::size_t i = 0; i < n; ++i) v.set(i, oracle::random_rational(rng));
  return v;
}

}  // namespace

TEST(Rational, CanonicalForm) {
  Rational q = make_rational(6, -4);
  EXPECT_EQ(q.get_num(), -3);
  EXPECT_EQ(q.get_den(), 2);
  EXPECT_EQ(make_rational(0, 7), 0);
  EXPECT_EQ(make_rational(0, 7).get_den(), 1);
  EXPECT_THROW(make_rational(1, 0), Error);
  EXPECT_EQ(parse_rational("-10/4"), make_rational(-5, 2));
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("abc"), Error);
}

TEST(Rank, Examples) {
  EXPECT_EQ(rank(SparseMatrix::from_dense({{1, 0}, {0, 1}})), 2u);
  EXPECT_EQ(rank(SparseMatrix(3, 4)), 0u);
  EXPECT_EQ(rank(SparseMatrix::from_dense({{1, 2}, {2, 4}})), 1u);
  EXPECT_EQ(rank(SparseMatrix(0, 0)), 0u);
  EXPECT_EQ(rank(SparseMatrix(0, 5)), 0u);
}

TEST(Rank, RationalEntries) {
  SparseMatrix m(2, 2);
  m.set(0, 0, make_rational(1, 3));
  m.set(0, 1, make_rational(1, 2));
  m.set(1, 0, make_rational(2, 9));
  m.set(1, 1, make_rational(1, 3));
  EXPECT_EQ(rank(m), 1u);
}

TEST(KernelBasis, Examples) {
  EXPECT_TRUE(kernel_basis(SparseMatrix::from_dense({{1, 0}, {0, 1}})).empty());

  auto k = kernel_basis(SparseMatrix::from_dense({{1, -1}}));
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0].get(0), k[0].get(1));
  EXPECT_NE(k[0].get(0), 0);

  k = kernel_basis(SparseMatrix::from_dense({{1, 2}, {2, 4}}));
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0].get(0), -2 * k[0].get(1));
  EXPECT_NE(k[0].get(1), 0);
}

TEST(KernelBasis, EmptyMatrixGivesStandardBasis) {
  auto k = kernel_basis(SparseMatrix(0, 3));
  ASSERT_EQ(k.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(k[i].entries().size(), 1u);
    EXPECT_EQ(k[i].get(i), 1);
  }
}

TEST(InImage, Examples) {
  SparseVector v(2);
  v.set(0, 5);
  v.set(1, -3);
  EXPECT_TRUE(in_image(SparseMatrix::from_dense({{1, 0}, {0, 1}}), v));
  EXPECT_FALSE(in_image(SparseMatrix(2, 2), v));
  SparseVector w(2);
  w.set(0, 2);
  w.set(1, 4);
  EXPECT_TRUE(in_image(SparseMatrix::from_dense({{1}, {2}}), w));
  EXPECT_THROW(in_image(SparseMatrix(3, 2), w), Error);
}

TEST(SparseMatrix, NoStoredZerosAndBounds) {
  SparseMatrix m(2, 2);
  m.set(0, 1, 3);
  m.add(0, 1, -3);
  EXPECT_EQ(m.nnz(), 0u);
  EXPECT_THROW(m.set(2, 0, 1), Error);
  EXPECT_THROW(m.get(0, 2), Error);
  SparseVector v(2);
  EXPECT_THROW(v.set(2, 1), Error);
  EXPECT_THROW(m * SparseVector(3), Error);
}

TEST(RankProperties, AgreesWithDenseOracleOnRandomMatrices) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<std::size_t> size(0, 8);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t rows = size(rng), cols = size(rng);
    SparseMatrix m = random_matrix(rng, rows, cols, trial % 3 == 0 ? 0.25 : 0.6);
    // low-rank instances: duplicate a combination of rows
    if (rows >= 3 && trial % 4 == 1)
      for (const auto& [c, x] : m.row(0)) m.add(rows - 1, c, 2 * x);
    const std::size_t r = rank(m);
    EXPECT_EQ(r, oracle::dense_rank(oracle::to_dense(m)));
    EXPECT_EQ(r, rank(m.transpose()));
    EXPECT_LE(r, std::min(rows, cols));
    auto kernel = kernel_basis(m);
    EXPECT_EQ(cols, r + kernel.size());
    for (const auto& v : kernel) EXPECT_TRUE((m * v).is_zero());
    if (cols > 0) {
      EXPECT_TRUE(in_image(m, m * random_vector(rng, cols)));
    }
  }
}

TEST(RankProperties, KernelVectorsAreIndependent) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    SparseMatrix m = random_matrix(rng, 4, 8, 0.4);
    auto kernel = kernel_basis(m);
    SparseMatrix k(8, kernel.size());
    for (std::size_t c = 0; c < kernel.size(); ++c)
      for (const auto& [r, x] : kernel[c].entries()) k.set(r, c, x);
    EXPECT_EQ(rank(k), kernel.size());
  }
}

TEST(ModularEchelon, ArithmeticModPrime) {
  using M = detail::ModularEchelon;
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    std::uint64_t a = rng() % M::kPrime, b = rng() % M::kPrime;
    unsigned __int128 expect = static_cast<unsigned __int128>(a) * b % M::kPrime;
    EXPECT_EQ(M::mul(a, b), static_cast<std::uint64_t>(expect));
    if (a) {
      EXPECT_EQ(M::mul(a, M::inverse(a)), 1u);
    }
  }
  EXPECT_EQ(M::mul(M::kPrime - 1, M::kPrime - 1), 1u);
}

TEST(ModularEchelon, RationalReconstruction) {
  using M = detail::ModularEchelon;
  std::mt19937 rng(8);
  std::uniform_int_distribution<long> num(-1000000, 1000000), den(1, 1000000);
  for (int i = 0; i < 500; ++i) {
    Rational q(num(rng), den(rng));
    q.canonicalize();
    std::uint64_t image = M::mul(M::reduce_integer(q.get_num()), M::inverse(M::reduce_integer(q.get_den())));
    Rational back;
    ASSERT_TRUE(detail::rational_reconstruct(image, back));
    EXPECT_EQ(back, q);
  }
}

TEST(ModularEchelon, KernelGuessMatchesExactKernel) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    SparseMatrix m = random_matrix(rng, 5, 9, 0.4);
    std::vector<detail::IntRow> rows;
    for (std::size_t r = 0; r < m.rows(); ++r)
      if (!m.row(r).empty()) rows.push_back(detail::primitive_row(m.row(r)));
    auto weights = detail::column_weights(m);
    std::vector<SparseVector> guess;
    ASSERT_TRUE(detail::modular_kernel_guess(m.cols(), rows, weights, guess));
    EXPECT_EQ(guess, kernel_basis(m));
  }
}
