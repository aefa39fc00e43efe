#include "bott/git_stability.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace bott;

namespace {

// Subset-sum by listing all 2^n subsets.
bool brute_force_semistable(const std::vector<int>& d) {
  int total = 0;
  for (int x : d) total += x;
  for (unsigned mask = 0; mask < (1u << d.size()); ++mask) {
    int s = 0;
    for (std::size_t i = 0; i < d.size(); ++i)
      if (mask >> i & 1) s += d[i];
    if (2 * s == total) return true;
  }
  return false;
}

}  // namespace

TEST(Semistable, Examples) {
  EXPECT_FALSE(has_strictly_semistable(Polarization({1, 1, 1, 1, 1})));
  EXPECT_TRUE(has_strictly_semistable(Polarization({1, 1, 1, 1})));
  EXPECT_FALSE(has_strictly_semistable(Polarization({2, 2, 2, 2, 2})));
  EXPECT_FALSE(has_strictly_semistable(Polarization({1, 1, 1, 1, 1, 7})));
  EXPECT_THROW(Polarization({1, 0, 2}), Error);
}

TEST(Semistable, AgreesWithSubsetListingAndPermutations) {
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> n(1, 9), deg(1, 7);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<int> d(std::size_t(n(rng)));
    for (int& x : d) x = deg(rng);
    const bool expect = brute_force_semistable(d);
    EXPECT_EQ(has_strictly_semistable(Polarization(d)), expect);
    std::shuffle(d.begin(), d.end(), rng);
    EXPECT_EQ(has_strictly_semistable(Polarization(d)), expect);
  }
}

TEST(Strata, QuinticExample) {
  auto s = strata(Polarization({2, 2, 2, 2, 2}));
  ASSERT_EQ(s.size(), 16u);  // 10 + 5 + 1 subsets of size >= 3
  for (const auto& st : s) {
    const int k = static_cast<int>(st.heavy_set.size());
    EXPECT_GE(k, 3);
    EXPECT_EQ(st.mu, 4 * k - 10);
    EXPECT_EQ(st.eta, 2 * (k - 1));
  }
  EXPECT_EQ(s.front().heavy_set, (std::vector<int>{1, 2, 3, 4, 5}));
  EXPECT_EQ(s.front().mu, 10);
  EXPECT_EQ(s[1].heavy_set, (std::vector<int>{1, 2, 3, 4}));
  // colex order within the |I| = 3 level
  EXPECT_EQ(s[6].heavy_set, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(s[7].heavy_set, (std::vector<int>{1, 2, 4}));
  EXPECT_EQ(s[8].heavy_set, (std::vector<int>{1, 3, 4}));
  EXPECT_EQ(s.back().heavy_set, (std::vector<int>{3, 4, 5}));
}

TEST(Strata, Examples) {
  auto s = strata(Polarization({1, 1, 1, 1, 1}));
  for (const auto& st : s) {
    EXPECT_GE(st.heavy_set.size(), 3u);
    if (st.heavy_set.size() == 3) {
      EXPECT_EQ(st.mu, 1);
      EXPECT_EQ(st.eta, 4);
    }
  }
  Polarization p({1, 1, 1, 1, 1, 7});
  s = strata(p);
  EXPECT_EQ(s.front().mu, p.total());
  EXPECT_EQ(s.front().eta, 2 * (p.n() - 1));
  EXPECT_THROW(strata(Polarization({1, 1, 1, 1})), Error);
  EXPECT_THROW(strata(Polarization(std::vector<int>(21, 1))), Error);
}

TEST(Strata, EveryHeavySetExactlyOnce) {
  std::mt19937 rng(2);
  std::uniform_int_distribution<int> n(3, 8), deg(1, 6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> d(std::size_t(n(rng)));
    for (int& x : d) x = deg(rng);
    Polarization p(d);
    if (has_strictly_semistable(p)) continue;
    auto s = strata(p);
    std::set<std::uint32_t> masks;
    for (std::size_t k = 0; k < s.size(); ++k) {
      EXPECT_GT(s[k].mu, 0);
      EXPECT_EQ(s[k].eta, 2 * (static_cast<int>(s[k].heavy_set.size()) - 1));
      if (k) {
        EXPECT_GE(s[k - 1].mu, s[k].mu);
      }
      masks.insert(s[k].mask);
    }
    EXPECT_EQ(masks.size(), s.size());
    // a subset or its complement is heavy, never both
    EXPECT_EQ(s.size(), (std::size_t(1) << p.n()) / 2);
  }
}

TEST(Strata, UnstableIffCoincidenceContainsHeavySet) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> n(3, 7), deg(1, 5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> d(std::size_t(n(rng)));
    for (int& x : d) x = deg(rng);
    Polarization p(d);
    if (has_strictly_semistable(p)) continue;
    auto s = strata(p);
    std::uniform_int_distribution<int> label(0, p.n() - 1);
    for (int k = 0; k < 10; ++k) {
      std::vector<int> labels(d.size());
      for (int& x : labels) x = label(rng) % 3;
      bool contains = false;
      for (const auto& st : s) {
        std::set<int> values;
        for (int i : st.heavy_set) values.insert(labels[std::size_t(i - 1)]);
        contains |= values.size() == 1;
      }
      EXPECT_EQ(configuration_unstable(p, labels), contains);
    }
  }
}

TEST(DegreeScan, Examples) {
  auto r = scan_degree_claim(5, 2);
  auto find = [&](std::vector<int> d) {
    return std::find_if(r.rows.begin(), r.rows.end(), [&](const DegreeScanRow& row) { return row.d == d; });
  };
  auto quintic = find({2, 2, 2, 2, 2});
  ASSERT_NE(quintic, r.rows.end());
  EXPECT_TRUE(quintic->stable);
  EXPECT_EQ(quintic->sum, 10);
  EXPECT_TRUE(quintic->sum_ge_2n);
  EXPECT_EQ(quintic->min_heavy_excess, 2);
  auto four = find({1, 1, 1, 1});
  ASSERT_NE(four, r.rows.end());
  EXPECT_FALSE(four->stable);
  EXPECT_EQ(find({1, 1, 1}), r.rows.end());  // odd sum
  EXPECT_TRUE(r.counterexamples.empty());
}

TEST(DegreeScan, FullGridHasNoCounterexample) {
  auto r = scan_degree_claim(8, 9);
  EXPECT_TRUE(r.counterexamples.empty());
  EXPECT_GT(r.checked, 1000u);
  std::size_t stable = 0;
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.sum % 2, 0);
    EXPECT_TRUE(std::is_sorted(row.d.begin(), row.d.end()));
    EXPECT_EQ(row.stable, !brute_force_semistable(row.d));
    stable += row.stable;
  }
  EXPECT_EQ(stable, r.checked);
}

TEST(WeightReport, QuinticJ2) {
  auto r = fixed_point_weight_report(Polarization({2, 2, 2, 2, 2}), 2);
  EXPECT_TRUE(r.line_bundle_negative);
  for (const auto& s : r.strata) {
    EXPECT_EQ(s.line_bundle_weight, -s.stratum.mu);
    if (s.stratum.heavy_set.size() == 3) {
      EXPECT_EQ(s.max_term_weight, 4);
      EXPECT_EQ(s.max_total, 2);
      EXPECT_EQ(s.stratum.eta, 4);
      EXPECT_TRUE(s.ok);
    }
  }
}

TEST(WeightReport, TermMultiplicities) {
  // j = 1 on (2,2,2,2,2), I = {1,2,3}: forms give 3 x (+2), 2 x (-2); coadjoint gives -2, 0, 2
  auto r = fixed_point_weight_report(Polarization({2, 2, 2, 2, 2}), 1);
  const auto& s = r.strata[6];
  ASSERT_EQ(s.stratum.heavy_set, (std::vector<int>{1, 2, 3}));
  ASSERT_EQ(s.terms.size(), 2u);
  EXPECT_EQ(s.terms[0].weights, (std::map<int, std::uint64_t>{{-2, 2}, {2, 3}}));
  EXPECT_EQ(s.terms[1].weights, (std::map<int, std::uint64_t>{{-2, 1}, {0, 1}, {2, 1}}));
}

TEST(WeightReport, JZeroAlwaysHolds) {
  auto scan = scan_degree_claim(6, 5);
  for (const auto& row : scan.rows) {
    if (!row.stable || row.n < 3) continue;
    auto r = fixed_point_weight_report(Polarization(row.d), 0);
    EXPECT_TRUE(r.line_bundle_negative);
    for (const auto& s : r.strata) {
      EXPECT_EQ(s.max_term_weight, 0);
      EXPECT_LT(s.line_bundle_weight, s.stratum.eta);
    }
  }
  EXPECT_THROW(fixed_point_weight_report(Polarization({1, 1, 1, 1}), 1), Error);
  EXPECT_THROW(fixed_point_weight_report(Polarization({2, 2, 2, 2, 2}), -1), Error);
}
