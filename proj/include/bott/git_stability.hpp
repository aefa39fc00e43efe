#pragma once

// Stability of the diagonal PGL2 action on (P^1)^n for the polarization
// O(d_1, ..., d_n): strictly semistable walls, the unstable strata indexed
// by heavy sets, and torus weights at the fixed points of those strata.

#include "bott/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace bott {

struct Polarization {
  std::vector<int> d;

  Polarization() = default;
  explicit Polarization(std::vector<int> degrees) : d(std::move(degrees)) {
    for (int x : d)
      if (x < 1) throw Error("polarization degrees must be positive integers");
  }

  int n() const { return static_cast<int>(d.size()); }
  int total() const { return std::accumulate(d.begin(), d.end(), 0); }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < d.size(); ++i) out += (i ? "," : "") + std::to_string(d[i]);
    return out;
  }
};

struct Stratum {
  std::vector<int> heavy_set;  // 1-based factor indices, increasing
  std::uint32_t mask = 0;      // bit i-1 set for i in heavy_set
  int mu = 0;
  int eta = 0;
};

inline constexpr int kMaxStrataFactors = 20;

/// True iff some subset of the degrees sums to exactly half the total.
inline bool has_strictly_semistable(const Polarization& p) {
  const int total = p.total();
  if (total % 2) return false;
  const int half = total / 2;
  std::vector<char> reach(std::size_t(half + 1), 0);
  reach[0] = 1;
  for (int x : p.d)
    for (int s = half; s >= x; --s)
      if (reach[std::size_t(s - x)]) reach[std::size_t(s)] = 1;
  return reach[std::size_t(half)];
}

/// One stratum per heavy set I (sum over I exceeds the rest), by decreasing
/// mu and then in colex order of I.
inline std::vector<Stratum> strata(const Polarization& p) {
  if (has_strictly_semistable(p)) throw Error("polarization " + p.to_string() + " has strictly semistable points");
  if (p.n() > kMaxStrataFactors)
    throw Error("strata enumeration supports at most " + std::to_string(kMaxStrataFactors) + " factors");
  const int total = p.total();
  std::vector<Stratum> out;
  for (std::uint32_t mask = 1; mask < (std::uint32_t(1) << p.n()); ++mask) {
    int heavy = 0;
    Stratum s;
    s.mask = mask;
    for (int i = 0; i < p.n(); ++i)
      if (mask >> i & 1) {
        heavy += p.d[std::size_t(i)];
        s.heavy_set.push_back(i + 1);
      }
    s.mu = heavy - (total - heavy);
    if (s.mu <= 0) continue;
    s.eta = 2 * (static_cast<int>(s.heavy_set.size()) - 1);
    out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(), [](const Stratum& a, const Stratum& b) { return a.mu > b.mu; });
  return out;
}

/// A configuration z_1..z_n of points given by labels (equal labels mean
/// equal points) is unstable iff one point carries more than half the degree.
inline bool configuration_unstable(const Polarization& p, const std::vector<int>& labels) {
  if (labels.size() != p.d.size()) throw Error("configuration length differs from the number of factors");
  std::map<int, int> mass;
  for (std::size_t i = 0; i < labels.size(); ++i) mass[labels[i]] += p.d[i];
  const int total = p.total();
  return std::any_of(mass.begin(), mass.end(), [&](const auto& kv) { return 2 * kv.second > total; });
}

struct DegreeScanRow {
  int n = 0;
  std::vector<int> d;
  int sum = 0;
  bool stable = false;
  int min_heavy_excess = 0;  // smallest positive mu over all heavy sets
  bool sum_ge_2n = false;
};

struct DegreeScanReport {
  std::vector<DegreeScanRow> rows;  // every nondecreasing even-sum d
  std::size_t checked = 0;          // stable rows
  std::vector<std::vector<int>> counterexamples;
};

/// Smallest sum(I) - sum(complement) that is positive, over subsets I.
inline int min_heavy_excess(const Polarization& p) {
  const int total = p.total();
  std::vector<char> reach(std::size_t(total + 1), 0);
  reach[0] = 1;
  for (int x : p.d)
    for (int s = total; s >= x; --s)
      if (reach[std::size_t(s - x)]) reach[std::size_t(s)] = 1;
  for (int s = total / 2 + 1; s <= total; ++s)
    if (reach[std::size_t(s)]) return 2 * s - total;
  return 0;
}

/// Checks sum(d) >= 2n over all nondecreasing d with 1 <= n <= n_max,
/// 1 <= d_i <= d_max, even sum and no strictly semistable points.
inline DegreeScanReport scan_degree_claim(int n_max, int d_max) {
  DegreeScanReport report;
  for (int n = 1; n <= n_max; ++n) {
    std::vector<int> d(std::size_t(n), 1);
    for (;;) {
      Polarization p(d);
      if (p.total() % 2 == 0) {
        DegreeScanRow row{n, d, p.total(), !has_strictly_semistable(p), min_heavy_excess(p), p.total() >= 2 * n};
        if (row.stable) {
          ++report.checked;
          if (!row.sum_ge_2n) report.counterexamples.push_back(d);
        }
        report.rows.push_back(std::move(row));
      }
      // next nondecreasing vector
      int k = n - 1;
      while (k >= 0 && d[std::size_t(k)] == d_max) --k;
      if (k < 0) break;
      ++d[std::size_t(k)];
      for (int t = k + 1; t < n; ++t) d[std::size_t(t)] = d[std::size_t(k)];
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Fixed-point weights

struct TermWeights {
  int q = 0;                           // S^q of the coadjoint factor, j-q forms
  std::map<int, std::uint64_t> weights;  // weight -> multiplicity
  int max_weight = 0;
};

struct StratumWeights {
  Stratum stratum;
  int line_bundle_weight = 0;  // -mu
  std::vector<TermWeights> terms;
  int max_term_weight = 0;
  int max_total = 0;  // max_term_weight + line_bundle_weight
  bool ok = false;    // max_total <= eta - 1
};

struct WeightReport {
  Polarization polarization;
  int j = 0;
  std::vector<StratumWeights> strata;
  bool line_bundle_negative = true;
  bool all_ok = true;
};

namespace detail {

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * std::uint64_t(n - k + i) / std::uint64_t(i);
  return r;
}

}  // namespace detail

/// Weights of the terms Omega^(j-q) (x) S^q(coadjoint) at the fixed point of
/// each stratum: +2 per form on a heavy factor, -2 on a light one, {-2,0,2}
/// on the coadjoint factor; the line bundle contributes -mu.
inline WeightReport fixed_point_weight_report(const Polarization& p, int j) {
  if (j < 0) throw Error("form degree j must be nonnegative");
  WeightReport report;
  report.polarization = p;
  report.j = j;
  for (const auto& s : strata(p)) {
    StratumWeights sw;
    sw.stratum = s;
    sw.line_bundle_weight = -s.mu;
    const int heavy = static_cast<int>(s.heavy_set.size()), light = p.n() - heavy;
    bool first = true;
    for (int q = 0; q <= j; ++q) {
      const int forms = j - q;
      if (forms > p.n()) continue;
      TermWeights tw;
      tw.q = q;
      for (int a = 0; a <= forms; ++a) {
        std::uint64_t form_mult = detail::binomial(heavy, a) * detail::binomial(light, forms - a);
        if (!form_mult) continue;
        const int form_weight = 2 * a - 2 * (forms - a);
        for (int alpha = 0; alpha <= q; ++alpha)
          for (int gamma = 0; alpha + gamma <= q; ++gamma) tw.weights[form_weight + 2 * (alpha - gamma)] += form_mult;
      }
      if (tw.weights.empty()) continue;
      tw.max_weight = tw.weights.rbegin()->first;
      if (first || tw.max_weight > sw.max_term_weight) sw.max_term_weight = tw.max_weight;
      first = false;
      sw.terms.push_back(std::move(tw));
    }
    sw.max_total = sw.max_term_weight + sw.line_bundle_weight;
    sw.ok = sw.max_total <= s.eta - 1;
    if (sw.line_bundle_weight >= 0) report.line_bundle_negative = false;
    if (!sw.ok) report.all_ok = false;
    report.strata.push_back(std::move(sw));
  }
  return report;
}

}  // namespace bott
