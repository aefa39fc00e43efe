#pragma once

// Directed-multigraph calculus for invariants. An edge a -> b stands for the
// Pluecker minor p_ab; a tableau (list of edges) for their product. Vertex 0
// is the binary-form slot (x0, y0), vertices 1..n the factors.

#include "bott/polyring.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bott {

using Edge = std::pair<int, int>;

struct Tableau {
  std::vector<Edge> edges;

  Tableau() = default;
  Tableau(std::vector<Edge> e) : edges(std::move(e)) {}  // NOLINT

  std::size_t size() const { return edges.size(); }

  /// Degree of every vertex 0..max_vertex().
  std::vector<int> degrees() const {
    std::vector<int> deg(std::size_t(max_vertex() + 1), 0);
    for (const auto& [a, b] : edges) {
      ++deg[std::size_t(a)];
      ++deg[std::size_t(b)];
    }
    return deg;
  }

  int degree(int v) const {
    int d = 0;
    for (const auto& [a, b] : edges) d += (a == v) + (b == v);
    return d;
  }

  int max_vertex() const {
    int m = -1;
    for (const auto& [a, b] : edges) m = std::max({m, a, b});
    return m;
  }

  friend auto operator<=>(const Tableau&, const Tableau&) = default;
  friend bool operator==(const Tableau&, const Tableau&) = default;
};

/// Formal rational combination of normalized tableaux.
class GraphElement {
 public:
  using Terms = std::map<Tableau, Rational>;

  GraphElement() = default;

  /// Adds c * t; t must already be normalized.
  void add(const Tableau& t, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(t, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  void add(const GraphElement& g, const Rational& scale = 1) {
    for (const auto& [t, c] : g.terms_) add(t, c * scale);
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Rational coefficient(const Tableau& t) const {
    auto it = terms_.find(t);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  friend bool operator==(const GraphElement&, const GraphElement&) = default;

 private:
  Terms terms_;
};

/// Orients every edge from the smaller vertex (one sign flip per reversal),
/// sorts the edges; any self-loop makes the element zero.
inline GraphElement normalize(const Tableau& t, const Rational& coefficient = 1) {
  GraphElement g;
  Tableau out;
  out.edges.reserve(t.edges.size());
  int sign = 1;
  for (auto [a, b] : t.edges) {
    if (a == b) return g;
    if (a > b) {
      std::swap(a, b);
      sign = -sign;
    }
    out.edges.emplace_back(a, b);
  }
  std::sort(out.edges.begin(), out.edges.end());
  g.add(out, sign > 0 ? coefficient : Rational(-coefficient));
  return g;
}

inline GraphElement normalize(const GraphElement& g) {
  GraphElement out;
  for (const auto& [t, c] : g.terms()) out.add(normalize(t, c));
  return out;
}

inline bool is_normalized(const Tableau& t) {
  for (const auto& [a, b] : t.edges)
    if (a >= b) return false;
  return std::is_sorted(t.edges.begin(), t.edges.end());
}

/// Index k of the first consecutive pair violating b_k <= b_(k+1), or -1.
inline int first_violation(const Tableau& t) {
  for (std::size_t k = 0; k + 1 < t.edges.size(); ++k)
    if (t.edges[k].second > t.edges[k + 1].second) return static_cast<int>(k);
  return -1;
}

/// Normalized, with both rows of the 2 x m array nondecreasing.
inline bool is_standard(const Tableau& t) { return is_normalized(t) && first_violation(t) < 0; }

/// Rewrites g on standard tableaux using relation (a) (edge reversal) and the
/// three-term Pluecker exchange p_ad p_bc = p_ac p_bd - p_ab p_cd (a<b<c<d).
inline GraphElement straighten(const GraphElement& g) {
  GraphElement result;
  std::map<Tableau, Rational> pending;
  auto push = [&](const GraphElement& e) {
    for (const auto& [t, c] : e.terms()) {
      if (first_violation(t) < 0) {
        result.add(t, c);
        continue;
      }
      auto [it, inserted] = pending.try_emplace(t, c);
      if (!inserted) {
        it->second += c;
        if (it->second == 0) pending.erase(it);
      }
    }
  };
  push(normalize(g));
  // Each exchange replaces a pair of edges by pairs that sort strictly
  // earlier, so processing the largest pending word first terminates.
  while (!pending.empty()) {
    auto it = std::prev(pending.end());
    Tableau t = it->first;
    Rational c = it->second;
    pending.erase(it);
    const auto k = static_cast<std::size_t>(first_violation(t));
    const auto [a, d] = t.edges[k];
    const auto [b, cc] = t.edges[k + 1];
    Tableau first = t, second = t;
    first.edges[k] = {a, cc};
    first.edges[k + 1] = {b, d};
    second.edges[k] = {a, b};
    second.edges[k + 1] = {cc, d};
    push(normalize(first, c));
    push(normalize(second, Rational(-c)));
  }
  return result;
}

inline GraphElement straighten(const Tableau& t) {
  GraphElement g;
  g.add(normalize(t));
  return straighten(g);
}

inline Polynomial to_polynomial(const Tableau& t) {
  Polynomial p = 1;
  for (const auto& [a, b] : t.edges) {
    if (a == b) return {};
    p *= plucker(a, b);
  }
  return p;
}

inline Polynomial to_polynomial(const GraphElement& g) {
  Polynomial p;
  for (const auto& [t, c] : g.terms()) p += c * to_polynomial(t);
  return p;
}

// ---------------------------------------------------------------------------
// Colorings and cycles

using TwoColoring = std::map<int, int>;

namespace detail {

struct Components {
  std::vector<int> vertices;                 // sorted nonzero vertices present
  std::vector<std::vector<int>> members;     // per component, in BFS order
  std::map<int, int> side;                   // 0/1 relative to the component root
  bool bipartite = true;
};

inline std::map<int, std::vector<int>> adjacency_without_center(const Tableau& t) {
  std::map<int, std::vector<int>> adj;
  for (const auto& [a, b] : t.edges) {
    if (a != 0) adj[a];
    if (b != 0) adj[b];
    if (a == 0 || b == 0) continue;
    adj[a].push_back(b);
    if (a != b) adj[b].push_back(a);
  }
  return adj;
}

inline Components components(const Tableau& t) {
  Components out;
  auto adj = adjacency_without_center(t);
  for (const auto& [v, nbrs] : adj) out.vertices.push_back(v);
  for (int root : out.vertices) {
    if (out.side.count(root)) continue;
    std::vector<int> queue{root};
    out.side[root] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      int u = queue[head];
      for (int w : adj[u]) {
        auto it = out.side.find(w);
        if (it == out.side.end()) {
          out.side[w] = 1 - out.side[u];
          queue.push_back(w);
        } else if (it->second == out.side[u]) {
          out.bipartite = false;
        }
      }
    }
    out.members.push_back(std::move(queue));
  }
  return out;
}

}  // namespace detail

/// A coloring of the nonzero vertices that is proper on edges avoiding
/// vertex 0 and splits the edges at vertex 0 as m + m between the colors.
inline std::optional<TwoColoring> find_two_coloring(const Tableau& t, int m) {
  if (t.degree(0) != 2 * m) throw Error("vertex 0 must have degree 2m = " + std::to_string(2 * m));
  for (const auto& [a, b] : t.edges)
    if (a == 0 && b == 0) return std::nullopt;
  auto comps = detail::components(t);
  if (!comps.bipartite) return std::nullopt;
  std::map<int, int> center_mass;
  for (const auto& [a, b] : t.edges) {
    if (a == 0) ++center_mass[b];
    if (b == 0) ++center_mass[a];
  }
  // Per component: mass on color 1 when the root gets color 1 (option A)
  // or color 0 (option B).
  const std::size_t k = comps.members.size();
  std::vector<int> mass_root_side(k, 0), mass_other_side(k, 0);
  for (std::size_t c = 0; c < k; ++c)
    for (int v : comps.members[c]) (comps.side[v] == 0 ? mass_root_side : mass_other_side)[c] += center_mass[v];
  // reachable[c][s]: color-1 mass s achievable by components c..k-1
  std::vector<std::vector<char>> reachable(k + 1, std::vector<char>(std::size_t(2 * m + 1), 0));
  reachable[k][0] = 1;
  for (std::size_t c = k; c-- > 0;)
    for (int s = 0; s <= 2 * m; ++s)
      for (int add : {mass_root_side[c], mass_other_side[c]})
        if (s >= add && reachable[c + 1][std::size_t(s - add)]) reachable[c][std::size_t(s)] = 1;
  if (!reachable[0][std::size_t(m)]) return std::nullopt;
  TwoColoring coloring;
  int need = m;
  for (std::size_t c = 0; c < k; ++c) {
    const bool root_one = need >= mass_root_side[c] && reachable[c + 1][std::size_t(need - mass_root_side[c])];
    need -= root_one ? mass_root_side[c] : mass_other_side[c];
    for (int v : comps.members[c]) coloring[v] = (comps.side[v] == 0) == root_one ? 1 : 0;
  }
  return coloring;
}

/// Some odd cycle among the nonzero vertices (depth-first, smallest start
/// vertex first), as a vertex sequence; a self-loop is the cycle (v).
inline std::optional<std::vector<int>> find_odd_cycle(const Tableau& t) {
  for (const auto& [a, b] : t.edges)
    if (a == b && a != 0) return std::vector<int>{a};
  auto adj = detail::adjacency_without_center(t);
  std::map<int, int> depth, parent;
  for (const auto& [root, unused] : adj) {
    if (depth.count(root)) continue;
    depth[root] = 0;
    parent[root] = root;
    // stack of (vertex, next neighbor index)
    std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      if (next == adj[u].size()) {
        stack.pop_back();
        continue;
      }
      int w = adj[u][next++];
      auto it = depth.find(w);
      if (it == depth.end()) {
        depth[w] = depth[u] + 1;
        parent[w] = u;
        stack.emplace_back(w, 0);
      } else if ((depth[u] - it->second) % 2 == 0 && it->second < depth[u]) {
        std::vector<int> cycle;
        for (int v = u; v != w; v = parent[v]) cycle.push_back(v);
        cycle.push_back(w);
        std::reverse(cycle.begin(), cycle.end());
        return cycle;
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Moves

/// Adds the double edge 0 -> i.
inline Tableau t1_move(const Tableau& t, int i) {
  if (i < 1) throw Error("t1_move needs a factor index >= 1");
  Tableau out = t;
  out.edges.emplace_back(0, i);
  out.edges.emplace_back(0, i);
  return out;
}

/// Replaces the two edges at vertex 0 by the same edges at vertex i.
inline GraphElement tprime_move(const Tableau& t, int i) {
  if (i < 1) throw Error("tprime_move needs a factor index >= 1");
  if (t.degree(0) != 2) throw Error("tprime_move needs vertex 0 of degree 2");
  Tableau out = t;
  for (auto& [a, b] : out.edges) {
    if (a == 0) a = i;
    if (b == 0) b = i;
  }
  return normalize(out);
}

/// All standard tableaux with the given vertex degrees (vertex 0 from the
/// binary-form grade), in increasing edge-word order. Requires sym grade 0.
inline std::vector<Tableau> enumerate_standard(const Multidegree& l) {
  if (l.sym_grade != 0) throw Error("standard tableaux need sym grade 0");
  std::vector<Tableau> out;
  if (!l.is_valid() || l.binary_total() % 2 != 0) return out;
  std::vector<int> deg;
  deg.push_back(l.vertex0_grade);
  for (int d : l.factor_grades) deg.push_back(d);
  const int m = l.binary_total() / 2;
  const int nv = static_cast<int>(deg.size());
  // top[v]: how often v occurs in the top (source) row.
  std::vector<int> top(std::size_t(nv), 0);
  std::function<void(int, int)> rec = [&](int v, int used) {
    if (v == nv) {
      if (used != m) return;
      std::vector<int> a, b;
      for (int u = 0; u < nv; ++u) {
        a.insert(a.end(), std::size_t(top[std::size_t(u)]), u);
        b.insert(b.end(), std::size_t(deg[std::size_t(u)] - top[std::size_t(u)]), u);
      }
      Tableau t;
      for (int k = 0; k < m; ++k) {
        if (a[std::size_t(k)] >= b[std::size_t(k)]) return;
        t.edges.emplace_back(a[std::size_t(k)], b[std::size_t(k)]);
      }
      out.push_back(std::move(t));
      return;
    }
    for (int c = 0; c <= deg[std::size_t(v)] && used + c <= m; ++c) {
      top[std::size_t(v)] = c;
      rec(v + 1, used + c);
    }
    top[std::size_t(v)] = 0;
  };
  rec(0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Text form: [[sources...],[targets...]]

inline Tableau parse_tableau(const std::string& text) {
  std::vector<std::vector<int>> rows;
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto expect = [&](char ch) {
    skip();
    if (pos >= text.size() || text[pos] != ch)
      throw Error(std::string("malformed tableau: expected '") + ch + "' in '" + text + "'");
    ++pos;
  };
  expect('[');
  for (int r = 0; r < 2; ++r) {
    if (r) expect(',');
    expect('[');
    rows.emplace_back();
    skip();
    if (pos < text.size() && text[pos] == ']') {
      ++pos;
      continue;
    }
    for (;;) {
      skip();
      std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (start == pos) throw Error("malformed tableau: expected a vertex index in '" + text + "'");
      rows.back().push_back(std::stoi(text.substr(start, pos - start)));
      skip();
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        continue;
      }
      expect(']');
      break;
    }
  }
  expect(']');
  skip();
  if (pos != text.size()) throw Error("malformed tableau: trailing text in '" + text + "'");
  if (rows[0].size() != rows[1].size()) throw Error("malformed tableau: rows of different length");
  Tableau t;
  for (std::size_t k = 0; k < rows[0].size(); ++k) t.edges.emplace_back(rows[0][k], rows[1][k]);
  return t;
}

inline std::string format_tableau(const Tableau& t) {
  std::string top, bottom;
  for (std::size_t k = 0; k < t.edges.size(); ++k) {
    top += (k ? "," : "") + std::to_string(t.edges[k].first);
    bottom += (k ? "," : "") + std::to_string(t.edges[k].second);
  }
  return "[[" + top + "],[" + bottom + "]]";
}

/// e.g. "+1·[[1,2],[3,4]] -1/2·[[1,3],[2,4]]"; zero is "0".
inline std::string format_element(const GraphElement& g) {
  if (g.is_zero()) return "0";
  std::string out;
  for (const auto& [t, c] : g.terms()) {
    if (!out.empty()) out += ' ';
    out += c < 0 ? "-" : "+";
    out += Rational(abs(c)).get_str() + "·" + format_tableau(t);
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Tableau& t) { return os << format_tableau(t); }
inline std::ostream& operator<<(std::ostream& os, const GraphElement& g) { return os << format_element(g); }

}  // namespace bott
