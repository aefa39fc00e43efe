#pragma once

// Command-line front end. Exit codes: 0 success, 1 a mathematical check
// failed, 2 usage or input error.

#include "bott/bott_complex.hpp"
#include "bott/git_stability.hpp"
#include "bott/graph_calc.hpp"
#include "bott/invariants.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace bott::cli {

using nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Bad user input; reported with exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

inline std::vector<int> parse_degree_list(const std::string& text, bool allow_zero) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(item, &used);
    } catch (...) {
      throw UsageError("malformed degree vector '" + text + "'");
    }
    if (used != item.size()) throw UsageError("malformed degree vector '" + text + "'");
    if (value < (allow_zero ? 0 : 1))
      throw UsageError("degree vector '" + text + "' must contain " + (allow_zero ? "nonnegative" : "positive") +
                       " integers");
    out.push_back(value);
  }
  if (out.empty() || (!text.empty() && text.back() == ','))
    throw UsageError("malformed degree vector '" + text + "'");
  return out;
}

inline Polarization parse_polarization(const std::string& text, int min_n, int max_n) {
  Polarization p(parse_degree_list(text, false));
  if (p.n() < min_n || p.n() > max_n)
    throw UsageError("number of factors must be between " + std::to_string(min_n) + " and " + std::to_string(max_n));
  return p;
}

inline std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("BOTT_CACHE_DIR"); env && *env) return env;
  if (const char* xdg = std::getenv("XDG_DATA_HOME"); xdg && *xdg) return std::filesystem::path(xdg) / "bottcheck";
  if (const char* home = std::getenv("HOME"); home && *home)
    return std::filesystem::path(home) / ".local" / "share" / "bottcheck";
  return {};
}

template <typename T>
ordered_json vector_json(const std::vector<T>& v) {
  ordered_json a = ordered_json::array();
  for (const auto& x : v) a.push_back(x);
  return a;
}

inline ordered_json report_json(const BottReport& r, bool timings) {
  ordered_json j;
  j["d"] = vector_json(r.polarization.d);
  j["n"] = r.n;
  j["dimY"] = r.dim_y;
  ordered_json per = ordered_json::array();
  for (const auto& rec : r.per_j) {
    ordered_json e;
    e["j"] = rec.j;
    e["term_dims"] = vector_json(rec.term_dims);
    e["cohomology_dims"] = vector_json(rec.cohomology_dims);
    e["euler"] = rec.euler;
    e["last_map_surjective"] = rec.last_map_surjective;
    e["d_squared_zero"] = rec.d_squared_zero;
    e["euler_consistent"] = rec.euler_consistent;
    ordered_json shapes = ordered_json::array();
    for (const auto& [rows, cols] : rec.matrix_shapes) shapes.push_back({rows, cols});
    e["matrix_shapes"] = shapes;
    if (timings) e["wall_clock_ms"] = static_cast<long>(rec.wall_clock_ms);
    per.push_back(e);
  }
  j["per_j"] = per;
  j["verdict"] = r.verdict;
  j["top_exact"] = r.top_exact;
  if (timings) j["wall_clock_ms"] = static_cast<long>(r.wall_clock_ms);
  return j;
}

inline ordered_json strata_json(const Polarization& p, const std::vector<Stratum>& strata_list) {
  ordered_json j;
  j["d"] = vector_json(p.d);
  ordered_json arr = ordered_json::array();
  for (const auto& s : strata_list) arr.push_back({{"heavy_set", vector_json(s.heavy_set)}, {"mu", s.mu}, {"eta", s.eta}});
  j["strata"] = arr;
  return j;
}

inline ordered_json weights_json(const WeightReport& r) {
  ordered_json j;
  j["d"] = vector_json(r.polarization.d);
  j["j"] = r.j;
  ordered_json arr = ordered_json::array();
  for (const auto& s : r.strata) {
    ordered_json e;
    e["heavy_set"] = vector_json(s.stratum.heavy_set);
    e["mu"] = s.stratum.mu;
    e["eta"] = s.stratum.eta;
    e["line_bundle_weight"] = s.line_bundle_weight;
    ordered_json terms = ordered_json::array();
    for (const auto& t : s.terms) {
      ordered_json w = ordered_json::array();
      for (const auto& [weight, mult] : t.weights) w.push_back({weight, mult});
      terms.push_back({{"q", t.q}, {"weights", w}, {"max_weight", t.max_weight}});
    }
    e["terms"] = terms;
    e["max_term_weight"] = s.max_term_weight;
    e["max_total"] = s.max_total;
    e["ok"] = s.ok;
    arr.push_back(e);
  }
  j["strata"] = arr;
  j["line_bundle_negative"] = r.line_bundle_negative;
  j["all_ok"] = r.all_ok;
  return j;
}

inline std::string join(const std::vector<long>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

inline std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

inline std::string join(const std::vector<int>& v, const char* sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact checks of Bott vanishing for GIT quotients of (P^1)^n by PGL2", "bottcheck"};
  app.require_subcommand(1);
  std::string cache_dir_flag;
  bool no_cache = false, quiet = false;
  app.add_option("--cache-dir", cache_dir_flag, "Directory for cached invariant bases");
  app.add_flag("--no-cache", no_cache, "Keep invariant bases in memory only");
  app.add_flag("-q,--quiet", quiet, "Suppress progress messages on stderr");

  std::string d_text, l_text, tableau_text;
  int j = 0, sym = 0, v0 = 0, nmax = 8, dmax = 9;
  bool json = false, bar = false, timings = false, clear = false, stats = false;

  auto* stability = app.add_subcommand("stability", "Stable or strictly semistable verdict");
  stability->add_option("--d", d_text, "Degree vector, e.g. 2,2,2,2,2")->required();
  stability->add_flag("--json", json);

  auto* strata_cmd = app.add_subcommand("strata", "Unstable strata (heavy set, mu, eta)");
  strata_cmd->add_option("--d", d_text, "Degree vector")->required();
  strata_cmd->add_flag("--json", json);

  auto* dims = app.add_subcommand("dims", "Invariant dimension and basis size");
  dims->add_option("--l", l_text, "Factor grades, e.g. 2,2,2,2,2")->required();
  dims->add_option("--sym", sym, "Grade in X0,Y0,Z0")->check(CLI::NonNegativeNumber);
  dims->add_option("--v0", v0, "Grade of the binary slot 0")->check(CLI::NonNegativeNumber);

  auto* straighten_cmd = app.add_subcommand("straighten", "Expand a tableau in standard tableaux");
  straighten_cmd->add_option("--tableau", tableau_text, "Tableau [[sources],[targets]]")->required();

  auto* complex_cmd = app.add_subcommand("complex", "Term and cohomology dimensions of F (or F-bar)");
  complex_cmd->add_option("--d", d_text, "Degree vector")->required();
  complex_cmd->add_option("--j", j, "Form degree")->required()->check(CLI::NonNegativeNumber);
  complex_cmd->add_flag("--bar", bar, "Use the V_2q version");
  complex_cmd->add_flag("--json", json);

  auto* verify = app.add_subcommand("verify-bott", "Check Bott vanishing for the polarization");
  verify->add_option("--d", d_text, "Degree vector")->required();
  verify->add_flag("--json", json);
  verify->add_flag("--timings", timings, "Include wall-clock times");

  auto* scan = app.add_subcommand("scan-claim", "Scan sum(d) >= 2n over stable even-sum d; CSV output");
  scan->add_option("--nmax", nmax, "Largest n")->check(CLI::Range(1, 24));
  scan->add_option("--dmax", dmax, "Largest degree")->check(CLI::Range(1, 64));

  auto* weights = app.add_subcommand("weights", "Fixed-point weight report");
  weights->add_option("--d", d_text, "Degree vector")->required();
  weights->add_option("--j", j, "Form degree")->required()->check(CLI::NonNegativeNumber);
  weights->add_flag("--json", json);

  auto* cache = app.add_subcommand("cache", "Inspect or clear the invariant-basis cache");
  auto* clear_opt = cache->add_flag("--clear", clear, "Remove cached bases");
  auto* stats_opt = cache->add_flag("--stats", stats, "Show cache statistics");
  clear_opt->excludes(stats_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  std::optional<BasisStore> store;
  std::filesystem::path cache_dir = cache_dir_flag.empty() ? default_cache_dir() : std::filesystem::path(cache_dir_flag);
  if (no_cache || cache_dir.empty())
    store.emplace();
  else
    store.emplace(cache_dir);
  ComplexContext ctx{&*store, nullptr};
  if (!quiet) ctx.progress = [&err](const std::string& msg) { err << "[bottcheck] " << msg << '\n'; };

  try {
    if (stability->parsed()) {
      Polarization p = parse_polarization(d_text, 1, 64);
      const bool sss = has_strictly_semistable(p);
      if (json) {
        ordered_json o{{"d", vector_json(p.d)}, {"total", p.total()}, {"strictly_semistable", sss}};
        out << o.dump(2) << '\n';
      } else {
        out << "d = (" << p.to_string() << "), total " << p.total() << ": "
            << (sss ? "strictly semistable points exist" : "stable = semistable") << '\n';
      }
      return kExitOk;
    }

    if (strata_cmd->parsed()) {
      Polarization p = parse_polarization(d_text, 1, kMaxStrataFactors);
      if (has_strictly_semistable(p)) throw UsageError("polarization " + p.to_string() + " has strictly semistable points");
      auto list = strata(p);
      if (json) {
        out << strata_json(p, list).dump(2) << '\n';
      } else {
        out << std::left << std::setw(24) << "heavy_set" << std::right << std::setw(6) << "mu" << std::setw(6) << "eta"
            << '\n';
        for (const auto& s : list)
          out << std::left << std::setw(24) << ("{" + join(s.heavy_set) + "}") << std::right << std::setw(6) << s.mu
              << std::setw(6) << s.eta << '\n';
      }
      return kExitOk;
    }

    if (dims->parsed()) {
      std::vector<int> l = parse_degree_list(l_text, true);
      if (static_cast<int>(l.size()) > kMaxVertex) throw UsageError("too many factors");
      if (sym > 0 && v0 > 0) throw UsageError("use at most one of --sym and --v0");
      Multidegree md(sym, v0, l);
      const std::size_t dim = invariant_dim(md);
      const std::size_t basis = store->get(md)->size();
      out << "multidegree " << md.to_string() << '\n';
      out << "invariant_dim " << dim << '\n';
      out << "basis_size " << basis << '\n';
      if (sym == 0) out << "standard_tableaux " << enumerate_standard(md).size() << '\n';
      return dim == basis ? kExitOk : kExitCheckFailed;
    }

    if (straighten_cmd->parsed()) {
      Tableau t;
      try {
        t = parse_tableau(tableau_text);
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      if (t.max_vertex() > kMaxVertex) throw UsageError("vertex index too large");
      GraphElement g = straighten(t);
      out << format_element(g) << '\n';
      return to_polynomial(g) == to_polynomial(t) ? kExitOk : kExitCheckFailed;
    }

    if (complex_cmd->parsed()) {
      Polarization p = parse_polarization(d_text, 1, kMaxVertex);
      ChainComplex c = build_complex(ctx, p, j, bar);
      BottJRecord rec = analyze_complex(c);
      const bool ok = rec.d_squared_zero && rec.euler_consistent;
      if (json) {
        ordered_json o{{"d", vector_json(p.d)},
                       {"j", j},
                       {"bar", bar},
                       {"term_dims", vector_json(rec.term_dims)},
                       {"cohomology_dims", vector_json(rec.cohomology_dims)},
                       {"euler", rec.euler},
                       {"last_map_surjective", rec.last_map_surjective},
                       {"d_squared_zero", rec.d_squared_zero},
                       {"euler_consistent", rec.euler_consistent}};
        out << o.dump(2) << '\n';
      } else {
        out << (bar ? "F-bar" : "F") << " d=(" << p.to_string() << ") j=" << j << '\n';
        out << "term_dims " << join(rec.term_dims) << '\n';
        out << "cohomology_dims " << join(rec.cohomology_dims) << '\n';
        out << "euler " << rec.euler << '\n';
        out << "d_squared_zero " << (rec.d_squared_zero ? "yes" : "no") << '\n';
      }
      return ok ? kExitOk : kExitCheckFailed;
    }

    if (verify->parsed()) {
      Polarization p = parse_polarization(d_text, 3, kMaxVertex);
      if (has_strictly_semistable(p)) throw UsageError("polarization " + p.to_string() + " has strictly semistable points");
      if (p.total() % 2) throw UsageError("odd total degree; pass the doubled polarization");
      BottReport r = verify_bott(ctx, p);
      if (json) {
        out << report_json(r, timings).dump(2) << '\n';
      } else {
        out << "d = (" << p.to_string() << "), n = " << r.n << ", dim Y = " << r.dim_y << '\n';
        for (const auto& rec : r.per_j) {
          out << "j=" << rec.j << "  terms [" << join(rec.term_dims) << "]  H [" << join(rec.cohomology_dims)
              << "]  euler " << rec.euler << "  last map onto: " << (rec.last_map_surjective ? "yes" : "no");
          if (timings) out << "  " << static_cast<long>(rec.wall_clock_ms) << " ms";
          out << '\n';
        }
        out << "verdict: " << (r.verdict ? "true" : "false") << " (H^i = 0 for i >= 1, j <= " << r.dim_y << ")\n";
        out << "j=" << r.n - 2 << " fully exact: " << (r.top_exact ? "true" : "false") << '\n';
        if (timings) out << "wall_clock_ms " << static_cast<long>(r.wall_clock_ms) << '\n';
      }
      return r.verdict && r.top_exact ? kExitOk : kExitCheckFailed;
    }

    if (scan->parsed()) {
      DegreeScanReport r = scan_degree_claim(nmax, dmax);
      out << "n,d,sum,stable,min_heavy_excess,sum_ge_2n\n";
      for (const auto& row : r.rows)
        out << row.n << ",\"" << join(row.d) << "\"," << row.sum << ',' << (row.stable ? "true" : "false") << ','
            << row.min_heavy_excess << ',' << (row.sum_ge_2n ? "true" : "false") << '\n';
      err << "checked " << r.checked << " stable even-sum degree vectors, " << r.counterexamples.size()
          << " counterexamples\n";
      return r.counterexamples.empty() ? kExitOk : kExitCheckFailed;
    }

    if (weights->parsed()) {
      Polarization p = parse_polarization(d_text, 1, kMaxStrataFactors);
      if (has_strictly_semistable(p)) throw UsageError("polarization " + p.to_string() + " has strictly semistable points");
      WeightReport r = fixed_point_weight_report(p, j);
      if (json) {
        out << weights_json(r).dump(2) << '\n';
      } else {
        out << "d = (" << p.to_string() << "), j = " << j << '\n';
        for (const auto& s : r.strata)
          out << "I={" << join(s.stratum.heavy_set) << "} mu=" << s.stratum.mu << " eta=" << s.stratum.eta
              << " L-weight=" << s.line_bundle_weight << " max term=" << s.max_term_weight
              << " max total=" << s.max_total << (s.ok ? " ok" : " exceeds eta-1") << '\n';
        out << "line bundle weight negative on every stratum: " << (r.line_bundle_negative ? "yes" : "no") << '\n';
      }
      return r.line_bundle_negative ? kExitOk : kExitCheckFailed;
    }

    if (cache->parsed()) {
      if (!store->persistent()) throw UsageError("no cache directory configured");
      if (clear) {
        out << "removed " << store->clear_disk() << " cached bases from " << store->directory().string() << '\n';
      } else {
        auto s = store->disk_stats();
        out << "directory " << store->directory().string() << '\n'
            << "bases " << s.files << '\n'
            << "bytes " << s.bytes << '\n';
      }
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "check failed: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitUsage;
}

}  // namespace bott::cli
