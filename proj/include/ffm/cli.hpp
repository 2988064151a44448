#pragma once

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffm/asymptotics.hpp"
#include "ffm/characters.hpp"
#include "ffm/errors.hpp"
#include "ffm/family.hpp"
#include "ffm/lfunction.hpp"
#include "ffm/moments.hpp"
#include "ffm/parallel.hpp"
#include "ffm/roots.hpp"
#include "ffm/version.hpp"

namespace ffm {

// Exit codes: 0 success, 1 failed check, 2 validation error, 3 budget
// error, 4 numeric error.
enum ExitCode {
  kOk = 0,
  kCheckFailed = 1,
  kValidationError = 2,
  kBudgetError = 3,
  kNumericError = 4,
};

struct RunConfig {
  std::string command;
  std::uint32_t q = 3;
  int g = 1;
  int n = 3;        // prime-moment degree
  int k = 2;
  int x = -1;       // -1: use the default cutoff where one applies
  int dmax = 12;
  int harmonic_cutoff = 8;
  double tol = 1e-9;
  std::uint64_t budget = 10'000'000;
  unsigned threads = 1;
  std::string out = "-";
  std::string format = "csv";  // csv | json
  std::string cache;
  std::string f_text;  // fixed polynomial for `count` / modulus for `ortho`
  std::string r_text;  // harmonic sum parameters
  std::string h_text;
  std::string series_method = "euler";  // euler | direct
  bool series_diagnostic = false;
  bool strict = false;
  bool no_timestamp = false;
};

// ---------------------------------------------------------------------------
// Config file: UTF-8 `key=value` lines, '#' comments. Keys mirror the long
// flag names; values given on the command line win.
// ---------------------------------------------------------------------------

inline std::map<std::string, std::string> parse_config_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::domain_error("cannot read config file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::domain_error("config line " + std::to_string(lineno) +
                              ": expected key=value, got '" + line + "'");
    }
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    auto strip = [](std::string& s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      s = (a == std::string::npos) ? "" : s.substr(a, b - a + 1);
    };
    strip(key);
    strip(val);
    if (key.empty()) {
      throw std::domain_error("config line " + std::to_string(lineno) +
                              ": empty key");
    }
    out[key] = val;
  }
  return out;
}

/// Applies config-file values for keys the command line did not set.
/// `given` holds the keys that were passed explicitly as flags.
inline void apply_config(RunConfig& cfg,
                         const std::map<std::string, std::string>& kv,
                         const std::vector<std::string>& given) {
  auto was_given = [&given](const std::string& key) {
    for (const auto& g : given) {
      if (g == key) return true;
    }
    return false;
  };
  for (const auto& [key, val] : kv) {
    if (was_given(key)) continue;
    try {
      if (key == "q") cfg.q = std::uint32_t(std::stoul(val));
      else if (key == "g") cfg.g = std::stoi(val);
      else if (key == "n") cfg.n = std::stoi(val);
      else if (key == "k") cfg.k = std::stoi(val);
      else if (key == "x") cfg.x = std::stoi(val);
      else if (key == "dmax") cfg.dmax = std::stoi(val);
      else if (key == "L") cfg.harmonic_cutoff = std::stoi(val);
      else if (key == "tol") cfg.tol = std::stod(val);
      else if (key == "budget") cfg.budget = std::stoull(val);
      else if (key == "threads") cfg.threads = unsigned(std::stoul(val));
      else if (key == "out") cfg.out = val;
      else if (key == "format") cfg.format = val;
      else if (key == "cache") cfg.cache = val;
      else if (key == "f") cfg.f_text = val;
      else if (key == "r") cfg.r_text = val;
      else if (key == "h") cfg.h_text = val;
      else if (key == "method") cfg.series_method = val;
      else if (key == "strict") cfg.strict = (val == "1" || val == "true");
      else if (key == "no-timestamp") cfg.no_timestamp = (val == "1" || val == "true");
      else throw std::domain_error("unknown config key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw std::domain_error("bad value for config key '" + key + "': '" +
                              val + "'");
    }
  }
}

// ---------------------------------------------------------------------------
// Emission helpers. All floats print as %.17g so reruns are byte-stable.
// ---------------------------------------------------------------------------

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string provenance_line(const RunConfig& cfg) {
  std::ostringstream s;
  s << "# provenance: ffm " << kVersion << "; cmd=" << cfg.command << "; q="
    << cfg.q << " g=" << cfg.g << " n=" << cfg.n << " k=" << cfg.k
    << " x=" << cfg.x << " dmax=" << cfg.dmax << " L=" << cfg.harmonic_cutoff
    << " budget=" << cfg.budget << " threads=" << cfg.threads
    << " format=" << cfg.format;
  if (!cfg.f_text.empty()) s << " f=" << cfg.f_text;
  if (!cfg.r_text.empty()) s << " r=" << cfg.r_text;
  if (!cfg.h_text.empty()) s << " h=" << cfg.h_text;
  if (!cfg.no_timestamp) {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
    s << "; timestamp=" << buf;
  }
  return s.str();
}

/// Rows are flat string key/value pairs; CSV prints the values in column
/// order, JSON Lines mirrors them one object per row.
struct Row {
  std::vector<std::pair<std::string, std::string>> cells;
  void add(const std::string& key, const std::string& value) {
    cells.emplace_back(key, value);
  }
};

class TableWriter {
 public:
  TableWriter(std::ostream& out, const RunConfig& cfg) : out_(out), cfg_(cfg) {
    if (cfg.format != "csv" && cfg.format != "json") {
      throw std::domain_error("unknown format '" + cfg.format +
                              "' (expected csv or json)");
    }
    if (cfg.format == "csv") {
      out_ << provenance_line(cfg) << "\n";
    } else {
      out_ << "{\"provenance\":\"" << provenance_line(cfg).substr(2) << "\"}\n";
    }
  }

  void header(const std::vector<std::string>& columns) {
    if (cfg_.format == "csv") {
      for (std::size_t i = 0; i < columns.size(); ++i) {
        out_ << (i ? "," : "") << columns[i];
      }
      out_ << "\n";
    }
  }

  void row(const Row& r) {
    if (cfg_.format == "csv") {
      for (std::size_t i = 0; i < r.cells.size(); ++i) {
        out_ << (i ? "," : "") << r.cells[i].second;
      }
      out_ << "\n";
    } else {
      out_ << "{";
      for (std::size_t i = 0; i < r.cells.size(); ++i) {
        out_ << (i ? "," : "") << "\"" << r.cells[i].first << "\":\""
             << r.cells[i].second << "\"";
      }
      out_ << "}\n";
    }
  }

 private:
  std::ostream& out_;
  const RunConfig& cfg_;
};

inline std::string seconds_cell(const RunConfig& cfg, double seconds) {
  // Wall time is excluded along with the timestamp so reruns are
  // byte-identical.
  if (cfg.no_timestamp) return "0";
  return fmt_double(seconds);
}

inline Row moment_row(const RunConfig& cfg, const MomentReport& rep) {
  Row r;
  r.add("q", std::to_string(rep.q));
  r.add("g", std::to_string(rep.genus));
  r.add("k", std::to_string(rep.k));
  r.add("x", rep.x < 0 ? "" : std::to_string(rep.x));
  r.add("family_size", rep.family_size.str());
  r.add("moment_exact_a", rat_string(rep.moment.rational_part()));
  r.add("moment_exact_b", rat_string(rep.moment.root_part()));
  r.add("moment_float", fmt_double(rep.moment_float));
  r.add("s1_float", rep.has_holder ? fmt_double(rep.s1.to_double()) : "");
  r.add("s2_float", rep.has_holder ? fmt_double(rep.s2.to_double()) : "");
  r.add("holder_bound_float", rep.has_holder ? fmt_double(rep.holder_bound) : "");
  r.add("seconds", seconds_cell(cfg, rep.seconds));
  return r;
}

inline const std::vector<std::string>& moment_columns() {
  static const std::vector<std::string> cols = {
      "q", "g", "k", "x", "family_size", "moment_exact_a", "moment_exact_b",
      "moment_float", "s1_float", "s2_float", "holder_bound_float", "seconds"};
  return cols;
}

// ---------------------------------------------------------------------------
// Cache handling for L-polynomial records.
// ---------------------------------------------------------------------------

struct CacheLoadResult {
  // keyed by the monic rank of the discriminant
  std::map<std::uint64_t, LPolynomial> records;
  int warnings = 0;
};

inline CacheLoadResult load_cache(const std::string& path, std::uint32_t q,
                                  int g, std::ostream& err) {
  std::ifstream in(path);
  if (!in) throw std::domain_error("cannot read cache file '" + path + "'");
  CacheLoadResult out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    try {
      CachedLPolynomial rec = parse_cache_line(line);
      if (rec.lpoly.q != q || rec.lpoly.genus != g) continue;  // other family
      out.records[rank_of_monic(rec.discriminant)] = std::move(rec.lpoly);
    } catch (const std::exception& e) {
      ++out.warnings;
      err << "warning: cache line " << lineno << " rejected: " << e.what()
          << "\n";
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subcommand bodies. Each is a thin adapter around one library operation.
// ---------------------------------------------------------------------------

namespace cli_detail {

inline FamilySpec make_family(const RunConfig& cfg) {
  return FamilySpec(PrimeField(cfg.q), cfg.g);
}

inline Budget make_budget(const RunConfig& cfg) {
  return Budget{cfg.budget};
}

inline int sieve_degree_for_family(const RunConfig& cfg) {
  int d = 2 * cfg.g + 1;
  if (cfg.x > d) d = cfg.x;
  return d;
}

inline int run_lpoly(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const FamilySpec fam = make_family(cfg);
  const Budget budget = make_budget(cfg);
  const IrreducibleSieve sieve(fam.field, sieve_degree_for_family(cfg), budget);
  out << provenance_line(cfg) << "\n";
  const std::uint64_t span = family_span(fam, budget);
  auto work = [&](std::uint64_t from, std::uint64_t to) {
    std::string chunk;
    ChiEvaluator eval(sieve, 2 * fam.genus);
    for_each_discriminant(fam, from, to, [&](const Polynomial& d) {
      QuadraticCharacter chr(d, sieve);
      chunk += format_cache_line(d, l_coefficients(chr, eval));
      chunk += "\n";
    });
    return chunk;
  };
  for (const std::string& chunk :
       run_partitions<std::string>(span, cfg.threads, work)) {
    out << chunk;
  }
  return kOk;
}

/// Family sweep shared by `moments` and `holder`, honoring a warm cache.
/// Only called when the truncation fits inside the cached coefficient
/// range (x <= 2g), where shell sums are the coefficients themselves.
inline MomentReport sweep_with_cache(const RunConfig& cfg, int x,
                                     std::ostream& err, int* warnings) {
  const FamilySpec fam = make_family(cfg);
  const Budget budget = make_budget(cfg);
  const IrreducibleSieve sieve(fam.field, sieve_degree_for_family(cfg), budget);

  std::optional<CacheLoadResult> cache;
  cache = load_cache(cfg.cache, cfg.q, cfg.g, err);
  *warnings = cache->warnings;

  const auto t0 = std::chrono::steady_clock::now();
  MomentReport rep(cfg.q);
  rep.genus = cfg.g;
  rep.k = cfg.k;
  rep.x = x;

  const std::uint64_t span = family_span(fam, budget);
  const int max_deg = std::max(2 * fam.genus, x < 0 ? 0 : x);
  auto work = [&](std::uint64_t from, std::uint64_t to) -> detail::SweepSums {
    detail::SweepSums acc;
    ChiEvaluator eval(sieve, max_deg);
    for_each_discriminant(fam, from, to, [&](const Polynomial& d) {
      LPolynomial L;
      bool from_cache = false;
      if (cache) {
        const auto hit = cache->records.find(rank_of_monic(d));
        if (hit != cache->records.end()) {
          L = hit->second;
          from_cache = true;
        }
      }
      if (!from_cache) {
        eval.set_discriminant(d);
        L.q = cfg.q;
        L.genus = fam.genus;
        L.c.resize(std::size_t(2 * fam.genus) + 1);
        for (int m = 0; m <= 2 * fam.genus; ++m) {
          L.c[std::size_t(m)] = eval.shell_sum(m);
        }
      }
      const QuadraticValue lval = central_value(L);
      acc.add_m(lval.pow(unsigned(cfg.k)));
      if (x >= 0) {
        // Shell sums up to x <= 2g are the coefficients themselves.
        Rat a = 0, b = 0;
        for (int m = 0; m <= x; ++m) {
          const Rat shell(L.c[std::size_t(m)],
                          int_pow(Int(cfg.q), unsigned(m / 2)));
          if (m % 2 == 0) a += shell; else b += shell;
        }
        const QuadraticValue av(cfg.q, a, b);
        acc.add_s1(lval * av.pow(unsigned(cfg.k - 1)));
        acc.add_s2(av.pow(unsigned(cfg.k)));
      }
      acc.count += 1;
    });
    return acc;
  };
  detail::SweepSums total;
  for (const auto& p : run_partitions<detail::SweepSums>(span, cfg.threads, work)) {
    total.s1a += p.s1a; total.s1b += p.s1b;
    total.s2a += p.s2a; total.s2b += p.s2b;
    total.ma += p.ma;   total.mb += p.mb;
    total.count += p.count;
  }
  rep.family_size = total.count;
  rep.moment = QuadraticValue(cfg.q, total.ma, total.mb);
  rep.moment_float = rep.moment.to_double();
  rep.normalized_moment = rep.moment_float / to_double(rep.family_size);
  if (x >= 0) {
    finish_holder(rep, QuadraticValue(cfg.q, total.s1a, total.s1b),
                  QuadraticValue(cfg.q, total.s2a, total.s2b), rep.moment,
                  cfg.k);
  }
  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

inline int run_moments(const RunConfig& cfg, std::ostream& out,
                       std::ostream& err) {
  int warnings = 0;
  MomentReport rep(cfg.q);
  if (!cfg.cache.empty()) {
    rep = sweep_with_cache(cfg, -1, err, &warnings);
  } else {

    const FamilySpec fam = make_family(cfg);
    const Budget budget = make_budget(cfg);
    const IrreducibleSieve sieve(fam.field, sieve_degree_for_family(cfg), budget);
    rep = family_moment(fam, cfg.k, sieve, budget, cfg.threads);
  }
  TableWriter w(out, cfg);
  w.header(moment_columns());
  w.row(moment_row(cfg, rep));
  return (cfg.strict && warnings > 0) ? kValidationError : kOk;
}

inline int run_holder(const RunConfig& cfg, std::ostream& out,
                      std::ostream& err) {
  if (cfg.k < 2 || cfg.k % 2 != 0) {
    throw std::domain_error("holder needs even k >= 2 (flag k)");
  }
  const int x = cfg.x >= 0 ? cfg.x : default_cutoff(cfg.g, cfg.k);
  int warnings = 0;
  MomentReport rep(cfg.q);
  if (!cfg.cache.empty() && x <= 2 * cfg.g) {
    rep = sweep_with_cache(cfg, x, err, &warnings);
  } else {
    const FamilySpec fam = make_family(cfg);
    const Budget budget = make_budget(cfg);
    RunConfig tmp = cfg;
    tmp.x = x;
    const IrreducibleSieve sieve(fam.field, sieve_degree_for_family(tmp), budget);
    rep = holder_chain(fam, cfg.k, x, sieve, budget, cfg.threads);
  }
  TableWriter w(out, cfg);
  w.header(moment_columns());
  w.row(moment_row(cfg, rep));
  if (!rep.holder_ok) {
    err << "Hoelder inequality violated -- arithmetic bug\n";
    return kCheckFailed;
  }
  return (cfg.strict && warnings > 0) ? kValidationError : kOk;
}

inline int run_primes(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.n % 2 == 0) {
    throw std::domain_error("prime moments need odd degree (flag n)");
  }
  const PrimeField field(cfg.q);
  const Budget budget = make_budget(cfg);
  const IrreducibleSieve sieve(field, cfg.n, budget);
  const MomentReport rep =
      prime_moment(field, cfg.n, cfg.k, sieve, budget, cfg.threads);
  TableWriter w(out, cfg);
  w.header(moment_columns());
  w.row(moment_row(cfg, rep));
  return kOk;
}

inline int run_ortho(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const FamilySpec fam = make_family(cfg);
  const Budget budget = make_budget(cfg);
  std::vector<Polynomial> moduli;
  int sieve_deg = 2 * cfg.g + 1;
  if (!cfg.f_text.empty()) {
    Polynomial n = parse_polynomial(cfg.f_text);
    if (n.q() != cfg.q) throw std::domain_error("modulus field differs from --q");
    sieve_deg = std::max(sieve_deg, n.degree());
    moduli.push_back(std::move(n));
  } else {
    const int bound = std::min(cfg.dmax, 4);
    sieve_deg = std::max(sieve_deg, bound);
    for (int d = 1; d <= bound; ++d) {
      for (const Polynomial& n : MonicRange(fam.field, d, budget)) {
        moduli.push_back(n);
      }
    }
  }
  const IrreducibleSieve sieve(fam.field, sieve_deg, budget);
  TableWriter w(out, cfg);
  w.header({"q", "modulus", "g", "exact_sum", "ratio"});
  for (const Polynomial& n : moduli) {
    const OrthogonalityRecord rec = orthogonality_sum(n, fam, sieve, budget);
    Row r;
    r.add("q", std::to_string(rec.q));
    r.add("modulus", rec.modulus);
    r.add("g", std::to_string(rec.genus));
    r.add("exact_sum", rec.sum.str());
    r.add("ratio", rec.modulus_is_square ? "" : fmt_double(rec.ratio));
    w.row(r);
  }
  return kOk;
}

inline int run_charsum(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const FamilySpec fam = make_family(cfg);
  const Budget budget = make_budget(cfg);
  const int x_hi = cfg.x >= 0 ? cfg.x : 2 * cfg.g + 1;
  const int x_lo = cfg.x >= 0 ? cfg.x : 0;
  const IrreducibleSieve sieve(fam.field,
                               std::max(2 * cfg.g + 1, x_hi), budget);
  TableWriter w(out, cfg);
  w.header({"q", "D", "x_or_n", "exact_sum", "ratio"});
  ChiEvaluator eval(sieve, x_hi);
  const double sqrt_norm = std::sqrt(to_double(fam.abs_discriminant()));
  for_each_discriminant(fam, budget, [&](const Polynomial& d) {
    eval.set_discriminant(d);
    for (int x = x_lo; x <= x_hi; ++x) {
      const std::int64_t sum = eval.shell_sum(x);
      Row r;
      r.add("q", std::to_string(cfg.q));
      r.add("D", to_text(d));
      r.add("x_or_n", std::to_string(x));
      r.add("exact_sum", std::to_string(sum));
      r.add("ratio", fmt_double(double(sum < 0 ? -sum : sum) / sqrt_norm));
      w.row(r);
    }
  });
  return kOk;
}

inline int run_count(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.f_text.empty()) {
    throw std::domain_error("count needs a fixed polynomial (flag f)");
  }
  const FamilySpec fam = make_family(cfg);
  const Budget budget = make_budget(cfg);
  Polynomial f = parse_polynomial(cfg.f_text);
  if (f.q() != cfg.q) throw std::domain_error("polynomial field differs from --q");
  const IrreducibleSieve sieve(fam.field, std::max(1, f.degree() ? f.degree() : 1),
                               budget);
  const SquarefreeCoprimeCount rec =
      squarefree_coprime_count(f, fam, sieve, budget);
  TableWriter w(out, cfg);
  w.header({"q", "g", "f", "exact", "main_term", "residual"});
  Row r;
  r.add("q", std::to_string(cfg.q));
  r.add("g", std::to_string(cfg.g));
  r.add("f", to_text(f));
  r.add("exact", rec.exact.str());
  r.add("main_term", rat_string(rec.main_term));
  r.add("residual", fmt_double(rec.residual));
  w.row(r);
  return kOk;
}

inline int run_afe_check(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const FamilySpec fam = make_family(cfg);
  const Budget budget = make_budget(cfg);
  const IrreducibleSieve sieve(fam.field, 2 * cfg.g + 1, budget);
  const std::uint64_t span = family_span(fam, budget);
  struct Counts {
    std::uint64_t total = 0, pass = 0;
  };
  auto work = [&](std::uint64_t from, std::uint64_t to) {
    Counts c;
    ChiEvaluator eval(sieve, 2 * fam.genus);
    for_each_discriminant(fam, from, to, [&](const Polynomial& d) {
      QuadraticCharacter chr(d, sieve);
      ++c.total;
      if (afe_identity_check(chr, eval)) ++c.pass;
    });
    return c;
  };
  Counts total;
  for (const Counts& c : run_partitions<Counts>(span, cfg.threads, work)) {
    total.total += c.total;
    total.pass += c.pass;
  }
  out << provenance_line(cfg) << "\n";
  out << total.pass << "/" << total.total << " pass\n";
  return total.pass == total.total ? kOk : kCheckFailed;
}

inline int run_rh_check(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const FamilySpec fam = make_family(cfg);
  const Budget budget = make_budget(cfg);
  const IrreducibleSieve sieve(fam.field, 2 * cfg.g + 1, budget);
  const std::uint64_t span = family_span(fam, budget);
  struct Worst {
    std::uint64_t total = 0, pass = 0;
    double max_deviation = 0, max_product_err = 0;
  };
  auto work = [&](std::uint64_t from, std::uint64_t to) {
    Worst wst;
    ChiEvaluator eval(sieve, 2 * fam.genus);
    for_each_discriminant(fam, from, to, [&](const Polynomial& d) {
      QuadraticCharacter chr(d, sieve);
      const CircleReport rep =
          critical_circle_check(l_coefficients(chr, eval), cfg.tol);
      ++wst.total;
      if (rep.pass) ++wst.pass;
      wst.max_deviation = std::max(wst.max_deviation, rep.max_deviation);
      wst.max_product_err =
          std::max(wst.max_product_err, rep.root_product_rel_err);
    });
    return wst;
  };
  Worst total;
  for (const Worst& p : run_partitions<Worst>(span, cfg.threads, work)) {
    total.total += p.total;
    total.pass += p.pass;
    total.max_deviation = std::max(total.max_deviation, p.max_deviation);
    total.max_product_err = std::max(total.max_product_err, p.max_product_err);
  }
  out << provenance_line(cfg) << "\n";
  out << total.pass << "/" << total.total
      << " pass; max_root_deviation=" << fmt_double(total.max_deviation)
      << " max_product_rel_err=" << fmt_double(total.max_product_err) << "\n";
  return total.pass == total.total ? kOk : kCheckFailed;
}

inline int run_series(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const PrimeField field(cfg.q);
  const Budget budget = make_budget(cfg);
  if (cfg.series_diagnostic) {
    TableWriter w(out, cfg);
    w.header({"k", "q", "x_or_dmax", "value", "ratio"});
    for (const ShellRow& row : shell_sum_diagnostic(field, cfg.k, cfg.dmax)) {
      Row r;
      r.add("k", std::to_string(cfg.k));
      r.add("q", std::to_string(cfg.q));
      r.add("x_or_dmax", std::to_string(row.x));
      r.add("value", rat_string(row.z_x));
      r.add("ratio", fmt_double(row.ratio));
      w.row(r);
    }
    return kOk;
  }
  SeriesPoly s(cfg.dmax);
  if (cfg.series_method == "euler") {
    s = zf_euler_coeffs(field, cfg.k, cfg.dmax);
  } else if (cfg.series_method == "direct") {
    const IrreducibleSieve sieve(field, std::max(1, cfg.dmax), budget);
    s = zf_direct_coeffs(field, cfg.k, cfg.dmax, sieve, budget);
  } else {
    throw std::domain_error("unknown series method '" + cfg.series_method +
                            "' (flag method)");
  }
  out << provenance_line(cfg) << "\n";
  for (int n = 0; n <= s.order(); ++n) {
    out << n << "," << rat_string(s.z[std::size_t(n)]) << "\n";
  }
  return kOk;
}

inline int run_constants(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const PrimeField field(cfg.q);
  const LeadingConstant lc = leading_constant(field, cfg.k, cfg.dmax);
  TableWriter w(out, cfg);
  w.header({"k", "q", "x_or_dmax", "value", "ratio"});
  Row r;
  r.add("k", std::to_string(cfg.k));
  r.add("q", std::to_string(cfg.q));
  r.add("x_or_dmax", std::to_string(cfg.dmax));
  r.add("value", rat_string(lc.alpha));
  r.add("ratio", fmt_double(lc.c_k));
  w.row(r);
  return kOk;
}

inline int run_harmonic(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const PrimeField field(cfg.q);
  const Budget budget = make_budget(cfg);
  const Polynomial r = cfg.r_text.empty() ? Polynomial::one(field)
                                          : parse_polynomial(cfg.r_text);
  const Polynomial h = cfg.h_text.empty() ? Polynomial::one(field)
                                          : parse_polynomial(cfg.h_text);
  if (r.q() != cfg.q || h.q() != cfg.q) {
    throw std::domain_error("harmonic arguments must live over F_q (flag q)");
  }
  const int need = r.degree() + h.degree() + cfg.harmonic_cutoff;
  const IrreducibleSieve sieve(field, std::max(1, need), budget);
  const std::vector<Rat> partials =
      restricted_harmonic_partials(r, h, cfg.harmonic_cutoff, sieve, budget);
  TableWriter w(out, cfg);
  w.header({"q", "r", "h", "L", "value", "diff"});
  for (std::size_t i = 0; i < partials.size(); ++i) {
    Row row;
    row.add("q", std::to_string(cfg.q));
    row.add("r", to_text(r));
    row.add("h", to_text(h));
    row.add("L", std::to_string(i));
    row.add("value", rat_string(partials[i]));
    const Rat diff = i == 0 ? partials[0] : partials[i] - partials[i - 1];
    row.add("diff", fmt_double(to_double(diff)));
    w.row(row);
  }
  return kOk;
}

}  // namespace cli_detail

/// Dispatch a parsed, validated configuration. Writes results to `out`
/// (the CLI points this at --out), warnings to `err`. Exceptions map to
/// exit codes in run_command_captured / the CLI main.
inline int run_command(const RunConfig& cfg, std::ostream& out,
                       std::ostream& err) {
  using namespace cli_detail;
  if (cfg.command == "lpoly") return run_lpoly(cfg, out, err);
  if (cfg.command == "moments") return run_moments(cfg, out, err);
  if (cfg.command == "holder") return run_holder(cfg, out, err);
  if (cfg.command == "primes") return run_primes(cfg, out, err);
  if (cfg.command == "ortho") return run_ortho(cfg, out, err);
  if (cfg.command == "charsum") return run_charsum(cfg, out, err);
  if (cfg.command == "count") return run_count(cfg, out, err);
  if (cfg.command == "afe-check") return run_afe_check(cfg, out, err);
  if (cfg.command == "rh-check") return run_rh_check(cfg, out, err);
  if (cfg.command == "series") return run_series(cfg, out, err);
  if (cfg.command == "constants") return run_constants(cfg, out, err);
  if (cfg.command == "harmonic") return run_harmonic(cfg, out, err);
  throw std::domain_error("unknown subcommand '" + cfg.command + "'");
}

/// Run with exceptions mapped to process exit codes; output lands in the
/// file named by cfg.out, or `out` when cfg.out is "-".
inline int run_command_mapped(const RunConfig& cfg, std::ostream& out,
                              std::ostream& err) {
  try {
    if (cfg.out != "-") {
      std::ofstream file(cfg.out);
      if (!file) {
        throw std::domain_error("cannot open output file '" + cfg.out + "'");
      }
      return run_command(cfg, file, err);
    }
    return run_command(cfg, out, err);
  } catch (const budget_error& e) {
    err << "budget error: " << e.what() << "\n";
    return kBudgetError;
  } catch (const numeric_error& e) {
    err << "numeric error: " << e.what() << "\n";
    return kNumericError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  }
}

}  // namespace ffm
