// grassfq: tables and verification reports for Grassmannians over F_q.
//
// Output is a JSON record {"q","n","command","seed","rows"} or a CSV table
// with the same columns.  Exact values are strings; doubles only appear in
// columns whose name ends in "_approx".  Timings go to stderr.

#include "grassfq/grassfq.hpp"
#include "grassfq/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace grassfq;
using Json = nlohmann::ordered_json;

namespace {

struct Config {
  unsigned q = 2;
  std::optional<unsigned> n;
  std::optional<unsigned> k;
  unsigned kmax = 12;
  unsigned jmax = 8;
  unsigned K = 30;
  std::uint64_t samples = 100'000;
  std::uint64_t steps = 1'000'000;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out;
  std::string suite = "all";
  bool by_enumeration = false;
  bool infinite = false;
};

struct Table {
  std::string command;
  std::optional<unsigned> n;
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
  bool failed = false;  // a verification inside the command did not hold

  void add(std::vector<Json> row) {
    require(row.size() == columns.size(), errc::precondition_violated, "row width mismatch");
    rows.push_back(std::move(row));
  }
};

Json approx(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }
Json approx(const QRational& x) { return approx(to_double(x)); }
std::string str(const QRational& x) { return to_string(x); }
std::string str(const BigInt& x) { return to_string(x); }

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (!v.is_string()) return v.dump();
  const std::string s = v.get<std::string>();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string render(const Table& t, const Config& cfg) {
  if (cfg.format == "csv") {
    std::ostringstream os;
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
      os << '\n';
    }
    return os.str();
  }
  Json doc;
  doc["q"] = std::to_string(cfg.q);
  doc["n"] = t.n ? Json(std::to_string(*t.n)) : Json(nullptr);
  doc["command"] = t.command;
  doc["seed"] = std::to_string(cfg.seed);
  doc["rows"] = Json::array();
  for (const auto& row : t.rows) {
    Json r = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = row[i];
    doc["rows"].push_back(std::move(r));
  }
  return doc.dump(2) + "\n";
}

unsigned need_n(const Config& cfg, unsigned fallback) { return cfg.n.value_or(fallback); }

// ------------------------------------------------------------------ commands

Table cmd_count(const Config& cfg) {
  const unsigned n = need_n(cfg, 2);
  FieldSpec::of_order(cfg.q);
  Table t{"count", n, {"quantity", "k", "value", "mu_n", "mu_n_approx", "enumerated"}, {}};

  std::vector<BigInt> tally(n + 1, 0);
  BigInt listed = 0;
  if (cfg.by_enumeration) {
    SubspaceEnumerator it({FieldSpec::of_order(cfg.q), 2 * n, n});
    Subspace L;
    while (it.next(L)) {
      ++tally[orbit_index(L, n)];
      ++listed;
    }
  }
  auto enumerated = [&](const BigInt& v) { return cfg.by_enumeration ? Json(str(v)) : Json(""); };

  t.add({"gl_n", "", str(gl_count(n, cfg.q)), "", nullptr, ""});
  t.add({"gl_2n", "", str(gl_count(2 * n, cfg.q)), "", nullptr, ""});
  const BigInt gr = grassmannian_count(2 * n, n, cfg.q);
  const ExactMeasure mg = mu_n(gr, n, cfg.q);
  t.add({"grassmannian", "", str(gr), str(mg.value), approx(mg.value), enumerated(listed)});
  if (cfg.by_enumeration && listed != gr) t.failed = true;
  for (unsigned k = 0; k <= n; ++k) {
    const BigInt c = orbit_count(n, k, cfg.q);
    const ExactMeasure m = mu_n(c, n, cfg.q);
    t.add({"orbit", std::to_string(k), str(c), str(m.value), approx(m.value), enumerated(tally[k])});
    if (cfg.by_enumeration && tally[k] != c) t.failed = true;
  }
  return t;
}

Table cmd_enumerate(const Config& cfg) {
  const unsigned n = need_n(cfg, 1);
  const FieldSpec f = FieldSpec::of_order(cfg.q);
  if (cfg.k) require(*cfg.k <= n, errc::parameter_out_of_range, "--k must not exceed --n");
  Table t{"enumerate", n, {"index", "basis", "orbit_k", "chart", "chart_coords"}, {}};
  SubspaceEnumerator it({f, 2 * n, n});
  Subspace L;
  std::uint64_t index = 0;
  while (it.next(L)) {
    const std::size_t k = orbit_index(L, n);
    if (!cfg.k || *cfg.k == k) {
      const auto hit = first_chart(L, n);
      require(hit.has_value(), errc::chart_search_exhausted, "subspace outside every chart: " + L.str());
      t.add({std::to_string(index), L.basis().str(), std::to_string(k), hit->chart.str(), hit->coords.str()});
    }
    ++index;
  }
  return t;
}

Table cmd_measure(const Config& cfg) {
  FieldSpec::of_order(cfg.q);
  const std::int64_t q = cfg.q;
  Table t{"measure", std::nullopt,
          {"k", "mu_orbit", "mu_orbit_approx", "partial_sum", "partial_sum_approx", "limit_approx", "gap_approx"}, {}};
  const double limit = total_mass_float(q);
  QRational partial = 0;
  for (long k = 0; k <= static_cast<long>(cfg.kmax); ++k) {
    const QRational w = orbit_weight(k, q);
    partial += w;
    t.add({std::to_string(k), str(w), approx(w), str(partial), approx(partial), approx(limit),
           approx(std::abs(limit - to_double(partial)))});
  }
  return t;
}

QRational max_abs(const std::vector<QRational>& v) {
  QRational m = 0;
  for (const auto& x : v) m = std::max(m, x < 0 ? QRational(-x) : x);
  return m;
}

Table cmd_spectrum(const Config& cfg) {
  FieldSpec::of_order(cfg.q);
  const std::int64_t q = cfg.q;
  if (cfg.infinite) {
    Table t{"spectrum", std::nullopt, {"j", "K", "eigenvalue", "eigenvalue_approx", "residual_max", "residuals_zero"}, {}};
    for (long j = 0; j <= static_cast<long>(cfg.jmax); ++j) {
      const auto res = asc_eigencheck(j, q, cfg.K);
      const bool zero = all_zero(res);
      t.failed = t.failed || !zero;
      const QRational ev = qpow(q, -j);
      t.add({std::to_string(j), std::to_string(cfg.K), str(ev), approx(ev), str(max_abs(res)), zero ? "true" : "false"});
    }
    return t;
  }

  const unsigned n = need_n(cfg, 4);
  Table t{"spectrum", n,
          {"j", "eigenvalue", "eigenvalue_approx", "residual_max", "residuals_zero", "averaging_eigenvalue_approx"}, {}};
  std::vector<double> averaging;
  try {
    averaging = finite_averaging_matrix(n, FieldSpec::of_order(cfg.q)).eigenvalues;
  } catch (const error& ex) {
    if (ex.code() != errc::too_large) throw;
  }
  for (long j = 0; j <= static_cast<long>(n); ++j) {
    const auto res = hahn_eigencheck(j, n, q);
    const bool zero = all_zero(res);
    t.failed = t.failed || !zero;
    const QRational ev = hahn_eigenvalue(j, n, q);
    const std::size_t sj = static_cast<std::size_t>(j);
    t.add({std::to_string(j), str(ev), approx(ev), str(max_abs(res)), zero ? "true" : "false",
           sj < averaging.size() ? approx(averaging[sj]) : Json(nullptr)});
  }
  return t;
}

Table cmd_sample(const Config& cfg) {
  const unsigned n = need_n(cfg, 6);
  Rng rng(cfg.seed);
  const auto bins = mc_orbit_distribution(n, FieldSpec::of_order(cfg.q), cfg.samples, rng);
  Table t{"sample", n, {"k", "count", "exact", "exact_approx", "freq_approx", "se_approx", "z_approx"}, {}};
  for (const OrbitBin& b : bins) {
    const double p = to_double(b.exact);
    t.add({std::to_string(b.k), std::to_string(b.count), str(b.exact), approx(p), approx(b.freq), approx(b.se),
           b.se > 0 ? approx((b.freq - p) / b.se) : Json(nullptr)});
  }
  return t;
}

Table cmd_walk(const Config& cfg) {
  FieldSpec::of_order(cfg.q);
  const std::int64_t q = cfg.q;
  Rng rng(cfg.seed);
  const auto path = markov_walk(q, cfg.k.value_or(0), cfg.steps, rng);
  const std::uint32_t top = std::max(*std::max_element(path.begin(), path.end()), static_cast<std::uint32_t>(cfg.kmax));
  std::vector<std::uint64_t> visits(top + 1, 0);
  for (std::uint32_t k : path) ++visits[k];
  const double total = total_mass_float(q);
  Table t{"walk", std::nullopt, {"k", "visits", "freq_approx", "stationary_approx", "deviation_approx"}, {}};
  for (std::uint32_t k = 0; k <= top; ++k) {
    const double freq = static_cast<double>(visits[k]) / static_cast<double>(path.size());
    const double pi = to_double(orbit_weight(k, q)) / total;
    t.add({std::to_string(k), std::to_string(visits[k]), approx(freq), approx(pi), approx(freq - pi)});
  }
  return t;
}

Table cmd_verify(const Config& cfg) {
  FieldSpec::of_order(cfg.q);
  const auto& names = verify::suite_names();
  require(cfg.suite == "all" || std::find(names.begin(), names.end(), cfg.suite) != names.end(),
          errc::parameter_out_of_range, "unknown suite '" + cfg.suite + "'");
  Table t{"verify", std::nullopt, {"suite", "check", "status", "detail"}, {}};
  const auto results = verify::run(cfg.suite, {cfg.seed, cfg.q});
  std::size_t passed = 0;
  std::string current;
  double suite_seconds = 0;
  auto flush = [&] {
    if (!current.empty()) std::fprintf(stderr, "suite %-10s %8.3f s\n", current.c_str(), suite_seconds);
  };
  for (const auto& r : results) {
    if (r.suite != current) {
      flush();
      current = r.suite;
      suite_seconds = 0;
    }
    suite_seconds += r.seconds;
    passed += r.passed;
    t.failed = t.failed || !r.passed;
    t.add({r.suite, r.check, r.passed ? "PASS" : "FAIL", r.detail});
  }
  flush();
  std::fprintf(stderr, "%s: %zu/%zu checks passed\n", t.failed ? "FAIL" : "PASS", passed, results.size());
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact tables and invariant checks for Grassmannians over F_q"};
  app.require_subcommand(1, 1);
  Config cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--q", cfg.q, "field order")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "64-bit seed")->capture_default_str();
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    sub->add_option("--out", cfg.out, "write to PATH instead of stdout");
  };

  auto* count = app.add_subcommand("count", "closed-form counts and measures on Gr_{2n}^n");
  common(count);
  count->add_option("--n", cfg.n, "half dimension (default 2)");
  count->add_flag("--verify-by-enumeration", cfg.by_enumeration, "cross-check with an exhaustive listing");

  auto* enumerate_cmd = app.add_subcommand("enumerate", "list Gr_{2n}^n with orbit index and first chart");
  common(enumerate_cmd);
  enumerate_cmd->add_option("--n", cfg.n, "half dimension (default 1)");
  enumerate_cmd->add_option("--k", cfg.k, "keep only orbit k");

  auto* measure = app.add_subcommand("measure", "orbit measures and partial sums against the total mass");
  common(measure);
  measure->add_option("--kmax", cfg.kmax)->capture_default_str();

  auto* spectrum = app.add_subcommand("spectrum", "exact eigen-residuals, finite (q-Hahn) or infinite (Δ)");
  common(spectrum);
  spectrum->add_option("--n", cfg.n, "finite truncation (default 4)");
  spectrum->add_flag("--infinite", cfg.infinite, "check Δ on k < K instead");
  spectrum->add_option("--jmax", cfg.jmax)->capture_default_str();
  spectrum->add_option("--K", cfg.K)->capture_default_str();

  auto* sample = app.add_subcommand("sample", "Monte Carlo orbit distribution of uniform subspaces");
  common(sample);
  sample->add_option("--n", cfg.n, "half dimension (default 6)");
  sample->add_option("--samples", cfg.samples)->capture_default_str();

  auto* walk = app.add_subcommand("walk", "simulate the Δ chain and compare with w(k)/Σw");
  common(walk);
  walk->add_option("--steps", cfg.steps)->capture_default_str();
  walk->add_option("--k", cfg.k, "starting orbit (default 0)");
  walk->add_option("--kmax", cfg.kmax, "report at least k = 0..kmax")->capture_default_str();

  auto* verify_cmd = app.add_subcommand("verify", "run invariant suites");
  common(verify_cmd);
  verify_cmd->add_option("--suite", cfg.suite, "suite name or all")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    Table t;
    const auto t0 = std::chrono::steady_clock::now();
    if (count->parsed()) t = cmd_count(cfg);
    else if (enumerate_cmd->parsed()) t = cmd_enumerate(cfg);
    else if (measure->parsed()) t = cmd_measure(cfg);
    else if (spectrum->parsed()) t = cmd_spectrum(cfg);
    else if (sample->parsed()) t = cmd_sample(cfg);
    else if (walk->parsed()) t = cmd_walk(cfg);
    else t = cmd_verify(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::string text = render(t, cfg);
    if (cfg.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream os(cfg.out, std::ios::binary);
      if (!os) {
        std::cerr << "cannot open " << cfg.out << '\n';
        return 2;
      }
      os << text;
    }
    std::fprintf(stderr, "%s: %.3f s\n", t.command.c_str(), secs);
    return t.failed ? 1 : 0;
  } catch (const error& ex) {
    std::cerr << ex.what() << '\n';
    return 2;
  }
}
