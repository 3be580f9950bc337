// summatoria command-line front end. Talks to the library only through the
// C API in summatoria.h.
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "summatoria/summatoria.h"

using nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kCriterionFailed = 1, kConfigError = 2, kResourceError = 3 };

// Carries a library status out of a command so main can map it to an exit code.
struct Failure {
  smt_status status;
  std::string message;
};

void check(smt_status st) {
  if (st != SMT_OK) throw Failure{st, smt_last_error()};
}

int exit_code_for(smt_status st) {
  switch (st) {
    case SMT_ERR_DOMAIN:
    case SMT_ERR_INVALID_ARGUMENT:
    case SMT_ERR_IO: return kConfigError;
    default: return kResourceError;
  }
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using ContextPtr = std::unique_ptr<smt_context, Deleter<smt_context, smt_context_destroy>>;
using TablePtr = std::unique_ptr<smt_table, Deleter<smt_table, smt_table_destroy>>;
using SeriesPtr = std::unique_ptr<smt_series, Deleter<smt_series, smt_series_destroy>>;
using ReportPtr =
    std::unique_ptr<smt_verify_report, Deleter<smt_verify_report, smt_verify_report_destroy>>;

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string value_text(const smt_value& v) {
  return v.is_integer ? std::to_string(v.integer) : real(v.real);
}

ordered_json value_json(const smt_value& v) {
  return v.is_integer ? ordered_json(v.integer) : ordered_json(v.real);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Accepts plain integers and decimal scientific notation such as 1e6 or
// 2.5e3, as long as the value is a whole number.
std::string parse_count(const std::string& text, std::uint64_t& out) {
  if (text.empty() || text.find_first_not_of("0123456789.eE+") != std::string::npos)
    return "expected a positive integer such as 1000000 or 1e6, got '" + text + "'";
  if (text.find_first_of(".eE") == std::string::npos) {
    errno = 0;
    const unsigned long long v = std::strtoull(text.c_str(), nullptr, 10);
    if (errno == ERANGE) return "value out of range: " + text;
    out = v;
    return {};
  }
  char* end = nullptr;
  const long double v = std::strtold(text.c_str(), &end);
  if (end != text.c_str() + text.size() || !(v >= 0) || v > 9.2e18L || v != std::floor(v))
    return "expected a whole number, got '" + text + "'";
  out = static_cast<std::uint64_t>(v);
  return {};
}

struct LadderChoice {
  smt_ladder ladder{SMT_LADDER_GEOMETRIC, 0.0, nullptr, 0};
  std::vector<std::uint64_t> points;

  const smt_ladder* get() {
    ladder.points = points.empty() ? nullptr : points.data();
    ladder.point_count = points.size();
    return &ladder;
  }
};

// "geometric", "all", a ratio > 1, or a comma-separated list of positions.
std::string parse_ladder(const std::string& text, LadderChoice& out) {
  out = {};
  if (text == "geometric") return {};
  if (text == "all") {
    out.ladder.mode = SMT_LADDER_EVERY;
    return {};
  }
  if (text.find(',') != std::string::npos) {
    out.ladder.mode = SMT_LADDER_EXPLICIT;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      std::uint64_t n = 0;
      if (auto err = parse_count(item, n); !err.empty()) return "ladder point: " + err;
      out.points.push_back(n);
    }
    return {};
  }
  char* end = nullptr;
  const double r = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || !(r > 1.0) || !std::isfinite(r))
    return "ladder must be 'all', 'geometric', a ratio > 1 or a comma list, got '" + text + "'";
  out.ladder.mode = SMT_LADDER_RATIO;
  out.ladder.ratio = r;
  return {};
}

struct Options {
  std::string kind_name;
  smt_kind kind = SMT_KIND_MOBIUS;
  std::string limit_text = "1e6";
  std::uint64_t limit = 1'000'000;
  std::string lo_text = "1";
  std::uint64_t lo = 1;
  std::string ladder_text = "geometric";
  LadderChoice ladder;
  std::string phi_text = "log";
  smt_phi phi{};
  std::string output;
  std::string format = "csv";
  std::string cache_dir;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string synthetic;
};

void warn_to_stderr(const char* message, void*) { std::cerr << "warning: " << message << "\n"; }

ContextPtr make_context(const Options& o) {
  smt_context* raw = nullptr;
  check(smt_context_create(&raw));
  ContextPtr ctx(raw);
  check(smt_context_set_threads(ctx.get(), o.threads));
  check(smt_context_set_warning_handler(ctx.get(), warn_to_stderr, nullptr));
  if (!o.cache_dir.empty()) check(smt_context_set_cache_dir(ctx.get(), o.cache_dir.c_str()));
  return ctx;
}

std::vector<std::uint64_t> ladder_of(Options& o) {
  size_t count = 0;
  const smt_status st = smt_ladder_points(o.ladder.get(), o.limit, nullptr, 0, &count);
  if (st != SMT_OK && st != SMT_ERR_RESOURCE) check(st);
  std::vector<std::uint64_t> pts(count);
  check(smt_ladder_points(o.ladder.get(), o.limit, pts.data(), pts.size(), &count));
  return pts;
}

// Test-only series: "constant" is f = 1 (S = Q = n), "sqrt" has S(n) = sqrt(n).
SeriesPtr synthetic_series(Options& o, const smt_ladder* ladder_override = nullptr) {
  LadderChoice saved = o.ladder;
  if (ladder_override) o.ladder.ladder = *ladder_override;
  const auto pts = ladder_of(o);
  o.ladder = saved;
  smt_series* raw = nullptr;
  if (o.synthetic == "constant") {
    std::vector<std::int64_t> s(pts.begin(), pts.end());
    check(smt_series_from_integers(pts.data(), s.data(), s.data(), pts.size(), &raw));
  } else {
    std::vector<double> s;
    for (auto n : pts) s.push_back(std::sqrt(static_cast<double>(n)));
    check(smt_series_from_reals(pts.data(), s.data(), pts.size(), &raw));
  }
  return SeriesPtr(raw);
}

SeriesPtr series_for(const smt_context* ctx, Options& o, const smt_ladder* ladder) {
  if (!o.synthetic.empty()) return synthetic_series(o, ladder);
  smt_series* raw = nullptr;
  check(smt_series_accumulate(ctx, o.kind, o.limit, ladder, &raw));
  return SeriesPtr(raw);
}

std::vector<smt_checkpoint> checkpoints_of(const smt_series* s) {
  int has_kind = 0, is_integer = 0;
  smt_kind kind;
  uint64_t limit = 0;
  size_t count = 0;
  check(smt_series_info(s, &has_kind, &kind, &limit, &count, &is_integer));
  std::vector<smt_checkpoint> out(count);
  for (size_t i = 0; i < count; ++i) check(smt_series_checkpoint(s, i, &out[i]));
  return out;
}

ordered_json kind_json(const Options& o) {
  return o.synthetic.empty() ? ordered_json(o.kind_name) : ordered_json("synthetic-" + o.synthetic);
}

std::string cmd_sieve(Options& o) {
  if (o.lo > o.limit) throw Failure{SMT_ERR_DOMAIN, "--lo must not exceed --limit"};
  auto ctx = make_context(o);
  smt_table* raw = nullptr;
  check(smt_table_sieve_cached(ctx.get(), o.kind, o.lo, o.limit, &raw));
  TablePtr table(raw);
  std::vector<double> values(o.limit - o.lo + 1);
  check(smt_table_values(table.get(), o.lo, values.size(), values.data()));
  const bool integer = o.kind != SMT_KIND_PSI_TERM && o.kind != SMT_KIND_THETA_TERM;

  if (o.format == "json") {
    ordered_json j{{"kind", o.kind_name}, {"lo", o.lo}, {"hi", o.limit}};
    auto& arr = j["values"] = ordered_json::array();
    for (double v : values) arr.push_back(integer ? ordered_json(static_cast<int>(v)) : ordered_json(v));
    return j.dump(2) + "\n";
  }
  std::string out = "k,value\n";
  for (std::size_t i = 0; i < values.size(); ++i)
    out += std::to_string(o.lo + i) + "," +
           (integer ? std::to_string(static_cast<int>(values[i])) : real(values[i])) + "\n";
  return out;
}

std::string cmd_sum(Options& o) {
  auto ctx = make_context(o);
  auto series = series_for(ctx.get(), o, o.ladder.get());
  const auto cps = checkpoints_of(series.get());
  if (o.format == "json") {
    ordered_json j{{"kind", kind_json(o)}, {"limit", o.limit}};
    auto& arr = j["checkpoints"] = ordered_json::array();
    for (const auto& c : cps) arr.push_back({{"n", c.n}, {"S", value_json(c.sum)}});
    return j.dump(2) + "\n";
  }
  std::string out = "n,S\n";
  for (const auto& c : cps) out += std::to_string(c.n) + "," + value_text(c.sum) + "\n";
  return out;
}

std::string cmd_stats(Options& o) {
  auto ctx = make_context(o);
  auto series = series_for(ctx.get(), o, o.ladder.get());
  const auto cps = checkpoints_of(series.get());
  std::vector<smt_moment_report> rows(cps.size());
  for (std::size_t i = 0; i < cps.size(); ++i)
    check(smt_moment_report_at(ctx.get(), series.get(), cps[i].n, &rows[i]));

  std::optional<smt_adjacent_joint> adj;
  if (o.synthetic.empty() && o.kind == SMT_KIND_PRIME_INDICATOR && o.limit >= 5) {
    smt_adjacent_joint a;
    check(smt_prime_adjacent_joint(ctx.get(), o.limit, &a));
    adj = a;
  }

  if (o.format == "json") {
    ordered_json j{{"kind", kind_json(o)}, {"limit", o.limit}};
    auto& arr = j["rows"] = ordered_json::array();
    for (const auto& r : rows)
      arr.push_back({{"n", r.n},
                     {"S", r.sum},
                     {"Q", r.square_sum},
                     {"grid_ratio", r.grid_ratio},
                     {"cov_gap", r.has_covariance_gap ? ordered_json(r.covariance_gap) : ordered_json()},
                     {"F2", r.f_squared},
                     {"diag", r.diag_sum},
                     {"cross", r.cross_sum}});
    if (adj) {
      j["joint"] = adj->joint;
      j["prime_adjacent"] = {{"N", o.limit},
                             {"pairs", adj->pairs},
                             {"first_ones", adj->first_ones},
                             {"second_ones", adj->second_ones},
                             {"joint_ones", adj->joint_ones},
                             {"joint", adj->joint},
                             {"product", adj->product}};
    }
    return j.dump(2) + "\n";
  }

  std::string out;
  if (adj) {
    out += "# prime_adjacent N=" + std::to_string(o.limit) + " pairs=" + std::to_string(adj->pairs) +
           " joint_ones=" + std::to_string(adj->joint_ones) + "\n";
    out += "# joint=" + real(adj->joint) + " product=" + real(adj->product) + "\n";
  }
  out += "n,S,Q,grid_ratio,cov_gap,F2,diag,cross\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + "," + std::to_string(r.sum) + "," + std::to_string(r.square_sum) +
           "," + real(r.grid_ratio) + "," + (r.has_covariance_gap ? real(r.covariance_gap) : "") +
           "," + std::to_string(r.f_squared) + "," + std::to_string(r.diag_sum) + "," +
           std::to_string(r.cross_sum) + "\n";
  }
  return out;
}

constexpr std::uint64_t kFullScanLimit = 1'000'000;

std::string cmd_scaling(Options& o) {
  auto ctx = make_context(o);
  auto series = series_for(ctx.get(), o, o.ladder.get());
  std::vector<smt_sample> samples;
  for (const auto& c : checkpoints_of(series.get()))
    samples.push_back({c.n, std::fabs(c.sum.real)});
  smt_exponent_fit fit;
  check(smt_fit_exponent(samples.data(), samples.size(), &fit));

  // Envelope and coverage use every n up to the full-scan limit and the
  // ladder beyond it.
  const bool full = o.limit <= kFullScanLimit;
  SeriesPtr scan;
  if (full) {
    const smt_ladder every{SMT_LADDER_EVERY, 0.0, nullptr, 0};
    scan = series_for(ctx.get(), o, &every);
  }
  const smt_series* dev = full ? scan.get() : series.get();
  double max_ratio = 0;
  uint64_t argmax = 0;
  check(smt_normalized_envelope(dev, 0.0, &max_ratio, &argmax));
  smt_coverage cov{};
  const bool have_coverage = o.limit >= 2;
  if (have_coverage) check(smt_bound_coverage(dev, 0.0, &o.phi, 2, &cov));

  char phi_name[64];
  check(smt_phi_name(&o.phi, phi_name, sizeof phi_name));
  const std::string scope = full ? "all" : "ladder";

  if (o.format == "json") {
    ordered_json j{{"kind", kind_json(o)},
                   {"limit", o.limit},
                   {"alpha", fit.alpha},
                   {"log_c", fit.log_c},
                   {"r_squared", fit.r_squared},
                   {"samples_used", fit.samples_used},
                   {"samples_dropped", fit.samples_dropped},
                   {"residual_max", fit.residual_max},
                   {"max_ratio", max_ratio},
                   {"argmax_n", argmax},
                   {"phi", phi_name},
                   {"coverage_fraction", have_coverage ? ordered_json(cov.fraction) : ordered_json()},
                   {"coverage_satisfied", cov.satisfied},
                   {"coverage_total", cov.total},
                   {"scan", scope}};
    return j.dump(2) + "\n";
  }
  return "kind,limit,alpha,log_c,r_squared,samples_used,samples_dropped,residual_max,max_ratio,"
         "argmax_n,phi,coverage_fraction,coverage_satisfied,coverage_total,scan\n" +
         kind_json(o).get<std::string>() + "," + std::to_string(o.limit) + "," + real(fit.alpha) +
         "," + real(fit.log_c) + "," + real(fit.r_squared) + "," +
         std::to_string(fit.samples_used) + "," + std::to_string(fit.samples_dropped) + "," +
         real(fit.residual_max) + "," + real(max_ratio) + "," + std::to_string(argmax) + "," +
         phi_name + "," + (have_coverage ? real(cov.fraction) : "") + "," +
         std::to_string(cov.satisfied) + "," + std::to_string(cov.total) + "," + scope + "\n";
}

std::string cmd_verify(Options& o, bool& passed) {
  auto ctx = make_context(o);
  smt_verify_report* raw = nullptr;
  check(smt_verify_run(ctx.get(), o.limit, &raw));
  ReportPtr report(raw);
  passed = smt_verify_report_passed(report.get()) != 0;

  std::vector<smt_criterion> crit(smt_verify_report_count(report.get()));
  for (size_t i = 0; i < crit.size(); ++i)
    check(smt_verify_report_criterion(report.get(), i, &crit[i]));

  // Human summary and timings go to stderr so stdout stays deterministic.
  for (const auto& c : crit) {
    char line[96];
    std::snprintf(line, sizeof line, "%-4s %2d %-28s %8.2f s  ",
                  c.status == SMT_CRITERION_PASS ? "PASS" : c.status == SMT_CRITERION_FAIL ? "FAIL" : "SKIP",
                  c.id, c.name, c.seconds);
    std::cerr << line << c.measured << "\n";
  }
  std::cerr << (passed ? "all criteria passed" : "some criteria FAILED") << " (limit "
            << o.limit << ", " << real(smt_verify_report_seconds(report.get())) << " s)\n";

  auto status_text = [](smt_criterion_status s) {
    return s == SMT_CRITERION_PASS ? "PASS" : s == SMT_CRITERION_FAIL ? "FAIL" : "SKIP";
  };
  if (o.format == "json") {
    ordered_json j{{"limit", o.limit}, {"all_passed", passed}};
    auto& arr = j["criteria"] = ordered_json::array();
    for (const auto& c : crit)
      arr.push_back({{"id", c.id},
                     {"name", c.name},
                     {"status", status_text(c.status)},
                     {"measured", c.measured},
                     {"threshold", c.threshold}});
    return j.dump(2) + "\n";
  }
  std::string out = "id,name,status,measured,threshold\n";
  for (const auto& c : crit)
    out += std::to_string(c.id) + "," + csv_field(c.name) + "," + status_text(c.status) + "," +
           csv_field(c.measured) + "," + csv_field(c.threshold) + "\n";
  return out;
}

void emit(const Options& o, const std::string& text) {
  if (o.output.empty() || o.output == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(o.output, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Failure{SMT_ERR_IO, "cannot write " + o.output};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Summatory arithmetic functions: sieving, moments, scaling and verification."};
  app.set_version_flag("--version", smt_version());
  app.require_subcommand(1);

  Options o;
  if (const char* env = std::getenv("SUMMATORIA_CACHE")) o.cache_dir = env;

  const auto add_common = [&](CLI::App* sub, bool needs_kind) {
    auto* k = sub->add_option("--kind", o.kind_name, "mobius|liouville|prime-indicator|psi|theta");
    if (needs_kind) k->required();
    sub->add_option("--limit", o.limit_text, "Upper bound N (integer or e-notation such as 1e6)")
        ->capture_default_str();
    sub->add_option("--output,-o", o.output, "Write the report here instead of stdout");
    sub->add_option("--format", o.format, "Report format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--cache-dir", o.cache_dir,
                    "Sieve cache directory (default: $SUMMATORIA_CACHE; no caching when unset)");
    sub->add_option("--threads", o.threads, "Worker threads (default: available cores)")
        ->check(CLI::Range(1u, 1024u))
        ->capture_default_str();
  };
  const auto add_series = [&](CLI::App* sub) {
    sub->add_option("--ladder", o.ladder_text,
                    "Checkpoints: geometric (ceil(2^(j/2))), all, a ratio > 1, or a comma list")
        ->capture_default_str();
    sub->add_option("--synthetic", o.synthetic, "Test-only synthetic series")
        ->check(CLI::IsMember({"constant", "sqrt"}))
        ->group("");
  };

  auto* sieve = app.add_subcommand("sieve", "Emit f(k) for k in [lo, limit]");
  add_common(sieve, true);
  sieve->add_option("--lo", o.lo_text, "First k")->capture_default_str();
  auto* sum = app.add_subcommand("sum", "Summatory values S(n) at checkpoints");
  add_common(sum, false);
  add_series(sum);
  auto* stats = app.add_subcommand("stats", "Moment statistics at checkpoints");
  add_common(stats, false);
  add_series(stats);
  auto* scaling = app.add_subcommand("scaling", "Growth exponent, sqrt(n) envelope and bound coverage");
  add_common(scaling, false);
  add_series(scaling);
  scaling->add_option("--phi", o.phi_text, "log|log2|loglog|const[:c]|pow:e")->capture_default_str();
  auto* verify = app.add_subcommand("verify", "Run the acceptance checks");
  add_common(verify, false);

  try {
    app.parse(argc, argv);
    const auto config_error = [](const std::string& what) { throw CLI::ValidationError(what); };
    auto* cmd = app.get_subcommands().front();
    const bool series_cmd = cmd == sum || cmd == stats || cmd == scaling;
    if (!o.kind_name.empty()) {
      if (smt_kind_from_name(o.kind_name.c_str(), &o.kind) != SMT_OK)
        config_error("--kind: unknown kind '" + o.kind_name + "'");
    } else if (series_cmd && o.synthetic.empty()) {
      config_error("--kind is required");
    }
    if (auto err = parse_count(o.limit_text, o.limit); !err.empty()) config_error("--limit: " + err);
    if (o.limit < 1) config_error("--limit must be >= 1");
    if (auto err = parse_count(o.lo_text, o.lo); !err.empty()) config_error("--lo: " + err);
    if (o.lo < 1) config_error("--lo must be >= 1");
    if (auto err = parse_ladder(o.ladder_text, o.ladder); !err.empty()) config_error("--ladder: " + err);
    if (smt_phi_parse(o.phi_text.c_str(), &o.phi) != SMT_OK)
      config_error("--phi: unknown growth function '" + o.phi_text + "'");
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    auto* cmd = app.get_subcommands().front();
    bool passed = true;
    std::string text;
    if (cmd == sieve) text = cmd_sieve(o);
    else if (cmd == sum) text = cmd_sum(o);
    else if (cmd == stats) text = cmd_stats(o);
    else if (cmd == scaling) text = cmd_scaling(o);
    else text = cmd_verify(o, passed);
    emit(o, text);
    return passed ? kOk : kCriterionFailed;
  } catch (const Failure& f) {
    std::cerr << "error (" << smt_status_name(f.status) << "): " << f.message << "\n";
    return exit_code_for(f.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kResourceError;
  }
}
