#include "summatoria/summatoria.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <optional>
#include <string>

#include "summatoria/arithmetic.hpp"
#include "summatoria/cache.hpp"
#include "summatoria/error.hpp"
#include "summatoria/moments.hpp"
#include "summatoria/scaling.hpp"
#include "summatoria/series.hpp"
#include "summatoria/verify.hpp"

using namespace summatoria;

struct smt_context {
  ComputeConfig cfg;
  std::optional<std::filesystem::path> cache_dir;
  smt_warning_fn warn_fn = nullptr;
  void* warn_data = nullptr;

  cache::Warn warner() const {
    if (!warn_fn) return {};
    return [fn = warn_fn, data = warn_data](const std::string& msg) { fn(msg.c_str(), data); };
  }
};

struct smt_table {
  ValueTable table;
};

struct smt_series {
  SummatorySeries series;
};

struct smt_verify_report {
  VerifyReport report;
};

namespace {

thread_local std::string g_last_error;

smt_status fail(smt_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

smt_status map_error(const Error& e) {
  switch (e.code()) {
    case ErrorCode::Domain: return fail(SMT_ERR_DOMAIN, e.what());
    case ErrorCode::Resource: return fail(SMT_ERR_RESOURCE, e.what());
    case ErrorCode::Integrity: return fail(SMT_ERR_INTEGRITY, e.what());
    case ErrorCode::Corruption: return fail(SMT_ERR_CORRUPTION, e.what());
    case ErrorCode::Io: return fail(SMT_ERR_IO, e.what());
  }
  return fail(SMT_ERR_INTERNAL, e.what());
}

// Runs fn, translating exceptions into status codes.
template <class Fn>
smt_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    g_last_error.clear();
    return SMT_OK;
  } catch (const Error& e) {
    return map_error(e);
  } catch (const std::bad_alloc&) {
    return fail(SMT_ERR_RESOURCE, "out of memory");
  } catch (const std::exception& e) {
    return fail(SMT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SMT_ERR_INTERNAL, "unknown error");
  }
}

smt_status null_argument(const char* what) {
  return fail(SMT_ERR_INVALID_ARGUMENT, std::string("null argument: ") + what);
}

#define SMT_REQUIRE(ptr) \
  do {                   \
    if (!(ptr)) return null_argument(#ptr); \
  } while (0)

FunctionKind to_kind(smt_kind k) {
  const auto kind = kind_from_tag(static_cast<std::uint8_t>(k));
  if (!kind) throw_domain("unknown kind " + std::to_string(static_cast<int>(k)));
  return *kind;
}

const ComputeConfig& config_of(const smt_context* ctx) {
  static const ComputeConfig defaults;
  return ctx ? ctx->cfg : defaults;
}

smt_value to_c(const SumValue& v) {
  smt_value out{};
  if (const auto* i = std::get_if<std::int64_t>(&v)) {
    out.is_integer = 1;
    out.integer = *i;
  }
  out.real = to_real(v);
  return out;
}

SlowGrowthSpec from_c(const smt_phi& phi) {
  if (phi.function < SMT_PHI_CONSTANT || phi.function > SMT_PHI_POWER)
    throw_domain("unknown phi function");
  return {static_cast<GrowthFunction>(phi.function), phi.parameter, phi.epsilon};
}

LadderSpec from_c(const smt_ladder* ladder) {
  if (!ladder) return LadderSpec::geometric();
  switch (ladder->mode) {
    case SMT_LADDER_GEOMETRIC: return LadderSpec::geometric();
    case SMT_LADDER_RATIO: return LadderSpec::with_ratio(ladder->ratio);
    case SMT_LADDER_EVERY: return LadderSpec::every();
    case SMT_LADDER_EXPLICIT:
      if (ladder->point_count > 0 && !ladder->points) throw_domain("ladder points missing");
      return LadderSpec::explicit_points(
          std::vector<std::uint64_t>(ladder->points, ladder->points + ladder->point_count));
  }
  throw_domain("unknown ladder mode");
}

}  // namespace

extern "C" {

const char* smt_version(void) { return "1.0.0"; }

const char* smt_last_error(void) { return g_last_error.c_str(); }

const char* smt_status_name(smt_status status) {
  switch (status) {
    case SMT_OK: return "ok";
    case SMT_ERR_DOMAIN: return "domain";
    case SMT_ERR_RESOURCE: return "resource";
    case SMT_ERR_INTEGRITY: return "integrity";
    case SMT_ERR_CORRUPTION: return "corruption";
    case SMT_ERR_IO: return "io";
    case SMT_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case SMT_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

smt_status smt_kind_from_name(const char* name, smt_kind* out) {
  SMT_REQUIRE(name);
  SMT_REQUIRE(out);
  const auto kind = parse_kind(name);
  if (!kind) return fail(SMT_ERR_DOMAIN, std::string("unknown kind '") + name + "'");
  *out = static_cast<smt_kind>(*kind);
  return SMT_OK;
}

const char* smt_kind_name(smt_kind kind) {
  const auto k = kind_from_tag(static_cast<std::uint8_t>(kind));
  return k ? kind_name(*k).data() : "unknown";
}

smt_status smt_context_create(smt_context** out) {
  SMT_REQUIRE(out);
  return guarded([&] { *out = new smt_context{}; });
}

void smt_context_destroy(smt_context* ctx) { delete ctx; }

smt_status smt_context_set_threads(smt_context* ctx, unsigned threads) {
  SMT_REQUIRE(ctx);
  ctx->cfg.threads = threads == 0 ? 1 : threads;
  return SMT_OK;
}

smt_status smt_context_set_max_segment(smt_context* ctx, uint64_t entries) {
  SMT_REQUIRE(ctx);
  if (entries == 0) return fail(SMT_ERR_DOMAIN, "maximum segment size must be >= 1");
  ctx->cfg.max_segment = entries;
  return SMT_OK;
}

smt_status smt_context_set_max_limit(smt_context* ctx, uint64_t limit) {
  SMT_REQUIRE(ctx);
  if (limit == 0) return fail(SMT_ERR_DOMAIN, "maximum limit must be >= 1");
  ctx->cfg.max_limit = limit;
  return SMT_OK;
}

smt_status smt_context_set_cache_dir(smt_context* ctx, const char* dir) {
  SMT_REQUIRE(ctx);
  return guarded([&] {
    if (dir && *dir)
      ctx->cache_dir = std::filesystem::path(dir);
    else
      ctx->cache_dir.reset();
  });
}

smt_status smt_context_set_warning_handler(smt_context* ctx, smt_warning_fn fn, void* user_data) {
  SMT_REQUIRE(ctx);
  ctx->warn_fn = fn;
  ctx->warn_data = user_data;
  return SMT_OK;
}

smt_status smt_table_sieve(const smt_context* ctx, smt_kind kind, uint64_t lo, uint64_t hi,
                           smt_table** out) {
  SMT_REQUIRE(out);
  return guarded([&] { *out = new smt_table{sieve_values(to_kind(kind), lo, hi, config_of(ctx))}; });
}

smt_status smt_table_sieve_cached(const smt_context* ctx, smt_kind kind, uint64_t lo,
                                  uint64_t hi, smt_table** out) {
  SMT_REQUIRE(out);
  if (!ctx || !ctx->cache_dir) return smt_table_sieve(ctx, kind, lo, hi, out);
  return guarded([&] {
    *out = new smt_table{
        cache::table_through_cache(*ctx->cache_dir, to_kind(kind), lo, hi, ctx->cfg, ctx->warner())};
  });
}

void smt_table_destroy(smt_table* table) { delete table; }

smt_status smt_table_info(const smt_table* table, smt_kind* kind, uint64_t* lo, uint64_t* hi) {
  SMT_REQUIRE(table);
  if (kind) *kind = static_cast<smt_kind>(table->table.kind());
  if (lo) *lo = table->table.lo();
  if (hi) *hi = table->table.hi();
  return SMT_OK;
}

smt_status smt_table_values(const smt_table* table, uint64_t from, size_t count, double* out) {
  SMT_REQUIRE(table);
  if (count == 0) return SMT_OK;
  SMT_REQUIRE(out);
  const ValueTable& t = table->table;
  if (from < t.lo() || from > t.hi() || count - 1 > t.hi() - from)
    return fail(SMT_ERR_DOMAIN, "requested range outside table [lo, hi]");
  for (size_t i = 0; i < count; ++i) out[i] = t[from + i];
  return SMT_OK;
}

smt_status smt_factor(uint64_t n, smt_prime_power* out, size_t cap, size_t* count) {
  SMT_REQUIRE(count);
  return guarded([&] {
    const Factorization f = factor_oracle(n);
    *count = f.factors.size();
    if (f.factors.size() > cap || (cap > 0 && !out))
      throw_resource("output buffer holds " + std::to_string(cap) + " entries, need " +
                     std::to_string(f.factors.size()));
    for (size_t i = 0; i < f.factors.size(); ++i)
      out[i] = {f.factors[i].prime, f.factors[i].multiplicity};
  });
}

smt_status smt_pointwise(smt_kind kind, uint64_t n, double* out) {
  SMT_REQUIRE(out);
  return guarded([&] { *out = pointwise_from_factorization(to_kind(kind), factor_oracle(n)); });
}

smt_status smt_ladder_points(const smt_ladder* ladder, uint64_t limit, uint64_t* out,
                             size_t cap, size_t* count) {
  SMT_REQUIRE(count);
  return guarded([&] {
    const auto pts = ladder_points(from_c(ladder), limit);
    *count = pts.size();
    if (pts.size() > cap) throw_resource("ladder has " + std::to_string(pts.size()) + " points");
    if (!pts.empty()) {
      if (!out) throw_domain("output buffer missing");
      std::copy(pts.begin(), pts.end(), out);
    }
  });
}

smt_status smt_series_accumulate(const smt_context* ctx, smt_kind kind, uint64_t limit,
                                 const smt_ladder* ladder, smt_series** out) {
  SMT_REQUIRE(out);
  return guarded([&] {
    *out = new smt_series{accumulate(to_kind(kind), limit, from_c(ladder), config_of(ctx))};
  });
}

smt_status smt_series_from_integers(const uint64_t* n, const int64_t* sums,
                                    const int64_t* square_sums, size_t count, smt_series** out) {
  SMT_REQUIRE(out);
  if (count > 0) {
    SMT_REQUIRE(n);
    SMT_REQUIRE(sums);
  }
  return guarded([&] {
    std::vector<Checkpoint> cps;
    cps.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      Checkpoint c{n[i], sums[i], std::nullopt};
      if (square_sums) c.square_sum = square_sums[i];
      cps.push_back(std::move(c));
    }
    const std::uint64_t limit = count ? n[count - 1] : 0;
    *out = new smt_series{SummatorySeries::make(std::nullopt, limit, std::move(cps))};
  });
}

smt_status smt_series_from_reals(const uint64_t* n, const double* sums, size_t count,
                                 smt_series** out) {
  SMT_REQUIRE(out);
  if (count > 0) {
    SMT_REQUIRE(n);
    SMT_REQUIRE(sums);
  }
  return guarded([&] {
    std::vector<Checkpoint> cps;
    cps.reserve(count);
    for (size_t i = 0; i < count; ++i) cps.push_back({n[i], sums[i], std::nullopt});
    const std::uint64_t limit = count ? n[count - 1] : 0;
    *out = new smt_series{SummatorySeries::make(std::nullopt, limit, std::move(cps))};
  });
}

void smt_series_destroy(smt_series* series) { delete series; }

smt_status smt_series_info(const smt_series* series, int* has_kind, smt_kind* kind,
                           uint64_t* limit, size_t* checkpoint_count, int* is_integer) {
  SMT_REQUIRE(series);
  const SummatorySeries& s = series->series;
  if (has_kind) *has_kind = s.kind().has_value();
  if (kind && s.kind()) *kind = static_cast<smt_kind>(*s.kind());
  if (limit) *limit = s.limit();
  if (checkpoint_count) *checkpoint_count = s.checkpoints().size();
  if (is_integer) *is_integer = s.integer();
  return SMT_OK;
}

smt_status smt_series_checkpoint(const smt_series* series, size_t index, smt_checkpoint* out) {
  SMT_REQUIRE(series);
  SMT_REQUIRE(out);
  const auto cps = series->series.checkpoints();
  if (index >= cps.size()) return fail(SMT_ERR_DOMAIN, "checkpoint index out of range");
  out->n = cps[index].n;
  out->sum = to_c(cps[index].sum);
  return SMT_OK;
}

smt_status smt_series_value_at(const smt_context* ctx, const smt_series* series, uint64_t n,
                               smt_value* out) {
  SMT_REQUIRE(series);
  SMT_REQUIRE(out);
  return guarded([&] { *out = to_c(value_at(series->series, n, config_of(ctx))); });
}

smt_status smt_moment_report_at(const smt_context* ctx, const smt_series* series, uint64_t n,
                                smt_moment_report* out) {
  SMT_REQUIRE(series);
  SMT_REQUIRE(out);
  return guarded([&] {
    const MomentReport r = moment_report(series->series, n, config_of(ctx));
    *out = {r.n,
            r.sum,
            r.square_sum,
            r.grid_ratio,
            r.covariance_gap.has_value(),
            r.covariance_gap.value_or(std::numeric_limits<double>::quiet_NaN()),
            r.decomposition.f_squared,
            r.decomposition.diag_sum,
            r.decomposition.cross_sum};
  });
}

smt_status smt_grid_sum_ratio(const smt_context* ctx, const smt_series* series, uint64_t n,
                              double* out) {
  SMT_REQUIRE(series);
  SMT_REQUIRE(out);
  return guarded([&] { *out = grid_sum_ratio(series->series, n, config_of(ctx)); });
}

smt_status smt_covariance_gap(const smt_context* ctx, const smt_series* series, uint64_t n,
                              double* out) {
  SMT_REQUIRE(series);
  SMT_REQUIRE(out);
  return guarded([&] { *out = covariance_gap(series->series, n, config_of(ctx)); });
}

smt_status smt_covariance_gap_exact(int64_t sum, int64_t square_sum, uint64_t n,
                                    int64_t* numerator, int64_t* denominator) {
  SMT_REQUIRE(numerator);
  SMT_REQUIRE(denominator);
  return guarded([&] {
    const ExactRatio r = covariance_gap_exact(sum, square_sum, n);
    constexpr auto hi = static_cast<ExactRatio::wide>(std::numeric_limits<int64_t>::max());
    if (r.num > hi || r.num < -hi || r.den > hi)
      throw_resource("covariance gap fraction does not fit in 64 bits");
    *numerator = static_cast<int64_t>(r.num);
    *denominator = static_cast<int64_t>(r.den);
  });
}

smt_status smt_parity_counts_of(const smt_table* table, uint64_t n, smt_parity_counts* out) {
  SMT_REQUIRE(table);
  SMT_REQUIRE(out);
  return guarded([&] {
    const ParityCounts c = parity_counts(table->table, n);
    *out = {c.n, c.plus, c.minus, c.zero};
  });
}

smt_status smt_pair_product_counts(const smt_parity_counts* counts, smt_pair_counts* out) {
  SMT_REQUIRE(counts);
  SMT_REQUIRE(out);
  const auto p = pair_product_counts({counts->n, counts->plus, counts->minus, counts->zero});
  *out = {p.plus_plus, p.minus_minus, p.plus_minus, p.minus_plus};
  return SMT_OK;
}

smt_status smt_lag_covariance_of(const smt_table* table, uint64_t lag, uint64_t lo, uint64_t hi,
                                 smt_lag_covariance* out) {
  SMT_REQUIRE(table);
  SMT_REQUIRE(out);
  return guarded([&] {
    const LagCovariance c = lag_covariance(table->table, lag, lo, hi);
    *out = {c.lag, c.lo, c.hi, c.pairs, c.cov, c.corr};
  });
}

smt_status smt_prime_adjacent_joint(const smt_context* ctx, uint64_t N, smt_adjacent_joint* out) {
  SMT_REQUIRE(out);
  return guarded([&] {
    const auto j = prime_adjacent_joint(N, config_of(ctx));
    *out = {j.pairs, j.first_ones, j.second_ones, j.joint_ones, j.joint, j.product};
  });
}

smt_status smt_fit_exponent(const smt_sample* samples, size_t count, smt_exponent_fit* out) {
  SMT_REQUIRE(out);
  if (count > 0) SMT_REQUIRE(samples);
  return guarded([&] {
    std::vector<ExponentSample> xs(count);
    for (size_t i = 0; i < count; ++i) xs[i] = {samples[i].n, samples[i].magnitude};
    const ExponentFit f = fit_exponent(xs);
    *out = {f.alpha, f.log_c, f.r_squared, f.samples_used, f.samples_dropped, f.residual_max};
  });
}

smt_status smt_phi_parse(const char* name, smt_phi* out) {
  SMT_REQUIRE(name);
  SMT_REQUIRE(out);
  const auto spec = SlowGrowthSpec::parse(name);
  if (!spec) return fail(SMT_ERR_DOMAIN, std::string("unknown phi '") + name + "'");
  *out = {static_cast<smt_phi_function>(spec->function), spec->parameter, spec->epsilon};
  return SMT_OK;
}

smt_status smt_phi_name(const smt_phi* phi, char* buf, size_t cap) {
  SMT_REQUIRE(phi);
  SMT_REQUIRE(buf);
  if (cap == 0) return fail(SMT_ERR_DOMAIN, "buffer capacity must be >= 1");
  return guarded([&] {
    const std::string name = from_c(*phi).name();
    const size_t len = std::min(name.size(), cap - 1);
    std::memcpy(buf, name.data(), len);
    buf[len] = '\0';
  });
}

smt_status smt_phi_eval(const smt_phi* phi, double n, double* out) {
  SMT_REQUIRE(phi);
  SMT_REQUIRE(out);
  return guarded([&] { *out = from_c(*phi)(n); });
}

smt_status smt_slow_growth_check(const smt_phi* phi, uint64_t lo, uint64_t hi, int* holds) {
  SMT_REQUIRE(phi);
  SMT_REQUIRE(holds);
  return guarded([&] { *holds = slow_growth_check(from_c(*phi), lo, hi) ? 1 : 0; });
}

smt_status smt_normalized_envelope(const smt_series* series, double m, double* max_ratio,
                                   uint64_t* argmax_n) {
  SMT_REQUIRE(series);
  SMT_REQUIRE(max_ratio);
  SMT_REQUIRE(argmax_n);
  return guarded([&] {
    const Envelope env = normalized_envelope(deviation_series(series->series, MeanModel{m}));
    *max_ratio = env.max_ratio;
    *argmax_n = env.argmax_n;
  });
}

smt_status smt_bound_coverage(const smt_series* series, double m, const smt_phi* phi,
                              uint64_t from_n, smt_coverage* out) {
  SMT_REQUIRE(series);
  SMT_REQUIRE(phi);
  SMT_REQUIRE(out);
  return guarded([&] {
    const auto rep = chebyshev_bound_coverage(deviation_series(series->series, MeanModel{m}),
                                              from_c(*phi), from_n);
    *out = {rep.satisfied, rep.total, rep.fraction};
  });
}

smt_status smt_cache_save_table(const char* path, const smt_table* table) {
  SMT_REQUIRE(path);
  SMT_REQUIRE(table);
  return guarded([&] { cache::save(path, table->table); });
}

smt_status smt_cache_save_series(const char* path, const smt_series* series) {
  SMT_REQUIRE(path);
  SMT_REQUIRE(series);
  return guarded([&] { cache::save(path, series->series); });
}

smt_status smt_cache_load(const char* path, smt_payload* payload, smt_table** table,
                          smt_series** series) {
  SMT_REQUIRE(path);
  SMT_REQUIRE(payload);
  SMT_REQUIRE(table);
  SMT_REQUIRE(series);
  *table = nullptr;
  *series = nullptr;
  return guarded([&] {
    auto artifact = cache::load(path);
    if (auto* t = std::get_if<ValueTable>(&artifact)) {
      *payload = SMT_PAYLOAD_TABLE;
      *table = new smt_table{std::move(*t)};
    } else {
      *payload = SMT_PAYLOAD_SERIES;
      *series = new smt_series{std::move(std::get<SummatorySeries>(artifact))};
    }
  });
}

smt_status smt_verify_run(const smt_context* ctx, uint64_t limit, smt_verify_report** out) {
  SMT_REQUIRE(out);
  return guarded([&] {
    VerifyOptions opts;
    opts.limit = limit;
    opts.cfg = config_of(ctx);
    if (ctx) {
      opts.cache_dir = ctx->cache_dir;
      opts.warn = ctx->warner();
    }
    *out = new smt_verify_report{run_verification(opts)};
  });
}

void smt_verify_report_destroy(smt_verify_report* report) { delete report; }

size_t smt_verify_report_count(const smt_verify_report* report) {
  return report ? report->report.criteria.size() : 0;
}

smt_status smt_verify_report_criterion(const smt_verify_report* report, size_t index,
                                       smt_criterion* out) {
  SMT_REQUIRE(report);
  SMT_REQUIRE(out);
  const auto& cs = report->report.criteria;
  if (index >= cs.size()) return fail(SMT_ERR_DOMAIN, "criterion index out of range");
  const CriterionResult& c = cs[index];
  *out = {c.id, c.name.c_str(), static_cast<smt_criterion_status>(c.status), c.measured.c_str(),
          c.threshold.c_str(), c.seconds};
  return SMT_OK;
}

int smt_verify_report_passed(const smt_verify_report* report) {
  return report && report->report.all_passed() ? 1 : 0;
}

double smt_verify_report_seconds(const smt_verify_report* report) {
  return report ? report->report.seconds : 0.0;
}

}  // extern "C"
