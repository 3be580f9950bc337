#include "summatoria/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "summatoria/arithmetic.hpp"
#include "summatoria/cache.hpp"
#include "summatoria/error.hpp"
#include "summatoria/moments.hpp"
#include "summatoria/scaling.hpp"
#include "summatoria/series.hpp"

namespace summatoria {

const char* status_name(CriterionStatus s) noexcept {
  switch (s) {
    case CriterionStatus::Pass: return "PASS";
    case CriterionStatus::Fail: return "FAIL";
    case CriterionStatus::Skip: return "SKIP";
  }
  return "?";
}

bool VerifyReport::all_passed() const noexcept {
  for (const auto& c : criteria)
    if (c.status == CriterionStatus::Fail) return false;
  return true;
}

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kReference = 1'000'000;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

CriterionStatus pass_if(bool ok) { return ok ? CriterionStatus::Pass : CriterionStatus::Fail; }

// Exact prefix sums S(n), Q(n) for n = 0..limit from a table over [1, limit].
struct Prefix {
  std::vector<std::int64_t> s, q;
  explicit Prefix(const ValueTable& t) : s(t.size() + 1, 0), q(t.size() + 1, 0) {
    const auto v = t.ints();
    for (std::size_t i = 0; i < v.size(); ++i) {
      s[i + 1] = s[i] + v[i];
      q[i + 1] = q[i] + v[i] * v[i];
    }
  }
};

SummatorySeries every_n_series(FunctionKind kind, const Prefix& p) {
  std::vector<Checkpoint> cps;
  cps.reserve(p.s.size() - 1);
  for (std::uint64_t n = 1; n < p.s.size(); ++n) cps.push_back({n, p.s[n], p.q[n]});
  return SummatorySeries::make(kind, p.s.size() - 1, std::move(cps));
}

struct Context {
  const VerifyOptions& opts;
  std::uint64_t limit;
  ValueTable mobius, liouville, prime;
  Prefix mobius_prefix, liouville_prefix;
};

ValueTable table_for(const VerifyOptions& opts, FunctionKind kind) {
  if (opts.cache_dir)
    return cache::table_through_cache(*opts.cache_dir, kind, 1, opts.limit, opts.cfg, opts.warn);
  return sieve_values(kind, 1, opts.limit, opts.cfg);
}

CriterionResult oracle_equivalence(const Context& ctx) {
  CriterionResult r{1, "oracle_equivalence", {}, {}, "mismatches == 0 for n <= min(limit, 1e5)"};
  const std::uint64_t top = std::min<std::uint64_t>(ctx.limit, 100'000);
  std::uint64_t mismatches = 0;
  for (FunctionKind kind : kAllKinds) {
    const ValueTable t = sieve_values(kind, 1, top, ctx.opts.cfg);
    for (std::uint64_t n = 1; n <= top; ++n)
      if (t[n] != pointwise_from_factorization(kind, factor_oracle(n))) ++mismatches;
  }
  r.status = pass_if(mismatches == 0);
  r.measured = "mismatches=" + std::to_string(mismatches) + " over 5 kinds x " + std::to_string(top);
  return r;
}

CriterionResult algebraic_identities(const Context& ctx) {
  CriterionResult r{2, "algebraic_identities", {}, {}, "all identities exact at every ladder point"};
  std::uint64_t checks = 0, failures = 0;
  for (const ValueTable* t : {&ctx.mobius, &ctx.liouville}) {
    const SummatorySeries series = accumulate(t->kind(), ctx.limit, LadderSpec::geometric(), ctx.opts.cfg);
    for (const auto& c : series.checkpoints()) {
      const auto d = second_moment_decomposition(series, c.n, ctx.opts.cfg);
      const auto pc = parity_counts(*t, c.n);
      const auto pairs = pair_product_counts(pc);
      const auto s = std::get<std::int64_t>(c.sum);
      const auto q = std::get<std::int64_t>(square_sum_at(series, c.n, ctx.opts.cfg));
      const std::uint64_t nonzero = pc.plus + pc.minus;
      const bool ok = d.f_squared == d.diag_sum + d.cross_sum &&
                      s == static_cast<std::int64_t>(pc.plus) - static_cast<std::int64_t>(pc.minus) &&
                      q == static_cast<std::int64_t>(nonzero) &&
                      pairs.plus_plus + pairs.minus_minus + pairs.plus_minus + pairs.minus_plus ==
                          nonzero * nonzero;
      ++checks;
      if (!ok) ++failures;
    }
  }
  r.status = pass_if(failures == 0);
  r.measured = "failures=" + std::to_string(failures) + " of " + std::to_string(checks) + " ladder points";
  return r;
}

CriterionResult grid_ratio_decay(const Context& ctx) {
  CriterionResult r{3, "grid_ratio_decay", {}, {},
                    "ratio(1e6) <= 1e-3 and ratio(1e3)/ratio(1e6) >= 10"};
  if (ctx.limit < kReference) {
    r.status = CriterionStatus::Skip;
    r.measured = "requires limit >= 1e6";
    return r;
  }
  bool ok = true;
  std::ostringstream m;
  for (const auto* p : {&ctx.mobius_prefix, &ctx.liouville_prefix}) {
    const double big = std::pow(static_cast<double>(p->s[kReference]), 2) / 1e12;
    const double small = std::pow(static_cast<double>(p->s[1000]), 2) / 1e6;
    const bool factor_ok = big == 0.0 ? small >= 0.0 : small / big >= 10.0;
    ok = ok && big <= 1e-3 && factor_ok;
    m << (p == &ctx.mobius_prefix ? "mobius" : " liouville") << ": ratio(1e6)=" << num(big)
      << " ratio(1e3)=" << num(small);
  }
  r.status = pass_if(ok);
  r.measured = m.str();
  return r;
}

CriterionResult covariance_gap_decay(const Context& ctx) {
  CriterionResult r{4, "covariance_gap_decay", {}, {},
                    "n*|gap(n)| <= 2 on ladder n in [1e2, 1e6]; gap = -1/(n-1) where L(n) = 0"};
  const std::uint64_t top = std::min(ctx.limit, kReference);
  double worst = 0.0;
  std::uint64_t points = 0;
  for (const ValueTable* t : {&ctx.mobius, &ctx.liouville}) {
    const SummatorySeries series = accumulate(t->kind(), ctx.limit, LadderSpec::geometric(), ctx.opts.cfg);
    for (const auto& c : series.checkpoints()) {
      if (c.n < 100 || c.n > top) continue;
      worst = std::max(worst, static_cast<double>(c.n) * std::fabs(covariance_gap(series, c.n, ctx.opts.cfg)));
      ++points;
    }
  }
  std::uint64_t zeros = 0, anchor_failures = 0;
  for (std::uint64_t n = 2; n <= ctx.limit; ++n) {
    if (ctx.liouville_prefix.s[n] != 0) continue;
    ++zeros;
    const auto g = covariance_gap_exact(0, ctx.liouville_prefix.q[n], n);
    if (!(g.num == -1 && g.den == static_cast<ExactRatio::wide>(n - 1))) ++anchor_failures;
  }
  r.status = points == 0 && zeros == 0 ? CriterionStatus::Skip
                                       : pass_if(worst <= 2.0 && anchor_failures == 0);
  r.measured = "max n*|gap|=" + num(worst) + " over " + std::to_string(points) +
               " points; L(n)=0 anchors=" + std::to_string(zeros) +
               " failures=" + std::to_string(anchor_failures);
  return r;
}

CriterionResult sqrt_envelope(const Context& ctx) {
  CriterionResult r{5, "sqrt_envelope", {}, {}, "max |F(n)|/sqrt(n) <= 1.5 for M and L"};
  bool ok = true;
  std::ostringstream m;
  for (auto [kind, p] : {std::pair{FunctionKind::Mobius, &ctx.mobius_prefix},
                         std::pair{FunctionKind::Liouville, &ctx.liouville_prefix}}) {
    const auto dev = deviation_series(every_n_series(kind, *p), MeanModel{});
    const auto env = normalized_envelope(dev);
    ok = ok && env.max_ratio <= 1.5;
    m << (kind == FunctionKind::Mobius ? "" : " ") << kind_name(kind)
      << ": max=" << num(env.max_ratio) << " at n=" << env.argmax_n;
  }
  r.status = pass_if(ok);
  r.measured = m.str();
  return r;
}

CriterionResult bound_coverage(const Context& ctx) {
  CriterionResult r{6, "deviation_bound_coverage", {}, {},
                    "fraction(phi=log) == 1 and fraction(phi=0.01) < 1 over n in [2, limit]"};
  if (ctx.limit < 3) {
    r.status = CriterionStatus::Skip;
    r.measured = "requires limit >= 3";
    return r;
  }
  bool ok = true;
  std::ostringstream m;
  const SlowGrowthSpec log_phi{GrowthFunction::Log, 1.0, 0.5};
  const SlowGrowthSpec tiny{GrowthFunction::Constant, 0.01, 0.5};
  for (auto [kind, p] : {std::pair{FunctionKind::Mobius, &ctx.mobius_prefix},
                         std::pair{FunctionKind::Liouville, &ctx.liouville_prefix}}) {
    const auto dev = deviation_series(every_n_series(kind, *p), MeanModel{});
    const auto with_log = chebyshev_bound_coverage(dev, log_phi);
    const auto with_tiny = chebyshev_bound_coverage(dev, tiny);
    ok = ok && with_log.fraction == 1.0 && with_tiny.fraction < 1.0;
    m << (kind == FunctionKind::Mobius ? "" : " ") << kind_name(kind)
      << ": log=" << num(with_log.fraction) << " const0.01=" << num(with_tiny.fraction);
  }
  r.status = pass_if(ok);
  r.measured = m.str();
  return r;
}

CriterionResult dependence_dichotomy(const Context& ctx) {
  CriterionResult r{7, "prime_dependence_dichotomy", {}, {},
                    "joint == 0, product > 0; |corr_prime| >= 5 |corr_liouville| on [3, 1e6]"};
  if (ctx.limit < 5) {
    r.status = CriterionStatus::Skip;
    r.measured = "requires limit >= 5";
    return r;
  }
  const auto joint = prime_adjacent_joint(ctx.limit, ctx.opts.cfg);
  bool ok = joint.joint_ones == 0 && joint.product > 0.0;
  std::ostringstream m;
  m << "joint=" << num(joint.joint) << " product=" << num(joint.product);
  if (ctx.limit >= kReference) {
    const auto lp = lag_covariance(ctx.prime, 1, 3, kReference);
    const auto ll = lag_covariance(ctx.liouville, 1, 3, kReference);
    ok = ok && lp.cov < 0 && std::fabs(lp.corr) >= 5.0 * std::fabs(ll.corr);
    m << " corr_prime=" << num(lp.corr) << " corr_liouville=" << num(ll.corr);
  } else {
    m << " correlation factor requires limit >= 1e6";
  }
  r.status = pass_if(ok);
  r.measured = m.str();
  return r;
}

CriterionResult determinism(const Context& ctx) {
  CriterionResult r{8, "thread_determinism", {}, {}, "identical results for threads=1 and threads=N"};
  ComputeConfig one = ctx.opts.cfg;
  one.threads = 1;
  ComputeConfig many = ctx.opts.cfg;
  many.threads = std::max(4u, ctx.opts.cfg.threads);
  many.block_size = 4099;
  std::uint64_t diffs = 0;
  for (FunctionKind kind : kAllKinds) {
    if (sieve_values(kind, 1, ctx.limit, one) != sieve_values(kind, 1, ctx.limit, many)) ++diffs;
    if (accumulate(kind, ctx.limit, LadderSpec::geometric(), one) !=
        accumulate(kind, ctx.limit, LadderSpec::geometric(), many))
      ++diffs;
  }
  if (prime_adjacent_joint(std::max<std::uint64_t>(ctx.limit, 5), one).joint_ones !=
      prime_adjacent_joint(std::max<std::uint64_t>(ctx.limit, 5), many).joint_ones)
    ++diffs;
  r.status = pass_if(diffs == 0);
  r.measured = "differences=" + std::to_string(diffs) + " threads=1 vs " + std::to_string(many.threads);
  return r;
}

SummatorySeries without_square_sums(const SummatorySeries& s) {
  std::vector<Checkpoint> cps(s.checkpoints().begin(), s.checkpoints().end());
  for (auto& c : cps) c.square_sum.reset();
  return SummatorySeries::make(s.kind(), s.limit(), std::move(cps));
}

CriterionResult cache_integrity(const Context& ctx) {
  CriterionResult r{9, "cache_integrity", {}, {},
                    "100 round-trips bit-exact; every checksum-covered corruption detected"};
  std::mt19937_64 rng(0x53554d46);
  ComputeConfig cfg = ctx.opts.cfg;
  std::uint64_t roundtrip_failures = 0, flips = 0, undetected = 0;
  for (int i = 0; i < 100; ++i) {
    const FunctionKind kind = kAllKinds[rng() % 5];
    std::vector<std::uint8_t> bytes;
    bool same = false;
    if (i % 2 == 0) {
      const std::uint64_t lo = 1 + rng() % 1'000'000;
      const ValueTable t = sieve_values(kind, lo, lo + rng() % 2000, cfg);
      bytes = cache::encode(t);
      const auto back = cache::decode(bytes);
      same = std::holds_alternative<ValueTable>(back) && std::get<ValueTable>(back) == t &&
             cache::encode(std::get<ValueTable>(back)) == bytes;
    } else {
      const std::uint64_t limit = 1 + rng() % 5000;
      std::vector<std::uint64_t> pts;
      for (int k = 0, count = 1 + static_cast<int>(rng() % 8); k < count; ++k)
        pts.push_back(1 + rng() % limit);
      const auto s = without_square_sums(accumulate(kind, limit, LadderSpec::explicit_points(pts), cfg));
      bytes = cache::encode(s);
      const auto back = cache::decode(bytes);
      same = std::holds_alternative<SummatorySeries>(back) &&
             std::get<SummatorySeries>(back) == s;
    }
    if (!same) ++roundtrip_failures;
    if (bytes.size() > cache::kHeaderSize) {
      auto bad = bytes;
      const std::size_t at = cache::kHeaderSize + rng() % (bytes.size() - cache::kHeaderSize);
      bad[at] ^= static_cast<std::uint8_t>(1 + rng() % 255);
      ++flips;
      try {
        (void)cache::decode(bad);
        ++undetected;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Integrity) ++undetected;
      }
    }
  }
  r.status = pass_if(roundtrip_failures == 0 && undetected == 0);
  r.measured = "roundtrip_failures=" + std::to_string(roundtrip_failures) +
               " corruptions=" + std::to_string(flips) + " undetected=" + std::to_string(undetected);
  return r;
}

CriterionResult runtime_budget(const Context& ctx, Clock::time_point start) {
  CriterionResult r{10, "runtime_budget", {}, {},
                    "verify <= 180 s at limit 1e6; 1e7 ladder envelope scan <= 900 s"};
  bool ok = true;
  std::ostringstream m;
  if (ctx.limit >= kReference) {
    const auto scan_start = Clock::now();
    for (FunctionKind kind : {FunctionKind::Mobius, FunctionKind::Liouville}) {
      const auto dev = deviation_series(
          accumulate(kind, 10'000'000, LadderSpec::geometric(), ctx.opts.cfg), MeanModel{});
      const auto env = normalized_envelope(dev);
      m << kind_name(kind) << " ladder max(1e7)=" << num(env.max_ratio) << " ";
    }
    const double scan = std::chrono::duration<double>(Clock::now() - scan_start).count();
    ok = scan <= 900.0;
  } else {
    m << "1e7 scan requires limit >= 1e6 ";
  }
  const double total = std::chrono::duration<double>(Clock::now() - start).count();
  ok = ok && total <= 180.0;
  m << (ok ? "within budget" : "over budget");
  r.status = pass_if(ok);
  r.measured = m.str();
  return r;
}

template <class Fn>
void timed(std::vector<CriterionResult>& out, Fn&& fn) {
  const auto t0 = Clock::now();
  CriterionResult r = fn();
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  out.push_back(std::move(r));
}

}  // namespace

VerifyReport run_verification(const VerifyOptions& opts) {
  if (opts.limit == 0) throw_domain("verify: limit must be >= 1");
  if (opts.limit > opts.cfg.max_segment)
    throw_resource("verify: limit exceeds the maximum segment size");
  const auto start = Clock::now();

  ValueTable mobius = table_for(opts, FunctionKind::Mobius);
  ValueTable liouville = table_for(opts, FunctionKind::Liouville);
  ValueTable prime = table_for(opts, FunctionKind::PrimeIndicator);
  Prefix mp(mobius), lp(liouville);
  const Context ctx{opts, opts.limit, std::move(mobius), std::move(liouville), std::move(prime),
                    std::move(mp), std::move(lp)};

  VerifyReport report;
  report.limit = opts.limit;
  auto& out = report.criteria;
  timed(out, [&] { return oracle_equivalence(ctx); });
  timed(out, [&] { return algebraic_identities(ctx); });
  timed(out, [&] { return grid_ratio_decay(ctx); });
  timed(out, [&] { return covariance_gap_decay(ctx); });
  timed(out, [&] { return sqrt_envelope(ctx); });
  timed(out, [&] { return bound_coverage(ctx); });
  timed(out, [&] { return dependence_dichotomy(ctx); });
  timed(out, [&] { return determinism(ctx); });
  timed(out, [&] { return cache_integrity(ctx); });
  timed(out, [&] { return runtime_budget(ctx, start); });
  report.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return report;
}

}  // namespace summatoria
