// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails. Each check recomputes its
// quantities independently of the library path it is checking.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "summatoria/cache.hpp"
#include "summatoria/error.hpp"
#include "summatoria/moments.hpp"
#include "summatoria/scaling.hpp"

using namespace summatoria;

namespace {

constexpr std::uint64_t N = 1'000'000;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const char* name, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  std::printf("%s %2d %s (%.2f s):%s\n", o.pass ? "PASS" : "FAIL", id, name, seconds_since(t0),
              o.detail.str().c_str());
  std::fflush(stdout);
  failures += !o.pass;
}

struct Run {
  std::string out;
  int rc = -1;
  double seconds = 0;
};

Run cli(const std::string& args) {
  const auto t0 = Clock::now();
  Run r;
  FILE* p = ::popen((SUMMATORIA_CLI " " + args + " 2>/dev/null").c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  const int status = ::pclose(p);
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.seconds = seconds_since(t0);
  return r;
}

// Running sums recomputed here from the raw table.
struct Prefix {
  std::vector<std::int64_t> S, Q, plus, minus, cross;
};

Prefix prefix_of(const ValueTable& t) {
  Prefix p;
  const std::size_t n = t.hi();
  for (auto* v : {&p.S, &p.Q, &p.plus, &p.minus, &p.cross}) v->assign(n + 1, 0);
  for (std::size_t k = 1; k <= n; ++k) {
    const auto a = static_cast<std::int64_t>(t[k]);
    p.cross[k] = p.cross[k - 1] + 2 * a * p.S[k - 1];
    p.S[k] = p.S[k - 1] + a;
    p.Q[k] = p.Q[k - 1] + a * a;
    p.plus[k] = p.plus[k - 1] + (a > 0);
    p.minus[k] = p.minus[k - 1] + (a < 0);
  }
  return p;
}

bool close(double a, double b, double rel = 1e-9) {
  return std::fabs(a - b) <= rel * std::max(1.0, std::fabs(b));
}

}  // namespace

int main() {
  const auto start = Clock::now();
  ComputeConfig single;
  const auto mu = sieve_values(FunctionKind::Mobius, 1, N);
  const auto lam = sieve_values(FunctionKind::Liouville, 1, N);
  const auto pm = prefix_of(mu);
  const auto pl = prefix_of(lam);
  const auto ladder = ladder_points(LadderSpec::geometric(), N);

  criterion(1, "oracle equivalence for n <= 1e5, all kinds", [&](Outcome& o) {
    const auto t0 = Clock::now();
    std::uint64_t mismatches = 0;
    for (FunctionKind kind : kAllKinds) {
      const auto t = sieve_values(kind, 1, 100'000, single);
      for (std::uint64_t n = 1; n <= 100'000; ++n)
        mismatches += t[n] != pointwise_from_factorization(kind, factor_oracle(n));
    }
    const double secs = seconds_since(t0);
    o.detail << " mismatches=" << mismatches;
    o.require(mismatches == 0, "sieve differs from oracle");
    o.require(secs <= 30, "runtime above 30 s");
  });

  criterion(2, "exact algebraic identities at ladder points to 1e6", [&](Outcome& o) {
    std::uint64_t checked = 0;
    for (const auto* pair : {&mu, &lam}) {
      const auto& t = *pair;
      const auto& p = &t == &mu ? pm : pl;
      const auto s = accumulate(t.kind(), N, LadderSpec::geometric());
      for (std::uint64_t n : ladder) {
        const auto d = second_moment_decomposition(s, n);
        const auto pc = parity_counts(t, n);
        const auto pp = pair_product_counts(pc);
        const std::int64_t S = p.S[n], Q = p.Q[n];
        o.require(S * S == Q + p.cross[n], "F^2 = sum a^2 + cross (recomputed)");
        o.require(d.f_squared == S * S && d.diag_sum == Q && d.cross_sum == p.cross[n],
                  "library decomposition at n=" + std::to_string(n));
        o.require(S == static_cast<std::int64_t>(pc.plus) - static_cast<std::int64_t>(pc.minus),
                  "S = N+ - N-");
        o.require(Q == static_cast<std::int64_t>(pc.plus + pc.minus), "Q = N+ + N-");
        o.require(static_cast<std::int64_t>(pc.plus) == p.plus[n] &&
                      static_cast<std::int64_t>(pc.minus) == p.minus[n],
                  "parity counts");
        o.require(pp.plus_plus + pp.minus_minus + pp.plus_minus + pp.minus_plus ==
                      (pc.plus + pc.minus) * (pc.plus + pc.minus),
                  "pair-count total");
        ++checked;
      }
    }
    o.detail << " points=" << checked;
  });

  criterion(3, "grid ratio decay", [&](Outcome& o) {
    // Fixtures: M(1e3)=2, M(1e6)=212, L(1e3)=-14, L(1e6)=-530.
    const double fixture_1e6[] = {4.4944e-08, 2.809e-07};
    const double fixture_1e3[] = {4e-06, 1.96e-4};
    int i = 0;
    for (FunctionKind kind : {FunctionKind::Mobius, FunctionKind::Liouville}) {
      const auto& p = kind == FunctionKind::Mobius ? pm : pl;
      const auto s = accumulate(kind, N, LadderSpec::explicit_points({1000}));
      const double r6 = grid_sum_ratio(s, N), r3 = grid_sum_ratio(s, 1000);
      const double own6 = static_cast<double>(p.S[N]) * p.S[N] / (1e6 * 1e6);
      o.detail << " " << kind_name(kind) << "=" << r6;
      o.require(r6 <= 1e-3, "ratio(1e6) <= 1e-3");
      o.require(r3 >= 10 * r6, "factor-10 decay from 1e3");
      o.require(close(r6, own6, 1e-12), "matches recomputed ratio");
      o.require(close(r6, fixture_1e6[i], 1e-12) && close(r3, fixture_1e3[i], 1e-12), "fixtures");
      ++i;
    }
  });

  criterion(4, "covariance gap decay and L(n)=0 anchor", [&](Outcome& o) {
    double worst = 0;
    for (FunctionKind kind : {FunctionKind::Mobius, FunctionKind::Liouville}) {
      const auto& p = kind == FunctionKind::Mobius ? pm : pl;
      const auto s = accumulate(kind, N, LadderSpec::geometric());
      for (std::uint64_t n : ladder) {
        if (n < 100) continue;
        const double gap = covariance_gap(s, n);
        const long double S = p.S[n], Q = p.Q[n], nn = n;
        const double own = static_cast<double>((S * S - nn * Q) / (nn * nn * (nn - 1)));
        o.require(close(gap, own, 1e-12), "gap matches closed form at n=" + std::to_string(n));
        worst = std::max(worst, n * std::fabs(gap));
      }
    }
    std::uint64_t anchors = 0;
    for (std::uint64_t n = 2; n <= N; ++n) {
      if (pl.S[n] != 0) continue;
      ++anchors;
      const auto g = covariance_gap_exact(0, pl.Q[n], n);
      o.require(g.num == -1 && g.den == static_cast<ExactRatio::wide>(n - 1),
                "gap = -1/(n-1) at n=" + std::to_string(n));
    }
    o.detail << " max n|gap|=" << worst << " anchors=" << anchors;
    o.require(worst <= 2.0, "n|gap| <= 2");
    o.require(anchors == 9, "expected 9 zeros of L in [2, 1e6]");
  });

  criterion(5, "sqrt(n) envelope over all n <= 1e6", [&](Outcome& o) {
    const auto t0 = Clock::now();
    // Fixtures: (1, n=1) for M and (1.3302204651592284, n=96862) for L.
    const double fixture[] = {1.0, 1.3302204651592284};
    const std::uint64_t fixture_n[] = {1, 96862};
    int i = 0;
    for (FunctionKind kind : {FunctionKind::Mobius, FunctionKind::Liouville}) {
      const auto& p = kind == FunctionKind::Mobius ? pm : pl;
      double own = -1;
      std::uint64_t own_n = 0;
      for (std::uint64_t n = 1; n <= N; ++n) {
        const double r = std::fabs(static_cast<double>(p.S[n])) / std::sqrt(static_cast<double>(n));
        if (r > own) own = r, own_n = n;
      }
      const auto env = normalized_envelope(
          deviation_series(accumulate(kind, N, LadderSpec::every()), MeanModel{}));
      o.detail << " " << kind_name(kind) << "=" << env.max_ratio << "@" << env.argmax_n;
      o.require(env.max_ratio <= 1.5, "envelope <= 1.5");
      o.require(env.max_ratio == own && env.argmax_n == own_n, "matches recomputed scan");
      o.require(close(env.max_ratio, fixture[i], 1e-12) && env.argmax_n == fixture_n[i], "fixture");
      ++i;
    }
    o.require(seconds_since(t0) <= 60, "runtime above 60 s");
  });

  criterion(6, "deviation bound coverage", [&](Outcome& o) {
    const auto log_phi = *SlowGrowthSpec::parse("log");
    const auto tiny = *SlowGrowthSpec::parse("const:0.01");
    const std::uint64_t fixture_tiny[] = {52052, 10};
    int i = 0;
    for (FunctionKind kind : {FunctionKind::Mobius, FunctionKind::Liouville}) {
      const auto& p = kind == FunctionKind::Mobius ? pm : pl;
      const auto dev = deviation_series(accumulate(kind, N, LadderSpec::every()), MeanModel{});
      const auto c_log = chebyshev_bound_coverage(dev, log_phi);
      const auto c_tiny = chebyshev_bound_coverage(dev, tiny);
      std::uint64_t own_log = 0, own_tiny = 0;
      for (std::uint64_t n = 2; n <= N; ++n) {
        const double x = static_cast<double>(n), f = std::fabs(static_cast<double>(p.S[n]));
        own_log += f <= std::sqrt(x) * std::log(x);
        own_tiny += f <= std::sqrt(x) * 0.01;
      }
      o.detail << " " << kind_name(kind) << ": log=" << c_log.fraction << " const0.01=" << c_tiny.fraction;
      o.require(c_log.fraction == 1.0 && own_log == N - 1, "log coverage = 1");
      o.require(c_tiny.fraction < 1.0, "const coverage < 1");
      o.require(c_tiny.satisfied == own_tiny && own_tiny == fixture_tiny[i], "const coverage fixture");
      ++i;
    }
  });

  criterion(7, "prime dependence vs Liouville independence", [&](Outcome& o) {
    const auto pt = sieve_values(FunctionKind::PrimeIndicator, 1, N);
    std::uint64_t own_joint = 0;
    for (std::uint64_t k = 3; k + 1 <= N; ++k) own_joint += pt[k] == 1 && pt[k + 1] == 1;
    const auto adj = prime_adjacent_joint(N);
    const auto cp = lag_covariance(pt, 1, 3, N);
    const auto cl = lag_covariance(lam, 1, 3, N);
    o.detail << " joint=" << adj.joint << " product=" << adj.product << " corr_prime=" << cp.corr
             << " corr_liouville=" << cl.corr;
    o.require(adj.joint == 0.0 && own_joint == 0, "joint = 0");
    o.require(adj.product > 0, "product > 0");
    o.require(std::fabs(cp.corr) >= 5 * std::fabs(cl.corr), "factor >= 5");
    o.require(close(cl.corr, -0.0011092845392963878, 1e-9), "Liouville correlation fixture");
  });

  Run verify_csv_1, verify_csv_4;
  criterion(8, "verify output is deterministic across runs and threads", [&](Outcome& o) {
    verify_csv_1 = cli("verify --limit 1e6 --threads 1");
    const auto again = cli("verify --limit 1e6 --threads 1");
    verify_csv_4 = cli("verify --limit 1e6 --threads 4");
    const auto json_1 = cli("verify --limit 1e6 --threads 1 --format json");
    const auto json_4 = cli("verify --limit 1e6 --threads 4 --format json");
    o.detail << " csv_bytes=" << verify_csv_1.out.size() << " json_bytes=" << json_1.out.size();
    o.require(verify_csv_1.rc == 0 && verify_csv_4.rc == 0 && json_1.rc == 0, "verify exit 0");
    o.require(!verify_csv_1.out.empty(), "non-empty report");
    o.require(verify_csv_1.out == again.out, "repeat run identical");
    o.require(verify_csv_1.out == verify_csv_4.out, "threads 1 vs 4 CSV identical");
    o.require(json_1.out == json_4.out, "threads 1 vs 4 JSON identical");
  });

  criterion(9, "cache round-trips and corruption detection", [&](Outcome& o) {
    std::mt19937_64 rng(20241015);
    std::uint64_t roundtrips = 0, flips = 0, undetected = 0;
    for (int i = 0; i < 100; ++i) {
      const FunctionKind kind = kAllKinds[rng() % std::size(kAllKinds)];
      const std::uint64_t lo = 1 + rng() % 100'000, hi = lo + rng() % 20'000;
      std::vector<std::uint8_t> bytes;
      if (i % 2 == 0) {
        const auto t = sieve_values(kind, lo, hi);
        bytes = cache::encode(t);
        roundtrips += std::get<ValueTable>(cache::decode(bytes)) == t;
      } else {
        const auto s = accumulate(kind, hi, LadderSpec::geometric());
        bytes = cache::encode(s);
        roundtrips += cache::encode(std::get<SummatorySeries>(cache::decode(bytes))) == bytes;
      }
      // Flip a byte covered by the checksum: the payload or the checksum itself.
      for (int f = 0; f < 5; ++f) {
        auto bad = bytes;
        const std::size_t pos = 26 + rng() % (bad.size() - 26);
        bad[pos] ^= static_cast<std::uint8_t>(1 + rng() % 255);
        ++flips;
        try {
          (void)cache::decode(bad);
          ++undetected;
        } catch (const Error& e) {
          undetected += e.code() != ErrorCode::Integrity;
        }
      }
    }
    o.detail << " roundtrips=" << roundtrips << "/100 flips=" << flips << " undetected=" << undetected;
    o.require(roundtrips == 100, "bit-exact round-trips");
    o.require(undetected == 0, "all corruptions detected");
  });

  criterion(10, "runtime budget", [&](Outcome& o) {
    const auto m = cli("scaling --kind mobius --limit 1e7 --format json");
    const auto l = cli("scaling --kind liouville --limit 1e7 --format json");
    const double verify_s = std::max(verify_csv_1.seconds, verify_csv_4.seconds);
    const double scan_s = m.seconds + l.seconds;
    o.detail << " verify(1e6)=" << verify_s << "s scan(1e7)=" << scan_s << "s";
    o.require(m.rc == 0 && l.rc == 0, "1e7 scans exit 0");
    o.require(m.out.find("\"scan\": \"ladder\"") != std::string::npos, "1e7 scan uses the ladder");
    o.require(verify_csv_1.rc == 0 && verify_s <= 180, "verify within 3 minutes");
    o.require(scan_s <= 900, "1e7 envelope scan within 15 minutes");
  });

  std::printf("%s: %d of 10 criteria failed (%.1f s)\n", failures ? "FAIL" : "PASS", failures,
              seconds_since(start));
  return failures ? 1 : 0;
}
