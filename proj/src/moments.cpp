#include "summatoria/moments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "summatoria/error.hpp"

namespace summatoria {

namespace {

using wide = ExactRatio::wide;

void require_integer(const SummatorySeries& series, const char* op) {
  if (!series.integer())
    throw_domain(std::string(op) + " requires an integer-valued series");
}

std::int64_t sum_at(const SummatorySeries& series, std::uint64_t n, const ComputeConfig& cfg) {
  return std::get<std::int64_t>(value_at(series, n, cfg));
}

std::int64_t square_at(const SummatorySeries& series, std::uint64_t n,
                       const ComputeConfig& cfg) {
  return std::get<std::int64_t>(square_sum_at(series, n, cfg));
}

wide wide_gcd(wide a, wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

double ExactRatio::value() const noexcept {
  return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

double grid_sum_ratio(const SummatorySeries& series, std::uint64_t n, const ComputeConfig& cfg) {
  if (n == 0) throw_domain("grid_sum_ratio: n must be >= 1");
  require_integer(series, "grid_sum_ratio");
  const auto s = static_cast<long double>(sum_at(series, n, cfg));
  const auto nn = static_cast<long double>(n);
  return static_cast<double>((s * s) / (nn * nn));
}

ParityCounts parity_counts(const ValueTable& table, std::uint64_t n) {
  if (n == 0 || table.lo() != 1 || table.hi() < n)
    throw_domain("parity_counts: table must cover [1, " + std::to_string(n) + "]");
  if (!is_integer_kind(table.kind())) throw_domain("parity_counts requires an integer kind");
  ParityCounts c{n, 0, 0, 0};
  for (std::int8_t v : table.ints().first(n)) {
    if (v > 0)
      ++c.plus;
    else if (v < 0)
      ++c.minus;
    else
      ++c.zero;
  }
  return c;
}

PairProductCounts pair_product_counts(const ParityCounts& c) {
  return {c.plus * c.plus, c.minus * c.minus, c.plus * c.minus, c.minus * c.plus};
}

ExactRatio covariance_gap_exact(std::int64_t sum, std::int64_t square_sum, std::uint64_t n) {
  if (n < 2) throw_domain("covariance_gap: n must be >= 2");
  const wide s = sum;
  const wide nn = static_cast<wide>(n);
  wide num = s * s - nn * square_sum;
  wide den = nn * nn * (nn - 1);
  const wide g = wide_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return {num, den};
}

double covariance_gap(const SummatorySeries& series, std::uint64_t n, const ComputeConfig& cfg) {
  require_integer(series, "covariance_gap");
  if (n < 2) throw_domain("covariance_gap: n must be >= 2");
  return covariance_gap_exact(sum_at(series, n, cfg), square_at(series, n, cfg), n).value();
}

SecondMomentDecomposition second_moment_decomposition(const SummatorySeries& series,
                                                      std::uint64_t n,
                                                      const ComputeConfig& cfg) {
  if (n == 0) throw_domain("second_moment_decomposition: n must be >= 1");
  require_integer(series, "second_moment_decomposition");
  const std::int64_t s = sum_at(series, n, cfg);
  const std::int64_t q = square_at(series, n, cfg);
  return {s * s, q, s * s - q};
}

MomentReport moment_report(const SummatorySeries& series, std::uint64_t n,
                           const ComputeConfig& cfg) {
  if (n == 0) throw_domain("moment_report: n must be >= 1");
  require_integer(series, "moment_report");
  MomentReport r;
  r.kind = series.kind();
  r.n = n;
  r.sum = sum_at(series, n, cfg);
  r.square_sum = square_at(series, n, cfg);
  const auto s = static_cast<long double>(r.sum);
  const auto nn = static_cast<long double>(n);
  r.grid_ratio = static_cast<double>((s * s) / (nn * nn));
  if (n >= 2) r.covariance_gap = covariance_gap_exact(r.sum, r.square_sum, n).value();
  r.decomposition = {r.sum * r.sum, r.square_sum, r.sum * r.sum - r.square_sum};
  return r;
}

LagCovariance lag_covariance(const ValueTable& table, std::uint64_t lag, std::uint64_t lo,
                             std::uint64_t hi) {
  if (lag == 0) throw_domain("lag_covariance: lag must be >= 1");
  if (!table.covers(lo, hi)) throw_domain("lag_covariance: window outside table range");
  if (hi - lo + 1 <= lag + 1) throw_domain("lag_covariance: window too short for lag");

  LagCovariance out{table.kind(), lag, lo, hi, hi - lo + 1 - lag, 0.0, 0.0};
  const std::uint64_t pairs = out.pairs;
  const std::size_t off = lo - table.lo();

  if (is_integer_kind(table.kind())) {
    // Exact moments: P*sum(xy) - sum(x)sum(y) etc. are integers.
    const auto v = table.ints();
    std::int64_t sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (std::uint64_t i = 0; i < pairs; ++i) {
      const std::int64_t x = v[off + i], y = v[off + i + lag];
      sx += x;
      sy += y;
      sxy += x * y;
      sxx += x * x;
      syy += y * y;
    }
    const wide p = static_cast<wide>(pairs);
    const wide cxy = p * sxy - wide{sx} * sy;
    const wide cxx = p * sxx - wide{sx} * sx;
    const wide cyy = p * syy - wide{sy} * sy;
    const auto pp = static_cast<long double>(p) * static_cast<long double>(p);
    out.cov = static_cast<double>(static_cast<long double>(cxy) / pp);
    if (cxx > 0 && cyy > 0)
      out.corr = static_cast<double>(
          static_cast<long double>(cxy) /
          std::sqrt(static_cast<long double>(cxx) * static_cast<long double>(cyy)));
  } else {
    const auto v = table.reals();
    long double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (std::uint64_t i = 0; i < pairs; ++i) {
      const long double x = v[off + i], y = v[off + i + lag];
      sx += x;
      sy += y;
      sxy += x * y;
      sxx += x * x;
      syy += y * y;
    }
    const long double p = static_cast<long double>(pairs);
    const long double mx = sx / p, my = sy / p;
    const long double cov = sxy / p - mx * my;
    const long double vx = sxx / p - mx * mx, vy = syy / p - my * my;
    out.cov = static_cast<double>(cov);
    if (vx > 0 && vy > 0) out.corr = static_cast<double>(cov / std::sqrt(vx * vy));
  }
  return out;
}

AdjacentPrimeJoint prime_adjacent_joint(std::uint64_t N, const ComputeConfig& cfg) {
  if (N < 5) throw_domain("prime_adjacent_joint: N must be >= 5");
  AdjacentPrimeJoint r;
  r.pairs = N - 3;
  const std::uint64_t step = std::min<std::uint64_t>(cfg.max_segment, std::uint64_t{1} << 22);
  int prev = -1;
  for (std::uint64_t lo = 3; lo <= N;) {
    const std::uint64_t hi = N - lo < step ? N : lo + step - 1;
    const ValueTable t = sieve_values(FunctionKind::PrimeIndicator, lo, hi, cfg);
    const auto v = t.ints();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::uint64_t k = lo + i;
      const int x = v[i];
      if (k <= N - 1) r.first_ones += x;
      if (k >= 4) r.second_ones += x;
      if (prev == 1 && x == 1) ++r.joint_ones;
      prev = x;
    }
    if (hi == N) break;
    lo = hi + 1;
  }
  const auto p = static_cast<long double>(r.pairs);
  r.joint = static_cast<double>(static_cast<long double>(r.joint_ones) / p);
  r.product = static_cast<double>((static_cast<long double>(r.first_ones) / p) *
                                  (static_cast<long double>(r.second_ones) / p));
  return r;
}

}  // namespace summatoria
