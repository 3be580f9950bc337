#include "summatoria/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "summatoria/arithmetic.hpp"
#include "summatoria/error.hpp"

namespace summatoria {

namespace {

// Neumaier compensated sum.
class CompensatedSum {
 public:
  explicit CompensatedSum(double start = 0.0) : sum_(start) {}
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Running S and Q over a monotone walk of k.
struct RunningSums {
  bool integer;
  std::int64_t s_int = 0, q_int = 0;
  CompensatedSum s_real, q_real;

  explicit RunningSums(bool is_int) : integer(is_int) {}
  RunningSums(bool is_int, SumValue s, SumValue q) : integer(is_int) {
    if (integer) {
      s_int = std::get<std::int64_t>(s);
      q_int = std::get<std::int64_t>(q);
    } else {
      s_real = CompensatedSum(std::get<double>(s));
      q_real = CompensatedSum(std::get<double>(q));
    }
  }

  SumValue s() const { return integer ? SumValue{s_int} : SumValue{s_real.value()}; }
  SumValue q() const { return integer ? SumValue{q_int} : SumValue{q_real.value()}; }
};

std::uint64_t chunk_size(const ComputeConfig& cfg) {
  const std::uint64_t per_round =
      std::max<std::uint64_t>(cfg.block_size, 1) * std::max(1u, cfg.threads) * 4;
  return std::clamp<std::uint64_t>(per_round, 1, cfg.max_segment);
}

// Walks k = a..b in ascending order, sieving in chunks. `visit(k, sums)` is
// called after f(k) has been added.
template <class Visit>
void scan(FunctionKind kind, std::uint64_t a, std::uint64_t b, RunningSums& sums,
          const ComputeConfig& cfg, Visit&& visit) {
  const std::uint64_t step = chunk_size(cfg);
  for (std::uint64_t lo = a; lo <= b;) {
    const std::uint64_t hi = b - lo < step ? b : lo + step - 1;
    const ValueTable table = sieve_values(kind, lo, hi, cfg);
    if (sums.integer) {
      const auto v = table.ints();
      for (std::size_t i = 0; i < v.size(); ++i) {
        sums.s_int += v[i];
        sums.q_int += v[i] * v[i];
        visit(lo + i, sums);
      }
    } else {
      const auto v = table.reals();
      for (std::size_t i = 0; i < v.size(); ++i) {
        sums.s_real.add(v[i]);
        sums.q_real.add(v[i] * v[i]);
        visit(lo + i, sums);
      }
    }
    if (hi == b) break;
    lo = hi + 1;
  }
}

// Smallest x with x*x >= 2^j.
std::uint64_t ceil_sqrt_pow2(unsigned j) {
  if (j % 2 == 0) return std::uint64_t{1} << (j / 2);
  const std::uint64_t v = std::uint64_t{1} << j;
  std::uint64_t r = isqrt(v);
  return r * r == v ? r : r + 1;
}

}  // namespace

const Checkpoint* SummatorySeries::find(std::uint64_t n) const noexcept {
  auto it = std::lower_bound(checkpoints_.begin(), checkpoints_.end(), n,
                             [](const Checkpoint& c, std::uint64_t x) { return c.n < x; });
  return it != checkpoints_.end() && it->n == n ? &*it : nullptr;
}

const Checkpoint* SummatorySeries::before(std::uint64_t n) const noexcept {
  auto it = std::lower_bound(checkpoints_.begin(), checkpoints_.end(), n,
                             [](const Checkpoint& c, std::uint64_t x) { return c.n < x; });
  return it == checkpoints_.begin() ? nullptr : &*(it - 1);
}

SummatorySeries SummatorySeries::make(std::optional<FunctionKind> kind, std::uint64_t limit,
                                      std::vector<Checkpoint> checkpoints) {
  if (checkpoints.empty()) throw_domain("series needs at least one checkpoint");
  if (limit == 0) throw_domain("series limit must be >= 1");
  const bool integer = std::holds_alternative<std::int64_t>(checkpoints.front().sum);
  if (kind && integer != is_integer_kind(*kind))
    throw_domain("accumulator type does not match kind " + std::string(kind_name(*kind)));

  std::uint64_t prev = 0;
  for (const auto& c : checkpoints) {
    const std::string at = " at checkpoint n=" + std::to_string(c.n);
    if (c.n <= prev) throw_domain("checkpoints must be strictly increasing and >= 1" + at);
    prev = c.n;
    if (std::holds_alternative<std::int64_t>(c.sum) != integer ||
        (c.square_sum && std::holds_alternative<std::int64_t>(*c.square_sum) != integer))
      throw_domain("mixed accumulator types" + at);
    if (integer) {
      const auto s = std::get<std::int64_t>(c.sum);
      const auto bound = static_cast<std::int64_t>(c.n);
      if (kind && (s > bound || s < -bound)) throw_domain("|S(n)| > n" + at);
      if (kind && c.square_sum) {
        const auto q = std::get<std::int64_t>(*c.square_sum);
        if (q < 0 || q > bound) throw_domain("Q(n) outside [0, n]" + at);
      }
    } else if (!std::isfinite(std::get<double>(c.sum))) {
      throw_domain("non-finite S(n)" + at);
    }
  }
  if (prev != limit) throw_domain("last checkpoint must equal the series limit");
  return SummatorySeries(kind, limit, std::move(checkpoints));
}

std::vector<std::uint64_t> ladder_points(const LadderSpec& spec, std::uint64_t limit) {
  if (limit == 0) throw_domain("ladder limit must be >= 1");
  std::vector<std::uint64_t> pts;
  switch (spec.mode) {
    case LadderSpec::Mode::Geometric:
      // 2^(63/2) ~ 3e9 is far above any supported limit.
      for (unsigned j = 0; j <= 63; ++j) {
        const std::uint64_t n = ceil_sqrt_pow2(j);
        if (n > limit) break;
        pts.push_back(n);
      }
      break;
    case LadderSpec::Mode::Ratio: {
      if (!(spec.ratio > 1.0) || !std::isfinite(spec.ratio))
        throw_domain("ladder ratio must be a finite number > 1");
      for (double x = 1.0;; x *= spec.ratio) {
        const double c = std::ceil(x - 1e-9 * x);
        if (c > static_cast<double>(limit)) break;
        pts.push_back(static_cast<std::uint64_t>(c));
      }
      break;
    }
    case LadderSpec::Mode::Every:
      pts.reserve(limit);
      for (std::uint64_t n = 1; n <= limit; ++n) pts.push_back(n);
      break;
    case LadderSpec::Mode::Explicit:
      for (std::uint64_t n : spec.points) {
        if (n == 0 || n > limit)
          throw_domain("explicit checkpoint " + std::to_string(n) + " outside [1, limit]");
        pts.push_back(n);
      }
      break;
  }
  pts.push_back(limit);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

SummatorySeries accumulate(FunctionKind kind, std::uint64_t limit, const LadderSpec& plan,
                           const ComputeConfig& cfg) {
  if (limit > cfg.max_limit)
    throw_resource("limit " + std::to_string(limit) + " exceeds the configured maximum " +
                   std::to_string(cfg.max_limit));
  const auto pts = ladder_points(plan, limit);
  return accumulate(kind, limit, pts, cfg);
}

SummatorySeries accumulate(FunctionKind kind, std::uint64_t limit,
                           std::span<const std::uint64_t> points, const ComputeConfig& cfg) {
  if (limit == 0) throw_domain("limit must be >= 1");
  if (limit > cfg.max_limit)
    throw_resource("limit " + std::to_string(limit) + " exceeds the configured maximum " +
                   std::to_string(cfg.max_limit));
  if (points.empty() || points.back() != limit)
    throw_domain("checkpoint plan must be non-empty and end at the limit");

  std::vector<Checkpoint> cps;
  cps.reserve(points.size());
  std::size_t next = 0;
  RunningSums sums(is_integer_kind(kind));
  scan(kind, 1, limit, sums, cfg, [&](std::uint64_t k, const RunningSums& s) {
    if (next < points.size() && points[next] == k) {
      cps.push_back({k, s.s(), s.q()});
      ++next;
    }
  });
  if (next != points.size()) throw_domain("checkpoint plan is not strictly increasing");
  return SummatorySeries::make(kind, limit, std::move(cps));
}

namespace {

struct Sums {
  SumValue s, q;
};

Sums rescan(const SummatorySeries& series, std::uint64_t n, bool need_q,
            const ComputeConfig& cfg) {
  const FunctionKind kind = *series.kind();
  const bool integer = series.integer();
  std::uint64_t start = 0;
  SumValue s0 = integer ? SumValue{std::int64_t{0}} : SumValue{0.0};
  SumValue q0 = s0;
  for (const Checkpoint* c = series.before(n); c; c = series.before(c->n)) {
    if (!need_q || c->square_sum) {
      start = c->n;
      s0 = c->sum;
      if (c->square_sum) q0 = *c->square_sum;
      break;
    }
  }
  RunningSums sums(integer, s0, q0);
  scan(kind, start + 1, n, sums, cfg, [](std::uint64_t, const RunningSums&) {});
  return {sums.s(), sums.q()};
}

void check_position(const SummatorySeries& series, std::uint64_t n) {
  if (n == 0) throw_domain("n must be >= 1");
  if (n > series.limit())
    throw_domain("n=" + std::to_string(n) + " exceeds the series limit " +
                 std::to_string(series.limit()));
}

}  // namespace

SumValue value_at(const SummatorySeries& series, std::uint64_t n, const ComputeConfig& cfg) {
  check_position(series, n);
  if (const Checkpoint* c = series.find(n)) return c->sum;
  if (series.synthetic())
    throw_domain("synthetic series has no checkpoint at n=" + std::to_string(n));
  return rescan(series, n, false, cfg).s;
}

SumValue square_sum_at(const SummatorySeries& series, std::uint64_t n, const ComputeConfig& cfg) {
  check_position(series, n);
  const Checkpoint* c = series.find(n);
  if (c && c->square_sum) return *c->square_sum;
  if (series.kind() == FunctionKind::Liouville) return static_cast<std::int64_t>(n);
  if (series.kind() == FunctionKind::PrimeIndicator) return value_at(series, n, cfg);
  if (series.synthetic())
    throw_domain("synthetic series does not track Q at n=" + std::to_string(n));
  return rescan(series, n, true, cfg).q;
}

MeanModel default_mean_model(FunctionKind) noexcept { return MeanModel{0.0}; }

DeviationSeries deviation_series(const SummatorySeries& series, MeanModel model) {
  if (!std::isfinite(model.m)) throw_domain("mean model constant must be finite");
  DeviationSeries dev{series.kind(), series.limit(), model, {}};
  dev.points.reserve(series.checkpoints().size());
  for (const auto& c : series.checkpoints()) {
    if (model.m == 0.0)
      dev.points.push_back({c.n, c.sum});
    else
      dev.points.push_back({c.n, to_real(c.sum) - model.m * static_cast<double>(c.n)});
  }
  return dev;
}

}  // namespace summatoria
