#include <cmath>
#include <vector>

#include "doctest.h"
#include "summatoria/error.hpp"
#include "summatoria/moments.hpp"

using namespace summatoria;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected summatoria::Error");
  return ErrorCode::Io;
}

SummatorySeries constant_ones(std::uint64_t limit) {
  std::vector<Checkpoint> cps;
  for (std::uint64_t n = 1; n <= limit; ++n)
    cps.push_back({n, static_cast<std::int64_t>(n), static_cast<std::int64_t>(n)});
  return SummatorySeries::make(std::nullopt, limit, std::move(cps));
}

// Mean of f(i) f(j) over ordered pairs i != j minus the squared mean, by
// direct enumeration of the pairs.
double brute_gap(const ValueTable& t, std::uint64_t n) {
  long double pair_sum = 0, s = 0;
  for (std::uint64_t i = 1; i <= n; ++i) {
    s += t[i];
    for (std::uint64_t j = 1; j <= n; ++j)
      if (i != j) pair_sum += t[i] * t[j];
  }
  const long double nn = static_cast<long double>(n);
  return static_cast<double>(pair_sum / (nn * (nn - 1)) - (s / nn) * (s / nn));
}

// Two-pass sample covariance / correlation of (f(k), f(k+lag)).
std::pair<double, double> brute_lag(const ValueTable& t, std::uint64_t lag, std::uint64_t lo,
                                    std::uint64_t hi) {
  std::vector<double> x, y;
  for (std::uint64_t k = lo; k + lag <= hi; ++k) {
    x.push_back(t[k]);
    y.push_back(t[k + lag]);
  }
  const double p = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= p;
  my /= p;
  double cxy = 0, cxx = 0, cyy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cxy += (x[i] - mx) * (y[i] - my);
    cxx += (x[i] - mx) * (x[i] - mx);
    cyy += (y[i] - my) * (y[i] - my);
  }
  return {cxy / p, cxx > 0 && cyy > 0 ? cxy / std::sqrt(cxx * cyy) : 0.0};
}

}  // namespace

TEST_CASE("grid_sum_ratio") {
  const auto l = accumulate(FunctionKind::Liouville, 10, LadderSpec::geometric());
  const auto m = accumulate(FunctionKind::Mobius, 10, LadderSpec::geometric());
  CHECK(grid_sum_ratio(l, 10) == 0.0);
  CHECK(grid_sum_ratio(m, 10) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(grid_sum_ratio(constant_ones(20), 13) == 1.0);
  CHECK(code_of([&] { (void)grid_sum_ratio(l, 0); }) == ErrorCode::Domain);
  const auto psi = accumulate(FunctionKind::ChebyshevPsiTerm, 10, LadderSpec::geometric());
  CHECK(code_of([&] { (void)grid_sum_ratio(psi, 10); }) == ErrorCode::Domain);
}

TEST_CASE("parity_counts and pair_product_counts") {
  const auto lt = sieve_values(FunctionKind::Liouville, 1, 10);
  const auto pl = parity_counts(lt, 10);
  CHECK(pl.plus == 5);
  CHECK(pl.minus == 5);
  CHECK(pl.zero == 0);
  const auto mt = sieve_values(FunctionKind::Mobius, 1, 8);
  const auto pm = parity_counts(mt, 8);
  CHECK(pm.plus == 2);
  CHECK(pm.minus == 4);
  CHECK(pm.zero == 2);
  const auto one = parity_counts(lt, 1);
  CHECK(one.plus == 1);
  CHECK(one.minus == 0);

  const auto ppl = pair_product_counts(pl);
  CHECK(ppl.plus_plus == 25);
  CHECK(ppl.minus_minus == 25);
  CHECK(ppl.plus_minus == 25);
  CHECK(ppl.minus_plus == 25);
  CHECK(ppl.same_sign() == 10 * 10 / 2);
  const auto ppm = pair_product_counts(pm);
  CHECK(ppm.plus_plus == 4);
  CHECK(ppm.minus_minus == 16);
  CHECK(ppm.plus_minus == 8);
  CHECK(ppm.minus_plus == 8);
  const auto all_plus = pair_product_counts({7, 7, 0, 0});
  CHECK(all_plus.plus_plus == 49);
  CHECK(all_plus.opposite_sign() == 0);

  CHECK(code_of([&] { (void)parity_counts(lt, 11); }) == ErrorCode::Domain);
  CHECK(code_of([] { (void)parity_counts(sieve_values(FunctionKind::Mobius, 2, 10), 5); }) ==
        ErrorCode::Domain);
}

TEST_CASE("covariance_gap") {
  const auto l = accumulate(FunctionKind::Liouville, 100, LadderSpec::every());
  CHECK(covariance_gap(l, 2) == -1.0);
  CHECK(covariance_gap(l, 10) == doctest::Approx(-1.0 / 9).epsilon(1e-15));
  CHECK(covariance_gap(constant_ones(30), 17) == 0.0);
  CHECK(code_of([&] { (void)covariance_gap(l, 1); }) == ErrorCode::Domain);

  const auto g = covariance_gap_exact(0, 10, 10);
  CHECK(g.num == -1);
  CHECK(g.den == 9);
}

TEST_CASE("covariance_gap matches pair enumeration") {
  for (FunctionKind kind : {FunctionKind::Mobius, FunctionKind::Liouville, FunctionKind::PrimeIndicator}) {
    const auto t = sieve_values(kind, 1, 300);
    const auto s = accumulate(kind, 300, LadderSpec::every());
    for (std::uint64_t n = 2; n <= 300; n += 7)
      REQUIRE(covariance_gap(s, n) == doctest::Approx(brute_gap(t, n)).epsilon(1e-12));
  }
}

TEST_CASE("second_moment_decomposition") {
  const auto l = accumulate(FunctionKind::Liouville, 10, LadderSpec::geometric());
  auto d = second_moment_decomposition(l, 10);
  CHECK(d.f_squared == 0);
  CHECK(d.diag_sum == 10);
  CHECK(d.cross_sum == -10);
  const auto m = accumulate(FunctionKind::Mobius, 8, LadderSpec::geometric());
  d = second_moment_decomposition(m, 8);
  CHECK(d.f_squared == 4);
  CHECK(d.diag_sum == 6);
  CHECK(d.cross_sum == -2);
  d = second_moment_decomposition(m, 1);
  CHECK(d.f_squared == 1);
  CHECK(d.diag_sum == 1);
  CHECK(d.cross_sum == 0);
}

TEST_CASE("moment_report bundles the quantities") {
  const auto l = accumulate(FunctionKind::Liouville, 10, LadderSpec::geometric());
  const auto r = moment_report(l, 10);
  CHECK(r.sum == 0);
  CHECK(r.square_sum == 10);
  CHECK(r.grid_ratio == 0.0);
  REQUIRE(r.covariance_gap.has_value());
  CHECK(*r.covariance_gap == doctest::Approx(-0.1111111111).epsilon(1e-9));
  CHECK_FALSE(moment_report(l, 1).covariance_gap.has_value());
}

TEST_CASE("identities and parity consistency at every ladder point up to 1e6") {
  constexpr std::uint64_t N = 1'000'000;
  for (FunctionKind kind : {FunctionKind::Mobius, FunctionKind::Liouville}) {
    const auto t = sieve_values(kind, 1, N);
    const auto s = accumulate(kind, N, LadderSpec::geometric());
    for (const auto& c : s.checkpoints()) {
      const auto d = second_moment_decomposition(s, c.n);
      REQUIRE(d.f_squared - d.diag_sum - d.cross_sum == 0);
      REQUIRE(d.diag_sum <= static_cast<std::int64_t>(c.n));
      const auto pc = parity_counts(t, c.n);
      REQUIRE(std::get<std::int64_t>(c.sum) ==
              static_cast<std::int64_t>(pc.plus) - static_cast<std::int64_t>(pc.minus));
      REQUIRE(d.diag_sum == static_cast<std::int64_t>(pc.plus + pc.minus));
      const auto pp = pair_product_counts(pc);
      REQUIRE(pp.plus_plus + pp.minus_minus + pp.plus_minus + pp.minus_plus ==
              (pc.plus + pc.minus) * (pc.plus + pc.minus));
      if (kind == FunctionKind::Liouville) REQUIRE(pc.zero == 0);
    }
  }
  // Squarefree count below 1e6, from the independent numpy sieve.
  const auto m = accumulate(FunctionKind::Mobius, N, LadderSpec::geometric());
  CHECK(std::get<std::int64_t>(square_sum_at(m, N)) == 607926);
}

TEST_CASE("covariance gap decay: n |gap(n)| <= 2 on the ladder in [1e2, 1e6]") {
  // Fixture maxima from an independent exact-fraction computation.
  const double expected_max[] = {0.615670955882353, 1.0033700980392157};
  int i = 0;
  for (FunctionKind kind : {FunctionKind::Mobius, FunctionKind::Liouville}) {
    const auto s = accumulate(kind, 1'000'000, LadderSpec::geometric());
    double worst = 0;
    for (const auto& c : s.checkpoints())
      if (c.n >= 100) worst = std::max(worst, static_cast<double>(c.n) * std::fabs(covariance_gap(s, c.n)));
    CHECK(worst <= 2.0);
    CHECK(worst == doctest::Approx(expected_max[i++]).epsilon(1e-12));
  }
}

TEST_CASE("gap is exactly -1/(n-1) wherever L(n) = 0") {
  const auto l = accumulate(FunctionKind::Liouville, 1'000'000, LadderSpec::every());
  int zeros = 0;
  for (const auto& c : l.checkpoints()) {
    if (c.n < 2 || std::get<std::int64_t>(c.sum) != 0) continue;
    ++zeros;
    const auto g = covariance_gap_exact(0, std::get<std::int64_t>(*c.square_sum), c.n);
    REQUIRE(g.num == -1);
    REQUIRE(g.den == static_cast<ExactRatio::wide>(c.n - 1));
  }
  CHECK(zeros == 9);
}

TEST_CASE("grid ratio decay") {
  // L(1e3) = -14, L(1e6) = -530, M(1e3) = 2, M(1e6) = 212 (independent sieve).
  const auto l = accumulate(FunctionKind::Liouville, 1'000'000, LadderSpec::explicit_points({1000}));
  const auto m = accumulate(FunctionKind::Mobius, 1'000'000, LadderSpec::explicit_points({1000}));
  CHECK(grid_sum_ratio(l, 1'000'000) == doctest::Approx(2.809e-07).epsilon(1e-12));
  CHECK(grid_sum_ratio(m, 1'000'000) == doctest::Approx(4.4944e-08).epsilon(1e-12));
  CHECK(grid_sum_ratio(l, 1000) == doctest::Approx(1.96e-4).epsilon(1e-12));
  CHECK(grid_sum_ratio(m, 1000) == doctest::Approx(4e-6).epsilon(1e-12));
  for (const auto* s : {&l, &m}) {
    CHECK(grid_sum_ratio(*s, 1'000'000) <= 1e-3);
    CHECK(grid_sum_ratio(*s, 1000) >= 10 * grid_sum_ratio(*s, 1'000'000));
  }

  // Along the ladder the ratio never climbs above 4x its running maximum
  // from n = 1e3 on.
  for (FunctionKind kind : {FunctionKind::Mobius, FunctionKind::Liouville}) {
    const auto s = accumulate(kind, 1'000'000, LadderSpec::geometric());
    double running = 0;
    for (const auto& c : s.checkpoints()) {
      if (c.n < 1000) continue;
      const double r = grid_sum_ratio(s, c.n);
      if (running > 0) CHECK(r <= 4 * running);
      running = std::max(running, r);
    }
  }
}

TEST_CASE("lag_covariance") {
  const auto ones = ValueTable::make(FunctionKind::Mobius, 1, std::vector<std::int8_t>(100, 1));
  for (std::uint64_t lag : {1, 5, 50}) {
    const auto c = lag_covariance(ones, lag, 1, 100);
    CHECK(c.cov == 0.0);
    CHECK(c.corr == 0.0);
  }
  CHECK(code_of([&] { (void)lag_covariance(ones, 0, 1, 100); }) == ErrorCode::Domain);
  CHECK(code_of([&] { (void)lag_covariance(ones, 99, 1, 100); }) == ErrorCode::Domain);
  CHECK(code_of([&] { (void)lag_covariance(ones, 1, 1, 101); }) == ErrorCode::Domain);

  const auto lt = sieve_values(FunctionKind::Liouville, 1, 1'000'000);
  const auto pt = sieve_values(FunctionKind::PrimeIndicator, 1, 1'000'000);
  CHECK(std::fabs(lag_covariance(lt, 1, 1, 1'000'000).corr) < 0.05);

  const auto ll = lag_covariance(lt, 1, 3, 1'000'000);
  const auto lp = lag_covariance(pt, 1, 3, 1'000'000);
  CHECK(ll.pairs == 999'997);
  // Fixtures from the independent numpy run.
  CHECK(ll.corr == doctest::Approx(-0.0011092845392963878).epsilon(1e-9));
  CHECK(lp.cov == doctest::Approx(-0.006161737482369438).epsilon(1e-9));
  CHECK(lp.corr == doctest::Approx(-0.08518335041426363).epsilon(1e-9));
  CHECK(lp.cov < 0);
  CHECK(std::fabs(lp.corr) >= 5 * std::fabs(ll.corr));

  for (const auto* t : {&lt, &pt}) {
    for (std::uint64_t lag : {1, 2, 30}) {
      const auto c = lag_covariance(*t, lag, 17, 40'000);
      const auto [cov, corr] = brute_lag(*t, lag, 17, 40'000);
      CHECK(c.cov == doctest::Approx(cov).epsilon(1e-9));
      CHECK(c.corr == doctest::Approx(corr).epsilon(1e-9));
      CHECK(std::fabs(c.corr) <= 1.0 + 1e-12);
    }
  }

  const auto psi = sieve_values(FunctionKind::ChebyshevPsiTerm, 1, 20'000);
  const auto c = lag_covariance(psi, 2, 1, 20'000);
  const auto [cov, corr] = brute_lag(psi, 2, 1, 20'000);
  CHECK(c.cov == doctest::Approx(cov).epsilon(1e-9));
  CHECK(c.corr == doctest::Approx(corr).epsilon(1e-9));
}

TEST_CASE("prime_adjacent_joint") {
  const auto small = prime_adjacent_joint(100);
  CHECK(small.joint == 0.0);
  CHECK(small.pairs == 97);
  CHECK(small.first_ones == 24);
  CHECK(small.second_ones == 23);
  CHECK(small.product == doctest::Approx(24.0 * 23.0 / (97.0 * 97.0)).epsilon(1e-15));
  CHECK(small.product > 0.04);

  const auto big = prime_adjacent_joint(1'000'000);
  CHECK(big.joint_ones == 0);
  CHECK(big.product > 0);
  CHECK(big.product == doctest::Approx(0.006161737482369438).epsilon(1e-12));
  CHECK(big.joint != big.product);

  ComputeConfig tiny;
  tiny.max_segment = 1000;
  for (std::uint64_t N : {5ULL, 6ULL, 7ULL, 1000ULL, 12'345ULL}) {
    const auto a = prime_adjacent_joint(N, tiny);
    CHECK(a.joint_ones == 0);
    CHECK(a.product > 0);
    CHECK(a.first_ones == prime_adjacent_joint(N).first_ones);
  }
  CHECK(code_of([] { (void)prime_adjacent_joint(4); }) == ErrorCode::Domain);
}
