#pragma once

#include <cstdint>
#include <optional>

#include "summatoria/arithmetic.hpp"
#include "summatoria/series.hpp"

namespace summatoria {

// The moment routines work on integer-accumulated series (Mobius, Liouville,
// prime indicator, integer synthetic series); real series raise Error(Domain).

/// (sum_i sum_j f(i) f(j)) / n^2, evaluated as S(n)^2 / n^2.
double grid_sum_ratio(const SummatorySeries& series, std::uint64_t n,
                      const ComputeConfig& cfg = {});

struct ParityCounts {
  std::uint64_t n = 0;
  std::uint64_t plus = 0;   // f(k) = +1
  std::uint64_t minus = 0;  // f(k) = -1
  std::uint64_t zero = 0;   // f(k) = 0
};

ParityCounts parity_counts(const ValueTable& table, std::uint64_t n);

// Ordered pairs (i, j) over the full n x n grid, diagonal included.
struct PairProductCounts {
  std::uint64_t plus_plus = 0;
  std::uint64_t minus_minus = 0;
  std::uint64_t plus_minus = 0;
  std::uint64_t minus_plus = 0;

  std::uint64_t same_sign() const noexcept { return plus_plus + minus_minus; }
  std::uint64_t opposite_sign() const noexcept { return plus_minus + minus_plus; }
};

PairProductCounts pair_product_counts(const ParityCounts& counts);

// Reduced fraction num / den with den > 0.
struct ExactRatio {
  __extension__ typedef __int128 wide;
  wide num = 0;
  wide den = 1;
  double value() const noexcept;
};

/// Mean of f(i) f(j) over ordered pairs i != j <= n minus the squared prefix
/// mean: (S^2 - Q) / (n (n-1)) - (S/n)^2 = (S^2 - n Q) / (n^2 (n-1)).
ExactRatio covariance_gap_exact(std::int64_t sum, std::int64_t square_sum, std::uint64_t n);
double covariance_gap(const SummatorySeries& series, std::uint64_t n,
                      const ComputeConfig& cfg = {});

/// F(n)^2 = sum a(k)^2 + sum_{i != j} a(i) a(j) with a(k) = f(k) (mean model m = 0).
struct SecondMomentDecomposition {
  std::int64_t f_squared = 0;
  std::int64_t diag_sum = 0;
  std::int64_t cross_sum = 0;
};

SecondMomentDecomposition second_moment_decomposition(const SummatorySeries& series,
                                                      std::uint64_t n,
                                                      const ComputeConfig& cfg = {});

struct MomentReport {
  std::optional<FunctionKind> kind;
  std::uint64_t n = 0;
  std::int64_t sum = 0;         // S(n)
  std::int64_t square_sum = 0;  // Q(n)
  double grid_ratio = 0.0;
  std::optional<double> covariance_gap;  // undefined for n < 2
  SecondMomentDecomposition decomposition;
};

MomentReport moment_report(const SummatorySeries& series, std::uint64_t n,
                           const ComputeConfig& cfg = {});

struct LagCovariance {
  FunctionKind kind{};
  std::uint64_t lag = 0;
  std::uint64_t lo = 0, hi = 0;  // window
  std::uint64_t pairs = 0;       // (f(k), f(k+lag)) for k in [lo, hi - lag]
  double cov = 0.0;
  double corr = 0.0;  // 0 when either marginal variance is 0
};

LagCovariance lag_covariance(const ValueTable& table, std::uint64_t lag, std::uint64_t lo,
                             std::uint64_t hi);

// Empirical frequencies over k in [3, N-1] of the prime indicator x_k.
struct AdjacentPrimeJoint {
  std::uint64_t pairs = 0;         // N - 3
  std::uint64_t first_ones = 0;    // #{x_k = 1}
  std::uint64_t second_ones = 0;   // #{x_{k+1} = 1}
  std::uint64_t joint_ones = 0;    // #{x_k = x_{k+1} = 1}
  double joint = 0.0;
  double product = 0.0;
};

AdjacentPrimeJoint prime_adjacent_joint(std::uint64_t N, const ComputeConfig& cfg = {});

}  // namespace summatoria
