#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "summatoria/config.hpp"
#include "summatoria/kinds.hpp"

namespace summatoria {

// Exact 64-bit integer for {-1,0,1}-valued kinds, double otherwise.
using SumValue = std::variant<std::int64_t, double>;

inline double to_real(const SumValue& v) noexcept {
  return std::visit([](auto x) { return static_cast<double>(x); }, v);
}

struct Checkpoint {
  std::uint64_t n = 0;
  SumValue sum;                        // S(n)
  std::optional<SumValue> square_sum;  // Q(n) = sum of f(k)^2, when tracked

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

// Checkpointed prefix sums S(n) = sum_{k<=n} f(k). A series without a kind
// is synthetic: built from caller-supplied checkpoints and never rescanned.
class SummatorySeries {
 public:
  // Validates: checkpoints non-empty, strictly increasing, first n >= 1,
  // last n == limit, one accumulator type throughout (matching the kind),
  // and |S(n)| <= n, 0 <= Q(n) <= n for integer kinds. Throws Error(Domain).
  static SummatorySeries make(std::optional<FunctionKind> kind, std::uint64_t limit,
                              std::vector<Checkpoint> checkpoints);

  std::optional<FunctionKind> kind() const noexcept { return kind_; }
  bool synthetic() const noexcept { return !kind_.has_value(); }
  bool integer() const noexcept {
    return std::holds_alternative<std::int64_t>(checkpoints_.front().sum);
  }
  std::uint64_t limit() const noexcept { return limit_; }
  std::span<const Checkpoint> checkpoints() const noexcept { return checkpoints_; }

  const Checkpoint* find(std::uint64_t n) const noexcept;
  // Largest checkpoint with checkpoint.n < n, or nullptr.
  const Checkpoint* before(std::uint64_t n) const noexcept;

  friend bool operator==(const SummatorySeries&, const SummatorySeries&) = default;

 private:
  SummatorySeries(std::optional<FunctionKind> kind, std::uint64_t limit,
                  std::vector<Checkpoint> checkpoints)
      : kind_(kind), limit_(limit), checkpoints_(std::move(checkpoints)) {}

  std::optional<FunctionKind> kind_;
  std::uint64_t limit_;
  std::vector<Checkpoint> checkpoints_;
};

struct LadderSpec {
  enum class Mode { Geometric, Ratio, Every, Explicit };
  Mode mode = Mode::Geometric;
  double ratio = 2.0;                 // Ratio mode: n_j = ceil(ratio^j)
  std::vector<std::uint64_t> points;  // Explicit mode

  static LadderSpec geometric() { return {}; }
  static LadderSpec every() { return {Mode::Every, 0.0, {}}; }
  static LadderSpec with_ratio(double r) { return {Mode::Ratio, r, {}}; }
  static LadderSpec explicit_points(std::vector<std::uint64_t> p) {
    return {Mode::Explicit, 0.0, std::move(p)};
  }
};

/// Ascending, deduplicated checkpoint positions in [1, limit], always ending
/// at limit. Geometric mode yields ceil(2^(j/2)) for j = 0, 1, ...
std::vector<std::uint64_t> ladder_points(const LadderSpec& spec, std::uint64_t limit);

/// Single pass over [1, limit], recording S(n) and Q(n) at each ladder point.
/// Chebyshev kinds use compensated summation.
SummatorySeries accumulate(FunctionKind kind, std::uint64_t limit, const LadderSpec& plan,
                           const ComputeConfig& cfg = {});
SummatorySeries accumulate(FunctionKind kind, std::uint64_t limit,
                           std::span<const std::uint64_t> points, const ComputeConfig& cfg = {});

/// Exact S(n); rescans from the nearest earlier checkpoint when n is not one.
SumValue value_at(const SummatorySeries& series, std::uint64_t n, const ComputeConfig& cfg = {});

/// Q(n) = sum_{k<=n} f(k)^2, from the checkpoint when tracked, from closed
/// forms for Liouville (n) and the prime indicator (S(n)), else by rescan.
SumValue square_sum_at(const SummatorySeries& series, std::uint64_t n,
                       const ComputeConfig& cfg = {});

struct MeanModel {
  double m = 0.0;  // S(n) = m n + o(n)
};

/// Default model for a kind; all implemented kinds use m = 0.
MeanModel default_mean_model(FunctionKind kind) noexcept;

struct DeviationPoint {
  std::uint64_t n = 0;
  SumValue value;  // F(n) = S(n) - m n; stays integer when m == 0
};

struct DeviationSeries {
  std::optional<FunctionKind> kind;
  std::uint64_t limit = 0;
  MeanModel model;
  std::vector<DeviationPoint> points;
};

DeviationSeries deviation_series(const SummatorySeries& series, MeanModel model);

}  // namespace summatoria
