#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "summatoria/series.hpp"

namespace summatoria {

struct ExponentSample {
  std::uint64_t n = 0;
  double magnitude = 0.0;
};

// log(magnitude) = log_c + alpha * log(n), ordinary least squares.
struct ExponentFit {
  double alpha = 0.0;
  double log_c = 0.0;
  double r_squared = 0.0;
  std::size_t samples_used = 0;
  std::size_t samples_dropped = 0;  // magnitude == 0 or n < 2
  double residual_max = 0.0;
};

ExponentFit fit_exponent(std::span<const ExponentSample> samples);

enum class GrowthFunction { Constant, Log, LogSquared, IteratedLog, Power };

// A slowly growing phi(n) from a fixed menu. `parameter` is the value of the
// constant or the exponent of the power; `epsilon` is the exponent that
// slow_growth_check compares against.
struct SlowGrowthSpec {
  GrowthFunction function = GrowthFunction::Log;
  double parameter = 1.0;
  double epsilon = 0.5;

  double operator()(double n) const noexcept;
  std::string name() const;

  /// "log", "log2", "loglog", "const:<c>", "pow:<e>"; "const" means const:1.
  static std::optional<SlowGrowthSpec> parse(std::string_view name);
};

/// True iff phi(n) <= n^epsilon at every geometric-ladder point in [lo, hi].
bool slow_growth_check(const SlowGrowthSpec& spec, std::uint64_t lo, std::uint64_t hi);

struct Envelope {
  double max_ratio = 0.0;  // max |F(n)| / sqrt(n)
  std::uint64_t argmax_n = 0;
};

/// Ties go to the smaller n.
Envelope normalized_envelope(const DeviationSeries& dev);

struct CoverageReport {
  std::optional<FunctionKind> kind;
  std::uint64_t limit = 0;
  SlowGrowthSpec phi;
  std::uint64_t satisfied = 0;  // |F(n)| <= sqrt(n) phi(n)
  std::uint64_t total = 0;
  double fraction = 0.0;
};

/// Counts checkpoints n >= from_n; phi must be positive there.
CoverageReport chebyshev_bound_coverage(const DeviationSeries& dev, const SlowGrowthSpec& phi,
                                        std::uint64_t from_n = 2);

}  // namespace summatoria
