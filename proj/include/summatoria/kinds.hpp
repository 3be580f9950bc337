#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace summatoria {

// Pointwise arithmetic functions whose summatory series the library computes.
// The numeric values double as the on-disk kind tag of the cache format.
enum class FunctionKind : std::uint8_t {
  Mobius = 0,
  Liouville = 1,
  PrimeIndicator = 2,
  ChebyshevPsiTerm = 3,
  ChebyshevThetaTerm = 4,
};

inline constexpr FunctionKind kAllKinds[] = {
    FunctionKind::Mobius, FunctionKind::Liouville, FunctionKind::PrimeIndicator,
    FunctionKind::ChebyshevPsiTerm, FunctionKind::ChebyshevThetaTerm};

// Mobius, Liouville and PrimeIndicator take values in {-1, 0, 1} and are
// accumulated exactly; the Chebyshev terms are real (logarithms).
constexpr bool is_integer_kind(FunctionKind k) noexcept {
  return k == FunctionKind::Mobius || k == FunctionKind::Liouville ||
         k == FunctionKind::PrimeIndicator;
}

/// CLI spelling: mobius, liouville, prime-indicator, psi, theta.
std::string_view kind_name(FunctionKind k) noexcept;
std::optional<FunctionKind> parse_kind(std::string_view name) noexcept;
std::optional<FunctionKind> kind_from_tag(std::uint8_t tag) noexcept;

}  // namespace summatoria
