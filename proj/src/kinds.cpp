#include "summatoria/kinds.hpp"

#include "summatoria/error.hpp"

namespace summatoria {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Resource: return "resource";
    case ErrorCode::Integrity: return "integrity";
    case ErrorCode::Corruption: return "corruption";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

std::string_view kind_name(FunctionKind k) noexcept {
  switch (k) {
    case FunctionKind::Mobius: return "mobius";
    case FunctionKind::Liouville: return "liouville";
    case FunctionKind::PrimeIndicator: return "prime-indicator";
    case FunctionKind::ChebyshevPsiTerm: return "psi";
    case FunctionKind::ChebyshevThetaTerm: return "theta";
  }
  return "unknown";
}

std::optional<FunctionKind> parse_kind(std::string_view name) noexcept {
  for (FunctionKind k : kAllKinds)
    if (kind_name(k) == name) return k;
  return std::nullopt;
}

std::optional<FunctionKind> kind_from_tag(std::uint8_t tag) noexcept {
  if (tag > static_cast<std::uint8_t>(FunctionKind::ChebyshevThetaTerm))
    return std::nullopt;
  return static_cast<FunctionKind>(tag);
}

}  // namespace summatoria
