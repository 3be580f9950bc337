#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "summatoria/config.hpp"
#include "summatoria/kinds.hpp"

namespace summatoria {

// Dense table of f(k) for k = lo..hi inclusive. Integer kinds are stored as
// signed bytes, Chebyshev terms as doubles. Immutable once built.
class ValueTable {
 public:
  using Storage = std::variant<std::vector<std::int8_t>, std::vector<double>>;

  // Validates every invariant; throws Error(Domain) on violation.
  static ValueTable make(FunctionKind kind, std::uint64_t lo, Storage values);

  FunctionKind kind() const noexcept { return kind_; }
  std::uint64_t lo() const noexcept { return lo_; }
  std::uint64_t hi() const noexcept { return lo_ + size() - 1; }
  std::size_t size() const noexcept;
  bool covers(std::uint64_t a, std::uint64_t b) const noexcept {
    return a >= lo() && b <= hi() && a <= b;
  }

  // Only valid for integer kinds / real kinds respectively.
  std::span<const std::int8_t> ints() const;
  std::span<const double> reals() const;

  double operator[](std::uint64_t k) const;  // k in [lo, hi]
  const Storage& storage() const noexcept { return values_; }

  friend bool operator==(const ValueTable&, const ValueTable&) = default;

 private:
  // Sieved values satisfy the invariants by construction and skip the scan.
  friend ValueTable sieve_values(FunctionKind, std::uint64_t, std::uint64_t,
                                 const ComputeConfig&);

  ValueTable(FunctionKind kind, std::uint64_t lo, Storage values)
      : kind_(kind), lo_(lo), values_(std::move(values)) {}

  FunctionKind kind_;
  std::uint64_t lo_;
  Storage values_;
};

struct PrimePower {
  std::uint64_t prime;
  std::uint32_t multiplicity;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
  std::uint64_t n = 1;
  std::vector<PrimePower> factors;  // ascending primes

  std::uint32_t total_multiplicity() const noexcept;  // nu(n)
};

/// Sieve f(k) over [lo, hi]. The result is identical for any split of the
/// interval and any thread count in `cfg`.
ValueTable sieve_values(FunctionKind kind, std::uint64_t lo, std::uint64_t hi,
                        const ComputeConfig& cfg = {});

/// Trial-division factorization. Slow; meant as a test oracle.
Factorization factor_oracle(std::uint64_t n);

double pointwise_from_factorization(FunctionKind kind, const Factorization& fact);

/// Primes p <= limit, ascending.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

std::uint64_t isqrt(std::uint64_t n) noexcept;

}  // namespace summatoria
