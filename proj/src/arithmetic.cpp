#include "summatoria/arithmetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "parallel.hpp"
#include "summatoria/error.hpp"

namespace summatoria {

std::uint64_t isqrt(std::uint64_t n) noexcept {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r > n / r) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    if (i <= limit / i)
      for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

namespace {

std::uint64_t first_multiple_at_least(std::uint64_t p, std::uint64_t lo) {
  return ((lo + p - 1) / p) * p;
}

// Segments starting at 1: linear sieve for the smallest prime factor, then
// each value follows from the value at k / spf(k).
template <class T>
void sieve_from_one(FunctionKind kind, std::uint64_t hi, T* out) {
  std::vector<std::uint32_t> spf(hi + 1, 0);
  std::vector<std::uint32_t> primes;
  for (std::uint64_t i = 2; i <= hi; ++i) {
    if (spf[i] == 0) {
      spf[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes) {
      if (p > spf[i] || i * p > hi) break;
      spf[i * p] = p;
    }
  }

  switch (kind) {
    case FunctionKind::Mobius:
    case FunctionKind::Liouville: {
      std::vector<std::int8_t> v(hi + 1, 0);
      v[1] = 1;
      for (std::uint64_t k = 2; k <= hi; ++k) {
        const std::uint64_t q = k / spf[k];
        if (kind == FunctionKind::Mobius && q % spf[k] == 0)
          v[k] = 0;
        else
          v[k] = static_cast<std::int8_t>(-v[q]);
      }
      for (std::uint64_t k = 1; k <= hi; ++k) out[k - 1] = static_cast<T>(v[k]);
      break;
    }
    case FunctionKind::PrimeIndicator:
      out[0] = 0;
      for (std::uint64_t k = 2; k <= hi; ++k) out[k - 1] = spf[k] == k ? 1 : 0;
      break;
    case FunctionKind::ChebyshevPsiTerm: {
      // base[k] = p when k is a power of the prime p, else 0.
      std::vector<std::uint32_t> base(hi + 1, 0);
      out[0] = 0;
      for (std::uint64_t k = 2; k <= hi; ++k) {
        const std::uint32_t p = spf[k];
        const std::uint64_t q = k / p;
        base[k] = (q == 1 || base[q] == p) ? p : 0;
        out[k - 1] = base[k] ? static_cast<T>(std::log(static_cast<double>(p))) : T{0};
      }
      break;
    }
    case FunctionKind::ChebyshevThetaTerm:
      out[0] = 0;
      for (std::uint64_t k = 2; k <= hi; ++k)
        out[k - 1] = spf[k] == k ? static_cast<T>(std::log(static_cast<double>(k))) : T{0};
      break;
  }
}

// Offset segments: every k in [lo, hi] has at most one prime factor above
// sqrt(hi), so crossing off with the small primes and comparing the product
// of accounted primes against k recovers the remaining factor.
template <class T>
void sieve_offset(FunctionKind kind, std::uint64_t lo, std::uint64_t hi,
                  const std::vector<std::uint64_t>& primes, T* out) {
  const std::size_t len = hi - lo + 1;
  const std::uint64_t root = isqrt(hi);

  switch (kind) {
    case FunctionKind::Mobius:
    case FunctionKind::Liouville: {
      std::vector<std::int8_t> sign(len, 1);
      std::vector<std::uint64_t> prod(len, 1);
      for (std::uint64_t p : primes) {
        if (p > root) break;
        if (kind == FunctionKind::Mobius) {
          for (std::uint64_t m = first_multiple_at_least(p, lo); m <= hi; m += p) {
            sign[m - lo] = static_cast<std::int8_t>(-sign[m - lo]);
            prod[m - lo] *= p;
          }
          const std::uint64_t sq = p * p;
          for (std::uint64_t m = first_multiple_at_least(sq, lo); m <= hi; m += sq)
            sign[m - lo] = 0;
        } else {
          for (std::uint64_t pe = p;; pe *= p) {
            for (std::uint64_t m = first_multiple_at_least(pe, lo); m <= hi; m += pe) {
              sign[m - lo] = static_cast<std::int8_t>(-sign[m - lo]);
              prod[m - lo] *= p;
            }
            if (pe > hi / p) break;
          }
        }
      }
      for (std::size_t i = 0; i < len; ++i) {
        if (prod[i] != lo + i) sign[i] = static_cast<std::int8_t>(-sign[i]);
        out[i] = static_cast<T>(sign[i]);
      }
      break;
    }
    case FunctionKind::PrimeIndicator:
    case FunctionKind::ChebyshevPsiTerm:
    case FunctionKind::ChebyshevThetaTerm: {
      std::vector<bool> composite(len, false);
      for (std::uint64_t p : primes) {
        if (p > root) break;
        for (std::uint64_t m = std::max(p * p, first_multiple_at_least(p, lo)); m <= hi; m += p)
          composite[m - lo] = true;
      }
      for (std::size_t i = 0; i < len; ++i) {
        const std::uint64_t k = lo + i;
        const bool prime = k >= 2 && !composite[i];
        if (kind == FunctionKind::PrimeIndicator)
          out[i] = prime ? 1 : 0;
        else
          out[i] = prime ? static_cast<T>(std::log(static_cast<double>(k))) : T{0};
      }
      if (kind == FunctionKind::ChebyshevPsiTerm) {
        for (std::uint64_t p : primes) {
          if (p > root) break;
          const double lp = std::log(static_cast<double>(p));
          for (std::uint64_t pe = p; pe <= hi / p;) {
            pe *= p;
            if (pe >= lo) out[pe - lo] = static_cast<T>(lp);
          }
        }
      }
      break;
    }
  }
}

template <class T>
void sieve_into(FunctionKind kind, std::uint64_t lo, std::uint64_t hi,
                const ComputeConfig& cfg, T* out) {
  const std::uint64_t block = std::max<std::uint64_t>(cfg.block_size, 1);
  const std::uint64_t len = hi - lo + 1;
  const std::size_t blocks = static_cast<std::size_t>((len + block - 1) / block);
  const auto primes = primes_up_to(isqrt(hi));
  detail::parallel_for(blocks, cfg.threads, [&](std::size_t b) {
    const std::uint64_t a = lo + b * block;
    const std::uint64_t z = std::min(hi, a + block - 1);
    if (a == 1)
      sieve_from_one(kind, z, out + (a - lo));
    else
      sieve_offset(kind, a, z, primes, out + (a - lo));
  });
}

}  // namespace

std::size_t ValueTable::size() const noexcept {
  return std::visit([](const auto& v) { return v.size(); }, values_);
}

std::span<const std::int8_t> ValueTable::ints() const {
  if (auto* v = std::get_if<std::vector<std::int8_t>>(&values_)) return *v;
  throw_domain("ValueTable holds real values");
}

std::span<const double> ValueTable::reals() const {
  if (auto* v = std::get_if<std::vector<double>>(&values_)) return *v;
  throw_domain("ValueTable holds integer values");
}

double ValueTable::operator[](std::uint64_t k) const {
  return std::visit([&](const auto& v) { return static_cast<double>(v[k - lo_]); }, values_);
}

ValueTable ValueTable::make(FunctionKind kind, std::uint64_t lo, Storage values) {
  if (lo == 0) throw_domain("ValueTable lo must be >= 1");
  const bool integer = std::holds_alternative<std::vector<std::int8_t>>(values);
  if (integer != is_integer_kind(kind))
    throw_domain("value storage does not match kind " + std::string(kind_name(kind)));
  const std::size_t len = std::visit([](const auto& v) { return v.size(); }, values);
  if (len == 0) throw_domain("ValueTable must hold at least one value");

  const std::uint64_t hi = lo + len - 1;
  if (integer) {
    const auto& v = std::get<std::vector<std::int8_t>>(values);
    const std::int8_t min_v = kind == FunctionKind::PrimeIndicator ? 0 : -1;
    for (std::size_t i = 0; i < len; ++i) {
      const auto x = v[i];
      const bool ok = x >= min_v && x <= 1 && !(kind == FunctionKind::Liouville && x == 0);
      if (!ok)
        throw_domain("value " + std::to_string(x) + " at k=" + std::to_string(lo + i) +
                     " out of range for " + std::string(kind_name(kind)));
    }
  } else {
    const auto& v = std::get<std::vector<double>>(values);
    const double cap = std::log(static_cast<double>(hi)) * (1 + 1e-15);
    for (std::size_t i = 0; i < len; ++i) {
      if (!(v[i] >= 0.0 && v[i] <= cap))
        throw_domain("Chebyshev term at k=" + std::to_string(lo + i) + " outside [0, log hi]");
    }
  }
  return ValueTable(kind, lo, std::move(values));
}

ValueTable sieve_values(FunctionKind kind, std::uint64_t lo, std::uint64_t hi,
                        const ComputeConfig& cfg) {
  if (lo == 0) throw_domain("sieve interval must start at k >= 1");
  if (hi < lo) throw_domain("sieve interval is empty: hi < lo");
  const std::uint64_t len = hi - lo + 1;
  if (len > cfg.max_segment)
    throw_resource("sieve interval of " + std::to_string(len) +
                   " entries exceeds the maximum segment size " +
                   std::to_string(cfg.max_segment));
  if (is_integer_kind(kind)) {
    std::vector<std::int8_t> v(len);
    sieve_into(kind, lo, hi, cfg, v.data());
    return ValueTable(kind, lo, std::move(v));
  }
  std::vector<double> v(len);
  sieve_into(kind, lo, hi, cfg, v.data());
  return ValueTable(kind, lo, std::move(v));
}

std::uint32_t Factorization::total_multiplicity() const noexcept {
  std::uint32_t nu = 0;
  for (const auto& f : factors) nu += f.multiplicity;
  return nu;
}

Factorization factor_oracle(std::uint64_t n) {
  if (n == 0) throw_domain("factor_oracle: n must be >= 1");
  Factorization fact{n, {}};
  std::uint64_t rest = n;
  for (std::uint64_t d = 2; d <= rest / d; d += (d == 2 ? 1 : 2)) {
    if (rest % d) continue;
    std::uint32_t m = 0;
    while (rest % d == 0) {
      rest /= d;
      ++m;
    }
    fact.factors.push_back({d, m});
  }
  if (rest > 1) fact.factors.push_back({rest, 1});
  return fact;
}

double pointwise_from_factorization(FunctionKind kind, const Factorization& fact) {
  const auto& fs = fact.factors;
  switch (kind) {
    case FunctionKind::Mobius:
      for (const auto& f : fs)
        if (f.multiplicity > 1) return 0.0;
      return fs.size() % 2 ? -1.0 : 1.0;
    case FunctionKind::Liouville:
      return fact.total_multiplicity() % 2 ? -1.0 : 1.0;
    case FunctionKind::PrimeIndicator:
      return fs.size() == 1 && fs[0].multiplicity == 1 ? 1.0 : 0.0;
    case FunctionKind::ChebyshevPsiTerm:
      return fs.size() == 1 ? std::log(static_cast<double>(fs[0].prime)) : 0.0;
    case FunctionKind::ChebyshevThetaTerm:
      return fs.size() == 1 && fs[0].multiplicity == 1
                 ? std::log(static_cast<double>(fs[0].prime))
                 : 0.0;
  }
  return 0.0;
}

}  // namespace summatoria
