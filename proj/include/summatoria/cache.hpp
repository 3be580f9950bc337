#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "summatoria/arithmetic.hpp"
#include "summatoria/series.hpp"

namespace summatoria::cache {

// On-disk layout, all integers little-endian:
//
//   offset size field
//        0    4 magic "SUMF"
//        4    4 version (u32, currently 1)
//        8    1 kind tag (FunctionKind value)
//        9    1 payload tag (0 = ValueTable, 1 = SummatorySeries)
//       10    8 lo (u64)   table: first k;       series: first checkpoint n
//       18    8 hi (u64)   table: last k;        series: limit
//       26    8 FNV-1a 64 checksum of the payload bytes
//       34      payload
//
// ValueTable payload: one i8 per k for integer kinds, one f64 per k for
// Chebyshev kinds. SummatorySeries payload: (u64 n, i64|f64 S(n)) pairs in
// ascending n.
inline constexpr std::uint32_t kVersion = 1;
inline constexpr std::size_t kHeaderSize = 34;
inline constexpr std::uint8_t kPayloadTable = 0;
inline constexpr std::uint8_t kPayloadSeries = 1;

using Artifact = std::variant<ValueTable, SummatorySeries>;

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) noexcept;

std::vector<std::uint8_t> encode(const ValueTable& table);
std::vector<std::uint8_t> encode(const SummatorySeries& series);  // synthetic → Error(Domain)

/// Integrity errors name the offending field (magic, version, kind_tag,
/// payload_tag, checksum); decoded artifacts violating their invariants
/// raise Error(Corruption). Checkpoint Q(n) values are not persisted.
Artifact decode(std::span<const std::uint8_t> bytes);

void save(const std::filesystem::path& path, const ValueTable& table);
void save(const std::filesystem::path& path, const SummatorySeries& series);
Artifact load(const std::filesystem::path& path);

/// $SUMMATORIA_CACHE when set, otherwise ".summatoria-cache".
std::filesystem::path default_directory();

std::filesystem::path table_path(const std::filesystem::path& dir, FunctionKind kind,
                                 std::uint64_t lo, std::uint64_t hi);

using Warn = std::function<void(const std::string&)>;

/// Loads the cached [lo, hi] table when present and valid; otherwise sieves,
/// stores (best effort) and returns it. Cache problems are reported through
/// `warn` and never fail the call.
ValueTable table_through_cache(const std::filesystem::path& dir, FunctionKind kind,
                               std::uint64_t lo, std::uint64_t hi, const ComputeConfig& cfg,
                               const Warn& warn = {});

}  // namespace summatoria::cache
