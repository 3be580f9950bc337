#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "summatoria/config.hpp"

namespace summatoria {

enum class CriterionStatus { Pass, Fail, Skip };

const char* status_name(CriterionStatus s) noexcept;

struct CriterionResult {
  int id = 0;
  std::string name;
  CriterionStatus status = CriterionStatus::Skip;
  std::string measured;   // deterministic for a fixed limit
  std::string threshold;
  double seconds = 0.0;   // wall time; not part of the deterministic report
};

struct VerifyOptions {
  std::uint64_t limit = 1'000'000;
  std::optional<std::filesystem::path> cache_dir;  // no caching when unset
  ComputeConfig cfg;
  std::function<void(const std::string&)> warn;
};

struct VerifyReport {
  std::uint64_t limit = 0;
  std::vector<CriterionResult> criteria;
  double seconds = 0.0;

  bool all_passed() const noexcept;
};

/// Runs the ten acceptance checks. Thresholds pinned to n = 10^6 are
/// skipped when limit < 10^6; the exact identities run at every limit.
VerifyReport run_verification(const VerifyOptions& opts);

}  // namespace summatoria
