#pragma once

#include <cstdint>

namespace summatoria {

// Resource limits and parallelism shared by the sieving and accumulation
// routines. Results never depend on `threads` or `block_size`.
struct ComputeConfig {
  std::uint64_t max_segment = std::uint64_t{1} << 26;  // entries per ValueTable
  std::uint64_t max_limit = 1'000'000'000;             // largest accumulate limit
  std::uint64_t block_size = std::uint64_t{1} << 18;   // work unit for threads
  unsigned threads = 1;
};

}  // namespace summatoria
