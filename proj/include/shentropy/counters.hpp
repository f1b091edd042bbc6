#pragma once

#include <cstdint>

namespace shent {

// Tally of floating-point operations spent by the basis kernels. Callers pass
// a pointer to opt in; nullptr disables counting.
struct OpCounter {
  std::uint64_t flops = 0;
  std::uint64_t entries = 0;

  void add(std::uint64_t n) noexcept { flops += n; }
  void reset() noexcept { flops = entries = 0; }
};

}  // namespace shent
