#pragma once

#include <cstdint>

namespace sumk {

/// Tally of distribution accesses made by the solver. `cdf` counts CDF oracle
/// calls, `tail` counts sparse tail-array lookups inside the DP and the
/// doubling convolutions. Passed around as an optional out-parameter.
struct QueryCounter {
  std::uint64_t cdf = 0;
  std::uint64_t tail = 0;

  std::uint64_t total() const { return cdf + tail; }

  QueryCounter& operator+=(const QueryCounter& other) {
    cdf += other.cdf;
    tail += other.tail;
    return *this;
  }
};

}  // namespace sumk
