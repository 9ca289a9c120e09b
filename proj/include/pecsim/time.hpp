#pragma once

#include <cstdint>

namespace pecsim {

// Simulation clock: integer microseconds. All durations and instants in the
// library are SimTime; scenario files speak milliseconds unless a field has
// an explicit _us suffix.
using SimTime = std::int64_t;

inline constexpr SimTime kNoTime = -1;

// Large-but-addable stand-in for "never goes stale". Kept well below
// INT64_MAX so insert_time + freshness cannot overflow.
inline constexpr SimTime kForever = INT64_C(1) << 60;

constexpr SimTime ms_to_us(std::int64_t v) { return v * 1000; }
constexpr SimTime s_to_us(std::int64_t v) { return v * 1'000'000; }

constexpr std::int64_t div_ceil(std::int64_t num, std::int64_t den)
{
  return (num + den - 1) / den;
}

// Wire serialization delay for size_bytes at bandwidth_bps, rounded up to
// the next microsecond.
constexpr SimTime serialization_us(std::int64_t size_bytes, std::int64_t bandwidth_bps)
{
  return div_ceil(size_bytes * 8 * 1'000'000, bandwidth_bps);
}

} // namespace pecsim
