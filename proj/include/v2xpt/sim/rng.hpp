#pragma once

#include <cstdint>
#include <random>

namespace v2xpt {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Stream id of one trial; depends only on (master seed, point, trial).
inline constexpr std::uint64_t trial_stream_id(std::uint64_t master, std::uint64_t point, std::uint64_t trial) noexcept {
  return splitmix64(splitmix64(splitmix64(master) ^ point) ^ trial);
}

inline std::mt19937_64 make_trial_rng(std::uint64_t master, std::uint64_t point, std::uint64_t trial) {
  return std::mt19937_64(trial_stream_id(master, point, trial));
}

}  // namespace v2xpt
