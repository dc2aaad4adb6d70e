#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "v2xpt/bits.hpp"
#include "v2xpt/frame/mcs.hpp"

namespace v2xpt {

using Complex = std::complex<double>;

namespace detail {

// Gray-coded amplitude per axis, indexed by the axis bits read first-bit-MSB.
inline double axis_level(Modulation m, unsigned bits) {
  switch (m) {
    case Modulation::Bpsk:
    case Modulation::Qpsk:
      return bits ? 1.0 : -1.0;
    case Modulation::Qam16: {
      static constexpr std::array<double, 4> lv{-3, -1, 3, 1};  // 00 01 10 11
      return lv[bits & 3U];
    }
    case Modulation::Qam64: {
      static constexpr std::array<double, 8> lv{-7, -5, -1, -3, 7, 5, 1, 3};  // 000 .. 111
      return lv[bits & 7U];
    }
  }
  return 0.0;
}

inline double normalization(Modulation m) {
  switch (m) {
    case Modulation::Bpsk: return 1.0;
    case Modulation::Qpsk: return 1.0 / std::sqrt(2.0);
    case Modulation::Qam16: return 1.0 / std::sqrt(10.0);
    case Modulation::Qam64: return 1.0 / std::sqrt(42.0);
  }
  return 0.0;
}

}  // namespace detail

/// Gray mapping with unit average energy. BPSK: 0 -> -1, 1 -> +1. Higher
/// orders put the first half of each bit group on I and the rest on Q.
inline Complex map_point(std::span<const Bit> group, Modulation m) {
  const int n = bits_per_subcarrier(m);
  if (group.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("map_point: wrong bit group size");
  }
  if (m == Modulation::Bpsk) {
    return {group[0] ? 1.0 : -1.0, 0.0};
  }
  const int half = n / 2;
  unsigned ib = 0;
  unsigned qb = 0;
  for (int i = 0; i < half; ++i) {
    ib = (ib << 1) | (group[static_cast<std::size_t>(i)] & 1U);
    qb = (qb << 1) | (group[static_cast<std::size_t>(half + i)] & 1U);
  }
  const double k = detail::normalization(m);
  return {k * detail::axis_level(m, ib), k * detail::axis_level(m, qb)};
}

inline std::vector<Complex> map_symbols(std::span<const Bit> bits, Modulation m) {
  const auto n = static_cast<std::size_t>(bits_per_subcarrier(m));
  if (bits.size() % n != 0) {
    throw std::invalid_argument("map_symbols: bit count not divisible by N_BPSC");
  }
  std::vector<Complex> out;
  out.reserve(bits.size() / n);
  for (std::size_t i = 0; i < bits.size(); i += n) {
    out.push_back(map_point(bits.subspan(i, n), m));
  }
  return out;
}

/// All 2^N_BPSC points, indexed by the bit group read first-bit-MSB.
inline std::vector<Complex> constellation(Modulation m) {
  const int n = bits_per_subcarrier(m);
  std::vector<Complex> pts;
  for (unsigned v = 0; v < (1U << n); ++v) {
    Bits group(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) group[static_cast<std::size_t>(i)] = static_cast<Bit>((v >> (n - 1 - i)) & 1U);
    pts.push_back(map_point(group, m));
  }
  return pts;
}

}  // namespace v2xpt
