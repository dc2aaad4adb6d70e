#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace v2xpt {

/// One bit per element, values 0 or 1.
using Bit = std::uint8_t;
using Bits = std::vector<Bit>;

/// Expands octets into bits, most significant bit first.
inline Bits bytes_to_bits(std::span<const std::uint8_t> bytes) {
  Bits out;
  out.reserve(bytes.size() * 8);
  for (std::uint8_t byte : bytes) {
    for (int i = 7; i >= 0; --i) {
      out.push_back(static_cast<Bit>((byte >> i) & 1U));
    }
  }
  return out;
}

/// Packs bits into octets, most significant bit first. Length must be a multiple of 8.
inline std::vector<std::uint8_t> bits_to_bytes(std::span<const Bit> bits) {
  if (bits.size() % 8 != 0) {
    throw std::invalid_argument("bits_to_bytes: bit count is not a multiple of 8");
  }
  std::vector<std::uint8_t> out(bits.size() / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    out[i / 8] = static_cast<std::uint8_t>(out[i / 8] | ((bits[i] & 1U) << (7 - i % 8)));
  }
  return out;
}

inline void append(Bits& dst, std::span<const Bit> src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

/// Writes `width` bits of `value`, least significant bit first.
inline void append_lsb_first(Bits& dst, std::uint32_t value, int width) {
  for (int i = 0; i < width; ++i) {
    dst.push_back(static_cast<Bit>((value >> i) & 1U));
  }
}

inline std::size_t count_differences(std::span<const Bit> a, std::span<const Bit> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("count_differences: length mismatch");
  }
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    n += (a[i] != b[i]) ? 1 : 0;
  }
  return n;
}

}  // namespace v2xpt
