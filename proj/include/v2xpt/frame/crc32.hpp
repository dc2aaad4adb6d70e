#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "v2xpt/bits.hpp"

namespace v2xpt {

namespace detail {

inline constexpr std::uint32_t kCrc32ReflectedPoly = 0xEDB88320U;  // 0x04C11DB7 reflected

constexpr std::array<std::uint32_t, 256> make_crc32_table() {
  std::array<std::uint32_t, 256> table{};
  for (std::uint32_t n = 0; n < 256; ++n) {
    std::uint32_t c = n;
    for (int k = 0; k < 8; ++k) {
      c = (c & 1U) ? (kCrc32ReflectedPoly ^ (c >> 1)) : (c >> 1);
    }
    table[n] = c;
  }
  return table;
}

inline constexpr auto kCrc32Table = make_crc32_table();

}  // namespace detail

/// IEEE 802.3/802.11 frame check sequence (polynomial 0x04C11DB7, reflected,
/// init all-ones, final complement).
///
/// The bit sequence is read as MSB-first octets; each octet enters the
/// register least-significant bit first, as on the air. Trailing bits of a
/// partial octet enter one by one in sequence order.
inline std::uint32_t crc32(std::span<const Bit> bits) {
  std::uint32_t reg = 0xFFFFFFFFU;
  const std::size_t full = bits.size() / 8;
  for (std::size_t o = 0; o < full; ++o) {
    std::uint8_t byte = 0;
    for (int i = 0; i < 8; ++i) {
      byte = static_cast<std::uint8_t>((byte << 1) | (bits[o * 8 + i] & 1U));
    }
    reg = detail::kCrc32Table[(reg ^ byte) & 0xFFU] ^ (reg >> 8);
  }
  for (std::size_t i = full * 8; i < bits.size(); ++i) {
    const std::uint32_t in = bits[i] & 1U;
    const std::uint32_t mix = (reg ^ in) & 1U;
    reg = (reg >> 1) ^ (mix ? detail::kCrc32ReflectedPoly : 0U);
  }
  return ~reg;
}

/// The 32 FCS bits as appended to the frame: four octets, least significant octet first.
inline Bits crc32_bits(std::uint32_t fcs) {
  const std::array<std::uint8_t, 4> octets{
      static_cast<std::uint8_t>(fcs & 0xFFU), static_cast<std::uint8_t>((fcs >> 8) & 0xFFU),
      static_cast<std::uint8_t>((fcs >> 16) & 0xFFU), static_cast<std::uint8_t>((fcs >> 24) & 0xFFU)};
  return bytes_to_bits(octets);
}

inline std::uint32_t parse_crc32_bits(std::span<const Bit> fcs_bits) {
  if (fcs_bits.size() != 32) {
    throw std::invalid_argument("parse_crc32_bits: need exactly 32 bits");
  }
  const auto octets = bits_to_bytes(fcs_bits);
  return static_cast<std::uint32_t>(octets[0]) | (static_cast<std::uint32_t>(octets[1]) << 8) |
         (static_cast<std::uint32_t>(octets[2]) << 16) | (static_cast<std::uint32_t>(octets[3]) << 24);
}

/// Checks a sequence whose last 32 bits are the FCS of everything before them.
inline bool crc32_verify(std::span<const Bit> bits_with_fcs) {
  if (bits_with_fcs.size() < 32) {
    return false;
  }
  const std::size_t n = bits_with_fcs.size() - 32;
  return crc32(bits_with_fcs.first(n)) == parse_crc32_bits(bits_with_fcs.subspan(n));
}

}  // namespace v2xpt
