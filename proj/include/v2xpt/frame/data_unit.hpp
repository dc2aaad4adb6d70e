#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>

#include "v2xpt/bits.hpp"
#include "v2xpt/frame/constants.hpp"
#include "v2xpt/frame/crc32.hpp"
#include "v2xpt/frame/mcs.hpp"

namespace v2xpt {

/// A fixed 36-octet header: QoS data frame to broadcast, followed by an
/// LLC/SNAP header for the WAVE short message ethertype. Only its length
/// matters to the PHY; the content just has to be identical at both ends.
inline Bits default_mac_header() {
  static constexpr std::array<std::uint8_t, 36> octets{
      0x88, 0x00, 0x00, 0x00,              // frame control, duration
      0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF,  // receiver: broadcast
      0x02, 0x00, 0x5E, 0x10, 0x00, 0x01,  // transmitter
      0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF,  // wildcard BSSID
      0x00, 0x00,                          // sequence control
      0x00, 0x00,                          // QoS control
      0xAA, 0xAA, 0x03, 0x00, 0x00, 0x00,  // LLC/SNAP
      0x88, 0xDC,                          // ethertype
      0x03, 0x20,                          // WSMP version, PSID
  };
  return bytes_to_bits(octets);
}

/// MAC header || FB || FCS(header || FB).
inline Bits build_psdu(std::span<const Bit> fb, std::span<const Bit> mac_header) {
  if (fb.size() % 8 != 0) {
    throw std::invalid_argument("build_psdu: frame body is not octet aligned");
  }
  if (mac_header.size() != static_cast<std::size_t>(FrameConstants::n_mach)) {
    throw std::invalid_argument("build_psdu: MAC header must be 288 bits");
  }
  Bits psdu;
  psdu.reserve(mac_header.size() + fb.size() + FrameConstants::n_crc);
  append(psdu, mac_header);
  append(psdu, fb);
  const Bits fcs = crc32_bits(crc32(psdu));
  append(psdu, fcs);
  return psdu;
}

inline Bits build_psdu(std::span<const Bit> fb) {
  const Bits header = default_mac_header();
  return build_psdu(fb, header);
}

// SERVICE layout: bits 0-6 scrambler initialization (zero before
// scrambling), bit 7 set when PT symbols are present, bits 8-12 hold
// M'_P - 1 least significant bit first, bits 13-15 zero.
inline constexpr int kServiceMfFlagBit = 7;
inline constexpr int kServiceSpacingBit = 8;
inline constexpr int kServiceSpacingWidth = 5;

inline Bits make_service_field(std::optional<int> pt_spacing = std::nullopt) {
  Bits service(FrameConstants::n_serv, 0);
  if (pt_spacing) {
    if (*pt_spacing < 1 || *pt_spacing > FrameConstants::max_pt_spacing) {
      throw std::invalid_argument("make_service_field: PT spacing must be in [1, 32]");
    }
    service[kServiceMfFlagBit] = 1;
    const auto code = static_cast<std::uint32_t>(*pt_spacing - 1);
    for (int i = 0; i < kServiceSpacingWidth; ++i) {
      service[static_cast<std::size_t>(kServiceSpacingBit + i)] = static_cast<Bit>((code >> i) & 1U);
    }
  }
  return service;
}

/// Reads M'_P back from descrambled SERVICE bits; nullopt when the MF flag is clear.
inline std::optional<int> parse_service_pt_spacing(std::span<const Bit> service) {
  if (service.size() < static_cast<std::size_t>(FrameConstants::n_serv)) {
    throw std::invalid_argument("parse_service_pt_spacing: need 16 SERVICE bits");
  }
  if (service[kServiceMfFlagBit] == 0) {
    return std::nullopt;
  }
  int code = 0;
  for (int i = 0; i < kServiceSpacingWidth; ++i) {
    code |= (service[static_cast<std::size_t>(kServiceSpacingBit + i)] & 1) << i;
  }
  return code + 1;
}

/// Number of DATA OFDM symbols needed for a PSDU of the given length.
inline int data_symbol_count(std::size_t psdu_bits, const McsSpec& mcs) {
  const std::size_t payload = FrameConstants::n_serv + psdu_bits + FrameConstants::n_mem;
  const auto n_dbps = static_cast<std::size_t>(mcs.n_dbps);
  return static_cast<int>((payload + n_dbps - 1) / n_dbps);
}

/// SERVICE || PSDU || TAIL || PAD, before scrambling.
struct DataUnit {
  Bits bits;
  int n_symbols = 0;
  std::size_t pad_bits = 0;
  std::size_t tail_offset = 0;  // index of the first TAIL bit
};

inline DataUnit assemble_data_unit(std::span<const Bit> psdu, const McsSpec& mcs,
                                   std::span<const Bit> service) {
  if (service.size() != static_cast<std::size_t>(FrameConstants::n_serv)) {
    throw std::invalid_argument("assemble_data_unit: SERVICE must be 16 bits");
  }
  DataUnit du;
  du.n_symbols = data_symbol_count(psdu.size(), mcs);
  const std::size_t total = static_cast<std::size_t>(du.n_symbols) * static_cast<std::size_t>(mcs.n_dbps);
  du.tail_offset = FrameConstants::n_serv + psdu.size();
  du.pad_bits = total - du.tail_offset - FrameConstants::n_mem;
  du.bits.reserve(total);
  append(du.bits, service);
  append(du.bits, psdu);
  du.bits.resize(total, 0);
  return du;
}

inline DataUnit assemble_data_unit(std::span<const Bit> psdu, const McsSpec& mcs) {
  const Bits service = make_service_field();
  return assemble_data_unit(psdu, mcs, service);
}

}  // namespace v2xpt
