#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "v2xpt/frame/constants.hpp"

namespace v2xpt {

enum class Modulation { Bpsk, Qpsk, Qam16, Qam64 };
enum class CodeRate { R1_2, R2_3, R3_4 };

constexpr int bits_per_subcarrier(Modulation m) {
  switch (m) {
    case Modulation::Bpsk: return 1;
    case Modulation::Qpsk: return 2;
    case Modulation::Qam16: return 4;
    case Modulation::Qam64: return 6;
  }
  return 0;
}

constexpr int rate_numerator(CodeRate r) {
  switch (r) {
    case CodeRate::R1_2: return 1;
    case CodeRate::R2_3: return 2;
    case CodeRate::R3_4: return 3;
  }
  return 0;
}

constexpr int rate_denominator(CodeRate r) {
  switch (r) {
    case CodeRate::R1_2: return 2;
    case CodeRate::R2_3: return 3;
    case CodeRate::R3_4: return 4;
  }
  return 1;
}

inline std::string_view to_string(Modulation m) {
  switch (m) {
    case Modulation::Bpsk: return "BPSK";
    case Modulation::Qpsk: return "QPSK";
    case Modulation::Qam16: return "16QAM";
    case Modulation::Qam64: return "64QAM";
  }
  return "?";
}

inline std::string to_string(CodeRate r) {
  return std::to_string(rate_numerator(r)) + "/" + std::to_string(rate_denominator(r));
}

/// Modulation and coding parameters of one 802.11p rate.
struct McsSpec {
  int index = 0;
  Modulation modulation = Modulation::Bpsk;
  CodeRate code_rate = CodeRate::R1_2;
  int n_bpsc = 0;  // coded bits per subcarrier
  int n_cbps = 0;  // coded bits per OFDM symbol
  int n_dbps = 0;  // data bits per OFDM symbol
  std::uint8_t rate_bits = 0;  // SIGNAL RATE field, R1 in bit 0

  friend bool operator==(const McsSpec&, const McsSpec&) = default;
};

inline constexpr int kMcsCount = 8;

/// The eight rates of the OFDM PHY (10 MHz channel: 3, 4.5, 6, 9, 12, 18, 24, 27 Mb/s).
inline McsSpec mcs_table(int index) {
  struct Row {
    Modulation m;
    CodeRate r;
    std::uint8_t rate_bits;  // R1..R4 as transmitted, R1 first
  };
  // RATE field R1-R4: 1101, 1111, 0101, 0111, 1001, 1011, 0001, 0011
  static constexpr std::array<Row, kMcsCount> rows{{
      {Modulation::Bpsk, CodeRate::R1_2, 0b1011},
      {Modulation::Bpsk, CodeRate::R3_4, 0b1111},
      {Modulation::Qpsk, CodeRate::R1_2, 0b1010},
      {Modulation::Qpsk, CodeRate::R3_4, 0b1110},
      {Modulation::Qam16, CodeRate::R1_2, 0b1001},
      {Modulation::Qam16, CodeRate::R3_4, 0b1101},
      {Modulation::Qam64, CodeRate::R2_3, 0b1000},
      {Modulation::Qam64, CodeRate::R3_4, 0b1100},
  }};
  if (index < 0 || index >= kMcsCount) {
    throw std::out_of_range("mcs_table: index must be in [0, 7]");
  }
  const Row& row = rows[static_cast<std::size_t>(index)];
  McsSpec spec;
  spec.index = index;
  spec.modulation = row.m;
  spec.code_rate = row.r;
  spec.n_bpsc = bits_per_subcarrier(row.m);
  spec.n_cbps = FrameConstants::n_data_sc * spec.n_bpsc;
  spec.n_dbps = spec.n_cbps * rate_numerator(row.r) / rate_denominator(row.r);
  spec.rate_bits = row.rate_bits;
  return spec;
}

}  // namespace v2xpt
