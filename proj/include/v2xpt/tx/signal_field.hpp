#pragma once

#include <stdexcept>
#include <vector>

#include "v2xpt/bits.hpp"
#include "v2xpt/frame/constants.hpp"
#include "v2xpt/frame/mcs.hpp"
#include "v2xpt/tx/conv_code.hpp"
#include "v2xpt/tx/interleaver.hpp"
#include "v2xpt/tx/mapper.hpp"

namespace v2xpt {

inline constexpr int kSignalReservedBit = 4;
inline constexpr int kSignalParityBit = 17;

/// RATE(0-3) | reserved(4) | LENGTH(5-16, LSB first) | parity(17) | tail(18-23).
/// The reserved bit flags a modified frame.
inline Bits signal_field_bits(int psdu_octets, const McsSpec& mcs, bool is_mf) {
  if (psdu_octets < 0 || psdu_octets > FrameConstants::max_psdu_octets) {
    throw std::out_of_range("signal_field_bits: LENGTH must be in [0, 4095]");
  }
  Bits bits;
  bits.reserve(24);
  append_lsb_first(bits, mcs.rate_bits, 4);
  bits.push_back(is_mf ? 1 : 0);
  append_lsb_first(bits, static_cast<std::uint32_t>(psdu_octets), 12);
  Bit parity = 0;
  for (Bit b : bits) parity ^= b;
  bits.push_back(parity);
  bits.resize(24, 0);
  return bits;
}

/// 48 BPSK symbols: rate-1/2 coded, interleaved, not scrambled.
inline std::vector<Complex> build_signal_symbol(int psdu_octets, const McsSpec& mcs, bool is_mf) {
  const Bits field = signal_field_bits(psdu_octets, mcs, is_mf);
  const Bits coded = conv_encode(field);
  static const std::vector<int> perm = interleaver_permutation(48, 1);
  const Bits inter = interleave<Bit>(coded, perm);
  return map_symbols(inter, Modulation::Bpsk);
}

}  // namespace v2xpt
