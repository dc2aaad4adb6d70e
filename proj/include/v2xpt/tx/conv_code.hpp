#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "v2xpt/bits.hpp"

namespace v2xpt {

/// Rate-1/2, K=7 code of the OFDM PHY. Output A uses 133 (octal), output B
/// uses 171 (octal); A is sent first.
struct ConvCode {
  static constexpr int constraint_length = 7;
  static constexpr int memory = 6;
  static constexpr int num_states = 64;
  // Taps over the register (input << 6 | d1 << 5 | ... | d6), d1 the newest past input.
  static constexpr unsigned poly_a = 0133;
  static constexpr unsigned poly_b = 0171;

  /// Output pair (A in bit 1, B in bit 0) when `input` enters in `state`.
  /// State bit 5 is the newest past input, bit 0 the oldest.
  static constexpr unsigned output(unsigned state, unsigned input) noexcept {
    const unsigned reg = (input << 6) | state;
    const unsigned a = static_cast<unsigned>(std::popcount(reg & poly_a)) & 1U;
    const unsigned b = static_cast<unsigned>(std::popcount(reg & poly_b)) & 1U;
    return (a << 1) | b;
  }
  static constexpr unsigned next_state(unsigned state, unsigned input) noexcept {
    return ((input << 6) | state) >> 1;
  }
  /// State reached after feeding `bits` (at least six) from any state.
  static unsigned state_after(std::span<const Bit> bits) {
    if (bits.size() < static_cast<std::size_t>(memory)) {
      throw std::invalid_argument("ConvCode::state_after: need at least 6 bits");
    }
    unsigned s = 0;
    for (Bit b : bits.last(memory)) {
      s = next_state(s, b & 1U);
    }
    return s;
  }
};

class ConvEncoder {
 public:
  explicit ConvEncoder(unsigned initial_state = 0) : state_(initial_state & 0x3FU) {}

  void push(Bit in, Bits& out) {
    const unsigned pair = ConvCode::output(state_, in & 1U);
    out.push_back(static_cast<Bit>(pair >> 1));
    out.push_back(static_cast<Bit>(pair & 1U));
    state_ = ConvCode::next_state(state_, in & 1U);
  }
  unsigned state() const noexcept { return state_; }

 private:
  unsigned state_;
};

/// Encodes from `initial_state` (all-zero by default). Termination is the
/// caller's job: append six zero bits to end in state 0.
inline Bits conv_encode(std::span<const Bit> bits, unsigned initial_state = 0) {
  ConvEncoder enc(initial_state);
  Bits out;
  out.reserve(bits.size() * 2);
  for (Bit b : bits) {
    enc.push(b, out);
  }
  return out;
}

}  // namespace v2xpt
