#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

#include "v2xpt/bits.hpp"

namespace v2xpt {

/// Initial state of the x^7 + x^4 + 1 data scrambler. Bit i holds x_{i+1};
/// x_1 is the most recently shifted-in bit.
class ScramblerState {
 public:
  constexpr ScramblerState() = default;
  explicit constexpr ScramblerState(unsigned value) : value_(static_cast<std::uint8_t>(value & 0x7FU)) {
    if (value == 0 || value > 0x7FU) {
      throw std::invalid_argument("ScramblerState: seed must be in [1, 127]");
    }
  }
  constexpr unsigned value() const noexcept { return value_; }
  friend constexpr bool operator==(ScramblerState, ScramblerState) = default;

 private:
  std::uint8_t value_ = 0x7F;
};

/// Frame-synchronous LFSR. Each step emits x_4 ^ x_7 and shifts it into x_1.
class Scrambler {
 public:
  explicit constexpr Scrambler(ScramblerState seed) : reg_(seed.value()) {}

  constexpr Bit next() noexcept {
    const unsigned fb = ((reg_ >> 3) ^ (reg_ >> 6)) & 1U;
    reg_ = ((reg_ << 1) | fb) & 0x7FU;
    return static_cast<Bit>(fb);
  }
  constexpr unsigned state() const noexcept { return reg_; }

 private:
  unsigned reg_;
};

inline Bits scrambler_sequence(ScramblerState seed, std::size_t n) {
  Scrambler s(seed);
  Bits out(n);
  for (auto& b : out) {
    b = s.next();
  }
  return out;
}

/// XOR with the scrambler sequence; applying it twice with the same seed is the identity.
inline Bits scramble(std::span<const Bit> bits, ScramblerState seed) {
  Scrambler s(seed);
  Bits out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    out[i] = static_cast<Bit>((bits[i] ^ s.next()) & 1U);
  }
  return out;
}

/// Initial state that produces `first_seven` as the first seven sequence bits.
/// After seven steps the register holds those bits (x_1 = newest); the
/// recurrence is then run backwards seven steps.
inline unsigned recover_scrambler_register(std::span<const Bit> first_seven) {
  if (first_seven.size() < 7) {
    throw std::invalid_argument("recover_scrambler_register: need 7 bits");
  }
  unsigned reg = 0;
  for (int i = 0; i < 7; ++i) {
    reg |= static_cast<unsigned>(first_seven[static_cast<std::size_t>(i)] & 1U) << (6 - i);
  }
  for (int step = 0; step < 7; ++step) {
    // reg = (prev << 1 | (prev_x4 ^ prev_x7)) with prev_x4 = x_5 now.
    const unsigned x1 = reg & 1U;
    const unsigned x5 = (reg >> 4) & 1U;
    const unsigned prev_x7 = x1 ^ x5;
    reg = (reg >> 1) | (prev_x7 << 6);
  }
  return reg;
}

/// Seed from the first seven scrambled SERVICE bits (SERVICE is zero before
/// scrambling). Throws if the bits imply the all-zero register.
inline ScramblerState recover_scrambler_seed(std::span<const Bit> first_seven) {
  const unsigned reg = recover_scrambler_register(first_seven);
  if (reg == 0) {
    throw std::runtime_error("recover_scrambler_seed: decoded bits imply the all-zero state");
  }
  return ScramblerState(reg);
}

}  // namespace v2xpt
