#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "v2xpt/bits.hpp"
#include "v2xpt/frame/mcs.hpp"

namespace v2xpt {

/// Keep-mask over one puncturing period of the rate-1/2 mother code output
/// (A0 B0 A1 B1 ...). Rate 2/3 drops B1; rate 3/4 drops B1 and A2.
inline std::vector<bool> puncture_mask(CodeRate rate) {
  switch (rate) {
    case CodeRate::R1_2: return {true, true};
    case CodeRate::R2_3: return {true, true, true, false};
    case CodeRate::R3_4: return {true, true, true, false, false, true};
  }
  throw std::invalid_argument("puncture_mask: unsupported rate");
}

/// Number of transmitted bits for `coded` mother-code bits (coded must cover whole periods).
inline std::size_t punctured_length(std::size_t coded, CodeRate rate) {
  const auto mask = puncture_mask(rate);
  if (coded % mask.size() != 0) {
    throw std::invalid_argument("punctured_length: coded length is not a whole number of periods");
  }
  std::size_t kept = 0;
  for (bool k : mask) kept += k ? 1 : 0;
  return coded / mask.size() * kept;
}

inline Bits puncture(std::span<const Bit> coded, CodeRate rate) {
  const auto mask = puncture_mask(rate);
  if (coded.size() % mask.size() != 0) {
    throw std::invalid_argument("puncture: coded length is not a whole number of periods");
  }
  Bits out;
  out.reserve(coded.size());
  for (std::size_t i = 0; i < coded.size(); ++i) {
    if (mask[i % mask.size()]) out.push_back(coded[i]);
  }
  return out;
}

/// Per-position mask for `coded` mother-code bits; false marks deleted positions.
inline std::vector<bool> depuncture_positions(CodeRate rate, std::size_t coded) {
  const auto mask = puncture_mask(rate);
  std::vector<bool> out(coded);
  for (std::size_t i = 0; i < coded; ++i) out[i] = mask[i % mask.size()];
  return out;
}

/// Re-expands received soft values to mother-code length, inserting `fill`
/// (a neutral LLR) at deleted positions.
template <typename T>
std::vector<T> depuncture(std::span<const T> received, CodeRate rate, T fill = T{}) {
  const auto mask = puncture_mask(rate);
  std::size_t kept = 0;
  for (bool k : mask) kept += k ? 1 : 0;
  if (received.size() % kept != 0) {
    throw std::invalid_argument("depuncture: received length is not a whole number of periods");
  }
  std::vector<T> out;
  out.reserve(received.size() / kept * mask.size());
  std::size_t src = 0;
  while (src < received.size()) {
    for (bool k : mask) {
      out.push_back(k ? received[src++] : fill);
    }
  }
  return out;
}

}  // namespace v2xpt
