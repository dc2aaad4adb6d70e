#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "v2xpt/bits.hpp"
#include "v2xpt/tx/conv_code.hpp"

namespace v2xpt {

/// Soft-input Viterbi decoder for the (133, 171) code.
///
/// `llrs` holds two values per information bit (A then B), positive meaning
/// bit 0 is more likely; punctured positions carry 0. The path metric is
/// sum(llr * (1 - 2c)), maximized. Ties go to the lower predecessor state
/// and, without a known end state, to the lowest-index best final state.
inline Bits viterbi_decode(std::span<const double> llrs, unsigned init_state = 0,
                           std::optional<unsigned> end_state = std::nullopt) {
  if (llrs.size() % 2 != 0) throw std::invalid_argument("viterbi_decode: LLR count must be even");
  if (init_state >= ConvCode::num_states || (end_state && *end_state >= ConvCode::num_states)) {
    throw std::invalid_argument("viterbi_decode: state out of range");
  }
  constexpr int ns = ConvCode::num_states;
  static const auto outputs = [] {
    std::array<std::array<unsigned, 2>, ns> t{};
    for (unsigned s = 0; s < ns; ++s) {
      for (unsigned in = 0; in < 2; ++in) t[s][in] = ConvCode::output(s, in);
    }
    return t;
  }();

  const std::size_t n = llrs.size() / 2;
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  std::array<double, ns> metric;
  std::array<double, ns> next;
  metric.fill(neg_inf);
  metric[init_state] = 0.0;
  std::vector<std::uint64_t> decisions(n, 0);

  for (std::size_t t = 0; t < n; ++t) {
    const double la = llrs[2 * t];
    const double lb = llrs[2 * t + 1];
    // Branch metric indexed by the output pair (A << 1 | B).
    const std::array<double, 4> bm{la + lb, la - lb, -la + lb, -la - lb};
    std::uint64_t dec = 0;
    for (unsigned s_next = 0; s_next < ns; ++s_next) {
      const unsigned in = s_next >> 5;
      const unsigned p0 = (s_next << 1) & 0x3FU;
      const unsigned p1 = p0 | 1U;
      const double m0 = metric[p0] + bm[outputs[p0][in]];
      const double m1 = metric[p1] + bm[outputs[p1][in]];
      if (m1 > m0) {
        next[s_next] = m1;
        dec |= std::uint64_t{1} << s_next;
      } else {
        next[s_next] = m0;
      }
    }
    decisions[t] = dec;
    metric = next;
  }

  unsigned state = 0;
  if (end_state) {
    state = *end_state;
  } else {
    for (unsigned s = 1; s < ns; ++s) {
      if (metric[s] > metric[state]) state = s;
    }
  }
  Bits out(n);
  for (std::size_t t = n; t-- > 0;) {
    out[t] = static_cast<Bit>(state >> 5);
    const unsigned low = static_cast<unsigned>((decisions[t] >> state) & 1U);
    state = ((state << 1) & 0x3FU) | low;
  }
  return out;
}

}  // namespace v2xpt
