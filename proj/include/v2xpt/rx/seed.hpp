#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "v2xpt/bits.hpp"
#include "v2xpt/frame/constants.hpp"
#include "v2xpt/frame/data_unit.hpp"
#include "v2xpt/frame/insert_pt.hpp"
#include "v2xpt/frame/mcs.hpp"
#include "v2xpt/rx/demod.hpp"
#include "v2xpt/rx/viterbi.hpp"
#include "v2xpt/tx/conv_code.hpp"
#include "v2xpt/tx/interleaver.hpp"
#include "v2xpt/tx/ofdm_grid.hpp"
#include "v2xpt/tx/scrambler.hpp"
#include "v2xpt/tx/transmitter.hpp"

namespace v2xpt {

struct SeedEstimate {
  std::optional<ScramblerState> seed;  // empty if the decoded register was all zero
  Bits head;                           // decoded, still scrambled, leading DATA bits
  std::optional<int> pt_spacing;       // M'_P read from the descrambled SERVICE field
};

/// Decodes the first `n_symbols` DATA symbols equalized with the LT estimate,
/// Viterbi with traceback from the zero state, and inverts the scrambler on
/// the first seven bits (SERVICE starts with seven zeros).
inline SeedEstimate estimate_scrambler_seed_detail(const CellGrid& r, std::span<const Complex> h_lt, double sigma2,
                                                   const McsSpec& mcs, int n_symbols) {
  const int first = FrameConstants::first_data_row;
  if (n_symbols < 1 || first + n_symbols > r.rows()) {
    throw std::invalid_argument("estimate_scrambler_seed: symbol count outside the frame");
  }
  if (n_symbols * mcs.n_dbps < FrameConstants::n_serv) {
    throw std::invalid_argument("estimate_scrambler_seed: too few symbols to cover SERVICE");
  }
  const std::vector<int> perm = interleaver_permutation(mcs.n_cbps, mcs.n_bpsc);
  std::vector<double> llrs;
  for (int row = first; row < first + n_symbols; ++row) {
    const auto l = row_llrs(r.row_bins(row), h_lt, sigma2, mcs, perm);
    llrs.insert(llrs.end(), l.begin(), l.end());
  }
  SeedEstimate est;
  est.head = viterbi_decode(llrs, 0, std::nullopt);
  const unsigned reg = recover_scrambler_register(std::span<const Bit>(est.head).first(7));
  if (reg != 0) {
    est.seed = ScramblerState(reg);
    const Bits service = scramble(std::span<const Bit>(est.head).first(FrameConstants::n_serv), *est.seed);
    est.pt_spacing = parse_service_pt_spacing(service);
  }
  return est;
}

inline ScramblerState estimate_scrambler_seed(const CellGrid& r, std::span<const Complex> h_lt, double sigma2,
                                              const McsSpec& mcs, int n_symbols = 3) {
  const SeedEstimate est = estimate_scrambler_seed_detail(r, h_lt, sigma2, mcs, n_symbols);
  if (!est.seed) throw std::runtime_error("estimate_scrambler_seed: decoded register is all zero");
  return *est.seed;
}

/// Scrambled PTb copies as they appear in the DATA unit for a given seed.
inline std::vector<Bits> scrambled_ptb_blocks(ScramblerState seed, const PtbSequence& ptb, const FrameLayout& layout) {
  std::vector<Bits> out;
  if (layout.ptb_offsets.empty()) return out;
  const std::size_t end = layout.ptb_unit_offset(layout.ptb_offsets.size() - 1) + ptb.size();
  const Bits seq = scrambler_sequence(seed, end);
  for (std::size_t i = 0; i < layout.ptb_offsets.size(); ++i) {
    const std::size_t off = layout.ptb_unit_offset(i);
    Bits b(ptb.size());
    for (std::size_t j = 0; j < ptb.size(); ++j) b[j] = ptb.bits[j] ^ seq[off + j];
    out.push_back(std::move(b));
  }
  return out;
}

struct PtSymbols {
  std::vector<int> rows;
  std::vector<std::vector<Complex>> points;  // 48 per row, data subcarriers in ascending order
};

/// Replays the transmitter on the PTb regions: the encoder state entering a
/// PT row is fixed by the six scrambled termination bits before it.
inline PtSymbols regenerate_pt_symbols(ScramblerState seed, const PtbSequence& ptb, const FrameLayout& layout,
                                       const McsSpec& mcs) {
  if (layout.kind != FrameKind::Modified) throw std::invalid_argument("regenerate_pt_symbols: layout is not an MF");
  if (ptb.size() != static_cast<std::size_t>(FrameConstants::n_mem + mcs.n_dbps)) {
    throw std::invalid_argument("regenerate_pt_symbols: PTb length must be N_MEM + N_DBPS");
  }
  const std::vector<int> perm = interleaver_permutation(mcs.n_cbps, mcs.n_bpsc);
  const std::vector<Bits> blocks = scrambled_ptb_blocks(seed, ptb, layout);
  PtSymbols out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::span<const Bit> b(blocks[i]);
    unsigned state = ConvCode::state_after(b.first(FrameConstants::n_mem));
    out.rows.push_back(layout.pt_symbol_indices[i]);
    out.points.push_back(encode_data_symbol(b.subspan(FrameConstants::n_mem), state, mcs, perm));
  }
  return out;
}

}  // namespace v2xpt
