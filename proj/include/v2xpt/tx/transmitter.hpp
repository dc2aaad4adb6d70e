#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "v2xpt/bits.hpp"
#include "v2xpt/frame/constants.hpp"
#include "v2xpt/frame/data_unit.hpp"
#include "v2xpt/frame/insert_pt.hpp"
#include "v2xpt/frame/mcs.hpp"
#include "v2xpt/tx/conv_code.hpp"
#include "v2xpt/tx/interleaver.hpp"
#include "v2xpt/tx/mapper.hpp"
#include "v2xpt/tx/ofdm_grid.hpp"
#include "v2xpt/tx/puncture.hpp"
#include "v2xpt/tx/scrambler.hpp"
#include "v2xpt/tx/signal_field.hpp"

namespace v2xpt {

/// Encodes one DATA symbol worth of scrambled bits (N_DBPS) starting from
/// encoder state `state`, which is advanced. Returns 48 constellation points.
inline std::vector<Complex> encode_data_symbol(std::span<const Bit> scrambled, unsigned& state, const McsSpec& mcs,
                                               std::span<const int> perm) {
  if (scrambled.size() != static_cast<std::size_t>(mcs.n_dbps)) {
    throw std::invalid_argument("encode_data_symbol: need N_DBPS bits");
  }
  ConvEncoder enc(state);
  Bits coded;
  coded.reserve(scrambled.size() * 2);
  for (Bit b : scrambled) enc.push(b, coded);
  state = enc.state();
  const Bits punct = puncture(coded, mcs.code_rate);
  const Bits inter = interleave<Bit>(punct, perm);
  return map_symbols(inter, mcs.modulation);
}

struct TxConfig {
  McsSpec mcs = mcs_table(2);
  FrameKind kind = FrameKind::Standard;
  int m_p = 8;
  ScramblerState seed{0x5D};
  Bits mac_header = default_mac_header();
  std::optional<PtbSequence> ptb;  // defaults to make_default_ptb(mcs)
};

struct TxFrame {
  FrameLayout layout;
  Bits modified_fb;
  Bits psdu;
  DataUnit data_unit;  // before scrambling
  Bits scrambled;      // after scrambling, TAIL reset to zero
  OfdmGrid grid;
};

/// FB -> (InsertPT) -> PSDU -> DATA unit -> scramble -> encode/puncture ->
/// interleave -> map -> grid with LT, SIGNAL and comb pilots.
inline TxFrame build_frame(std::span<const Bit> fb, const TxConfig& cfg) {
  TxFrame tx;
  const McsSpec& mcs = cfg.mcs;
  std::optional<int> service_spacing;
  if (cfg.kind == FrameKind::Modified) {
    const PtbSequence ptb = cfg.ptb ? *cfg.ptb : make_default_ptb(mcs);
    auto ins = insert_pt(fb, ptb, mcs, cfg.m_p);
    tx.modified_fb = std::move(ins.modified_fb);
    tx.layout = std::move(ins.layout);
    service_spacing = cfg.m_p;
  } else {
    tx.modified_fb.assign(fb.begin(), fb.end());
    tx.layout = standard_layout(fb.size(), mcs);
  }
  tx.psdu = build_psdu(tx.modified_fb, cfg.mac_header);
  const Bits service = make_service_field(service_spacing);
  tx.data_unit = assemble_data_unit(tx.psdu, mcs, service);

  tx.scrambled = scramble(tx.data_unit.bits, cfg.seed);
  for (int i = 0; i < FrameConstants::n_mem; ++i) {
    tx.scrambled[tx.data_unit.tail_offset + static_cast<std::size_t>(i)] = 0;
  }

  const int psdu_octets = static_cast<int>(tx.psdu.size() / 8);
  std::vector<Complex> symbols = build_signal_symbol(psdu_octets, mcs, cfg.kind == FrameKind::Modified);
  symbols.reserve(static_cast<std::size_t>(tx.data_unit.n_symbols + 1) * FrameConstants::n_data_sc);
  const std::vector<int> perm = interleaver_permutation(mcs.n_cbps, mcs.n_bpsc);
  unsigned state = 0;
  const std::span<const Bit> scr(tx.scrambled);
  for (int sym = 0; sym < tx.data_unit.n_symbols; ++sym) {
    const auto chunk = scr.subspan(static_cast<std::size_t>(sym) * static_cast<std::size_t>(mcs.n_dbps),
                                   static_cast<std::size_t>(mcs.n_dbps));
    const auto pts = encode_data_symbol(chunk, state, mcs, perm);
    symbols.insert(symbols.end(), pts.begin(), pts.end());
  }
  tx.grid = assemble_grid(symbols, tx.layout.m_total);
  return tx;
}

}  // namespace v2xpt
