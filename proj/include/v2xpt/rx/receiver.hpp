#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "v2xpt/bits.hpp"
#include "v2xpt/channel/correlation.hpp"
#include "v2xpt/frame/constants.hpp"
#include "v2xpt/frame/crc32.hpp"
#include "v2xpt/frame/data_unit.hpp"
#include "v2xpt/frame/insert_pt.hpp"
#include "v2xpt/frame/mcs.hpp"
#include "v2xpt/rx/demod.hpp"
#include "v2xpt/rx/estimation.hpp"
#include "v2xpt/rx/seed.hpp"
#include "v2xpt/rx/viterbi.hpp"
#include "v2xpt/tx/ofdm_grid.hpp"
#include "v2xpt/tx/scrambler.hpp"
#include "v2xpt/tx/signal_field.hpp"

namespace v2xpt {

enum class ReceiverKind { LTLS, SFMMSE, MFMMSE, MBMMSE, PerfectCSI };

inline std::string_view to_string(ReceiverKind k) {
  switch (k) {
    case ReceiverKind::LTLS: return "ltls";
    case ReceiverKind::SFMMSE: return "sfmmse";
    case ReceiverKind::MFMMSE: return "mfmmse";
    case ReceiverKind::MBMMSE: return "mbmmse";
    case ReceiverKind::PerfectCSI: return "perfect";
  }
  return "?";
}

inline ReceiverKind parse_receiver_kind(std::string_view s) {
  for (ReceiverKind k : {ReceiverKind::LTLS, ReceiverKind::SFMMSE, ReceiverKind::MFMMSE, ReceiverKind::MBMMSE,
                         ReceiverKind::PerfectCSI}) {
    if (s == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown receiver kind: " + std::string(s));
}

inline bool requires_modified_frame(ReceiverKind k) { return k == ReceiverKind::MFMMSE || k == ReceiverKind::MBMMSE; }

struct ReceiverConfig {
  ReceiverKind kind = ReceiverKind::SFMMSE;
  int traceback_depth = 96;         // bits; sets the minimum seed-estimation span
  int service_decode_symbols = 3;   // DATA symbols used for seed estimation
  bool signal_as_pilot = false;     // treat re-encoded SIGNAL data cells as pilots
};

/// What the receiver knows about a frame besides the samples: length, MCS,
/// kind and PT spacing come from SIGNAL out of band; the PTb is agreed a priori.
struct FrameMeta {
  FrameLayout layout;
  McsSpec mcs;
  PtbSequence ptb;
};

inline FrameMeta make_frame_meta(std::size_t n_fb, const McsSpec& mcs, FrameKind kind, int m_p = 8,
                                 std::optional<PtbSequence> ptb = std::nullopt) {
  FrameMeta meta;
  meta.mcs = mcs;
  meta.ptb = ptb ? *ptb : make_default_ptb(mcs);
  if (kind == FrameKind::Modified) {
    const Bits zeros(n_fb, 0);
    meta.layout = insert_pt(zeros, meta.ptb, mcs, m_p).layout;
  } else {
    meta.layout = standard_layout(n_fb, mcs);
  }
  return meta;
}

struct RxDiagnostics {
  bool seed_recovered = false;
  unsigned seed = 0;
  std::optional<int> pt_spacing;
  bool pt_spacing_ok = true;
  bool crc_ok = false;
  double estimator_mse = std::numeric_limits<double>::quiet_NaN();
  Bits modified_fb;                      // decoded, before PT removal
  std::vector<std::size_t> block_errors;  // filled by callers that know the truth
};

inline std::string diagnostics_csv_header() {
  return "frame,seed_recovered,seed,pt_spacing,pt_spacing_ok,crc_ok,estimator_mse,block_errors";
}

inline std::string diagnostics_csv_row(std::size_t frame, const RxDiagnostics& d) {
  std::ostringstream os;
  os << frame << ',' << d.seed_recovered << ',' << d.seed << ',';
  if (d.pt_spacing) os << *d.pt_spacing;
  os << ',' << d.pt_spacing_ok << ',' << d.crc_ok << ',';
  if (!std::isnan(d.estimator_mse)) os << d.estimator_mse;
  os << ',';
  for (std::size_t i = 0; i < d.block_errors.size(); ++i) os << (i ? ";" : "") << d.block_errors[i];
  return os.str();
}

struct RxResult {
  Bits fb;
  bool crc_ok = false;
  RxDiagnostics diag;
};

/// Decodes the bits between consecutive PTbs separately. Each segment starts
/// in the state left by the previous PTb and must end in the state its
/// following PTb's first N_MEM scrambled bits force; the known scrambled
/// PTbs are written into the output unchanged.
inline Bits blockwise_viterbi(std::span<const double> llrs, ScramblerState seed, const PtbSequence& ptb,
                              const FrameLayout& layout, std::size_t tail_end) {
  if (llrs.size() < 2 * tail_end) throw std::invalid_argument("blockwise_viterbi: too few LLRs");
  const std::vector<Bits> known = scrambled_ptb_blocks(seed, ptb, layout);
  const std::size_t mem = FrameConstants::n_mem;
  Bits out(tail_end, 0);
  std::size_t start = 0;
  unsigned init = 0;
  auto run = [&](std::size_t end, unsigned end_state) {
    const Bits seg = viterbi_decode(llrs.subspan(2 * start, 2 * (end - start)), init, end_state);
    std::copy(seg.begin(), seg.end(), out.begin() + static_cast<std::ptrdiff_t>(start));
  };
  for (std::size_t i = 0; i < known.size(); ++i) {
    const std::size_t off = layout.ptb_unit_offset(i);
    const std::span<const Bit> kb(known[i]);
    run(off + mem, ConvCode::state_after(kb.first(mem)));
    std::copy(kb.begin(), kb.end(), out.begin() + static_cast<std::ptrdiff_t>(off));
    start = off + kb.size();
    init = ConvCode::state_after(kb);
  }
  run(tail_end, 0);
  return out;
}

/// Noniterative receiver for one scenario. Construction precomputes the LMMSE
/// filters for the frame layout, noise variance and channel statistics, so
/// decode_frame is const and may run concurrently on one instance.
class Receiver {
 public:
  Receiver(ReceiverConfig cfg, FrameMeta meta, const CorrelationModel& corr, double sigma2)
      : cfg_(cfg), meta_(std::move(meta)), sigma2_(sigma2) {
    const McsSpec& mcs = meta_.mcs;
    if (mcs.modulation != Modulation::Bpsk && mcs.modulation != Modulation::Qpsk) {
      throw std::invalid_argument("Receiver: only BPSK and QPSK are supported");
    }
    if (requires_modified_frame(cfg_.kind) && meta_.layout.kind != FrameKind::Modified) {
      throw std::invalid_argument("Receiver: " + std::string(to_string(cfg_.kind)) + " requires a modified frame");
    }
    if (cfg_.traceback_depth < 5 * ConvCode::constraint_length) {
      throw std::invalid_argument("Receiver: traceback depth must be at least five constraint lengths");
    }
    if (sigma2 < 0.0) throw std::invalid_argument("Receiver: negative noise variance");
    perm_ = interleaver_permutation(mcs.n_cbps, mcs.n_bpsc);
    const int m = meta_.layout.m_total;
    const int needed = (FrameConstants::n_serv + cfg_.traceback_depth + mcs.n_dbps - 1) / mcs.n_dbps;
    seed_symbols_ = std::min(std::max(cfg_.service_decode_symbols, needed), meta_.layout.data_symbols());

    known_ = CellGrid(m);
    for (int row = 0; row < FrameConstants::n_lt; ++row) {
      for (int k : occupied_subcarriers()) known_.at(row, k) = long_training_value(k);
    }
    for (int row = FrameConstants::n_lt; row < m; ++row) {
      for (int k : kPilotSubcarriers) known_.at(row, k) = comb_pilot_value(row, k);
    }
    if (cfg_.signal_as_pilot) {
      const auto sig = build_signal_symbol(static_cast<int>(meta_.layout.psdu_bits() / 8), mcs,
                                           meta_.layout.kind == FrameKind::Modified);
      const auto& dsc = data_subcarriers();
      for (std::size_t i = 0; i < dsc.size(); ++i) known_.at(2, dsc[i]) = sig[i];
    }

    const bool uses_pt = requires_modified_frame(cfg_.kind);
    for (int row = FrameConstants::first_data_row; row < m; ++row) {
      if (uses_pt && meta_.layout.is_pt_row(row)) continue;
      decode_rows_.push_back(row);
    }

    if (cfg_.kind == ReceiverKind::SFMMSE || cfg_.kind == ReceiverKind::MFMMSE) {
      full_pilots_ = pilot_cells(0, m - 1, uses_pt);
      full_targets_ = data_cells(decode_rows_);
      full_filter_ = build(full_pilots_, full_targets_, corr);
    } else if (cfg_.kind == ReceiverKind::MBMMSE) {
      plan_blocks(corr);
    }
  }

  const ReceiverConfig& config() const noexcept { return cfg_; }
  const FrameMeta& meta() const noexcept { return meta_; }
  double sigma2() const noexcept { return sigma2_; }
  int seed_symbols() const noexcept { return seed_symbols_; }

  /// Largest LMMSE system solved (pilot count); 0 when no LMMSE is used.
  Eigen::Index max_filter_pilots() const {
    Eigen::Index n = full_filter_.pilot_count();
    for (const auto& f : block_filters_) n = std::max(n, f.pilot_count());
    return n;
  }
  std::vector<Eigen::Index> block_filter_pilots() const {
    std::vector<Eigen::Index> out;
    for (const auto& b : blocks_) out.push_back(block_filters_[b.filter].pilot_count());
    return out;
  }

  /// Channel estimate for all rows. `pt` holds regenerated PT symbols for MF kinds.
  CellGrid estimate_channel(const CellGrid& r, const CellGrid* truth, const PtSymbols* pt) const {
    const int m = meta_.layout.m_total;
    if (cfg_.kind == ReceiverKind::PerfectCSI) {
      if (!truth) throw std::invalid_argument("Receiver: perfect CSI needs the true channel");
      return *truth;
    }
    const std::vector<Complex> h_lt = ls_lt_estimate(r);
    CellGrid h(m);
    for (int row = 0; row < m; ++row) {
      auto dst = h.row_bins(row);
      std::copy(h_lt.begin(), h_lt.end(), dst.begin());
    }
    if (cfg_.kind == ReceiverKind::LTLS) return h;

    CellGrid known = known_;
    if (pt) {
      const auto& dsc = data_subcarriers();
      for (std::size_t i = 0; i < pt->rows.size(); ++i) {
        for (std::size_t j = 0; j < dsc.size(); ++j) known.at(pt->rows[i], dsc[j]) = pt->points[i][j];
      }
    }
    auto ls = [&](const Cell& c) { return r.at(c.row, c.k) / known.at(c.row, c.k); };

    if (cfg_.kind == ReceiverKind::SFMMSE || cfg_.kind == ReceiverKind::MFMMSE) {
      Eigen::VectorXcd hp(static_cast<Eigen::Index>(full_pilots_.size()));
      for (std::size_t i = 0; i < full_pilots_.size(); ++i) hp(static_cast<Eigen::Index>(i)) = ls(full_pilots_[i]);
      const Eigen::VectorXcd est = full_filter_.apply(hp);
      for (std::size_t i = 0; i < full_targets_.size(); ++i) {
        h.at(full_targets_[i].row, full_targets_[i].k) = est(static_cast<Eigen::Index>(i));
      }
      return h;
    }

    // Blockwise: the refined estimate of each block's trailing PT replaces
    // the LS values of the next block's leading PT.
    std::vector<Complex> carried;
    for (const BlockPlan& b : blocks_) {
      Eigen::VectorXcd hp(static_cast<Eigen::Index>(b.pilots.size()));
      for (std::size_t i = 0; i < b.pilots.size(); ++i) {
        hp(static_cast<Eigen::Index>(i)) = i < b.carried_pilots ? carried[i] : ls(b.pilots[i]);
      }
      const Eigen::VectorXcd est = block_filters_[b.filter].apply(hp);
      carried.clear();
      for (std::size_t i = 0; i < b.targets.size(); ++i) {
        const Complex v = est(static_cast<Eigen::Index>(i));
        h.at(b.targets[i].row, b.targets[i].k) = v;
        if (i >= b.targets.size() - b.refined_targets) carried.push_back(v);
      }
    }
    const int last_pt = meta_.layout.pt_symbol_indices.back();
    for (int row : hold_rows_) {
      for (int k : occupied_subcarriers()) h.at(row, k) = h.at(last_pt, k);
    }
    return h;
  }

  RxResult decode_frame(const CellGrid& r, const CellGrid* truth = nullptr) const {
    const FrameLayout& layout = meta_.layout;
    const McsSpec& mcs = meta_.mcs;
    if (r.rows() != layout.m_total) throw std::invalid_argument("decode_frame: grid rows do not match the layout");
    RxResult res;
    RxDiagnostics& d = res.diag;

    std::optional<ScramblerState> seed;
    std::optional<PtSymbols> pt;
    if (requires_modified_frame(cfg_.kind)) {
      const std::vector<Complex> h_lt = ls_lt_estimate(r);
      const SeedEstimate est = estimate_scrambler_seed_detail(r, h_lt, sigma2_, mcs, seed_symbols_);
      if (!est.seed) return res;
      seed = est.seed;
      d.seed_recovered = true;
      d.seed = seed->value();
      d.pt_spacing = est.pt_spacing;
      d.pt_spacing_ok = est.pt_spacing && *est.pt_spacing == layout.m_p;
      if (!d.pt_spacing_ok) return res;
      pt = regenerate_pt_symbols(*seed, meta_.ptb, layout, mcs);
    }

    const CellGrid h = estimate_channel(r, truth, pt ? &*pt : nullptr);
    if (truth) d.estimator_mse = data_mse(h, *truth);

    const std::size_t n_dbps = static_cast<std::size_t>(mcs.n_dbps);
    const std::size_t unit_len = static_cast<std::size_t>(layout.data_symbols()) * n_dbps;
    std::vector<double> llrs(2 * unit_len, 0.0);
    for (int row : decode_rows_) {
      const auto l = row_llrs(r.row_bins(row), h.row_bins(row), sigma2_, mcs, perm_);
      const std::size_t off = 2 * static_cast<std::size_t>(row - FrameConstants::first_data_row) * n_dbps;
      std::copy(l.begin(), l.end(), llrs.begin() + static_cast<std::ptrdiff_t>(off));
    }

    const std::size_t tail_offset = FrameConstants::n_serv + layout.psdu_bits();
    const std::size_t tail_end = tail_offset + FrameConstants::n_mem;
    Bits scrambled;
    if (requires_modified_frame(cfg_.kind)) {
      scrambled = blockwise_viterbi(llrs, *seed, meta_.ptb, layout, tail_end);
    } else {
      scrambled = viterbi_decode(std::span<const double>(llrs).first(2 * tail_end), 0, 0U);
      const unsigned reg = recover_scrambler_register(std::span<const Bit>(scrambled).first(7));
      if (reg == 0) return res;
      seed = ScramblerState(reg);
      d.seed_recovered = true;
      d.seed = reg;
    }

    const Bits unit = scramble(std::span<const Bit>(scrambled).first(tail_offset), *seed);
    const std::span<const Bit> psdu = std::span<const Bit>(unit).subspan(FrameConstants::n_serv, layout.psdu_bits());
    res.crc_ok = crc32_verify(psdu);
    d.crc_ok = res.crc_ok;
    const auto body = psdu.subspan(FrameConstants::n_mach, layout.modified_fb_bits);
    d.modified_fb.assign(body.begin(), body.end());
    if (layout.kind == FrameKind::Modified) {
      res.fb = strip_pt(body, layout);
    } else {
      res.fb.assign(body.begin(), body.end());
    }
    return res;
  }

 private:
  struct BlockPlan {
    std::vector<Cell> pilots;
    std::vector<Cell> targets;
    std::size_t carried_pilots = 0;   // leading pilots taken from the previous block's output
    std::size_t refined_targets = 0;  // trailing targets carried into the next block
    std::size_t filter = 0;
  };

  // Pilots on rows [r0, r1]: LT rows, comb pilots, optional SIGNAL data
  // cells and, when `with_pt`, every occupied cell of PT rows.
  std::vector<Cell> pilot_cells(int r0, int r1, bool with_pt) const {
    std::vector<Cell> out;
    for (int row = r0; row <= r1; ++row) {
      if (row < FrameConstants::n_lt || (with_pt && meta_.layout.is_pt_row(row)) ||
          (row == 2 && cfg_.signal_as_pilot)) {
        for (int k : occupied_subcarriers()) out.push_back({row, k});
      } else {
        for (int k : kPilotSubcarriers) out.push_back({row, k});
      }
    }
    return out;
  }

  static std::vector<Cell> data_cells(const std::vector<int>& rows) {
    std::vector<Cell> out;
    for (int row : rows) {
      for (int k : data_subcarriers()) out.push_back({row, k});
    }
    return out;
  }

  static LmmseFilter build_filter(const std::vector<Cell>& pilots, const std::vector<Cell>& targets,
                                  const CorrelationModel& corr, double sigma2) {
    // Every pilot is unit modulus: +-1 training and comb values, BPSK or
    // QPSK points for SIGNAL and PT cells.
    const std::vector<double> energy(pilots.size(), 1.0);
    return LmmseFilter(pilots, energy, targets, corr, sigma2);
  }

  LmmseFilter build(const std::vector<Cell>& pilots, const std::vector<Cell>& targets,
                    const CorrelationModel& corr) const {
    return build_filter(pilots, targets, corr, sigma2_);
  }

  void plan_blocks(const CorrelationModel& corr) {
    const FrameLayout& layout = meta_.layout;
    const int m = layout.m_total;
    const auto& pts = layout.pt_symbol_indices;
    auto between = [&](int a, int b) {
      std::vector<int> rows;
      for (int row = std::max(a, FrameConstants::first_data_row); row < b; ++row) rows.push_back(row);
      return rows;
    };
    auto occupied_row = [](int row) {
      std::vector<Cell> out;
      for (int k : occupied_subcarriers()) out.push_back({row, k});
      return out;
    };

    // First block: LTs up to and including the first PT.
    {
      BlockPlan b;
      b.pilots = pilot_cells(0, pts.front(), true);
      b.targets = data_cells(between(0, pts.front()));
      const auto pt_cells = occupied_row(pts.front());
      b.targets.insert(b.targets.end(), pt_cells.begin(), pt_cells.end());
      b.refined_targets = pt_cells.size();
      blocks_.push_back(std::move(b));
    }
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      BlockPlan b;
      b.pilots = occupied_row(pts[i]);
      b.carried_pilots = b.pilots.size();
      const auto rest = pilot_cells(pts[i] + 1, pts[i + 1], true);
      b.pilots.insert(b.pilots.end(), rest.begin(), rest.end());
      b.targets = data_cells(between(pts[i] + 1, pts[i + 1]));
      const auto pt_cells = occupied_row(pts[i + 1]);
      b.targets.insert(b.targets.end(), pt_cells.begin(), pt_cells.end());
      b.refined_targets = pt_cells.size();
      blocks_.push_back(std::move(b));
    }
    // Symbols after the final PT are equalized with that PT's estimate.
    for (int row = pts.back() + 1; row < m; ++row) hold_rows_.push_back(row);

    // Each block's filter is solved on block-relative rows. Carried PT
    // estimates enter with the same noise term as LS estimates; weighting
    // them by their model error variance instead raises the data-cell MSE,
    // since an LMMSE estimate is shrunk rather than truth plus white noise.
    for (BlockPlan& b : blocks_) {
      const int origin = b.pilots.front().row;
      std::vector<Cell> rp;
      std::vector<Cell> rt;
      for (const Cell& c : b.pilots) rp.push_back({c.row - origin, c.k});
      for (const Cell& c : b.targets) rt.push_back({c.row - origin, c.k});
      b.filter = block_filters_.size();
      block_filters_.push_back(build(rp, rt, corr));
    }
  }

  double data_mse(const CellGrid& h, const CellGrid& truth) const {
    double acc = 0.0;
    std::size_t n = 0;
    for (int row : decode_rows_) {
      for (int k : data_subcarriers()) {
        acc += std::norm(h.at(row, k) - truth.at(row, k));
        ++n;
      }
    }
    return n ? acc / static_cast<double>(n) : 0.0;
  }

  ReceiverConfig cfg_;
  FrameMeta meta_;
  double sigma2_ = 0.0;
  std::vector<int> perm_;
  int seed_symbols_ = 3;
  CellGrid known_;
  std::vector<int> decode_rows_;
  std::vector<Cell> full_pilots_;
  std::vector<Cell> full_targets_;
  LmmseFilter full_filter_;
  std::vector<BlockPlan> blocks_;
  std::vector<LmmseFilter> block_filters_;
  std::vector<int> hold_rows_;
};

}  // namespace v2xpt
