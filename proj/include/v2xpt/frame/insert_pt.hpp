#pragma once

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "v2xpt/bits.hpp"
#include "v2xpt/frame/constants.hpp"
#include "v2xpt/frame/data_unit.hpp"
#include "v2xpt/frame/mcs.hpp"

namespace v2xpt {

/// Raised when the frame body is shorter than the first block FBS; the
/// caller should transmit a standard frame instead.
class FrameTooShort : public std::runtime_error {
 public:
  FrameTooShort(std::size_t n_fb, std::size_t n_s)
      : std::runtime_error("frame too short for PT insertion (N_FB=" + std::to_string(n_fb) +
                           " < N_S=" + std::to_string(n_s) + "), transmit SF"),
        n_fb_(n_fb),
        n_s_(n_s) {}
  std::size_t n_fb() const noexcept { return n_fb_; }
  std::size_t n_s() const noexcept { return n_s_; }

 private:
  std::size_t n_fb_;
  std::size_t n_s_;
};

/// Known training bits: N_MEM termination bits followed by one OFDM symbol
/// worth (N_DBPS) of training bits.
struct PtbSequence {
  Bits bits;

  std::size_t size() const noexcept { return bits.size(); }
};

/// Six zero termination bits, then N_DBPS bits of the PRBS9 sequence
/// (x^9 + x^5 + 1, register initialized to all ones).
inline PtbSequence make_default_ptb(const McsSpec& mcs) {
  PtbSequence ptb;
  ptb.bits.assign(FrameConstants::n_mem, 0);
  unsigned reg = 0x1FFU;
  for (int i = 0; i < mcs.n_dbps; ++i) {
    const unsigned out = ((reg >> 8) ^ (reg >> 4)) & 1U;
    reg = ((reg << 1) | out) & 0x1FFU;
    ptb.bits.push_back(static_cast<Bit>(out));
  }
  return ptb;
}

/// Block sizes of the modified frame for one (N_FB, N_DBPS, M'_P).
struct PtGeometry {
  int m_s = 0;
  int m_p = 0;
  int m_a = 0;
  int q = 0;
  int a = 0;
  std::size_t n_s = 0;
  std::size_t n_p = 0;
  std::size_t n_a = 0;
  std::size_t n_e = 0;

  int pt_count() const noexcept { return 1 + q + a; }
};

/// Block arithmetic of the insertion procedure. Throws FrameTooShort when N_FB < N_S.
inline PtGeometry compute_pt_geometry(std::size_t n_fb, int n_dbps, int m_p) {
  if (m_p < 1) {
    throw std::invalid_argument("compute_pt_geometry: M'_P must be >= 1");
  }
  if (n_dbps <= 0) {
    throw std::invalid_argument("compute_pt_geometry: N_DBPS must be positive");
  }
  using C = FrameConstants;
  const int header = C::n_serv + C::n_mach + C::n_mem;
  PtGeometry g;
  g.m_p = m_p;
  g.m_s = std::max((header + n_dbps - 1) / n_dbps + 1, m_p);
  g.n_s = static_cast<std::size_t>(n_dbps * (g.m_s - 1) - header);
  if (n_fb < g.n_s) {
    throw FrameTooShort(n_fb, g.n_s);
  }
  g.n_p = static_cast<std::size_t>(n_dbps * m_p - C::n_mem);
  g.q = static_cast<int>((n_fb - g.n_s) / g.n_p);
  const std::size_t rem = n_fb - g.n_s - static_cast<std::size_t>(g.q) * g.n_p;
  if (rem > static_cast<std::size_t>(n_dbps)) {
    g.m_a = static_cast<int>(rem / static_cast<std::size_t>(n_dbps));
    g.n_a = static_cast<std::size_t>(g.m_a * n_dbps - C::n_mem);
    g.a = 1;
  }
  g.n_e = rem - g.n_a;
  return g;
}

enum class FrameKind { Standard, Modified };

inline std::string_view to_string(FrameKind k) { return k == FrameKind::Standard ? "SF" : "MF"; }

struct BitBlock {
  std::string name;
  std::size_t start = 0;  // in original FB coordinates
  std::size_t length = 0;
};

/// Symbol-level map of one frame. Rows count from the first LT symbol.
struct FrameLayout {
  FrameKind kind = FrameKind::Standard;
  int mcs_index = 0;
  int n_dbps = 0;
  std::size_t n_fb = 0;
  int m_total = 0;  // M or M'
  int m_s = 0;
  int m_p = 0;
  int m_a = 0;
  int m_e = 0;
  int q = 0;
  int a = 0;
  std::size_t n_s = 0;
  std::size_t n_p = 0;
  std::size_t n_a = 0;
  std::size_t n_e = 0;
  std::size_t ptb_bits = 0;
  std::size_t modified_fb_bits = 0;  // FB with PTbs and octet padding
  std::size_t pad_bits = 0;          // octet padding after the last block
  std::vector<int> pt_symbol_indices;
  std::vector<std::size_t> ptb_offsets;  // start of each PTb within the modified FB
  std::vector<BitBlock> block_bit_ranges;

  int data_symbols() const noexcept { return m_total - FrameConstants::first_data_row; }
  std::size_t psdu_bits() const noexcept {
    return FrameConstants::n_mach + modified_fb_bits + FrameConstants::n_crc;
  }
  /// Offset of PTb `i` within the (unscrambled) DATA unit.
  std::size_t ptb_unit_offset(std::size_t i) const {
    return FrameConstants::n_serv + FrameConstants::n_mach + ptb_offsets.at(i);
  }
  bool is_pt_row(int row) const {
    for (int r : pt_symbol_indices) {
      if (r == row) return true;
    }
    return false;
  }

  /// One-line key=value record for logs.
  std::string to_record() const {
    std::ostringstream os;
    os << "kind=" << to_string(kind) << " mcs=" << mcs_index << " n_dbps=" << n_dbps
       << " n_fb=" << n_fb << " m_total=" << m_total << " m_s=" << m_s << " m_p=" << m_p
       << " m_a=" << m_a << " m_e=" << m_e << " q=" << q << " a=" << a << " n_s=" << n_s
       << " n_p=" << n_p << " n_a=" << n_a << " n_e=" << n_e << " pad=" << pad_bits << " pt_rows=";
    for (std::size_t i = 0; i < pt_symbol_indices.size(); ++i) {
      os << (i ? "," : "") << pt_symbol_indices[i];
    }
    os << " blocks=";
    for (std::size_t i = 0; i < block_bit_ranges.size(); ++i) {
      const auto& b = block_bit_ranges[i];
      os << (i ? "," : "") << b.name << ":" << b.start << "+" << b.length;
    }
    return os.str();
  }
};

inline FrameLayout standard_layout(std::size_t n_fb, const McsSpec& mcs) {
  FrameLayout layout;
  layout.kind = FrameKind::Standard;
  layout.mcs_index = mcs.index;
  layout.n_dbps = mcs.n_dbps;
  layout.n_fb = n_fb;
  layout.modified_fb_bits = n_fb;
  layout.m_total = FrameConstants::first_data_row + data_symbol_count(layout.psdu_bits(), mcs);
  layout.block_bit_ranges.push_back({"FB", 0, n_fb});
  return layout;
}

struct InsertPtResult {
  Bits modified_fb;
  FrameLayout layout;
};

/// Inserts PTb copies into the frame body so that every PTb's training
/// bits fill exactly one DATA OFDM symbol once SERVICE and MAC header are
/// prepended below. Throws FrameTooShort when the procedure's else-branch applies.
inline InsertPtResult insert_pt(std::span<const Bit> fb, const PtbSequence& ptb, const McsSpec& mcs, int m_p) {
  const PtGeometry g = compute_pt_geometry(fb.size(), mcs.n_dbps, m_p);
  if (ptb.size() != static_cast<std::size_t>(FrameConstants::n_mem + mcs.n_dbps)) {
    throw std::invalid_argument("insert_pt: PTb length must be N_MEM + N_DBPS");
  }

  InsertPtResult out;
  FrameLayout& layout = out.layout;
  layout.kind = FrameKind::Modified;
  layout.mcs_index = mcs.index;
  layout.n_dbps = mcs.n_dbps;
  layout.n_fb = fb.size();
  layout.m_s = g.m_s;
  layout.m_p = g.m_p;
  layout.m_a = g.m_a;
  layout.q = g.q;
  layout.a = g.a;
  layout.n_s = g.n_s;
  layout.n_p = g.n_p;
  layout.n_a = g.n_a;
  layout.n_e = g.n_e;
  layout.ptb_bits = ptb.size();

  Bits& mfb = out.modified_fb;
  mfb.reserve(fb.size() + static_cast<std::size_t>(g.pt_count()) * ptb.size() + 8);
  std::size_t cursor = 0;
  auto take_block = [&](std::string name, std::size_t length) {
    layout.block_bit_ranges.push_back({std::move(name), cursor, length});
    mfb.insert(mfb.end(), fb.begin() + static_cast<std::ptrdiff_t>(cursor),
               fb.begin() + static_cast<std::ptrdiff_t>(cursor + length));
    cursor += length;
  };
  auto put_ptb = [&] {
    layout.ptb_offsets.push_back(mfb.size());
    append(mfb, ptb.bits);
  };

  take_block("FBS", g.n_s);
  put_ptb();
  for (int i = 0; i < g.q; ++i) {
    take_block("FB" + std::to_string(i + 1), g.n_p);
    put_ptb();
  }
  if (g.a == 1) {
    take_block("FBA", g.n_a);
    put_ptb();
  }
  take_block("FBE", g.n_e);

  layout.pad_bits = (8 - mfb.size() % 8) % 8;
  mfb.resize(mfb.size() + layout.pad_bits, 0);
  layout.modified_fb_bits = mfb.size();
  layout.m_total = FrameConstants::first_data_row + data_symbol_count(layout.psdu_bits(), mcs);

  for (std::size_t i = 0; i < layout.ptb_offsets.size(); ++i) {
    const std::size_t training_start = layout.ptb_unit_offset(i) + FrameConstants::n_mem;
    layout.pt_symbol_indices.push_back(FrameConstants::first_data_row +
                                       static_cast<int>(training_start / static_cast<std::size_t>(mcs.n_dbps)));
  }
  layout.m_e = layout.m_total - 1 - layout.pt_symbol_indices.back();
  return out;
}

/// Removes the PTb copies and octet padding inserted by insert_pt.
inline Bits strip_pt(std::span<const Bit> modified_fb, const FrameLayout& layout) {
  if (modified_fb.size() != layout.modified_fb_bits) {
    throw std::invalid_argument("strip_pt: length " + std::to_string(modified_fb.size()) +
                                " does not match layout (" + std::to_string(layout.modified_fb_bits) + ")");
  }
  if (layout.kind == FrameKind::Standard) {
    return Bits(modified_fb.begin(), modified_fb.end());
  }
  Bits fb;
  fb.reserve(layout.n_fb);
  std::size_t src = 0;
  for (std::size_t i = 0; i < layout.block_bit_ranges.size(); ++i) {
    const auto& block = layout.block_bit_ranges[i];
    fb.insert(fb.end(), modified_fb.begin() + static_cast<std::ptrdiff_t>(src),
              modified_fb.begin() + static_cast<std::ptrdiff_t>(src + block.length));
    src += block.length;
    if (i < layout.ptb_offsets.size()) {
      src += layout.ptb_bits;
    }
  }
  return fb;
}

}  // namespace v2xpt
