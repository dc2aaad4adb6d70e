#pragma once

#include <cstddef>

#include "v2xpt/frame/constants.hpp"
#include "v2xpt/frame/insert_pt.hpp"
#include "v2xpt/frame/mcs.hpp"

namespace v2xpt {

/// Bits before PHY zero padding: SERVICE + MAC header + FB + FCS + TAIL,
/// plus (1 + Q + A) PTb copies for a modified frame.
inline std::size_t frame_payload_bits(std::size_t n_fb, const McsSpec& mcs, FrameKind kind, int m_p) {
  using C = FrameConstants;
  const std::size_t n_sf = C::n_serv + C::n_mach + n_fb + C::n_crc + C::n_mem;
  if (kind == FrameKind::Standard) {
    return n_sf;
  }
  const PtGeometry g = compute_pt_geometry(n_fb, mcs.n_dbps, m_p);
  return n_sf + static_cast<std::size_t>(g.pt_count()) * static_cast<std::size_t>(mcs.n_dbps + C::n_mem);
}

/// FB bits per second of frame airtime; the airtime counts short training,
/// both LT symbols and SIGNAL as five symbol durations.
inline double effective_bit_rate(std::size_t n_fb, const McsSpec& mcs, FrameKind kind, int m_p = 0) {
  const std::size_t n_bits = frame_payload_bits(n_fb, mcs, kind, m_p);
  const auto n_dbps = static_cast<std::size_t>(mcs.n_dbps);
  const std::size_t symbols = FrameConstants::preamble_symbol_equiv + (n_bits + n_dbps - 1) / n_dbps;
  return static_cast<double>(n_fb) / (static_cast<double>(symbols) * FrameConstants::t_sym);
}

/// True when the modified FB still fits the maximum PSDU length.
inline bool modified_frame_fits(std::size_t n_fb, const McsSpec& mcs, int m_p) {
  const PtGeometry g = compute_pt_geometry(n_fb, mcs.n_dbps, m_p);
  const std::size_t mfb = n_fb + static_cast<std::size_t>(g.pt_count()) *
                                     static_cast<std::size_t>(mcs.n_dbps + FrameConstants::n_mem);
  const std::size_t mfb_octets = (mfb + 7) / 8;
  return mfb_octets + (FrameConstants::n_mach + FrameConstants::n_crc) / 8 <=
         static_cast<std::size_t>(FrameConstants::max_psdu_octets);
}

}  // namespace v2xpt
