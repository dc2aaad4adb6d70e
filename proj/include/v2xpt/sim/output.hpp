#pragma once

#include <cstdint>
#include <iomanip>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "v2xpt/frame/bit_rate.hpp"
#include "v2xpt/frame/constants.hpp"
#include "v2xpt/frame/insert_pt.hpp"
#include "v2xpt/frame/mcs.hpp"
#include "v2xpt/sim/config.hpp"
#include "v2xpt/sim/rng.hpp"
#include "v2xpt/sim/runner.hpp"

#ifndef V2XPT_VERSION
#define V2XPT_VERSION "unknown"
#endif

namespace v2xpt {

inline constexpr const char* kFerCsvHeader =
    "receiver,frame,mcs,nfb_bytes,mp,velocity_kmph,esn0_db,frames,errors,fer,ci_lo,ci_hi";

inline void emit_csv(std::ostream& os, const SimConfig& cfg, std::span<const PointResult> points) {
  os << kFerCsvHeader << '\n';
  os << std::setprecision(10);
  for (const PointResult& p : points) {
    os << to_string(cfg.receiver) << ',' << frame_kind_name(cfg.frame) << ',' << cfg.mcs << ',' << cfg.n_fb_bytes
       << ',';
    if (cfg.frame == FrameKind::Modified) os << cfg.m_p;
    os << ',' << cfg.velocity_kmph << ',' << p.esn0_db << ',' << p.frames << ',' << p.errors << ',' << p.fer << ','
       << p.ci.lo << ',' << p.ci.hi << '\n';
  }
}

inline void emit_csv(std::ostream& os, const SweepResult& r) { emit_csv(os, r.config, r.points); }

/// Effective bit rates in Mbps for n_fb in [first, last] octets. An MF
/// column is empty where the frame body is shorter than the first block or
/// the modified PSDU exceeds the maximum length.
inline void emit_bitrate_table(std::ostream& os, const McsSpec& mcs, std::span<const int> m_p_list, int first_bytes,
                               int last_bytes, int step = 1) {
  os << "n_fb_bytes,r_sf_mbps";
  for (int m : m_p_list) os << ",r_mf_mp" << m << "_mbps";
  os << '\n' << std::fixed << std::setprecision(6);
  for (int b = first_bytes; b <= last_bytes; b += step) {
    const auto n_fb = static_cast<std::size_t>(b) * 8;
    os << b << ',' << effective_bit_rate(n_fb, mcs, FrameKind::Standard) / 1e6;
    for (int m : m_p_list) {
      os << ',';
      try {
        if (modified_frame_fits(n_fb, mcs, m)) os << effective_bit_rate(n_fb, mcs, FrameKind::Modified, m) / 1e6;
      } catch (const FrameTooShort&) {
      }
    }
    os << '\n';
  }
}

inline nlohmann::json make_manifest(const SweepResult& r) {
  nlohmann::json points = nlohmann::json::array();
  for (const PointResult& p : r.points) {
    points.push_back({{"point", p.point},
                      {"esn0_db", p.esn0_db},
                      {"frames", p.frames},
                      {"errors", p.errors},
                      {"undetected_errors", p.undetected},
                      {"fer", p.fer},
                      {"ci_lo", p.ci.lo},
                      {"ci_hi", p.ci.hi},
                      {"wall_s", p.wall_s},
                      {"rng_stream", {{"master_seed", r.config.seed},
                                      {"point", p.point},
                                      {"trials", {0, p.frames}},
                                      {"derivation", "mt19937_64(splitmix64(splitmix64(splitmix64(seed) ^ point) ^ trial))"}}}});
  }
  const FrameMeta meta = make_frame_meta(r.config.n_fb_bits(), mcs_table(r.config.mcs), r.config.frame, r.config.m_p);
  return nlohmann::json{{"version", V2XPT_VERSION},
                        {"config", to_json(r.config)},
                        {"layout", meta.layout.to_record()},
                        {"points", points}};
}

}  // namespace v2xpt
