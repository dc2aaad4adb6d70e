#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "v2xpt/frame/constants.hpp"
#include "v2xpt/frame/insert_pt.hpp"
#include "v2xpt/frame/mcs.hpp"
#include "v2xpt/rx/receiver.hpp"

namespace v2xpt {

inline std::vector<double> default_esn0_grid() {
  std::vector<double> g;
  for (int e = 10; e <= 30; e += 2) g.push_back(e);
  return g;
}

struct SimConfig {
  int mcs = 2;
  int n_fb_bytes = 146;
  FrameKind frame = FrameKind::Standard;
  int m_p = 8;
  double velocity_kmph = 100.0;
  std::vector<double> esn0_db = default_esn0_grid();
  std::uint64_t frames = 2000;      // per point
  std::uint64_t max_errors = 100;   // 0 disables early stop
  ReceiverKind receiver = ReceiverKind::SFMMSE;
  std::uint64_t seed = 1;
  std::string out;                  // CSV path; empty writes to stdout
  int threads = 1;
  int traceback_depth = 96;
  int service_decode_symbols = 3;
  bool signal_as_pilot = false;

  std::size_t n_fb_bits() const { return static_cast<std::size_t>(n_fb_bytes) * 8; }
  ReceiverConfig receiver_config() const {
    return ReceiverConfig{receiver, traceback_depth, service_decode_symbols, signal_as_pilot};
  }
};

inline FrameKind parse_frame_kind(const std::string& s) {
  if (s == "sf") return FrameKind::Standard;
  if (s == "mf") return FrameKind::Modified;
  throw std::invalid_argument("frame kind must be sf or mf, got " + s);
}

inline std::string frame_kind_name(FrameKind k) { return k == FrameKind::Standard ? "sf" : "mf"; }

/// Throws std::invalid_argument describing the first violated constraint.
inline void validate(const SimConfig& c) {
  if (c.mcs < 0 || c.mcs >= kMcsCount) throw std::invalid_argument("mcs must be in 0..7");
  if (c.n_fb_bytes < 1) throw std::invalid_argument("nfb-bytes must be positive");
  if (c.frames < 1) throw std::invalid_argument("frames must be >= 1");
  if (c.esn0_db.empty()) throw std::invalid_argument("esn0 list must be nonempty");
  if (c.velocity_kmph < 0.0) throw std::invalid_argument("velocity must be non-negative");
  if (c.threads < 1) throw std::invalid_argument("threads must be >= 1");
  const McsSpec mcs = mcs_table(c.mcs);
  if (mcs.modulation != Modulation::Bpsk && mcs.modulation != Modulation::Qpsk) {
    throw std::invalid_argument("receiver supports BPSK and QPSK MCS only (0-3)");
  }
  if (c.frame == FrameKind::Modified) {
    if (c.m_p < 1 || c.m_p > FrameConstants::max_pt_spacing) throw std::invalid_argument("mp must be in 1..32");
    const PtGeometry g = compute_pt_geometry(c.n_fb_bits(), mcs.n_dbps, c.m_p);  // throws FrameTooShort
    (void)g;
  }
  if (requires_modified_frame(c.receiver) && c.frame != FrameKind::Modified) {
    throw std::invalid_argument(std::string(to_string(c.receiver)) + " requires --frame mf");
  }
  const std::size_t psdu_octets =
      make_frame_meta(c.n_fb_bits(), mcs, c.frame, c.m_p).layout.psdu_bits() / 8;
  if (psdu_octets > static_cast<std::size_t>(FrameConstants::max_psdu_octets)) {
    throw std::invalid_argument("PSDU exceeds 4095 octets");
  }
}

inline nlohmann::json to_json(const SimConfig& c) {
  return nlohmann::json{{"mcs", c.mcs},
                        {"nfb_bytes", c.n_fb_bytes},
                        {"frame", frame_kind_name(c.frame)},
                        {"mp", c.m_p},
                        {"velocity_kmph", c.velocity_kmph},
                        {"esn0", c.esn0_db},
                        {"frames", c.frames},
                        {"max_errors", c.max_errors},
                        {"receiver", std::string(to_string(c.receiver))},
                        {"seed", c.seed},
                        {"out", c.out},
                        {"threads", c.threads},
                        {"traceback_depth", c.traceback_depth},
                        {"service_decode_symbols", c.service_decode_symbols},
                        {"signal_as_pilot", c.signal_as_pilot}};
}

/// Applies the keys present in `j` over `c`. Unknown keys are rejected.
inline void apply_json(SimConfig& c, const nlohmann::json& j) {
  for (const auto& [key, v] : j.items()) {
    if (key == "mcs") c.mcs = v.get<int>();
    else if (key == "nfb_bytes") c.n_fb_bytes = v.get<int>();
    else if (key == "frame") c.frame = parse_frame_kind(v.get<std::string>());
    else if (key == "mp") c.m_p = v.get<int>();
    else if (key == "velocity_kmph") c.velocity_kmph = v.get<double>();
    else if (key == "esn0") c.esn0_db = v.get<std::vector<double>>();
    else if (key == "frames") c.frames = v.get<std::uint64_t>();
    else if (key == "max_errors") c.max_errors = v.get<std::uint64_t>();
    else if (key == "receiver") c.receiver = parse_receiver_kind(v.get<std::string>());
    else if (key == "seed") c.seed = v.get<std::uint64_t>();
    else if (key == "out") c.out = v.get<std::string>();
    else if (key == "threads") c.threads = v.get<int>();
    else if (key == "traceback_depth") c.traceback_depth = v.get<int>();
    else if (key == "service_decode_symbols") c.service_decode_symbols = v.get<int>();
    else if (key == "signal_as_pilot") c.signal_as_pilot = v.get<bool>();
    else throw std::invalid_argument("unknown config key: " + key);
  }
}

inline SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  SimConfig c;
  apply_json(c, nlohmann::json::parse(in));
  return c;
}

}  // namespace v2xpt
