// Monte Carlo FER driver and effective-bit-rate table writer.

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "v2xpt/sim/config.hpp"
#include "v2xpt/sim/output.hpp"
#include "v2xpt/sim/runner.hpp"
#include "v2xpt/tx/grid_io.hpp"

namespace {

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number: " + s);
  return v;
}

// "10,12,14" or "start:step:stop" (inclusive).
std::vector<double> parse_esn0_list(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const auto a = text.find(':');
    const auto b = text.find(':', a + 1);
    if (b == std::string::npos) throw std::invalid_argument("range must be start:step:stop");
    const double start = parse_double(text.substr(0, a));
    const double step = parse_double(text.substr(a + 1, b - a - 1));
    const double stop = parse_double(text.substr(b + 1));
    if (step <= 0.0) throw std::invalid_argument("range step must be positive");
    for (int i = 0; start + i * step <= stop + 1e-9; ++i) out.push_back(start + i * step);
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!item.empty()) out.push_back(parse_double(item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

void dump_first_frame(const v2xpt::SimConfig& cfg, const std::string& prefix) {
  using namespace v2xpt;
  const Scenario sc(cfg);
  const double sigma2 = noise_variance(cfg.esn0_db.front());
  Rng rng = make_trial_rng(cfg.seed, 0, 0);
  Bits fb(cfg.n_fb_bits());
  for (auto& b : fb) b = static_cast<Bit>(rng() & 1U);
  TxConfig tx_cfg;
  tx_cfg.mcs = sc.mcs;
  tx_cfg.kind = cfg.frame;
  tx_cfg.m_p = cfg.m_p;
  const TxFrame tx = build_frame(fb, tx_cfg);
  const ChannelRealization ch = make_channel(sc.pdp, sc.doppler, tx.layout.m_total, sigma2, rng);
  const CellGrid r = apply_channel(tx.grid, ch, rng);
  auto write = [](const std::string& path, const CellGrid& g) {
    std::ofstream os(path, std::ios::binary);
    write_grid(os, g);
  };
  write(prefix + "tx_grid.bin", tx.grid.s);
  write(prefix + "channel.bin", ch.h_freq);
  write(prefix + "rx_grid.bin", r);
  std::ofstream ts(prefix + "tx_time.bin", std::ios::binary);
  write_time_samples(ts, ofdm_modulate(tx.grid));
}

}  // namespace

int main(int argc, char** argv) {
  using namespace v2xpt;
  CLI::App app{"Monte Carlo FER simulation of standard and modified 802.11p frames"};

  std::string config_path;
  int mcs = 0;
  int nfb_bytes = 0;
  std::string frame;
  int mp = 0;
  double velocity = 0.0;
  std::string receiver;
  std::string esn0;
  std::uint64_t frames = 0;
  std::uint64_t max_errors = 0;
  std::uint64_t seed = 0;
  std::string out;
  int threads = 1;
  std::string bitrate_table;
  std::string manifest;
  std::string dump_prefix;

  app.add_option("--config", config_path, "JSON config file; command-line flags override it");
  auto* o_mcs = app.add_option("--mcs", mcs, "MCS index 0-3 (BPSK/QPSK)");
  auto* o_nfb = app.add_option("--nfb-bytes", nfb_bytes, "frame body length in octets");
  auto* o_frame = app.add_option("--frame", frame, "frame kind")->check(CLI::IsMember({"sf", "mf"}));
  auto* o_mp = app.add_option("--mp", mp, "symbols between PTs in an MF (1-32)");
  auto* o_vel = app.add_option("--velocity-kmph", velocity, "relative speed in km/h");
  auto* o_rx = app.add_option("--receiver", receiver, "receiver configuration")
                   ->check(CLI::IsMember({"ltls", "sfmmse", "mfmmse", "mbmmse", "perfect"}));
  auto* o_esn0 = app.add_option("--esn0", esn0, "Es/N0 points in dB: a,b,c or start:step:stop");
  auto* o_frames = app.add_option("--frames", frames, "frames per point");
  auto* o_maxerr = app.add_option("--max-errors", max_errors, "stop a point after this many errors (0: never)");
  auto* o_seed = app.add_option("--seed", seed, "master RNG seed");
  auto* o_out = app.add_option("--out", out, "FER CSV path (default stdout)");
  auto* o_threads = app.add_option("--threads", threads, "worker threads");
  app.add_option("--bitrate-table", bitrate_table, "write the effective bit-rate table to this path and exit");
  app.add_option("--manifest", manifest, "run manifest path (default <out>.manifest.json when --out is set)");
  app.add_option("--dump-frame", dump_prefix, "write grids of trial 0 at the first point with this path prefix");

  CLI11_PARSE(app, argc, argv);

  try {
    SimConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    if (o_mcs->count()) cfg.mcs = mcs;
    if (o_nfb->count()) cfg.n_fb_bytes = nfb_bytes;
    if (o_frame->count()) cfg.frame = parse_frame_kind(frame);
    if (o_mp->count()) cfg.m_p = mp;
    if (o_vel->count()) cfg.velocity_kmph = velocity;
    if (o_rx->count()) cfg.receiver = parse_receiver_kind(receiver);
    if (o_esn0->count()) cfg.esn0_db = parse_esn0_list(esn0);
    if (o_frames->count()) cfg.frames = frames;
    if (o_maxerr->count()) cfg.max_errors = max_errors;
    if (o_seed->count()) cfg.seed = seed;
    if (o_out->count()) cfg.out = out;
    if (o_threads->count()) cfg.threads = threads;

    if (!bitrate_table.empty()) {
      std::ofstream os(bitrate_table);
      if (!os) throw std::runtime_error("cannot write " + bitrate_table);
      const std::vector<int> mps{8, 16};
      const int last = FrameConstants::max_psdu_octets - (FrameConstants::n_mach + FrameConstants::n_crc) / 8;
      emit_bitrate_table(os, mcs_table(cfg.mcs), mps, 1, last);
      return 0;
    }

    validate(cfg);
    if (!dump_prefix.empty()) dump_first_frame(cfg, dump_prefix);
    const SweepResult res = run_sweep(cfg);
    if (cfg.out.empty()) {
      emit_csv(std::cout, res);
    } else {
      std::ofstream os(cfg.out);
      if (!os) throw std::runtime_error("cannot write " + cfg.out);
      emit_csv(os, res);
      if (manifest.empty()) manifest = cfg.out + ".manifest.json";
    }
    if (!manifest.empty()) {
      std::ofstream ms(manifest);
      if (!ms) throw std::runtime_error("cannot write " + manifest);
      ms << make_manifest(res).dump(2) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
