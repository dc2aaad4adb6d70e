#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <thread>
#include <vector>

#include "v2xpt/bits.hpp"
#include "v2xpt/channel/apply.hpp"
#include "v2xpt/channel/correlation.hpp"
#include "v2xpt/channel/fading.hpp"
#include "v2xpt/channel/pdp.hpp"
#include "v2xpt/rx/receiver.hpp"
#include "v2xpt/sim/config.hpp"
#include "v2xpt/sim/rng.hpp"
#include "v2xpt/sim/stats.hpp"
#include "v2xpt/tx/transmitter.hpp"

namespace v2xpt {

struct PointResult {
  std::size_t point = 0;
  double esn0_db = 0.0;
  std::uint64_t frames = 0;
  std::uint64_t errors = 0;
  std::uint64_t undetected = 0;  // CRC passed but FB differs
  double fer = 0.0;
  Interval ci;
  double wall_s = 0.0;
};

struct SweepResult {
  SimConfig config;
  std::vector<PointResult> points;
};

/// sigma2 = Es / 10^(Es/N0 / 10) with unit average symbol energy; +inf gives 0.
inline double noise_variance(double esn0_db) {
  if (std::isinf(esn0_db) && esn0_db > 0) return 0.0;
  return std::pow(10.0, -esn0_db / 10.0);
}

/// Everything fixed for a sweep: MCS, channel statistics, frame metadata.
struct Scenario {
  SimConfig cfg;
  McsSpec mcs;
  PdpSpec pdp;
  DopplerSpec doppler;
  CorrelationModel corr;
  FrameMeta meta;

  explicit Scenario(const SimConfig& c, PdpSpec p = vehicular_pdp())
      : cfg(c),
        mcs(mcs_table(c.mcs)),
        pdp(std::move(p)),
        doppler(DopplerSpec::from_kmph(c.velocity_kmph)),
        corr(pdp, doppler),
        meta(make_frame_meta(c.n_fb_bits(), mcs, c.frame, c.m_p)) {}
};

struct TrialOutcome {
  bool error = false;
  bool undetected = false;
};

/// One frame: random FB and scrambler seed, fresh fading and noise.
inline TrialOutcome run_trial(const Scenario& sc, const Receiver& rx, double sigma2, Rng& rng) {
  Bits fb(sc.cfg.n_fb_bits());
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < fb.size(); ++i) {
    if (i % 64 == 0) word = rng();
    fb[i] = static_cast<Bit>((word >> (i % 64)) & 1U);
  }
  TxConfig tx_cfg;
  tx_cfg.mcs = sc.mcs;
  tx_cfg.kind = sc.cfg.frame;
  tx_cfg.m_p = sc.cfg.m_p;
  tx_cfg.ptb = sc.meta.ptb;
  tx_cfg.seed = ScramblerState(1 + static_cast<unsigned>(rng() % 127));
  const TxFrame tx = build_frame(fb, tx_cfg);
  const ChannelRealization ch = make_channel(sc.pdp, sc.doppler, tx.layout.m_total, sigma2, rng);
  const CellGrid r = apply_channel(tx.grid, ch, rng);
  const RxResult res = rx.decode_frame(r, &ch.h_freq);
  TrialOutcome out;
  out.error = !res.crc_ok;
  out.undetected = res.crc_ok && res.fb != fb;
  return out;
}

/// Runs trials 0, 1, ... of one point until `frames` trials or, if enabled,
/// the trial that produces the max_errors-th error. Trials run in batches
/// across workers and are scanned in index order, so the result does not
/// depend on the worker count.
inline PointResult run_point(const Scenario& sc, std::size_t point_index, double esn0_db) {
  const auto t0 = std::chrono::steady_clock::now();
  const double sigma2 = noise_variance(esn0_db);
  const Receiver rx(sc.cfg.receiver_config(), sc.meta, sc.corr, sigma2);
  const int workers = sc.cfg.threads;
  const std::uint64_t batch = std::max<std::uint64_t>(64, static_cast<std::uint64_t>(workers) * 16);

  PointResult res;
  res.point = point_index;
  res.esn0_db = esn0_db;
  bool done = false;
  std::vector<TrialOutcome> outcomes;
  for (std::uint64_t first = 0; first < sc.cfg.frames && !done; first += batch) {
    const std::uint64_t count = std::min(batch, sc.cfg.frames - first);
    outcomes.assign(count, TrialOutcome{});
    std::atomic<std::uint64_t> next{0};
    auto work = [&] {
      for (std::uint64_t i = next++; i < count; i = next++) {
        Rng rng = make_trial_rng(sc.cfg.seed, point_index, first + i);
        outcomes[i] = run_trial(sc, rx, sigma2, rng);
      }
    };
    if (workers == 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    for (const TrialOutcome& o : outcomes) {
      ++res.frames;
      res.errors += o.error ? 1 : 0;
      res.undetected += o.undetected ? 1 : 0;
      if (sc.cfg.max_errors > 0 && res.errors >= sc.cfg.max_errors) {
        done = true;
        break;
      }
    }
  }
  res.fer = static_cast<double>(res.errors) / static_cast<double>(res.frames);
  res.ci = wilson_interval(res.errors, res.frames);
  res.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

inline SweepResult run_sweep(const SimConfig& cfg) {
  validate(cfg);
  const Scenario sc(cfg);
  SweepResult out;
  out.config = cfg;
  for (std::size_t i = 0; i < cfg.esn0_db.size(); ++i) out.points.push_back(run_point(sc, i, cfg.esn0_db[i]));
  return out;
}

}  // namespace v2xpt
