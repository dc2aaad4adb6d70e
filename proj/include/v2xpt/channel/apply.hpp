#pragma once

#include <cmath>
#include <random>
#include <stdexcept>

#include "v2xpt/channel/fading.hpp"
#include "v2xpt/channel/pdp.hpp"
#include "v2xpt/tx/ofdm_grid.hpp"
#include "v2xpt/tx/ofdm_modulator.hpp"

namespace v2xpt {

/// Circular complex Gaussian with E|w|^2 = sigma2.
inline Complex complex_gaussian(Rng& rng, double sigma2) {
  if (sigma2 <= 0.0) return {};
  std::normal_distribution<double> n(0.0, std::sqrt(sigma2 / 2.0));
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

/// R = H S + W on every cell (null cells get noise too but are never read).
inline CellGrid apply_channel(const CellGrid& s, const ChannelRealization& chan, Rng& rng) {
  if (s.rows() != chan.h_freq.rows()) throw std::invalid_argument("apply_channel: grid and channel row counts differ");
  CellGrid r(s.rows());
  const auto src = s.data();
  const auto h = chan.h_freq.data();
  auto dst = r.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = h[i] * src[i] + complex_gaussian(rng, chan.sigma2);
  return r;
}

inline CellGrid apply_channel(const OfdmGrid& grid, const ChannelRealization& chan, Rng& rng) {
  return apply_channel(grid.s, chan, rng);
}

/// Time-domain tapped delay line, one tap per sample (taps spaced at the
/// 10 MHz sample period). Noise-free; used to cross-check the frequency path.
inline TimeDomainFrame apply_multipath_time(const TimeDomainFrame& tx, const ChannelRealization& chan,
                                            const PdpSpec& pdp) {
  const double ts = 1.0 / FrameConstants::sample_rate;
  std::vector<int> lag(pdp.delays.size());
  for (std::size_t l = 0; l < lag.size(); ++l) {
    const double d = pdp.delays[l] / ts;
    lag[l] = static_cast<int>(std::lround(d));
    if (std::abs(d - lag[l]) > 1e-9) throw std::invalid_argument("apply_multipath_time: tap delays must be sample-spaced");
    if (lag[l] > FrameConstants::n_cp) throw std::invalid_argument("apply_multipath_time: delay exceeds CP");
  }
  TimeDomainFrame rx;
  rx.rows = tx.rows;
  rx.samples.assign(tx.samples.size(), Complex{});
  constexpr int sps = TimeDomainFrame::samples_per_symbol;
  for (int m = 0; m < tx.rows; ++m) {
    for (int i = 0; i < sps; ++i) {
      const int n = m * sps + i;
      Complex acc{};
      for (std::size_t l = 0; l < lag.size(); ++l) {
        const int src = n - lag[l];
        if (src >= 0) acc += chan.tap(m, static_cast<int>(l)) * tx.samples[static_cast<std::size_t>(src)];
      }
      rx.samples[static_cast<std::size_t>(n)] = acc;
    }
  }
  return rx;
}

}  // namespace v2xpt
