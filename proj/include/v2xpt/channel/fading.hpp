#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "v2xpt/channel/correlation.hpp"
#include "v2xpt/channel/pdp.hpp"
#include "v2xpt/frame/constants.hpp"
#include "v2xpt/tx/ofdm_grid.hpp"

namespace v2xpt {

using Rng = std::mt19937_64;

inline constexpr int kSinusoidsPerTap = 32;

struct ChannelRealization {
  int rows = 0;
  int l_taps = 0;
  std::vector<Complex> taps;  // rows x l_taps, row-major
  CellGrid h_freq;
  double sigma2 = 0.0;

  Complex& tap(int row, int l) { return taps[static_cast<std::size_t>(row) * l_taps + l]; }
  const Complex& tap(int row, int l) const { return taps[static_cast<std::size_t>(row) * l_taps + l]; }
};

/// Sum-of-sinusoids Rayleigh taps, one sample per OFDM symbol.
/// h_l[m] = sqrt(alpha_l / N) sum_n exp(j(2 pi f_d cos(theta_n) m T_SYM + phi_n)),
/// theta_n, phi_n i.i.d. uniform on [0, 2 pi).
inline ChannelRealization gen_fading(const PdpSpec& pdp, const DopplerSpec& doppler, int m_total, Rng& rng,
                                     int sinusoids = kSinusoidsPerTap) {
  if (m_total < 1) throw std::invalid_argument("gen_fading: m_total must be >= 1");
  if (sinusoids < 1) throw std::invalid_argument("gen_fading: need at least one sinusoid");
  ChannelRealization ch;
  ch.rows = m_total;
  ch.l_taps = static_cast<int>(pdp.alphas.size());
  ch.taps.assign(static_cast<std::size_t>(m_total) * ch.l_taps, Complex{});
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double w = 2.0 * std::numbers::pi * doppler.f_d() * FrameConstants::t_sym;
  for (int l = 0; l < ch.l_taps; ++l) {
    const double gain = std::sqrt(pdp.alphas[static_cast<std::size_t>(l)] / sinusoids);
    for (int n = 0; n < sinusoids; ++n) {
      const double theta = angle(rng);
      const double phi = angle(rng);
      const Complex step = std::polar(1.0, w * std::cos(theta));
      Complex z = std::polar(gain, phi);
      for (int m = 0; m < m_total; ++m) {
        ch.tap(m, l) += z;
        z *= step;
      }
    }
  }
  return ch;
}

/// exp(-j 2 pi k' df tau_l) for every bin and tap; bins-major.
inline std::vector<Complex> tap_phase_table(const PdpSpec& pdp) {
  const std::size_t l_taps = pdp.delays.size();
  std::vector<Complex> table(FrameConstants::n_sub * l_taps);
  for (int bin = 0; bin < FrameConstants::n_sub; ++bin) {
    const int k = bin_subcarrier(bin);
    for (std::size_t l = 0; l < l_taps; ++l) {
      table[static_cast<std::size_t>(bin) * l_taps + l] =
          std::polar(1.0, -2.0 * std::numbers::pi * k * FrameConstants::subcarrier_spacing * pdp.delays[l]);
    }
  }
  return table;
}

/// H[m,k] = sum_l h_l[m] exp(-j 2 pi k' df tau_l) on all 64 bins.
inline CellGrid freq_response(const std::vector<Complex>& taps, int rows, const PdpSpec& pdp) {
  const std::size_t l_taps = pdp.delays.size();
  if (taps.size() != static_cast<std::size_t>(rows) * l_taps) {
    throw std::invalid_argument("freq_response: tap array does not match rows x taps");
  }
  const std::vector<Complex> phase = tap_phase_table(pdp);
  CellGrid h(rows);
  for (int m = 0; m < rows; ++m) {
    auto dst = h.row_bins(m);
    const Complex* hm = taps.data() + static_cast<std::size_t>(m) * l_taps;
    for (int bin = 0; bin < FrameConstants::n_sub; ++bin) {
      const Complex* ph = phase.data() + static_cast<std::size_t>(bin) * l_taps;
      Complex acc{};
      for (std::size_t l = 0; l < l_taps; ++l) acc += hm[l] * ph[l];
      dst[static_cast<std::size_t>(bin)] = acc;
    }
  }
  return h;
}

inline void fill_freq_response(ChannelRealization& ch, const PdpSpec& pdp) {
  ch.h_freq = freq_response(ch.taps, ch.rows, pdp);
}

/// Taps, frequency response and noise variance for one frame.
inline ChannelRealization make_channel(const PdpSpec& pdp, const DopplerSpec& doppler, int m_total, double sigma2,
                                       Rng& rng) {
  ChannelRealization ch = gen_fading(pdp, doppler, m_total, rng);
  fill_freq_response(ch, pdp);
  ch.sigma2 = sigma2;
  return ch;
}

}  // namespace v2xpt
