#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "v2xpt/frame/constants.hpp"
#include "v2xpt/tx/ofdm_grid.hpp"

namespace v2xpt {

/// Baseband samples, 80 per OFDM symbol (16 CP + 64) at 10 MHz.
struct TimeDomainFrame {
  static constexpr int samples_per_symbol = FrameConstants::n_sub + FrameConstants::n_cp;

  int rows = 0;
  std::vector<Complex> samples;

  std::span<const Complex> symbol(int row) const {
    return std::span<const Complex>(samples).subspan(static_cast<std::size_t>(row) * samples_per_symbol,
                                                     samples_per_symbol);
  }
};

/// 64-point IDFT (1/N scaled) per row plus cyclic prefix.
inline TimeDomainFrame ofdm_modulate(const CellGrid& grid) {
  constexpr int n = FrameConstants::n_sub;
  constexpr int cp = FrameConstants::n_cp;
  Eigen::FFT<double> fft;
  TimeDomainFrame frame;
  frame.rows = grid.rows();
  frame.samples.reserve(static_cast<std::size_t>(grid.rows()) * TimeDomainFrame::samples_per_symbol);
  std::vector<Complex> bins(n);
  std::vector<Complex> body;
  for (int row = 0; row < grid.rows(); ++row) {
    const auto src = grid.row_bins(row);
    bins.assign(src.begin(), src.end());
    fft.inv(body, bins);
    frame.samples.insert(frame.samples.end(), body.end() - cp, body.end());
    frame.samples.insert(frame.samples.end(), body.begin(), body.end());
  }
  return frame;
}

inline TimeDomainFrame ofdm_modulate(const OfdmGrid& grid) { return ofdm_modulate(grid.s); }

/// Discards each cyclic prefix and applies the forward 64-point DFT.
inline CellGrid ofdm_demodulate(const TimeDomainFrame& frame) {
  constexpr int n = FrameConstants::n_sub;
  constexpr int cp = FrameConstants::n_cp;
  if (frame.samples.size() != static_cast<std::size_t>(frame.rows) * TimeDomainFrame::samples_per_symbol) {
    throw std::invalid_argument("ofdm_demodulate: sample count does not match row count");
  }
  Eigen::FFT<double> fft;
  CellGrid grid(frame.rows);
  std::vector<Complex> body(n);
  std::vector<Complex> bins;
  for (int row = 0; row < frame.rows; ++row) {
    const auto sym = frame.symbol(row);
    body.assign(sym.begin() + cp, sym.end());
    fft.fwd(bins, body);
    auto dst = grid.row_bins(row);
    std::copy(bins.begin(), bins.end(), dst.begin());
  }
  return grid;
}

}  // namespace v2xpt
