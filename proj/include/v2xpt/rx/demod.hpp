#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "v2xpt/frame/mcs.hpp"
#include "v2xpt/tx/interleaver.hpp"
#include "v2xpt/tx/mapper.hpp"
#include "v2xpt/tx/ofdm_grid.hpp"
#include "v2xpt/tx/puncture.hpp"

namespace v2xpt {

inline constexpr double kSigma2Floor = 1e-12;

/// S_hat = R conj(H_hat) / (sigma2 + |H_hat|^2); 0 where the denominator vanishes.
inline Complex mmse_equalize(Complex r, Complex h_hat, double sigma2) {
  const double den = sigma2 + std::norm(h_hat);
  if (den <= 0.0) return {};
  return r * std::conj(h_hat) / den;
}

/// Max-log LLRs (positive means bit 0) for one equalized cell, appended to `out`.
/// Uses y = S_hat (sigma2 + |H_hat|^2) = conj(H_hat) R, the matched-filter output.
inline void soft_demod(Complex s_hat, Complex h_hat, double sigma2, Modulation mod, std::vector<double>& out) {
  const double s2 = std::max(sigma2, kSigma2Floor);
  const Complex y = s_hat * (sigma2 + std::norm(h_hat));
  switch (mod) {
    case Modulation::Bpsk:
      out.push_back(-4.0 * y.real() / s2);
      return;
    case Modulation::Qpsk: {
      const double g = -2.0 * std::numbers::sqrt2 / s2;
      out.push_back(g * y.real());
      out.push_back(g * y.imag());
      return;
    }
    default:
      throw std::invalid_argument("soft_demod: only BPSK and QPSK are supported");
  }
}

inline std::vector<double> soft_demod(std::span<const Complex> s_hat, std::span<const Complex> h_hat, double sigma2,
                                      Modulation mod) {
  if (s_hat.size() != h_hat.size()) throw std::invalid_argument("soft_demod: size mismatch");
  std::vector<double> out;
  out.reserve(s_hat.size() * static_cast<std::size_t>(bits_per_subcarrier(mod)));
  for (std::size_t i = 0; i < s_hat.size(); ++i) soft_demod(s_hat[i], h_hat[i], sigma2, mod, out);
  return out;
}

/// Equalize, demodulate, deinterleave and depuncture one DATA row given as
/// 64 received bins and 64 channel-estimate bins. Returns 2 * N_DBPS mother-code LLRs.
inline std::vector<double> row_llrs(std::span<const Complex> r_bins, std::span<const Complex> h_bins, double sigma2,
                                    const McsSpec& mcs, std::span<const int> perm) {
  std::vector<double> llr;
  llr.reserve(static_cast<std::size_t>(mcs.n_cbps));
  for (int k : data_subcarriers()) {
    const auto bin = static_cast<std::size_t>(subcarrier_bin(k));
    const Complex h = h_bins[bin];
    soft_demod(mmse_equalize(r_bins[bin], h, sigma2), h, sigma2, mcs.modulation, llr);
  }
  const std::vector<double> deint = deinterleave<double>(llr, perm);
  return depuncture<double>(deint, mcs.code_rate, 0.0);
}

}  // namespace v2xpt
