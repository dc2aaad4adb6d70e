#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "v2xpt/channel/pdp.hpp"
#include "v2xpt/frame/constants.hpp"

namespace v2xpt {

inline constexpr double kSpeedOfLight = 2.998e8;  // m/s
inline constexpr double kCarrierFrequency = 5.9e9;

struct DopplerSpec {
  double v = 0.0;  // relative speed, m/s
  double f_c = kCarrierFrequency;

  /// Maximum Doppler shift v / lambda.
  double f_d() const { return v * f_c / kSpeedOfLight; }

  static DopplerSpec from_kmph(double kmph, double f_c = kCarrierFrequency) {
    if (kmph < 0.0) throw std::invalid_argument("DopplerSpec: speed must be non-negative");
    return DopplerSpec{kmph / 3.6, f_c};
  }
};

/// Jakes temporal correlation J0(2 pi f_d dm T_SYM) between OFDM symbols dm apart.
inline double jakes_rt(double delta_m, const DopplerSpec& doppler) {
  const double x = 2.0 * std::numbers::pi * doppler.f_d() * delta_m * FrameConstants::t_sym;
  return std::cyl_bessel_j(0.0, std::abs(x));
}

/// Frequency correlation r_f[dk] = E{H[k + dk] H*[k]} = sum_l alpha_l exp(-j 2 pi dk df tau_l).
inline std::complex<double> pdp_rf(int delta_k, const PdpSpec& pdp) {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t l = 0; l < pdp.alphas.size(); ++l) {
    const double phase = -2.0 * std::numbers::pi * delta_k * FrameConstants::subcarrier_spacing * pdp.delays[l];
    acc += pdp.alphas[l] * std::polar(1.0, phase);
  }
  return acc;
}

/// Separable WSSUS correlation r_H(dm, dk) = r_t(dm) r_f(dk), tabulated.
class CorrelationModel {
 public:
  CorrelationModel(const PdpSpec& pdp, const DopplerSpec& doppler, int max_dm = 256)
      : pdp_(pdp), doppler_(doppler) {
    rt_.resize(static_cast<std::size_t>(max_dm) + 1);
    for (int dm = 0; dm <= max_dm; ++dm) rt_[static_cast<std::size_t>(dm)] = jakes_rt(dm, doppler);
    rf_.resize(2 * kMaxDk + 1);
    for (int dk = -kMaxDk; dk <= kMaxDk; ++dk) rf_[static_cast<std::size_t>(dk + kMaxDk)] = pdp_rf(dk, pdp);
  }

  double r_t(int delta_m) const {
    const auto idx = static_cast<std::size_t>(std::abs(delta_m));
    return idx < rt_.size() ? rt_[idx] : jakes_rt(delta_m, doppler_);
  }
  std::complex<double> r_f(int delta_k) const {
    if (delta_k < -kMaxDk || delta_k > kMaxDk) return pdp_rf(delta_k, pdp_);
    return rf_[static_cast<std::size_t>(delta_k + kMaxDk)];
  }
  /// E{H[m1,k1] H*[m2,k2]}.
  std::complex<double> r_h(int m1, int k1, int m2, int k2) const { return r_t(m1 - m2) * r_f(k1 - k2); }

  const PdpSpec& pdp() const noexcept { return pdp_; }
  const DopplerSpec& doppler() const noexcept { return doppler_; }

 private:
  static constexpr int kMaxDk = 64;
  PdpSpec pdp_;
  DopplerSpec doppler_;
  std::vector<double> rt_;
  std::vector<std::complex<double>> rf_;
};

}  // namespace v2xpt
