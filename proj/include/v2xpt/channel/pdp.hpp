#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace v2xpt {

/// Sampled, truncated exponential power delay profile.
struct PdpSpec {
  int l_taps = 15;
  double tap_spacing = 0.1e-6;  // s
  double tau_rms = 0.4e-6;      // s, of the untruncated continuous profile
  double k_norm = 1.0;
  std::vector<double> alphas;  // tap powers, sum to 1
  std::vector<double> delays;  // s

  double delay_span() const { return delays.empty() ? 0.0 : delays.back(); }
};

/// alpha_l = K exp(-tau_l / tau_rms), tau_l = l * spacing, normalized to unit total power.
inline PdpSpec exp_pdp(int l, double spacing, double tau_rms) {
  if (l < 1 || spacing <= 0.0 || tau_rms <= 0.0) {
    throw std::invalid_argument("exp_pdp: need l >= 1, spacing > 0, tau_rms > 0");
  }
  PdpSpec pdp;
  pdp.l_taps = l;
  pdp.tap_spacing = spacing;
  pdp.tau_rms = tau_rms;
  double total = 0.0;
  for (int i = 0; i < l; ++i) {
    const double tau = i * spacing;
    pdp.delays.push_back(tau);
    pdp.alphas.push_back(std::exp(-tau / tau_rms));
    total += pdp.alphas.back();
  }
  pdp.k_norm = 1.0 / total;
  for (double& a : pdp.alphas) a *= pdp.k_norm;
  return pdp;
}

/// The vehicular profile used throughout: 15 taps, 0.1 us apart, tau_rms 0.4 us.
inline PdpSpec vehicular_pdp() { return exp_pdp(15, 0.1e-6, 0.4e-6); }

/// sqrt(sum a tau^2 - (sum a tau)^2) of the sampled profile.
inline double effective_rms_delay(const PdpSpec& pdp) {
  double m1 = 0.0;
  double m2 = 0.0;
  double p = 0.0;
  for (std::size_t i = 0; i < pdp.alphas.size(); ++i) {
    p += pdp.alphas[i];
    m1 += pdp.alphas[i] * pdp.delays[i];
    m2 += pdp.alphas[i] * pdp.delays[i] * pdp.delays[i];
  }
  m1 /= p;
  m2 /= p;
  return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

}  // namespace v2xpt
