#pragma once

namespace v2xpt {

/// Fixed field sizes and OFDM numerology of a 10 MHz 802.11p frame.
struct FrameConstants {
  static constexpr int n_serv = 16;   // SERVICE field bits
  static constexpr int n_mach = 288;  // MAC header bits
  static constexpr int n_crc = 32;    // frame check sequence bits
  static constexpr int n_mem = 6;     // encoder memory / TAIL bits
  static constexpr int n_sub = 64;    // DFT size
  static constexpr int n_cp = 16;     // cyclic prefix samples
  static constexpr int n_data_sc = 48;
  static constexpr int n_pilot_sc = 4;
  static constexpr int n_occupied_sc = 52;
  static constexpr double t_sym = 8e-6;            // seconds, CP included
  static constexpr double sample_rate = 10e6;      // Hz
  static constexpr double subcarrier_spacing = sample_rate / n_sub;  // 156.25 kHz
  static constexpr int n_lt = 2;                   // long training symbols
  static constexpr int first_data_row = 3;         // LT, LT, SIGNAL precede DATA
  static constexpr int preamble_symbol_equiv = 5;  // short training (2) + LT (2) + SIGNAL (1)
  static constexpr int max_psdu_octets = 4095;
  static constexpr int max_pt_spacing = 32;        // largest M'_P the SERVICE field can carry
};

}  // namespace v2xpt
