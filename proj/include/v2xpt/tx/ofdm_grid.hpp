#pragma once

#include <array>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "v2xpt/frame/constants.hpp"
#include "v2xpt/frame/insert_pt.hpp"
#include "v2xpt/tx/mapper.hpp"
#include "v2xpt/tx/scrambler.hpp"

namespace v2xpt {

/// DFT bin (0..63) of a signed subcarrier index (-32..31).
constexpr int subcarrier_bin(int k) noexcept { return k < 0 ? k + FrameConstants::n_sub : k; }
constexpr int bin_subcarrier(int bin) noexcept { return bin >= 32 ? bin - FrameConstants::n_sub : bin; }

inline constexpr std::array<int, 4> kPilotSubcarriers{-21, -7, 7, 21};
inline constexpr std::array<double, 4> kPilotBase{1.0, 1.0, 1.0, -1.0};

/// The 48 data subcarriers in mapping order (-26 .. 26 without 0 and pilots).
inline const std::array<int, 48>& data_subcarriers() {
  static const std::array<int, 48> table = [] {
    std::array<int, 48> t{};
    std::size_t n = 0;
    for (int k = -26; k <= 26; ++k) {
      if (k == 0 || k == -21 || k == -7 || k == 7 || k == 21) continue;
      t[n++] = k;
    }
    return t;
  }();
  return table;
}

/// The 52 occupied subcarriers in ascending order.
inline const std::array<int, 52>& occupied_subcarriers() {
  static const std::array<int, 52> table = [] {
    std::array<int, 52> t{};
    std::size_t n = 0;
    for (int k = -26; k <= 26; ++k) {
      if (k != 0) t[n++] = k;
    }
    return t;
  }();
  return table;
}

inline bool is_pilot_subcarrier(int k) noexcept { return k == -21 || k == -7 || k == 7 || k == 21; }
inline bool is_occupied_subcarrier(int k) noexcept { return k != 0 && k >= -26 && k <= 26; }

/// Long training values L_{-26..26} (index k + 26); L_0 = 0.
inline const std::array<double, 53>& long_training_sequence() {
  static constexpr std::array<double, 53> lt{
      1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, 1, 1,  // -26..-1
      0,
      1, -1, -1, 1, 1, -1, 1, -1, 1, -1, -1, -1, -1, -1, 1, 1, -1, -1, 1, -1, 1, -1, 1, 1, 1, 1};  // 1..26
  return lt;
}

inline double long_training_value(int k) {
  if (k < -26 || k > 26) return 0.0;
  return long_training_sequence()[static_cast<std::size_t>(k + 26)];
}

/// Pilot polarity p_n: the scrambler sequence from the all-ones state with 0 -> +1, 1 -> -1.
inline double pilot_polarity(int n) {
  static const std::array<double, 127> table = [] {
    std::array<double, 127> t{};
    Scrambler s(ScramblerState(0x7F));
    for (auto& v : t) v = s.next() ? -1.0 : 1.0;
    return t;
  }();
  return table[static_cast<std::size_t>(((n % 127) + 127) % 127)];
}

/// Comb pilot value on pilot subcarrier `k` of grid row `row` (SIGNAL is
/// row 2 and uses p_0; DATA row r uses p_{r-2}).
inline double comb_pilot_value(int row, int k) {
  for (std::size_t i = 0; i < kPilotSubcarriers.size(); ++i) {
    if (kPilotSubcarriers[i] == k) {
      return kPilotBase[i] * pilot_polarity(row - 2);
    }
  }
  throw std::invalid_argument("comb_pilot_value: not a pilot subcarrier");
}

/// rows x 64 complex array indexed by (row, signed subcarrier).
class CellGrid {
 public:
  CellGrid() = default;
  explicit CellGrid(int rows) : rows_(rows), cells_(static_cast<std::size_t>(rows) * FrameConstants::n_sub) {}

  int rows() const noexcept { return rows_; }
  Complex& at(int row, int k) { return cells_[index(row, k)]; }
  const Complex& at(int row, int k) const { return cells_[index(row, k)]; }
  std::span<Complex> row_bins(int row) {
    return std::span<Complex>(cells_).subspan(static_cast<std::size_t>(row) * FrameConstants::n_sub, FrameConstants::n_sub);
  }
  std::span<const Complex> row_bins(int row) const {
    return std::span<const Complex>(cells_).subspan(static_cast<std::size_t>(row) * FrameConstants::n_sub,
                                                    FrameConstants::n_sub);
  }
  std::span<Complex> data() noexcept { return cells_; }
  std::span<const Complex> data() const noexcept { return cells_; }

  friend bool operator==(const CellGrid&, const CellGrid&) = default;

 private:
  std::size_t index(int row, int k) const {
    if (row < 0 || row >= rows_ || k < -32 || k > 31) {
      throw std::out_of_range("CellGrid: index out of range");
    }
    return static_cast<std::size_t>(row) * FrameConstants::n_sub + static_cast<std::size_t>(subcarrier_bin(k));
  }

  int rows_ = 0;
  std::vector<Complex> cells_;
};

/// Transmitted frequency-domain frame S[m,k] = D[m,k] + P[m,k]. Pilot cells
/// are the LT rows and the comb pilots; PT rows are ordinary DATA here.
struct OfdmGrid {
  CellGrid s;

  int m_total() const noexcept { return s.rows(); }
  static bool is_pilot(int row, int k) {
    if (!is_occupied_subcarrier(k)) return false;
    return row < FrameConstants::n_lt || is_pilot_subcarrier(k);
  }
  static bool is_data(int row, int k) {
    return row >= FrameConstants::n_lt && is_occupied_subcarrier(k) && !is_pilot_subcarrier(k);
  }
  static bool is_null(int k) { return !is_occupied_subcarrier(k); }
};

/// Places LT rows, then SIGNAL and DATA symbols with comb pilots.
/// `symbols` holds 48 values per non-LT row, SIGNAL first.
inline OfdmGrid assemble_grid(std::span<const Complex> symbols, int m_total) {
  const int payload_rows = m_total - FrameConstants::n_lt;
  if (payload_rows < 1 ||
      symbols.size() != static_cast<std::size_t>(payload_rows) * FrameConstants::n_data_sc) {
    throw std::invalid_argument("assemble_grid: need 48 symbols per non-LT row");
  }
  OfdmGrid grid{CellGrid(m_total)};
  for (int row = 0; row < FrameConstants::n_lt; ++row) {
    for (int k : occupied_subcarriers()) grid.s.at(row, k) = long_training_value(k);
  }
  const auto& dsc = data_subcarriers();
  std::size_t n = 0;
  for (int row = FrameConstants::n_lt; row < m_total; ++row) {
    for (int k : dsc) grid.s.at(row, k) = symbols[n++];
    for (int k : kPilotSubcarriers) grid.s.at(row, k) = comb_pilot_value(row, k);
  }
  return grid;
}

inline OfdmGrid assemble_grid(std::span<const Complex> symbols, const FrameLayout& layout) {
  return assemble_grid(symbols, layout.m_total);
}

}  // namespace v2xpt
