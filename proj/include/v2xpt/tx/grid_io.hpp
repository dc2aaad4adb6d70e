#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "v2xpt/tx/ofdm_grid.hpp"
#include "v2xpt/tx/ofdm_modulator.hpp"

namespace v2xpt {

// Binary dump: uint32 LE rows, uint32 LE cols, then rows*cols float64 LE (re, im) pairs.

namespace detail {

static_assert(std::endian::native == std::endian::little, "grid dump assumes a little-endian host");

inline void write_u32(std::ostream& os, std::uint32_t v) { os.write(reinterpret_cast<const char*>(&v), sizeof v); }

inline std::uint32_t read_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw std::runtime_error("grid dump: truncated header");
  return v;
}

inline void write_complex(std::ostream& os, std::span<const Complex> values) {
  for (const Complex& c : values) {
    const double re = c.real();
    const double im = c.imag();
    os.write(reinterpret_cast<const char*>(&re), sizeof re);
    os.write(reinterpret_cast<const char*>(&im), sizeof im);
  }
}

inline void read_complex(std::istream& is, std::span<Complex> values) {
  for (Complex& c : values) {
    double re = 0.0;
    double im = 0.0;
    is.read(reinterpret_cast<char*>(&re), sizeof re);
    is.read(reinterpret_cast<char*>(&im), sizeof im);
    if (!is) throw std::runtime_error("grid dump: truncated payload");
    c = {re, im};
  }
}

}  // namespace detail

inline void write_grid(std::ostream& os, const CellGrid& grid) {
  detail::write_u32(os, static_cast<std::uint32_t>(grid.rows()));
  detail::write_u32(os, FrameConstants::n_sub);
  detail::write_complex(os, grid.data());
  if (!os) throw std::runtime_error("grid dump: write failed");
}

inline CellGrid read_grid(std::istream& is) {
  const std::uint32_t rows = detail::read_u32(is);
  const std::uint32_t cols = detail::read_u32(is);
  if (cols != FrameConstants::n_sub) throw std::runtime_error("grid dump: expected 64 columns");
  CellGrid grid(static_cast<int>(rows));
  detail::read_complex(is, grid.data());
  return grid;
}

/// Time samples use the same layout with cols = 80 samples per symbol.
inline void write_time_samples(std::ostream& os, const TimeDomainFrame& frame) {
  detail::write_u32(os, static_cast<std::uint32_t>(frame.rows));
  detail::write_u32(os, TimeDomainFrame::samples_per_symbol);
  detail::write_complex(os, frame.samples);
  if (!os) throw std::runtime_error("grid dump: write failed");
}

inline TimeDomainFrame read_time_samples(std::istream& is) {
  TimeDomainFrame frame;
  frame.rows = static_cast<int>(detail::read_u32(is));
  if (detail::read_u32(is) != TimeDomainFrame::samples_per_symbol) {
    throw std::runtime_error("grid dump: expected 80 samples per symbol");
  }
  frame.samples.resize(static_cast<std::size_t>(frame.rows) * TimeDomainFrame::samples_per_symbol);
  detail::read_complex(is, frame.samples);
  return frame;
}

}  // namespace v2xpt
