#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "v2xpt/channel/correlation.hpp"
#include "v2xpt/frame/constants.hpp"
#include "v2xpt/tx/ofdm_grid.hpp"

namespace v2xpt {

struct Cell {
  int row = 0;
  int k = 0;  // signed subcarrier

  friend bool operator==(const Cell&, const Cell&) = default;
};

/// A known transmitted value at one cell.
struct Pilot {
  Cell cell;
  Complex value;
};

/// H_LT[k] = (R[0,k]/S[0,k] + R[1,k]/S[1,k]) / 2 on the 52 occupied subcarriers, 0 elsewhere.
inline std::vector<Complex> ls_lt_estimate(const CellGrid& r) {
  if (r.rows() < FrameConstants::n_lt) throw std::invalid_argument("ls_lt_estimate: grid lacks LT rows");
  std::vector<Complex> h(FrameConstants::n_sub, Complex{});
  for (int k : occupied_subcarriers()) {
    const double s = long_training_value(k);
    h[static_cast<std::size_t>(subcarrier_bin(k))] = 0.5 * (r.at(0, k) / s + r.at(1, k) / s);
  }
  return h;
}

/// H_P = R / P at each pilot.
inline std::vector<Complex> ls_pilot_estimates(const CellGrid& r, std::span<const Pilot> pilots) {
  std::vector<Complex> out;
  out.reserve(pilots.size());
  for (const Pilot& p : pilots) {
    if (p.value == Complex{}) throw std::invalid_argument("ls_pilot_estimates: zero pilot value");
    out.push_back(r.at(p.cell.row, p.cell.k) / p.value);
  }
  return out;
}

/// Precomputed LMMSE interpolator W = R_{H,HP} (R_{HP,HP} + sigma2 (P P^H)^-1)^-1.
/// Applying it to the LS pilot estimates gives the target estimates.
class LmmseFilter {
 public:
  LmmseFilter() = default;

  /// `pilot_energy[i]` is |P_i|^2. Rows of `pilots` and `targets` may be
  /// relative to any origin; only differences enter the correlation.
  LmmseFilter(std::span<const Cell> pilots, std::span<const double> pilot_energy, std::span<const Cell> targets,
              const CorrelationModel& corr, double sigma2) {
    if (pilots.size() != pilot_energy.size()) throw std::invalid_argument("LmmseFilter: pilot energy count mismatch");
    std::vector<double> noise(pilots.size());
    for (std::size_t i = 0; i < pilots.size(); ++i) {
      if (pilot_energy[i] <= 0.0) throw std::invalid_argument("LmmseFilter: pilot energy must be positive");
      noise[i] = sigma2 / pilot_energy[i];
    }
    build(pilots, noise, targets, corr);
  }

  /// General form: `noise[i]` is the error variance of the i-th pilot estimate.
  static LmmseFilter with_noise(std::span<const Cell> pilots, std::span<const double> noise,
                                std::span<const Cell> targets, const CorrelationModel& corr) {
    if (pilots.size() != noise.size()) throw std::invalid_argument("LmmseFilter: noise count mismatch");
    LmmseFilter f;
    f.build(pilots, noise, targets, corr);
    return f;
  }

  Eigen::Index pilot_count() const noexcept { return w_.cols(); }
  Eigen::Index target_count() const noexcept { return w_.rows(); }
  const Eigen::MatrixXcd& matrix() const noexcept { return w_; }

  /// Expected |H - H_hat|^2 at each target under the model.
  const std::vector<double>& error_variance() const noexcept { return error_; }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& h_p) const {
    if (h_p.size() != w_.cols()) throw std::invalid_argument("LmmseFilter: pilot vector size mismatch");
    return w_ * h_p;
  }

 private:
  void build(std::span<const Cell> pilots, std::span<const double> noise, std::span<const Cell> targets,
             const CorrelationModel& corr) {
    if (pilots.empty()) throw std::invalid_argument("LmmseFilter: no pilots");
    const auto np = static_cast<Eigen::Index>(pilots.size());
    const auto nt = static_cast<Eigen::Index>(targets.size());
    Eigen::MatrixXcd a(np, np);
    for (Eigen::Index i = 0; i < np; ++i) {
      const Cell& pi = pilots[static_cast<std::size_t>(i)];
      for (Eigen::Index j = 0; j < np; ++j) {
        const Cell& pj = pilots[static_cast<std::size_t>(j)];
        a(i, j) = corr.r_h(pi.row, pi.k, pj.row, pj.k);
      }
      const double v = noise[static_cast<std::size_t>(i)];
      if (v < 0.0) throw std::invalid_argument("LmmseFilter: negative noise variance");
      a(i, i) += v;
    }
    // rhs = R_{H,HP}^H, so W^H = A^-1 rhs.
    Eigen::MatrixXcd rhs(np, nt);
    for (Eigen::Index j = 0; j < nt; ++j) {
      const Cell& t = targets[static_cast<std::size_t>(j)];
      for (Eigen::Index i = 0; i < np; ++i) {
        const Cell& p = pilots[static_cast<std::size_t>(i)];
        rhs(i, j) = corr.r_h(p.row, p.k, t.row, t.k);
      }
    }
    Eigen::MatrixXcd x;
    Eigen::LLT<Eigen::MatrixXcd> llt(a);
    if (llt.info() != Eigen::Success) {
      a.diagonal().array() += 1e-12 * a.trace().real();
      llt.compute(a);
    }
    if (llt.info() == Eigen::Success) {
      x = llt.solve(rhs);
    } else {
      x = Eigen::LDLT<Eigen::MatrixXcd>(a).solve(rhs);
    }
    w_ = x.adjoint();
    error_.resize(static_cast<std::size_t>(nt));
    const double r0 = corr.r_h(0, 0, 0, 0).real();
    for (Eigen::Index j = 0; j < nt; ++j) {
      const Complex explained = x.col(j).dot(rhs.col(j));  // conj(x)^T rhs
      error_[static_cast<std::size_t>(j)] = std::max(0.0, r0 - explained.real());
    }
  }

  Eigen::MatrixXcd w_;
  std::vector<double> error_;
};

inline Eigen::VectorXcd to_eigen(std::span<const Complex> v) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

/// One-shot LMMSE interpolation from LS pilot estimates to target cells.
inline std::vector<Complex> lmmse_estimate(std::span<const Complex> h_p, std::span<const Pilot> pilots,
                                           std::span<const Cell> targets, const CorrelationModel& corr, double sigma2) {
  if (h_p.size() != pilots.size()) throw std::invalid_argument("lmmse_estimate: estimate count mismatch");
  std::vector<Cell> cells;
  std::vector<double> energy;
  for (const Pilot& p : pilots) {
    cells.push_back(p.cell);
    energy.push_back(std::norm(p.value));
  }
  const LmmseFilter w(cells, energy, targets, corr, sigma2);
  const Eigen::VectorXcd est = w.apply(to_eigen(h_p));
  return std::vector<Complex>(est.data(), est.data() + est.size());
}

}  // namespace v2xpt
