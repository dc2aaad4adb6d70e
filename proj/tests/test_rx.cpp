#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "v2xpt/channel/apply.hpp"
#include "v2xpt/channel/correlation.hpp"
#include "v2xpt/channel/fading.hpp"
#include "v2xpt/channel/pdp.hpp"
#include "v2xpt/rx/demod.hpp"
#include "v2xpt/rx/estimation.hpp"
#include "v2xpt/rx/receiver.hpp"
#include "v2xpt/rx/seed.hpp"
#include "v2xpt/rx/viterbi.hpp"
#include "v2xpt/tx/transmitter.hpp"

#include "oracles.hpp"

using namespace v2xpt;
using namespace v2xpt::oracle;

namespace {

PdpSpec flat_pdp() {
  PdpSpec p;
  p.l_taps = 1;
  p.alphas = {1.0};
  p.delays = {0.0};
  return p;
}

ChannelRealization flat_channel(int rows, double sigma2) {
  ChannelRealization ch;
  ch.rows = rows;
  ch.l_taps = 1;
  ch.sigma2 = sigma2;
  ch.taps.assign(static_cast<std::size_t>(rows), Complex(1, 0));
  fill_freq_response(ch, flat_pdp());
  return ch;
}

CorrelationModel vehicular_corr(double kmph = 100) {
  return CorrelationModel(vehicular_pdp(), DopplerSpec::from_kmph(kmph));
}

}  // namespace

TEST(Viterbi, MatchesBruteForce) {
  std::mt19937_64 rng(61);
  std::normal_distribution<double> g(0.0, 2.0);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = 1 + rng() % 12;
    std::vector<double> llr(2 * k);
    for (auto& x : llr) x = g(rng);
    const unsigned init = (t % 3 == 0) ? 0U : static_cast<unsigned>(rng() % 64);
    std::optional<unsigned> end;
    if (t % 2 == 1) end = oracle_encode(random_bits(rng, k), init).end_state;
    ASSERT_EQ(viterbi_decode(llr, init, end), brute_force_ml(llr, init, end)) << "case " << t;
  }
}

TEST(Viterbi, NoiselessRecovery) {
  std::mt19937_64 rng(62);
  for (int t = 0; t < 50; ++t) {
    Bits u = random_bits(rng, 300);
    for (std::size_t i = 294; i < 300; ++i) u[i] = 0;
    const Bits c = conv_encode(u);
    std::vector<double> llr(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) llr[i] = c[i] ? -1.0 : 1.0;
    EXPECT_EQ(viterbi_decode(llr, 0, 0U), u);
    EXPECT_EQ(viterbi_decode(llr, 0, std::nullopt), u);
  }
}

TEST(Viterbi, ZeroLlrsGiveDeterministicPath) {
  const std::vector<double> zeros(80, 0.0);
  const Bits a = viterbi_decode(zeros, 0, std::nullopt);
  EXPECT_EQ(a, viterbi_decode(zeros, 0, std::nullopt));
  EXPECT_EQ(a.size(), 40U);
  EXPECT_EQ(a, Bits(40, 0));
  EXPECT_THROW(viterbi_decode(std::vector<double>(3, 0.0)), std::invalid_argument);
}

TEST(Equalizer, Limits) {
  const Complex r(0.3, -1.2);
  const Complex h(0.5, 0.5);
  EXPECT_NEAR(std::abs(mmse_equalize(r, h, 0.0) - r / h), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(mmse_equalize(r, Complex(1, 0), 1e12)), 0.0, 1e-11);
  const Complex s(0.7071, -0.7071);
  const double sigma2 = 0.4;
  EXPECT_NEAR(std::abs(mmse_equalize(h * s, h, sigma2) - s * std::norm(h) / (sigma2 + std::norm(h))), 0.0, 1e-14);
  EXPECT_EQ(mmse_equalize(r, Complex{}, 0.0), Complex{});
}

// Max-log LLRs against exhaustive distances on r = H s + w.
TEST(SoftDemod, MatchesExhaustiveMaxLog) {
  std::mt19937_64 rng(63);
  std::normal_distribution<double> g(0.0, 1.0);
  for (Modulation mod : {Modulation::Bpsk, Modulation::Qpsk}) {
    const auto pts = constellation(mod);
    const int nb = bits_per_subcarrier(mod);
    for (int t = 0; t < 2000; ++t) {
      const double sigma2 = std::pow(10.0, -(g(rng) * 5 + 10) / 10);
      const Complex h(g(rng), g(rng));
      const Complex s = pts[rng() % pts.size()];
      const Complex r = h * s + std::sqrt(sigma2 / 2) * Complex(g(rng), g(rng));
      std::vector<double> llr;
      soft_demod(mmse_equalize(r, h, sigma2), h, sigma2, mod, llr);
      ASSERT_EQ(llr.size(), static_cast<std::size_t>(nb));
      std::size_t nearest = 0;
      for (std::size_t p = 0; p < pts.size(); ++p) {
        if (std::norm(r - h * pts[p]) < std::norm(r - h * pts[nearest])) nearest = p;
      }
      for (int b = 0; b < nb; ++b) {
        double d0 = 1e300;
        double d1 = 1e300;
        for (std::size_t p = 0; p < pts.size(); ++p) {
          const double d = std::norm(r - h * pts[p]);
          // Bit b of the group is bit (nb - 1 - b) of the point index.
          if ((p >> (nb - 1 - b)) & 1U) {
            d1 = std::min(d1, d);
          } else {
            d0 = std::min(d0, d);
          }
        }
        const double expect = (d1 - d0) / sigma2;
        ASSERT_NEAR(llr[static_cast<std::size_t>(b)], expect, 1e-9 * std::max(1.0, std::abs(expect)));
        const int hard = llr[static_cast<std::size_t>(b)] < 0 ? 1 : 0;
        ASSERT_EQ(hard, static_cast<int>((nearest >> (nb - 1 - b)) & 1U));
      }
    }
  }
}

TEST(SoftDemod, SignsAndScaling) {
  const auto pts = constellation(Modulation::Qpsk);
  for (std::size_t p = 0; p < pts.size(); ++p) {
    std::vector<double> llr;
    soft_demod(pts[p], Complex(1, 0), 1.0, Modulation::Qpsk, llr);
    EXPECT_EQ(llr[0] < 0, ((p >> 1) & 1U) == 1);
    EXPECT_EQ(llr[1] < 0, (p & 1U) == 1);
  }
  // Fixed zero-forcing observation z: LLR scales with |H|^2 / sigma2.
  const Complex z(0.3, -0.6);
  auto llr_for = [&](Complex h, double sigma2) {
    std::vector<double> l;
    soft_demod(mmse_equalize(h * z, h, sigma2), h, sigma2, Modulation::Qpsk, l);
    return l;
  };
  const auto base = llr_for(Complex(1, 0), 0.5);
  const auto scaled = llr_for(Complex(0, 2), 0.5);
  const auto noisier = llr_for(Complex(1, 0), 2.0);
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(scaled[static_cast<std::size_t>(i)], 4 * base[static_cast<std::size_t>(i)], 1e-12);
    EXPECT_NEAR(noisier[static_cast<std::size_t>(i)], base[static_cast<std::size_t>(i)] / 4, 1e-12);
  }
  std::vector<double> l;
  EXPECT_THROW(soft_demod(Complex{}, Complex(1, 0), 1.0, Modulation::Qam16, l), std::invalid_argument);
}

TEST(SoftDemod, PuncturedPositionsAreZero) {
  const McsSpec m = mcs_table(3);
  const auto perm = interleaver_permutation(m.n_cbps, m.n_bpsc);
  std::vector<Complex> r(64, Complex(0.5, -0.5));
  std::vector<Complex> h(64, Complex(1, 0));
  const auto llr = row_llrs(r, h, 0.1, m, perm);
  ASSERT_EQ(llr.size(), static_cast<std::size_t>(2 * m.n_dbps));
  const auto mask = depuncture_positions(m.code_rate, llr.size());
  for (std::size_t i = 0; i < llr.size(); ++i) {
    if (mask[i]) {
      EXPECT_NE(llr[i], 0.0);
    } else {
      EXPECT_EQ(llr[i], 0.0);
    }
  }
}

TEST(Estimation, LtLeastSquares) {
  Rng rng(64);
  const int rows = 3;
  ChannelRealization ch = make_channel(vehicular_pdp(), DopplerSpec{}, rows, 0.0, rng);
  CellGrid s(rows);
  for (int row = 0; row < 2; ++row) {
    for (int k : occupied_subcarriers()) s.at(row, k) = long_training_value(k);
  }
  CellGrid r = apply_channel(s, ch, rng);
  auto h = ls_lt_estimate(r);
  for (int k : occupied_subcarriers()) {
    EXPECT_NEAR(std::abs(h[static_cast<std::size_t>(subcarrier_bin(k))] - ch.h_freq.at(0, k)), 0.0, 1e-12);
  }
  // Error variance sigma2 / 2 with unit training.
  const double sigma2 = 0.2;
  ChannelRealization flat = flat_channel(rows, sigma2);
  double e = 0;
  double e2 = 0;
  Complex mean{};
  int n = 0;
  for (int t = 0; t < 400; ++t) {
    r = apply_channel(s, flat, rng);
    h = ls_lt_estimate(r);
    for (int k : occupied_subcarriers()) {
      const Complex d = h[static_cast<std::size_t>(subcarrier_bin(k))] - 1.0;
      e += std::norm(d);
      e2 += std::norm(d) * std::norm(d);
      mean += d;
      ++n;
    }
  }
  const double m = e / n;
  const double sd = std::sqrt((e2 / n - m * m) / n);
  EXPECT_LT(std::abs(m - sigma2 / 2), 3 * sd);
  EXPECT_LT(std::abs(mean / static_cast<double>(n)), 0.01);
}

TEST(Estimation, PilotLeastSquares) {
  CellGrid r(4);
  r.at(3, 7) = Complex(2, 1);
  const std::vector<Pilot> pilots{{{3, 7}, Complex(0, 1)}};
  EXPECT_NEAR(std::abs(ls_pilot_estimates(r, pilots)[0] - Complex(1, -2)), 0.0, 1e-15);
  const std::vector<Pilot> bad{{{3, 7}, Complex{}}};
  EXPECT_THROW(ls_pilot_estimates(r, bad), std::invalid_argument);
}

TEST(Lmmse, ScalarCase) {
  const CorrelationModel corr = vehicular_corr(200);
  for (double sigma2 : {0.0, 0.1, 1.0}) {
    for (double energy : {1.0, 2.0, 0.5}) {
      const std::vector<Cell> p{{4, -7}};
      const std::vector<Cell> t{{9, 3}};
      const LmmseFilter f(p, std::vector<double>{energy}, t, corr, sigma2);
      const Complex r = corr.r_t(5) * corr.r_f(10);
      const Complex expect = r / (1.0 + sigma2 / energy);
      EXPECT_NEAR(std::abs(f.matrix()(0, 0) - expect), 0.0, 1e-12);
      const Complex h(0.4, 0.9);
      const Eigen::VectorXcd out = f.apply(Eigen::VectorXcd::Constant(1, h));
      EXPECT_NEAR(std::abs(out(0) - expect * h), 0.0, 1e-12);
      EXPECT_NEAR(f.error_variance()[0], 1.0 - std::norm(r) / (1.0 + sigma2 / energy), 1e-12);
    }
  }
}

TEST(Lmmse, NoiselessInterpolationAtKnots) {
  const CorrelationModel corr = vehicular_corr(200);
  Rng rng(65);
  const ChannelRealization ch = make_channel(vehicular_pdp(), DopplerSpec::from_kmph(200), 12, 0.0, rng);
  std::vector<Pilot> pilots;
  for (int row : {0, 5, 11}) {
    for (int k : kPilotSubcarriers) pilots.push_back({{row, k}, Complex(1, 0)});
  }
  std::vector<Complex> hp;
  std::vector<Cell> cells;
  for (const Pilot& p : pilots) {
    hp.push_back(ch.h_freq.at(p.cell.row, p.cell.k));
    cells.push_back(p.cell);
  }
  const auto est = lmmse_estimate(hp, pilots, cells, corr, 0.0);
  for (std::size_t i = 0; i < hp.size(); ++i) EXPECT_NEAR(std::abs(est[i] - hp[i]), 0.0, 1e-6);
}

TEST(Lmmse, BeatsLeastSquaresAtPilots) {
  const double sigma2 = 0.1;
  const PdpSpec pdp = vehicular_pdp();
  const DopplerSpec d = DopplerSpec::from_kmph(100);
  const CorrelationModel corr(pdp, d);
  std::vector<Cell> cells;
  for (int row = 0; row < 2; ++row) {
    for (int k : occupied_subcarriers()) cells.push_back({row, k});
  }
  for (int row = 2; row < 12; ++row) {
    for (int k : kPilotSubcarriers) cells.push_back({row, k});
  }
  const LmmseFilter f(cells, std::vector<double>(cells.size(), 1.0), cells, corr, sigma2);
  Rng rng(66);
  double mse_ls = 0;
  double mse_lmmse = 0;
  for (int t = 0; t < 1000; ++t) {
    const ChannelRealization ch = make_channel(pdp, d, 12, sigma2, rng);
    Eigen::VectorXcd ls(static_cast<Eigen::Index>(cells.size()));
    for (std::size_t i = 0; i < cells.size(); ++i) {
      ls(static_cast<Eigen::Index>(i)) = ch.h_freq.at(cells[i].row, cells[i].k) + complex_gaussian(rng, sigma2);
    }
    const Eigen::VectorXcd est = f.apply(ls);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const Complex h = ch.h_freq.at(cells[i].row, cells[i].k);
      mse_ls += std::norm(ls(static_cast<Eigen::Index>(i)) - h);
      mse_lmmse += std::norm(est(static_cast<Eigen::Index>(i)) - h);
    }
  }
  EXPECT_LE(mse_lmmse, mse_ls);
  EXPECT_LT(mse_lmmse, 0.5 * mse_ls);
}

TEST(Lmmse, TranslationInvariant) {
  const CorrelationModel corr = vehicular_corr(200);
  const std::vector<Cell> p{{0, -21}, {3, 7}, {8, 21}, {8, -26}};
  const std::vector<Cell> t{{2, 1}, {5, -13}};
  std::vector<Cell> ps;
  std::vector<Cell> ts;
  for (Cell c : p) ps.push_back({c.row + 17, c.k});
  for (Cell c : t) ts.push_back({c.row + 17, c.k});
  const std::vector<double> e(4, 1.0);
  const LmmseFilter a(p, e, t, corr, 0.05);
  const LmmseFilter b(ps, e, ts, corr, 0.05);
  EXPECT_LT((a.matrix() - b.matrix()).norm(), 1e-12);
}

TEST(Seed, NoiselessExhaustive) {
  std::mt19937_64 rng(67);
  const McsSpec m = mcs_table(2);
  for (unsigned s = 1; s <= 127; ++s) {
    TxConfig cfg;
    cfg.seed = ScramblerState(s);
    const TxFrame tx = build_frame(random_bits(rng, 400), cfg);
    const CellGrid& r = tx.grid.s;
    EXPECT_EQ(estimate_scrambler_seed(r, ls_lt_estimate(r), 0.0, m, 3).value(), s);
  }
}

TEST(Seed, FlatChannelHighSnr) {
  std::mt19937_64 bits(68);
  Rng rng(69);
  const McsSpec m = mcs_table(2);
  const double sigma2 = 1e-3;
  int ok = 0;
  for (int t = 0; t < 1000; ++t) {
    TxConfig cfg;
    cfg.seed = ScramblerState(1 + static_cast<unsigned>(bits() % 127));
    const TxFrame tx = build_frame(random_bits(bits, 200), cfg);
    const CellGrid r = apply_channel(tx.grid, flat_channel(tx.grid.m_total(), sigma2), rng);
    const SeedEstimate est = estimate_scrambler_seed_detail(r, ls_lt_estimate(r), sigma2, m, 3);
    ok += (est.seed && *est.seed == cfg.seed) ? 1 : 0;
  }
  EXPECT_EQ(ok, 1000);
}

TEST(Seed, TracebackRule) {
  const FrameMeta meta = make_frame_meta(1168, mcs_table(2), FrameKind::Standard);
  ReceiverConfig cfg;
  cfg.traceback_depth = 34;
  EXPECT_THROW(Receiver(cfg, meta, vehicular_corr(), 0.1), std::invalid_argument);
  cfg.traceback_depth = 35;
  EXPECT_NO_THROW(Receiver(cfg, meta, vehicular_corr(), 0.1));
  cfg.traceback_depth = 96;
  const Receiver rx(cfg, meta, vehicular_corr(), 0.1);
  EXPECT_GE(rx.seed_symbols() * 48, 16 + 96);
}

TEST(PtRegeneration, MatchesTransmitter) {
  std::mt19937_64 rng(70);
  for (int mcs_index : {0, 1, 2, 3}) {
    const McsSpec m = mcs_table(mcs_index);
    for (int t = 0; t < 10; ++t) {
      TxConfig cfg;
      cfg.mcs = m;
      cfg.kind = FrameKind::Modified;
      cfg.m_p = 3 + static_cast<int>(rng() % 10);
      cfg.seed = ScramblerState(1 + static_cast<unsigned>(rng() % 127));
      const TxFrame tx = build_frame(random_bits(rng, 8 * (100 + rng() % 200)), cfg);
      const PtSymbols pt = regenerate_pt_symbols(cfg.seed, make_default_ptb(m), tx.layout, m);
      ASSERT_EQ(pt.rows, tx.layout.pt_symbol_indices);
      const auto& dsc = data_subcarriers();
      for (std::size_t i = 0; i < pt.rows.size(); ++i) {
        for (std::size_t j = 0; j < dsc.size(); ++j) ASSERT_EQ(pt.points[i][j], tx.grid.s.at(pt.rows[i], dsc[j]));
      }
      const ScramblerState wrong(cfg.seed.value() % 127 + 1);
      const PtSymbols other = regenerate_pt_symbols(wrong, make_default_ptb(m), tx.layout, m);
      EXPECT_NE(other.points, pt.points);
    }
  }
}

TEST(BlockwiseDecoding, EqualsWholeFrameOnNoiselessLlrs) {
  std::mt19937_64 rng(71);
  for (int mcs_index : {0, 1, 2, 3}) {
    const McsSpec m = mcs_table(mcs_index);
    for (int t = 0; t < 10; ++t) {
      TxConfig cfg;
      cfg.mcs = m;
      cfg.kind = FrameKind::Modified;
      cfg.m_p = 2 + static_cast<int>(rng() % 12);
      cfg.seed = ScramblerState(1 + static_cast<unsigned>(rng() % 127));
      const TxFrame tx = build_frame(random_bits(rng, 8 * (150 + rng() % 200)), cfg);
      const Bits coded = conv_encode(tx.scrambled);
      std::vector<double> llr(coded.size());
      for (std::size_t i = 0; i < coded.size(); ++i) llr[i] = coded[i] ? -3.0 : 3.0;
      const std::size_t tail_end = tx.data_unit.tail_offset + 6;
      const Bits whole = viterbi_decode(std::span<const double>(llr).first(2 * tail_end), 0, 0U);
      const Bits blocks = blockwise_viterbi(llr, cfg.seed, make_default_ptb(m), tx.layout, tail_end);
      EXPECT_EQ(whole, blocks);
      EXPECT_EQ(blocks, Bits(tx.scrambled.begin(), tx.scrambled.begin() + static_cast<std::ptrdiff_t>(tail_end)));
    }
  }
}

// TX -> noiseless flat channel -> every receiver -> FB.
TEST(Receiver, NoiselessEndToEnd) {
  std::mt19937_64 rng(72);
  const CorrelationModel corr = vehicular_corr();
  for (int mcs_index : {0, 2}) {
    const McsSpec m = mcs_table(mcs_index);
    const std::size_t n_fb = 8 * 146;
    for (FrameKind kind : {FrameKind::Standard, FrameKind::Modified}) {
      const FrameMeta meta = make_frame_meta(n_fb, m, kind, 8);
      std::vector<Receiver> rxs;
      for (ReceiverKind rk : {ReceiverKind::LTLS, ReceiverKind::SFMMSE, ReceiverKind::MFMMSE, ReceiverKind::MBMMSE,
                              ReceiverKind::PerfectCSI}) {
        if (requires_modified_frame(rk) && kind == FrameKind::Standard) continue;
        ReceiverConfig rc;
        rc.kind = rk;
        rxs.emplace_back(rc, meta, corr, 1e-3);
      }
      for (int t = 0; t < 100; ++t) {
        TxConfig cfg;
        cfg.mcs = m;
        cfg.kind = kind;
        cfg.seed = ScramblerState(1 + static_cast<unsigned>(rng() % 127));
        const Bits fb = random_bits(rng, n_fb);
        const TxFrame tx = build_frame(fb, cfg);
        const ChannelRealization ch = flat_channel(tx.grid.m_total(), 0.0);
        Rng nrng(static_cast<std::uint64_t>(t));
        const CellGrid r = apply_channel(tx.grid, ch, nrng);
        for (const Receiver& rx : rxs) {
          const RxResult res = rx.decode_frame(r, &ch.h_freq);
          ASSERT_TRUE(res.crc_ok) << to_string(rx.config().kind) << " mcs " << mcs_index;
          ASSERT_EQ(res.fb, fb);
          EXPECT_TRUE(res.diag.seed_recovered);
          EXPECT_EQ(res.diag.seed, cfg.seed.value());
        }
      }
    }
  }
}

TEST(Receiver, ConfigurationChecks) {
  const CorrelationModel corr = vehicular_corr();
  const FrameMeta sf = make_frame_meta(1168, mcs_table(2), FrameKind::Standard);
  for (ReceiverKind k : {ReceiverKind::MFMMSE, ReceiverKind::MBMMSE}) {
    ReceiverConfig rc;
    rc.kind = k;
    EXPECT_THROW(Receiver(rc, sf, corr, 0.1), std::invalid_argument);
  }
  EXPECT_THROW(Receiver(ReceiverConfig{}, make_frame_meta(1168, mcs_table(4), FrameKind::Standard), corr, 0.1),
               std::invalid_argument);
  EXPECT_THROW(Receiver(ReceiverConfig{}, sf, corr, -1.0), std::invalid_argument);
  EXPECT_EQ(parse_receiver_kind("mbmmse"), ReceiverKind::MBMMSE);
  EXPECT_THROW(parse_receiver_kind("zf"), std::invalid_argument);
  const Receiver rx(ReceiverConfig{}, sf, corr, 0.1);
  EXPECT_THROW(rx.decode_frame(CellGrid(10)), std::invalid_argument);
  ReceiverConfig perfect;
  perfect.kind = ReceiverKind::PerfectCSI;
  EXPECT_THROW(Receiver(perfect, sf, corr, 0.1).decode_frame(CellGrid(35)), std::invalid_argument);
}

TEST(Receiver, PilotSetSize) {
  const CorrelationModel corr = vehicular_corr();
  const FrameMeta sf = make_frame_meta(1168, mcs_table(2), FrameKind::Standard);
  ReceiverConfig rc;
  EXPECT_EQ(Receiver(rc, sf, corr, 0.1).max_filter_pilots(), 2 * 52 + 33 * 4);
  rc.signal_as_pilot = true;
  EXPECT_EQ(Receiver(rc, sf, corr, 0.1).max_filter_pilots(), 2 * 52 + 32 * 4 + 52);
}

TEST(Receiver, BlockFilterSizeIndependentOfFrameLength) {
  const CorrelationModel corr = vehicular_corr();
  ReceiverConfig rc;
  rc.kind = ReceiverKind::MBMMSE;
  const McsSpec m = mcs_table(2);
  const Receiver short_rx(rc, make_frame_meta(8 * 146, m, FrameKind::Modified, 8), corr, 0.1);
  const Receiver long_rx(rc, make_frame_meta(8 * 1500, m, FrameKind::Modified, 8), corr, 0.1);
  EXPECT_EQ(short_rx.max_filter_pilots(), long_rx.max_filter_pilots());
  const auto sizes = long_rx.block_filter_pilots();
  ASSERT_GT(sizes.size(), 10U);
  const auto& pts = long_rx.meta().layout.pt_symbol_indices;
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    const int between = pts[i] - pts[i - 1] - 1;
    EXPECT_LE(sizes[i], 2 * 52 + between * 4);
  }
  // The first block also holds the two LT rows.
  EXPECT_LE(sizes[0], 3 * 52 + (pts[0] - 2) * 4);
}

// With one PT the first block is the full-frame LMMSE restricted to the
// rows up to that PT.
TEST(Receiver, SingleBlockMatchesDirectLmmse) {
  const CorrelationModel corr = vehicular_corr();
  const McsSpec m = mcs_table(2);
  const FrameMeta meta = make_frame_meta(64, m, FrameKind::Modified, 8);
  ASSERT_EQ(meta.layout.pt_symbol_indices.size(), 1U);
  const int pt_row = meta.layout.pt_symbol_indices[0];
  const double sigma2 = 0.05;
  ReceiverConfig rc;
  rc.kind = ReceiverKind::MBMMSE;
  const Receiver rx(rc, meta, corr, sigma2);

  std::mt19937_64 bits(73);
  Rng rng(74);
  TxConfig cfg;
  cfg.kind = FrameKind::Modified;
  const TxFrame tx = build_frame(random_bits(bits, 64), cfg);
  const ChannelRealization ch = make_channel(vehicular_pdp(), DopplerSpec::from_kmph(100), tx.grid.m_total(), sigma2, rng);
  const CellGrid r = apply_channel(tx.grid, ch, rng);
  const PtSymbols pt = regenerate_pt_symbols(cfg.seed, meta.ptb, meta.layout, m);
  const CellGrid h = rx.estimate_channel(r, nullptr, &pt);

  std::vector<Pilot> pilots;
  for (int row = 0; row <= pt_row; ++row) {
    if (row < 2 || row == pt_row) {
      for (int k : occupied_subcarriers()) pilots.push_back({{row, k}, tx.grid.s.at(row, k)});
    } else {
      for (int k : kPilotSubcarriers) pilots.push_back({{row, k}, tx.grid.s.at(row, k)});
    }
  }
  std::vector<Cell> targets;
  for (int row = 3; row < pt_row; ++row) {
    for (int k : data_subcarriers()) targets.push_back({row, k});
  }
  const auto est = lmmse_estimate(ls_pilot_estimates(r, pilots), pilots, targets, corr, sigma2);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    EXPECT_NEAR(std::abs(est[i] - h.at(targets[i].row, targets[i].k)), 0.0, 1e-9);
  }
}

TEST(Receiver, FrameLmmseBeatsHeldLtEstimate) {
  const double sigma2 = std::pow(10.0, -2.0);
  const PdpSpec pdp = vehicular_pdp();
  const DopplerSpec d = DopplerSpec::from_kmph(100);
  const CorrelationModel corr(pdp, d);
  const FrameMeta meta = make_frame_meta(1168, mcs_table(2), FrameKind::Standard);
  ReceiverConfig lt;
  lt.kind = ReceiverKind::LTLS;
  const Receiver rx_lt(lt, meta, corr, sigma2);
  const Receiver rx_mmse(ReceiverConfig{}, meta, corr, sigma2);
  std::mt19937_64 bits(75);
  Rng rng(76);
  double mse_lt = 0;
  double mse_mmse = 0;
  for (int t = 0; t < 1000; ++t) {
    const TxFrame tx = build_frame(random_bits(bits, 1168), TxConfig{});
    const ChannelRealization ch = make_channel(pdp, d, tx.grid.m_total(), sigma2, rng);
    const CellGrid r = apply_channel(tx.grid, ch, rng);
    const CellGrid a = rx_lt.estimate_channel(r, nullptr, nullptr);
    const CellGrid b = rx_mmse.estimate_channel(r, nullptr, nullptr);
    for (int row = 3; row < tx.grid.m_total(); ++row) {
      for (int k : data_subcarriers()) {
        mse_lt += std::norm(a.at(row, k) - ch.h_freq.at(row, k));
        mse_mmse += std::norm(b.at(row, k) - ch.h_freq.at(row, k));
      }
    }
  }
  EXPECT_LT(mse_mmse, mse_lt);
}

// Blockwise estimation pays a small MSE price against the full-frame MF estimate.
TEST(Receiver, BlockwiseMseCloseToFullFrame) {
  const double sigma2 = std::pow(10.0, -1.5);
  const PdpSpec pdp = vehicular_pdp();
  const DopplerSpec d = DopplerSpec::from_kmph(100);
  const CorrelationModel corr(pdp, d);
  const FrameMeta meta = make_frame_meta(1168, mcs_table(2), FrameKind::Modified, 8);
  ReceiverConfig full;
  full.kind = ReceiverKind::MFMMSE;
  ReceiverConfig block;
  block.kind = ReceiverKind::MBMMSE;
  const Receiver rx_full(full, meta, corr, sigma2);
  const Receiver rx_block(block, meta, corr, sigma2);
  std::mt19937_64 bits(77);
  Rng rng(78);
  double mse_full = 0;
  double mse_block = 0;
  for (int t = 0; t < 1000; ++t) {
    TxConfig cfg;
    cfg.kind = FrameKind::Modified;
    cfg.seed = ScramblerState(1 + static_cast<unsigned>(bits() % 127));
    const TxFrame tx = build_frame(random_bits(bits, 1168), cfg);
    const ChannelRealization ch = make_channel(pdp, d, tx.grid.m_total(), sigma2, rng);
    const CellGrid r = apply_channel(tx.grid, ch, rng);
    const PtSymbols pt = regenerate_pt_symbols(cfg.seed, meta.ptb, meta.layout, meta.mcs);
    const CellGrid a = rx_full.estimate_channel(r, nullptr, &pt);
    const CellGrid b = rx_block.estimate_channel(r, nullptr, &pt);
    for (int row = 3; row < tx.grid.m_total(); ++row) {
      if (meta.layout.is_pt_row(row)) continue;
      for (int k : data_subcarriers()) {
        mse_full += std::norm(a.at(row, k) - ch.h_freq.at(row, k));
        mse_block += std::norm(b.at(row, k) - ch.h_freq.at(row, k));
      }
    }
  }
  EXPECT_GE(mse_block, mse_full);
  EXPECT_LE(mse_block, 1.10 * mse_full) << "ratio " << mse_block / mse_full;
}

TEST(Receiver, DiagnosticsRow) {
  RxDiagnostics d;
  d.seed_recovered = true;
  d.seed = 93;
  d.pt_spacing = 8;
  d.crc_ok = true;
  d.estimator_mse = 0.25;
  d.block_errors = {0, 3};
  EXPECT_EQ(diagnostics_csv_header(), "frame,seed_recovered,seed,pt_spacing,pt_spacing_ok,crc_ok,estimator_mse,block_errors");
  EXPECT_EQ(diagnostics_csv_row(4, d), "4,1,93,8,1,1,0.25,0;3");
}
