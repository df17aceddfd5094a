#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "metalab/timefreq.hpp"

using namespace metalab;

namespace {

constexpr double kPi = std::numbers::pi;

// Signed frequency index of FFT position c along a row of length M.
int signed_index(std::size_t c, int M) {
  const int k = static_cast<int>(c);
  return k < M / 2 ? k : k - M;
}

SampledFunction reflect(const SampledFunction& f) {
  // phi(-x_j) = phi(x_{N-j}); x_0 = -X has no mirror and gets 0.
  const int N = f.grid().points();
  std::vector<cplx> v(f.values().size());
  for (int j = 1; j < N; ++j) v[static_cast<std::size_t>(j)] = f[static_cast<std::size_t>(N - j)];
  return SampledFunction(f.grid(), std::move(v));
}

}  // namespace

TEST(Stft, GaussianClosedForm) {
  GridSpec g(1, 12.0, 256);
  auto phi = gaussian_window(g);
  auto v = stft(phi, phi);
  const auto& L = v.layout;
  EXPECT_NEAR(v.row(128)[0].real(), 1.0 / (2 * kPi), 1e-12);
  double err = 0.0;
  for (std::size_t r = 0; r < L.rows(); ++r) {
    const double x = L.x_coords(r)[0];
    for (std::size_t c = 0; c < L.row_length(); ++c) {
      const double xi = L.xi_coords(c)[0];
      err = std::max(err, std::abs(std::abs(v.row(r)[c]) - std::exp(-(x * x + xi * xi) / 4) / (2 * kPi)));
    }
  }
  EXPECT_LT(err, 1e-6);
}

TEST(Stft, GaussianClosedFormPhase) {
  // V_phi phi(x, xi) = (2 pi)^{-1} e^{-i x xi/2} e^{-(x^2 + xi^2)/4}.
  GridSpec g(1, 12.0, 256);
  auto phi = gaussian_window(g);
  auto v = stft(phi, phi);
  double err = 0.0;
  for (std::size_t r = 0; r < v.layout.rows(); ++r)
    for (std::size_t c = 0; c < v.layout.row_length(); ++c) {
      const double x = v.layout.x_coords(r)[0], xi = v.layout.xi_coords(c)[0];
      err = std::max(err, std::abs(v.row(r)[c] - std::polar(std::exp(-(x * x + xi * xi) / 4) / (2 * kPi), -x * xi / 2)));
    }
  EXPECT_LT(err, 1e-6);
}

TEST(Stft, ShiftCovarianceAndPhaseInvariance) {
  GridSpec g(1, 12.0, 256);
  auto phi = gaussian_window(g);
  auto psi = discretize(builtin_corpus(1)[4], g);
  const int shift = 12;  // 1.125 = 12 dx
  auto shifted = discretize(builtin_corpus(1)[4].with_shift({0.6 + shift * g.dx()}), g);
  auto a = stft(psi, phi), b = stft(shifted, phi), c = stft(std::polar(1.0, 0.7) * psi, phi);
  double err = 0.0, perr = 0.0;
  for (std::size_t r = 0; r + shift < a.layout.rows(); ++r)
    for (std::size_t k = 0; k < a.layout.row_length(); ++k)
      err = std::max(err, std::abs(std::abs(b.row(r + shift)[k]) - std::abs(a.row(r)[k])));
  for (std::size_t i = 0; i < a.values.size(); ++i) perr = std::max(perr, std::abs(std::abs(a.values[i]) - std::abs(c.values[i])));
  EXPECT_LT(err, 1e-6);
  EXPECT_LT(perr, 1e-15);
}

TEST(Stft, StridesSubsampleTheFullTransform) {
  GridSpec g(1, 12.0, 256);
  auto phi = gaussian_window(g);
  auto psi = discretize(builtin_corpus(1)[1], g);
  auto full = stft(psi, phi);
  auto coarse = stft(psi, phi, 4, 2);
  const int M = coarse.layout.xi_points();
  double err = 0.0;
  for (std::size_t r = 0; r < coarse.layout.rows(); ++r)
    for (std::size_t c = 0; c < coarse.layout.row_length(); ++c) {
      const int m = signed_index(c, M) * 2;
      err = std::max(err, std::abs(coarse.row(r)[c] - full.row(4 * r)[static_cast<std::size_t>((m + 256) % 256)]));
    }
  EXPECT_LT(err, 1e-14);
}

TEST(Stft, RejectsMismatchedGrids) {
  auto a = gaussian_window(GridSpec(1, 12.0, 256));
  auto b = gaussian_window(GridSpec(1, 10.0, 256));
  EXPECT_THROW(stft(a, b), GridMismatch);
  EXPECT_THROW(cross_wigner(a, b), GridMismatch);
}

TEST(Wigner, GaussianClosedForm) {
  GridSpec g(1, 12.0, 256);
  auto phi = gaussian_window(g);
  auto w = cross_wigner(phi, phi);
  double err = 0.0;
  for (std::size_t r = 0; r < w.layout.rows(); ++r)
    for (std::size_t c = 0; c < w.layout.row_length(); ++c) {
      const double x = w.layout.x_coords(r)[0], xi = w.layout.xi_coords(c)[0];
      err = std::max(err, std::abs(w.row(r)[c] - std::exp(-(x * x + xi * xi)) / kPi));
    }
  EXPECT_LT(err, 1e-5);
}

TEST(Wigner, RealEvenForRealEvenArguments) {
  GridSpec g(1, 12.0, 256);
  auto h = discretize(FunctionDescriptor::hermite(2), g);
  auto w = cross_wigner(h, h);
  const double peak = w.max_abs();
  const int N = 256;
  double imag = 0.0, odd = 0.0;
  for (std::size_t r = 1; r < w.layout.rows(); ++r)
    for (std::size_t c = 1; c < w.layout.row_length(); ++c) {
      imag = std::max(imag, std::abs(w.row(r)[c].imag()));
      odd = std::max(odd, std::abs(w.row(r)[c] - w.row(static_cast<std::size_t>(N) - r)[static_cast<std::size_t>(N) - c]));
    }
  EXPECT_LT(imag / peak, 1e-10);
  EXPECT_LT(odd / peak, 1e-10);
}

TEST(Wigner, RealForEqualArgumentsAndMarginal) {
  GridSpec g(1, 12.0, 256);
  auto psi = discretize(builtin_corpus(1)[5], g);
  auto w = cross_wigner(psi, psi);
  const double peak = w.max_abs();
  double imag = 0.0, marg = 0.0;
  for (std::size_t r = 0; r < w.layout.rows(); ++r) {
    cplx s{0.0, 0.0};
    for (std::size_t c = 0; c < w.layout.row_length(); ++c) {
      imag = std::max(imag, std::abs(w.row(r)[c].imag()));
      s += w.row(r)[c];
    }
    marg = std::max(marg, std::abs(s * g.dxi() - std::norm(psi[r])));
  }
  EXPECT_LT(imag / peak, 1e-10);
  EXPECT_LT(marg, 1e-3);
}

TEST(Wigner, MoyalSmallGrid) {
  for (int n : {1, 2}) {
    GridSpec g(n, n == 1 ? 12.0 : 10.0, n == 1 ? 256 : 64);
    std::vector<SampledFunction> fs;
    for (const auto& d : builtin_corpus(n)) fs.push_back(discretize(d, g));
    std::vector<WignerPair> pairs;
    for (const auto& f : fs) pairs.push_back({&f, &f});
    std::vector<cplx> acc(fs.size() * fs.size());
    wigner_rows(pairs, g, [&](std::size_t, const std::vector<std::span<const cplx>>& rows) {
      for (std::size_t i = 0; i < fs.size(); ++i)
        for (std::size_t j = 0; j < fs.size(); ++j)
          for (std::size_t c = 0; c < rows[i].size(); ++c) acc[i * fs.size() + j] += rows[i][c] * std::conj(rows[j][c]);
    });
    const double cell = std::pow(g.dx() * g.dxi(), n);
    for (std::size_t i = 0; i < fs.size(); ++i)
      for (std::size_t j = 0; j < fs.size(); ++j) {
        const double want = std::pow(2 * kPi, -n) * std::norm(inner(fs[i], fs[j]));
        EXPECT_LT(std::abs(acc[i * fs.size() + j] * cell - want) / want, 1e-5) << n << ":" << i << "," << j;
      }
  }
}

TEST(Wigner, StreamedMatchesMaterialised) {
  GridSpec g(1, 12.0, 256);
  auto a = discretize(builtin_corpus(1)[1], g), b = discretize(builtin_corpus(1)[3], g);
  auto w = cross_wigner(a, b);
  auto direct = phase_space_inner(w, w);
  cplx streamed{0.0, 0.0};
  wigner_rows({{&a, &b}}, g, [&](std::size_t r, const std::vector<std::span<const cplx>>& rows) {
    for (std::size_t c = 0; c < rows[0].size(); ++c) {
      EXPECT_EQ(rows[0][c], w.row(r)[c]);
      streamed += std::norm(rows[0][c]);
    }
  });
  EXPECT_NEAR(std::abs(streamed * g.dx() * g.dxi() - direct), 0.0, 1e-15);
}

TEST(Wigner, StftIdentityNeedsReflectedWindow) {
  // |W(psi, phi)(x, xi)| = 2^n |V_{phi(-.)} psi(2x, 2xi)|. The window is an
  // off-centre Gaussian so the unreflected form visibly fails.
  GridSpec g(1, 8.0, 128);
  GridSpec wide = g.widened(1);
  const auto fpsi = builtin_corpus(1)[1];
  const auto fphi = FunctionDescriptor::gaussian(1).with_shift({0.7});
  auto w = cross_wigner(discretize(fpsi, g), discretize(fphi, g));
  auto psi_w = discretize(fpsi, wide), phi_w = discretize(fphi, wide);
  // (2x_j, 2xi_m) = wide x-node 2j, wide frequency 4m.
  auto reflected = stft(psi_w, reflect(phi_w), 2, 4);
  auto literal = stft(psi_w, phi_w, 2, 4);
  const int M = reflected.layout.xi_points();
  const double peak = w.max_abs();
  double err_reflected = 0.0, err_literal = 0.0;
  for (std::size_t r = 0; r < w.layout.rows(); ++r)
    for (std::size_t c = 0; c < static_cast<std::size_t>(M); ++c) {
      const int m = signed_index(c, M);
      const cplx wv = w.row(r)[static_cast<std::size_t>((m + 128) % 128)];
      err_reflected = std::max(err_reflected, std::abs(std::abs(wv) - 2 * std::abs(reflected.row(r)[c])));
      err_literal = std::max(err_literal, std::abs(std::abs(wv) - 2 * std::abs(literal.row(r)[c])));
    }
  EXPECT_LT(err_reflected / peak, 1e-5);
  EXPECT_GT(err_literal / peak, 1e-2);
}

TEST(MixedNorm, GaussianValuesAndFubini) {
  GridSpec g(1, 12.0, 256);
  auto phi = gaussian_window(g);
  auto v = stft(phi, phi);
  EXPECT_NEAR(mixed_norm(v, kInfinity, kInfinity, NormOrder::kXInner), 1.0 / (2 * kPi), 1e-12);
  EXPECT_NEAR(mixed_norm(v, 1, 1, NormOrder::kXInner), 2.0, 2e-2);
  auto psi = discretize(builtin_corpus(1)[5], g);
  auto vp = stft(psi, phi);
  for (double p : {1.0, 2.0, 4.0, kInfinity})
    EXPECT_NEAR(mixed_norm(vp, p, p, NormOrder::kXInner), mixed_norm(vp, p, p, NormOrder::kXiInner),
                1e-13 * mixed_norm(vp, p, p, NormOrder::kXInner));
  EXPECT_THROW(mixed_norm(vp, 0.5, 1, NormOrder::kXInner), PreconditionError);
}

TEST(MixedNorm, OrdersDifferForMixedExponents) {
  // For a product |F| = f(x) g(xi) both orders factor; check against that.
  GridSpec g(1, 12.0, 256);
  auto phi = gaussian_window(g);
  auto v = stft(phi, phi);
  // |V| = (2 pi)^{-1} e^{-x^2/4} e^{-xi^2/4}: L^1 in x is 2 sqrt(pi), sup in xi is 1.
  EXPECT_NEAR(mixed_norm(v, 1, kInfinity, NormOrder::kXInner), 2 * std::sqrt(kPi) / (2 * kPi), 1e-8);
  EXPECT_NEAR(mixed_norm(v, kInfinity, 1, NormOrder::kXInner), 2 * std::sqrt(kPi) / (2 * kPi), 1e-8);
  EXPECT_NEAR(mixed_norm(v, 2, 1, NormOrder::kXiInner), std::sqrt(std::sqrt(2 * kPi)) * 2 * std::sqrt(kPi) / (2 * kPi), 1e-8);
}

TEST(ModulationNorm, M2IsL2) {
  // ||V_phi psi||_{L^2} = (2 pi)^{-n/2} ||psi|| ||phi||.
  std::mt19937_64 rng(5);
  GridSpec g(1, 16.0, 512);
  auto window = gaussian_window(g);
  std::vector<double> ratios;
  for (int k = 0; k < 10; ++k) {
    auto psi = discretize(random_descriptor(1, rng), g);
    ratios.push_back(modulation_norm(psi, 2, 2, window) / psi.norm());
  }
  for (double r : ratios) {
    EXPECT_NEAR(r, ratios[0], 1e-3 * ratios[0]);
    EXPECT_NEAR(r, 1.0 / std::sqrt(2 * kPi), 1e-8);
  }
}

TEST(ModulationNorm, DualityBound) {
  // <f, g> = (2 pi)^n <V f, V g> for a unit window, so the constant is (2 pi)^n.
  std::mt19937_64 rng(6);
  GridSpec g(1, 16.0, 512);
  auto window = gaussian_window(g);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    auto f = discretize(random_descriptor(1, rng), g);
    auto h = discretize(random_descriptor(1, rng), g);
    const double ratio =
        std::abs(inner(f, h)) / (modulation_norm(f, 1, 1, window, NormOrder::kXInner, 2, 2) *
                                 modulation_norm(h, kInfinity, kInfinity, window, NormOrder::kXInner, 2, 2));
    worst = std::max(worst, ratio);
  }
  EXPECT_LE(worst, 2 * kPi);
  const auto pin = fixtures::pinned("timefreq.duality_constant", worst);
  ASSERT_TRUE(pin.has_value()) << "fixture timefreq.duality_constant missing";
  EXPECT_NEAR(worst, *pin, 0.05 * *pin);
}

TEST(ModulationNorm, NestingConstants) {
  GridSpec g(1, 16.0, 512);
  auto window = gaussian_window(g);
  const std::vector<std::pair<double, double>> pairs = {{1, 2}, {2, kInfinity}, {1, kInfinity}};
  std::vector<double> worst(pairs.size(), 0.0);
  for (const auto& d : builtin_corpus(1)) {
    auto psi = discretize(d, g);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto [p, q] = pairs[i];
      worst[i] = std::max(worst[i], modulation_norm(psi, q, q, window) / modulation_norm(psi, p, p, window));
    }
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string key = "timefreq.nesting_" + std::to_string(static_cast<int>(pairs[i].first)) + "_" +
                            (std::isinf(pairs[i].second) ? std::string("inf") : std::to_string(static_cast<int>(pairs[i].second)));
    const auto pin = fixtures::pinned(key, worst[i]);
    ASSERT_TRUE(pin.has_value()) << "fixture " << key << " missing";
    EXPECT_LE(worst[i], *pin * 1.05) << key;
  }
}

TEST(PhaseSpaceIo, BinaryRoundTripAndCsvShape) {
  GridSpec g(1, 12.0, 64);
  auto phi = gaussian_window(g);
  auto v = stft(phi, phi, 1, 2);
  std::stringstream ss;
  write_binary(ss, v);
  auto back = read_phase_space_binary(ss, 12.0);
  EXPECT_EQ(back.values, v.values);
  EXPECT_EQ(back.layout.xi_decimation, 2);
  std::stringstream csv;
  write_csv(csv, v);
  std::string line;
  int count = -1;
  while (std::getline(csv, line)) ++count;
  EXPECT_EQ(count, 64 * 32);
}
