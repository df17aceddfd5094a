// Copyright 2026 The metalab Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef METALAB_DETAIL_NUFFT_HPP_
#define METALAB_DETAIL_NUFFT_HPP_

// Type-2 nonuniform FFT (uniform coefficients -> arbitrary targets) by
// Gaussian gridding, after Greengard & Lee, "Accelerating the nonuniform fast
// Fourier transform" (SIAM Review 46, 2004). Oversampling 2, spreading
// half-width 12; relative accuracy is ~1e-12 on smooth data.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "metalab/detail/fft.hpp"
#include "metalab/errors.hpp"

namespace metalab::detail {

struct NufftParams {
  int oversample = 2;
  int half_width = 12;
};

/// Evaluates f(theta_j) = sum_k c_k exp(sign * i * k . theta_j) for
/// k in [-N/2, N/2)^dim, where coeffs is row-major with index k + N/2 per axis.
/// targets holds dim consecutive angles per point. dim must be 1 or 2.
inline std::vector<cplx> nufft_type2(std::span<const cplx> coeffs, int N, int dim,
                                     std::span<const double> targets, int sign,
                                     NufftParams params = {}) {
  if (dim < 1 || dim > 2) throw DimensionError("nufft_type2: dim must be 1 or 2");
  if (sign != 1 && sign != -1) throw PreconditionError("nufft_type2: sign must be +-1");
  const std::size_t per_axis = static_cast<std::size_t>(N);
  const std::size_t expected = dim == 1 ? per_axis : per_axis * per_axis;
  if (coeffs.size() != expected) throw DimensionError("nufft_type2: coefficient count");
  if (targets.size() % static_cast<std::size_t>(dim) != 0)
    throw DimensionError("nufft_type2: target array length");

  const double pi = std::numbers::pi;
  const int M = params.oversample * N;
  const int w = params.half_width;
  const double R = params.oversample;
  const double tau = pi * w / (static_cast<double>(N) * N * R * (R - 0.5));

  // Deconvolution factors 1/ghat(k), ghat(k) = sqrt(tau/pi) exp(-tau k^2).
  std::vector<double> deconv(per_axis);
  for (int i = 0; i < N; ++i) {
    const double k = i - N / 2;
    deconv[static_cast<std::size_t>(i)] = std::sqrt(pi / tau) * std::exp(tau * k * k);
  }

  const std::size_t Mu = static_cast<std::size_t>(M);
  std::vector<cplx> fine(dim == 1 ? Mu : Mu * Mu, cplx{0.0, 0.0});
  auto wrap = [M](long k) { return static_cast<std::size_t>(((k % M) + M) % M); };
  if (dim == 1) {
    for (int i = 0; i < N; ++i)
      fine[wrap(i - N / 2)] = coeffs[static_cast<std::size_t>(i)] * deconv[static_cast<std::size_t>(i)];
  } else {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        fine[wrap(i - N / 2) * Mu + wrap(j - N / 2)] =
            coeffs[static_cast<std::size_t>(i) * per_axis + static_cast<std::size_t>(j)] *
            deconv[static_cast<std::size_t>(i)] * deconv[static_cast<std::size_t>(j)];
  }
  fft_inplace(fine, std::vector<int>(static_cast<std::size_t>(dim), M),
              sign < 0 ? FftSign::Forward : FftSign::Backward);

  const std::size_t count = targets.size() / static_cast<std::size_t>(dim);
  std::vector<cplx> out(count);
  const double h = 2.0 * pi / M;
  const double norm = dim == 1 ? 1.0 / M : 1.0 / (static_cast<double>(M) * M);
  const std::size_t span = static_cast<std::size_t>(2 * w);

  // Per-axis spreading weights and wrapped indices for one target.
  auto axis_weights = [&](double theta, std::vector<double>& wts, std::vector<std::size_t>& idx) {
    const long m0 = static_cast<long>(std::floor(theta / h));
    for (std::size_t s = 0; s < span; ++s) {
      const long m = m0 - w + 1 + static_cast<long>(s);
      const double d = theta - h * static_cast<double>(m);
      wts[s] = std::exp(-d * d / (4.0 * tau));
      idx[s] = wrap(m);
    }
  };

  std::vector<double> w1(span), w2(span);
  std::vector<std::size_t> i1(span), i2(span);
  for (std::size_t t = 0; t < count; ++t) {
    cplx acc{0.0, 0.0};
    if (dim == 1) {
      axis_weights(targets[t], w1, i1);
      for (std::size_t s = 0; s < span; ++s) acc += w1[s] * fine[i1[s]];
    } else {
      axis_weights(targets[2 * t], w1, i1);
      axis_weights(targets[2 * t + 1], w2, i2);
      for (std::size_t a = 0; a < span; ++a) {
        cplx row{0.0, 0.0};
        const cplx* base = fine.data() + i1[a] * Mu;
        for (std::size_t b = 0; b < span; ++b) row += w2[b] * base[i2[b]];
        acc += w1[a] * row;
      }
    }
    out[t] = acc * norm;
  }
  return out;
}

}  // namespace metalab::detail

#endif  // METALAB_DETAIL_NUFFT_HPP_
