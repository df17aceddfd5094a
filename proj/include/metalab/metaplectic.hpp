// Copyright 2026 The metalab Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef METALAB_METAPLECTIC_HPP_
#define METALAB_METAPLECTIC_HPP_

// Metaplectic operators on sampled functions. A quadratic Fourier transform
//
//   S_{W,m} psi(x) = (2 pi)^{-n/2} e^{-i pi n/4} i^m |det L|^{1/2}
//                    e^{i Px.x/2} int e^{-i Lx.x'} e^{i Qx'.x'/2} psi(x') dx'
//
// is evaluated as chirp(Q), a Riemann sum of the Fourier integral at the
// frequencies Lx (one type-2 NUFFT), then chirp(P). General symplectic
// matrices go through the two-factor decomposition of factor_free_pair.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "metalab/detail/fft.hpp"
#include "metalab/detail/nufft.hpp"
#include "metalab/errors.hpp"
#include "metalab/grid.hpp"
#include "metalab/symplectic.hpp"

namespace metalab {

/// Fraction of spectral energy allowed in the outer tenth of the Nyquist band
/// before an operator application is refused.
inline constexpr double kAliasingEnergy = 1e-7;
inline constexpr double kNyquistFraction = 0.9;

namespace detail {

inline double quad_form(const Matrix& m, const std::array<double, kMaxGridDim>& x, int n) {
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) s += m(a, b) * x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(b)];
  return s;
}

/// Relative L^2 weight of the DFT of psi at frequencies beyond
/// kNyquistFraction of the Nyquist limit on any axis.
inline double outer_band_energy(const SampledFunction& psi) {
  const GridSpec& g = psi.grid();
  const int N = g.points();
  std::vector<cplx> spec(psi.values().begin(), psi.values().end());
  fft_inplace(spec, std::vector<int>(static_cast<std::size_t>(g.n()), N));
  const int cut = static_cast<int>(std::ceil(kNyquistFraction * N / 2));
  auto outer = [&](int k) {
    const int m = k < N / 2 ? k : k - N;
    return std::abs(m) >= cut;
  };
  double total = 0.0, high = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double e = std::norm(spec[i]);
    total += e;
    const auto idx = g.unflatten(i);
    bool out = false;
    for (int a = 0; a < g.n(); ++a) out = out || outer(idx[static_cast<std::size_t>(a)]);
    if (out) high += e;
  }
  return total > 0.0 ? std::sqrt(high / total) : 0.0;
}

inline void guard_band(const SampledFunction& f, const char* stage, const Matrix& m, const char* name) {
  const double e = outer_band_energy(f);
  if (e > kAliasingEnergy) {
    std::ostringstream os;
    os << "aliasing risk " << stage << ": ||" << name << "|| = " << m.norm() << " on grid X = "
       << f.grid().half_width() << ", N = " << f.grid().points() << " leaves relative energy " << e
       << " near the Nyquist limit " << f.grid().nyquist();
    throw AliasingRisk(os.str());
  }
}

}  // namespace detail

/// Multiplication by e^{i Px.x/2}.
inline SampledFunction apply_chirp(const Matrix& p, const SampledFunction& psi) {
  const GridSpec& g = psi.grid();
  if (p.rows() != g.n() || p.cols() != g.n()) throw DimensionError("apply_chirp: P must be n x n");
  std::vector<cplx> out(psi.values().begin(), psi.values().end());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] *= std::polar(1.0, 0.5 * detail::quad_form(p, g.coords(i), g.n()));
  return SampledFunction(g, std::move(out));
}

/// Quadratic Fourier transform S_{W,m} on the grid of psi. Raises AliasingRisk
/// when the chirped input or the output is not resolved by the grid.
inline SampledFunction apply_quadratic_fourier(const GeneratingTriple& gen, const SampledFunction& psi) {
  const GridSpec& g = psi.grid();
  const int n = g.n();
  if (gen.n() != n) throw DimensionError("apply_quadratic_fourier: generating triple and grid dimensions differ");
  const SampledFunction f = apply_chirp(gen.q(), psi);
  detail::guard_band(f, "before the Fourier step", gen.q(), "Q");

  const double dx = g.dx();
  std::vector<double> angles;
  std::vector<std::size_t> inside;
  angles.reserve(g.size() * static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto x = g.coords(i);
    std::array<double, kMaxGridDim> theta{};
    bool ok = true;
    for (int a = 0; a < n; ++a) {
      double eta = 0.0;
      for (int b = 0; b < n; ++b) eta += gen.l()(a, b) * x[static_cast<std::size_t>(b)];
      theta[static_cast<std::size_t>(a)] = eta * dx;
      ok = ok && std::abs(eta * dx) < std::numbers::pi;
    }
    if (!ok) continue;
    inside.push_back(i);
    for (int a = 0; a < n; ++a) angles.push_back(theta[static_cast<std::size_t>(a)]);
  }
  const auto sums = detail::nufft_type2(f.values(), g.points(), n, angles, -1);

  const cplx prefactor = std::pow(2.0 * std::numbers::pi, -0.5 * n) *
                         std::polar(1.0, -std::numbers::pi * n / 4.0 + std::numbers::pi / 2.0 * gen.maslov()) *
                         std::sqrt(std::abs(gen.l().determinant())) * g.cell();
  std::vector<cplx> out(g.size(), cplx{0.0, 0.0});
  for (std::size_t k = 0; k < inside.size(); ++k) {
    const std::size_t i = inside[k];
    out[i] = prefactor * sums[k] * std::polar(1.0, 0.5 * detail::quad_form(gen.p(), g.coords(i), n));
  }
  SampledFunction result(g, std::move(out));
  detail::guard_band(result, "after the Fourier step", gen.p(), "P");
  return result;
}

/// One metaplectic operator over s: factor_free_pair(s) = (g1, g2), applied as
/// S_{g1}(S_{g2} psi). Defined up to the global sign of Mp(n).
inline SampledFunction apply_metaplectic(const SymplecticMatrix& s, const SampledFunction& psi) {
  if (s.n() != psi.grid().n()) throw DimensionError("apply_metaplectic: matrix and grid dimensions differ");
  const auto [g1, g2] = factor_free_pair(s);
  return apply_quadratic_fourier(g1, apply_quadratic_fourier(g2, psi));
}

/// J-hat = i^{-n/2} F with F the unitary Fourier transform. On self-dual grids
/// (dx = dxi, i.e. X^2 = pi N / 2) this is a single FFT; otherwise the
/// transform is evaluated at the spatial nodes by NUFFT.
inline SampledFunction apply_fourier_J(const SampledFunction& psi) {
  const GridSpec& g = psi.grid();
  const int n = g.n();
  const int N = g.points();
  const cplx prefactor = std::pow(2.0 * std::numbers::pi, -0.5 * n) * std::polar(1.0, -std::numbers::pi * n / 4.0) * g.cell();
  const bool self_dual = std::abs(g.dx() - g.dxi()) <= 1e-12 * g.dx();
  if (!self_dual) {
    // Same Riemann sum as the quadratic Fourier transform with (0, I, 0, 0), unguarded.
    std::vector<double> angles;
    std::vector<std::size_t> inside;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto x = g.coords(i);
      bool ok = true;
      for (int a = 0; a < n; ++a) ok = ok && std::abs(x[static_cast<std::size_t>(a)] * g.dx()) < std::numbers::pi;
      if (!ok) continue;
      inside.push_back(i);
      for (int a = 0; a < n; ++a) angles.push_back(x[static_cast<std::size_t>(a)] * g.dx());
    }
    const auto sums = detail::nufft_type2(psi.values(), N, n, angles, -1);
    std::vector<cplx> out(g.size(), cplx{0.0, 0.0});
    for (std::size_t k = 0; k < inside.size(); ++k) out[inside[k]] = prefactor * sums[k];
    return SampledFunction(g, std::move(out));
  }
  // x_j = (j - N/2) dx and xi_k = (k - N/2) dx: centring both indices turns the
  // DFT into a plain FFT with (-1)^{j + k + N/2} sign flips.
  std::vector<cplx> data(psi.values().begin(), psi.values().end());
  auto sign_of = [&](std::size_t flat) {
    const auto idx = g.unflatten(flat);
    int s = 0;
    for (int a = 0; a < n; ++a) s += idx[static_cast<std::size_t>(a)];
    return (s & 1) ? -1.0 : 1.0;
  };
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= sign_of(i);
  detail::fft_inplace(data, std::vector<int>(static_cast<std::size_t>(n), N));
  const double global = ((n * (N / 2)) & 1) ? -1.0 : 1.0;
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= prefactor * sign_of(i) * global;
  return SampledFunction(g, std::move(data));
}

/// Fractional Fourier transform of angle theta (n = 1): the metaplectic
/// operator of the rotation (cos, sin; -sin, cos). Near sin(theta) = 0 the
/// rotation is not free and is split as (theta - pi/2) followed by pi/2.
inline SampledFunction fractional_fourier(double theta, const SampledFunction& psi) {
  if (psi.grid().n() != 1) throw DimensionError("fractional_fourier: n must be 1");
  if (std::abs(std::sin(theta)) > 0.1)
    return apply_quadratic_fourier(generating_from_free(SymplecticMatrix::rotation(1, theta)), psi);
  const auto quarter = generating_from_free(SymplecticMatrix::rotation(1, std::numbers::pi / 2));
  return apply_quadratic_fourier(
      quarter, apply_quadratic_fourier(generating_from_free(SymplecticMatrix::rotation(1, theta - std::numbers::pi / 2)), psi));
}

/// Metaplectic operator of diag(l, 1/l): psi -> prod_a l_a^{-1/2} psi(x_a / l_a),
/// evaluated at the nodes of `target` by band-limited interpolation of psi.
inline SampledFunction apply_dilation(const Vector& l, const SampledFunction& psi, const GridSpec& target) {
  const int n = psi.grid().n();
  if (l.size() != n || target.n() != n) throw DimensionError("apply_dilation: dimension mismatch");
  double jac = 1.0;
  for (int a = 0; a < n; ++a) {
    if (!(l(a) > 0.0)) throw PreconditionError("apply_dilation: factors must be positive");
    jac *= l(a);
  }
  std::vector<double> points;
  points.reserve(target.size() * static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < target.size(); ++i) {
    const auto x = target.coords(i);
    for (int a = 0; a < n; ++a) points.push_back(x[static_cast<std::size_t>(a)] / l(a));
  }
  auto values = evaluate_bandlimited(psi, points);
  for (auto& v : values) v /= std::sqrt(jac);
  return SampledFunction(target, std::move(values));
}

/// Smallest grid (power-of-two N) on which a function living in the
/// phase-space ball of radius r0 stays resolved through the linear maps in
/// `stages`: the half width covers r0 ||(A B)||, the Nyquist limit covers
/// r0 ||(C D)|| with a margin.
inline GridSpec adequate_grid(int n, const std::vector<Matrix>& stages, double r0, double margin = 1.25) {
  double pos = r0, freq = r0;
  for (const Matrix& m : stages) {
    Eigen::JacobiSVD<Matrix> top(m.topRows(n)), bottom(m.bottomRows(n));
    pos = std::max(pos, r0 * top.singularValues()(0));
    freq = std::max(freq, r0 * bottom.singularValues()(0));
  }
  const double X = margin * pos;
  const double dx = std::numbers::pi / (margin * freq / kNyquistFraction);
  int N = kMinGridPoints;
  while (2.0 * X / N > dx) N *= 2;
  return GridSpec(n, X, N);
}

/// Phase-space radius containing the built-in test functions for grid sizing.
inline constexpr double kDefaultFootprint = 9.0;

/// Linear maps traversed by apply_metaplectic(s, .): the input, each chirped
/// input of a Fourier step, the intermediate after the first factor, and the
/// output.
inline std::vector<Matrix> metaplectic_stages(const SymplecticMatrix& s) {
  const int n = s.n();
  const auto [g1, g2] = factor_free_pair(s);
  auto chirp = [n](const Matrix& q) {
    Matrix v = Matrix::Identity(2 * n, 2 * n);
    v.bottomLeftCorner(n, n) = q;
    return v;
  };
  const Matrix id = Matrix::Identity(2 * n, 2 * n);
  const Matrix s2 = free_from_generating(g2).matrix();
  return {id, chirp(g2.q()), s2, chirp(g1.q()) * s2, s.matrix()};
}

/// adequate_grid for apply_metaplectic(s, .) on the built-in functions.
inline GridSpec grid_for(const SymplecticMatrix& s, double r0 = kDefaultFootprint) {
  return adequate_grid(s.n(), metaplectic_stages(s), r0);
}

}  // namespace metalab

#endif  // METALAB_METAPLECTIC_HPP_
