// Copyright 2026 The metalab Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef METALAB_TIMEFREQ_HPP_
#define METALAB_TIMEFREQ_HPP_

// Short-time Fourier transform, cross-Wigner distribution and mixed
// (modulation / Wiener amalgam) norms on phase-space grids.
//
//   V_phi psi(x, xi)    = (2 pi)^{-n} int e^{-i xi.y} psi(y) conj(phi(y - x)) dy
//   W(psi, phi)(x, xi)  = (2 pi)^{-n} int e^{-i xi.y} psi(x + y/2) conj(phi(x - y/2)) dy
//
// Arrays are produced row by row (one row = all frequencies at one x-node) so
// that norms and inner products of large transforms can be streamed without
// materialising N^{2n} values.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <span>
#include <vector>

#include "metalab/detail/fft.hpp"
#include "metalab/detail/parallel.hpp"
#include "metalab/errors.hpp"
#include "metalab/grid.hpp"

namespace metalab {

enum class PhaseSpaceKind { kStft, kWigner };
enum class NormOrder { kXInner, kXiInner };

/// Phase-space sampling derived from a base grid: x-nodes every x_stride base
/// nodes, frequencies xi_m = m * xi_decimation * pi / X for
/// m in [-N/(2 D), N/(2 D)) per axis.
struct PhaseSpaceLayout {
  GridSpec grid;
  int x_stride = 1;
  int xi_decimation = 1;

  PhaseSpaceLayout(GridSpec g, int xs = 1, int xd = 1) : grid(g), x_stride(xs), xi_decimation(xd) {
    const int N = g.points();
    if (xs < 1 || N % xs != 0 || xd < 1 || N % xd != 0 || N / xd < 2)
      throw PreconditionError("PhaseSpaceLayout: strides must divide N");
  }
  int n() const { return grid.n(); }
  int x_points() const { return grid.points() / x_stride; }
  int xi_points() const { return grid.points() / xi_decimation; }
  std::size_t rows() const { return ipow(x_points()); }
  std::size_t row_length() const { return ipow(xi_points()); }
  double x_cell() const { return std::pow(grid.dx() * x_stride, n()); }
  double xi_cell() const { return std::pow(grid.dxi() * xi_decimation, n()); }
  /// Base-grid multi-index of x-row r.
  std::array<int, kMaxGridDim> x_index(std::size_t r) const {
    std::array<int, kMaxGridDim> idx{};
    for (int a = n() - 1; a >= 0; --a) {
      idx[static_cast<std::size_t>(a)] = static_cast<int>(r % static_cast<std::size_t>(x_points())) * x_stride;
      r /= static_cast<std::size_t>(x_points());
    }
    return idx;
  }
  std::array<double, kMaxGridDim> x_coords(std::size_t r) const {
    auto idx = x_index(r);
    std::array<double, kMaxGridDim> x{};
    for (int a = 0; a < n(); ++a) x[static_cast<std::size_t>(a)] = grid.node(idx[static_cast<std::size_t>(a)]);
    return x;
  }
  /// Frequency of entry c in a row (FFT order: m = c for c < M/2, c - M above).
  std::array<double, kMaxGridDim> xi_coords(std::size_t c) const {
    std::array<double, kMaxGridDim> xi{};
    const int M = xi_points();
    for (int a = n() - 1; a >= 0; --a) {
      const int k = static_cast<int>(c % static_cast<std::size_t>(M));
      c /= static_cast<std::size_t>(M);
      xi[static_cast<std::size_t>(a)] = (k < M / 2 ? k : k - M) * grid.dxi() * xi_decimation;
    }
    return xi;
  }

 private:
  std::size_t ipow(int m) const {
    std::size_t s = 1;
    for (int a = 0; a < n(); ++a) s *= static_cast<std::size_t>(m);
    return s;
  }
};

/// A materialised transform; row r holds all frequencies (FFT order) at x-row r.
struct PhaseSpaceArray {
  PhaseSpaceLayout layout;
  PhaseSpaceKind kind;
  std::vector<cplx> values;

  std::span<const cplx> row(std::size_t r) const {
    return std::span<const cplx>(values).subspan(r * layout.row_length(), layout.row_length());
  }
  double max_abs() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
  }
};

/// Largest array stft / cross_wigner will materialise; larger transforms must
/// be streamed.
inline constexpr std::size_t kMaxMaterialised = std::size_t{1} << 25;

using RowVisitor = std::function<void(std::size_t row, const std::vector<std::span<const cplx>>& values)>;

namespace detail {

inline constexpr std::size_t kRowBlock = 32;

/// Computes rows in blocks (parallel within a block) and hands them to the
/// visitor strictly in row order.
template <class Compute>
void stream_rows(const PhaseSpaceLayout& layout, std::size_t transforms, Compute&& compute, const RowVisitor& visit) {
  const std::size_t rows = layout.rows();
  const std::size_t len = layout.row_length();
  std::vector<cplx> buffer(kRowBlock * transforms * len);
  std::vector<std::span<const cplx>> views(transforms);
  for (std::size_t start = 0; start < rows; start += kRowBlock) {
    const std::size_t count = std::min(kRowBlock, rows - start);
    parallel_blocks(count * transforms, [&](std::size_t b) {
      const std::size_t r = b / transforms, t = b % transforms;
      std::span<cplx> slot(buffer.data() + (r * transforms + t) * len, len);
      std::fill(slot.begin(), slot.end(), cplx{0.0, 0.0});
      compute(start + r, t, slot);
    });
    for (std::size_t r = 0; r < count; ++r) {
      for (std::size_t t = 0; t < transforms; ++t)
        views[t] = std::span<const cplx>(buffer.data() + (r * transforms + t) * len, len);
      visit(start + r, views);
    }
  }
}

inline void require_same_grid(const SampledFunction& a, const SampledFunction& b, const char* where) {
  if (!(a.grid() == b.grid())) throw GridMismatch(std::string(where) + ": psi and phi live on different grids");
}

inline int wrap_index(long k, int m) { return static_cast<int>(((k % m) + m) % m); }

}  // namespace detail

// ---------------------------------------------------------------------------
// STFT.

struct StftPair {
  const SampledFunction* psi;
  const SampledFunction* window;
};

/// Streams V_window psi for each pair over a common layout.
inline void stft_rows(const std::vector<StftPair>& pairs, const PhaseSpaceLayout& layout, const RowVisitor& visit) {
  const GridSpec& g = layout.grid;
  for (const auto& p : pairs) {
    if (!(p.psi->grid() == g) || !(p.window->grid() == g)) throw GridMismatch("stft: functions must live on the layout grid");
    if (p.window->norm() == 0.0) throw PreconditionError("stft: window is zero");
  }
  const int n = g.n();
  const int N = g.points();
  const int M = layout.xi_points();
  const double pi = std::numbers::pi;
  const double scale = std::pow(2.0 * pi, -n) * g.cell();
  // Window index range with non-negligible samples, per axis (Gaussian-type
  // windows vanish to machine precision long before the grid edge).
  struct Range {
    int lo = 0, hi = 0;
  };
  std::vector<std::array<Range, kMaxGridDim>> support(pairs.size());
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    const auto w = pairs[t].window->values();
    double peak = 0.0;
    for (const auto& v : w) peak = std::max(peak, std::abs(v));
    std::array<Range, kMaxGridDim> r;
    for (int a = 0; a < n; ++a) r[static_cast<std::size_t>(a)] = {N, -1};
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (std::abs(w[i]) <= 1e-18 * peak) continue;
      const auto idx = g.unflatten(i);
      for (int a = 0; a < n; ++a) {
        auto& ra = r[static_cast<std::size_t>(a)];
        ra.lo = std::min(ra.lo, idx[static_cast<std::size_t>(a)]);
        ra.hi = std::max(ra.hi, idx[static_cast<std::size_t>(a)]);
      }
    }
    support[t] = r;
  }
  const std::vector<int> dims(static_cast<std::size_t>(n), M);
  auto compute = [&](std::size_t row, std::size_t t, std::span<cplx> out) {
    const auto j = layout.x_index(row);
    const auto psi = pairs[t].psi->values();
    const auto win = pairs[t].window->values();
    // y_k - x_j = (k - j) dx, window node (k - j) + N/2.
    std::array<int, kMaxGridDim> klo{}, khi{};
    for (int a = 0; a < n; ++a) {
      const auto au = static_cast<std::size_t>(a);
      klo[au] = std::max(0, support[t][au].lo + j[au] - N / 2);
      khi[au] = std::min(N - 1, support[t][au].hi + j[au] - N / 2);
    }
    if (n == 1) {
      for (int k = klo[0]; k <= khi[0]; ++k)
        out[static_cast<std::size_t>(k % M)] +=
            psi[static_cast<std::size_t>(k)] * std::conj(win[static_cast<std::size_t>(k - j[0] + N / 2)]);
    } else {
      for (int k1 = klo[0]; k1 <= khi[0]; ++k1)
        for (int k2 = klo[1]; k2 <= khi[1]; ++k2)
          out[static_cast<std::size_t>((k1 % M) * M + k2 % M)] +=
              psi[static_cast<std::size_t>(k1) * static_cast<std::size_t>(N) + static_cast<std::size_t>(k2)] *
              std::conj(win[static_cast<std::size_t>(k1 - j[0] + N / 2) * static_cast<std::size_t>(N) +
                            static_cast<std::size_t>(k2 - j[1] + N / 2)]);
    }
    detail::fft_inplace(out, dims);
    // e^{-i xi_m y_k} with y_k = (k - N/2) dx contributes (-1)^{m D N/2 * 2/N}.
    for (std::size_t c = 0; c < out.size(); ++c) {
      long msum = 0;
      std::size_t cc = c;
      for (int a = 0; a < n; ++a) {
        const int k = static_cast<int>(cc % static_cast<std::size_t>(M));
        cc /= static_cast<std::size_t>(M);
        msum += (k < M / 2 ? k : k - M);
      }
      const bool odd = ((msum * layout.xi_decimation) & 1) != 0;
      out[c] *= odd ? -scale : scale;
    }
  };
  detail::stream_rows(layout, pairs.size(), compute, visit);
}

inline PhaseSpaceArray stft(const SampledFunction& psi, const SampledFunction& window, int x_stride = 1, int xi_decimation = 1) {
  detail::require_same_grid(psi, window, "stft");
  PhaseSpaceLayout layout(psi.grid(), x_stride, xi_decimation);
  if (layout.rows() * layout.row_length() > kMaxMaterialised)
    throw PreconditionError("stft: array too large to materialise, use stft_rows");
  PhaseSpaceArray out{layout, PhaseSpaceKind::kStft, std::vector<cplx>(layout.rows() * layout.row_length())};
  stft_rows({{&psi, &window}}, layout, [&](std::size_t r, const std::vector<std::span<const cplx>>& v) {
    std::copy(v[0].begin(), v[0].end(), out.values.begin() + static_cast<std::ptrdiff_t>(r * layout.row_length()));
  });
  return out;
}

// ---------------------------------------------------------------------------
// Cross-Wigner distribution.

struct WignerPair {
  const SampledFunction* psi;
  const SampledFunction* phi;
};

/// Streams W(psi, phi) for each pair on the base grid (x_j, xi_m). psi and phi
/// are refined once (h = dx/2) so that x +- y/2 are grid nodes for y = k dx.
inline void wigner_rows(const std::vector<WignerPair>& pairs, const GridSpec& grid, const RowVisitor& visit) {
  for (const auto& p : pairs)
    if (!(p.psi->grid() == grid) || !(p.phi->grid() == grid)) throw GridMismatch("cross_wigner: functions must share the grid");
  const int n = grid.n();
  const int N = grid.points();
  const GridSpec fine = grid.refined(1);
  std::vector<SampledFunction> rpsi, rphi;
  for (const auto& p : pairs) {
    rpsi.push_back(resample(*p.psi, fine));
    rphi.push_back(resample(*p.phi, fine));
  }
  const PhaseSpaceLayout layout(grid);
  const double scale = std::pow(2.0 * std::numbers::pi, -n) * grid.cell();
  const std::vector<int> dims(static_cast<std::size_t>(n), N);
  const int F = 2 * N;
  auto range = [F](int j) {
    // 0 <= 2j + k < 2N and 0 <= 2j - k < 2N.
    return std::pair<int, int>{std::max(-2 * j, 2 * j - F + 1), std::min(F - 1 - 2 * j, 2 * j)};
  };
  // Adds a[pa + k] conj(b[pb - k]) into dst[k mod N] for k in [lo, hi].
  auto fold = [N](cplx* dst, const cplx* a, const cplx* b, std::ptrdiff_t pa, std::ptrdiff_t pb, int lo, int hi) {
    int idx = detail::wrap_index(lo, N);
    for (int k = lo; k <= hi; ++k) {
      const cplx u = a[pa + k], v = b[pb - k];
      dst[idx] += cplx{u.real() * v.real() + u.imag() * v.imag(), u.imag() * v.real() - u.real() * v.imag()};
      if (++idx == N) idx = 0;
    }
  };
  auto compute = [&](std::size_t row, std::size_t t, std::span<cplx> out) {
    const auto j = layout.x_index(row);
    const cplx* a = rpsi[t].values().data();
    const cplx* b = rphi[t].values().data();
    if (n == 1) {
      const auto [lo, hi] = range(j[0]);
      fold(out.data(), a, b, 2 * j[0], 2 * j[0], lo, hi);
    } else {
      const auto [lo1, hi1] = range(j[0]);
      const auto [lo2, hi2] = range(j[1]);
      int row1 = detail::wrap_index(lo1, N);
      for (int k1 = lo1; k1 <= hi1; ++k1) {
        const std::ptrdiff_t pa = static_cast<std::ptrdiff_t>(2 * j[0] + k1) * F + 2 * j[1];
        const std::ptrdiff_t pb = static_cast<std::ptrdiff_t>(2 * j[0] - k1) * F + 2 * j[1];
        fold(out.data() + static_cast<std::ptrdiff_t>(row1) * N, a, b, pa, pb, lo2, hi2);
        if (++row1 == N) row1 = 0;
      }
    }
    detail::fft_inplace(out, dims);
    for (auto& v : out) v *= scale;
  };
  detail::stream_rows(layout, pairs.size(), compute, visit);
}

inline PhaseSpaceArray cross_wigner(const SampledFunction& psi, const SampledFunction& phi) {
  detail::require_same_grid(psi, phi, "cross_wigner");
  PhaseSpaceLayout layout(psi.grid());
  if (layout.rows() * layout.row_length() > kMaxMaterialised)
    throw PreconditionError("cross_wigner: array too large to materialise, use wigner_rows");
  PhaseSpaceArray out{layout, PhaseSpaceKind::kWigner, std::vector<cplx>(layout.rows() * layout.row_length())};
  wigner_rows({{&psi, &phi}}, psi.grid(), [&](std::size_t r, const std::vector<std::span<const cplx>>& v) {
    std::copy(v[0].begin(), v[0].end(), out.values.begin() + static_cast<std::ptrdiff_t>(r * layout.row_length()));
  });
  return out;
}

/// Sum of a conj(b) dx^n dxi^n over two arrays with the same layout.
inline cplx phase_space_inner(const PhaseSpaceArray& a, const PhaseSpaceArray& b) {
  if (!(a.layout.grid == b.layout.grid) || a.layout.x_stride != b.layout.x_stride ||
      a.layout.xi_decimation != b.layout.xi_decimation)
    throw GridMismatch("phase_space_inner: layouts differ");
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * std::conj(b.values[i]);
  return s * a.layout.x_cell() * a.layout.xi_cell();
}

// ---------------------------------------------------------------------------
// Mixed norms.

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Streaming Riemann mixed norm. kXInner: (int (int |F|^p dx)^{q/p} dxi)^{1/q}
/// (modulation norm M^{p,q}); kXiInner: the same with xi inside (Wiener
/// amalgam W(FL^p, L^q)). Infinite exponents are grid maxima.
class MixedNormAccumulator {
 public:
  MixedNormAccumulator(const PhaseSpaceLayout& layout, double p, double q, NormOrder order)
      : layout_(layout), p_(p), q_(q), order_(order) {
    if (!(p >= 1.0) || !(q >= 1.0)) throw PreconditionError("mixed_norm: exponents must be >= 1");
    if (order_ == NormOrder::kXInner) columns_.assign(layout.row_length(), 0.0);
  }

  void add_row(std::span<const cplx> row) {
    if (row.size() != layout_.row_length()) throw DimensionError("mixed_norm: row length");
    if (order_ == NormOrder::kXInner) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        const double v = std::abs(row[c]);
        columns_[c] = std::isinf(p_) ? std::max(columns_[c], v) : columns_[c] + std::pow(v, p_);
      }
    } else {
      double inner = 0.0;
      for (const auto& z : row) inner = std::isinf(p_) ? std::max(inner, std::abs(z)) : inner + std::pow(std::abs(z), p_);
      inner = std::isinf(p_) ? inner : std::pow(inner * layout_.xi_cell(), 1.0 / p_);
      outer_ = std::isinf(q_) ? std::max(outer_, inner) : outer_ + std::pow(inner, q_);
    }
  }

  double result() const {
    if (order_ == NormOrder::kXiInner) return std::isinf(q_) ? outer_ : std::pow(outer_ * layout_.x_cell(), 1.0 / q_);
    double outer = 0.0;
    for (double c : columns_) {
      const double inner = std::isinf(p_) ? c : std::pow(c * layout_.x_cell(), 1.0 / p_);
      outer = std::isinf(q_) ? std::max(outer, inner) : outer + std::pow(inner, q_);
    }
    return std::isinf(q_) ? outer : std::pow(outer * layout_.xi_cell(), 1.0 / q_);
  }

 private:
  PhaseSpaceLayout layout_;
  double p_, q_;
  NormOrder order_;
  std::vector<double> columns_;
  double outer_ = 0.0;
};

inline double mixed_norm(const PhaseSpaceArray& a, double p, double q, NormOrder order) {
  MixedNormAccumulator acc(a.layout, p, q, order);
  for (std::size_t r = 0; r < a.layout.rows(); ++r) acc.add_row(a.row(r));
  return acc.result();
}

/// Unit-norm standard Gaussian window on a grid.
inline SampledFunction gaussian_window(const GridSpec& grid) {
  return discretize(FunctionDescriptor::gaussian(grid.n()), grid);
}

/// ||psi||_{M^{p,q}} (or the amalgam norm for kXiInner) with the given window,
/// streamed over the layout (x_stride, xi_decimation).
inline double modulation_norm(const SampledFunction& psi, double p, double q, const SampledFunction& window,
                              NormOrder order = NormOrder::kXInner, int x_stride = 1, int xi_decimation = 1) {
  detail::require_same_grid(psi, window, "modulation_norm");
  PhaseSpaceLayout layout(psi.grid(), x_stride, xi_decimation);
  MixedNormAccumulator acc(layout, p, q, order);
  stft_rows({{&psi, &window}}, layout, [&](std::size_t, const std::vector<std::span<const cplx>>& v) { acc.add_row(v[0]); });
  return acc.result();
}

inline double modulation_norm(const SampledFunction& psi, double p, double q) {
  return modulation_norm(psi, p, q, gaussian_window(psi.grid()));
}

// ---------------------------------------------------------------------------
// Export.

/// CSV rows "x..., xi..., re, im" with frequencies in increasing order.
inline void write_csv(std::ostream& os, const PhaseSpaceArray& a) {
  const int n = a.layout.n();
  os << (n == 1 ? "x,xi,re,im\n" : "x1,x2,xi1,xi2,re,im\n");
  const int M = a.layout.xi_points();
  std::ostringstream line;
  line << std::setprecision(17);
  for (std::size_t r = 0; r < a.layout.rows(); ++r) {
    const auto x = a.layout.x_coords(r);
    const auto row = a.row(r);
    for (std::size_t s = 0; s < row.size(); ++s) {
      // Sorted position s -> FFT position.
      std::size_t c = 0, rem = s, mul = 1;
      for (int ax = 0; ax < n; ++ax) {
        const int k = static_cast<int>(rem % static_cast<std::size_t>(M));
        rem /= static_cast<std::size_t>(M);
        c += static_cast<std::size_t>(detail::wrap_index(k - M / 2, M)) * mul;
        mul *= static_cast<std::size_t>(M);
      }
      const auto xi = a.layout.xi_coords(c);
      for (int ax = 0; ax < n; ++ax) line << x[static_cast<std::size_t>(ax)] << ',';
      for (int ax = 0; ax < n; ++ax) line << xi[static_cast<std::size_t>(ax)] << ',';
      line << row[c].real() << ',' << row[c].imag() << '\n';
    }
  }
  os << line.str();
}

/// Dense little-endian binary: u32 n, N, x_stride, xi_decimation, kind, then
/// float64 (re, im) pairs in row order.
inline void write_binary(std::ostream& os, const PhaseSpaceArray& a) {
  for (int v : {a.layout.n(), a.layout.grid.points(), a.layout.x_stride, a.layout.xi_decimation, static_cast<int>(a.kind)})
    detail::put_u32(os, static_cast<std::uint32_t>(v));
  for (const auto& z : a.values) {
    detail::put_u64(os, std::bit_cast<std::uint64_t>(z.real()));
    detail::put_u64(os, std::bit_cast<std::uint64_t>(z.imag()));
  }
}

inline PhaseSpaceArray read_phase_space_binary(std::istream& is, double half_width) {
  const auto n = static_cast<int>(detail::get_u32(is));
  const auto N = static_cast<int>(detail::get_u32(is));
  const auto xs = static_cast<int>(detail::get_u32(is));
  const auto xd = static_cast<int>(detail::get_u32(is));
  const auto kind = detail::get_u32(is);
  if (kind > 1) throw ParseError("phase-space binary: unknown kind");
  PhaseSpaceLayout layout(GridSpec(n, half_width, N), xs, xd);
  PhaseSpaceArray a{layout, static_cast<PhaseSpaceKind>(kind), std::vector<cplx>(layout.rows() * layout.row_length())};
  for (auto& z : a.values) {
    const double re = std::bit_cast<double>(detail::get_u64(is));
    const double im = std::bit_cast<double>(detail::get_u64(is));
    z = {re, im};
  }
  return a;
}

}  // namespace metalab

#endif  // METALAB_TIMEFREQ_HPP_
