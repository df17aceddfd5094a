// Copyright 2026 The metalab Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef METALAB_GRID_HPP_
#define METALAB_GRID_HPP_

// Uniform grids on [-X, X)^n, sampled functions on them, and the built-in
// families of test functions (Gaussians, Hermite functions, their shifts,
// modulations, dilations and chirps).

#include <Eigen/Dense>

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <iomanip>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "metalab/detail/fft.hpp"
#include "metalab/detail/nufft.hpp"
#include "metalab/errors.hpp"

namespace metalab {

using cplx = std::complex<double>;

inline constexpr int kMaxGridDim = 2;
inline constexpr int kMinGridPoints = 64;

/// Uniform symmetric grid: nodes x_j = -X + j dx, dx = 2X/N per axis; the
/// matching frequency nodes are xi_k = k pi / X, k in [-N/2, N/2).
class GridSpec {
 public:
  GridSpec(int n, double half_width, int points) : n_(n), half_width_(half_width), points_(points) {
    if (n < 1 || n > kMaxGridDim) throw DimensionError("GridSpec: n must be 1 or 2");
    if (!(half_width > 0.0) || !std::isfinite(half_width))
      throw PreconditionError("GridSpec: half width must be positive");
    if (points < kMinGridPoints || !std::has_single_bit(static_cast<unsigned>(points)))
      throw PreconditionError("GridSpec: points per axis must be a power of two >= 64");
  }

  int n() const { return n_; }
  double half_width() const { return half_width_; }
  int points() const { return points_; }
  double dx() const { return 2.0 * half_width_ / points_; }
  double dxi() const { return std::numbers::pi / half_width_; }
  /// Largest representable frequency, pi / dx.
  double nyquist() const { return std::numbers::pi / dx(); }
  std::size_t size() const {
    std::size_t s = 1;
    for (int i = 0; i < n_; ++i) s *= static_cast<std::size_t>(points_);
    return s;
  }
  double node(int j) const { return -half_width_ + j * dx(); }
  double cell() const { return std::pow(dx(), n_); }

  /// Multi-index of a flat (row-major) node index.
  std::array<int, kMaxGridDim> unflatten(std::size_t flat) const {
    std::array<int, kMaxGridDim> idx{};
    for (int a = n_ - 1; a >= 0; --a) {
      idx[static_cast<std::size_t>(a)] = static_cast<int>(flat % static_cast<std::size_t>(points_));
      flat /= static_cast<std::size_t>(points_);
    }
    return idx;
  }
  std::array<double, kMaxGridDim> coords(std::size_t flat) const {
    auto idx = unflatten(flat);
    std::array<double, kMaxGridDim> x{};
    for (int a = 0; a < n_; ++a) x[static_cast<std::size_t>(a)] = node(idx[static_cast<std::size_t>(a)]);
    return x;
  }

  /// Grid with the same dx and 2^k times the extent.
  GridSpec widened(int k) const { return GridSpec(n_, half_width_ * (1 << k), points_ << k); }
  /// Grid with the same extent and 2^k times the resolution.
  GridSpec refined(int k) const { return GridSpec(n_, half_width_, points_ << k); }

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.n_ == b.n_ && a.half_width_ == b.half_width_ && a.points_ == b.points_;
  }

 private:
  int n_;
  double half_width_;
  int points_;
};

/// Complex samples psi(x_j) on a GridSpec.
class SampledFunction {
 public:
  SampledFunction(GridSpec grid, std::vector<cplx> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw DimensionError("SampledFunction: value count != grid size");
    for (const auto& v : values_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw PreconditionError("SampledFunction: non-finite sample");
  }
  static SampledFunction zeros(const GridSpec& grid) {
    return SampledFunction(grid, std::vector<cplx>(grid.size()));
  }

  const GridSpec& grid() const { return grid_; }
  std::span<const cplx> values() const { return values_; }
  std::vector<cplx>& mutable_values() { return values_; }
  const cplx& operator[](std::size_t i) const { return values_[i]; }

  /// Riemann L^2 norm (sum |psi|^2 dx^n)^{1/2}.
  double norm() const {
    double s = 0.0;
    for (const auto& v : values_) s += std::norm(v);
    return std::sqrt(s * grid_.cell());
  }

  /// Largest |x|_2 over nodes with |psi| above rel * max|psi|.
  double support_radius(double rel = 1e-10) const {
    double peak = 0.0;
    for (const auto& v : values_) peak = std::max(peak, std::abs(v));
    double r = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (std::abs(values_[i]) <= rel * peak) continue;
      auto x = grid_.coords(i);
      double r2 = 0.0;
      for (int a = 0; a < grid_.n(); ++a) r2 += x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
      r = std::max(r, std::sqrt(r2));
    }
    return r;
  }

  SampledFunction& operator*=(cplx c) {
    for (auto& v : values_) v *= c;
    return *this;
  }
  friend SampledFunction operator*(cplx c, SampledFunction f) { return f *= c; }
  friend SampledFunction operator+(const SampledFunction& a, const SampledFunction& b) {
    if (!(a.grid_ == b.grid_)) throw GridMismatch("SampledFunction +: grids differ");
    std::vector<cplx> out(a.values_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values_[i] + b.values_[i];
    return SampledFunction(a.grid_, std::move(out));
  }
  friend SampledFunction operator-(const SampledFunction& a, const SampledFunction& b) {
    return a + cplx{-1.0, 0.0} * b;
  }

 private:
  GridSpec grid_;
  std::vector<cplx> values_;
};

/// <a, b> = sum a conj(b) dx^n, linear in the first argument.
inline cplx inner(const SampledFunction& a, const SampledFunction& b) {
  if (!(a.grid() == b.grid())) throw GridMismatch("inner: grids differ");
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.values().size(); ++i) s += a[i] * std::conj(b[i]);
  return s * a.grid().cell();
}

struct PhaseAlignment {
  cplx phase;       ///< unimodular c minimising ||a - c b||
  double distance;  ///< ||a - c b||
};

/// Compares two functions modulo one global unimodular constant.
inline PhaseAlignment align_phase(const SampledFunction& a, const SampledFunction& b) {
  const cplx ip = inner(a, b);
  const cplx c = std::abs(ip) > 0.0 ? ip / std::abs(ip) : cplx{1.0, 0.0};
  return {c, (a - c * b).norm()};
}

// ---------------------------------------------------------------------------
// Built-in function families.

/// psi(x) = e^{i xi0.x} e^{i c |x|^2/2} prod_a s^{-1/2} h_{k_a}((x_a - x0_a)/s),
/// h_k the L^2-normalised Hermite functions; Gaussian is order 0.
struct FunctionDescriptor {
  std::vector<int> orders;
  double scale = 1.0;
  std::vector<double> shift;
  std::vector<double> modulation;
  double chirp = 0.0;

  int n() const { return static_cast<int>(orders.size()); }

  static FunctionDescriptor gaussian(int n) {
    return {std::vector<int>(static_cast<std::size_t>(n), 0), 1.0, std::vector<double>(static_cast<std::size_t>(n)),
            std::vector<double>(static_cast<std::size_t>(n)), 0.0};
  }
  static FunctionDescriptor hermite(int order, int n = 1) {
    auto d = gaussian(n);
    d.orders[0] = order;
    return d;
  }
  FunctionDescriptor with_scale(double s) const {
    auto d = *this;
    d.scale = s;
    return d;
  }
  FunctionDescriptor with_shift(std::vector<double> x0) const {
    auto d = *this;
    d.shift = std::move(x0);
    return d;
  }
  FunctionDescriptor with_modulation(std::vector<double> xi0) const {
    auto d = *this;
    d.modulation = std::move(xi0);
    return d;
  }
  FunctionDescriptor with_chirp(double c) const {
    auto d = *this;
    d.chirp = c;
    return d;
  }

  /// Text form, e.g. "hermite:1@x0=0.5;xi0=-1;scale=2;chirp=0.5". For n = 2
  /// orders and vector parameters are comma lists ("hermite:1,0@x0=0.5,0").
  std::string to_string() const;
  static FunctionDescriptor parse(const std::string& text, int n);
};

namespace detail {

inline std::vector<double> hermite_functions(int max_order, double x) {
  std::vector<double> h(static_cast<std::size_t>(max_order) + 1);
  h[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  if (max_order >= 1) h[1] = std::sqrt(2.0) * x * h[0];
  for (int k = 1; k < max_order; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    h[ku + 1] = std::sqrt(2.0 / (k + 1)) * x * h[ku] - std::sqrt(static_cast<double>(k) / (k + 1)) * h[ku - 1];
  }
  return h;
}

inline std::string join_numbers(const std::vector<double>& v) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

inline std::vector<double> split_numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw ParseError("");
    } catch (const std::exception&) {
      throw ParseError("bad number '" + cell + "'");
    }
  }
  return out;
}

}  // namespace detail

inline std::string FunctionDescriptor::to_string() const {
  bool gaussian_family = true;
  for (int k : orders) gaussian_family = gaussian_family && k == 0;
  std::ostringstream os;
  os << std::setprecision(17);
  if (gaussian_family) {
    os << "gauss";
  } else {
    os << "hermite:";
    for (std::size_t i = 0; i < orders.size(); ++i) os << (i ? "," : "") << orders[i];
  }
  std::vector<std::string> params;
  auto nonzero = [](const std::vector<double>& v) {
    for (double x : v)
      if (x != 0.0) return true;
    return false;
  };
  if (nonzero(shift)) params.push_back("x0=" + detail::join_numbers(shift));
  if (nonzero(modulation)) params.push_back("xi0=" + detail::join_numbers(modulation));
  if (scale != 1.0) params.push_back("scale=" + detail::join_numbers({scale}));
  if (chirp != 0.0) params.push_back("chirp=" + detail::join_numbers({chirp}));
  for (std::size_t i = 0; i < params.size(); ++i) os << (i ? ";" : "@") << params[i];
  return os.str();
}

inline FunctionDescriptor FunctionDescriptor::parse(const std::string& text, int n) {
  if (n < 1 || n > kMaxGridDim) throw DimensionError("FunctionDescriptor::parse: n must be 1 or 2");
  const auto at = text.find('@');
  std::string head = text.substr(0, at);
  const std::string tail = at == std::string::npos ? "" : text.substr(at + 1);
  std::string family = head.substr(0, head.find(':'));
  const std::string order_text = head.find(':') == std::string::npos ? "" : head.substr(head.find(':') + 1);

  FunctionDescriptor d = gaussian(n);
  if (family == "gauss" || family == "gaussian") {
    if (!order_text.empty()) throw ParseError("gauss takes no order");
  } else if (family == "chirp") {
    d.chirp = order_text.empty() ? 1.0 : detail::split_numbers(order_text).at(0);
  } else if (family == "hermite") {
    auto ks = detail::split_numbers(order_text.empty() ? "1" : order_text);
    if (ks.size() == 1 && n == 2) ks.push_back(0.0);
    if (static_cast<int>(ks.size()) != n) throw ParseError("hermite: need one order per axis");
    for (int a = 0; a < n; ++a) {
      const double k = ks[static_cast<std::size_t>(a)];
      if (k < 0 || k > 8 || k != std::floor(k)) throw ParseError("hermite: order must be an integer in [0, 8]");
      d.orders[static_cast<std::size_t>(a)] = static_cast<int>(k);
    }
  } else {
    throw ParseError("unknown function descriptor '" + family + "'");
  }

  std::stringstream ss(tail);
  std::string kv;
  while (std::getline(ss, kv, ';')) {
    if (kv.empty()) continue;
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParseError("descriptor parameter without '=': " + kv);
    const std::string key = kv.substr(0, eq);
    auto vals = detail::split_numbers(kv.substr(eq + 1));
    auto per_axis = [&](std::vector<double>& target) {
      if (vals.size() == 1 && n == 2) vals.push_back(0.0);
      if (static_cast<int>(vals.size()) != n) throw ParseError(key + ": need one value per axis");
      target = vals;
    };
    if (key == "x0") {
      per_axis(d.shift);
    } else if (key == "xi0") {
      per_axis(d.modulation);
    } else if (key == "scale") {
      if (vals.size() != 1 || !(vals[0] > 0.0)) throw ParseError("scale must be one positive number");
      d.scale = vals[0];
    } else if (key == "chirp") {
      if (vals.size() != 1) throw ParseError("chirp must be one number");
      d.chirp = vals[0];
    } else {
      throw ParseError("unknown descriptor parameter '" + key + "'");
    }
  }
  return d;
}

/// Samples a built-in family on the grid, normalised to unit Riemann L^2 norm.
inline SampledFunction discretize(const FunctionDescriptor& f, const GridSpec& grid) {
  const int n = grid.n();
  if (f.n() != n || static_cast<int>(f.shift.size()) != n || static_cast<int>(f.modulation.size()) != n)
    throw DimensionError("discretize: descriptor dimension does not match grid");
  if (!(f.scale > 0.0)) throw PreconditionError("discretize: scale must be positive");
  int max_order = 0;
  for (int k : f.orders) max_order = std::max(max_order, k);

  std::vector<cplx> values(grid.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto x = grid.coords(i);
    double amp = 1.0, phase = 0.0, r2 = 0.0;
    for (int a = 0; a < n; ++a) {
      const auto au = static_cast<std::size_t>(a);
      const double u = (x[au] - f.shift[au]) / f.scale;
      amp *= detail::hermite_functions(max_order, u)[static_cast<std::size_t>(f.orders[au])] / std::sqrt(f.scale);
      phase += f.modulation[au] * x[au];
      r2 += x[au] * x[au];
    }
    phase += 0.5 * f.chirp * r2;
    values[i] = std::polar(amp, phase);
  }
  SampledFunction out(grid, std::move(values));
  const double nrm = out.norm();
  if (!(nrm > 0.0)) throw PreconditionError("discretize: function vanishes on the grid");
  out *= cplx{1.0 / nrm, 0.0};
  return out;
}

/// The six-function corpus used by the Moyal and covariance suites. No two
/// members are orthogonal, so relative errors of |<psi, phi>|^2 are defined.
inline std::vector<FunctionDescriptor> builtin_corpus(int n) {
  auto vec = [n](double a, double b) {
    std::vector<double> v{a};
    if (n == 2) v.push_back(b);
    return v;
  };
  return {
      FunctionDescriptor::gaussian(n),
      FunctionDescriptor::gaussian(n).with_shift(vec(0.8, -0.3)).with_modulation(vec(-0.5, 0.4)),
      FunctionDescriptor::gaussian(n).with_scale(1.5),
      FunctionDescriptor::gaussian(n).with_chirp(1.0),
      FunctionDescriptor::hermite(1, n).with_shift(vec(0.6, 0.2)),
      FunctionDescriptor::hermite(2, n).with_shift(vec(-0.4, 0.5)).with_modulation(vec(0.3, 0.0)),
  };
}

/// A random member of the built-in families with moderate parameters
/// (|x0| <= 2, |xi0| <= 2, scale in [0.7, 1.4], |chirp| <= 1, order <= 4).
template <class Rng>
FunctionDescriptor random_descriptor(int n, Rng& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::uniform_int_distribution<int> order(0, 4);
  auto d = FunctionDescriptor::gaussian(n);
  for (int a = 0; a < n; ++a) {
    d.orders[static_cast<std::size_t>(a)] = (a == 0 || order(rng) < 2) ? order(rng) : 0;
    d.shift[static_cast<std::size_t>(a)] = 2.0 * uni(rng);
    d.modulation[static_cast<std::size_t>(a)] = 2.0 * uni(rng);
  }
  d.scale = std::exp(0.35 * uni(rng));
  d.chirp = uni(rng);
  return d;
}

// ---------------------------------------------------------------------------
// Band-limited resampling.

/// Evaluates the trigonometric interpolant of psi (period 2X) at arbitrary
/// points (n consecutive coordinates each); points outside [-X, X)^n get 0.
/// Exact for functions band-limited to the Nyquist band and negligible at the
/// boundary.
inline std::vector<cplx> evaluate_bandlimited(const SampledFunction& psi, std::span<const double> points) {
  const GridSpec& g = psi.grid();
  const int n = g.n();
  const int N = g.points();
  if (points.size() % static_cast<std::size_t>(n) != 0) throw DimensionError("evaluate_bandlimited: point array length");
  std::vector<cplx> coeffs(psi.values().begin(), psi.values().end());
  std::vector<int> dims(static_cast<std::size_t>(n), N);
  detail::fft_inplace(coeffs, dims, detail::FftSign::Forward);
  // Reorder to m + N/2 and apply (-1)^m from the node offset x_k = (k - N/2) dx.
  std::vector<cplx> centred(coeffs.size());
  const double inv = 1.0 / static_cast<double>(coeffs.size());
  auto wrap = [N](int m) { return ((m % N) + N) % N; };
  if (n == 1) {
    for (int m = -N / 2; m < N / 2; ++m)
      centred[static_cast<std::size_t>(m + N / 2)] =
          coeffs[static_cast<std::size_t>(wrap(m))] * ((m & 1) ? -inv : inv);
  } else {
    for (int m1 = -N / 2; m1 < N / 2; ++m1)
      for (int m2 = -N / 2; m2 < N / 2; ++m2)
        centred[static_cast<std::size_t>(m1 + N / 2) * static_cast<std::size_t>(N) +
                static_cast<std::size_t>(m2 + N / 2)] =
            coeffs[static_cast<std::size_t>(wrap(m1)) * static_cast<std::size_t>(N) +
                   static_cast<std::size_t>(wrap(m2))] *
            (((m1 + m2) & 1) ? -inv : inv);
  }
  const double X = g.half_width();
  const std::size_t count = points.size() / static_cast<std::size_t>(n);
  std::vector<double> angles;
  std::vector<std::size_t> inside;
  angles.reserve(points.size());
  for (std::size_t i = 0; i < count; ++i) {
    bool ok = true;
    for (int a = 0; a < n; ++a) {
      const double x = points[i * static_cast<std::size_t>(n) + static_cast<std::size_t>(a)];
      ok = ok && x >= -X && x < X;
    }
    if (!ok) continue;
    inside.push_back(i);
    for (int a = 0; a < n; ++a)
      angles.push_back(std::numbers::pi * points[i * static_cast<std::size_t>(n) + static_cast<std::size_t>(a)] / X);
  }
  auto vals = detail::nufft_type2(centred, N, n, angles, +1);
  std::vector<cplx> out(count, cplx{0.0, 0.0});
  for (std::size_t k = 0; k < inside.size(); ++k) out[inside[k]] = vals[k];
  return out;
}

/// Band-limited interpolation of psi onto the nodes of `target`.
inline SampledFunction resample(const SampledFunction& psi, const GridSpec& target) {
  if (psi.grid().n() != target.n()) throw DimensionError("resample: dimension mismatch");
  const int n = target.n();
  std::vector<double> points;
  points.reserve(target.size() * static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < target.size(); ++i) {
    const auto x = target.coords(i);
    for (int a = 0; a < n; ++a) points.push_back(x[static_cast<std::size_t>(a)]);
  }
  return SampledFunction(target, evaluate_bandlimited(psi, points));
}

// ---------------------------------------------------------------------------
// Fixture I/O.

/// CSV with header "x,re,im" (n = 1) or "x1,x2,re,im" (n = 2).
inline void write_csv(std::ostream& os, const SampledFunction& psi) {
  const GridSpec& g = psi.grid();
  os << (g.n() == 1 ? "x,re,im\n" : "x1,x2,re,im\n");
  std::ostringstream line;
  line << std::setprecision(17);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto x = g.coords(i);
    for (int a = 0; a < g.n(); ++a) line << x[static_cast<std::size_t>(a)] << ',';
    line << psi[i].real() << ',' << psi[i].imag() << '\n';
  }
  os << line.str();
}

/// Inverse of write_csv; the grid is recovered from the node column(s).
inline SampledFunction read_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw ParseError("read_csv: empty input");
  int n = 0;
  if (header == "x,re,im") n = 1;
  else if (header == "x1,x2,re,im") n = 2;
  else throw ParseError("read_csv: unexpected header '" + header + "'");
  std::vector<cplx> values;
  double first_x = 0.0;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto cells = detail::split_numbers(line);
    if (static_cast<int>(cells.size()) != n + 2) throw ParseError("read_csv: wrong column count");
    if (values.empty()) first_x = cells[0];
    values.emplace_back(cells[static_cast<std::size_t>(n)], cells[static_cast<std::size_t>(n) + 1]);
  }
  const double per_axis = n == 1 ? static_cast<double>(values.size()) : std::sqrt(static_cast<double>(values.size()));
  const int N = static_cast<int>(std::lround(per_axis));
  return SampledFunction(GridSpec(n, -first_x, N), std::move(values));
}

namespace detail {
inline void put_u32(std::ostream& os, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  os.write(b, 4);
}
inline std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) throw ParseError("binary fixture truncated");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}
inline void put_u64(std::ostream& os, std::uint64_t v) {
  put_u32(os, static_cast<std::uint32_t>(v & 0xffffffffu));
  put_u32(os, static_cast<std::uint32_t>(v >> 32));
}
inline std::uint64_t get_u64(std::istream& is) {
  const std::uint64_t lo = get_u32(is);
  return lo | (static_cast<std::uint64_t>(get_u32(is)) << 32);
}
}  // namespace detail

/// Raw little-endian complex64 samples behind an 8-byte header (u32 n, u32 N).
/// The half width is not stored; readers supply it.
inline void write_binary(std::ostream& os, const SampledFunction& psi) {
  detail::put_u32(os, static_cast<std::uint32_t>(psi.grid().n()));
  detail::put_u32(os, static_cast<std::uint32_t>(psi.grid().points()));
  for (const auto& v : psi.values()) {
    detail::put_u32(os, std::bit_cast<std::uint32_t>(static_cast<float>(v.real())));
    detail::put_u32(os, std::bit_cast<std::uint32_t>(static_cast<float>(v.imag())));
  }
}

inline SampledFunction read_binary(std::istream& is, double half_width) {
  const auto n = static_cast<int>(detail::get_u32(is));
  const auto N = static_cast<int>(detail::get_u32(is));
  GridSpec grid(n, half_width, N);
  std::vector<cplx> values(grid.size());
  for (auto& v : values) {
    const float re = std::bit_cast<float>(detail::get_u32(is));
    const float im = std::bit_cast<float>(detail::get_u32(is));
    v = {re, im};
  }
  return SampledFunction(grid, std::move(values));
}

}  // namespace metalab

#endif  // METALAB_GRID_HPP_
