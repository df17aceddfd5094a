// Copyright 2026 The metalab Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef METALAB_ESTIMATES_HPP_
#define METALAB_ESTIMATES_HPP_

// Numerical experiments on the dispersive, interpolated, covariance,
// matrix-coefficient, weak-type tail and Strichartz estimates for metaplectic
// operators. Each experiment reports rows of (parameters, measured,
// reference, tolerance) and a verdict that is a pure function of the rows.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "metalab/errors.hpp"
#include "metalab/grid.hpp"
#include "metalab/metaplectic.hpp"
#include "metalab/symplectic.hpp"
#include "metalab/timefreq.hpp"

namespace metalab {

// ---------------------------------------------------------------------------
// Reports.

enum class Comparison {
  kRelative,    ///< |measured - reference| <= tol |reference|
  kAbsolute,    ///< |measured - reference| <= tol
  kUpperBound,  ///< measured <= reference (1 + tol)
  kLowerBound,  ///< measured >= reference (1 - tol)
  kInfo,        ///< recorded, always passes
};

struct ReportRow {
  nlohmann::json params;
  double measured = 0.0;
  double reference = 0.0;
  double tol = 0.0;
  Comparison comparison = Comparison::kInfo;

  double ratio() const { return reference != 0.0 ? measured / reference : std::numeric_limits<double>::quiet_NaN(); }
  bool passes() const {
    if (!std::isfinite(measured) && comparison != Comparison::kInfo) return false;
    switch (comparison) {
      case Comparison::kRelative: return std::abs(measured - reference) <= tol * std::abs(reference);
      case Comparison::kAbsolute: return std::abs(measured - reference) <= tol;
      case Comparison::kUpperBound: return measured <= reference * (1.0 + tol);
      case Comparison::kLowerBound: return measured >= reference * (1.0 - tol);
      case Comparison::kInfo: return true;
    }
    return false;
  }
};

struct ExperimentReport {
  std::string name;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<ReportRow> rows;

  void add(nlohmann::json params, double measured, double reference, double tol, Comparison c) {
    rows.push_back({std::move(params), measured, reference, tol, c});
  }
  void info(nlohmann::json params, double measured) { add(std::move(params), measured, 0.0, 0.0, Comparison::kInfo); }
  bool passed() const {
    for (const auto& r : rows)
      if (!r.passes()) return false;
    return true;
  }
  /// First row whose parameters contain {"quantity": q}.
  const ReportRow* find(const std::string& quantity) const {
    for (const auto& r : rows)
      if (r.params.contains("quantity") && r.params["quantity"] == quantity) return &r;
    return nullptr;
  }
};

inline constexpr int kReportSchema = 1;

/// CSV with a schema line and the fixed header
/// experiment,param-json,measured,reference,ratio,tol,verdict.
inline void write_report_csv(std::ostream& os, const std::vector<ExperimentReport>& reports) {
  os << "# schema=" << kReportSchema << '\n' << "experiment,param-json,measured,reference,ratio,tol,verdict\n";
  std::ostringstream line;
  line << std::setprecision(17);
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  for (const auto& rep : reports)
    for (const auto& r : rep.rows)
      line << rep.name << ',' << quote(r.params.dump()) << ',' << r.measured << ',' << r.reference << ',' << r.ratio() << ','
           << r.tol << ',' << (r.comparison == Comparison::kInfo ? "INFO" : (r.passes() ? "PASS" : "FAIL")) << '\n';
  os << line.str();
}

// ---------------------------------------------------------------------------
// Norm plumbing.

/// Phase-space layout sampling the STFT at spacing close to (not above)
/// `spacing` in x and xi; adequate for Gaussian-window STFTs, which vary on
/// unit scale.
inline PhaseSpaceLayout norm_layout(const GridSpec& g, double spacing = 0.25) {
  auto stride = [&](double step) {
    int s = 1;
    while (2 * s * step <= spacing && g.points() / (2 * s) >= 2) s *= 2;
    return s;
  };
  return PhaseSpaceLayout(g, stride(g.dx()), stride(g.dxi()));
}

struct MixedNormSpec {
  double p, q;
  NormOrder order;
};

/// Several mixed norms of V_window psi from a single streamed transform.
inline std::vector<double> stft_norms(const SampledFunction& psi, const std::vector<MixedNormSpec>& specs,
                                      const PhaseSpaceLayout& layout) {
  const auto window = gaussian_window(psi.grid());
  std::vector<MixedNormAccumulator> acc;
  for (const auto& s : specs) acc.emplace_back(layout, s.p, s.q, s.order);
  stft_rows({{&psi, &window}}, layout, [&](std::size_t, const std::vector<std::span<const cplx>>& v) {
    for (auto& a : acc) a.add_row(v[0]);
  });
  std::vector<double> out;
  for (const auto& a : acc) out.push_back(a.result());
  return out;
}

inline double stft_norm(const SampledFunction& psi, double p, double q = -1.0) {
  return stft_norms(psi, {{p, q < 0 ? p : q, NormOrder::kXInner}}, norm_layout(psi.grid()))[0];
}

// ---------------------------------------------------------------------------
// Dispersive and interpolated estimates.

/// ||s_psi||_{M^inf} (lambda_1...lambda_n)^{1/2} / ||psi||_{M^1}, with s_psi the
/// image of psi under an operator whose singular-value product is given.
inline double dispersive_ratio(const SampledFunction& psi, const SampledFunction& s_psi, double lambda_product) {
  return stft_norm(s_psi, kInfinity) * std::sqrt(lambda_product) / stft_norm(psi, 1.0);
}

inline double dispersive_ratio(const SymplecticMatrix& s, const SampledFunction& psi) {
  return dispersive_ratio(psi, apply_metaplectic(s, psi), symplectic_svd(s).lambda_product());
}

/// ||s_psi||_{M^r} (lambda_1...lambda_n)^{1/2 - 1/r} / ||psi||_{M^{r'}}.
inline double interp_ratio(const SampledFunction& psi, const SampledFunction& s_psi, double lambda_product, double r) {
  if (!(r >= 2.0)) throw PreconditionError("interp_ratio: r must be >= 2");
  const double rp = std::isinf(r) ? 1.0 : r / (r - 1.0);
  const double inv_r = std::isinf(r) ? 0.0 : 1.0 / r;
  return stft_norm(s_psi, r) * std::pow(lambda_product, 0.5 - inv_r) / stft_norm(psi, rp);
}

inline double interp_ratio(const SymplecticMatrix& s, const SampledFunction& psi, double r) {
  return interp_ratio(psi, apply_metaplectic(s, psi), symplectic_svd(s).lambda_product(), r);
}

// ---------------------------------------------------------------------------
// Covariance.

namespace detail {

/// Keys cubic convolution kernel (a = -1/2).
inline double keys(double s) {
  s = std::abs(s);
  if (s < 1.0) return (1.5 * s - 2.5) * s * s + 1.0;
  if (s < 2.0) return ((-0.5 * s + 2.5) * s - 4.0) * s + 2.0;
  return 0.0;
}

/// Bicubic interpolation of an n = 1 Wigner array at (x, xi); 0 outside.
inline cplx bicubic(const PhaseSpaceArray& w, double x, double xi) {
  const GridSpec& g = w.layout.grid;
  const int N = g.points();
  const double u = (x + g.half_width()) / g.dx();
  const double v = xi / g.dxi() + N / 2.0;  // sorted frequency index
  const int iu = static_cast<int>(std::floor(u)), iv = static_cast<int>(std::floor(v));
  cplx acc{0.0, 0.0};
  for (int a = iu - 1; a <= iu + 2; ++a) {
    if (a < 0 || a >= N) continue;
    const double ka = keys(u - a);
    for (int b = iv - 1; b <= iv + 2; ++b) {
      if (b < 0 || b >= N) continue;
      const int c = wrap_index(b - N / 2, N);
      acc += ka * keys(v - b) * w.row(static_cast<std::size_t>(a))[static_cast<std::size_t>(c)];
    }
  }
  return acc;
}

}  // namespace detail

/// max |W(S psi)(z) - W psi(S^{-1} z)| / max |W psi| over the interior half
/// window |x| <= X/2, |xi| <= Nyquist/2, with W psi interpolated bicubically.
inline double covariance_residual(const SymplecticMatrix& s, const SampledFunction& psi) {
  if (psi.grid().n() != 1) throw DimensionError("covariance_residual: n must be 1");
  const auto w0 = cross_wigner(psi, psi);
  const auto spsi = apply_metaplectic(s, psi);
  const auto w1 = cross_wigner(spsi, spsi);
  const Matrix sinv = s.inverse().matrix();
  const auto& L = w0.layout;
  const double xmax = psi.grid().half_width() / 2, ximax = psi.grid().nyquist() / 2;
  double worst = 0.0;
  for (std::size_t r = 0; r < L.rows(); ++r) {
    const double x = L.x_coords(r)[0];
    if (std::abs(x) > xmax) continue;
    for (std::size_t c = 0; c < L.row_length(); ++c) {
      const double xi = L.xi_coords(c)[0];
      if (std::abs(xi) > ximax) continue;
      const double xs = sinv(0, 0) * x + sinv(0, 1) * xi;
      const double xis = sinv(1, 0) * x + sinv(1, 1) * xi;
      worst = std::max(worst, std::abs(w1.row(r)[c] - detail::bicubic(w0, xs, xis)));
    }
  }
  return worst / w0.max_abs();
}

// ---------------------------------------------------------------------------
// Matrix coefficients.

/// <S phi1, phi2> as a Riemann inner product.
inline cplx matrix_coefficient(const SymplecticMatrix& s, const SampledFunction& phi1, const SampledFunction& phi2) {
  if (!(phi1.grid() == phi2.grid())) throw GridMismatch("matrix_coefficient: phi1 and phi2 on different grids");
  return inner(apply_metaplectic(s, phi1), phi2);
}

// ---------------------------------------------------------------------------
// Weak-type tail measure.

/// Haar measure of D_lambda = {t_1 >= ... >= t_n >= 0, sum t <= A},
/// A = -2 log(lambda) / alpha. Closed form for n = 1, nested adaptive
/// Gauss-Kronrod otherwise. lambda >= 1 gives the empty set.
inline double tail_measure(double lambda, double alpha, int n, double rel_tol = 1e-12) {
  if (!(lambda > 0.0)) throw PreconditionError("tail_measure: lambda must be positive");
  if (!(alpha > 0.0)) throw PreconditionError("tail_measure: alpha must be positive");
  if (n < 1 || n > kMaxMatrixDim) throw DimensionError("tail_measure: n out of range");
  if (lambda >= 1.0) return 0.0;
  const double A = -2.0 * std::log(lambda) / alpha;
  if (n == 1) return std::cosh(A) - 1.0;
  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
  Vector t(n);
  // Integrate t_k over [t_{k+1}, (A - t_{k+1} - ... - t_n) / k], innermost k = 1.
  std::function<double(int, double)> level = [&](int k, double tail_sum) -> double {
    const double lo = k == n ? 0.0 : t(k);
    const double hi = (A - tail_sum) / k;
    if (hi <= lo) return 0.0;
    auto f = [&](double v) {
      t(k - 1) = v;
      return k == 1 ? haar_density(t, n) : level(k - 1, tail_sum + v);
    };
    return k == n ? Quad::integrate(f, lo, hi, 20, rel_tol) : Quad::integrate(f, lo, hi, 6, std::max(rel_tol, 1e-10));
  };
  return level(n, 0.0);
}

// ---------------------------------------------------------------------------
// Truncated Strichartz integrals.

struct StrichartzOptions {
  double footprint = kDefaultFootprint;  ///< phase-space radius of psi
  double spacing = 0.25;                 ///< STFT sampling for the norms
  double stabilization_window = 2.0;     ///< compare I(T) with I(T - window)
  double stabilization_tol = 0.01;
};

/// Averages ||R(theta1) a_t R(theta2) psi||_{M^r}^q over theta_samples
/// equispaced theta2 in [0, pi), weights by sinh t and integrates over t_grid
/// (trapezoid). The outer rotation is not sampled: for the Gaussian window
/// |V(mu(R) f)| = |V f| o R^{-1}, so M^r norms are invariant under it. a_t acts
/// by exact dilation on a grid sized for e^{t/2}. n = 1.
inline ExperimentReport strichartz_tail_scan(const SampledFunction& psi, double q_exp, double r,
                                             const std::vector<double>& t_grid, int theta_samples,
                                             const StrichartzOptions& opt = {}) {
  if (psi.grid().n() != 1) throw DimensionError("strichartz_tail_scan: n must be 1");
  if (!(q_exp >= 2.0) || !(r >= 2.0)) throw PreconditionError("strichartz_tail_scan: need q >= 2 and r >= 2");
  if (t_grid.size() < 2 || theta_samples < 1) throw PreconditionError("strichartz_tail_scan: empty scan");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]) || t_grid[0] < 0.0) throw PreconditionError("strichartz_tail_scan: t_grid must increase from >= 0");

  ExperimentReport rep;
  rep.name = "strichartz-scan";
  rep.parameters = {{"q", q_exp}, {"r", std::isinf(r) ? nlohmann::json("inf") : nlohmann::json(r)},
                    {"theta_samples", theta_samples}, {"t_max", t_grid.back()}};
  const nlohmann::json r_json = std::isinf(r) ? nlohmann::json("inf") : nlohmann::json(r);

  std::vector<SampledFunction> rotated;
  for (int k = 0; k < theta_samples; ++k)
    rotated.push_back(fractional_fourier(std::numbers::pi * k / theta_samples, psi));

  std::vector<double> integrand, cumulative;
  double m2_min = kInfinity, m2_max = 0.0;
  for (double t : t_grid) {
    const double lam = std::exp(t / 2.0);
    const double X = 1.25 * opt.footprint * lam;
    const double dx = std::numbers::pi * kNyquistFraction / (1.25 * opt.footprint);
    int N = kMinGridPoints;
    while (2.0 * X / N > dx) N *= 2;
    const GridSpec g(1, X, N);
    const auto layout = norm_layout(g, opt.spacing);
    Vector l(1);
    l << lam;
    double avg = 0.0;
    for (const auto& f : rotated) {
      const auto image = apply_dilation(l, f, g);
      const auto norms = stft_norms(image, {{r, r, NormOrder::kXInner}, {2.0, 2.0, NormOrder::kXInner}}, layout);
      avg += std::pow(norms[0], q_exp);
      m2_min = std::min(m2_min, norms[1]);
      m2_max = std::max(m2_max, norms[1]);
    }
    avg /= theta_samples;
    integrand.push_back(avg * std::sinh(t));
    const double prev = cumulative.empty() ? 0.0 : cumulative.back();
    const double step = cumulative.empty() ? 0.0 : 0.5 * (t - t_grid[cumulative.size() - 1]) * (integrand.back() + integrand[integrand.size() - 2]);
    cumulative.push_back(prev + step);
    rep.info({{"quantity", "integrand"}, {"t", t}, {"N", N}}, integrand.back());
    rep.info({{"quantity", "truncated_integral"}, {"t", t}}, cumulative.back());
  }

  // Monotone decay past the peak.
  const auto peak = static_cast<std::size_t>(std::max_element(integrand.begin(), integrand.end()) - integrand.begin());
  bool monotone = peak + 1 < integrand.size();
  for (std::size_t i = peak + 1; i < integrand.size(); ++i) monotone = monotone && integrand[i] < integrand[i - 1];
  rep.add({{"quantity", "monotone_past_peak"}, {"peak_t", t_grid[peak]}}, monotone ? 1.0 : 0.0, 1.0, 0.0, Comparison::kAbsolute);

  // Stabilisation of the truncated integral over the last window.
  const double T = t_grid.back();
  std::size_t j = 0;
  while (j + 1 < t_grid.size() && t_grid[j + 1] <= T - opt.stabilization_window + 1e-12) ++j;
  const double change = std::abs(cumulative.back() - cumulative[j]) / std::abs(cumulative.back());
  rep.add({{"quantity", "stabilization"}, {"from_t", t_grid[j]}, {"to_t", T}, {"q", q_exp}, {"r", r_json}}, change,
          opt.stabilization_tol, 0.0, Comparison::kUpperBound);
  rep.info({{"quantity", "m2_spread"}}, (m2_max - m2_min) / m2_max);
  return rep;
}

/// Integrability margin 1/2 - 4n/q - 1/r (>= 0 for admissible pairs).
inline double strichartz_margin(int n, double q, double r) {
  return 0.5 - 4.0 * n / q - (std::isinf(r) ? 0.0 : 1.0 / r);
}

// ---------------------------------------------------------------------------
// Wigner mixed-norm bounds.

struct WignerBoundRatios {
  double l1;         ///< ||W||_{L^1} / (||phi||_{M^1} ||psi||_{M^1})
  double sup_x;      ///< int sup_x |W| dxi / (||phi||_{M^1} ||psi||_{M^{inf,1}})
  double sup_xi;     ///< int sup_xi |W| dx / (||phi||_{M^1} ||psi||_{W(FL^inf, L^1)})
};

inline WignerBoundRatios wigner_bound_ratios(const SampledFunction& psi, const SampledFunction& phi) {
  if (!(psi.grid() == phi.grid())) throw GridMismatch("wigner_bound_ratios: grids differ");
  const PhaseSpaceLayout full(psi.grid());
  MixedNormAccumulator l1(full, 1, 1, NormOrder::kXInner), sx(full, kInfinity, 1, NormOrder::kXInner),
      sxi(full, kInfinity, 1, NormOrder::kXiInner);
  wigner_rows({{&psi, &phi}}, psi.grid(), [&](std::size_t, const std::vector<std::span<const cplx>>& v) {
    l1.add_row(v[0]);
    sx.add_row(v[0]);
    sxi.add_row(v[0]);
  });
  const auto layout = norm_layout(psi.grid());
  const double phi_m1 = stft_norms(phi, {{1, 1, NormOrder::kXInner}}, layout)[0];
  const auto pn = stft_norms(psi, {{1, 1, NormOrder::kXInner}, {kInfinity, 1, NormOrder::kXInner}, {kInfinity, 1, NormOrder::kXiInner}},
                             layout);
  return {l1.result() / (phi_m1 * pn[0]), sx.result() / (phi_m1 * pn[1]), sxi.result() / (phi_m1 * pn[2])};
}

/// Max of each ratio over the corpus. With `pinned`, each max is checked
/// against its constant within 5%.
inline ExperimentReport wigner_bound_check(const std::vector<std::pair<SampledFunction, SampledFunction>>& corpus,
                                           const std::vector<double>& pinned = {}) {
  if (corpus.empty()) throw PreconditionError("wigner_bound_check: empty corpus");
  ExperimentReport rep;
  rep.name = "wigner-bounds";
  rep.parameters = {{"pairs", corpus.size()}, {"N", corpus.front().first.grid().points()}};
  double m0 = 0, m1 = 0, m2 = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto r = wigner_bound_ratios(corpus[i].first, corpus[i].second);
    rep.info({{"quantity", "pair"}, {"index", i}, {"ratio", "l1"}}, r.l1);
    rep.info({{"quantity", "pair"}, {"index", i}, {"ratio", "sup_x"}}, r.sup_x);
    rep.info({{"quantity", "pair"}, {"index", i}, {"ratio", "sup_xi"}}, r.sup_xi);
    m0 = std::max(m0, r.l1);
    m1 = std::max(m1, r.sup_x);
    m2 = std::max(m2, r.sup_xi);
  }
  const double maxima[3] = {m0, m1, m2};
  const char* names[3] = {"max_l1", "max_sup_x", "max_sup_xi"};
  for (int k = 0; k < 3; ++k) {
    if (pinned.size() == 3) rep.add({{"quantity", names[k]}}, maxima[k], pinned[static_cast<std::size_t>(k)], 0.05, Comparison::kRelative);
    else rep.info({{"quantity", names[k]}}, maxima[k]);
  }
  return rep;
}

}  // namespace metalab

#endif  // METALAB_ESTIMATES_HPP_
