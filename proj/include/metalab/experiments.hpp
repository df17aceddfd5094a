// Copyright 2026 The metalab Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef METALAB_EXPERIMENTS_HPP_
#define METALAB_EXPERIMENTS_HPP_

// Parameter sweeps over the estimates, each producing an ExperimentReport.
// Shared by the command-line tool and the acceptance suite.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "metalab/estimates.hpp"

namespace metalab {

/// Least-squares slope of y against x.
inline double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw PreconditionError("fitted_slope: need two or more points");
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

/// x-dilation diag(l, 1/l) for n = 1.
inline SymplecticMatrix dilation_matrix(double l) {
  Vector v(1);
  v << l;
  return SymplecticMatrix::diagonal(v);
}

// ---------------------------------------------------------------------------
// Moyal identity.

/// <W f_i, W f_j> against (2 pi)^{-n} |<f_i, f_j>|^2 for all i <= j, from
/// one streamed pass accumulating the Gram matrix of the Wigner rows. Auto
/// Wigner distributions are real, so the Gram uses real parts and the largest
/// imaginary part, relative to max |W|, is graded separately.
inline ExperimentReport moyal_experiment(const std::vector<SampledFunction>& fs, double tol = 1e-5) {
  if (fs.empty()) throw PreconditionError("moyal_experiment: empty corpus");
  const GridSpec& g = fs.front().grid();
  const auto k = static_cast<Eigen::Index>(fs.size());
  std::vector<WignerPair> pairs;
  for (const auto& f : fs) pairs.push_back({&f, &f});
  Matrix gram = Matrix::Zero(k, k);
  Matrix rows;
  double max_re = 0.0, max_im = 0.0;
  wigner_rows(pairs, g, [&](std::size_t, const std::vector<std::span<const cplx>>& v) {
    rows.resize(k, static_cast<Eigen::Index>(v[0].size()));
    for (Eigen::Index i = 0; i < k; ++i) {
      const auto& row = v[static_cast<std::size_t>(i)];
      for (Eigen::Index c = 0; c < rows.cols(); ++c) {
        const cplx w = row[static_cast<std::size_t>(c)];
        rows(i, c) = w.real();
        max_re = std::max(max_re, std::abs(w.real()));
        max_im = std::max(max_im, std::abs(w.imag()));
      }
    }
    gram.selfadjointView<Eigen::Lower>().rankUpdate(rows);
  });
  gram = gram.selfadjointView<Eigen::Lower>();
  gram *= std::pow(g.dx() * g.dxi(), g.n());

  ExperimentReport rep;
  rep.name = "verify-moyal";
  rep.parameters = {{"n", g.n()}, {"N", g.points()}, {"X", g.half_width()}, {"functions", fs.size()}};
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i; j < k; ++j) {
      const double want = std::pow(2 * std::numbers::pi, -g.n()) *
                          std::norm(inner(fs[static_cast<std::size_t>(i)], fs[static_cast<std::size_t>(j)]));
      const double err = std::abs(gram(j, i) - want) / want;
      rep.add({{"quantity", "relative_error"}, {"i", i}, {"j", j}}, err, tol, 0.0, Comparison::kUpperBound);
    }
  rep.add({{"quantity", "imaginary_part"}}, max_im / max_re, tol, 0.0, Comparison::kUpperBound);
  return rep;
}

// ---------------------------------------------------------------------------
// Covariance.

/// identity, J, diag(2, 1/2), rotation by pi/3 and one KAK draw with t <= 2.
inline std::vector<std::pair<std::string, SymplecticMatrix>> covariance_cases(std::uint64_t seed) {
  return {{"identity", SymplecticMatrix::identity(1)},
          {"J", SymplecticMatrix::J(1)},
          {"diag(2,1/2)", dilation_matrix(2.0)},
          {"rotation(pi/3)", SymplecticMatrix::rotation(1, std::numbers::pi / 3)},
          {"kak(t<=2)", sample_kak(1, 2.0, seed).assemble()}};
}

inline ExperimentReport covariance_experiment(const std::vector<std::pair<std::string, SymplecticMatrix>>& cases,
                                              const SampledFunction& psi, double tol = 5e-3) {
  ExperimentReport rep;
  rep.name = "verify-covariance";
  rep.parameters = {{"N", psi.grid().points()}, {"X", psi.grid().half_width()}};
  for (const auto& [label, s] : cases)
    rep.add({{"quantity", "residual"}, {"s", label}}, covariance_residual(s, psi), tol, 0.0, Comparison::kUpperBound);
  return rep;
}

// ---------------------------------------------------------------------------
// Dispersive estimate.

/// ||S psi||_{M^inf} for S = diag(lambda, 1/lambda) and Gaussian psi, with the
/// fitted log-log slope graded against `slope` within `tol`. The closed form
/// (2 pi)^{-1} (2 lambda / (1 + lambda^2))^{1/2} is checked per point.
inline ExperimentReport dispersive_slope_experiment(const std::vector<double>& lambdas, double slope = -0.5, double tol = 0.05) {
  ExperimentReport rep;
  rep.name = "dispersive-slope";
  rep.parameters = {{"lambdas", lambdas}};
  std::vector<double> x, y, y_exact;
  for (double lam : lambdas) {
    const auto s = dilation_matrix(lam);
    const GridSpec g = grid_for(s);
    const double m = stft_norm(apply_metaplectic(s, discretize(FunctionDescriptor::gaussian(1), g)), kInfinity);
    const double exact = std::sqrt(2 * lam / (1 + lam * lam)) / (2 * std::numbers::pi);
    rep.add({{"quantity", "m_inf"}, {"lambda", lam}, {"N", g.points()}}, m, exact, 1e-6, Comparison::kRelative);
    x.push_back(std::log(lam));
    y.push_back(std::log(m));
    y_exact.push_back(std::log(exact));
  }
  rep.add({{"quantity", "slope"}}, fitted_slope(x, y), slope, tol, Comparison::kAbsolute);
  rep.info({{"quantity", "closed_form_slope"}}, fitted_slope(x, y_exact));
  if (x.size() > 3) {
    const std::vector<double> xt(x.end() - 4, x.end()), yt(y.end() - 4, y.end());
    rep.info({{"quantity", "tail_slope"}, {"from_lambda", lambdas[lambdas.size() - 4]}}, fitted_slope(xt, yt));
  }
  return rep;
}

/// dispersive_ratio over `count` KAK draws with t <= t_max, psi cycling
/// through the built-in corpus. Spread max/min is bounded by `spread`; the
/// maximum is compared with `pinned` within 5% when given.
inline ExperimentReport dispersive_uniformity_experiment(int count, double t_max, std::uint64_t seed,
                                                         std::optional<double> pinned, double spread = 10.0) {
  ExperimentReport rep;
  rep.name = "verify-dispersive";
  rep.parameters = {{"count", count}, {"t_max", t_max}, {"seed", seed}};
  const auto corpus = builtin_corpus(1);
  double lo = kInfinity, hi = 0.0;
  for (int k = 0; k < count; ++k) {
    const auto sample = sample_kak(1, t_max, seed + static_cast<std::uint64_t>(k));
    const auto s = sample.assemble();
    const auto& d = corpus[static_cast<std::size_t>(k) % corpus.size()];
    const double r = dispersive_ratio(s, discretize(d, grid_for(s)));
    rep.info({{"quantity", "ratio"}, {"k", k}, {"t", sample.t(0)}, {"psi", d.to_string()}}, r);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  rep.add({{"quantity", "spread"}}, hi / lo, spread, 0.0, Comparison::kUpperBound);
  if (pinned) rep.add({{"quantity", "max_ratio"}}, hi, *pinned, 0.05, Comparison::kRelative);
  else rep.info({{"quantity", "max_ratio"}}, hi);
  return rep;
}

/// interp_ratio for each r over KAK draws; the spread per r is bounded by
/// `spread` and r = 2 must be constant within 1e-3.
inline ExperimentReport interp_experiment(const std::vector<double>& rs, int count, double t_max, std::uint64_t seed,
                                          double spread = 10.0) {
  ExperimentReport rep;
  rep.name = "verify-interp";
  rep.parameters = {{"count", count}, {"t_max", t_max}, {"seed", seed}};
  const auto corpus = builtin_corpus(1);
  for (double r : rs) {
    const nlohmann::json rj = std::isinf(r) ? nlohmann::json("inf") : nlohmann::json(r);
    double lo = kInfinity, hi = 0.0;
    for (int k = 0; k < count; ++k) {
      const auto s = sample_kak(1, t_max, seed + static_cast<std::uint64_t>(k)).assemble();
      const double v = interp_ratio(s, discretize(corpus[static_cast<std::size_t>(k) % corpus.size()], grid_for(s)), r);
      rep.info({{"quantity", "ratio"}, {"r", rj}, {"k", k}}, v);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (r == 2.0) rep.add({{"quantity", "spread"}, {"r", rj}}, hi / lo, 1.0, 1e-3, Comparison::kUpperBound);
    else rep.add({{"quantity", "spread"}, {"r", rj}}, hi / lo, spread, 0.0, Comparison::kUpperBound);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Weak-type tail.

/// meas D_lambda per lambda, the n = 1 closed form cosh A - 1 checked to
/// `closed_tol`, and the log-log slope against 1/lambda graded against 2n/alpha
/// when `slope_tol` is given.
inline ExperimentReport tail_experiment(int n, double alpha, const std::vector<double>& lambdas, double closed_tol = 1e-9,
                                        std::optional<double> slope_tol = std::nullopt) {
  ExperimentReport rep;
  rep.name = "tail-measure";
  rep.parameters = {{"n", n}, {"alpha", alpha}, {"lambdas", lambdas}};
  std::vector<double> x, y;
  for (double lam : lambdas) {
    const double m = tail_measure(lam, alpha, n);
    const double A = lam < 1.0 ? -2.0 * std::log(lam) / alpha : 0.0;
    if (n == 1) rep.add({{"quantity", "measure"}, {"lambda", lam}, {"A", A}}, m, std::cosh(A) - 1.0, closed_tol, Comparison::kRelative);
    else rep.info({{"quantity", "measure"}, {"lambda", lam}, {"A", A}}, m);
    if (m > 0.0) {
      x.push_back(std::log(1.0 / lam));
      y.push_back(std::log(m));
    }
  }
  if (x.size() >= 2) {
    const double s = fitted_slope(x, y);
    if (slope_tol) rep.add({{"quantity", "slope"}}, s, 2.0 * n / alpha, *slope_tol, Comparison::kAbsolute);
    else rep.info({{"quantity", "slope"}}, s);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Matrix coefficients.

/// |<S phi, phi>| for S = diag(lambda^{-1/2}, lambda^{1/2}) and Gaussian phi
/// against (2 lambda^{1/2} / (1 + lambda))^{1/2}.
inline ExperimentReport coefficient_experiment(const std::vector<double>& lambdas, double tol = 1e-4) {
  ExperimentReport rep;
  rep.name = "coeff-decay";
  rep.parameters = {{"lambdas", lambdas}};
  std::vector<double> x, y;
  for (double lam : lambdas) {
    const auto s = dilation_matrix(1.0 / std::sqrt(lam));
    const auto phi = discretize(FunctionDescriptor::gaussian(1), grid_for(s));
    const double v = std::abs(matrix_coefficient(s, phi, phi));
    rep.add({{"quantity", "overlap"}, {"lambda", lam}}, v, std::sqrt(2 * std::sqrt(lam) / (1 + lam)), tol, Comparison::kAbsolute);
    x.push_back(std::log(lam));
    y.push_back(std::log(v));
  }
  if (x.size() >= 2) rep.info({{"quantity", "slope"}}, fitted_slope(x, y));
  return rep;
}

// ---------------------------------------------------------------------------
// Operator identities.

/// ||S psi|| = ||psi|| on KAK draws with grids sized per matrix, psi cycling
/// through the built-in corpus.
inline ExperimentReport unitarity_experiment(int n, int count, double t_max, std::uint64_t seed, double tol = 1e-5) {
  ExperimentReport rep;
  rep.name = "unitarity";
  rep.parameters = {{"n", n}, {"count", count}, {"t_max", t_max}, {"seed", seed}};
  const auto corpus = builtin_corpus(n);
  for (int k = 0; k < count; ++k) {
    const auto s = sample_kak(n, t_max, seed + 1 + static_cast<std::uint64_t>(k)).assemble();
    const auto psi = discretize(corpus[static_cast<std::size_t>(k) % corpus.size()], grid_for(s));
    rep.add({{"quantity", "norm"}, {"k", k}}, apply_metaplectic(s, psi).norm(), 1.0, tol, Comparison::kAbsolute);
  }
  return rep;
}

/// |<mu(S1 S2) psi, mu(S1) mu(S2) psi>| = 1 within tol.
inline ExperimentReport homomorphism_experiment(int count, double t_max, std::uint64_t seed, double tol = 1e-3) {
  ExperimentReport rep;
  rep.name = "homomorphism";
  rep.parameters = {{"count", count}, {"t_max", t_max}, {"seed", seed}};
  std::mt19937_64 rng(seed);
  for (int k = 0; k < count; ++k) {
    const auto s1 = sample_kak(1, t_max, seed + 1 + 2 * static_cast<std::uint64_t>(k)).assemble();
    const auto s2 = sample_kak(1, t_max, seed + 2 + 2 * static_cast<std::uint64_t>(k)).assemble();
    const auto prod = s1 * s2;
    std::vector<Matrix> stages = metaplectic_stages(prod);
    for (const auto& m : metaplectic_stages(s2)) stages.push_back(m);
    for (const auto& m : metaplectic_stages(s1)) stages.push_back(m * s2.matrix());
    const auto psi = discretize(random_descriptor(1, rng), adequate_grid(1, stages, kDefaultFootprint));
    const cplx ip = inner(apply_metaplectic(prod, psi), apply_metaplectic(s1, apply_metaplectic(s2, psi)));
    rep.add({{"quantity", "overlap"}, {"k", k}}, std::abs(ip), 1.0, tol, Comparison::kAbsolute);
  }
  return rep;
}

/// Worst-case residuals of the Euler decomposition (against a generic SVD),
/// the generating-triple round trip and the free-pair factorisation.
inline ExperimentReport decomposition_experiment(std::uint64_t seed, int svd_count = 1000, int free_count = 1000,
                                                 int factor_count = 100) {
  ExperimentReport rep;
  rep.name = "decomposition";
  rep.parameters = {{"seed", seed}, {"svd_count", svd_count}, {"free_count", free_count}, {"factor_count", factor_count}};
  double recon = 0.0, pairing = 0.0, agree = 0.0;
  for (int k = 0; k < svd_count; ++k) {
    const int n = 1 + k % kMaxMatrixDim;
    const auto s = sample_kak(n, 4.0, seed + static_cast<std::uint64_t>(k)).assemble();
    const auto e = symplectic_svd(s);
    const Vector sv = Eigen::JacobiSVD<Matrix>(s.matrix()).singularValues();
    recon = std::max(recon, max_abs(e.reconstruct() - s.matrix()));
    for (int i = 0; i < n; ++i) {
      pairing = std::max(pairing, std::abs(sv(i) * sv(2 * n - 1 - i) - 1.0));
      agree = std::max(agree, std::abs(e.lambdas(i) - sv(i)) / sv(0));
    }
  }
  rep.add({{"quantity", "svd_reconstruction"}}, recon, 1e-9, 0.0, Comparison::kUpperBound);
  rep.add({{"quantity", "reciprocal_pairing"}}, pairing, 1e-9, 0.0, Comparison::kUpperBound);
  rep.add({{"quantity", "lambda_vs_generic_svd"}}, agree, 1e-9, 0.0, Comparison::kUpperBound);

  double round_trip = 0.0;
  int found = 0;
  for (std::uint64_t k = 0; found < free_count; ++k) {
    const int n = 1 + static_cast<int>(k % kMaxMatrixDim);
    const auto s = sample_kak(n, 3.0, seed + 100000 + k).assemble();
    if (std::abs(s.B().determinant()) <= 1e-3) continue;
    round_trip = std::max(round_trip, max_abs(free_from_generating(generating_from_free(s)).matrix() - s.matrix()));
    ++found;
  }
  rep.add({{"quantity", "generating_round_trip"}}, round_trip, 1e-10, 0.0, Comparison::kUpperBound);

  double factor = 0.0;
  for (int k = 0; k < factor_count; ++k) {
    const int n = 1 + k % kMaxMatrixDim;
    const auto s = sample_kak(n, 4.0, seed + 200000 + static_cast<std::uint64_t>(k)).assemble();
    const auto [g1, g2] = factor_free_pair(s);
    factor = std::max(factor, max_abs(free_from_generating(g1).matrix() * free_from_generating(g2).matrix() - s.matrix()));
  }
  rep.add({{"quantity", "free_pair_product"}}, factor, 1e-9, 0.0, Comparison::kUpperBound);
  return rep;
}

// ---------------------------------------------------------------------------
// Strichartz scan.

inline std::vector<double> uniform_t_grid(double t_max, double step) {
  if (!(t_max > 0.0) || !(step > 0.0)) throw PreconditionError("uniform_t_grid: t_max and step must be positive");
  std::vector<double> ts;
  const auto m = static_cast<int>(std::llround(t_max / step));
  for (int i = 0; i <= m; ++i) ts.push_back(t_max * i / m);
  return ts;
}

// ---------------------------------------------------------------------------
// Wigner mixed-norm bounds.

/// Gaussian and Hermite-4 pairs first, then seeded random pairs.
inline std::vector<std::pair<FunctionDescriptor, FunctionDescriptor>> wigner_corpus(int pairs, std::uint64_t seed) {
  std::vector<std::pair<FunctionDescriptor, FunctionDescriptor>> out = {
      {FunctionDescriptor::gaussian(1), FunctionDescriptor::gaussian(1)},
      {FunctionDescriptor::hermite(4), FunctionDescriptor::gaussian(1)}};
  std::mt19937_64 rng(seed);
  while (static_cast<int>(out.size()) < pairs) {
    auto a = random_descriptor(1, rng);
    out.emplace_back(a, random_descriptor(1, rng));
  }
  out.resize(static_cast<std::size_t>(pairs));
  return out;
}

/// wigner_bound_check on `grid` and on the N -> 2N refinement; the maxima
/// must agree within 5% and Hermite-4 stays within 10x of the Gaussian pair.
inline ExperimentReport wigner_bounds_experiment(const std::vector<std::pair<FunctionDescriptor, FunctionDescriptor>>& corpus,
                                                 const GridSpec& grid, const std::vector<double>& pinned = {}) {
  auto run = [&](const GridSpec& g) {
    std::vector<std::pair<SampledFunction, SampledFunction>> fs;
    for (const auto& [a, b] : corpus) fs.emplace_back(discretize(a, g), discretize(b, g));
    return wigner_bound_check(fs, pinned);
  };
  ExperimentReport rep = run(grid);
  const ExperimentReport fine = run(GridSpec(grid.n(), grid.half_width(), 2 * grid.points()));
  for (const char* q : {"max_l1", "max_sup_x", "max_sup_xi"})
    rep.add({{"quantity", std::string("refinement_") + q}}, fine.find(q)->measured, rep.find(q)->measured, 0.05, Comparison::kRelative);
  if (corpus.size() >= 2) {
    for (const char* ratio : {"l1", "sup_x", "sup_xi"}) {
      double gauss = 0.0, herm = 0.0;
      for (const auto& r : rep.rows)
        if (r.params["quantity"] == "pair" && r.params["ratio"] == ratio) {
          if (r.params["index"] == 0) gauss = r.measured;
          if (r.params["index"] == 1) herm = r.measured;
        }
      rep.add({{"quantity", "hermite4_over_gaussian"}, {"ratio", ratio}}, herm / gauss, 10.0, 0.0, Comparison::kUpperBound);
    }
  }
  rep.parameters["refined_N"] = fine.parameters["N"];
  return rep;
}

}  // namespace metalab

#endif  // METALAB_EXPERIMENTS_HPP_
