#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "metalab/estimates.hpp"

using namespace metalab;

namespace {

constexpr double kPi = std::numbers::pi;

SymplecticMatrix dilation(double lambda) {
  Vector l(1);
  l << lambda;
  return SymplecticMatrix::diagonal(l);
}

// n = 2 tail measure with the inner t1 integral done in closed form:
// int (cosh t1 - cosh t2)/2 sinh t1 dt1 = cosh^2 t1 / 4 - cosh t2 cosh t1 / 2.
// The outer integral uses composite Simpson on 20000 panels.
double tail_n2_oracle(double A) {
  auto F = [](double t1, double t2) { return std::cosh(t1) * std::cosh(t1) / 4 - std::cosh(t2) * std::cosh(t1) / 2; };
  auto g = [&](double t2) { return (F(A - t2, t2) - F(t2, t2)) * std::sinh(t2); };
  const int m = 20000;
  const double h = A / 2 / m;
  double s = g(0) + g(A / 2);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4 : 2) * g(i * h);
  return s * h / 3;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST(Report, VerdictAndCsv) {
  ExperimentReport rep;
  rep.name = "demo";
  rep.add({{"k", 1}}, 1.0, 1.0, 1e-9, Comparison::kRelative);
  rep.add({{"k", "a\"b"}}, 0.5, 1.0, 0.0, Comparison::kUpperBound);
  rep.info({{"k", 3}}, 42.0);
  EXPECT_TRUE(rep.passed());
  rep.add({{"k", 4}}, 2.0, 1.0, 0.05, Comparison::kUpperBound);
  EXPECT_FALSE(rep.passed());
  std::stringstream ss;
  write_report_csv(ss, {rep});
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line, "# schema=1");
  std::getline(ss, line);
  EXPECT_EQ(line, "experiment,param-json,measured,reference,ratio,tol,verdict");
  std::getline(ss, line);
  EXPECT_EQ(line.substr(0, 5), "demo,");
  std::getline(ss, line);
  EXPECT_NE(line.find("\"{\"\"k\"\":\"\"a\\\"\"b\"\"}\""), std::string::npos) << line;
  int fails = 0;
  while (std::getline(ss, line)) fails += line.ends_with(",FAIL");
  EXPECT_EQ(fails, 1);
}

TEST(TailMeasure, OneDimensionalClosedForm) {
  EXPECT_NEAR(tail_measure(0.5, 0.5, 1), 7.03125, 1e-12);
  EXPECT_EQ(tail_measure(1.0, 0.5, 1), 0.0);
  EXPECT_EQ(tail_measure(2.0, 0.5, 2), 0.0);
  std::vector<double> x, y;
  for (int k = 2; k <= 6; ++k) {
    x.push_back(k * std::log(2.0));
    y.push_back(std::log(tail_measure(std::pow(2.0, -k), 0.5, 1)));
  }
  EXPECT_NEAR(slope(x, y), 4.0, 0.05);
  EXPECT_THROW(tail_measure(0.0, 0.5, 1), PreconditionError);
  EXPECT_THROW(tail_measure(0.5, -1.0, 1), PreconditionError);
  EXPECT_THROW(tail_measure(0.5, 0.5, 4), DimensionError);
}

TEST(TailMeasure, TwoDimensionalMatchesSemiAnalyticOracle) {
  for (int k = 1; k <= 6; ++k) {
    const double lam = std::pow(2.0, -k);
    const double A = -2 * std::log(lam) / 0.5;
    EXPECT_NEAR(tail_measure(lam, 0.5, 2) / tail_n2_oracle(A), 1.0, 1e-9) << k;
  }
}

TEST(TailMeasure, DependsOnlyOnA) {
  for (int n : {1, 2, 3}) {
    const double a = tail_measure(0.3, 0.7, n);
    EXPECT_NEAR(tail_measure(0.09, 1.4, n) / a, 1.0, 1e-10) << n;
  }
  EXPECT_GT(tail_measure(0.25, 1.0, 3), tail_measure(0.5, 1.0, 3));
}

TEST(Dilation, MatchesMetaplecticOperator) {
  GridSpec g(1, 24.0, 512);
  for (const auto& d : builtin_corpus(1)) {
    auto psi = discretize(d, g);
    Vector l(1);
    l << 2.0;
    auto a = apply_dilation(l, psi, g);
    auto b = apply_metaplectic(dilation(2.0), psi);
    EXPECT_LT(align_phase(a, b).distance, 1e-6);
  }
}

TEST(Dispersive, GaussianClosedForm) {
  // S = diag(1/lambda, lambda): ||S psi||_{M^inf} = (2 pi)^{-1} (2 lambda/(1 + lambda^2))^{1/2},
  // ||psi||_{M^1} = 2.
  for (double lam : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    GridSpec g = grid_for(dilation(1.0 / lam));
    auto psi = discretize(FunctionDescriptor::gaussian(1), g);
    const double want = std::sqrt(2 * lam / (1 + lam * lam)) / (2 * kPi) * std::sqrt(lam) / 2;
    EXPECT_NEAR(dispersive_ratio(dilation(1.0 / lam), psi) / want, 1.0, 1e-6) << lam;
  }
}

TEST(Dispersive, DilationFamilyWithinFactorTwo) {
  std::vector<double> r;
  for (double lam : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    GridSpec g = grid_for(dilation(lam));
    r.push_back(dispersive_ratio(dilation(lam), discretize(FunctionDescriptor::gaussian(1), g)));
  }
  EXPECT_LE(*std::max_element(r.begin(), r.end()) / *std::min_element(r.begin(), r.end()), 2.0);
}

TEST(Dispersive, ConjugationInvariance) {
  Vector t(1);
  t << 2.0;
  const auto a = SymplecticMatrix::a_t(t);
  std::mt19937_64 rng(9);
  std::vector<double> r;
  for (int k = 0; k < 20; ++k) {
    const SymplecticMatrix u1(random_orthosymplectic(1, rng)), u2(random_orthosymplectic(1, rng));
    const auto s = u1 * a * u2;
    GridSpec g = grid_for(s);
    r.push_back(dispersive_ratio(s, discretize(FunctionDescriptor::gaussian(1).with_shift({0.5}), g)));
  }
  EXPECT_LE(*std::max_element(r.begin(), r.end()) / *std::min_element(r.begin(), r.end()), 2.0);
}

TEST(Interp, SpecialExponents) {
  std::vector<double> r2;
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    const auto s = sample_kak(1, 3.0, seed).assemble();
    GridSpec g = grid_for(s);
    auto psi = discretize(builtin_corpus(1)[seed], g);
    r2.push_back(interp_ratio(s, psi, 2.0));
    EXPECT_NEAR(interp_ratio(s, psi, kInfinity), dispersive_ratio(s, psi), 1e-12 * dispersive_ratio(s, psi));
  }
  for (double v : r2) EXPECT_NEAR(v, r2[0], 1e-3 * r2[0]);
  EXPECT_THROW(interp_ratio(SymplecticMatrix::identity(1), gaussian_window(GridSpec(1, 12, 256)), 1.5), PreconditionError);
}

TEST(Interp, DilationFamilyWithinFactorTwo) {
  std::vector<double> r;
  for (double lam : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    GridSpec g = grid_for(dilation(lam));
    r.push_back(interp_ratio(dilation(lam), discretize(FunctionDescriptor::gaussian(1), g), 4.0));
  }
  EXPECT_LE(*std::max_element(r.begin(), r.end()) / *std::min_element(r.begin(), r.end()), 2.0);
}

TEST(Covariance, Examples) {
  GridSpec g(1, std::sqrt(kPi * 1024 / 2), 1024);
  auto psi = discretize(FunctionDescriptor::gaussian(1), g);
  EXPECT_LT(covariance_residual(SymplecticMatrix::identity(1), psi), 1e-6);
  EXPECT_LT(covariance_residual(SymplecticMatrix::J(1), psi), 1e-3);
  EXPECT_LT(covariance_residual(dilation(2.0), psi), 5e-3);
  auto shifted = discretize(builtin_corpus(1)[1], g);
  EXPECT_LT(covariance_residual(SymplecticMatrix::rotation(1, kPi / 3), shifted), 5e-3);
}

TEST(MatrixCoefficient, IdentityAndOracle) {
  GridSpec g(1, 12.0, 512);
  auto psi = discretize(FunctionDescriptor::gaussian(1), g);
  EXPECT_NEAR(std::abs(matrix_coefficient(SymplecticMatrix::identity(1), psi, psi)), 1.0, 1e-5);
  // S = diag(lambda^{-1/2}, lambda^{1/2}) acts as lambda^{1/4} psi(lambda^{1/2} x).
  for (double lam : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    const auto s = dilation(1.0 / std::sqrt(lam));
    GridSpec gs = grid_for(s);
    auto p = discretize(FunctionDescriptor::gaussian(1), gs);
    EXPECT_NEAR(std::abs(matrix_coefficient(s, p, p)), std::sqrt(2 * std::sqrt(lam) / (1 + lam)), 1e-4) << lam;
  }
}

TEST(MatrixCoefficient, InverseSymmetryAndDispersiveBound) {
  std::mt19937_64 rng(12);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto s = sample_kak(1, 3.0, 500 + static_cast<std::uint64_t>(k)).assemble();
    std::vector<Matrix> stages = metaplectic_stages(s);
    for (const auto& m : metaplectic_stages(s.inverse())) stages.push_back(m);
    GridSpec g = adequate_grid(1, stages, 12.0);
    auto f1 = discretize(random_descriptor(1, rng), g), f2 = discretize(random_descriptor(1, rng), g);
    const cplx a = matrix_coefficient(s, f1, f2), b = matrix_coefficient(s.inverse(), f2, f1);
    EXPECT_NEAR(std::abs(a), std::abs(b), 1e-4) << k;
    const double bound = std::sqrt(1.0 / symplectic_svd(s).lambda_product()) * stft_norm(f1, 1) * stft_norm(f2, 1);
    worst = std::max(worst, std::abs(a) / bound);
  }
  const auto pin = fixtures::pinned("estimates.coefficient_constant", worst);
  ASSERT_TRUE(pin.has_value()) << "fixture estimates.coefficient_constant missing";
  EXPECT_LE(worst, *pin * 1.05);
}

TEST(Strichartz, GaussianIntegrandClosedForm) {
  // Gaussian: ||a_t psi||_{M^inf} = (2 pi)^{-1} cosh(t/2)^{-1/2}, rotation invariant.
  GridSpec g(1, 12.0, 256);
  auto psi = discretize(FunctionDescriptor::gaussian(1), g);
  std::vector<double> ts;
  for (int i = 0; i <= 16; ++i) ts.push_back(0.5 * i);
  auto rep = strichartz_tail_scan(psi, 8, kInfinity, ts, 4);
  std::vector<double> f;
  for (const auto& row : rep.rows)
    if (row.params["quantity"] == "integrand") f.push_back(row.measured);
  ASSERT_EQ(f.size(), ts.size());
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const double want = std::pow(std::pow(std::cosh(ts[i] / 2), -0.5) / (2 * kPi), 8) * std::sinh(ts[i]);
    EXPECT_NEAR(f[i] / want, 1.0, 1e-6) << ts[i];
  }
  const double ratio = f[16] / f[8];
  EXPECT_GT(ratio, std::exp(-4.0) / 3);
  EXPECT_LT(ratio, std::exp(-4.0) * 3);
  EXPECT_LT(rep.find("m2_spread")->measured, 1e-3);
}

TEST(Strichartz, InadmissiblePairDiverges) {
  GridSpec g(1, 12.0, 256);
  auto psi = discretize(builtin_corpus(1)[1], g);
  std::vector<double> ts;
  for (int i = 0; i <= 10; ++i) ts.push_back(i);
  auto rep = strichartz_tail_scan(psi, 3, kInfinity, ts, 4);
  EXPECT_FALSE(rep.passed());
  EXPECT_GT(rep.find("stabilization")->measured, 0.1);
  EXPECT_LT(strichartz_margin(1, 3, kInfinity), 0.0);
  EXPECT_EQ(strichartz_margin(1, 8, kInfinity), 0.0);
}

TEST(WignerBounds, GaussianAndHermite) {
  GridSpec g(1, 14.0, 512);
  auto gauss = discretize(FunctionDescriptor::gaussian(1), g);
  auto h4 = discretize(FunctionDescriptor::hermite(4), g);
  const auto rg = wigner_bound_ratios(gauss, gauss);
  const auto rh = wigner_bound_ratios(h4, gauss);
  for (double v : {rg.l1, rg.sup_x, rg.sup_xi, rh.l1, rh.sup_x, rh.sup_xi}) EXPECT_TRUE(std::isfinite(v) && v > 0);
  EXPECT_LE(rh.l1, 10 * rg.l1);
  EXPECT_LE(rh.sup_x, 10 * rg.sup_x);
  EXPECT_LE(rh.sup_xi, 10 * rg.sup_xi);
  // Gaussian pair: ||W||_{L^1} = 1/pi * pi = 1, ||phi||_{M^1} = 2.
  EXPECT_NEAR(rg.l1, 0.25, 1e-6);
  auto rep = wigner_bound_check({{gauss, gauss}, {h4, gauss}});
  EXPECT_TRUE(rep.passed());
  EXPECT_NEAR(rep.find("max_l1")->measured, std::max(rg.l1, rh.l1), 1e-15);
}
