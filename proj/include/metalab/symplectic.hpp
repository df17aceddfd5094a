// Copyright 2026 The metalab Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef METALAB_SYMPLECTIC_HPP_
#define METALAB_SYMPLECTIC_HPP_

// Symplectic linear algebra on Sp(n, R): predicates, polar and Euler
// decompositions, the correspondence between free symplectic matrices and
// quadratic generating functions, and KAK coordinates with the Haar density.
//
// Conventions: J = (0 I; -I 0), S = (A B; C D), a_t = diag(e^{t/2}, e^{-t/2}).
// The orthogonal symplectic subgroup is embedded from U(n) as
// A + iB  ->  (A B; -B A).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "metalab/errors.hpp"

namespace metalab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kTolSymp = 1e-10;
inline constexpr double kTolDet = 1e-12;
inline constexpr double kTolReconstruct = 1e-9;
inline constexpr int kMaxMatrixDim = 3;

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

/// The standard symplectic form of order 2n.
inline Matrix symplectic_form(int n) {
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = Matrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  return j;
}

/// True iff ||m^T J m - J||_max <= tol.
inline bool is_symplectic(const Matrix& m, double tol = kTolSymp) {
  if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0)
    throw DimensionError("is_symplectic: matrix must be square of even order, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  if (!(tol > 0.0)) throw PreconditionError("is_symplectic: tol must be positive");
  const Matrix j = symplectic_form(static_cast<int>(m.rows() / 2));
  return max_abs(m.transpose() * j * m - j) <= tol;
}

/// Embeds a complex n x n matrix A + iB as (A B; -B A).
inline Matrix embed_unitary(const ComplexMatrix& u) {
  const auto n = u.rows();
  Matrix m(2 * n, 2 * n);
  m.topLeftCorner(n, n) = u.real();
  m.topRightCorner(n, n) = u.imag();
  m.bottomLeftCorner(n, n) = -u.imag();
  m.bottomRightCorner(n, n) = u.real();
  return m;
}

/// Closest orthogonal symplectic matrix to m: average onto the (A B; -B A)
/// pattern, then take the unitary polar factor of A + iB.
inline Matrix nearest_orthosymplectic(const Matrix& m) {
  const auto n = m.rows() / 2;
  ComplexMatrix z(n, n);
  z.real() = 0.5 * (m.topLeftCorner(n, n) + m.bottomRightCorner(n, n));
  z.imag() = 0.5 * (m.topRightCorner(n, n) - m.bottomLeftCorner(n, n));
  Eigen::JacobiSVD<ComplexMatrix> svd(z, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return embed_unitary(svd.matrixU() * svd.matrixV().adjoint());
}

/// A 2n x 2n real matrix certified to satisfy S^T J S = J.
class SymplecticMatrix {
 public:
  explicit SymplecticMatrix(Matrix m, double tol = kTolSymp) : m_(std::move(m)) {
    if (!is_symplectic(m_, tol))
      throw PreconditionError("SymplecticMatrix: ||S^T J S - J||_max exceeds tolerance");
    n_ = static_cast<int>(m_.rows() / 2);
  }

  static SymplecticMatrix identity(int n) { return SymplecticMatrix(Matrix::Identity(2 * n, 2 * n)); }
  static SymplecticMatrix J(int n) { return SymplecticMatrix(symplectic_form(n)); }

  /// diag(e^{t/2}, e^{-t/2}).
  static SymplecticMatrix a_t(const Vector& t) {
    const auto n = t.size();
    Matrix m = Matrix::Zero(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      m(i, i) = std::exp(0.5 * t(i));
      m(n + i, n + i) = std::exp(-0.5 * t(i));
    }
    return SymplecticMatrix(std::move(m));
  }

  /// diag(l_1..l_n, 1/l_1..1/l_n).
  static SymplecticMatrix diagonal(const Vector& l) {
    const auto n = l.size();
    Matrix m = Matrix::Zero(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      m(i, i) = l(i);
      m(n + i, n + i) = 1.0 / l(i);
    }
    return SymplecticMatrix(std::move(m));
  }

  /// Phase-space rotation (cos t, sin t; -sin t, cos t) in every canonical pair.
  static SymplecticMatrix rotation(int n, double theta) {
    ComplexMatrix u = ComplexMatrix::Identity(n, n) * std::polar(1.0, theta);
    return SymplecticMatrix(embed_unitary(u));
  }

  int n() const { return n_; }
  const Matrix& matrix() const { return m_; }
  Matrix A() const { return m_.topLeftCorner(n_, n_); }
  Matrix B() const { return m_.topRightCorner(n_, n_); }
  Matrix C() const { return m_.bottomLeftCorner(n_, n_); }
  Matrix D() const { return m_.bottomRightCorner(n_, n_); }

  /// S^{-1} = -J S^T J.
  SymplecticMatrix inverse() const {
    const Matrix j = symplectic_form(n_);
    return SymplecticMatrix(-j * m_.transpose() * j, 1e-8);
  }

  friend SymplecticMatrix operator*(const SymplecticMatrix& a, const SymplecticMatrix& b) {
    if (a.n_ != b.n_) throw DimensionError("SymplecticMatrix product: dimension mismatch");
    // Products of well-conditioned factors can lose a few digits; certify loosely.
    return SymplecticMatrix(a.m_ * b.m_, 1e-8);
  }

 private:
  int n_ = 0;
  Matrix m_;
};

struct PolarDecomposition {
  SymplecticMatrix s0;  ///< symmetric positive definite, symplectic
  SymplecticMatrix u;   ///< orthogonal, symplectic
};

struct EulerDecomposition {
  Matrix u1;
  Matrix u2;
  Vector lambdas;  ///< descending, all >= 1

  Matrix middle() const {
    const auto n = lambdas.size();
    Matrix d = Matrix::Zero(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      d(i, i) = lambdas(i);
      d(n + i, n + i) = 1.0 / lambdas(i);
    }
    return d;
  }
  Matrix reconstruct() const { return u1 * middle() * u2; }
  double lambda_product() const { return lambdas.prod(); }
};

/// S = S0 U with S0 symplectic positive definite and U a symplectic rotation.
inline PolarDecomposition symplectic_polar(const SymplecticMatrix& s) {
  Eigen::JacobiSVD<Matrix> svd(s.matrix(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix& w = svd.matrixU();
  Matrix u = nearest_orthosymplectic(w * svd.matrixV().transpose());
  Matrix s0 = s.matrix() * u.transpose();
  s0 = 0.5 * (s0 + s0.transpose()).eval();
  return {SymplecticMatrix(std::move(s0), 1e-8), SymplecticMatrix(std::move(u))};
}

/// Euler (symplectic singular value) decomposition S = U1 diag(lambda, 1/lambda) U2.
inline EulerDecomposition symplectic_svd(const SymplecticMatrix& s) {
  const int n = s.n();
  const PolarDecomposition polar = symplectic_polar(s);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(polar.s0.matrix());
  const Matrix& evecs = eig.eigenvectors();  // ascending eigenvalues
  const Matrix j = symplectic_form(n);

  // Symplectic Gram-Schmidt over eigenvectors in descending eigenvalue order:
  // keep v only if it survives projection off every chosen v_k and J^T v_k.
  // Inside a J-invariant cluster of multiplicity 2k <= 6 some candidate keeps
  // residual norm >= 1/sqrt(3), so the 0.5 threshold always finds one.
  Matrix chosen(2 * n, n);
  Vector rayleigh(n);
  int count = 0;
  for (int c = 2 * n - 1; c >= 0 && count < n; --c) {
    Vector v = evecs.col(c);
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < count; ++k) {
        const Vector vk = chosen.col(k);
        const Vector jk = j.transpose() * vk;
        v -= vk.dot(v) * vk;
        v -= jk.dot(v) * jk;
      }
    }
    const double norm = v.norm();
    if (norm < 0.5) continue;
    v /= norm;
    chosen.col(count) = v;
    rayleigh(count) = v.dot(polar.s0.matrix() * v);
    ++count;
  }
  if (count != n) throw InternalError("symplectic_svd: Lagrangian eigenbasis not found");

  // Order by descending lambda (permuting columns keeps the basis Lagrangian).
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return rayleigh(a) > rayleigh(b); });
  Matrix basis(2 * n, 2 * n);
  EulerDecomposition out;
  out.lambdas.resize(n);
  for (int i = 0; i < n; ++i) {
    const Vector v = chosen.col(order[static_cast<std::size_t>(i)]);
    basis.col(i) = v;
    basis.col(n + i) = j.transpose() * v;
    out.lambdas(i) = std::max(1.0, rayleigh(order[static_cast<std::size_t>(i)]));
  }
  out.u1 = nearest_orthosymplectic(basis);
  out.u2 = nearest_orthosymplectic(out.u1.transpose() * polar.u.matrix());
  return out;
}

/// Parameters of the quadratic form W(x,x') = 1/2 Px.x - Lx.x' + 1/2 Qx'.x'
/// plus the Maslov index (mod 4) selecting the operator branch.
class GeneratingTriple {
 public:
  GeneratingTriple(Matrix p, Matrix l, Matrix q, int maslov) : maslov_(((maslov % 4) + 4) % 4) {
    const auto n = l.rows();
    if (l.cols() != n || p.rows() != n || p.cols() != n || q.rows() != n || q.cols() != n)
      throw DimensionError("GeneratingTriple: P, L, Q must be n x n");
    if (n < 1 || n > kMaxMatrixDim) throw DimensionError("GeneratingTriple: n out of range");
    if (std::abs(l.determinant()) <= kTolDet)
      throw PreconditionError("GeneratingTriple: |det L| <= tol_det");
    p_ = 0.5 * (p + p.transpose());
    q_ = 0.5 * (q + q.transpose());
    l_ = std::move(l);
    // m pi == arg det L (mod 2 pi): parity of m must match the sign of det L.
    const int parity = l_.determinant() > 0.0 ? 0 : 1;
    if (maslov_ % 2 != parity)
      throw PreconditionError("GeneratingTriple: Maslov parity inconsistent with sign of det L");
  }

  /// Canonical branch m in {0, 1}.
  static GeneratingTriple canonical(Matrix p, Matrix l, Matrix q) {
    const int m = l.determinant() > 0.0 ? 0 : 1;
    return GeneratingTriple(std::move(p), std::move(l), std::move(q), m);
  }

  int n() const { return static_cast<int>(l_.rows()); }
  const Matrix& p() const { return p_; }
  const Matrix& l() const { return l_; }
  const Matrix& q() const { return q_; }
  int maslov() const { return maslov_; }

  /// The other operator over the same generating function, -S_{W,m} = S_{W,m+2}.
  GeneratingTriple companion() const { return GeneratingTriple(p_, l_, q_, maslov_ + 2); }

 private:
  Matrix p_, l_, q_;
  int maslov_ = 0;
};

/// S_W = (L^{-1}Q, L^{-1}; P L^{-1} Q - L^T, P L^{-1}).
inline SymplecticMatrix free_from_generating(const GeneratingTriple& g) {
  const int n = g.n();
  const Matrix linv = g.l().inverse();
  Matrix s(2 * n, 2 * n);
  s.topLeftCorner(n, n) = linv * g.q();
  s.topRightCorner(n, n) = linv;
  s.bottomLeftCorner(n, n) = g.p() * linv * g.q() - g.l().transpose();
  s.bottomRightCorner(n, n) = g.p() * linv;
  return SymplecticMatrix(std::move(s), 1e-8);
}

/// Inverse of free_from_generating on free matrices (det B != 0), canonical
/// Maslov branch.
inline GeneratingTriple generating_from_free(const SymplecticMatrix& s) {
  const Matrix b = s.B();
  if (std::abs(b.determinant()) <= kTolDet)
    throw NotFreeError("generating_from_free: |det B| <= tol_det, matrix is not free");
  const Matrix l = b.inverse();
  return GeneratingTriple::canonical(s.D() * l, l, l * s.A());
}

/// Writes S = S_{g1} S_{g2} with both factors free. The second factor is
/// (cI -I; I 0) = (V_c J)^{-1}, so the first is S V_c J with B-block A + cB.
inline std::pair<GeneratingTriple, GeneratingTriple> factor_free_pair(const SymplecticMatrix& s) {
  static constexpr double kPalette[] = {1.0, -1.0, 0.5, 2.0, 1.0 / 3.0, 3.0,
                                        0.25, -0.5, -2.0, 4.0, -3.0, 0.0};
  const int n = s.n();
  const Matrix id = Matrix::Identity(n, n);
  double best_score = std::numeric_limits<double>::infinity();
  std::optional<std::pair<GeneratingTriple, GeneratingTriple>> best;
  for (double c : kPalette) {
    Matrix vcj(2 * n, 2 * n);
    vcj << Matrix::Zero(n, n), id, -id, c * id;
    const Matrix s1 = s.matrix() * vcj;
    const Matrix b1 = s1.topRightCorner(n, n);
    if (std::abs(b1.determinant()) <= kTolDet) continue;
    const Matrix l1 = b1.inverse();
    auto g1 = GeneratingTriple::canonical(s1.bottomRightCorner(n, n) * l1, l1,
                                          l1 * s1.topLeftCorner(n, n));
    // S2 = (cI -I; I 0): B = -I, so L = -I, P = D B^{-1} = 0, Q = B^{-1}A = -cI.
    auto g2 = GeneratingTriple::canonical(Matrix::Zero(n, n), -id, -c * id);
    // Prefer the factorization with the mildest chirps and scalings.
    const double score = g1.p().norm() + g1.q().norm() + g1.l().norm() + std::abs(c);
    if (score < best_score) {
      best_score = score;
      best.emplace(std::move(g1), std::move(g2));
    }
  }
  if (!best) throw InternalError("factor_free_pair: palette exhausted");
  return *best;
}

/// prod_{i<j} sinh((t_i - t_j)/2) * prod_{i<=j} sinh((t_i + t_j)/2), Haar
/// constant taken as 1.
inline double haar_density(const Vector& t, int n) {
  if (t.size() != n) throw DimensionError("haar_density: t must have n entries");
  for (int i = 0; i + 1 < n; ++i)
    if (t(i) < t(i + 1)) throw PreconditionError("haar_density: t must be sorted descending");
  if (n > 0 && t(n - 1) < 0.0) throw PreconditionError("haar_density: t_n must be >= 0");
  double d = 1.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) d *= std::sinh(0.5 * (t(i) - t(j)));
    for (int j = i; j < n; ++j) d *= std::sinh(0.5 * (t(i) + t(j)));
  }
  return d;
}

/// Haar-distributed element of U(n) (QR of a complex Ginibre matrix with the
/// phases of diag(R) removed), embedded in Sp(n, R).
template <class Rng>
Matrix random_orthosymplectic(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix z(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) z(i, k) = {normal(rng), normal(rng)};
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return embed_unitary(q);
}

struct KakSample {
  Vector t;  ///< descending, >= 0
  Matrix u1;
  Matrix u2;
  double weight = 0.0;

  SymplecticMatrix assemble() const {
    return SymplecticMatrix(u1 * SymplecticMatrix::a_t(t).matrix() * u2, 1e-8);
  }
};

/// KAK coordinates with t uniform on {t_1 >= ... >= t_n >= 0, t_1 <= t_max}
/// and Haar-random symplectic rotations. Deterministic in rng_seed.
inline KakSample sample_kak(int n, double t_max, std::uint64_t rng_seed) {
  if (n < 1 || n > kMaxMatrixDim) throw DimensionError("sample_kak: n out of range");
  if (!(t_max > 0.0)) throw PreconditionError("sample_kak: t_max must be positive");
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> uni(0.0, t_max);
  std::vector<double> t(static_cast<std::size_t>(n));
  for (auto& v : t) v = uni(rng);
  std::sort(t.begin(), t.end(), std::greater<>());
  KakSample out;
  out.t = Eigen::Map<Vector>(t.data(), n);
  out.u1 = random_orthosymplectic(n, rng);
  out.u2 = random_orthosymplectic(n, rng);
  out.weight = haar_density(out.t, n);
  return out;
}

// ---- plain-text CSV fixtures (row-major, full 2n x 2n) ----

inline void write_matrix_csv(std::ostream& os, const Matrix& m) {
  std::ostringstream line;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    line.str("");
    line << std::setprecision(17);
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) line << ',';
      line << m(r, c);
    }
    os << line.str() << '\n';
  }
}

inline Matrix read_matrix_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError("read_matrix_csv: bad number '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("read_matrix_csv: ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("read_matrix_csv: empty input");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return m;
}

}  // namespace metalab

#endif  // METALAB_SYMPLECTIC_HPP_
