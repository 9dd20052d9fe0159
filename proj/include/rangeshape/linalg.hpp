#ifndef RANGESHAPE_LINALG_HPP
#define RANGESHAPE_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace rangeshape {

using cplx = std::complex<double>;

/// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  explicit ComplexMatrix(std::size_t d) : d_(d), a_(d * d) {}

  ComplexMatrix(std::size_t d, std::vector<cplx> entries)
      : d_(d), a_(std::move(entries)) {
    if (a_.size() != d_ * d_)
      throw InvalidMatrix("expected " + std::to_string(d_ * d_) +
                          " entries, got " + std::to_string(a_.size()));
    check_finite();
  }

  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    *this = from_rows(std::vector<std::vector<cplx>>(rows.begin(), rows.end()));
  }

  static ComplexMatrix from_rows(const std::vector<std::vector<cplx>>& rows) {
    const std::size_t d = rows.size();
    std::vector<cplx> e;
    e.reserve(d * d);
    for (const auto& r : rows) {
      if (r.size() != d) throw InvalidMatrix("matrix is not square");
      e.insert(e.end(), r.begin(), r.end());
    }
    return ComplexMatrix(d, std::move(e));
  }

  static ComplexMatrix identity(std::size_t d) {
    ComplexMatrix m(d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const cplx> diag) {
    ComplexMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
  }

  std::size_t dim() const { return d_; }
  bool empty() const { return d_ == 0; }

  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * d_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * d_ + j]; }

  std::span<const cplx> entries() const { return a_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix r(d_);
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  ComplexMatrix transpose() const {
    ComplexMatrix r(d_);
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  cplx trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < d_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : a_) s += std::norm(z);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& z : a_) m = std::max(m, std::abs(z));
    return m;
  }

  bool is_hermitian(double rel_tol = 1e-12) const {
    const double tol = rel_tol * max_abs();
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = i; j < d_; ++j)
        if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    return true;
  }

  bool is_symmetric(double rel_tol = 0.0) const {
    const double tol = rel_tol * max_abs();
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = i + 1; j < d_; ++j)
        if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
    return true;
  }

  std::vector<cplx> apply(std::span<const cplx> x) const {
    std::vector<cplx> y(d_);
    for (std::size_t i = 0; i < d_; ++i) {
      cplx s = 0.0;
      for (std::size_t j = 0; j < d_; ++j) s += (*this)(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  ComplexMatrix& operator*=(cplx s) {
    for (auto& z : a_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.require_same(b);
    const std::size_t d = a.d_;
    ComplexMatrix r(d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k) {
        const cplx aik = a(i, k);
        for (std::size_t j = 0; j < d; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  void check_finite() const {
    for (const auto& z : a_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw InvalidMatrix("matrix has non-finite entries");
  }
  void require_same(const ComplexMatrix& o) const {
    if (o.d_ != d_) throw InvalidMatrix("dimension mismatch");
  }

  std::size_t d_ = 0;
  std::vector<cplx> a_;
};

/// A = H + iK with H, K hermitian.
struct HermitianPair {
  ComplexMatrix H;
  ComplexMatrix K;

  std::size_t dim() const { return H.dim(); }

  /// cos(t) H + sin(t) K for direction (c, s).
  ComplexMatrix pencil(double c, double s) const { return c * H + s * K; }

  ComplexMatrix matrix() const { return H + cplx(0.0, 1.0) * K; }
};

inline HermitianPair hermitian_parts(const ComplexMatrix& A) {
  const ComplexMatrix Astar = A.adjoint();
  HermitianPair p{0.5 * (A + Astar), (A - Astar) * cplx(0.0, -0.5)};
  // Force exact hermitian symmetry of the diagonal.
  for (std::size_t i = 0; i < A.dim(); ++i) {
    p.H(i, i) = p.H(i, i).real();
    p.K(i, i) = p.K(i, i).real();
  }
  return p;
}

/// Eigen-decomposition of a real symmetric n x n matrix (row-major).
/// Vectors are stored column-wise: vectors[i * n + k] is component i of vector k.
struct SymmetricEigen {
  std::size_t n = 0;
  std::vector<double> values;
  std::vector<double> vectors;
  int sweeps = 0;
};

namespace detail {

inline constexpr double kJacobiRelTol = 1e-13;
inline constexpr int kJacobiMaxSweeps = 60;

inline double off_diagonal_norm(const std::vector<double>& a, std::size_t n) {
  double s = 0.0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      if (p != q) s += a[p * n + q] * a[p * n + q];
  return std::sqrt(s);
}

}  // namespace detail

/// Cyclic Jacobi rotations. Stops when the off-diagonal Frobenius norm drops
/// below 1e-13 * ||M||_F; throws ConvergenceFailure after 60 sweeps.
/// Eigenvalues come back ascending with matching vector columns.
inline SymmetricEigen jacobi_eigen(std::vector<double> a, std::size_t n) {
  if (a.size() != n * n) throw InvalidMatrix("jacobi_eigen: size mismatch");
  SymmetricEigen r;
  r.n = n;
  r.vectors.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) r.vectors[i * n + i] = 1.0;

  double norm = 0.0;
  for (double x : a) norm += x * x;
  norm = std::sqrt(norm);
  const double target = detail::kJacobiRelTol * norm;

  int sweep = 0;
  for (;; ++sweep) {
    if (detail::off_diagonal_norm(a, n) <= target) break;
    if (sweep >= detail::kJacobiMaxSweeps)
      throw ConvergenceFailure("Jacobi eigensolver did not converge in " +
                               std::to_string(detail::kJacobiMaxSweeps) + " sweeps");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        a[p * n + q] = a[q * n + p] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = r.vectors[k * n + p];
          const double vkq = r.vectors[k * n + q];
          r.vectors[k * n + p] = c * vkp - s * vkq;
          r.vectors[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  r.sweeps = sweep;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a[x * n + x] < a[y * n + y];
  });
  std::vector<double> vecs(n * n);
  r.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    r.values[k] = a[order[k] * n + order[k]];
    for (std::size_t i = 0; i < n; ++i) vecs[i * n + k] = r.vectors[i * n + order[k]];
  }
  r.vectors = std::move(vecs);
  return r;
}

/// Largest eigenvalue of a real symmetric matrix.
inline double symmetric_max_eigenvalue(std::vector<double> a, std::size_t n) {
  if (n == 0) return 0.0;
  return jacobi_eigen(std::move(a), n).values.back();
}

struct EigenResult {
  std::vector<double> values;              ///< ascending
  std::vector<std::vector<cplx>> vectors;  ///< orthonormal, matching values
};

namespace detail {

inline double inner_norm(std::span<const cplx> x) {
  double s = 0.0;
  for (const auto& z : x) s += std::norm(z);
  return std::sqrt(s);
}

}  // namespace detail

/// Spectrum of a hermitian matrix through the real symmetric embedding
/// [[Re M, -Im M], [Im M, Re M]], whose eigenvalues are those of M, each twice.
inline EigenResult hermitian_eigen(const ComplexMatrix& M) {
  const std::size_t d = M.dim();
  if (!M.is_hermitian(1e-12)) throw NotHermitian("matrix is not hermitian");
  EigenResult out;
  if (d == 0) return out;

  const std::size_t n = 2 * d;
  std::vector<double> S(n * n);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      // Symmetrize within tolerance: (M + M*) / 2.
      const cplx m = 0.5 * (M(i, j) + std::conj(M(j, i)));
      S[i * n + j] = m.real();
      S[(i + d) * n + (j + d)] = m.real();
      S[i * n + (j + d)] = -m.imag();
      S[(i + d) * n + j] = m.imag();
    }
  const SymmetricEigen se = jacobi_eigen(std::move(S), n);

  // Adjacent sorted eigenvalues come in pairs.
  out.values.resize(d);
  for (std::size_t k = 0; k < d; ++k)
    out.values[k] = 0.5 * (se.values[2 * k] + se.values[2 * k + 1]);

  // Each real eigenvector (u; w) maps to the complex eigenvector u + iw. The
  // complex span of a 2m-dimensional real eigenspace is m-dimensional, so pick
  // d vectors greedily by largest residual after complex Gram-Schmidt.
  std::vector<std::vector<cplx>> cand(n, std::vector<cplx>(d));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < d; ++i)
      cand[k][i] = cplx(se.vectors[i * n + k], se.vectors[(i + d) * n + k]);

  std::vector<bool> used(n, false);
  std::vector<std::pair<double, std::vector<cplx>>> picked;
  picked.reserve(d);
  for (std::size_t round = 0; round < d; ++round) {
    double best = -1.0;
    std::size_t best_k = 0;
    std::vector<cplx> best_vec;
    for (std::size_t k = 0; k < n; ++k) {
      if (used[k]) continue;
      std::vector<cplx> r = cand[k];
      for (const auto& [lam, q] : picked) {
        cplx proj = 0.0;
        for (std::size_t i = 0; i < d; ++i) proj += std::conj(q[i]) * r[i];
        for (std::size_t i = 0; i < d; ++i) r[i] -= proj * q[i];
      }
      const double nr = detail::inner_norm(r);
      if (nr > best + 1e-12) {
        best = nr;
        best_k = k;
        best_vec = std::move(r);
      }
    }
    used[best_k] = true;
    for (auto& z : best_vec) z /= best;
    picked.emplace_back(se.values[best_k], std::move(best_vec));
  }
  std::stable_sort(picked.begin(), picked.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  out.vectors.reserve(d);
  for (auto& [lam, v] : picked) out.vectors.push_back(std::move(v));
  return out;
}

/// LU with partial pivoting.
inline cplx complex_determinant(const ComplexMatrix& M) {
  const std::size_t d = M.dim();
  std::vector<cplx> a(M.entries().begin(), M.entries().end());
  cplx det = 1.0;
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    double best = std::abs(a[col * d + col]);
    for (std::size_t r = col + 1; r < d; ++r)
      if (std::abs(a[r * d + col]) > best) {
        best = std::abs(a[r * d + col]);
        piv = r;
      }
    if (best == 0.0) return 0.0;
    if (piv != col) {
      for (std::size_t j = 0; j < d; ++j) std::swap(a[col * d + j], a[piv * d + j]);
      det = -det;
    }
    const cplx pivot = a[col * d + col];
    det *= pivot;
    for (std::size_t r = col + 1; r < d; ++r) {
      const cplx f = a[r * d + col] / pivot;
      if (f == 0.0) continue;
      for (std::size_t j = col + 1; j < d; ++j) a[r * d + j] -= f * a[col * d + j];
    }
  }
  return det;
}

/// Largest-magnitude eigenvalue of a hermitian matrix (spectral norm).
inline double hermitian_spectral_norm(const ComplexMatrix& M) {
  if (M.dim() == 0) return 0.0;
  const auto e = hermitian_eigen(M);
  return std::max(std::abs(e.values.front()), std::abs(e.values.back()));
}

}  // namespace rangeshape

#endif
