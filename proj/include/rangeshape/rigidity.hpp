#ifndef RANGESHAPE_RIGIDITY_HPP
#define RANGESHAPE_RIGIDITY_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "linalg.hpp"
#include "parallel.hpp"
#include "poly.hpp"

namespace rangeshape {

namespace detail {

/// Householder QR least squares for a row-major m x n system (m >= n).
/// Returns the solution and writes the residual 2-norm.
inline std::vector<double> least_squares(std::vector<double> A, std::vector<double> y,
                                         std::size_t m, std::size_t n, double& residual) {
  for (std::size_t k = 0; k < n; ++k) {
    double nrm = 0.0;
    for (std::size_t i = k; i < m; ++i) nrm += A[i * n + k] * A[i * n + k];
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) throw IllConditionedFit("rank-deficient interpolation system");
    const double alpha = A[k * n + k] > 0.0 ? -nrm : nrm;
    std::vector<double> v(m - k);
    for (std::size_t i = k; i < m; ++i) v[i - k] = A[i * n + k];
    v[0] -= alpha;
    double vv = 0.0;
    for (double x : v) vv += x * x;
    if (vv == 0.0) continue;
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += v[i - k] * A[i * n + j];
      s *= 2.0 / vv;
      for (std::size_t i = k; i < m; ++i) A[i * n + j] -= s * v[i - k];
    }
    double s = 0.0;
    for (std::size_t i = k; i < m; ++i) s += v[i - k] * y[i];
    s *= 2.0 / vv;
    for (std::size_t i = k; i < m; ++i) y[i] -= s * v[i - k];
  }
  double rmax = 0.0;
  for (std::size_t k = 0; k < n; ++k) rmax = std::max(rmax, std::abs(A[k * n + k]));
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    if (std::abs(A[k * n + k]) <= 1e-13 * rmax)
      throw IllConditionedFit("rank-deficient interpolation system");
    double s = y[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= A[k * n + j] * x[j];
    x[k] = s / A[k * n + k];
  }
  double r = 0.0;
  for (std::size_t i = n; i < m; ++i) r += y[i] * y[i];
  residual = std::sqrt(r);
  return x;
}

}  // namespace detail

inline constexpr double kFitRelTol = 1e-8;

/// p(xi, eta) = det(I - xi H - eta K), recovered by least-squares
/// interpolation of sampled determinants on concentric circles of radius
/// rho * f, rho = 1 / (2 max(||H||, ||K||)). Throws IllConditionedFit when the
/// relative fit residual exceeds 1e-8.
inline BivariatePoly kippenhahn_poly(const HermitianPair& pair) {
  const std::size_t d = pair.dim();
  if (d == 0) return BivariatePoly::constant(1.0);
  const double s = std::max(hermitian_spectral_norm(pair.H), hermitian_spectral_norm(pair.K));
  if (s == 0.0) return BivariatePoly::constant(1.0);
  const double rho = 1.0 / (2.0 * s + 1e-30);

  const int D = static_cast<int>(d);
  const std::size_t N = d + 1 == 0 ? 0 : (d + 1) * (d + 2) / 2;
  // A degree-D polynomial can vanish on D/2 circles, so use more than that.
  const std::size_t n_circles = std::max<std::size_t>(3, d / 2 + 1);
  std::vector<double> factors;
  if (n_circles == 3) {
    factors = {0.5, 1.0, 1.5};
  } else {
    for (std::size_t c = 0; c < n_circles; ++c)
      factors.push_back(0.5 + static_cast<double>(c) / static_cast<double>(n_circles - 1));
  }
  const std::size_t per_circle =
      std::max<std::size_t>(2 * d + 2, (2 * N + n_circles - 1) / n_circles);
  const std::size_t m = per_circle * n_circles;

  const auto I = ComplexMatrix::identity(d);
  std::vector<double> V(m * N), y(m);
  std::size_t row = 0;
  for (std::size_t c = 0; c < n_circles; ++c) {
    const double offset = 2.0 * std::numbers::pi * static_cast<double>(c) /
                          static_cast<double>(per_circle * n_circles);
    for (std::size_t i = 0; i < per_circle; ++i, ++row) {
      const double ang = offset + sample_angle(i, per_circle);
      // Scaled coordinates (u, v) = (xi, eta) / rho.
      const double u = factors[c] * std::cos(ang), v = factors[c] * std::sin(ang);
      y[row] = complex_determinant(I - pair.pencil(rho * u, rho * v)).real();
      for (int t = 0; t <= D; ++t)
        for (int k = 0; k <= t; ++k)
          V[row * N + BivariatePoly::index(t - k, k)] = std::pow(u, t - k) * std::pow(v, k);
    }
  }
  double ynorm = 0.0;
  for (double x : y) ynorm += x * x;
  ynorm = std::sqrt(ynorm);
  double residual = 0.0;
  const std::vector<double> cs = detail::least_squares(V, y, m, N, residual);
  if (!(residual <= kFitRelTol * ynorm))
    throw IllConditionedFit("determinant fit residual " + std::to_string(residual / ynorm) +
                            " exceeds tolerance; rescale the matrix");

  BivariatePoly p(D);
  const double c00 = cs[0];
  for (int t = 0; t <= D; ++t) {
    const double unscale = std::pow(rho, -t) / c00;
    for (int k = 0; k <= t; ++k)
      p.set(t - k, k, cs[BivariatePoly::index(t - k, k)] * unscale);
  }
  p.set(0, 0, 1.0);
  return p.normalized();
}

inline constexpr double kDegreeDropRelTol = 1e-9;

/// Coefficients of t -> q(t cos phi, t sin phi), with negligible leading
/// coefficients dropped (each drop is a root at infinity).
inline std::vector<double> restrict_to_line(const BivariatePoly& q, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  const int D = q.degree();
  std::vector<double> a(static_cast<std::size_t>(D + 1), 0.0);
  for (int t = 0; t <= D; ++t) {
    double sum = 0.0;
    for (int k = 0; k <= t; ++k) sum += q.coeff(t - k, k) * std::pow(c, t - k) * std::pow(s, k);
    a[static_cast<std::size_t>(t)] = sum;
  }
  double mx = 0.0;
  for (double x : a) mx = std::max(mx, std::abs(x));
  while (a.size() > 1 && std::abs(a.back()) <= kDegreeDropRelTol * mx) a.pop_back();
  return a;
}

inline constexpr double kPsdTol = 1e-8;

struct RealRootedness {
  bool real_rooted = true;
  double margin = 1.0;  ///< smallest / largest eigenvalue of the Hankel matrix
};

namespace detail {

/// Smallest / largest eigenvalue of the Hankel matrix of root power sums,
/// after rescaling the variable by the Fujiwara bound so all roots lie in the
/// unit disk. Expects a[0] != 0 and a.back() != 0.
inline double hankel_margin(const std::vector<long double>& a) {
  const std::size_t n = a.size() - 1;
  if (n <= 1) return 1.0;
  std::vector<double> ad(a.begin(), a.end());
  const double B = root_modulus_bound(ad);
  if (!std::isfinite(B) || B == 0.0) throw ScaleError("all_roots_real: root bound overflow");

  // Monic, rescaled: t^n + c1 t^(n-1) + ... + cn with t = B tau.
  std::vector<long double> c(n + 1);
  for (std::size_t i = 1; i <= n; ++i)
    c[i] = a[n - i] / a[n] / std::pow(static_cast<long double>(B), static_cast<long double>(i));

  // Newton's identities.
  std::vector<long double> ps(2 * n - 1, 0.0L);
  ps[0] = static_cast<long double>(n);
  for (std::size_t k = 1; k < ps.size(); ++k) {
    long double acc = 0.0L;
    for (std::size_t i = 1; i <= std::min(k, n); ++i) {
      if (i < k)
        acc += c[i] * ps[k - i];
      else
        acc += static_cast<long double>(k) * c[i];
    }
    ps[k] = -acc;
    if (!std::isfinite(static_cast<double>(ps[k])))
      throw ScaleError("all_roots_real: power sums overflow");
  }

  std::vector<double> hankel(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) hankel[i * n + j] = static_cast<double>(ps[i + j]);
  const SymmetricEigen e = jacobi_eigen(std::move(hankel), n);
  return e.values.front() / e.values.back();
}

/// Coefficients of t^n a(s + 1/t): roots r become 1 / (r - s).
inline std::vector<long double> mobius_frame(const std::vector<long double>& a, long double s) {
  std::vector<long double> b(a);
  const std::size_t n = b.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t k = n - 1; k > i; --k) b[k - 1] += s * b[k];
  std::reverse(b.begin(), b.end());
  while (b.size() > 1 && b.back() == 0.0L) b.pop_back();
  return b;
}

}  // namespace detail

/// Hermite criterion: a real polynomial has only real roots iff the Hankel
/// matrix of its root power sums is positive semidefinite. The test is
/// invariant under real Moebius changes of variable, so it is evaluated in
/// the original variable, the reversed one, and one frame centered on each
/// clearly non-real root estimate; the margin is the smallest of these.
inline RealRootedness all_roots_real(std::span<const double> coeffs) {
  std::vector<double> a(coeffs.begin(), coeffs.end());
  while (!a.empty() && a.back() == 0.0) a.pop_back();
  if (a.empty()) throw InvalidInput("all_roots_real: zero polynomial");
  for (double x : a)
    if (!std::isfinite(x)) throw ScaleError("all_roots_real: non-finite coefficient");
  // Roots at 0 are real.
  const auto first = std::find_if(a.begin(), a.end(), [](double x) { return x != 0.0; });
  a.erase(a.begin(), first);
  const std::size_t n = a.size() - 1;
  if (n <= 1) return {true, 1.0};

  const std::vector<long double> al(a.begin(), a.end());
  double margin = detail::hankel_margin(al);
  margin = std::min(margin, detail::hankel_margin({al.rbegin(), al.rend()}));

  const auto roots = polynomial_roots(a);
  for (const auto& z : roots) {
    if (z.imag() <= 0.0) continue;
    // A cluster of m roots is only resolved to about eps^(1/m); pairs inside
    // that radius are indistinguishable from a multiple real root.
    std::size_t m = 0;
    for (const auto& w : roots)
      if (std::abs(w - z) <= 4.0 * z.imag()) ++m;
    const double resolved = std::max(1e-3, std::pow(1e-13, 1.0 / static_cast<double>(m)));
    if (z.imag() < resolved * std::abs(z)) continue;
    const auto b = detail::mobius_frame(al, static_cast<long double>(z.real()));
    if (b.size() > 2) margin = std::min(margin, detail::hankel_margin(b));
  }
  return {margin >= -kPsdTol, margin};
}

struct RzFailure {
  double phi = 0.0;
  std::complex<double> root;  ///< mu with q(mu cos phi, mu sin phi) = 0, non-real
  double margin = 0.0;
};

enum class RzVerdict { pass, fail };

inline const char* to_string(RzVerdict v) { return v == RzVerdict::pass ? "pass" : "fail"; }

struct RzReport {
  std::size_t directions_tested = 0;
  double worst_margin = 1.0;
  double worst_phi = 0.0;
  std::vector<RzFailure> failures;
  RzVerdict verdict = RzVerdict::pass;
  std::string caveat;
};

inline const std::string kSamplingCaveat =
    "real-zero property checked on finitely many sampled directions; "
    "a pass is evidence, not a proof for all directions";

namespace detail {

inline std::complex<double> most_nonreal_root(std::span<const double> a) {
  std::complex<double> best = 0.0;
  double score = -1.0;
  for (const auto& z : polynomial_roots(a)) {
    const double sc = std::abs(z.imag()) / std::max(std::abs(z), 1e-300);
    if (sc > score) {
      score = sc;
      best = z;
    }
  }
  return best;
}

}  // namespace detail

/// Real-zero test of q along n_directions lines through the origin,
/// phi = pi j / n (a line and its reverse share their roots up to sign).
inline RzReport rz_test(const BivariatePoly& q, std::size_t n_directions, unsigned threads = 1) {
  if (n_directions < 8) throw InvalidInput("rz_test needs at least 8 directions");
  if (!(q(0.0, 0.0) > 0.0)) throw NotAnchored("q(0,0) must be positive");
  std::vector<RealRootedness> res(n_directions);
  std::vector<std::vector<double>> lines(n_directions);
  parallel_for(n_directions, threads, [&](std::size_t j) {
    lines[j] = restrict_to_line(q, sample_angle(j, n_directions, std::numbers::pi));
    res[j] = all_roots_real(lines[j]);
  });

  RzReport rep;
  rep.directions_tested = n_directions;
  rep.caveat = kSamplingCaveat;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n_directions; ++j) {
    const double phi = sample_angle(j, n_directions, std::numbers::pi);
    if (res[j].margin < rep.worst_margin) {
      rep.worst_margin = res[j].margin;
      rep.worst_phi = phi;
    }
    if (!res[j].real_rooted)
      rep.failures.push_back({phi, detail::most_nonreal_root(lines[j]), res[j].margin});
  }
  rep.verdict = rep.failures.empty() ? RzVerdict::pass : RzVerdict::fail;
  return rep;
}

enum class Rigidity { rigidly_convex, not_rigidly_convex, inconclusive };

inline const char* to_string(Rigidity r) {
  switch (r) {
    case Rigidity::rigidly_convex: return "rigidly_convex";
    case Rigidity::not_rigidly_convex: return "not_rigidly_convex";
    default: return "inconclusive";
  }
}

struct RigidityResult {
  Rigidity verdict = Rigidity::inconclusive;
  std::optional<RzReport> report;  ///< absent when q is not anchored at 0
};

/// Three-valued rigid convexity test. Margins in (-10 tol, -tol) are ambiguous
/// and give `inconclusive`, as does q(0,0) <= 0.
inline RigidityResult rigid_convexity_report(const BivariatePoly& q, std::size_t n_directions,
                                             unsigned threads = 1) {
  if (q.is_zero()) throw InvalidInput("rigid_convexity: zero polynomial");
  if (!(q(0.0, 0.0) > 0.0)) return {Rigidity::inconclusive, std::nullopt};
  RzReport rep = rz_test(q, n_directions, threads);
  Rigidity v = Rigidity::inconclusive;
  if (rep.verdict == RzVerdict::pass) {
    v = Rigidity::rigidly_convex;
  } else {
    for (const auto& f : rep.failures)
      if (f.margin < -10.0 * kPsdTol) v = Rigidity::not_rigidly_convex;
  }
  return {v, std::move(rep)};
}

inline Rigidity rigid_convexity(const BivariatePoly& q, std::size_t n_directions, unsigned threads = 1) {
  return rigid_convexity_report(q, n_directions, threads).verdict;
}

}  // namespace rangeshape

#endif
