#ifndef RANGESHAPE_NUMRANGE_HPP
#define RANGESHAPE_NUMRANGE_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "geometry.hpp"
#include "linalg.hpp"
#include "parallel.hpp"

namespace rangeshape {

inline constexpr std::size_t kDefaultRangeAngles = 720;

struct SupportSample {
  double theta = 0.0;
  double h = 0.0;  ///< support value max{x cos t + y sin t : (x, y) in W(A)}
  Point point;     ///< boundary point of W(A) attaining h
};

/// Sampled support function of W(A) together with the inscribed polygon
/// spanned by the attained boundary points.
struct SupportProfile {
  std::vector<SupportSample> samples;
  std::size_t matrix_dim = 0;
  ConvexPolygon polygon;

  double min_support() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) m = std::min(m, s.h);
    return m;
  }
};

inline Point to_point(cplx z) { return {z.real(), z.imag()}; }
inline cplx to_complex(Point p) { return {p.x, p.y}; }

/// The support value of W(A) in direction theta is the top eigenvalue of
/// cos(theta) H + sin(theta) K; its eigenvector v gives the boundary point
/// (<Hv,v>, <Kv,v>).
inline SupportSample support_point(const HermitianPair& pair, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  SupportSample out{theta, 0.0, {}};
  if (pair.dim() == 0) return out;
  const EigenResult e = hermitian_eigen(pair.pencil(c, s));
  const auto& v = e.vectors.back();
  const auto Hv = pair.H.apply(v);
  const auto Kv = pair.K.apply(v);
  cplx xh = 0.0, xk = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    xh += std::conj(v[i]) * Hv[i];
    xk += std::conj(v[i]) * Kv[i];
  }
  out.h = e.values.back();
  out.point = {xh.real(), xk.real()};
  return out;
}

/// Support profile of W(A) at n_angles equally spaced directions in [0, 2pi).
inline SupportProfile numerical_range(const ComplexMatrix& A,
                                      std::size_t n_angles = kDefaultRangeAngles,
                                      unsigned threads = 1) {
  if (n_angles < 3) throw InvalidInput("numerical_range needs at least 3 angles");
  const HermitianPair pair = hermitian_parts(A);
  SupportProfile prof;
  prof.matrix_dim = A.dim();
  prof.samples.resize(n_angles);
  parallel_for(n_angles, threads, [&](std::size_t j) {
    prof.samples[j] = support_point(pair, sample_angle(j, n_angles));
  });
  std::vector<Point> pts;
  pts.reserve(n_angles);
  for (const auto& s : prof.samples) pts.push_back(s.point);
  prof.polygon = convex_hull(std::move(pts));
  return prof;
}

/// Exact support function of W(A) at a single direction.
inline double range_support(const HermitianPair& pair, double theta) {
  if (pair.dim() == 0) return 0.0;
  return hermitian_eigen(pair.pencil(std::cos(theta), std::sin(theta))).values.back();
}

struct Centering {
  cplx lambda;                   ///< tr(A) / d
  ComplexMatrix shifted;         ///< A - lambda I
  double min_support = 0.0;      ///< min over sampled directions of h_{W(A0)}
  bool origin_interior = false;  ///< min_support > 0, i.e. 0 is interior to W(A0)
};

/// Shifts A by tr(A)/d. Whether 0 ends up interior to W(A - lambda I) is
/// checked on n_angles sampled directions rather than assumed.
inline Centering center_matrix(const ComplexMatrix& A, std::size_t n_angles = kDefaultRangeAngles) {
  const std::size_t d = A.dim();
  if (d == 0) throw InvalidMatrix("empty matrix");
  Centering c;
  c.lambda = A.trace() / static_cast<double>(d);
  c.shifted = A - c.lambda * ComplexMatrix::identity(d);
  const HermitianPair pair = hermitian_parts(c.shifted);
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n_angles; ++j)
    m = std::min(m, range_support(pair, sample_angle(j, n_angles)));
  c.min_support = m;
  const double scale = std::max(c.shifted.frobenius_norm(), 1e-300);
  c.origin_interior = m > 1e-12 * scale;
  return c;
}

/// Degenerate (empty-interior) ranges: A = alpha R + beta I with R hermitian.
struct DegeneracyReport {
  bool degenerate = false;
  cplx alpha = 0.0;
  cplx beta = 0.0;
  ComplexMatrix R;  ///< hermitian, unit Frobenius norm (zero when A is scalar)
  std::optional<std::pair<Point, Point>> segment_endpoints;
  double gram_min_eigenvalue = 0.0;  ///< relative to the Gram trace
  double residual = 0.0;             ///< ||A - (alpha R + beta I)||_F / ||A||_F
};

inline constexpr double kDegeneracyRelTol = 1e-10;

namespace detail {

inline double trace_product(const ComplexMatrix& X, const ComplexMatrix& Y) {
  // tr(X Y*) for hermitian X, Y is real.
  double s = 0.0;
  for (std::size_t i = 0; i < X.dim(); ++i)
    for (std::size_t j = 0; j < X.dim(); ++j) s += (X(i, j) * std::conj(Y(i, j))).real();
  return s;
}

}  // namespace detail

/// Tests whether {I, H, K} spans at most two dimensions, via the Gram matrix of
/// the traceless parts of H and K (I is orthogonal to both).
inline DegeneracyReport degeneracy_report(const ComplexMatrix& A) {
  const std::size_t d = A.dim();
  if (d == 0) throw InvalidMatrix("empty matrix");
  const auto I = ComplexMatrix::identity(d);
  const auto pair = hermitian_parts(A);
  const double inv_d = 1.0 / static_cast<double>(d);
  const ComplexMatrix H0 = pair.H - (pair.H.trace().real() * inv_d) * I;
  const ComplexMatrix K0 = pair.K - (pair.K.trace().real() * inv_d) * I;

  const double g11 = detail::trace_product(H0, H0);
  const double g22 = detail::trace_product(K0, K0);
  const double g12 = detail::trace_product(H0, K0);
  const double tr = g11 + g22;
  const double disc = std::hypot(0.5 * (g11 - g22), g12);
  const double lmin = 0.5 * tr - disc;

  DegeneracyReport rep;
  rep.beta = A.trace() * inv_d;
  rep.R = ComplexMatrix(d);
  if (tr <= 0.0) {
    rep.degenerate = true;
    rep.gram_min_eigenvalue = 0.0;
    const Point b = to_point(rep.beta);
    rep.segment_endpoints = std::make_pair(b, b);
    return rep;
  }
  rep.gram_min_eigenvalue = lmin / tr;
  rep.degenerate = rep.gram_min_eigenvalue <= kDegeneracyRelTol;
  if (!rep.degenerate) return rep;

  // Dominant direction of the 2x2 Gram matrix.
  double a = g12, b = 0.5 * tr + disc - g11;
  if (std::hypot(a, b) <= 1e-300 * tr) {
    a = g11 >= g22 ? 1.0 : 0.0;
    b = g11 >= g22 ? 0.0 : 1.0;
  }
  ComplexMatrix X = a * H0 + b * K0;
  rep.R = (1.0 / X.frobenius_norm()) * X;
  double sh = detail::trace_product(H0, rep.R);
  double sk = detail::trace_product(K0, rep.R);
  // Gauge: unit-norm R, sign chosen so alpha lies in the right half-plane
  // (upper half of the imaginary axis when purely imaginary).
  const double amag = std::hypot(sh, sk);
  if (sh < -1e-14 * amag || (std::abs(sh) <= 1e-14 * amag && sk < 0.0)) {
    rep.R *= -1.0;
    sh = -sh;
    sk = -sk;
  }
  rep.alpha = cplx(sh, sk);

  const auto spec = hermitian_eigen(rep.R);
  rep.segment_endpoints = std::make_pair(to_point(rep.alpha * spec.values.front() + rep.beta),
                                         to_point(rep.alpha * spec.values.back() + rep.beta));
  const ComplexMatrix recon = rep.alpha * rep.R + rep.beta * I;
  rep.residual = (A - recon).frobenius_norm() / std::max(A.frobenius_norm(), 1e-300);
  return rep;
}

}  // namespace rangeshape

#endif
