#ifndef RANGESHAPE_DECISION_HPP
#define RANGESHAPE_DECISION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "linalg.hpp"
#include "numrange.hpp"
#include "parallel.hpp"
#include "polar.hpp"
#include "poly.hpp"
#include "rigidity.hpp"

namespace rangeshape {

enum class Verdict { yes, no, inconclusive };
enum class VerdictReason { degree_exceeds_d, not_rigidly_convex, rz_pass, rz_inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    default: return "inconclusive";
  }
}

inline const char* to_string(VerdictReason r) {
  switch (r) {
    case VerdictReason::degree_exceeds_d: return "degree_exceeds_d";
    case VerdictReason::not_rigidly_convex: return "not_rigidly_convex";
    case VerdictReason::rz_pass: return "rz_pass";
    default: return "rz_inconclusive";
  }
}

inline const std::string kDegreeCaveat =
    "degree is that of the supplied or constructed defining polynomial, "
    "which is not checked for minimality";

/// Outcome of asking whether a set is the numerical range of a d x d matrix.
/// When a witness is present, W = W(witness.matrix() + translation I).
struct ShapeVerdict {
  Verdict verdict = Verdict::inconclusive;
  int dimension_bound = 0;
  VerdictReason reason = VerdictReason::rz_inconclusive;
  int degree = 0;
  BivariatePoly polynomial;
  std::optional<HermitianPair> witness;
  cplx translation = 0.0;
  std::optional<RzReport> rz;
  std::vector<std::string> caveats;
};

inline constexpr std::size_t kDefaultDirections = 180;

/// A set W containing 0 is W(A) for some d x d A iff its polar is rigidly
/// convex of degree <= d. q is the defining polynomial of the polar.
inline ShapeVerdict decide_polar_poly(const BivariatePoly& q_in, int d,
                                      std::size_t n_directions = kDefaultDirections,
                                      unsigned threads = 1) {
  if (d < 1) throw InvalidInput("dimension bound must be >= 1");
  if (!(q_in(0.0, 0.0) > 0.0)) throw NotAnchored("q(0,0) must be positive");
  const BivariatePoly q = q_in.normalized();
  ShapeVerdict out;
  out.dimension_bound = d;
  out.degree = q.degree();
  out.polynomial = q;
  auto rc = rigid_convexity_report(q, n_directions, threads);
  out.rz = std::move(rc.report);
  out.caveats.push_back(kSamplingCaveat);
  out.caveats.push_back(kDegreeCaveat);
  switch (rc.verdict) {
    case Rigidity::not_rigidly_convex:
      out.verdict = Verdict::no;
      out.reason = VerdictReason::not_rigidly_convex;
      return out;
    case Rigidity::inconclusive:
      out.verdict = Verdict::inconclusive;
      out.reason = VerdictReason::rz_inconclusive;
      return out;
    case Rigidity::rigidly_convex:
      break;
  }
  if (q.degree() > d) {
    out.verdict = Verdict::no;
    out.reason = VerdictReason::degree_exceeds_d;
  } else {
    out.verdict = Verdict::yes;
    out.reason = VerdictReason::rz_pass;
  }
  return out;
}

inline ShapeVerdict decide_polar_poly(const BivariatePoly& q, std::size_t d,
                                      std::size_t n_directions = kDefaultDirections,
                                      unsigned threads = 1) {
  return decide_polar_poly(q, static_cast<int>(d), n_directions, threads);
}

/// Defining polynomial of the polar of a polygon containing 0 in its
/// interior (or a centered point/segment): one affine factor 1 - a.xi - b.eta
/// per edge line of the polar, i.e. per vertex (a, b) of the polygon.
inline BivariatePoly polar_defining_poly(const ConvexPolygon& centered) {
  BivariatePoly q = BivariatePoly::constant(1.0);
  if (centered.size() < 3) {
    for (const auto& v : centered.vertices())
      if (norm(v) > 0.0) q = q * BivariatePoly::affine(1.0, -v.x, -v.y);
    return q;
  }
  const ConvexPolygon polar = polygon_polar(centered);
  for (std::size_t i = 0; i < polar.size(); ++i) {
    const Point w0 = polar[i], w1 = polar[(i + 1) % polar.size()];
    const double det = cross(w0, w1);
    const Point a{(w1.y - w0.y) / det, (w0.x - w1.x) / det};
    q = q * BivariatePoly::affine(1.0, -a.x, -a.y);
  }
  return q;
}

/// Polygons with more vertices than this are decided from the vertex count
/// alone: their polar polynomial is a product of affine forms, real-zero by
/// construction, and too high in degree for the power-sum test.
inline constexpr std::size_t kMaxPolygonPolyDegree = 24;

/// Is the convex polygon W the numerical range of some d x d matrix? W is
/// centered at its centroid, its polar is cut out by one line per vertex, and
/// the product of those affine forms is decided. Witness: the diagonal matrix
/// of centered vertices, translated back by the centroid.
inline ShapeVerdict decide_polygon(const ConvexPolygon& W_in, int d,
                                   std::size_t n_directions = kDefaultDirections,
                                   unsigned threads = 1) {
  if (W_in.empty()) throw InvalidInput("decide_polygon: empty polygon");
  if (d < 1) throw InvalidInput("dimension bound must be >= 1");
  const ConvexPolygon W = convex_hull(std::vector<Point>(W_in.vertices().begin(), W_in.vertices().end()));
  const Point c = W.centroid();
  const ConvexPolygon Wc = W.translated(Point{} - c);

  ShapeVerdict out;
  if (Wc.size() > kMaxPolygonPolyDegree) {
    out.dimension_bound = d;
    out.degree = static_cast<int>(Wc.size());
    if (out.degree > d) {
      out.verdict = Verdict::no;
      out.reason = VerdictReason::degree_exceeds_d;
    } else {
      out.verdict = Verdict::yes;
      out.reason = VerdictReason::rz_pass;
    }
    out.caveats = {"polar of a polygon with m vertices is cut out by m lines; "
                   "decided from the vertex count"};
  } else {
    out = decide_polar_poly(polar_defining_poly(Wc), d, n_directions, threads);
  }
  out.translation = to_complex(c);
  if (out.verdict == Verdict::yes) {
    std::vector<cplx> diag;
    for (const auto& v : Wc.vertices()) diag.push_back(to_complex(v));
    out.witness = hermitian_parts(ComplexMatrix::diagonal(diag));
  }
  return out;
}

/// Decides the numerical range of A itself: centers A at tr(A)/d and decides
/// the Kippenhahn polynomial of the centered matrix. The witness is A0.
inline ShapeVerdict decide_matrix(const ComplexMatrix& A, std::size_t n_directions = kDefaultDirections,
                                  unsigned threads = 1) {
  const Centering cen = center_matrix(A);
  const HermitianPair pair = hermitian_parts(cen.shifted);
  ShapeVerdict out = decide_polar_poly(kippenhahn_poly(pair), static_cast<int>(A.dim()), n_directions, threads);
  out.translation = cen.lambda;
  out.witness = pair;
  if (!cen.origin_interior)
    out.caveats.push_back("origin is not interior to the centered range; the polar is unbounded");
  return out;
}

/// Max relative coefficient deviation between det(I - xi H - eta K) and q,
/// both normalized to constant term 1.
inline double roundtrip_check(const HermitianPair& pair, const BivariatePoly& q) {
  const BivariatePoly p = kippenhahn_poly(pair);
  const double p0 = p.coeff(0, 0), q0 = q.coeff(0, 0);
  if (p0 == 0.0 || q0 == 0.0) return std::numeric_limits<double>::infinity();
  const int D = std::max(p.degree(), q.degree());
  double qmax = 0.0;
  for (int t = 0; t <= D; ++t)
    for (int k = 0; k <= t; ++k) qmax = std::max(qmax, std::abs(q.coeff(t - k, k) / q0));
  double dev = 0.0;
  for (int t = 0; t <= D; ++t)
    for (int k = 0; k <= t; ++k)
      dev = std::max(dev, std::abs(p.coeff(t - k, k) / p0 - q.coeff(t - k, k) / q0));
  return dev / qmax;
}

/// Hausdorff distance between W(A) and W(B) from their exact support
/// functions on n_directions equally spaced directions.
inline double range_distance(const ComplexMatrix& A, const ComplexMatrix& B,
                             std::size_t n_directions = kHausdorffDirections) {
  const HermitianPair pa = hermitian_parts(A), pb = hermitian_parts(B);
  double gap = 0.0;
  for (std::size_t j = 0; j < n_directions; ++j) {
    const double t = sample_angle(j, n_directions);
    gap = std::max(gap, std::abs(range_support(pa, t) - range_support(pb, t)));
  }
  return gap;
}

struct SymmetrizeOptions {
  std::size_t n_angles = 180;
  double tol = 1e-3;
  int max_restarts = 8;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// B = H' + i K' with H', K' real symmetric, hence B = B^T exactly.
struct RealizationResult {
  ComplexMatrix B;
  double achieved_distance = std::numeric_limits<double>::infinity();
  double diameter = 0.0;
  int restarts_used = 0;
  long evaluations = 0;
  bool converged = false;
};

namespace detail {

/// Support profile of the real symmetric pencil packed in x: the first
/// d(d+1)/2 entries are the upper triangle of H', the rest that of K'.
class SymmetricPencilFit {
 public:
  SymmetricPencilFit(std::size_t d, std::vector<double> thetas, std::vector<double> target)
      : d_(d), m_(d * (d + 1) / 2), thetas_(std::move(thetas)), target_(std::move(target)) {}

  std::size_t n_params() const { return 2 * m_; }
  std::size_t n_residuals() const { return thetas_.size(); }

  void residuals(const std::vector<double>& x, std::vector<double>& r) const {
    r.resize(thetas_.size());
    std::vector<double> M(d_ * d_);
    for (std::size_t a = 0; a < thetas_.size(); ++a) {
      const double c = std::cos(thetas_[a]), s = std::sin(thetas_[a]);
      std::size_t idx = 0;
      for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t j = i; j < d_; ++j, ++idx)
          M[i * d_ + j] = M[j * d_ + i] = c * x[idx] + s * x[m_ + idx];
      r[a] = symmetric_max_eigenvalue(M, d_) - target_[a];
    }
  }

  double objective(const std::vector<double>& x) const {
    std::vector<double> r;
    residuals(x, r);
    double f = 0.0;
    for (double v : r) f += v * v;
    return f;
  }

  ComplexMatrix to_matrix(const std::vector<double>& x) const {
    ComplexMatrix B(d_);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = i; j < d_; ++j, ++idx) B(i, j) = B(j, i) = cplx(x[idx], x[m_ + idx]);
    return B;
  }

  std::vector<double> from_pair(const ComplexMatrix& H, const ComplexMatrix& K) const {
    std::vector<double> x(2 * m_);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = i; j < d_; ++j, ++idx) {
        x[idx] = 0.5 * (H(i, j).real() + H(j, i).real());
        x[m_ + idx] = 0.5 * (K(i, j).real() + K(j, i).real());
      }
    return x;
  }

 private:
  std::size_t d_, m_;
  std::vector<double> thetas_, target_;
};

/// Nelder-Mead with standard coefficients. Returns the best vertex.
inline std::vector<double> nelder_mead(const SymmetricPencilFit& fit, std::vector<double> x0, double step,
                                       long max_evals, long& evals) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> f(n + 1);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
  for (std::size_t i = 0; i <= n; ++i) f[i] = fit.objective(simplex[i]);
  evals += static_cast<long>(n + 1);

  std::vector<std::size_t> order(n + 1);
  auto point = [&](const std::vector<double>& base, const std::vector<double>& toward, double t) {
    std::vector<double> p(n);
    for (std::size_t k = 0; k < n; ++k) p[k] = base[k] + t * (toward[k] - base[k]);
    return p;
  };
  for (long budget = max_evals; evals < budget;) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
    if (f[worst] - f[best] <= 1e-16 * (1.0 + f[best]) && f[best] < 1e-24) break;
    double spread = 0.0;
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t k = 0; k < n; ++k) spread = std::max(spread, std::abs(simplex[i][k] - simplex[best][k]));
    if (spread <= 1e-13 * (1.0 + step)) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);

    const auto xr = point(centroid, simplex[worst], -1.0);
    const double fr = fit.objective(xr);
    ++evals;
    if (fr < f[best]) {
      const auto xe = point(centroid, simplex[worst], -2.0);
      const double fe = fit.objective(xe);
      ++evals;
      if (fe < fr) {
        simplex[worst] = xe;
        f[worst] = fe;
      } else {
        simplex[worst] = xr;
        f[worst] = fr;
      }
    } else if (fr < f[second]) {
      simplex[worst] = xr;
      f[worst] = fr;
    } else {
      const bool outside = fr < f[worst];
      const auto xc = outside ? point(centroid, xr, 0.5) : point(centroid, simplex[worst], 0.5);
      const double fc = fit.objective(xc);
      ++evals;
      if (fc < std::min(fr, f[worst])) {
        simplex[worst] = xc;
        f[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          simplex[i] = point(simplex[best], simplex[i], 0.5);
          f[i] = fit.objective(simplex[i]);
        }
        evals += static_cast<long>(n);
      }
    }
  }
  const auto it = std::min_element(f.begin(), f.end());
  return simplex[static_cast<std::size_t>(it - f.begin())];
}

/// Levenberg-Marquardt refinement with a forward-difference Jacobian.
inline std::vector<double> levenberg_marquardt(const SymmetricPencilFit& fit, std::vector<double> x,
                                               int max_iter, long& evals) {
  const std::size_t n = fit.n_params(), m = fit.n_residuals();
  std::vector<double> r, rt;
  fit.residuals(x, r);
  ++evals;
  double cost = 0.0;
  for (double v : r) cost += v * v;
  double mu = 1e-3;
  std::vector<double> J(m * n);
  for (int it = 0; it < max_iter && cost > 1e-28; ++it) {
    for (std::size_t k = 0; k < n; ++k) {
      const double h = 1e-7 * std::max(1.0, std::abs(x[k]));
      std::vector<double> xp = x;
      xp[k] += h;
      fit.residuals(xp, rt);
      for (std::size_t a = 0; a < m; ++a) J[a * n + k] = (rt[a] - r[a]) / h;
    }
    evals += static_cast<long>(n);
    std::vector<double> JtJ(n * n, 0.0), g(n, 0.0);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t i = 0; i < n; ++i) {
        g[i] += J[a * n + i] * r[a];
        for (std::size_t j = 0; j < n; ++j) JtJ[i * n + j] += J[a * n + i] * J[a * n + j];
      }
    bool improved = false;
    for (int tries = 0; tries < 12 && !improved; ++tries) {
      // Solve (JtJ + mu diag) dx = -g via the symmetric eigendecomposition.
      std::vector<double> Mx(JtJ);
      for (std::size_t i = 0; i < n; ++i) Mx[i * n + i] += mu * (1.0 + JtJ[i * n + i]);
      const SymmetricEigen e = jacobi_eigen(Mx, n);
      std::vector<double> dx(n, 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        if (e.values[k] <= 1e-300) continue;
        double proj = 0.0;
        for (std::size_t i = 0; i < n; ++i) proj += e.vectors[i * n + k] * g[i];
        for (std::size_t i = 0; i < n; ++i) dx[i] -= e.vectors[i * n + k] * proj / e.values[k];
      }
      std::vector<double> xn(x);
      for (std::size_t i = 0; i < n; ++i) xn[i] += dx[i];
      fit.residuals(xn, rt);
      ++evals;
      double cn = 0.0;
      for (double v : rt) cn += v * v;
      if (cn < cost) {
        x = std::move(xn);
        r = rt;
        const double rel = (cost - cn) / std::max(cost, 1e-300);
        cost = cn;
        mu = std::max(mu * 0.3, 1e-12);
        improved = true;
        if (rel < 1e-12) return x;
      } else {
        mu *= 10.0;
      }
    }
    if (!improved) break;
  }
  return x;
}

}  // namespace detail

/// Searches for a complex symmetric B of the same size with W(B) = W(A) by
/// fitting the support function of the real symmetric pencil (H', K') to that
/// of A. Each attempt runs Nelder-Mead then a Levenberg-Marquardt polish;
/// attempt 0 starts from the real parts of H and K, later attempts from seeded
/// perturbations of it. The lowest-index converged attempt wins; otherwise the
/// best by (distance, index). Never throws on non-convergence.
inline RealizationResult symmetrize(const ComplexMatrix& A, const SymmetrizeOptions& opts = {}) {
  const std::size_t d = A.dim();
  if (d == 0) throw InvalidMatrix("empty matrix");
  if (opts.n_angles < 3) throw InvalidInput("symmetrize needs at least 3 angles");
  if (!(opts.tol > 0.0)) throw InvalidInput("tolerance must be positive");

  RealizationResult out;
  const SupportProfile prof = numerical_range(A, kDefaultRangeAngles);
  out.diameter = prof.polygon.diameter();
  if (A.is_symmetric(0.0)) {
    out.B = A;
    out.achieved_distance = 0.0;
    out.converged = true;
    return out;
  }
  const double target_dist = opts.tol * out.diameter;

  const HermitianPair pair = hermitian_parts(A);
  std::vector<double> thetas(opts.n_angles), target(opts.n_angles);
  for (std::size_t a = 0; a < opts.n_angles; ++a) {
    thetas[a] = sample_angle(a, opts.n_angles);
    target[a] = range_support(pair, thetas[a]);
  }
  const detail::SymmetricPencilFit fit(d, thetas, target);
  const std::vector<double> x_init = fit.from_pair(pair.H, pair.K);
  const double scale = std::max(0.5 * out.diameter, 1e-12);
  const long nm_budget = 400 * static_cast<long>(fit.n_params());

  struct Attempt {
    ComplexMatrix B;
    double distance = std::numeric_limits<double>::infinity();
    long evals = 0;
  };
  const int attempts = std::max(opts.max_restarts, 0) + 1;
  std::vector<Attempt> results(static_cast<std::size_t>(attempts));
  auto run = [&](std::size_t idx) {
    std::vector<double> x = x_init;
    if (idx > 0) {
      std::mt19937_64 rng(opts.seed * 0x9E3779B97F4A7C15ULL + idx);
      std::normal_distribution<double> nd(0.0, 0.5 * scale);
      for (auto& v : x) v += nd(rng);
    }
    Attempt at;
    x = detail::nelder_mead(fit, x, 0.2 * scale, nm_budget, at.evals);
    x = detail::levenberg_marquardt(fit, x, 200, at.evals);
    at.B = fit.to_matrix(x);
    at.distance = range_distance(A, at.B);
    results[idx] = std::move(at);
  };

  const unsigned workers = resolve_threads(opts.threads);
  int done = 0;
  std::optional<int> winner;
  while (done < attempts && !winner) {
    const int batch = std::min<int>(static_cast<int>(workers), attempts - done);
    parallel_for(static_cast<std::size_t>(batch), workers,
                 [&](std::size_t i) { run(static_cast<std::size_t>(done) + i); });
    for (int i = done; i < done + batch && !winner; ++i) {
      // attempts after the winner are not counted, so the total matches a serial run
      out.evaluations += results[static_cast<std::size_t>(i)].evals;
      if (results[static_cast<std::size_t>(i)].distance <= target_dist) winner = i;
    }
    done += batch;
  }
  int pick = 0;
  if (winner) {
    pick = *winner;
    out.restarts_used = *winner + 1;
    out.converged = true;
  } else {
    for (int i = 1; i < attempts; ++i)
      if (results[static_cast<std::size_t>(i)].distance < results[static_cast<std::size_t>(pick)].distance) pick = i;
    out.restarts_used = attempts;
  }
  out.B = results[static_cast<std::size_t>(pick)].B;
  out.achieved_distance = results[static_cast<std::size_t>(pick)].distance;
  return out;
}

}  // namespace rangeshape

#endif
