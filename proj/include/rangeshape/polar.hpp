#ifndef RANGESHAPE_POLAR_HPP
#define RANGESHAPE_POLAR_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "geometry.hpp"
#include "linalg.hpp"
#include "numrange.hpp"
#include "parallel.hpp"

namespace rangeshape {

/// The half-plane {(x, y) : a x + b y <= 1}.
struct HalfPlane {
  double a = 0.0;
  double b = 0.0;
};

/// Raised when the polar of a polygon is unbounded (0 is not interior).
/// Carries the defining half-planes so the caller still has the polar set.
class UnboundedPolar : public Error {
 public:
  explicit UnboundedPolar(std::vector<HalfPlane> constraints)
      : Error("polar is unbounded: origin is not interior to the polygon"),
        constraints_(std::move(constraints)) {}
  const std::vector<HalfPlane>& constraints() const { return constraints_; }

 private:
  std::vector<HalfPlane> constraints_;
};

inline constexpr double kOriginInteriorRelTol = 1e-12;

/// Polar of a convex polygon. Each vertex (a, b) contributes the half-plane
/// a x + b y <= 1; the vertices of the polar are dual to the edges of P.
inline ConvexPolygon polygon_polar(const ConvexPolygon& P) {
  const double scale = std::max(P.diameter(), 1e-300);
  if (P.size() < 3 || P.origin_margin() <= kOriginInteriorRelTol * scale) {
    std::vector<HalfPlane> hp;
    hp.reserve(P.size());
    for (const auto& v : P.vertices()) hp.push_back({v.x, v.y});
    throw UnboundedPolar(std::move(hp));
  }
  std::vector<Point> w;
  w.reserve(P.size());
  for (std::size_t i = 0; i < P.size(); ++i) {
    const Point a = P[i];
    const Point e = P[(i + 1) % P.size()] - a;
    const Point normal{e.y, -e.x};
    const double c = dot(normal, a);
    w.push_back((1.0 / c) * normal);
  }
  return convex_hull(std::move(w));
}

inline ConvexPolygon double_polar(const ConvexPolygon& P) { return polygon_polar(polygon_polar(P)); }

struct LmiMembership {
  bool member = false;
  double margin = 0.0;  ///< smallest eigenvalue of I - xi H - eta K
};

inline constexpr double kLmiMemberTol = 1e-10;

/// Membership of z = xi + i eta in W(A)_* = {I - xi H - eta K is PSD}.
inline LmiMembership lmi_membership(const HermitianPair& pair, Point z) {
  const std::size_t d = pair.dim();
  ComplexMatrix M = ComplexMatrix::identity(d) - pair.pencil(z.x, z.y);
  const double margin = d == 0 ? 1.0 : hermitian_eigen(M).values.front();
  return {margin >= -kLmiMemberTol, margin};
}

struct PolarSample {
  double phi = 0.0;
  double radius = std::numeric_limits<double>::infinity();  ///< +inf along a recession direction
  std::optional<Point> point;                               ///< radius * (cos phi, sin phi) when finite

  bool finite() const { return std::isfinite(radius); }
};

struct PolarBoundary {
  std::vector<PolarSample> samples;
  std::optional<ConvexPolygon> polygon;  ///< present when every radius is finite

  bool bounded() const { return polygon.has_value(); }
};

inline constexpr double kPositiveEigenCutoff = 1e-12;

/// Radial boundary of the spectrahedron {I - xi H - eta K PSD}: along
/// direction phi the boundary sits at 1 / lambda_max(cos phi H + sin phi K).
/// The cutoff for a positive lambda_max is relative to max(||H||_F, ||K||_F).
inline PolarBoundary lmi_polar_boundary(const HermitianPair& pair, std::size_t n_angles,
                                        unsigned threads = 1) {
  if (n_angles < 3) throw InvalidInput("lmi_polar_boundary needs at least 3 angles");
  const double scale = std::max(pair.H.frobenius_norm(), pair.K.frobenius_norm());
  const double cutoff = kPositiveEigenCutoff * scale;
  PolarBoundary out;
  out.samples.resize(n_angles);
  parallel_for(n_angles, threads, [&](std::size_t j) {
    const double phi = sample_angle(j, n_angles);
    PolarSample s{phi, std::numeric_limits<double>::infinity(), std::nullopt};
    const double lmax = range_support(pair, phi);
    if (scale > 0.0 && lmax > cutoff) {
      s.radius = 1.0 / lmax;
      s.point = s.radius * direction(phi);
    }
    out.samples[j] = s;
  });
  bool all_finite = true;
  std::vector<Point> pts;
  pts.reserve(n_angles);
  for (const auto& s : out.samples) {
    if (!s.finite()) {
      all_finite = false;
      break;
    }
    pts.push_back(*s.point);
  }
  if (all_finite) out.polygon = convex_hull(std::move(pts));
  return out;
}

inline constexpr std::size_t kHausdorffDirections = 1440;

/// Hausdorff distance of two convex polygons as the sup-gap of their support
/// functions over equally spaced directions.
inline double hausdorff(const ConvexPolygon& P, const ConvexPolygon& Q,
                        std::size_t n_directions = kHausdorffDirections) {
  if (P.empty() || Q.empty()) throw InvalidInput("hausdorff of an empty polygon");
  double gap = 0.0;
  for (std::size_t j = 0; j < n_directions; ++j) {
    const Point u = direction(sample_angle(j, n_directions));
    gap = std::max(gap, std::abs(P.support(u) - Q.support(u)));
  }
  return gap;
}

}  // namespace rangeshape

#endif
