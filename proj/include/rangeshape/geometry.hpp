#ifndef RANGESHAPE_GEOMETRY_HPP
#define RANGESHAPE_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "errors.hpp"

namespace rangeshape {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point, Point) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline Point direction(double theta) { return {std::cos(theta), std::sin(theta)}; }

/// Angle of sample j out of n equally spaced angles covering [0, span).
inline double sample_angle(std::size_t j, std::size_t n, double span = 2.0 * std::numbers::pi) {
  return span * static_cast<double>(j) / static_cast<double>(n);
}

inline double segment_distance(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

/// Convex polygon with counterclockwise vertices. One vertex is a point,
/// two vertices a segment.
class ConvexPolygon {
 public:
  ConvexPolygon() = default;

  /// Takes vertices as given; callers must supply a convex CCW ordering.
  /// Use convex_hull() for arbitrary point sets.
  explicit ConvexPolygon(std::vector<Point> ccw_vertices) : v_(std::move(ccw_vertices)) {}

  std::span<const Point> vertices() const { return v_; }
  std::size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }
  const Point& operator[](std::size_t i) const { return v_[i]; }

  double support(double theta) const { return support(direction(theta)); }

  double support(Point u) const {
    double h = -std::numeric_limits<double>::infinity();
    for (const auto& p : v_) h = std::max(h, dot(p, u));
    return h;
  }

  double diameter() const {
    double d = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i)
      for (std::size_t j = i + 1; j < v_.size(); ++j) d = std::max(d, norm(v_[i] - v_[j]));
    return d;
  }

  double area() const {
    double a = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) a += cross(v_[i], v_[(i + 1) % v_.size()]);
    return 0.5 * a;
  }

  /// Area centroid; vertex mean for point/segment polygons.
  Point centroid() const {
    if (v_.empty()) throw InvalidInput("centroid of empty polygon");
    const double a = area();
    if (v_.size() < 3 || std::abs(a) <= 1e-300) {
      Point c;
      for (const auto& p : v_) c = c + p;
      return (1.0 / static_cast<double>(v_.size())) * c;
    }
    // Shift to the first vertex to limit cancellation.
    const Point o = v_[0];
    double cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) {
      const Point p = v_[i] - o;
      const Point q = v_[(i + 1) % v_.size()] - o;
      const double w = cross(p, q);
      cx += (p.x + q.x) * w;
      cy += (p.y + q.y) * w;
    }
    return o + Point{cx / (6.0 * a), cy / (6.0 * a)};
  }

  /// Euclidean distance from p to the polygon (0 inside).
  double distance(Point p) const {
    if (v_.empty()) return std::numeric_limits<double>::infinity();
    if (v_.size() == 1) return norm(p - v_[0]);
    if (v_.size() >= 3) {
      bool inside = true;
      for (std::size_t i = 0; i < v_.size() && inside; ++i)
        if (cross(v_[(i + 1) % v_.size()] - v_[i], p - v_[i]) < 0.0) inside = false;
      if (inside) return 0.0;
    }
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v_.size(); ++i)
      d = std::min(d, segment_distance(p, v_[i], v_[(i + 1) % v_.size()]));
    return d;
  }

  bool contains(Point p, double tol = 0.0) const { return distance(p) <= tol; }

  /// Signed margin of the origin: min over edges of the distance from 0 to the
  /// edge line, positive when 0 is strictly inside. -inf for fewer than 3 vertices.
  double origin_margin() const {
    if (v_.size() < 3) return -std::numeric_limits<double>::infinity();
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v_.size(); ++i) {
      const Point a = v_[i];
      const Point e = v_[(i + 1) % v_.size()] - a;
      m = std::min(m, cross(e, Point{} - a) / norm(e));
    }
    return m;
  }

  ConvexPolygon translated(Point t) const {
    std::vector<Point> w(v_);
    for (auto& p : w) p = p + t;
    return ConvexPolygon(std::move(w));
  }

 private:
  std::vector<Point> v_;
};

/// Andrew's monotone chain. Drops duplicates and collinear points, using a
/// tolerance relative to the point-set scale. Output is counterclockwise,
/// starting at the lowest-leftmost vertex.
inline ConvexPolygon convex_hull(std::vector<Point> pts, double rel_tol = 1e-12) {
  if (pts.empty()) return {};
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  std::sort(pts.begin(), pts.end(),
            [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  const double dup = rel_tol * std::max(scale, 1e-300);
  std::vector<Point> uniq;
  for (const auto& p : pts) {
    bool seen = false;
    for (auto it = uniq.rbegin(); it != uniq.rend() && p.x - it->x <= dup; ++it)
      if (norm(p - *it) <= dup) {
        seen = true;
        break;
      }
    if (!seen) uniq.push_back(p);
  }
  if (uniq.size() < 3) {
    if (uniq.size() == 2 && norm(uniq[1] - uniq[0]) <= dup) uniq.pop_back();
    return ConvexPolygon(std::move(uniq));
  }

  // Collinearity test scaled by the edge lengths involved.
  auto turns_left = [&](Point o, Point a, Point b) {
    const Point oa = a - o, ob = b - o;
    return cross(oa, ob) > rel_tol * norm(oa) * norm(ob) + 1e-300;
  };
  std::vector<Point> hull(2 * uniq.size());
  std::size_t k = 0;
  for (const auto& p : uniq) {
    while (k >= 2 && !turns_left(hull[k - 2], hull[k - 1], p)) --k;
    hull[k++] = p;
  }
  for (std::size_t i = uniq.size() - 1, t = k + 1; i-- > 0;) {
    const Point p = uniq[i];
    while (k >= t && !turns_left(hull[k - 2], hull[k - 1], p)) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  if (hull.size() < 2) hull = {uniq.front(), uniq.back()};
  return ConvexPolygon(std::move(hull));
}

}  // namespace rangeshape

#endif
