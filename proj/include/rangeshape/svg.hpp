#ifndef RANGESHAPE_SVG_HPP
#define RANGESHAPE_SVG_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "io.hpp"
#include "linalg.hpp"
#include "poly.hpp"

namespace rangeshape::svg {

struct Polyline {
  std::vector<Point> points;
  bool closed = true;
  std::string stroke = "black";
  std::string label;
};

struct Marker {
  Point at;
  std::string fill = "red";
};

/// Eigenvalues of a general square matrix for plotting: the characteristic
/// polynomial det(zI - A) is recovered from d + 1 samples on a circle by an
/// inverse DFT, then solved with Aberth iteration. Display accuracy only.
inline std::vector<cplx> approximate_spectrum(const ComplexMatrix& A) {
  const std::size_t d = A.dim();
  if (d == 0) return {};
  const std::size_t N = d + 1;
  const double R = A.frobenius_norm() + 1.0;
  const auto I = ComplexMatrix::identity(d);
  std::vector<cplx> vals(N), coeffs(N);
  for (std::size_t j = 0; j < N; ++j) {
    const cplx z = std::polar(R, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(N));
    vals[j] = complex_determinant(z * I - A);
  }
  for (std::size_t k = 0; k < N; ++k) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < N; ++j)
      s += vals[j] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j * k) / static_cast<double>(N));
    coeffs[k] = s / (static_cast<double>(N) * std::pow(R, static_cast<double>(k)));
  }
  coeffs[d] = 1.0;  // monic
  return polynomial_roots<cplx>(coeffs);
}

/// Static figure with an auto-scaled shared viewport (y axis up).
inline std::string render(const std::vector<Polyline>& lines, const std::vector<Marker>& markers,
                          const std::string& title) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  auto grow = [&](Point p) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) return;
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  };
  for (const auto& l : lines)
    for (const auto& p : l.points) grow(p);
  for (const auto& m : markers) grow(m.at);
  grow({0.0, 0.0});
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
  const double pad = 0.08 * span;
  const double side = 640.0, scale = side / (span + 2.0 * pad);
  const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
  auto sx = [&](double x) { return io::fmt17(0.5 * side + (x - cx) * scale); };
  auto sy = [&](double y) { return io::fmt17(0.5 * side - (y - cy) * scale); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" viewBox=\"0 0 640 640\">\n";
  os << "<title>" << title << "</title>\n";
  os << "<rect width=\"640\" height=\"640\" fill=\"white\"/>\n";
  os << "<line x1=\"0\" y1=\"" << sy(0.0) << "\" x2=\"640\" y2=\"" << sy(0.0)
     << "\" stroke=\"#ccc\" stroke-width=\"0.5\"/>\n";
  os << "<line x1=\"" << sx(0.0) << "\" y1=\"0\" x2=\"" << sx(0.0)
     << "\" y2=\"640\" stroke=\"#ccc\" stroke-width=\"0.5\"/>\n";
  for (const auto& l : lines) {
    os << "<" << (l.closed ? "polygon" : "polyline") << " fill=\"none\" stroke=\"" << l.stroke
       << "\" stroke-width=\"1.2\"";
    if (!l.label.empty()) os << " data-label=\"" << l.label << "\"";
    os << " points=\"";
    bool first = true;
    for (const auto& p : l.points) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) continue;
      os << (first ? "" : " ") << sx(p.x) << "," << sy(p.y);
      first = false;
    }
    os << "\"/>\n";
  }
  for (const auto& m : markers)
    os << "<circle cx=\"" << sx(m.at.x) << "\" cy=\"" << sy(m.at.y) << "\" r=\"3\" fill=\"" << m.fill
       << "\"/>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace rangeshape::svg

#endif
