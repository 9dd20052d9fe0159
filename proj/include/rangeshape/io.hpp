#ifndef RANGESHAPE_IO_HPP
#define RANGESHAPE_IO_HPP

// JSON file formats:
//   matrix   {"d": n, "entries": [[[re, im], ...], ...]}   (row-major)
//   polygon  {"vertices": [[x, y], ...]}
//   poly     {"degree": D, "coeffs": [[j, k, c], ...]}     (omitted = 0)

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "geometry.hpp"
#include "linalg.hpp"
#include "poly.hpp"

namespace rangeshape::io {

using json = nlohmann::json;

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput("malformed JSON in " + path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path);
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
}

namespace detail {

inline double number(const json& j, const char* what) {
  if (!j.is_number()) throw InvalidInput(std::string("expected a number for ") + what);
  return j.get<double>();
}

}  // namespace detail

inline ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("entries")) throw InvalidInput("matrix JSON needs \"entries\"");
  const json& rows = j.at("entries");
  if (!rows.is_array()) throw InvalidInput("\"entries\" must be an array of rows");
  const std::size_t d = rows.size();
  if (j.contains("d")) {
    if (!j.at("d").is_number_integer() || j.at("d").get<long long>() != static_cast<long long>(d))
      throw InvalidInput("\"d\" does not match the number of rows");
  }
  std::vector<cplx> e;
  e.reserve(d * d);
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != d) throw InvalidInput("matrix is not square");
    for (const auto& z : row) {
      if (z.is_array()) {
        if (z.size() != 2) throw InvalidInput("complex entry must be [re, im]");
        e.emplace_back(detail::number(z[0], "re"), detail::number(z[1], "im"));
      } else {
        e.emplace_back(detail::number(z, "entry"), 0.0);
      }
    }
  }
  return ComplexMatrix(d, std::move(e));
}

inline json matrix_to_json(const ComplexMatrix& A) {
  json rows = json::array();
  for (std::size_t i = 0; i < A.dim(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < A.dim(); ++k) row.push_back({A(i, k).real(), A(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return {{"d", A.dim()}, {"entries", std::move(rows)}};
}

inline ConvexPolygon polygon_from_json(const json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.at("vertices").is_array())
    throw InvalidInput("polygon JSON needs a \"vertices\" array");
  std::vector<Point> pts;
  for (const auto& v : j.at("vertices")) {
    if (!v.is_array() || v.size() != 2) throw InvalidInput("vertex must be [x, y]");
    pts.push_back({detail::number(v[0], "x"), detail::number(v[1], "y")});
  }
  if (pts.empty()) throw InvalidInput("polygon has no vertices");
  return convex_hull(std::move(pts));
}

inline json polygon_to_json(const ConvexPolygon& P) {
  json verts = json::array();
  for (const auto& v : P.vertices()) verts.push_back({v.x, v.y});
  return {{"vertices", std::move(verts)}};
}

inline BivariatePoly poly_from_json(const json& j) {
  if (!j.is_object() || !j.contains("coeffs") || !j.at("coeffs").is_array())
    throw InvalidInput("polynomial JSON needs a \"coeffs\" array");
  std::vector<Term> terms;
  for (const auto& t : j.at("coeffs")) {
    if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number_integer())
      throw InvalidInput("coefficient must be [j, k, c] with integer j, k");
    terms.push_back({t[0].get<int>(), t[1].get<int>(), detail::number(t[2], "coefficient")});
    if (terms.back().j < 0 || terms.back().k < 0) throw InvalidInput("negative exponent");
  }
  int declared = 0;
  if (j.contains("degree")) {
    if (!j.at("degree").is_number_integer() || j.at("degree").get<int>() < 0)
      throw InvalidInput("\"degree\" must be a non-negative integer");
    declared = j.at("degree").get<int>();
    for (const auto& t : terms)
      if (t.j + t.k > declared) throw InvalidInput("monomial exceeds the declared degree");
  }
  return BivariatePoly::from_terms(terms, declared);
}

inline json poly_to_json(const BivariatePoly& q) {
  json coeffs = json::array();
  for (const auto& t : q.terms()) coeffs.push_back({t.j, t.k, t.c});
  return {{"degree", q.degree()}, {"coeffs", std::move(coeffs)}};
}

inline json point_to_json(Point p) { return json::array({p.x, p.y}); }
inline json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

/// %.17g formatting for CSV and SVG output.
inline std::string fmt17(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace rangeshape::io

#endif
