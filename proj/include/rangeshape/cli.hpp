#ifndef RANGESHAPE_CLI_HPP
#define RANGESHAPE_CLI_HPP

#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "decision.hpp"
#include "io.hpp"
#include "numrange.hpp"
#include "parallel.hpp"
#include "polar.hpp"
#include "rigidity.hpp"
#include "svg.hpp"

namespace rangeshape::cli {

using json = nlohmann::json;

enum ExitCode : int { kOk = 0, kInvalidInput = 2, kCertificationFailure = 3 };

struct RunConfig {
  std::string command;
  std::string input_path;
  std::string poly_path;
  std::string polygon_path;
  int dim = 0;  ///< 0: not given
  int angles = 720;
  int directions = 180;
  double tol = 1e-3;
  std::uint64_t seed = 0;
  int restarts = 8;
  std::string json_out, csv_out, svg_out;
  unsigned threads = 1;  ///< from RANGESHAPE_THREADS; not echoed

  json to_json() const {
    auto opt = [](const std::string& s) { return s.empty() ? json(nullptr) : json(s); };
    return {{"command", command},
            {"input_path", opt(input_path)},
            {"poly_path", opt(poly_path)},
            {"polygon_path", opt(polygon_path)},
            {"dim", dim == 0 ? json(nullptr) : json(dim)},
            {"angles", angles},
            {"directions", directions},
            {"tol", tol},
            {"seed", seed},
            {"restarts", restarts},
            {"json_out", opt(json_out)},
            {"csv_out", opt(csv_out)},
            {"svg_out", opt(svg_out)}};
  }
};

namespace detail {

struct Outcome {
  json report;
  int code = kOk;
};

inline std::vector<Point> profile_points(const SupportProfile& prof) {
  return {prof.polygon.vertices().begin(), prof.polygon.vertices().end()};
}

inline json rz_to_json(const RzReport& rep) {
  json failures = json::array();
  for (const auto& f : rep.failures)
    failures.push_back({{"phi", f.phi}, {"root", io::complex_to_json(f.root)}, {"margin", f.margin}});
  json j = {{"verdict", to_string(rep.verdict)},
            {"directions_tested", rep.directions_tested},
            {"worst_margin", rep.worst_margin},
            {"worst_phi", rep.worst_phi},
            {"failures", std::move(failures)},
            {"caveat", rep.caveat}};
  if (!rep.failures.empty()) {
    const auto& w = rep.failures.front();
    j["witness"] = {{"phi", w.phi}, {"direction", io::point_to_json(direction(w.phi))},
                    {"mu", io::complex_to_json(w.root)}};
  }
  return j;
}

inline json verdict_to_json(const ShapeVerdict& v) {
  json j = {{"verdict", to_string(v.verdict)},
            {"reason", to_string(v.reason)},
            {"dimension_bound", v.dimension_bound},
            {"degree", v.degree},
            {"polynomial", io::poly_to_json(v.polynomial)},
            {"translation", io::complex_to_json(v.translation)},
            {"caveats", v.caveats}};
  if (v.rz) j["rz"] = rz_to_json(*v.rz);
  if (v.witness) {
    const ComplexMatrix W = v.witness->matrix() +
                            v.translation * ComplexMatrix::identity(v.witness->dim());
    j["witness"] = io::matrix_to_json(W);
    j["witness_centered"] = io::matrix_to_json(v.witness->matrix());
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

inline json degeneracy_to_json(const DegeneracyReport& r) {
  json j = {{"degenerate", r.degenerate},
            {"gram_min_eigenvalue", r.gram_min_eigenvalue},
            {"beta", io::complex_to_json(r.beta)}};
  if (r.degenerate) {
    j["alpha"] = io::complex_to_json(r.alpha);
    j["residual"] = r.residual;
    j["segment_endpoints"] = {io::point_to_json(r.segment_endpoints->first),
                              io::point_to_json(r.segment_endpoints->second)};
  }
  return j;
}

inline std::vector<svg::Marker> spectrum_markers(const ComplexMatrix& A) {
  std::vector<svg::Marker> m;
  for (const auto& z : svg::approximate_spectrum(A)) m.push_back({to_point(z), "red"});
  return m;
}

inline std::vector<Point> polar_points(const PolarBoundary& pb, double clip) {
  std::vector<Point> pts;
  for (const auto& s : pb.samples)
    pts.push_back(std::min(s.radius, clip) * direction(s.phi));
  return pts;
}

inline Outcome run_range(const RunConfig& cfg, std::string& csv, std::string& svg_text) {
  const ComplexMatrix A = io::matrix_from_json(io::read_json_file(cfg.input_path));
  const SupportProfile prof = numerical_range(A, static_cast<std::size_t>(cfg.angles), cfg.threads);
  json samples = json::array();
  std::ostringstream os;
  os << "theta,h,x,y\n";
  for (const auto& s : prof.samples) {
    samples.push_back({{"theta", s.theta}, {"h", s.h}, {"x", s.point.x}, {"y", s.point.y}});
    os << io::fmt17(s.theta) << ',' << io::fmt17(s.h) << ',' << io::fmt17(s.point.x) << ','
       << io::fmt17(s.point.y) << '\n';
  }
  csv = os.str();
  const Centering cen = center_matrix(A, static_cast<std::size_t>(cfg.angles));
  Outcome o;
  o.report = {{"dim", A.dim()},
              {"samples", std::move(samples)},
              {"polygon", io::polygon_to_json(prof.polygon)["vertices"]},
              {"diameter", prof.polygon.diameter()},
              {"centering",
               {{"lambda", io::complex_to_json(cen.lambda)},
                {"min_support", cen.min_support},
                {"origin_interior", cen.origin_interior}}},
              {"degeneracy", degeneracy_to_json(degeneracy_report(A))}};
  if (!cfg.svg_out.empty()) {
    std::vector<svg::Polyline> lines{{profile_points(prof), true, "black", "W(A)"}};
    const PolarBoundary pb = lmi_polar_boundary(hermitian_parts(A), static_cast<std::size_t>(cfg.angles));
    const double clip = 4.0 * std::max(prof.polygon.diameter(), 1e-12);
    lines.push_back({polar_points(pb, clip), true, "steelblue", "polar"});
    svg_text = svg::render(lines, spectrum_markers(A), "numerical range");
  }
  return o;
}

inline Outcome run_polar(const RunConfig& cfg, std::string& csv, std::string& svg_text) {
  Outcome o;
  std::ostringstream os;
  os << "theta,h,x,y,radius\n";
  if (!cfg.polygon_path.empty()) {
    const ConvexPolygon P = io::polygon_from_json(io::read_json_file(cfg.polygon_path));
    o.report["polygon"] = io::polygon_to_json(P)["vertices"];
    try {
      const ConvexPolygon Q = polygon_polar(P);
      o.report["bounded"] = true;
      o.report["polar"] = io::polygon_to_json(Q)["vertices"];
      for (const auto& v : Q.vertices()) {
        const double th = std::atan2(v.y, v.x);
        os << io::fmt17(th) << ',' << io::fmt17(P.support(th)) << ',' << io::fmt17(v.x) << ','
           << io::fmt17(v.y) << ',' << io::fmt17(norm(v)) << '\n';
      }
      if (!cfg.svg_out.empty())
        svg_text = svg::render({{{P.vertices().begin(), P.vertices().end()}, true, "black", "W"},
                                {{Q.vertices().begin(), Q.vertices().end()}, true, "steelblue", "polar"}},
                               {}, "polygon polar");
    } catch (const UnboundedPolar& e) {
      o.report["bounded"] = false;
      json hp = json::array();
      for (const auto& h : e.constraints()) hp.push_back({h.a, h.b});
      o.report["constraints"] = std::move(hp);
    }
    csv = os.str();
    return o;
  }

  const ComplexMatrix A = io::matrix_from_json(io::read_json_file(cfg.input_path));
  const HermitianPair pair = hermitian_parts(A);
  const PolarBoundary pb = lmi_polar_boundary(pair, static_cast<std::size_t>(cfg.angles), cfg.threads);
  json samples = json::array();
  for (const auto& s : pb.samples) {
    const double h = range_support(pair, s.phi);
    json js = {{"phi", s.phi}, {"h", h}};
    if (s.finite()) {
      js["radius"] = s.radius;
      js["x"] = s.point->x;
      js["y"] = s.point->y;
    } else {
      js["radius"] = "inf";
    }
    samples.push_back(std::move(js));
    os << io::fmt17(s.phi) << ',' << io::fmt17(h) << ','
       << (s.finite() ? io::fmt17(s.point->x) : "inf") << ','
       << (s.finite() ? io::fmt17(s.point->y) : "inf") << ',' << io::fmt17(s.radius) << '\n';
  }
  csv = os.str();
  o.report = {{"dim", A.dim()}, {"bounded", pb.bounded()}, {"samples", std::move(samples)}};
  if (pb.polygon) o.report["polygon"] = io::polygon_to_json(*pb.polygon)["vertices"];

  // Cross-check against the geometric polar of the sampled range polygon.
  const SupportProfile prof = numerical_range(A, static_cast<std::size_t>(cfg.angles), cfg.threads);
  try {
    const ConvexPolygon geo = polygon_polar(prof.polygon);
    o.report["geometric_polar"] = io::polygon_to_json(geo)["vertices"];
    if (pb.polygon) {
      o.report["lmi_vs_geometric_hausdorff"] = hausdorff(*pb.polygon, geo);
    }
  } catch (const UnboundedPolar&) {
    o.report["geometric_polar"] = nullptr;
  }
  if (!cfg.svg_out.empty()) {
    const double clip = 4.0 / std::max(prof.polygon.diameter(), 1e-12) + 4.0 * prof.polygon.diameter();
    svg_text = svg::render({{profile_points(prof), true, "black", "W(A)"},
                            {polar_points(pb, clip), true, "steelblue", "polar"}},
                           spectrum_markers(A), "polar of the numerical range");
  }
  return o;
}

inline Outcome run_kippenhahn(const RunConfig& cfg) {
  const ComplexMatrix A = io::matrix_from_json(io::read_json_file(cfg.input_path));
  const BivariatePoly p = kippenhahn_poly(hermitian_parts(A));
  Outcome o;
  o.report = io::poly_to_json(p);
  o.report["dim"] = A.dim();
  return o;
}

inline Outcome run_rz_check(const RunConfig& cfg) {
  const BivariatePoly q = io::poly_from_json(io::read_json_file(cfg.poly_path));
  Outcome o;
  o.report["polynomial"] = io::poly_to_json(q);
  if (!(q(0.0, 0.0) > 0.0)) throw NotAnchored("q(0,0) must be positive");
  const RigidityResult rr = rigid_convexity_report(q, static_cast<std::size_t>(cfg.directions), cfg.threads);
  const json rz = rz_to_json(*rr.report);
  for (auto it = rz.begin(); it != rz.end(); ++it) o.report[it.key()] = it.value();
  o.report["rigidity"] = to_string(rr.verdict);
  return o;
}

inline Outcome run_decide(const RunConfig& cfg, std::string& svg_text) {
  Outcome o;
  ShapeVerdict v;
  const auto n_dir = static_cast<std::size_t>(cfg.directions);
  if (!cfg.poly_path.empty()) {
    if (cfg.dim < 1) throw InvalidInput("decide --poly requires --dim");
    v = decide_polar_poly(io::poly_from_json(io::read_json_file(cfg.poly_path)), cfg.dim, n_dir, cfg.threads);
  } else if (!cfg.polygon_path.empty()) {
    if (cfg.dim < 1) throw InvalidInput("decide --polygon requires --dim");
    const ConvexPolygon W = io::polygon_from_json(io::read_json_file(cfg.polygon_path));
    v = decide_polygon(W, cfg.dim, n_dir, cfg.threads);
    if (!cfg.svg_out.empty()) {
      std::vector<svg::Polyline> lines{{{W.vertices().begin(), W.vertices().end()}, true, "black", "W"}};
      std::vector<svg::Marker> marks;
      if (v.witness)
        for (const auto& z : svg::approximate_spectrum(v.witness->matrix()))
          marks.push_back({to_point(z + v.translation), "red"});
      svg_text = svg::render(lines, marks, "decide polygon");
    }
  } else {
    const ComplexMatrix A = io::matrix_from_json(io::read_json_file(cfg.input_path));
    if (cfg.dim != 0 && cfg.dim != static_cast<int>(A.dim()))
      throw InvalidInput("--dim must match the matrix dimension for matrix input");
    v = decide_matrix(A, n_dir, cfg.threads);
  }
  o.report = verdict_to_json(v);
  return o;
}

inline Outcome run_symmetrize(const RunConfig& cfg, std::string& svg_text) {
  const ComplexMatrix A = io::matrix_from_json(io::read_json_file(cfg.input_path));
  SymmetrizeOptions opts;
  opts.n_angles = static_cast<std::size_t>(cfg.angles);
  opts.tol = cfg.tol;
  opts.max_restarts = cfg.restarts;
  opts.seed = cfg.seed;
  opts.threads = cfg.threads;
  const RealizationResult r = symmetrize(A, opts);
  Outcome o;
  o.report = {{"B", io::matrix_to_json(r.B)},
              {"achieved_distance", r.achieved_distance},
              {"diameter", r.diameter},
              {"relative_distance", r.diameter > 0.0 ? r.achieved_distance / r.diameter : 0.0},
              {"restarts_used", r.restarts_used},
              {"evaluations", r.evaluations},
              {"converged", r.converged},
              {"symmetric", r.B.is_symmetric(0.0)}};
  o.code = r.converged ? kOk : kCertificationFailure;
  if (!cfg.svg_out.empty()) {
    const auto pa = numerical_range(A, static_cast<std::size_t>(cfg.angles));
    const auto pb = numerical_range(r.B, static_cast<std::size_t>(cfg.angles));
    svg_text = svg::render({{profile_points(pa), true, "black", "W(A)"},
                            {profile_points(pb), true, "orange", "W(B)"}},
                           spectrum_markers(A), "symmetric realization");
  }
  return o;
}

}  // namespace detail

/// Runs the command line; argv[0] is the program name. Returns the exit code.
inline int execute(const std::vector<std::string>& argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"rangeshape: numerical ranges, their polars, and shape decisions"};
  app.name(argv.empty() ? "rangeshape" : argv.front());
  RunConfig cfg;
  const std::vector<std::string> commands{"range", "polar", "kippenhahn", "rz-check", "decide", "symmetrize"};
  app.add_option("command", cfg.command, "range | polar | kippenhahn | rz-check | decide | symmetrize")
      ->required()
      ->check(CLI::IsMember(commands));
  app.add_option("-i,--input", cfg.input_path, "matrix JSON file");
  app.add_option("--poly", cfg.poly_path, "polynomial JSON file");
  app.add_option("--polygon", cfg.polygon_path, "polygon JSON file");
  app.add_option("--dim", cfg.dim, "dimension bound d")->check(CLI::PositiveNumber);
  app.add_option("--angles", cfg.angles, "number of sampled angles")->check(CLI::Range(3, 1 << 24));
  app.add_option("--directions", cfg.directions, "number of RZ test directions")->check(CLI::Range(8, 1 << 24));
  app.add_option("--tol", cfg.tol, "relative Hausdorff tolerance for symmetrize")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--restarts", cfg.restarts, "symmetrize restarts")->check(CLI::NonNegativeNumber);
  app.add_option("--json-out", cfg.json_out, "write the JSON report here instead of stdout");
  app.add_option("--csv-out", cfg.csv_out, "CSV point output");
  app.add_option("--svg-out", cfg.svg_out, "SVG figure output");

  std::vector<const char*> cargv;
  for (const auto& a : argv) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "rangeshape: " << e.what() << '\n';
    return kInvalidInput;
  }
  cfg.threads = threads_from_env();

  const bool wants_matrix = cfg.command == "range" || cfg.command == "kippenhahn" || cfg.command == "symmetrize";
  if (wants_matrix && cfg.input_path.empty()) {
    err << "rangeshape: " << cfg.command << " requires --input\n";
    return kInvalidInput;
  }
  if (cfg.command == "rz-check" && cfg.poly_path.empty()) {
    err << "rangeshape: rz-check requires --poly\n";
    return kInvalidInput;
  }
  if ((cfg.command == "polar" || cfg.command == "decide") && cfg.input_path.empty() &&
      cfg.polygon_path.empty() && cfg.poly_path.empty()) {
    err << "rangeshape: " << cfg.command << " requires an input file\n";
    return kInvalidInput;
  }

  detail::Outcome o;
  std::string csv, svg_text;
  try {
    if (cfg.command == "range") o = detail::run_range(cfg, csv, svg_text);
    else if (cfg.command == "polar") o = detail::run_polar(cfg, csv, svg_text);
    else if (cfg.command == "kippenhahn") o = detail::run_kippenhahn(cfg);
    else if (cfg.command == "rz-check") o = detail::run_rz_check(cfg);
    else if (cfg.command == "decide") o = detail::run_decide(cfg, svg_text);
    else o = detail::run_symmetrize(cfg, svg_text);

    json report = {{"command", cfg.command}, {"config", cfg.to_json()}};
    for (auto it = o.report.begin(); it != o.report.end(); ++it) report[it.key()] = it.value();
    const std::string text = report.dump(2) + "\n";
    if (cfg.json_out.empty()) out << text;
    else io::write_text_file(cfg.json_out, text);
    if (!cfg.csv_out.empty()) io::write_text_file(cfg.csv_out, csv);
    if (!cfg.svg_out.empty()) io::write_text_file(cfg.svg_out, svg_text);
  } catch (const ConvergenceFailure& e) {
    err << "rangeshape: " << e.what() << '\n';
    return kCertificationFailure;
  } catch (const IllConditionedFit& e) {
    err << "rangeshape: " << e.what() << '\n';
    return kCertificationFailure;
  } catch (const ScaleError& e) {
    err << "rangeshape: " << e.what() << '\n';
    return kCertificationFailure;
  } catch (const Error& e) {
    err << "rangeshape: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const nlohmann::json::exception& e) {
    err << "rangeshape: " << e.what() << '\n';
    return kInvalidInput;
  }
  return o.code;
}

}  // namespace rangeshape::cli

#endif
