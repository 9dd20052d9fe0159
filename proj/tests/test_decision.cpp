#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <rangeshape/decision.hpp>

#include "oracles.hpp"

using namespace rangeshape;
using Catch::Approx;

namespace {

const cplx I1{0.0, 1.0};
const ComplexMatrix kJordan{{0.0, 1.0}, {0.0, 0.0}};

BivariatePoly disk() { return BivariatePoly::from_terms(std::vector<Term>{{0, 0, 1}, {2, 0, -1}, {0, 2, -1}}); }
BivariatePoly tv_screen() {
  return BivariatePoly::from_terms(std::vector<Term>{{0, 0, 1}, {4, 0, -1}, {0, 4, -1}});
}
ConvexPolygon square() { return ConvexPolygon({{1, -1}, {1, 1}, {-1, 1}, {-1, -1}}); }

bool has_caveat(const ShapeVerdict& v, const std::string& c) {
  return std::find(v.caveats.begin(), v.caveats.end(), c) != v.caveats.end();
}

}  // namespace

TEST_CASE("decide_polar_poly", "[decision]") {
  SECTION("disk, d = 2") {
    const auto v = decide_polar_poly(disk(), 2);
    REQUIRE(v.verdict == Verdict::yes);
    REQUIRE(v.reason == VerdictReason::rz_pass);
    REQUIRE(v.degree == 2);
    REQUIRE(v.dimension_bound == 2);
    REQUIRE_FALSE(v.witness.has_value());
    // 2 J realizes it: W(2J) is the unit disk, which is self-polar.
    REQUIRE(roundtrip_check(hermitian_parts(2.0 * kJordan), disk()) <= 1e-8);
  }
  SECTION("disk, d = 1") {
    const auto v = decide_polar_poly(disk(), 1);
    REQUIRE(v.verdict == Verdict::no);
    REQUIRE(v.reason == VerdictReason::degree_exceeds_d);
    REQUIRE(has_caveat(v, kDegreeCaveat));
  }
  SECTION("TV screen is never a numerical range") {
    for (int d = 1; d <= 8; ++d) {
      const auto v = decide_polar_poly(tv_screen(), d);
      REQUIRE(v.verdict == Verdict::no);
      REQUIRE(v.reason == VerdictReason::not_rigidly_convex);
      REQUIRE(v.rz.has_value());
      REQUIRE_FALSE(v.rz->failures.empty());
    }
  }
  SECTION("caveats are always attached") {
    const auto v = decide_polar_poly(disk(), 5);
    REQUIRE(has_caveat(v, kSamplingCaveat));
    REQUIRE(has_caveat(v, kDegreeCaveat));
  }
  SECTION("errors") {
    REQUIRE_THROWS_AS(decide_polar_poly(BivariatePoly::affine(-1.0, 1.0, 0.0), 2), NotAnchored);
    REQUIRE_THROWS_AS(decide_polar_poly(disk(), 0), InvalidInput);
  }
  SECTION("ambiguous band propagates as inconclusive") {
    const auto q = BivariatePoly::from_terms(std::vector<Term>{{0, 0, 1.0}, {1, 0, -2.0}, {2, 0, 1.0 + 5e-7}});
    const auto v = decide_polar_poly(q, 2, 8);
    REQUIRE(v.verdict == Verdict::inconclusive);
    REQUIRE(v.reason == VerdictReason::rz_inconclusive);
  }
}

TEST_CASE("decide_polygon", "[decision][polygon]") {
  SECTION("square, d = 4: yes with a normal witness") {
    const auto v = decide_polygon(square(), 4);
    REQUIRE(v.verdict == Verdict::yes);
    REQUIRE(v.degree == 4);
    REQUIRE(v.witness.has_value());
    const ComplexMatrix B = v.witness->matrix() + v.translation * ComplexMatrix::identity(v.witness->dim());
    REQUIRE((B * B.adjoint() - B.adjoint() * B).max_abs() <= 1e-14);
    // Eigenvalues are the square's corners.
    std::vector<Point> corners;
    for (std::size_t i = 0; i < B.dim(); ++i) corners.push_back(to_point(B(i, i)));
    REQUIRE(oracle::vertex_hausdorff(convex_hull(corners), square()) <= 1e-14);
    REQUIRE(hausdorff(numerical_range(B).polygon, square()) <= 1e-6);
    REQUIRE(roundtrip_check(*v.witness, v.polynomial) <= 1e-8);
  }
  SECTION("square, d = 3: the degree gate") {
    const auto v = decide_polygon(square(), 3);
    REQUIRE(v.verdict == Verdict::no);
    REQUIRE(v.reason == VerdictReason::degree_exceeds_d);
    REQUIRE_FALSE(v.witness.has_value());
  }
  SECTION("single point") {
    const ConvexPolygon P({{2.0, -3.0}});
    const auto v = decide_polygon(P, 1);
    REQUIRE(v.verdict == Verdict::yes);
    REQUIRE(v.witness->dim() == 1);
    const cplx lambda = v.witness->matrix()(0, 0) + v.translation;
    REQUIRE(std::abs(lambda - cplx(2.0, -3.0)) <= 1e-15);
  }
  SECTION("segment needs d >= 2") {
    const ConvexPolygon S({{-1.0, 1.0}, {3.0, 2.0}});
    REQUIRE(decide_polygon(S, 1).verdict == Verdict::no);
    const auto v = decide_polygon(S, 2);
    REQUIRE(v.verdict == Verdict::yes);
    const ComplexMatrix B = v.witness->matrix() + v.translation * ComplexMatrix::identity(2);
    const auto rep = degeneracy_report(B);
    REQUIRE(rep.degenerate);
    const auto [p, q] = *rep.segment_endpoints;
    REQUIRE(std::min(norm(p - S[0]), norm(p - S[1])) <= 1e-12);
    REQUIRE(std::min(norm(q - S[0]), norm(q - S[1])) <= 1e-12);
  }
  SECTION("many vertices are decided from the count") {
    std::vector<Point> v;
    for (std::size_t j = 0; j < 40; ++j) v.push_back(direction(sample_angle(j, 40)));
    const auto r = decide_polygon(ConvexPolygon(v), 10);
    REQUIRE(r.verdict == Verdict::no);
    REQUIRE(r.reason == VerdictReason::degree_exceeds_d);
    REQUIRE(decide_polygon(ConvexPolygon(v), 40).verdict == Verdict::yes);
  }
  SECTION("errors") {
    REQUIRE_THROWS_AS(decide_polygon(ConvexPolygon(std::vector<Point>{}), 2), InvalidInput);
    REQUIRE_THROWS_AS(decide_polygon(square(), 0), InvalidInput);
  }
}

TEST_CASE("decision soundness for matrix-derived polars", "[decision][property]") {
  std::mt19937_64 rng(1234);
  for (int t = 0; t < 25; ++t) {
    const std::size_t d = 1 + static_cast<std::size_t>(t % 6);
    const auto A = center_matrix(oracle::random_matrix(rng, d)).shifted;
    const auto pair = hermitian_parts(A);
    const auto q = kippenhahn_poly(pair);
    const auto v = decide_polar_poly(q, static_cast<int>(d));
    REQUIRE(v.verdict == Verdict::yes);
    // Degree monotonicity.
    REQUIRE(decide_polar_poly(q, static_cast<int>(d) + 1).verdict == Verdict::yes);
    REQUIRE(roundtrip_check(pair, q) <= 1e-8);

    const auto m = decide_matrix(A);
    REQUIRE(m.verdict == Verdict::yes);
    REQUIRE(m.witness.has_value());
    REQUIRE(roundtrip_check(*m.witness, m.polynomial) <= 1e-8);
  }
}

TEST_CASE("decide_polygon on ranges of normal matrices", "[decision][polygon][property]") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> nd;
  int checked = 0;
  for (int t = 0; t < 30; ++t) {
    const std::size_t d = 2 + static_cast<std::size_t>(t % 5);
    std::vector<cplx> eig(d);
    for (auto& z : eig) z = cplx(nd(rng), nd(rng));
    const auto U = oracle::random_unitary(rng, d);
    const auto A = U * ComplexMatrix::diagonal(eig) * U.adjoint();
    const auto P = numerical_range(A).polygon;
    std::vector<Point> pts;
    for (const auto& z : eig) pts.push_back(to_point(z));
    const auto hull = convex_hull(pts);
    if (hull.size() != P.size()) continue;  // a sampled vertex was missed or merged
    ++checked;
    const int m = static_cast<int>(P.size());
    REQUIRE(decide_polygon(P, m).verdict == Verdict::yes);
    REQUIRE(decide_polygon(P, static_cast<int>(d)).verdict == Verdict::yes);
    if (m > 1) REQUIRE(decide_polygon(P, m - 1).verdict == Verdict::no);
  }
  REQUIRE(checked >= 20);
}

TEST_CASE("decide_polygon is translation coherent", "[decision][polygon][property]") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd(0.0, 3.0);
  for (int t = 0; t < 20; ++t) {
    const auto P = convex_hull(oracle::random_convex_points(rng, 3 + static_cast<std::size_t>(t % 6)));
    const Point lambda{nd(rng), nd(rng)};
    for (int d = 1; d <= 8; ++d) {
      const auto a = decide_polygon(P, d), b = decide_polygon(P.translated(lambda), d);
      REQUIRE(a.verdict == b.verdict);
      REQUIRE(a.reason == b.reason);
      REQUIRE(std::abs(b.translation - a.translation - to_complex(lambda)) <= 1e-12);
    }
  }
}

TEST_CASE("roundtrip_check", "[decision][roundtrip]") {
  const auto jq = BivariatePoly::from_terms(std::vector<Term>{{0, 0, 1}, {2, 0, -0.25}, {0, 2, -0.25}});
  REQUIRE(roundtrip_check(hermitian_parts(kJordan), jq) <= 1e-8);
  REQUIRE(roundtrip_check(hermitian_parts(ComplexMatrix(3)), BivariatePoly::constant(1.0)) == 0.0);
  REQUIRE(roundtrip_check(hermitian_parts(kJordan), disk()) > 0.5);
  // Scaling q does not matter, only its constant-normalized form.
  auto scaled = jq;
  scaled *= 3.0;
  REQUIRE(roundtrip_check(hermitian_parts(kJordan), scaled) <= 1e-8);
}

TEST_CASE("symmetrize", "[decision][symmetrize]") {
  SECTION("complex symmetric input is returned as is") {
    const ComplexMatrix A{{cplx(1, 2), cplx(0.5, -1)}, {cplx(0.5, -1), -3.0}};
    const auto r = symmetrize(A);
    REQUIRE(r.B == A);
    REQUIRE(r.achieved_distance == 0.0);
    REQUIRE(r.evaluations == 0);
    REQUIRE(r.converged);
  }
  SECTION("diag(0, 1)") {
    const ComplexMatrix A{{0.0, 0.0}, {0.0, 1.0}};
    REQUIRE(symmetrize(A).B == A);
  }
  SECTION("Jordan block: the explicit symmetric nilpotent") {
    const ComplexMatrix B{{0.5, 0.5 * I1}, {0.5 * I1, -0.5}};
    REQUIRE(B == B.transpose());
    REQUIRE((B * B).max_abs() <= 1e-16);
    const auto prof = numerical_range(B);
    for (const auto& s : prof.samples) REQUIRE(s.h == Approx(0.5).margin(1e-12));
    REQUIRE(range_distance(kJordan, B) <= 1e-8);

    const auto r = symmetrize(kJordan);
    REQUIRE(r.converged);
    REQUIRE(r.B == r.B.transpose());
    REQUIRE(r.achieved_distance <= 1e-3 * r.diameter);
  }
  SECTION("random matrices") {
    std::mt19937_64 rng(33);
    for (int t = 0; t < 6; ++t) {
      const auto A = oracle::random_matrix(rng, 2 + static_cast<std::size_t>(t % 2));
      SymmetrizeOptions opts;
      opts.seed = static_cast<std::uint64_t>(t);
      const auto r = symmetrize(A, opts);
      REQUIRE(r.B == r.B.transpose());
      if (r.converged) {
        REQUIRE(r.achieved_distance <= opts.tol * r.diameter);
        REQUIRE(range_distance(A, r.B) == r.achieved_distance);
      }
      REQUIRE(r.converged);
    }
  }
  SECTION("deterministic and thread-count independent") {
    std::mt19937_64 rng(4);
    const auto A = oracle::random_matrix(rng, 3);
    SymmetrizeOptions one, many;
    one.seed = many.seed = 11;
    many.threads = 4;
    const auto a = symmetrize(A, one), b = symmetrize(A, one), c = symmetrize(A, many);
    REQUIRE(a.B == b.B);
    REQUIRE(a.B == c.B);
    REQUIRE(a.achieved_distance == c.achieved_distance);
    REQUIRE(a.evaluations == c.evaluations);
  }
  SECTION("no convergence is reported, not thrown") {
    std::mt19937_64 rng(2);
    SymmetrizeOptions opts;
    opts.tol = 1e-300;
    opts.max_restarts = 1;
    const auto r = symmetrize(oracle::random_matrix(rng, 2), opts);
    REQUIRE_FALSE(r.converged);
    REQUIRE(r.restarts_used == 2);
    REQUIRE(r.B == r.B.transpose());
  }
  SECTION("errors") {
    SymmetrizeOptions bad;
    bad.tol = 0.0;
    REQUIRE_THROWS_AS(symmetrize(kJordan, bad), InvalidInput);
    bad = {};
    bad.n_angles = 2;
    REQUIRE_THROWS_AS(symmetrize(kJordan, bad), InvalidInput);
  }
}
