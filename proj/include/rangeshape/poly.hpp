#ifndef RANGESHAPE_POLY_HPP
#define RANGESHAPE_POLY_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <complex>
#include <numbers>
#include <span>
#include <tuple>
#include <vector>

#include "errors.hpp"

namespace rangeshape {

/// One monomial c * xi^j * eta^k.
struct Term {
  int j = 0;
  int k = 0;
  double c = 0.0;
};

/// Real bivariate polynomial q(xi, eta) of total degree <= D, stored as a dense
/// triangle: degree block t holds xi^(t-k) eta^k for k = 0..t.
class BivariatePoly {
 public:
  BivariatePoly() : BivariatePoly(0) {}

  explicit BivariatePoly(int degree)
      : degree_(degree), c_(static_cast<std::size_t>((degree + 1) * (degree + 2) / 2), 0.0) {
    if (degree < 0) throw InvalidInput("polynomial degree must be >= 0");
  }

  static BivariatePoly constant(double c) {
    BivariatePoly p(0);
    p.set(0, 0, c);
    return p;
  }

  /// c0 + a xi + b eta
  static BivariatePoly affine(double c0, double a, double b) {
    BivariatePoly p(1);
    p.set(0, 0, c0);
    p.set(1, 0, a);
    p.set(0, 1, b);
    return p.normalized();
  }

  static BivariatePoly from_terms(std::span<const Term> terms, int declared_degree = 0) {
    int D = std::max(declared_degree, 0);
    for (const auto& t : terms) {
      if (t.j < 0 || t.k < 0) throw InvalidInput("negative monomial exponent");
      D = std::max(D, t.j + t.k);
    }
    BivariatePoly p(D);
    for (const auto& t : terms) p.set(t.j, t.k, p.coeff(t.j, t.k) + t.c);
    return p.normalized();
  }

  int degree() const { return degree_; }

  static std::size_t index(int j, int k) {
    const int t = j + k;
    return static_cast<std::size_t>(t * (t + 1) / 2 + k);
  }

  double coeff(int j, int k) const {
    if (j < 0 || k < 0 || j + k > degree_) return 0.0;
    return c_[index(j, k)];
  }

  void set(int j, int k, double c) {
    if (j < 0 || k < 0) throw InvalidInput("negative monomial exponent");
    if (j + k > degree_) grow(j + k);
    c_[index(j, k)] = c;
  }

  std::span<const double> coefficients() const { return c_; }

  double max_abs_coeff() const {
    double m = 0.0;
    for (double x : c_) m = std::max(m, std::abs(x));
    return m;
  }

  bool is_zero() const { return max_abs_coeff() == 0.0; }

  std::vector<Term> terms() const {
    std::vector<Term> out;
    for (int t = 0; t <= degree_; ++t)
      for (int k = 0; k <= t; ++k)
        if (const double c = c_[index(t - k, k)]; c != 0.0) out.push_back({t - k, k, c});
    return out;
  }

  template <class T>
  T evaluate(T x, T y) const {
    // Horner in eta within each degree block, then accumulate.
    T sum = T(0);
    T xpow = T(1);
    std::vector<T> ypow(static_cast<std::size_t>(degree_ + 1), T(1));
    for (int k = 1; k <= degree_; ++k) ypow[static_cast<std::size_t>(k)] = ypow[static_cast<std::size_t>(k - 1)] * y;
    for (int j = 0; j <= degree_; ++j) {
      for (int k = 0; j + k <= degree_; ++k)
        sum += c_[index(j, k)] * xpow * ypow[static_cast<std::size_t>(k)];
      xpow *= x;
    }
    return sum;
  }

  double operator()(double x, double y) const { return evaluate<double>(x, y); }

  /// Drops top-degree blocks whose coefficients are all <= rel_tol * max|c|.
  BivariatePoly normalized(double rel_tol = 1e-9) const {
    const double cut = rel_tol * max_abs_coeff();
    int D = degree_;
    while (D > 0) {
      bool small = true;
      for (int k = 0; k <= D; ++k)
        if (std::abs(c_[index(D - k, k)]) > cut) small = false;
      if (!small) break;
      --D;
    }
    BivariatePoly p(D);
    std::copy(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(p.c_.size()), p.c_.begin());
    return p;
  }

  BivariatePoly& operator*=(double s) {
    for (auto& x : c_) x *= s;
    return *this;
  }

  friend BivariatePoly operator+(const BivariatePoly& a, const BivariatePoly& b) {
    BivariatePoly r(std::max(a.degree_, b.degree_));
    for (int t = 0; t <= r.degree_; ++t)
      for (int k = 0; k <= t; ++k) r.c_[index(t - k, k)] = a.coeff(t - k, k) + b.coeff(t - k, k);
    return r;
  }

  friend BivariatePoly operator*(const BivariatePoly& a, const BivariatePoly& b) {
    BivariatePoly r(a.degree_ + b.degree_);
    for (int ta = 0; ta <= a.degree_; ++ta)
      for (int ka = 0; ka <= ta; ++ka) {
        const double ca = a.c_[index(ta - ka, ka)];
        if (ca == 0.0) continue;
        for (int tb = 0; tb <= b.degree_; ++tb)
          for (int kb = 0; kb <= tb; ++kb)
            r.c_[index(ta - ka + tb - kb, ka + kb)] += ca * b.c_[index(tb - kb, kb)];
      }
    return r;
  }

  /// q(m00 xi + m01 eta, m10 xi + m11 eta).
  BivariatePoly compose_linear(double m00, double m01, double m10, double m11) const {
    const BivariatePoly u = BivariatePoly::from_terms(std::vector<Term>{{1, 0, m00}, {0, 1, m01}}, 1);
    const BivariatePoly v = BivariatePoly::from_terms(std::vector<Term>{{1, 0, m10}, {0, 1, m11}}, 1);
    std::vector<BivariatePoly> upow{constant(1.0)}, vpow{constant(1.0)};
    for (int i = 1; i <= degree_; ++i) {
      upow.push_back(upow.back() * u);
      vpow.push_back(vpow.back() * v);
    }
    BivariatePoly r(degree_);
    for (int t = 0; t <= degree_; ++t)
      for (int k = 0; k <= t; ++k) {
        const double c = c_[index(t - k, k)];
        if (c == 0.0) continue;
        BivariatePoly m = upow[static_cast<std::size_t>(t - k)] * vpow[static_cast<std::size_t>(k)];
        m *= c;
        r = r + m;
      }
    return r;
  }

  /// Precomposition with the rotation by angle a: q(R_a (xi, eta)).
  BivariatePoly rotated(double a) const {
    const double c = std::cos(a), s = std::sin(a);
    return compose_linear(c, -s, s, c);
  }

 private:
  void grow(int D) {
    BivariatePoly p(D);
    std::copy(c_.begin(), c_.end(), p.c_.begin());
    *this = std::move(p);
  }

  int degree_ = 0;
  std::vector<double> c_;
};

// Univariate helpers. Coefficients are ascending: a[0] + a[1] t + ... + a[n] t^n.

template <class T>
T poly_eval(std::span<const double> a, T t) {
  T r = T(0);
  for (std::size_t i = a.size(); i-- > 0;) r = r * t + a[i];
  return r;
}

/// Expands prod_i (t - r_i), ascending coefficients.
inline std::vector<double> poly_from_roots(std::span<const double> roots) {
  std::vector<double> a{1.0};
  for (double r : roots) {
    std::vector<double> b(a.size() + 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      b[i + 1] += a[i];
      b[i] -= r * a[i];
    }
    a = std::move(b);
  }
  return a;
}

/// Fujiwara bound on the root moduli of a polynomial with nonzero leading term.
template <class Cf>
double root_modulus_bound(std::span<const Cf> a) {
  const std::size_t n = a.size() - 1;
  double b = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    double c = std::abs(a[n - i] / a[n]);
    if (i == n) c *= 0.5;
    b = std::max(b, std::pow(c, 1.0 / static_cast<double>(i)));
  }
  return 2.0 * b;
}

inline double root_modulus_bound(std::span<const double> a) { return root_modulus_bound<double>(a); }

/// All complex roots by Aberth-Ehrlich simultaneous iteration. Coefficients
/// may be real or complex.
template <class Cf>
std::vector<std::complex<double>> polynomial_roots(std::span<const Cf> a_in) {
  using C = std::complex<double>;
  std::vector<C> a(a_in.begin(), a_in.end());
  while (!a.empty() && a.back() == C(0)) a.pop_back();
  if (a.size() <= 1) return {};
  const std::size_t n = a.size() - 1;
  std::vector<C> da(n);
  for (std::size_t i = 1; i <= n; ++i) da[i - 1] = a[i] * static_cast<double>(i);
  auto eval = [](const std::vector<C>& c, C t) {
    C r = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) r = r * t + c[i];
    return r;
  };

  const double R = std::max(root_modulus_bound<C>(a) * 0.5, 1e-300);
  std::vector<C> z(n);
  for (std::size_t k = 0; k < n; ++k)
    z[k] = std::polar(R, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.4);

  // Stops at convergence, or once rounding noise keeps the corrections from
  // shrinking (clustered or ill-conditioned roots).
  double best = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (int it = 0; it < 500 && stalled < 8; ++it) {
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const C p = eval(a, z[k]);
      if (p == C(0)) continue;
      const C w = p / eval(da, z[k]);
      C s = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) s += 1.0 / (z[k] - z[j]);
      const C delta = w / (1.0 - w * s);
      if (!std::isfinite(delta.real()) || !std::isfinite(delta.imag())) continue;
      z[k] -= delta;
      worst = std::max(worst, std::abs(delta) / std::max(1.0, std::abs(z[k])));
    }
    if (worst <= 1e-15) break;
    if (worst < 0.5 * best) {
      best = worst;
      stalled = 0;
    } else {
      ++stalled;
    }
  }
  return z;
}

inline std::vector<std::complex<double>> polynomial_roots(std::span<const double> a) {
  return polynomial_roots<double>(a);
}

}  // namespace rangeshape

#endif
