#pragma once

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "fracharm/errors.hpp"

namespace fracharm {

/// Taylor expansion of the symbol difference |ζ|^a − |ζ − ξ|^a in y = ξ/|ζ|.
///
/// With e = ζ/|ζ| we have |e − y|² = 1 − t, t = 2 e·y − |y|², and
///   1 − (1 − t)^{a/2} = Σ_{p,q} c_{p,q} (e·y)^p |y|^{2q},
///   c_{p,q} = −C(a/2, p+q) (−1)^{p+q} C(p+q, q) 2^p (−1)^q.
/// Terms are kept while their total degree p + 2q stays ≤ the cap. Odd p
/// gives the odd part in y, even p the even part.
struct TaylorCoefficients {
  double exponent = 1.5;
  int degree = 0;
  std::map<std::pair<int, int>, double> coefficients;  // (p, q) -> c_{p,q}

  /// Σ c_{p,q} (e·y)^p |y|^{2q} · |ζ|^a with y = ξ/|ζ|.
  double partial_sum(const std::array<double, 3>& zeta, const std::array<double, 3>& xi) const {
    const double r = std::hypot(zeta[0], zeta[1], zeta[2]);
    double ey = 0.0, yy = 0.0;
    for (int k = 0; k < 3; ++k) {
      ey += zeta[k] * xi[k] / (r * r);
      yy += xi[k] * xi[k] / (r * r);
    }
    return std::pow(r, exponent) * sum_in(ey, yy, 0);
  }

  /// The odd (parity 1) or even (parity 2) part of the expansion; parity 0 is all terms.
  double sum_in(double e_dot_y, double y_squared, int parity) const {
    double s = 0.0;
    for (const auto& [pq, c] : coefficients) {
      if (parity == 1 && pq.first % 2 == 0) continue;
      if (parity == 2 && pq.first % 2 == 1) continue;
      s += c * std::pow(e_dot_y, pq.first) * std::pow(y_squared, pq.second);
    }
    return s;
  }

  /// Collinear case ξ = t ζ/|ζ|, |ζ| = 1: the series of 1 − (1 − t)^a.
  double collinear_sum(double t) const { return sum_in(t, t * t, 0); }
};

/// Direct evaluation of |ζ|^a − |ζ − ξ|^a.
inline double symbol_difference(double a, const std::array<double, 3>& zeta,
                                const std::array<double, 3>& xi) {
  const double r = std::hypot(zeta[0], zeta[1], zeta[2]);
  const double d = std::hypot(zeta[0] - xi[0], zeta[1] - xi[1], zeta[2] - xi[2]);
  return std::pow(r, a) - std::pow(d, a);
}

/// Generalized binomial coefficient C(a, k).
inline double binomial(double a, int k) {
  double c = 1.0;
  for (int i = 0; i < k; ++i) c *= (a - i) / (i + 1);
  return c;
}

inline TaylorCoefficients taylor_coefficients(double exponent, int degree) {
  if (degree < 1 || degree > 16)
    throw DegreeTooHigh("degree must lie in [1, 16], got " + std::to_string(degree));
  TaylorCoefficients tc;
  tc.exponent = exponent;
  tc.degree = degree;
  for (int k = 1; k <= degree; ++k) {
    const double outer = -binomial(0.5 * exponent, k) * (k % 2 ? -1.0 : 1.0);
    for (int q = 0; q <= k; ++q) {
      const int p = k - q;
      if (p + 2 * q > degree) continue;
      const double c = outer * binomial(k, q) * std::ldexp(1.0, p) * (q % 2 ? -1.0 : 1.0);
      tc.coefficients[{p, q}] += c;
    }
  }
  return tc;
}

}  // namespace fracharm
