#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fracharm/fft.hpp"
#include "fracharm/field.hpp"

namespace fracharm {

namespace detail {

// True when the first nonzero entry of k is positive.
inline bool in_positive_half(const std::array<int, 3>& k, int n) {
  for (int a = 0; a < n; ++a) {
    if (k[a] > 0) return true;
    if (k[a] < 0) return false;
  }
  return false;
}

// Visits the lattice points of the Chebyshev shell max|k_a| = L in
// lexicographic order, restricted to the positive half.
template <class Fn>
void for_each_in_shell(int n, int L, Fn&& fn) {
  std::array<int, 3> k{0, 0, 0};
  const int lo1 = n >= 2 ? -L : 0, hi1 = n >= 2 ? L : 0;
  const int lo2 = n >= 3 ? -L : 0, hi2 = n >= 3 ? L : 0;
  for (k[0] = -L; k[0] <= L; ++k[0])
    for (k[1] = lo1; k[1] <= hi1; ++k[1])
      for (k[2] = lo2; k[2] <= hi2; ++k[2]) {
        int m = std::max({std::abs(k[0]), std::abs(k[1]), std::abs(k[2])});
        if (m == L && in_positive_half(k, n)) fn(k);
      }
}

}  // namespace detail

/// Mean-zero Gaussian field with independent Fourier-series amplitudes of
/// standard deviation (1+|ξ|²)^{-(s+n/2+0.05)/2}.
///
/// Frequencies are drawn shell by shell (Chebyshev radius L = 1, 2, ...) in a
/// fixed order, so the field on a grid of size N is the truncation of the
/// field with the same seed on any finer grid. Nyquist modes are left empty.
inline ScalarField gaussian_random_field(const PeriodicGrid& grid, double s, std::uint64_t seed) {
  if (!(s >= 0.0)) throw InvalidField("regularity must be >= 0");
  const int n = grid.dimension();
  const int N = grid.points_per_axis();
  const double exponent = -(s + 0.5 * n + 0.05) / 2.0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> coeffs(grid.size(), Complex(0.0));
  const double to_dft = double(grid.size());
  for (int L = 1; L < N / 2; ++L) {
    detail::for_each_in_shell(n, L, [&](const std::array<int, 3>& k) {
      const double x = normal(rng);
      const double y = normal(rng);
      double r2 = 0.0;
      for (int a = 0; a < n; ++a) r2 += double(k[a]) * k[a];
      const double sigma = std::pow(1.0 + r2, exponent);
      const Complex amp = sigma * Complex(x, y) / std::sqrt(2.0) * to_dft;
      const std::size_t i = grid.flat_index(k);
      coeffs[i] = amp;
      coeffs[grid.conjugate_index(i)] = std::conj(amp);
    });
  }
  return from_frequency(Spectrum{grid, std::move(coeffs)});
}

/// m independent random fields, seeds derived from one base seed.
inline VectorFieldMap gaussian_random_vector(const PeriodicGrid& grid, std::size_t m, double s,
                                             std::uint64_t seed) {
  std::vector<ScalarField> c;
  for (std::size_t i = 0; i < m; ++i)
    c.push_back(gaussian_random_field(grid, s, seed * 1000003ULL + i));
  return VectorFieldMap(std::move(c));
}

/// Rows×cols independent random fields.
inline MatrixField gaussian_random_matrix(const PeriodicGrid& grid, std::size_t rows,
                                          std::size_t cols, double s, std::uint64_t seed) {
  std::vector<ScalarField> e;
  for (std::size_t i = 0; i < rows * cols; ++i)
    e.push_back(gaussian_random_field(grid, s, seed * 1000003ULL + 7919ULL + i));
  return MatrixField(rows, cols, std::move(e));
}

/// Keeps only modes with every |ξ_k| < N/4, so pointwise products of two such
/// fields are free of aliasing.
inline ScalarField band_limit_half(const ScalarField& f) {
  Spectrum s = to_frequency(f);
  const auto& grid = f.grid();
  const int cut = grid.points_per_axis() / 4;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Frequency xi = grid.frequency(i);
    for (int a = 0; a < grid.dimension(); ++a)
      if (std::abs(xi.k[a]) >= cut) {
        s.coeffs[i] = 0.0;
        break;
      }
  }
  return from_frequency(s);
}

}  // namespace fracharm
