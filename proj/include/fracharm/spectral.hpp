#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "fracharm/fft.hpp"
#include "fracharm/field.hpp"

namespace fracharm {

/// A scalar Fourier multiplier. The symbol receives the lattice frequency and
/// the grid (odd symbols need the grid to recognise the Nyquist plane). The
/// zero mode is never passed to the symbol; zero_mode_value is used instead.
struct FourierMultiplier {
  std::function<Complex(const Frequency&, const PeriodicGrid&)> symbol;
  Complex zero_mode_value{0.0, 0.0};

  std::vector<Complex> tabulate(const PeriodicGrid& grid) const {
    std::vector<Complex> table(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      Frequency xi = grid.frequency(i);
      table[i] = xi.is_zero() ? zero_mode_value : symbol(xi, grid);
    }
    return table;
  }
};

namespace detail {

inline ScalarField apply_table(const ScalarField& f, const std::vector<Complex>& table) {
  Spectrum s = to_frequency(f);
  for (std::size_t i = 0; i < table.size(); ++i) s.coeffs[i] *= table[i];
  return from_frequency(s);
}

/// Applies a real radial symbol g(|ξ|²); the zero mode gets zero_value.
template <class Fn>
ScalarField apply_radial(const ScalarField& f, Fn&& g, double zero_value) {
  Spectrum s = to_frequency(f);
  const auto& grid = f.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Frequency xi = grid.frequency(i);
    s.coeffs[i] *= xi.is_zero() ? zero_value : g(xi.norm_squared());
  }
  return from_frequency(s);
}

inline void require_mean_zero(const ScalarField& f, const char* what) {
  const double scale = std::max(f.max_abs(), 1e-300);
  if (std::abs(f.mean()) > 1e-10 * scale)
    throw MeanNotZero(std::string(what) + ": field mean " + std::to_string(f.mean()));
}

}  // namespace detail

inline double hermitian_defect(const std::vector<Complex>& table, const PeriodicGrid& grid) {
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Complex a = table[i];
    const Complex b = std::conj(table[grid.conjugate_index(i)]);
    const double scale = std::max(1.0, std::abs(a));
    worst = std::max(worst, std::abs(a - b) / scale);
  }
  return worst;
}

inline ScalarField apply_multiplier(const ScalarField& f, const FourierMultiplier& mult) {
  auto table = mult.tabulate(f.grid());
  const double defect = hermitian_defect(table, f.grid());
  if (defect > 1e-12)
    throw NonHermitianSymbol("symbol(-xi) != conj(symbol(xi)), defect " +
                             std::to_string(defect));
  return detail::apply_table(f, table);
}

/// Multiplier with symbol |ξ|^{2s}; the zero mode maps to 0 unless s = 0.
inline FourierMultiplier fractional_laplacian_symbol(double s) {
  return FourierMultiplier{
      [s](const Frequency& xi, const PeriodicGrid&) {
        return Complex(std::pow(xi.norm_squared(), s), 0.0);
      },
      Complex(s == 0.0 ? 1.0 : 0.0, 0.0)};
}

/// (−Δ)^s f. Negative orders require a mean-zero field.
inline ScalarField fractional_laplacian(const ScalarField& f, double s) {
  if (s == 0.0) return f;
  if (s < 0.0) detail::require_mean_zero(f, "fractional_laplacian");
  return detail::apply_radial(f, [s](double r2) { return std::pow(r2, s); }, 0.0);
}

inline VectorFieldMap fractional_laplacian(const VectorFieldMap& u, double s) {
  return map_components(u, [s](const ScalarField& c) { return fractional_laplacian(c, s); });
}

inline MatrixField fractional_laplacian(const MatrixField& q, double s) {
  return map_entries(q, [s](const ScalarField& c) { return fractional_laplacian(c, s); });
}

/// Negative-order smoothing that discards the mean first, for measuring
/// distribution-valued outputs in homogeneous negative norms.
inline ScalarField smooth_mean_free(const ScalarField& f, double s) {
  return fractional_laplacian(subtract_mean(f), s);
}

/// Symbol iξ_k/|ξ| of the k-th Riesz transform.
inline FourierMultiplier riesz_symbol(int axis) {
  return FourierMultiplier{
      [axis](const Frequency& xi, const PeriodicGrid& grid) {
        return Complex(0.0, grid.odd_component(xi, axis) / xi.norm());
      },
      Complex(0.0, 0.0)};
}

/// The n Riesz transforms R_k f. The mean of f is annihilated.
inline std::vector<ScalarField> riesz_transform(const ScalarField& f) {
  const auto& grid = f.grid();
  Spectrum s = to_frequency(f);
  std::vector<ScalarField> out;
  out.reserve(grid.dimension());
  for (int k = 0; k < grid.dimension(); ++k) {
    Spectrum sk = s;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      Frequency xi = grid.frequency(i);
      sk.coeffs[i] *= xi.is_zero() ? Complex(0.0)
                                   : Complex(0.0, grid.odd_component(xi, k) / xi.norm());
    }
    out.push_back(from_frequency(sk));
  }
  return out;
}

/// Σ_k of the adjoint Riesz symbols −iξ_k/|ξ| applied to g_k. Left inverse of
/// riesz_transform on mean-zero fields away from the Nyquist planes.
inline ScalarField riesz_contraction(const std::vector<ScalarField>& g) {
  if (g.empty()) throw DimensionMismatch("riesz_contraction needs components");
  const auto& grid = g.front().grid();
  for (const auto& c : g) require_same_grid(grid, c.grid());
  if (int(g.size()) != grid.dimension())
    throw DimensionMismatch("riesz_contraction expects " + std::to_string(grid.dimension()) +
                            " components");
  Spectrum acc{grid, std::vector<Complex>(grid.size(), Complex(0.0))};
  for (int k = 0; k < grid.dimension(); ++k) {
    Spectrum sk = to_frequency(g[k]);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      Frequency xi = grid.frequency(i);
      if (xi.is_zero()) continue;
      acc.coeffs[i] += Complex(0.0, -grid.odd_component(xi, k) / xi.norm()) * sk.coeffs[i];
    }
  }
  return from_frequency(acc);
}

using MultiIndex = std::array<int, 3>;

inline int order(const MultiIndex& alpha) { return alpha[0] + alpha[1] + alpha[2]; }

/// Symbol Π_k (iξ_k)^{α_k}. Odd powers use the Nyquist-free component.
inline Complex derivative_symbol(const MultiIndex& alpha, const Frequency& xi,
                                 const PeriodicGrid& grid) {
  Complex value(1.0, 0.0);
  for (int a = 0; a < grid.dimension(); ++a) {
    if (alpha[a] == 0) continue;
    const double k = alpha[a] % 2 ? grid.odd_component(xi, a) : xi.k[a];
    value *= std::pow(Complex(0.0, k), alpha[a]);
  }
  return value;
}

/// ∂^α f, |α| ≤ 8.
inline ScalarField partial_derivative(const ScalarField& f, const MultiIndex& alpha) {
  const auto& grid = f.grid();
  for (int a = 0; a < 3; ++a) {
    if (alpha[a] < 0) throw OrderTooHigh("negative multi-index entry");
    if (a >= grid.dimension() && alpha[a] != 0)
      throw DimensionMismatch("multi-index uses axis beyond the grid dimension");
  }
  if (order(alpha) > 8) throw OrderTooHigh("|alpha| = " + std::to_string(order(alpha)));
  if (order(alpha) == 0) return f;
  Spectrum s = to_frequency(f);
  for (std::size_t i = 0; i < grid.size(); ++i)
    s.coeffs[i] *= derivative_symbol(alpha, grid.frequency(i), grid);
  return from_frequency(s);
}

inline MultiIndex unit_index(int axis) {
  MultiIndex alpha{0, 0, 0};
  alpha[axis] = 1;
  return alpha;
}

inline std::vector<ScalarField> gradient(const ScalarField& f) {
  std::vector<ScalarField> out;
  for (int a = 0; a < f.grid().dimension(); ++a)
    out.push_back(partial_derivative(f, unit_index(a)));
  return out;
}

inline VectorFieldMap partial_derivative(const VectorFieldMap& u, const MultiIndex& alpha) {
  return map_components(u, [&](const ScalarField& c) { return partial_derivative(c, alpha); });
}

inline MatrixField partial_derivative(const MatrixField& q, const MultiIndex& alpha) {
  return map_entries(q, [&](const ScalarField& c) { return partial_derivative(c, alpha); });
}

}  // namespace fracharm
