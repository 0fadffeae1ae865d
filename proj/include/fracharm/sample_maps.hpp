#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "fracharm/manifold.hpp"
#include "fracharm/random_field.hpp"

namespace fracharm {

// Reference maps into spheres used by tests, examples and the suites.

/// (cos x₁, sin x₁, 0, …): critical for every odd n, since |ξ| = 1 on both
/// components.
inline ManifoldMap circle_map(const PeriodicGrid& grid, int m = 2) {
  if (m < 2) throw InvalidMap("circle map needs m >= 2");
  std::vector<ScalarField> c;
  c.push_back(ScalarField::sample(grid, [](const auto& x) { return std::cos(x[0]); }));
  c.push_back(ScalarField::sample(grid, [](const auto& x) { return std::sin(x[0]); }));
  for (int i = 2; i < m; ++i) c.push_back(ScalarField::zeros(grid));
  return ManifoldMap(VectorFieldMap(std::move(c)));
}

/// The degree-one Blaschke factor z ↦ (z − a)/(1 − a z) on z = e^{ix₁}, |a| < 1.
/// Its coefficients live on ξ₁ ≥ 0, so (−Δ)^{1/2} acts as −i∂₁ and the image
/// is a positive multiple of the map itself: a critical point for n = 1.
inline ManifoldMap blaschke_map(const PeriodicGrid& grid, double a) {
  if (!(std::abs(a) < 1.0)) throw InvalidMap("Blaschke parameter must satisfy |a| < 1");
  auto value = [a](double t) {
    const std::complex<double> z = std::polar(1.0, t);
    return (z - a) / (1.0 - a * z);
  };
  return nearest_projection(VectorFieldMap(
      {ScalarField::sample(grid, [&](const auto& x) { return value(x[0]).real(); }),
       ScalarField::sample(grid, [&](const auto& x) { return value(x[0]).imag(); })}));
}

/// |sin(t/2)|^q: smooth except at t ∈ 2πℤ, where it behaves like |t|^q.
inline double cusp_profile(double t, double q) { return std::pow(std::abs(std::sin(0.5 * t)), q); }

/// A sphere map of finite regularity, so discretization errors decay
/// algebraically instead of spectrally:
///   normalize((cos x₁ + a b(x₂), sin x₁ + a b(x_n), a b(x₁))),  b = cusp_profile(·, q).
/// The cusps sit on grid nodes. Spectral derivative errors then scale like h^q
/// with a clean rate; the default q = 9/4 gives a halving factor near 4.75.
/// On n = 1 every argument collapses to x₁.
inline ManifoldMap cusp_sphere_map(const PeriodicGrid& grid, double a = 0.2, double q = 2.25) {
  const int n = grid.dimension();
  const int ax2 = n > 1 ? 1 : 0, ax3 = n > 1 ? 2 : 0;
  return nearest_projection(VectorFieldMap(
      {ScalarField::sample(grid, [&](const auto& x) {
         return std::cos(x[0]) + a * cusp_profile(x[ax2], q);
       }),
       ScalarField::sample(grid, [&](const auto& x) {
         return std::sin(x[0]) + a * cusp_profile(x[ax3], q);
       }),
       ScalarField::sample(grid, [&](const auto& x) { return a * cusp_profile(x[0], q); })}));
}

/// Circle map plus a tangent perturbation: Π(u₀ + ε P^T g / max|P^T g|) with g a
/// random vector field of regularity s.
inline ManifoldMap perturbed_circle_map(const PeriodicGrid& grid, int m, double amplitude,
                                        std::uint64_t seed, double s = 2.0) {
  const auto base = circle_map(grid, m);
  const auto g = gaussian_random_vector(grid, m, s, seed);
  const auto tangent = apply(projector_fields(base).tangent, g);
  const double peak = magnitude(tangent).max_abs();
  if (peak == 0.0) return base;
  return nearest_projection(base.field() + (amplitude / peak) * tangent);
}

/// Π(ε_m + ½ g / max|g|) with g a random vector field of regularity s; |w| ≥ ½.
inline ManifoldMap random_sphere_map(const PeriodicGrid& grid, int m, double s,
                                     std::uint64_t seed) {
  const auto g = gaussian_random_vector(grid, m, s, seed);
  const double peak = magnitude(g).max_abs();
  std::vector<ScalarField> c;
  for (int i = 0; i < m; ++i) {
    ScalarField gi = peak > 0.0 ? (0.5 / peak) * g[i] : g[i];
    c.push_back(i == m - 1 ? gi + ScalarField::constant(grid, 1.0) : gi);
  }
  return nearest_projection(VectorFieldMap(std::move(c)));
}

}  // namespace fracharm
