#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "fracharm/littlewood_paley.hpp"
#include "fracharm/norms.hpp"
#include "fracharm/spectral.hpp"

namespace fracharm {

/// max_x sup_j |f^j(x)| / M(f)(x).
inline double lemma_a1_ratio(const ScalarField& f, const DyadicPartition& part) {
  if (f.max_abs() == 0.0) throw DivisionByZero("lemma_a1_ratio of the zero field");
  auto lows = low_pass_ladder(shell_decomposition(f, part));
  auto mf = maximal_function(f);
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double sup = 0.0;
    for (const auto& fj : lows) sup = std::max(sup, std::abs(fj[i]));
    if (mf[i] > 0.0) worst = std::max(worst, sup / mf[i]);
  }
  return worst;
}

namespace detail {

// Pointwise Frobenius norm of the k-th derivative tensor of the field whose
// spectrum is s, k ≤ 2.
inline ScalarField derivative_tensor_norm(const Spectrum& s, int k) {
  const auto& grid = s.grid;
  const int n = grid.dimension();
  std::vector<MultiIndex> terms;
  if (k == 0) terms.push_back({0, 0, 0});
  for (int a = 0; a < n && k >= 1; ++a) {
    if (k == 1) {
      terms.push_back(unit_index(a));
      continue;
    }
    for (int b = 0; b < n; ++b) {
      MultiIndex alpha{0, 0, 0};
      alpha[a] += 1;
      alpha[b] += 1;
      terms.push_back(alpha);
    }
  }
  std::vector<double> acc(grid.size(), 0.0);
  for (const auto& alpha : terms) {
    Spectrum d = s;
    for (std::size_t i = 0; i < grid.size(); ++i)
      d.coeffs[i] *= derivative_symbol(alpha, grid.frequency(i), grid);
    auto v = from_frequency(d);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i] * v[i];
  }
  for (double& x : acc) x = std::sqrt(x);
  return ScalarField(grid, std::move(acc));
}

}  // namespace detail

/// 2^{-Jk}‖∇^k K_J‖_{L¹} / 4^k, where K_J is the periodic kernel of the radial
/// profile dilated to scale 2^J, J = j_max − 2. The dilation normalisation
/// makes the value an approximation of the scale-free whole-space quantity.
inline double lemma_a2_check(const DyadicPartition& part, int k,
                             const std::function<double(double)>& profile) {
  if (k < 0 || k > 2) throw OrderTooHigh("lemma_a2_check supports k <= 2");
  const auto& grid = part.grid();
  const int J = part.j_max() - 2;
  Spectrum s{grid, std::vector<Complex>(grid.size())};
  // Kernel (2π)^{-n} Σ φ(2^{-J}ξ) e^{iξx}; DFT coefficients carry N^n.
  const double scale = double(grid.size()) / grid.total_measure();
  for (std::size_t i = 0; i < grid.size(); ++i)
    s.coeffs[i] = scale * profile(std::ldexp(part.frequency_norm(i), -J));
  auto mag = detail::derivative_tensor_norm(s, k);
  return std::ldexp(lp_norm(mag, 1.0), -J * k) / std::pow(4.0, k);
}

inline double lemma_a2_check(const DyadicPartition& part, int k) {
  return lemma_a2_check(part, k, cutoff_profile);
}

/// 2^{-kj}‖∇^k f_j‖_∞ / (4^k‖f_j‖_∞); 0 when the shell piece is at rounding
/// level relative to f.
inline double lemma_a3_check(const ScalarField& f, int j, int k, const DyadicPartition& part) {
  if (k < 0 || k > 2) throw OrderTooHigh("lemma_a3_check supports k <= 2");
  auto fj = project_shell(f, j, part);
  const double base = fj.max_abs();
  if (base <= 1e-12 * f.max_abs()) return 0.0;
  if (k == 0) return 1.0;
  auto mag = detail::derivative_tensor_norm(to_frequency(fj), k);
  return std::ldexp(mag.max_abs(), -k * j) / (std::pow(4.0, k) * base);
}

/// Σ_j 2^{-jn}∫(X^j)² divided by Σ_k 2^{-kn}∫X_k².
inline double equiv_ratio(const ScalarField& x, const DyadicPartition& part) {
  auto shells = shell_decomposition(x, part);
  auto lows = low_pass_ladder(shells);
  const int n = x.grid().dimension();
  double num = 0.0, den = 0.0;
  for (int j = part.j_min(); j <= part.j_max(); ++j) {
    const double w = std::pow(2.0, -double(j) * n);
    num += w * inner_product(lows[j - part.j_min()], lows[j - part.j_min()]);
    den += w * inner_product(shells[j - part.j_min()], shells[j - part.j_min()]);
  }
  if (den == 0.0) throw DivisionByZero("equiv_ratio of the zero field");
  return num / den;
}

}  // namespace fracharm
