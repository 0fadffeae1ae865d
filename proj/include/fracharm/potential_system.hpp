#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "fracharm/commutators.hpp"
#include "fracharm/manifold.hpp"

namespace fracharm {

/// The rewritten Euler-Lagrange system Λv = Ωv + 2Ω̃₁v + Ω̃₂ (Λ = (−Δ)^{n/4})
/// for v = (P^TΛu, P^NΛu), with
///   Ω  = 2[[−ω, ω], [ω, −ω]]            (antisymmetric)
///   Ω̃₁ = [[−ω₁, −(ω₁+ω₂)], [ω₁, ω₁+ω₂]]
///   Ω̃₂ = (T(P^T,u), R(P^T,u) + ΛR̄ f(P^N,u)).
/// Ω̃₂ is distribution-valued; it is kept raw and smoothed by |ξ|^{−n/2}.
struct PotentialSystem {
  VectorFieldMap v;
  MatrixField big_omega;
  MatrixField tilde_omega1;
  VectorFieldMap tilde_omega2;
  VectorFieldMap tilde_omega2_smoothed;
  OmegaFields omegas;
};

namespace detail {

// [[a, b], [c, d]] as one 2m×2m field.
inline MatrixField block_matrix(const MatrixField& a, const MatrixField& b, const MatrixField& c,
                                const MatrixField& d) {
  const std::size_t m = a.rows();
  std::vector<ScalarField> e;
  e.reserve(4 * m * m);
  for (std::size_t i = 0; i < 2 * m; ++i)
    for (std::size_t j = 0; j < 2 * m; ++j) {
      const auto& blk = i < m ? (j < m ? a : b) : (j < m ? c : d);
      e.push_back(blk(i % m, j % m));
    }
  return MatrixField(2 * m, 2 * m, std::move(e));
}

inline VectorFieldMap stack(const VectorFieldMap& top, const VectorFieldMap& bottom) {
  auto c = top.components();
  c.insert(c.end(), bottom.components().begin(), bottom.components().end());
  return VectorFieldMap(std::move(c));
}

}  // namespace detail

inline PotentialSystem assemble_system(const ManifoldMap& u) {
  const auto h = detail::half_dim(u.grid());
  const auto p = projector_fields(u);
  const auto lu = detail::lam(u.field(), h);
  auto v = detail::stack(apply(p.tangent, lu), apply(p.normal, lu));

  auto w = omega_fields(p.tangent);
  const auto two_w = 2.0 * w.omega;
  auto big = detail::block_matrix(-1.0 * two_w, two_w, two_w, -1.0 * two_w);
  const auto w12 = w.omega1 + w.omega2;
  auto tilde1 = detail::block_matrix(-1.0 * w.omega1, -1.0 * w12, w.omega1, w12);

  auto top = op_T_euler(p.tangent, u.field());
  auto bottom = op_R_remainder(p.tangent, u.field()) + structure_rhs(op_f_structure(p.normal, u));
  auto tilde2 = detail::stack(top, bottom);
  auto smoothed = detail::lam(tilde2, -h);
  return {std::move(v), std::move(big), std::move(tilde1), std::move(tilde2), std::move(smoothed),
          std::move(w)};
}

/// Λv − Ωv − 2Ω̃₁v − Ω̃₂ before smoothing.
inline VectorFieldMap system_defect(const PotentialSystem& sys) {
  const double h = detail::half_dim(sys.v.grid());
  return detail::lam(sys.v, h) - apply(sys.big_omega, sys.v) -
         2.0 * apply(sys.tilde_omega1, sys.v) - sys.tilde_omega2;
}

/// ‖|ξ|^{−n/2}(Λv − Ωv − 2Ω̃₁v − Ω̃₂)‖_{L²}.
inline double system_residual(const PotentialSystem& sys) {
  const double h = detail::half_dim(sys.v.grid());
  const auto s = detail::lam(system_defect(sys), -h);
  return std::sqrt(inner_product(s, s));
}

/// Largest pointwise defect of the six rewriting identities, each relative to
/// the size of its left side:
///   pt  (ΛP^T)P^T = ω₁ + ω + ΛP^T/2
///   pn  (ΛP^T)P^N = ω₂ + ω₁ − ω + ΛP^T/2
///   TT  ½(ΛP^T)(P^T w) = (ω₁ + ω)P^T w
///   TN  ½(ΛP^T)(P^N w) = (ω₁ + ω₂ − ω)P^N w
///   NT  ½(ΛP^N)(P^T w) = −(ω₁ + ω)P^T w
///   NN  ½(ΛP^N)(P^N w) = (−ω₂ − ω₁ + ω)P^N w,   w = Λu.
inline std::array<double, 6> rewriting_identity_defects(const ManifoldMap& u) {
  const double h = detail::half_dim(u.grid());
  const auto p = projector_fields(u);
  const auto w = omega_fields(p.tangent);
  const auto lt = detail::lam(p.tangent, h), ln = detail::lam(p.normal, h);
  const auto lu = detail::lam(u.field(), h);
  const auto tw = apply(p.tangent, lu), nw = apply(p.normal, lu);
  auto rel = [](const auto& lhs, const auto& rhs) {
    return max_abs_difference(lhs, rhs) / std::max(1.0, max_abs(lhs));
  };
  return {
      rel(multiply(lt, p.tangent), w.omega1 + w.omega + 0.5 * lt),
      rel(multiply(lt, p.normal), w.omega2 + w.omega1 - w.omega + 0.5 * lt),
      rel(0.5 * apply(lt, tw), apply(w.omega1 + w.omega, tw)),
      rel(0.5 * apply(lt, nw), apply(w.omega1 + w.omega2 - w.omega, nw)),
      rel(0.5 * apply(ln, tw), -1.0 * apply(w.omega1 + w.omega, tw)),
      rel(0.5 * apply(ln, nw), apply(w.omega - w.omega2 - w.omega1, nw)),
  };
}

}  // namespace fracharm
