#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "fracharm/field.hpp"
#include "fracharm/littlewood_paley.hpp"
#include "fracharm/manifold.hpp"
#include "fracharm/spectral.hpp"

namespace fracharm {

// Operators are written with Λ^a := (−Δ)^{a/2}, i.e. symbol |ξ|^a. On a grid
// of dimension n the basic order is n/2: Λ^{n/2} = (−Δ)^{n/4}. Q is a
// matrix field acting on the vector field u by pointwise multiplication;
// scalar overloads wrap Q as 1×1 and u as a 1-vector.

namespace detail {

// |ξ|^a with the zero mode sent to 0; negative orders discard the mean.
inline ScalarField lam(const ScalarField& f, double a) {
  if (a == 0.0) return f;
  return a < 0.0 ? smooth_mean_free(f, 0.5 * a) : fractional_laplacian(f, 0.5 * a);
}
inline VectorFieldMap lam(const VectorFieldMap& u, double a) {
  return map_components(u, [a](const ScalarField& c) { return lam(c, a); });
}
inline MatrixField lam(const MatrixField& q, double a) {
  return map_entries(q, [a](const ScalarField& c) { return lam(c, a); });
}

inline double half_dim(const PeriodicGrid& g) { return 0.5 * g.dimension(); }

inline void require_pair(const MatrixField& q, const VectorFieldMap& u) {
  require_same_grid(q.grid(), u.grid());
  if (q.cols() != u.target_dim()) throw DimensionMismatch("Q columns must match u components");
}

template <class Op>
ScalarField scalar_form(const ScalarField& q, const ScalarField& u, Op&& op) {
  require_same_grid(q.grid(), u.grid());
  return op(MatrixField::scalar(q), VectorFieldMap({u}))[0];
}

}  // namespace detail

/// Λ^{n/2}[(Λ^{n/2}Q) u] − Q Λ^n u + Λ^{n/2}[Q Λ^{n/2}u], term by term as displayed.
inline VectorFieldMap op_T(const MatrixField& q, const VectorFieldMap& u) {
  detail::require_pair(q, u);
  const double h = detail::half_dim(u.grid());
  return detail::lam(apply(detail::lam(q, h), u), h) - apply(q, detail::lam(u, 2 * h)) +
         detail::lam(apply(q, detail::lam(u, h)), h);
}

/// (Λ^{n/2}Q)(Λ^{n/2}u) − Q Λ^n u + Λ^{n/2}[Q Λ^{n/2}u].
///
/// The variant for which Λ^{n/2}(QΛ^{n/2}u) = T(Q,u) − (Λ^{n/2}Q)Λ^{n/2}u holds
/// whenever QΛ^n u = 0, and the exact adjoint of op_T_star:
/// ⟨op_T_star(Q,u), h⟩ = ⟨u, op_T_euler(Qᵀ, h)⟩.
inline VectorFieldMap op_T_euler(const MatrixField& q, const VectorFieldMap& u) {
  detail::require_pair(q, u);
  const double h = detail::half_dim(u.grid());
  const auto lu = detail::lam(u, h);
  return apply(detail::lam(q, h), lu) - apply(q, detail::lam(u, 2 * h)) +
         detail::lam(apply(q, lu), h);
}

/// Λ^{n/2}[(Λ^{n/2}Q) u] − Λ^n[Q u] + Λ^{n/2}[Q Λ^{n/2}u].
inline VectorFieldMap op_T_star(const MatrixField& q, const VectorFieldMap& u) {
  detail::require_pair(q, u);
  const double h = detail::half_dim(u.grid());
  return detail::lam(apply(detail::lam(q, h), u), h) - detail::lam(apply(q, u), 2 * h) +
         detail::lam(apply(q, detail::lam(u, h)), h);
}

inline ScalarField op_T(const ScalarField& q, const ScalarField& u) {
  return detail::scalar_form(q, u, [](const auto& a, const auto& b) { return op_T(a, b); });
}
inline ScalarField op_T_euler(const ScalarField& q, const ScalarField& u) {
  return detail::scalar_form(q, u, [](const auto& a, const auto& b) { return op_T_euler(a, b); });
}
inline ScalarField op_T_star(const ScalarField& q, const ScalarField& u) {
  return detail::scalar_form(q, u, [](const auto& a, const auto& b) { return op_T_star(a, b); });
}

/// The three paraproduct groups Π_k[op_T_star(Q,u)], k = 1, 2, 3, of scalar
/// fields: Λ^{n/2}Π_k(Λ^{n/2}Q, u) − Λ^nΠ_k(Q, u) + Λ^{n/2}Π_k(Q, Λ^{n/2}u).
inline std::array<ScalarField, 3> op_T_star_split(const ScalarField& q, const ScalarField& u,
                                                  const DyadicPartition& part) {
  const double h = detail::half_dim(u.grid());
  const auto lq = detail::lam(q, h), lu = detail::lam(u, h);
  auto piece = [&](int kind) {
    return detail::lam(paraproduct(lq, u, kind, part), h) -
           detail::lam(paraproduct(q, u, kind, part), 2 * h) +
           detail::lam(paraproduct(q, lu, kind, part), h);
  };
  return {piece(1), piece(2), piece(3)};
}

/// First-order Taylor coefficient of the symbol difference |ζ|^{n/2} − |ξ−ζ|^{n/2}
/// along a coordinate multi-index; the bands 1 ≤ |α| ≤ [n/2] for n ∈ {1, 3}
/// contain only |α| = 1.
inline double first_order_coefficient(const PeriodicGrid& g) { return detail::half_dim(g); }

/// Σ_{|α|=1} c_α Λ^{n/2}([Λ^{n/2−2}(∂^αQ)] ∂^αu) for n = 3; zero for n = 1.
inline VectorFieldMap op_M1(const MatrixField& q, const VectorFieldMap& u) {
  detail::require_pair(q, u);
  const auto& g = u.grid();
  const double h = detail::half_dim(g);
  auto out = VectorFieldMap::zeros(g, q.rows());
  if (g.dimension() / 2 < 1) return out;
  for (int k = 0; k < g.dimension(); ++k) {
    const auto a = unit_index(k);
    auto term = detail::lam(apply(detail::lam(partial_derivative(q, a), h - 2.0),
                                  partial_derivative(u, a)),
                            h);
    out = out + first_order_coefficient(g) * term;
  }
  return out;
}

/// Σ_{|α|=1} c_α Λ^{n/2}(∂^αQ [Λ^{n/2−2}(∂^αu)]) for n = 3; zero for n = 1.
inline VectorFieldMap op_M2(const MatrixField& q, const VectorFieldMap& u) {
  detail::require_pair(q, u);
  const auto& g = u.grid();
  const double h = detail::half_dim(g);
  auto out = VectorFieldMap::zeros(g, q.rows());
  if (g.dimension() / 2 < 1) return out;
  for (int k = 0; k < g.dimension(); ++k) {
    const auto a = unit_index(k);
    auto term = detail::lam(apply(partial_derivative(q, a),
                                  detail::lam(partial_derivative(u, a), h - 2.0)),
                            h);
    out = out + first_order_coefficient(g) * term;
  }
  return out;
}

inline ScalarField op_M1(const ScalarField& q, const ScalarField& u) {
  return detail::scalar_form(q, u, [](const auto& a, const auto& b) { return op_M1(a, b); });
}
inline ScalarField op_M2(const ScalarField& q, const ScalarField& u) {
  return detail::scalar_form(q, u, [](const auto& a, const auto& b) { return op_M2(a, b); });
}

/// R(Q,u) = Λ^{n/2}(QΛ^{n/2}u) − Λ^{n−1}(QΛu) + Λ^{n−1}(QΛu) − op_T_euler(Q,u).
/// The middle pair cancels; it is kept so the grouping mirrors the two
/// rewritten terms of the structure equation.
inline VectorFieldMap op_R_remainder(const MatrixField& q, const VectorFieldMap& u) {
  detail::require_pair(q, u);
  const int n = u.grid().dimension();
  const double h = 0.5 * n;
  const auto mid = detail::lam(apply(q, detail::lam(u, 1.0)), n - 1.0);
  return detail::lam(apply(q, detail::lam(u, h)), h) - mid + mid - op_T_euler(q, u);
}

/// The two rewritten terms of the structure equation, evaluated separately:
///   (3) Λ^{n/2}[QΛ^{n/2}u] − Λ^{n−1}[QΛu],  (4) Λ^{n−1}(QΛu) − op_T_euler(Q,u).
inline std::array<VectorFieldMap, 2> structure_rewrite_terms(const MatrixField& q,
                                                             const VectorFieldMap& u) {
  detail::require_pair(q, u);
  const int n = u.grid().dimension();
  const double h = 0.5 * n;
  const auto first = detail::lam(apply(q, detail::lam(u, h)), h);
  const auto second = detail::lam(apply(q, detail::lam(u, 1.0)), n - 1.0);
  const auto second_again = detail::lam(apply(q, detail::lam(u, 1.0)), n - 1.0);
  return {first - second, second_again - op_T_euler(q, u)};
}

/// f(P^N,u)_k = R_k(P^N Λ^{n/2}u) − Λ^{n/2−1}[P^N ∂_k u], k = 1..n; each entry is
/// an ℝ^m-valued field.
inline std::vector<VectorFieldMap> op_f_structure(const MatrixField& normal, const ManifoldMap& u) {
  detail::require_pair(normal, u.field());
  const auto& g = u.grid();
  const double h = detail::half_dim(g);
  const auto pn_lu = apply(normal, detail::lam(u.field(), h));
  std::vector<std::vector<ScalarField>> riesz(g.dimension());
  for (const auto& c : pn_lu.components()) {
    auto r = riesz_transform(c);
    for (int k = 0; k < g.dimension(); ++k) riesz[k].push_back(r[k]);
  }
  std::vector<VectorFieldMap> out;
  for (int k = 0; k < g.dimension(); ++k) {
    auto grad = apply(normal, partial_derivative(u.field(), unit_index(k)));
    out.push_back(VectorFieldMap(riesz[k]) - detail::lam(grad, h - 1.0));
  }
  return out;
}

/// Λ^{n/2} R̄ applied to the n-tuple f, R̄ being riesz_contraction componentwise.
inline VectorFieldMap structure_rhs(const std::vector<VectorFieldMap>& f) {
  const double h = detail::half_dim(f.front().grid());
  std::vector<ScalarField> out;
  for (std::size_t i = 0; i < f.front().target_dim(); ++i) {
    std::vector<ScalarField> parts;
    for (const auto& fk : f) parts.push_back(fk[i]);
    out.push_back(detail::lam(riesz_contraction(parts), h));
  }
  return VectorFieldMap(std::move(out));
}

/// ‖Λ^{−n/2}[Λ^{n/2}(P^NΛ^{n/2}u) − Λ^{n/2}R̄ f(P^N,u)]‖_{L²}: the structure
/// equation measured in the homogeneous order −n/2 norm. The bracket equals
/// Λ^{n/2}R̄Λ^{n/2−1}[P^N∇u] up to Nyquist modes, so it vanishes with P^N∇u.
inline double structure_residual(const ManifoldMap& u) {
  const auto normal = projector_fields(u).normal;
  const double h = detail::half_dim(u.grid());
  const auto lhs = detail::lam(apply(normal, detail::lam(u.field(), h)), h);
  const auto diff = lhs - structure_rhs(op_f_structure(normal, u));
  return std::sqrt(inner_product(detail::lam(diff, -h), detail::lam(diff, -h)));
}

/// S₁(Q,u) = Λ^{1/2}[QΛ^{1/2}u] − R̄[Q∂u] + [Λ^{1/2}Q] R[Λ^{1/2}u] on n = 1.
/// The middle Riesz factor is the contraction, so that R̄∂ = Λ and S₁(c,u) = 0.
inline ScalarField op_S1(const ScalarField& q, const ScalarField& u) {
  require_same_grid(q.grid(), u.grid());
  if (u.grid().dimension() != 1) throw WrongDimension("S1 is defined for n = 1 only");
  const auto lu = detail::lam(u, 0.5);
  return detail::lam(q * lu, 0.5) - riesz_contraction({q * partial_derivative(u, unit_index(0))}) +
         detail::lam(q, 0.5) * riesz_transform(lu)[0];
}

/// The matrices ω, ω₁, ω₂ built from a tangent projector P (and P^N = Id − P):
///   ω₁ = [(ΛP)P + PΛP − Λ(PP)]/2
///   ω₂ = (ΛP)P^N + PΛP^N − Λ(PP^N)
///   ω  = [(ΛP)P − PΛP]/2,   Λ = Λ^{n/2}.
struct OmegaFields {
  MatrixField omega;
  MatrixField omega1;
  MatrixField omega2;
};

inline OmegaFields omega_fields(const MatrixField& tangent) {
  const double h = detail::half_dim(tangent.grid());
  const auto id = MatrixField::identity(tangent.grid(), tangent.rows());
  const auto normal = id - tangent;
  const auto lt = detail::lam(tangent, h), ln = detail::lam(normal, h);
  const auto lt_t = multiply(lt, tangent), t_lt = multiply(tangent, lt);
  auto omega1 = 0.5 * (lt_t + t_lt - detail::lam(multiply(tangent, tangent), h));
  auto omega2 = multiply(lt, normal) + multiply(tangent, ln) -
                detail::lam(multiply(tangent, normal), h);
  auto omega = 0.5 * (lt_t - t_lt);
  return {omega, omega1, omega2};
}

/// P(Qu) − Q P u for an order-zero multiplier P.
inline ScalarField pseudo_commutator(const ScalarField& q, const ScalarField& u,
                                     const FourierMultiplier& p) {
  require_same_grid(q.grid(), u.grid());
  const auto& g = u.grid();
  auto table = p.tabulate(g);
  // Order zero: no growth from the inner half of the lattice to the outer half.
  double inner = 0.0, outer = 0.0;
  const double cut = 0.25 * g.points_per_axis();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.frequency(i).norm();
    (r < cut ? inner : outer) = std::max(r < cut ? inner : outer, std::abs(table[i]));
  }
  if (!std::isfinite(outer) || outer > 1.1 * inner + 1e-300)
    throw NonZeroOrder("symbol grows from " + std::to_string(inner) + " to " +
                       std::to_string(outer));
  return apply_multiplier(q * u, p) - q * apply_multiplier(u, p);
}

/// Λ^{n/2−1}(Qh) − QΛ^{n/2−1}h.
inline ScalarField half_order_commutator(const ScalarField& q, const ScalarField& h) {
  require_same_grid(q.grid(), h.grid());
  const double a = detail::half_dim(h.grid()) - 1.0;
  return detail::lam(q * h, a) - q * detail::lam(h, a);
}

}  // namespace fracharm
