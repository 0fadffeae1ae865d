#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "fracharm/field.hpp"
#include "fracharm/grassmann.hpp"
#include "fracharm/spectral.hpp"

namespace fracharm {

/// The unit sphere S^{m−1} ⊂ ℝ^m: tangent dimension m−1, normal line spanned
/// by the point itself.
struct SphereTarget {
  int m = 3;
  int tangent_dim() const { return m - 1; }
};

inline constexpr double kMapTolerance = 1e-9;

/// A sphere-valued map: | |u(x)| − 1 | ≤ 1e-9 at every grid point.
class ManifoldMap {
 public:
  explicit ManifoldMap(VectorFieldMap field) : field_(std::move(field)) {
    if (field_.target_dim() < 2) throw InvalidMap("sphere target needs m >= 2");
    auto r = magnitude(field_);
    for (std::size_t i = 0; i < r.size(); ++i)
      if (std::abs(r[i] - 1.0) > kMapTolerance)
        throw InvalidMap("|u| = " + std::to_string(r[i]) + " at point " + std::to_string(i));
  }

  const VectorFieldMap& field() const { return field_; }
  const PeriodicGrid& grid() const { return field_.grid(); }
  int target_dim() const { return int(field_.target_dim()); }
  SphereTarget target() const { return {target_dim()}; }
  const ScalarField& operator[](std::size_t i) const { return field_[i]; }

 private:
  VectorFieldMap field_;
};

/// Π(w) = w/|w|, pointwise.
inline ManifoldMap nearest_projection(const VectorFieldMap& w) {
  auto r = magnitude(w);
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] < 1e-6)
      throw NearZeroVector("|w| = " + std::to_string(r[i]) + " at point " + std::to_string(i));
  return ManifoldMap(map_components(w, [&](const ScalarField& c) {
    return zip_pointwise(c, r, [](double a, double b) { return a / b; });
  }));
}

/// Pointwise tangent and normal projections along a map.
struct ProjectorField {
  MatrixField tangent;
  MatrixField normal;
};

/// P^N = u uᵀ and P^T = Id − u uᵀ.
inline ProjectorField projector_fields(const ManifoldMap& u) {
  const std::size_t m = u.target_dim();
  std::vector<ScalarField> nn;
  nn.reserve(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) nn.push_back(u[i] * u[j]);
  MatrixField normal(m, m, std::move(nn));
  return {MatrixField::identity(u.grid(), m) - normal, normal};
}

/// Largest pointwise violation of symmetry, idempotence, complementarity and
/// P^N P^T = 0.
inline double projector_defect(const ProjectorField& p) {
  const auto& t = p.tangent;
  const auto& n = p.normal;
  const auto id = MatrixField::identity(t.grid(), t.rows());
  double worst = 0.0;
  worst = std::max(worst, max_abs_difference(t, t.transpose()));
  worst = std::max(worst, max_abs_difference(n, n.transpose()));
  worst = std::max(worst, max_abs_difference(multiply(t, t), t));
  worst = std::max(worst, max_abs_difference(multiply(n, n), n));
  worst = std::max(worst, max_abs_difference(t + n, id));
  worst = std::max(worst, max_abs(multiply(n, t)));
  return worst;
}

/// Field of multivectors, one coefficient field per basis blade.
class MultiVectorField {
 public:
  MultiVectorField(int m, std::vector<ScalarField> coeffs) : m_(m), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != (std::size_t(1) << m)) throw DimensionMismatch("blade count mismatch");
  }
  int dim() const { return m_; }
  const PeriodicGrid& grid() const { return coeffs_.front().grid(); }
  const ScalarField& coefficient(unsigned mask) const { return coeffs_[mask]; }
  MultiVector at(std::size_t point) const {
    MultiVector a(m_);
    for (unsigned b = 0; b < coeffs_.size(); ++b) a[b] = coeffs_[b][point];
    return a;
  }

 private:
  int m_;
  std::vector<ScalarField> coeffs_;
};

/// Gauss map of the sphere: the unit normal 1-vector ν(u(x)) = u(x).
inline MultiVectorField gauss_map(const ManifoldMap& u) {
  const int m = u.target_dim();
  std::vector<ScalarField> c(std::size_t(1) << m, ScalarField::zeros(u.grid()));
  for (int i = 0; i < m; ++i) c[std::size_t(1) << i] = u[i];
  return MultiVectorField(m, std::move(c));
}

/// max over points and axes of |P^N(x) ∂_k u(x)|; zero in the continuum.
inline double tangency_residual(const ManifoldMap& u) {
  const auto normal = projector_fields(u).normal;
  double worst = 0.0;
  for (int k = 0; k < u.grid().dimension(); ++k) {
    auto d = partial_derivative(u.field(), unit_index(k));
    worst = std::max(worst, max_abs(apply(normal, d)));
  }
  return worst;
}

/// max over points of |((−Δ)^{n/2}u)(x) ∧ ν(u)(x)|.
inline double wedge_residual(const ManifoldMap& u) {
  const auto lap = fractional_laplacian(u.field(), 0.5 * u.grid().dimension());
  const auto nu = gauss_map(u);
  double worst = 0.0;
  for (std::size_t i = 0; i < u.grid().size(); ++i) {
    auto w = wedge(MultiVector::vector(lap.at(i)), nu.at(i));
    worst = std::max(worst, norm(w));
  }
  return worst;
}

}  // namespace fracharm
