#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "fracharm/errors.hpp"
#include "fracharm/grid.hpp"

namespace fracharm {

/// Real samples of a function on a PeriodicGrid. Values are immutable once the
/// field is built; every operation returns a new field.
class ScalarField {
 public:
  ScalarField(PeriodicGrid grid, std::vector<double> values)
      : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
      throw InvalidField("expected " + std::to_string(grid_.size()) +
                         " samples, got " + std::to_string(values_.size()));
    for (double v : values_)
      if (!std::isfinite(v)) throw InvalidField("non-finite sample");
  }

  static ScalarField zeros(const PeriodicGrid& grid) {
    return ScalarField(grid, std::vector<double>(grid.size(), 0.0));
  }
  static ScalarField constant(const PeriodicGrid& grid, double c) {
    return ScalarField(grid, std::vector<double>(grid.size(), c));
  }

  /// Samples fn(x) where x holds the coordinates of each grid point.
  template <class Fn>
  static ScalarField sample(const PeriodicGrid& grid, Fn&& fn) {
    std::vector<double> v(grid.size());
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      auto idx = grid.multi_index(i);
      for (int a = 0; a < grid.dimension(); ++a) x[a] = grid.spacing() * idx[a];
      v[i] = fn(x);
    }
    return ScalarField(grid, std::move(v));
  }

  const PeriodicGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  double mean() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s / double(values_.size());
  }
  double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  PeriodicGrid grid_;
  std::vector<double> values_;
};

template <class Fn>
ScalarField map_pointwise(const ScalarField& f, Fn&& fn) {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = fn(f[i]);
  return ScalarField(f.grid(), std::move(out));
}

template <class Fn>
ScalarField zip_pointwise(const ScalarField& f, const ScalarField& g, Fn&& fn) {
  require_same_grid(f.grid(), g.grid());
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = fn(f[i], g[i]);
  return ScalarField(f.grid(), std::move(out));
}

inline ScalarField operator+(const ScalarField& f, const ScalarField& g) {
  return zip_pointwise(f, g, std::plus<>{});
}
inline ScalarField operator-(const ScalarField& f, const ScalarField& g) {
  return zip_pointwise(f, g, std::minus<>{});
}
inline ScalarField operator*(const ScalarField& f, const ScalarField& g) {
  return zip_pointwise(f, g, std::multiplies<>{});
}
inline ScalarField operator*(double a, const ScalarField& f) {
  return map_pointwise(f, [a](double v) { return a * v; });
}
inline ScalarField operator-(const ScalarField& f) { return -1.0 * f; }

inline ScalarField subtract_mean(const ScalarField& f) {
  const double m = f.mean();
  return map_pointwise(f, [m](double v) { return v - m; });
}

/// Grid quadrature of f·g: Σ f g · cell_measure.
inline double inner_product(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid(), g.grid());
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i];
  return s * f.grid().cell_measure();
}

inline double max_abs_difference(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid(), g.grid());
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i] - g[i]));
  return m;
}

/// ℝ^m-valued map on a grid; every component shares the grid.
class VectorFieldMap {
 public:
  explicit VectorFieldMap(std::vector<ScalarField> components)
      : components_(std::move(components)) {
    if (components_.empty()) throw InvalidField("vector field needs >= 1 component");
    for (const auto& c : components_) require_same_grid(components_.front().grid(), c.grid());
  }

  static VectorFieldMap zeros(const PeriodicGrid& grid, std::size_t m) {
    return VectorFieldMap(std::vector<ScalarField>(m, ScalarField::zeros(grid)));
  }

  const PeriodicGrid& grid() const { return components_.front().grid(); }
  std::size_t target_dim() const { return components_.size(); }
  const ScalarField& operator[](std::size_t i) const { return components_[i]; }
  const std::vector<ScalarField>& components() const { return components_; }

  std::vector<double> at(std::size_t point) const {
    std::vector<double> v(components_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = components_[i][point];
    return v;
  }

 private:
  std::vector<ScalarField> components_;
};

/// Pointwise rows×cols matrices, stored entry by entry as scalar fields.
class MatrixField {
 public:
  MatrixField(std::size_t rows, std::size_t cols, std::vector<ScalarField> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows * cols || entries_.empty())
      throw InvalidField("matrix field entry count mismatch");
    for (const auto& e : entries_) require_same_grid(entries_.front().grid(), e.grid());
  }

  static MatrixField zeros(const PeriodicGrid& grid, std::size_t rows, std::size_t cols) {
    return MatrixField(rows, cols,
                       std::vector<ScalarField>(rows * cols, ScalarField::zeros(grid)));
  }
  static MatrixField identity(const PeriodicGrid& grid, std::size_t m) {
    std::vector<ScalarField> e;
    e.reserve(m * m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        e.push_back(ScalarField::constant(grid, i == j ? 1.0 : 0.0));
    return MatrixField(m, m, std::move(e));
  }
  static MatrixField scalar(const ScalarField& f) { return MatrixField(1, 1, {f}); }

  const PeriodicGrid& grid() const { return entries_.front().grid(); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const ScalarField& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }
  const std::vector<ScalarField>& entries() const { return entries_; }

  MatrixField transpose() const {
    std::vector<ScalarField> e;
    e.reserve(entries_.size());
    for (std::size_t j = 0; j < cols_; ++j)
      for (std::size_t i = 0; i < rows_; ++i) e.push_back((*this)(i, j));
    return MatrixField(cols_, rows_, std::move(e));
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<ScalarField> entries_;
};

template <class Fn>
VectorFieldMap map_components(const VectorFieldMap& v, Fn&& fn) {
  std::vector<ScalarField> out;
  out.reserve(v.target_dim());
  for (const auto& c : v.components()) out.push_back(fn(c));
  return VectorFieldMap(std::move(out));
}

template <class Fn>
MatrixField map_entries(const MatrixField& q, Fn&& fn) {
  std::vector<ScalarField> out;
  out.reserve(q.entries().size());
  for (const auto& e : q.entries()) out.push_back(fn(e));
  return MatrixField(q.rows(), q.cols(), std::move(out));
}

inline VectorFieldMap operator+(const VectorFieldMap& a, const VectorFieldMap& b) {
  if (a.target_dim() != b.target_dim()) throw DimensionMismatch("vector add");
  std::vector<ScalarField> out;
  for (std::size_t i = 0; i < a.target_dim(); ++i) out.push_back(a[i] + b[i]);
  return VectorFieldMap(std::move(out));
}
inline VectorFieldMap operator-(const VectorFieldMap& a, const VectorFieldMap& b) {
  if (a.target_dim() != b.target_dim()) throw DimensionMismatch("vector subtract");
  std::vector<ScalarField> out;
  for (std::size_t i = 0; i < a.target_dim(); ++i) out.push_back(a[i] - b[i]);
  return VectorFieldMap(std::move(out));
}
inline VectorFieldMap operator*(double s, const VectorFieldMap& a) {
  return map_components(a, [s](const ScalarField& c) { return s * c; });
}

inline MatrixField operator+(const MatrixField& a, const MatrixField& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix add");
  std::vector<ScalarField> out;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    out.push_back(a.entries()[i] + b.entries()[i]);
  return MatrixField(a.rows(), a.cols(), std::move(out));
}
inline MatrixField operator-(const MatrixField& a, const MatrixField& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix subtract");
  std::vector<ScalarField> out;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    out.push_back(a.entries()[i] - b.entries()[i]);
  return MatrixField(a.rows(), a.cols(), std::move(out));
}
inline MatrixField operator*(double s, const MatrixField& a) {
  return map_entries(a, [s](const ScalarField& c) { return s * c; });
}

/// Pointwise matrix-vector product.
inline VectorFieldMap apply(const MatrixField& q, const VectorFieldMap& u) {
  if (q.cols() != u.target_dim())
    throw DimensionMismatch("matrix has " + std::to_string(q.cols()) +
                            " columns, vector has " + std::to_string(u.target_dim()));
  require_same_grid(q.grid(), u.grid());
  const std::size_t P = u.grid().size();
  std::vector<ScalarField> out;
  out.reserve(q.rows());
  for (std::size_t i = 0; i < q.rows(); ++i) {
    std::vector<double> acc(P, 0.0);
    for (std::size_t j = 0; j < q.cols(); ++j) {
      const auto qij = q(i, j).values();
      const auto uj = u[j].values();
      for (std::size_t p = 0; p < P; ++p) acc[p] += qij[p] * uj[p];
    }
    out.emplace_back(u.grid(), std::move(acc));
  }
  return VectorFieldMap(std::move(out));
}

/// Pointwise matrix-matrix product.
inline MatrixField multiply(const MatrixField& a, const MatrixField& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product");
  require_same_grid(a.grid(), b.grid());
  const std::size_t P = a.grid().size();
  std::vector<ScalarField> out;
  out.reserve(a.rows() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      std::vector<double> acc(P, 0.0);
      for (std::size_t k = 0; k < a.cols(); ++k) {
        const auto aik = a(i, k).values();
        const auto bkj = b(k, j).values();
        for (std::size_t p = 0; p < P; ++p) acc[p] += aik[p] * bkj[p];
      }
      out.emplace_back(a.grid(), std::move(acc));
    }
  return MatrixField(a.rows(), b.cols(), std::move(out));
}

/// Pointwise Euclidean magnitude |v(x)|.
inline ScalarField magnitude(const VectorFieldMap& v) {
  std::vector<double> out(v.grid().size(), 0.0);
  for (const auto& c : v.components()) {
    const auto cv = c.values();
    for (std::size_t p = 0; p < out.size(); ++p) out[p] += cv[p] * cv[p];
  }
  for (double& x : out) x = std::sqrt(x);
  return ScalarField(v.grid(), std::move(out));
}

/// Pointwise Frobenius magnitude |Q(x)|.
inline ScalarField magnitude(const MatrixField& q) {
  return magnitude(VectorFieldMap(q.entries()));
}

inline double max_abs_difference(const VectorFieldMap& a, const VectorFieldMap& b) {
  if (a.target_dim() != b.target_dim()) throw DimensionMismatch("vector compare");
  double m = 0.0;
  for (std::size_t i = 0; i < a.target_dim(); ++i)
    m = std::max(m, max_abs_difference(a[i], b[i]));
  return m;
}

inline double max_abs_difference(const MatrixField& a, const MatrixField& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix compare");
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    m = std::max(m, max_abs_difference(a.entries()[i], b.entries()[i]));
  return m;
}

inline double max_abs(const VectorFieldMap& v) {
  double m = 0.0;
  for (const auto& c : v.components()) m = std::max(m, c.max_abs());
  return m;
}
inline double max_abs(const MatrixField& q) {
  double m = 0.0;
  for (const auto& c : q.entries()) m = std::max(m, c.max_abs());
  return m;
}

inline double inner_product(const VectorFieldMap& a, const VectorFieldMap& b) {
  if (a.target_dim() != b.target_dim()) throw DimensionMismatch("vector inner product");
  double s = 0.0;
  for (std::size_t i = 0; i < a.target_dim(); ++i) s += inner_product(a[i], b[i]);
  return s;
}

}  // namespace fracharm
