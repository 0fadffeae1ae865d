#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "fracharm/errors.hpp"

namespace fracharm {

/// Element of the exterior algebra of ℝ^m. Basis blades are bitmasks: bit i
/// stands for the (i+1)-th coordinate vector, and a blade's factors are
/// always taken in increasing order.
class MultiVector {
 public:
  static constexpr int kMaxDim = 8;

  explicit MultiVector(int m) : m_(m) {
    if (m < 1 || m > kMaxDim)
      throw DimensionMismatch("ambient dimension must be in [1, 8], got " + std::to_string(m));
    coeffs_.assign(std::size_t(1) << m, 0.0);
  }

  static MultiVector scalar(int m, double c) {
    MultiVector a(m);
    a.coeffs_[0] = c;
    return a;
  }
  /// ε_I for the given bitmask.
  static MultiVector blade(int m, unsigned mask, double c = 1.0) {
    MultiVector a(m);
    if (mask >= a.coeffs_.size()) throw DimensionMismatch("blade index outside the algebra");
    a.coeffs_[mask] = c;
    return a;
  }
  /// ε_{i}, with 1-based index as in the usual notation.
  static MultiVector basis_vector(int m, int i) { return blade(m, 1u << (i - 1)); }
  static MultiVector vector(const std::vector<double>& v) {
    MultiVector a(int(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) a.coeffs_[std::size_t(1) << i] = v[i];
    return a;
  }
  /// ε_1 ∧ … ∧ ε_m.
  static MultiVector top(int m) { return blade(m, (1u << m) - 1u); }

  int dim() const { return m_; }
  std::size_t size() const { return coeffs_.size(); }
  double operator[](unsigned mask) const { return coeffs_[mask]; }
  double& operator[](unsigned mask) { return coeffs_[mask]; }
  const std::vector<double>& coefficients() const { return coeffs_; }

  /// The grade-p part.
  MultiVector grade_part(int p) const {
    MultiVector out(m_);
    for (unsigned b = 0; b < coeffs_.size(); ++b)
      if (std::popcount(b) == p) out.coeffs_[b] = coeffs_[b];
    return out;
  }

  /// Grade of a homogeneous element; -1 for zero, -2 for mixed grades.
  int grade() const {
    int g = -1;
    for (unsigned b = 0; b < coeffs_.size(); ++b) {
      if (coeffs_[b] == 0.0) continue;
      const int p = std::popcount(b);
      if (g == -1) g = p;
      else if (g != p) return -2;
    }
    return g;
  }

  /// 1-vector coefficients as a plain vector.
  std::vector<double> to_vector() const {
    std::vector<double> v(m_);
    for (int i = 0; i < m_; ++i) v[i] = coeffs_[std::size_t(1) << i];
    return v;
  }

  MultiVector& operator+=(const MultiVector& b) {
    same_dim(b);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += b.coeffs_[i];
    return *this;
  }
  MultiVector& operator-=(const MultiVector& b) {
    same_dim(b);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= b.coeffs_[i];
    return *this;
  }
  MultiVector& operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
  }

  void same_dim(const MultiVector& b) const {
    if (b.m_ != m_)
      throw DimensionMismatch("multivectors over R^" + std::to_string(m_) + " and R^" +
                              std::to_string(b.m_));
  }

 private:
  int m_;
  std::vector<double> coeffs_;
};

inline MultiVector operator+(MultiVector a, const MultiVector& b) { return a += b; }
inline MultiVector operator-(MultiVector a, const MultiVector& b) { return a -= b; }
inline MultiVector operator*(double s, MultiVector a) { return a *= s; }
inline MultiVector operator-(MultiVector a) { return a *= -1.0; }

namespace detail {

// Number of pairs (a, b) with a in A, b in B and a > b.
inline int crossing_count(unsigned a, unsigned b) {
  int count = 0;
  while (b) {
    const int j = std::countr_zero(b);
    b &= b - 1;
    count += std::popcount(a >> (j + 1));
  }
  return count;
}

// Number of pairs (i, j) in I × J with j > i.
inline int ascending_pair_count(unsigned i_mask, unsigned j_mask) {
  int count = 0;
  while (i_mask) {
    const int i = std::countr_zero(i_mask);
    i_mask &= i_mask - 1;
    count += std::popcount(j_mask >> (i + 1));
  }
  return count;
}

}  // namespace detail

/// Exterior product; the sign of each blade product is the parity of the
/// permutation that sorts the concatenated factors.
inline MultiVector wedge(const MultiVector& a, const MultiVector& b) {
  a.same_dim(b);
  MultiVector out(a.dim());
  for (unsigned i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (unsigned j = 0; j < b.size(); ++j) {
      if (b[j] == 0.0 || (i & j)) continue;
      const double sign = detail::crossing_count(i, j) % 2 ? -1.0 : 1.0;
      out[i | j] += sign * a[i] * b[j];
    }
  }
  return out;
}

/// Interior multiplication ε_I ⌐ ε_J = (−1)^M ε_{J∖I} when I ⊂ J and 0
/// otherwise, where M counts the pairs (i, j) ∈ I × J with j > i. Extended
/// bilinearly; every grade present in a must be at most every grade in b.
inline MultiVector interior_mult(const MultiVector& a, const MultiVector& b) {
  a.same_dim(b);
  int a_max = -1, b_min = MultiVector::kMaxDim + 1;
  for (unsigned i = 0; i < a.size(); ++i)
    if (a[i] != 0.0) a_max = std::max(a_max, std::popcount(i));
  for (unsigned j = 0; j < b.size(); ++j)
    if (b[j] != 0.0) b_min = std::min(b_min, std::popcount(j));
  if (a_max > b_min)
    throw GradeError("interior multiplication of grade " + std::to_string(a_max) +
                     " into grade " + std::to_string(b_min));
  MultiVector out(a.dim());
  for (unsigned i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (unsigned j = 0; j < b.size(); ++j) {
      if (b[j] == 0.0 || (i & j) != i) continue;
      const double sign = detail::ascending_pair_count(i, j) % 2 ? -1.0 : 1.0;
      out[j & ~i] += sign * a[i] * b[j];
    }
  }
  return out;
}

/// ∗a = a ⌐ (ε_1 ∧ … ∧ ε_m).
inline MultiVector hodge_star(const MultiVector& a) {
  return interior_mult(a, MultiVector::top(a.dim()));
}

/// Inner product induced from the orthonormal basis blades.
inline double inner_product(const MultiVector& a, const MultiVector& b) {
  a.same_dim(b);
  double s = 0.0;
  for (unsigned i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const MultiVector& a) { return std::sqrt(inner_product(a, a)); }

/// Wedge of an ordered list of 1-vectors.
inline MultiVector wedge_all(const std::vector<std::vector<double>>& vectors, int m) {
  MultiVector acc = MultiVector::scalar(m, 1.0);
  for (const auto& v : vectors) {
    if (int(v.size()) != m) throw DimensionMismatch("frame vector of wrong length");
    acc = wedge(acc, MultiVector::vector(v));
  }
  return acc;
}

struct ProjectedParts {
  std::vector<double> tangent;
  std::vector<double> normal;
};

namespace detail {

inline void require_orthonormal(const std::vector<std::vector<double>>& frame, int m) {
  for (std::size_t a = 0; a < frame.size(); ++a) {
    if (int(frame[a].size()) != m) throw DimensionMismatch("frame vector of wrong length");
    for (std::size_t b = 0; b <= a; ++b) {
      double d = 0.0;
      for (int i = 0; i < m; ++i) d += frame[a][i] * frame[b][i];
      if (std::abs(d - (a == b ? 1.0 : 0.0)) > 1e-12)
        throw NonOrthonormalFrame("frame Gram entry (" + std::to_string(a) + "," +
                                  std::to_string(b) + ") = " + std::to_string(d));
    }
  }
}

// The two contraction formulas before any sign correction.
inline ProjectedParts raw_projector_parts(const MultiVector& e, const MultiVector& n,
                                          const MultiVector& v, int m, int k) {
  const double tangent_sign = (m - 1) % 2 ? -1.0 : 1.0;
  const double normal_sign = (k - 1) % 2 ? -1.0 : 1.0;
  auto t = tangent_sign * hodge_star(wedge(interior_mult(v, e), n));
  auto nn = normal_sign * hodge_star(wedge(e, interior_mult(v, n)));
  return {t.to_vector(), nn.to_vector()};
}

/// Global signs (tangent, normal) that turn the two formulas into the
/// orthogonal projections for a positively oriented frame, found once per
/// (m, k) from the coordinate frame, where the projections are known exactly.
inline std::pair<double, double> projector_signs(int m, int k) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::pair<double, double>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find({m, k});
  if (it != cache.end()) return it->second;
  const unsigned e_mask = (1u << k) - 1u;
  const unsigned n_mask = ((1u << m) - 1u) & ~e_mask;
  const auto e = MultiVector::blade(m, e_mask), n = MultiVector::blade(m, n_mask);
  double ts = 1.0, ns = 1.0;
  for (int i = 1; i <= m; ++i) {
    const auto parts = raw_projector_parts(e, n, MultiVector::basis_vector(m, i), m, k);
    if (i <= k) ts = parts.tangent[i - 1] < 0.0 ? -1.0 : 1.0;
    else ns = parts.normal[i - 1] < 0.0 ? -1.0 : 1.0;
  }
  return cache[{m, k}] = {ts, ns};
}

}  // namespace detail

/// Tangent and normal parts of v from an orthonormal tangent frame and an
/// orthonormal normal frame, through the contraction formulas
///   P^T v = ±∗((v ⌐ e) ∧ n),  P^N v = ±∗(e ∧ (v ⌐ n)),
/// e and n being the wedges of the two frames. The signs combine the
/// per-(m, k) constants of detail::projector_signs with the orientation of
/// e ∧ n relative to the top form.
inline ProjectedParts projector_from_frame(const std::vector<std::vector<double>>& tangent_frame,
                                           const std::vector<std::vector<double>>& normal_frame,
                                           const std::vector<double>& v) {
  const int m = int(v.size());
  const int k = int(tangent_frame.size());
  if (k + int(normal_frame.size()) != m)
    throw DimensionMismatch("frames must together have m vectors");
  if (k < 1 || k >= m) throw DimensionMismatch("tangent dimension must lie in [1, m-1]");
  auto frame = tangent_frame;
  frame.insert(frame.end(), normal_frame.begin(), normal_frame.end());
  detail::require_orthonormal(frame, m);
  const auto e = wedge_all(tangent_frame, m);
  const auto n = wedge_all(normal_frame, m);
  const double orientation = wedge(e, n)[(1u << m) - 1u] < 0.0 ? -1.0 : 1.0;
  const auto [ts, ns] = detail::projector_signs(m, k);
  auto parts = detail::raw_projector_parts(e, n, MultiVector::vector(v), m, k);
  for (double& x : parts.tangent) x *= ts * orientation;
  for (double& x : parts.normal) x *= ns * orientation;
  return parts;
}

}  // namespace fracharm
