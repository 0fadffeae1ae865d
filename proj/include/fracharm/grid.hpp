#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

#include "fracharm/errors.hpp"

namespace fracharm {

/// Integer frequency on the lattice Z^n ∩ [-N/2, N/2)^n. Unused axes are 0.
struct Frequency {
  std::array<int, 3> k{0, 0, 0};
  int dimension = 1;

  int operator[](int axis) const { return k[axis]; }

  double norm_squared() const {
    double s = 0.0;
    for (int a = 0; a < dimension; ++a) s += double(k[a]) * double(k[a]);
    return s;
  }
  double norm() const { return std::sqrt(norm_squared()); }
  bool is_zero() const { return k[0] == 0 && k[1] == 0 && k[2] == 0; }
};

/// Uniform periodic grid on the torus [0, 2π)^n with N points per axis.
///
/// Points are stored row-major with the last axis fastest; axis 0 carries the
/// coordinate x₁. Frequencies follow the usual FFT ordering: index i on an
/// axis represents i for i < N/2 and i - N otherwise, so the lattice is
/// [-N/2, N/2). The plane ξ_k = -N/2 is the Nyquist plane of axis k.
class PeriodicGrid {
 public:
  PeriodicGrid(int dimension, int points_per_axis)
      : n_(dimension), N_(points_per_axis) {
    if (n_ != 1 && n_ != 3)
      throw InvalidGrid("dimension must be 1 or 3, got " + std::to_string(n_));
    if (N_ < 8 || N_ % 2 != 0)
      throw InvalidGrid("points per axis must be even and >= 8, got " +
                        std::to_string(N_));
    size_ = 1;
    for (int a = 0; a < n_; ++a) size_ *= std::size_t(N_);
  }

  int dimension() const { return n_; }
  int points_per_axis() const { return N_; }
  std::size_t size() const { return size_; }
  double spacing() const { return 2.0 * std::numbers::pi / N_; }
  double cell_measure() const { return std::pow(spacing(), n_); }
  double total_measure() const { return std::pow(2.0 * std::numbers::pi, n_); }

  std::array<int, 3> multi_index(std::size_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = n_ - 1; a >= 0; --a) {
      idx[a] = int(flat % std::size_t(N_));
      flat /= std::size_t(N_);
    }
    return idx;
  }

  std::size_t flat_index(const std::array<int, 3>& idx) const {
    std::size_t flat = 0;
    for (int a = 0; a < n_; ++a) {
      int i = ((idx[a] % N_) + N_) % N_;
      flat = flat * std::size_t(N_) + std::size_t(i);
    }
    return flat;
  }

  double coordinate(std::size_t flat, int axis) const {
    return spacing() * multi_index(flat)[axis];
  }

  Frequency frequency(std::size_t flat) const {
    Frequency f;
    f.dimension = n_;
    auto idx = multi_index(flat);
    for (int a = 0; a < n_; ++a) f.k[a] = idx[a] < N_ / 2 ? idx[a] : idx[a] - N_;
    return f;
  }

  /// Flat index of the frequency -ξ (wrapped back into the lattice).
  std::size_t conjugate_index(std::size_t flat) const {
    auto idx = multi_index(flat);
    for (int a = 0; a < n_; ++a) idx[a] = (N_ - idx[a]) % N_;
    return flat_index(idx);
  }

  bool on_nyquist_plane(const Frequency& f, int axis) const {
    return f.k[axis] == -N_ / 2;
  }

  /// Component of ξ used by odd symbols: zero on the Nyquist plane, where the
  /// mode is its own conjugate and an odd factor would break Hermitian symmetry.
  int odd_component(const Frequency& f, int axis) const {
    return on_nyquist_plane(f, axis) ? 0 : f.k[axis];
  }

  /// Largest |ξ| on the lattice, N/2·√n.
  double max_frequency_norm() const { return 0.5 * N_ * std::sqrt(double(n_)); }

  bool operator==(const PeriodicGrid& o) const { return n_ == o.n_ && N_ == o.N_; }

  std::string describe() const {
    return "n=" + std::to_string(n_) + ",N=" + std::to_string(N_);
  }

 private:
  int n_;
  int N_;
  std::size_t size_ = 1;
};

inline void require_same_grid(const PeriodicGrid& a, const PeriodicGrid& b) {
  if (!(a == b)) throw GridMismatch(a.describe() + " vs " + b.describe());
}

}  // namespace fracharm
