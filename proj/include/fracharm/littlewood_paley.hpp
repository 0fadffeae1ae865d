#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <vector>

#include "fracharm/fft.hpp"
#include "fracharm/field.hpp"

namespace fracharm {

namespace detail {

inline double smooth_step_core(double t) { return t <= 0.0 ? 0.0 : std::exp(-1.0 / t); }

}  // namespace detail

/// Radial cutoff: 1 on r ≤ 1, 0 on r ≥ 2, C^∞ in between.
inline double cutoff_profile(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double t = 2.0 - r;
  const double a = detail::smooth_step_core(t);
  const double b = detail::smooth_step_core(1.0 - t);
  return a / (a + b);
}

/// Dyadic ladder of frequency cutoffs on a grid.
///
/// Shells run over j = 0..j_max with ψ_0 = φ and ψ_j = φ(2^{-j}ξ) − φ(2^{-j+1}ξ).
/// j_max = ceil(log2 |ξ|_max) with |ξ|_max = N/2·√n, so the ladder sums to 1 on
/// every lattice frequency including the corners of the cube.
class DyadicPartition {
 public:
  DyadicPartition(const PeriodicGrid& grid, int shift = 4) : grid_(grid), shift_(shift) {
    if (shift < 4) throw GridTooSmall("shift must be >= 4, got " + std::to_string(shift));
    j_max_ = int(std::ceil(std::log2(grid.max_frequency_norm()) - 1e-12));
    if (j_max_ - j_min_ < 3)
      throw GridTooSmall("only " + std::to_string(j_max_ - j_min_ + 1) + " shells on " +
                         grid.describe());
    norms_.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) norms_[i] = grid.frequency(i).norm();
    shells_.assign(j_max_ - j_min_ + 1, std::vector<double>(grid.size(), 0.0));
    for (int j = j_min_; j <= j_max_; ++j)
      for (std::size_t i = 0; i < grid.size(); ++i) shells_[j - j_min_][i] = psi(j, norms_[i]);
  }

  const PeriodicGrid& grid() const { return grid_; }
  int shift() const { return shift_; }
  int j_min() const { return j_min_; }
  int j_max() const { return j_max_; }
  int shell_count() const { return j_max_ - j_min_ + 1; }

  /// ψ_j at radius r.
  double psi(int j, double r) const {
    if (j == j_min_) return cutoff_profile(std::ldexp(r, -j));
    return cutoff_profile(std::ldexp(r, -j)) - cutoff_profile(std::ldexp(r, -j + 1));
  }

  /// ψ_j tabulated in the grid's flat frequency order.
  const std::vector<double>& shell_table(int j) const {
    check_shell(j);
    return shells_[j - j_min_];
  }

  double frequency_norm(std::size_t flat) const { return norms_[flat]; }

  void check_shell(int j) const {
    if (j < j_min_ || j > j_max_)
      throw ShellOutOfRange("shell " + std::to_string(j) + " outside [" +
                            std::to_string(j_min_) + ", " + std::to_string(j_max_) + "]");
  }

 private:
  PeriodicGrid grid_;
  int shift_;
  int j_min_ = 0;
  int j_max_ = 0;
  std::vector<double> norms_;
  std::vector<std::vector<double>> shells_;
};

inline DyadicPartition build_partition(const PeriodicGrid& grid, int shift = 4) {
  return DyadicPartition(grid, shift);
}

namespace detail {

inline void require_partition_grid(const DyadicPartition& p, const ScalarField& f) {
  require_same_grid(p.grid(), f.grid());
}

inline ScalarField filter(const Spectrum& s, const std::vector<double>& weights) {
  Spectrum out = s;
  for (std::size_t i = 0; i < weights.size(); ++i) out.coeffs[i] *= weights[i];
  return from_frequency(out);
}

}  // namespace detail

/// f_j: the shell-j piece of f.
inline ScalarField project_shell(const ScalarField& f, int j, const DyadicPartition& p) {
  detail::require_partition_grid(p, f);
  return detail::filter(to_frequency(f), p.shell_table(j));
}

/// f^j = Σ_{k ≤ j} f_k.
inline ScalarField project_low(const ScalarField& f, int j, const DyadicPartition& p) {
  detail::require_partition_grid(p, f);
  p.check_shell(j);
  std::vector<double> w(p.grid().size(), 0.0);
  for (int k = p.j_min(); k <= j; ++k) {
    const auto& t = p.shell_table(k);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += t[i];
  }
  return detail::filter(to_frequency(f), w);
}

/// All shell pieces f_{j_min}, ..., f_{j_max} from one forward transform.
inline std::vector<ScalarField> shell_decomposition(const ScalarField& f,
                                                    const DyadicPartition& p) {
  detail::require_partition_grid(p, f);
  Spectrum s = to_frequency(f);
  std::vector<ScalarField> out;
  out.reserve(p.shell_count());
  for (int j = p.j_min(); j <= p.j_max(); ++j) out.push_back(detail::filter(s, p.shell_table(j)));
  return out;
}

/// Running sums f^j for j = j_min..j_max built from the shell pieces.
inline std::vector<ScalarField> low_pass_ladder(const std::vector<ScalarField>& shells) {
  std::vector<ScalarField> out;
  out.reserve(shells.size());
  for (std::size_t j = 0; j < shells.size(); ++j)
    out.push_back(j == 0 ? shells[0] : out.back() + shells[j]);
  return out;
}

enum class ParaproductKind { HighLow = 1, LowHigh = 2, Diagonal = 3 };

/// The three pieces of f·g split by relative shell height.
///
/// HighLow:  Σ_j f_j g^{j−shift}
/// LowHigh:  Σ_j g_j f^{j−shift}
/// Diagonal: Σ_j f_j Σ_{|k−j|<shift} g_k
/// Every pair (j, k) lands in exactly one piece, so the three sum to f·g.
inline ScalarField paraproduct(const ScalarField& f, const ScalarField& g, ParaproductKind kind,
                               const DyadicPartition& p) {
  require_same_grid(f.grid(), g.grid());
  detail::require_partition_grid(p, f);
  const int s = p.shift();
  auto fs = shell_decomposition(f, p);
  auto gs = shell_decomposition(g, p);
  const int count = p.shell_count();
  std::vector<double> acc(f.size(), 0.0);
  auto add_product = [&](const ScalarField& a, const ScalarField& b) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += a[i] * b[i];
  };
  if (kind == ParaproductKind::Diagonal) {
    for (int j = 0; j < count; ++j) {
      auto band = ScalarField::zeros(f.grid());
      for (int k = std::max(0, j - s + 1); k <= std::min(count - 1, j + s - 1); ++k)
        band = band + gs[k];
      add_product(fs[j], band);
    }
  } else {
    const auto& high = kind == ParaproductKind::HighLow ? fs : gs;
    auto low = low_pass_ladder(kind == ParaproductKind::HighLow ? gs : fs);
    for (int j = s; j < count; ++j) add_product(high[j], low[j - s]);
  }
  return ScalarField(f.grid(), std::move(acc));
}

inline ScalarField paraproduct(const ScalarField& f, const ScalarField& g, int kind,
                               const DyadicPartition& p) {
  if (kind < 1 || kind > 3) throw InvalidField("paraproduct kind must be 1, 2 or 3");
  return paraproduct(f, g, ParaproductKind(kind), p);
}

enum class Evaluation { Native, Dealiased };

struct SupportReport {
  double max_leakage = 0.0;
  bool conforming = true;
  bool dealiased = true;
};

namespace detail {

// Spectrum of f zero-padded onto the grid with twice the points per axis.
inline Spectrum pad_spectrum(const Spectrum& s) {
  const PeriodicGrid& g = s.grid;
  PeriodicGrid fine(g.dimension(), 2 * g.points_per_axis());
  std::vector<Complex> out(fine.size(), Complex(0.0));
  const double scale = double(fine.size()) / double(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    Frequency xi = g.frequency(i);
    out[fine.flat_index(xi.k)] = s.coeffs[i] * scale;
  }
  return Spectrum{fine, std::move(out)};
}

inline double rms(const ScalarField& f) {
  return std::sqrt(inner_product(f, f) / f.grid().total_measure());
}

}  // namespace detail

/// Spectral leakage of the high-low products f^{j−shift}·g_j.
///
/// Reports the largest Fourier-series amplitude found outside the annulus
/// 2^{j−2} ≤ |ξ| ≤ 2^{j+2}, over all j, relative to rms(f)·rms(g). Dealiased
/// evaluation forms the product on the grid with 2N points per axis, where it
/// is exact. Native evaluation forms it on the grid itself and also counts as
/// leakage any amplitude that aliasing moved away from the exact product.
inline SupportReport support_check(const ScalarField& f, const ScalarField& g,
                                   const DyadicPartition& p,
                                   Evaluation eval = Evaluation::Dealiased) {
  require_same_grid(f.grid(), g.grid());
  detail::require_partition_grid(p, f);
  SupportReport report;
  report.dealiased = eval == Evaluation::Dealiased;
  const double scale = detail::rms(f) * detail::rms(g);
  if (scale == 0.0) return report;
  auto fs = shell_decomposition(f, p);
  auto gs = shell_decomposition(g, p);
  auto flow = low_pass_ladder(fs);
  const int s = p.shift();
  const PeriodicGrid& grid = f.grid();
  for (int j = s; j < p.shell_count(); ++j) {
    const double lo = std::ldexp(1.0, j - 2), hi = std::ldexp(1.0, j + 2);
    auto a = from_frequency(detail::pad_spectrum(to_frequency(flow[j - s])));
    auto b = from_frequency(detail::pad_spectrum(to_frequency(gs[j])));
    const Spectrum exact = to_frequency(a * b);
    const PeriodicGrid& fine = exact.grid;
    auto amplitude = [](Complex c, const PeriodicGrid& g) { return std::abs(c) / double(g.size()); };
    if (report.dealiased) {
      for (std::size_t i = 0; i < fine.size(); ++i) {
        const double r = fine.frequency(i).norm();
        if (r >= lo - 1e-9 && r <= hi + 1e-9) continue;
        report.max_leakage = std::max(report.max_leakage, amplitude(exact.coeffs[i], fine) / scale);
      }
      continue;
    }
    const Spectrum native = to_frequency(flow[j - s] * gs[j]);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Frequency xi = grid.frequency(i);
      const Complex c = native.coeffs[i] / double(grid.size());
      const Complex truth = exact.coeffs[fine.flat_index(xi.k)] / double(fine.size());
      double leak = std::abs(c - truth);
      if (xi.norm() < lo - 1e-9 || xi.norm() > hi + 1e-9) leak = std::max(leak, std::abs(c));
      report.max_leakage = std::max(report.max_leakage, leak / scale);
    }
  }
  report.conforming = report.max_leakage <= 1e-10;
  return report;
}

/// Writes the ladder as CSV rows (j, |ξ|, ψ_j) over the distinct lattice radii.
inline void export_partition_csv(const DyadicPartition& p, std::ostream& out) {
  std::map<long long, double> radii;
  for (std::size_t i = 0; i < p.grid().size(); ++i) {
    const double r = p.frequency_norm(i);
    radii.emplace(std::llround(r * 1e9), r);
  }
  out << "j,xi_norm,psi\n";
  char line[96];
  for (int j = p.j_min(); j <= p.j_max(); ++j)
    for (const auto& [key, r] : radii) {
      std::snprintf(line, sizeof line, "%d,%.17g,%.17g\n", j, r, p.psi(j, r));
      out << line;
    }
}

}  // namespace fracharm
