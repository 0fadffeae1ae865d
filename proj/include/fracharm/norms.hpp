#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "fracharm/fft.hpp"
#include "fracharm/field.hpp"
#include "fracharm/littlewood_paley.hpp"
#include "fracharm/spectral.hpp"

namespace fracharm {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct NormReport {
  std::string name;
  std::string params;
  double value = 0.0;
  std::string grid;
};

namespace detail {

inline void require_exponent(double p, const char* what) {
  if (!(p >= 1.0)) throw BadExponent(std::string(what) + " exponent " + std::to_string(p) + " < 1");
}

}  // namespace detail

/// (Σ|f|^p h^n)^{1/p}; p = ∞ gives the max.
inline double lp_norm(const ScalarField& f, double p) {
  detail::require_exponent(p, "lp_norm");
  if (std::isinf(p)) return f.max_abs();
  double acc = 0.0;
  if (p == 2.0)
    for (double v : f.values()) acc += v * v;
  else if (p == 1.0)
    for (double v : f.values()) acc += std::abs(v);
  else
    for (double v : f.values()) acc += std::pow(std::abs(v), p);
  return std::pow(acc * f.grid().cell_measure(), 1.0 / p);
}

inline double lp_norm(const VectorFieldMap& u, double p) { return lp_norm(magnitude(u), p); }
inline double lp_norm(const MatrixField& q, double p) { return lp_norm(magnitude(q), p); }

/// Nonincreasing step function: value[i] on (t_{i−1}, t_i], t_i = Σ_{k≤i} width[k].
struct StepFunction {
  std::vector<double> values;
  std::vector<double> widths;

  double measure() const {
    double t = 0.0;
    for (double w : widths) t += w;
    return t;
  }
};

/// Rearranges |values| with the given weights in decreasing order.
inline StepFunction rearrange(const std::vector<double>& values, const std::vector<double>& weights) {
  if (values.size() != weights.size()) throw DimensionMismatch("values and weights differ");
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(values[a]) > std::abs(values[b]);
  });
  StepFunction out;
  out.values.reserve(values.size());
  out.widths.reserve(values.size());
  for (auto i : order) {
    out.values.push_back(std::abs(values[i]));
    out.widths.push_back(weights[i]);
  }
  return out;
}

inline StepFunction decreasing_rearrangement(const ScalarField& f) {
  std::vector<double> v(f.values().begin(), f.values().end());
  return rearrange(v, std::vector<double>(v.size(), f.grid().cell_measure()));
}

/// Lorentz quasi-norm evaluated exactly on a step function.
inline double lorentz_norm(const StepFunction& fs, double p, double q) {
  detail::require_exponent(p, "lorentz p");
  detail::require_exponent(q, "lorentz q");
  if (std::isinf(p)) throw BadExponent("lorentz p must be finite");
  double t = 0.0;
  if (std::isinf(q)) {
    double best = 0.0;
    for (std::size_t i = 0; i < fs.values.size(); ++i) {
      t += fs.widths[i];
      best = std::max(best, fs.values[i] * std::pow(t, 1.0 / p));
    }
    return best;
  }
  const double e = q / p;
  double acc = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < fs.values.size(); ++i) {
    t += fs.widths[i];
    const double cur = std::pow(t, e);
    if (fs.values[i] > 0.0) acc += std::pow(fs.values[i], q) * (cur - prev);
    prev = cur;
  }
  return std::pow(acc / e, 1.0 / q);
}

inline double lorentz_norm(const ScalarField& f, double p, double q) {
  return lorentz_norm(decreasing_rearrangement(f), p, q);
}
inline double lorentz_norm(const VectorFieldMap& u, double p, double q) {
  return lorentz_norm(magnitude(u), p, q);
}
inline double lorentz_norm(const MatrixField& m, double p, double q) {
  return lorentz_norm(magnitude(m), p, q);
}

namespace detail {

// Spectra of the indicator functions of the discrete periodic balls of radius
// k·h (k = 1..N/2), centred at the origin, with their cell counts.
struct BallFamily {
  std::vector<Spectrum> spectra;
  std::vector<double> counts;
};

inline const BallFamily& ball_family(const PeriodicGrid& grid) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<BallFamily>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(grid.dimension(), grid.points_per_axis());
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  auto fam = std::make_shared<BallFamily>();
  const int N = grid.points_per_axis();
  std::vector<double> dist2(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto idx = grid.multi_index(i);
    double d = 0.0;
    for (int a = 0; a < grid.dimension(); ++a) {
      int m = std::min(idx[a], N - idx[a]);
      d += double(m) * m;
    }
    dist2[i] = d;
  }
  for (int k = 1; k <= N / 2; ++k) {
    std::vector<double> ind(grid.size(), 0.0);
    double count = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (dist2[i] <= double(k) * k + 1e-9) {
        ind[i] = 1.0;
        count += 1.0;
      }
    fam->spectra.push_back(to_frequency(ScalarField(grid, std::move(ind))));
    fam->counts.push_back(count);
  }
  cache.emplace(key, fam);
  return *fam;
}

}  // namespace detail

/// Discrete centred maximal function: at each point, the largest average of
/// |f| over the periodic balls of radius k·h, k = 0..N/2 (k = 0 is the cell
/// itself, so M(f) ≥ |f| holds exactly).
inline ScalarField maximal_function(const ScalarField& f) {
  const auto& grid = f.grid();
  const auto& fam = detail::ball_family(grid);
  auto absf = map_pointwise(f, [](double v) { return std::abs(v); });
  Spectrum s = to_frequency(absf);
  std::vector<double> best(absf.values().begin(), absf.values().end());
  for (std::size_t k = 0; k < fam.spectra.size(); ++k) {
    Spectrum prod = s;
    for (std::size_t i = 0; i < grid.size(); ++i) prod.coeffs[i] *= fam.spectra[k].coeffs[i];
    auto avg = from_frequency_complex(prod);
    const double inv = 1.0 / fam.counts[k];
    for (std::size_t i = 0; i < grid.size(); ++i) best[i] = std::max(best[i], avg[i].real() * inv);
  }
  return ScalarField(grid, std::move(best));
}

/// Base norm applied after the multiplier in Sobolev-type norms.
struct BaseNorm {
  double p = 2.0;
  double q = 2.0;
  bool lorentz = false;

  static BaseNorm l2() { return {}; }
  static BaseNorm lorentz_pq(double p, double q) { return {p, q, true}; }

  double operator()(const ScalarField& f) const { return lorentz ? lorentz_norm(f, p, q) : lp_norm(f, p); }
};

/// ‖(−Δ)^{s/2} f‖ in the base norm. Negative s requires mean-zero input.
inline double sobolev_norm(const ScalarField& f, double s, BaseNorm base = BaseNorm::l2()) {
  return base(fractional_laplacian(f, 0.5 * s));
}

inline double sobolev_norm(const VectorFieldMap& u, double s, BaseNorm base = BaseNorm::l2()) {
  return base(magnitude(fractional_laplacian(u, 0.5 * s)));
}

inline double sobolev_norm(const MatrixField& m, double s, BaseNorm base = BaseNorm::l2()) {
  return base(magnitude(fractional_laplacian(m, 0.5 * s)));
}

/// ℓ^q over shells of 2^{js}‖f_j‖_{L^p}.
inline double besov_norm(const ScalarField& f, double s, double p, double q,
                         const DyadicPartition& part) {
  detail::require_exponent(p, "besov p");
  detail::require_exponent(q, "besov q");
  auto shells = shell_decomposition(f, part);
  double acc = 0.0;
  for (int j = part.j_min(); j <= part.j_max(); ++j) {
    const double term = std::pow(2.0, j * s) * lp_norm(shells[j - part.j_min()], p);
    acc = std::isinf(q) ? std::max(acc, term) : acc + std::pow(term, q);
  }
  return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
}

/// L^p norm of the shell square function (Σ_j 2^{jsq}|f_j|^q)^{1/q}.
inline double triebel_norm(const ScalarField& f, double s, double p, double q,
                           const DyadicPartition& part) {
  detail::require_exponent(p, "triebel p");
  detail::require_exponent(q, "triebel q");
  auto shells = shell_decomposition(f, part);
  std::vector<double> acc(f.size(), 0.0);
  for (int j = part.j_min(); j <= part.j_max(); ++j) {
    const double w = std::pow(2.0, j * s);
    const auto& fj = shells[j - part.j_min()];
    for (std::size_t i = 0; i < acc.size(); ++i) {
      const double v = w * std::abs(fj[i]);
      acc[i] = std::isinf(q) ? std::max(acc[i], v) : acc[i] + std::pow(v, q);
    }
  }
  if (!std::isinf(q))
    for (double& v : acc) v = std::pow(v, 1.0 / q);
  return lp_norm(ScalarField(f.grid(), std::move(acc)), p);
}

/// ∫(Σ_j |f_j|²)^{1/2}.
inline double hardy_norm(const ScalarField& f, const DyadicPartition& part) {
  return triebel_norm(f, 0.0, 1.0, 2.0, part);
}

/// Mean oscillation over a family of periodic cubes; a lower bound for the
/// discrete BMO seminorm.
///
/// Cube sides are N·2^{-k} cells down to 2 cells. Offsets step by
/// max(1, side/4) cells per axis; the full torus is one cube.
inline double bmo_norm(const ScalarField& f) {
  const auto& grid = f.grid();
  const int n = grid.dimension();
  const int N = grid.points_per_axis();
  const auto vals = f.values();
  double best = 0.0;
  {
    const double m = f.mean();
    double acc = 0.0;
    for (double v : vals) acc += std::abs(v - m);
    best = acc / double(vals.size());
  }
  std::vector<double> cube;
  for (int side = N / 2; side >= 2; side /= 2) {
    const int stride = std::max(1, side / 4);
    const int offsets = (N + stride - 1) / stride;
    const int o1 = n >= 2 ? offsets : 1, o2 = n >= 3 ? offsets : 1;
    const int s1 = n >= 2 ? side : 1, s2 = n >= 3 ? side : 1;
    for (int a = 0; a < offsets; ++a)
      for (int b = 0; b < o1; ++b)
        for (int c = 0; c < o2; ++c) {
          cube.clear();
          for (int i = 0; i < side; ++i)
            for (int j = 0; j < s1; ++j)
              for (int k = 0; k < s2; ++k)
                cube.push_back(vals[grid.flat_index({a * stride + i, b * stride + j, c * stride + k})]);
          double mean = 0.0;
          for (double v : cube) mean += v;
          mean /= double(cube.size());
          double osc = 0.0;
          for (double v : cube) osc += std::abs(v - mean);
          best = std::max(best, osc / double(cube.size()));
        }
  }
  return best;
}

/// Exponents of one Lorentz-Hölder test: f ∈ L^{(p1,q1)}, g ∈ L^{(p2,q2)}.
struct HolderExponents {
  double p1, q1, p2, q2;
};

/// ‖fg‖_{(r,s)} / (‖f‖_{(p1,q1)}‖g‖_{(p2,q2)}), 1/r = 1/p1 + 1/p2, 1/s = 1/q1 + 1/q2.
/// Returns 0 when either factor vanishes.
inline double lorentz_holder_check(const ScalarField& f, const ScalarField& g,
                                   const HolderExponents& e) {
  for (double x : {e.p1, e.q1, e.p2, e.q2}) detail::require_exponent(x, "holder");
  const double r = 1.0 / (1.0 / e.p1 + 1.0 / e.p2);
  const double s = 1.0 / (1.0 / e.q1 + 1.0 / e.q2);
  if (r < 1.0 || s < 1.0) throw BadExponent("product exponents fall below 1");
  const double denom = lorentz_norm(f, e.p1, e.q1) * lorentz_norm(g, e.p2, e.q2);
  if (denom == 0.0) return 0.0;
  return lorentz_norm(f * g, r, s) / denom;
}

/// Table of the standard norms of one field, as printed by the CLI.
inline std::vector<NormReport> norm_table(const ScalarField& f) {
  const auto g = f.grid().describe();
  const int n = f.grid().dimension();
  std::vector<NormReport> out;
  out.push_back({"lp", "p=1", lp_norm(f, 1.0), g});
  out.push_back({"lp", "p=2", lp_norm(f, 2.0), g});
  out.push_back({"lp", "p=inf", lp_norm(f, kInfinity), g});
  out.push_back({"lorentz", "p=2;q=inf", lorentz_norm(f, 2.0, kInfinity), g});
  out.push_back({"lorentz", "p=2;q=1", lorentz_norm(f, 2.0, 1.0), g});
  out.push_back({"sobolev", "s=n/2", sobolev_norm(f, 0.5 * n), g});
  out.push_back({"sobolev_lorentz", "s=n/2;p=2;q=inf",
                 sobolev_norm(f, 0.5 * n, BaseNorm::lorentz_pq(2.0, kInfinity)), g});
  out.push_back({"bmo", "", bmo_norm(f), g});
  try {
    DyadicPartition part(f.grid());
    out.push_back({"besov", "s=0;p=inf;q=inf", besov_norm(f, 0.0, kInfinity, kInfinity, part), g});
    out.push_back({"triebel", "s=0;p=2;q=2", triebel_norm(f, 0.0, 2.0, 2.0, part), g});
    out.push_back({"hardy", "", hardy_norm(f, part), g});
  } catch (const GridTooSmall&) {
  }
  return out;
}

}  // namespace fracharm
