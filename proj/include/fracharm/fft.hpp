#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "fracharm/field.hpp"

namespace fracharm {

using Complex = std::complex<double>;

namespace detail {

// FFTW planning is not thread safe; execution of an existing plan on new
// arrays is. Plans are built once per (n, N, direction) and kept for the
// lifetime of the process.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int n, int N, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_tuple(n, N, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    int dims[3] = {N, N, N};
    std::size_t total = 1;
    for (int a = 0; a < n; ++a) total *= std::size_t(N);
    std::vector<Complex> scratch(total);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan p = fftw_plan_dft(n, dims, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, p);
    return p;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, p] : plans_) fftw_destroy_plan(p);
  }

  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

inline void execute_in_place(const PeriodicGrid& grid, std::vector<Complex>& data, int sign) {
  fftw_plan p = PlanCache::instance().get(grid.dimension(), grid.points_per_axis(), sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(p, buf, buf);
}

}  // namespace detail

/// Discrete Fourier coefficients of a field, in the grid's flat ordering.
///
/// Convention: c(ξ) = Σ_x f(x) e^{-iξ·x} (unnormalized); the inverse carries
/// 1/N^n. With this choice Σ|f|²·h^n = h^n N^{-n} Σ|c|².
struct Spectrum {
  PeriodicGrid grid;
  std::vector<Complex> coeffs;

  Complex operator[](std::size_t i) const { return coeffs[i]; }
};

inline Spectrum to_frequency(const ScalarField& f) {
  std::vector<Complex> data(f.values().begin(), f.values().end());
  detail::execute_in_place(f.grid(), data, FFTW_FORWARD);
  return Spectrum{f.grid(), std::move(data)};
}

/// Inverse transform returning complex samples (no realness assumption).
inline std::vector<Complex> from_frequency_complex(const Spectrum& s) {
  std::vector<Complex> data = s.coeffs;
  detail::execute_in_place(s.grid, data, FFTW_BACKWARD);
  const double scale = 1.0 / double(s.grid.size());
  for (auto& c : data) c *= scale;
  return data;
}

/// Inverse transform keeping the real part. Callers are responsible for the
/// spectrum being Hermitian; apply_multiplier checks this.
inline ScalarField from_frequency(const Spectrum& s) {
  auto data = from_frequency_complex(s);
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = data[i].real();
  return ScalarField(s.grid, std::move(out));
}

/// ‖f‖²_{L²} recovered from the spectrum.
inline double plancherel_norm_squared(const Spectrum& s) {
  double acc = 0.0;
  for (const auto& c : s.coeffs) acc += std::norm(c);
  return acc * s.grid.cell_measure() / double(s.grid.size());
}

}  // namespace fracharm
