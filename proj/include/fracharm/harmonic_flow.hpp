#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "fracharm/manifold.hpp"
#include "fracharm/sample_maps.hpp"
#include "fracharm/spectral.hpp"

namespace fracharm {

/// Σ_i ‖(−Δ)^{n/4}u_i‖²_{L²}, evaluated as Σ_i ⟨u_i, (−Δ)^{n/2}u_i⟩ (discrete Plancherel).
inline double energy(const VectorFieldMap& u) {
  return inner_product(u, fractional_laplacian(u, 0.5 * u.grid().dimension()));
}
inline double energy(const ManifoldMap& u) { return energy(u.field()); }

/// The tangential part P^T(−Δ)^{n/2}u of the Euler-Lagrange operator.
inline VectorFieldMap el_field(const ManifoldMap& u) {
  return apply(projector_fields(u).tangent, fractional_laplacian(u.field(), 0.5 * u.grid().dimension()));
}

/// max over the grid of |P^T(x)((−Δ)^{n/2}u)(x)|.
inline double el_residual(const ManifoldMap& u) { return magnitude(el_field(u)).max_abs(); }

struct FlowConfig {
  double tau = 0.0;  // 0 selects 0.1/(N/2)^n
  int max_iterations = 5000;
  double tolerance = 1e-6;
  double backtrack = 0.5;
  int n = 1;
  int N = 256;
  int m = 2;
  std::uint64_t seed = 1;
  double amplitude = 0.1;  // tangent perturbation of the circle map used as start

  PeriodicGrid grid() const { return PeriodicGrid(n, N); }
  double base_tau() const { return tau > 0.0 ? tau : 0.1 / std::pow(0.5 * N, n); }
  void validate() const {
    if (!(tau >= 0.0)) throw InvalidField("step size must be positive");
    if (!(tolerance > 0.0)) throw InvalidField("tolerance must be positive");
    if (!(backtrack > 0.0 && backtrack < 1.0)) throw InvalidField("backtracking factor must lie in (0,1)");
    if (max_iterations < 0) throw InvalidField("iteration cap must be nonnegative");
  }
};

struct FlowState {
  ManifoldMap u;
  double energy = 0.0;
  double residual = 0.0;
  int iteration = 0;
  double tau = 0.0;  // step accepted last (0 before the first step)

  static FlowState start(ManifoldMap u) {
    const double e = fracharm::energy(u), r = el_residual(u);
    return FlowState{std::move(u), e, r, 0, 0.0};
  }
};

/// Energies equal up to this relative roundoff count as non-increasing, so an
/// exact critical point is a fixed point instead of a backtracking failure.
inline constexpr double kEnergyTieSlack = 8.0 * std::numeric_limits<double>::epsilon();

inline bool energy_not_increased(double before, double after) {
  return after <= before + kEnergyTieSlack * std::abs(before);
}

/// One projected gradient step u ← Π(u − τ(−Δ)^{n/2}u), halving τ (by the
/// backtracking factor) while the energy would increase; 30 retries at most.
inline FlowState flow_step(const FlowState& state, const FlowConfig& config) {
  const auto lap = fractional_laplacian(state.u.field(), 0.5 * state.u.grid().dimension());
  double tau = config.base_tau();
  for (int attempt = 0; attempt <= 30; ++attempt, tau *= config.backtrack) {
    auto next = nearest_projection(state.u.field() - tau * lap);
    const double e = energy(next);
    if (std::isfinite(e) && energy_not_increased(state.energy, e)) {
      const double r = el_residual(next);
      return FlowState{std::move(next), e, r, state.iteration + 1, tau};
    }
  }
  throw StepFailure("energy increased after 30 backtracks from tau = " +
                    std::to_string(config.base_tau()));
}

struct TraceRow {
  int iteration;
  double energy;
  double residual;
  double tau;
};

struct FlowTrace {
  std::vector<TraceRow> rows;
  FlowState final_state;
  bool converged = false;
};

/// Steps until el_residual ≤ tolerance or the iteration cap; one trace row per
/// iterate, the start included.
inline FlowTrace flow_run(const FlowConfig& config, ManifoldMap start) {
  config.validate();
  auto state = FlowState::start(std::move(start));
  std::vector<TraceRow> rows{{0, state.energy, state.residual, 0.0}};
  while (state.residual > config.tolerance && state.iteration < config.max_iterations) {
    state = flow_step(state, config);
    rows.push_back({state.iteration, state.energy, state.residual, state.tau});
  }
  const bool done = state.residual <= config.tolerance;
  return FlowTrace{std::move(rows), std::move(state), done};
}

/// Starts from the circle map plus a smooth tangent perturbation of the
/// configured amplitude and seed.
inline FlowTrace flow_run(const FlowConfig& config) {
  config.validate();
  const auto g = config.grid();
  auto start = config.amplitude > 0.0
                   ? perturbed_circle_map(g, config.m, config.amplitude, config.seed)
                   : circle_map(g, config.m);
  return flow_run(config, std::move(start));
}

struct GradientCheck {
  double analytic;
  double finite_difference;
  double relative_error;
};

/// Compares 2⟨(−Δ)^{n/2}u, φ⟩ with the central difference of
/// t ↦ energy(Π(u + tφ)), φ first projected onto the tangent spaces.
inline GradientCheck gradient_check(const ManifoldMap& u, const VectorFieldMap& direction,
                                    double t = 1e-4) {
  const auto phi = apply(projector_fields(u).tangent, direction);
  const double analytic =
      2.0 * inner_product(fractional_laplacian(u.field(), 0.5 * u.grid().dimension()), phi);
  const double plus = energy(nearest_projection(u.field() + t * phi));
  const double minus = energy(nearest_projection(u.field() - t * phi));
  const double fd = (plus - minus) / (2.0 * t);
  const double scale = std::max(std::abs(analytic), std::numeric_limits<double>::min());
  return {analytic, fd, std::abs(fd - analytic) / scale};
}

}  // namespace fracharm
