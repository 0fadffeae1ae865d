#include <catch_amalgamated.hpp>

#include "fracharm/harmonic_flow.hpp"
#include "fracharm/potential_system.hpp"
#include "fracharm/random_field.hpp"
#include "support.hpp"

using namespace fracharm;
using namespace testing_support;

TEST_CASE("energy of reference maps", "[flow]") {
  CHECK(energy(circle_map(PeriodicGrid(1, 256))) == Catch::Approx(2 * pi).epsilon(1e-12));
  // (−Δ)^{3/2} acts as the identity on both components: E = ‖u‖² = (2π)³.
  CHECK(energy(circle_map(PeriodicGrid(3, 16))) == Catch::Approx(std::pow(2 * pi, 3)).epsilon(1e-12));
  PeriodicGrid g(1, 32);
  auto constant = ManifoldMap(VectorFieldMap({ScalarField::constant(g, 1.0), ScalarField::zeros(g)}));
  CHECK(energy(constant) == 0.0);
  auto w = gaussian_random_vector(g, 2, 1.0, 3);
  CHECK(energy(2.0 * w) == Catch::Approx(4.0 * energy(w)).epsilon(1e-13));
  CHECK(energy(w) > 0.0);
}

TEST_CASE("Euler-Lagrange residual", "[flow]") {
  CHECK(el_residual(circle_map(PeriodicGrid(1, 256))) <= 1e-10);
  CHECK(el_residual(circle_map(PeriodicGrid(3, 16))) <= 1e-10);
  CHECK(el_residual(blaschke_map(PeriodicGrid(1, 128), -0.4)) <= 1e-10);
  PeriodicGrid g(1, 32);
  auto constant = ManifoldMap(VectorFieldMap({ScalarField::zeros(g), ScalarField::constant(g, -1.0)}));
  CHECK(el_residual(constant) == 0.0);
  CHECK(el_residual(perturbed_circle_map(PeriodicGrid(1, 128), 2, 0.1, 1)) > 1e-3);
}

TEST_CASE("flow steps", "[flow]") {
  FlowConfig cfg;
  cfg.n = 1;
  cfg.N = 256;
  auto circle = FlowState::start(circle_map(cfg.grid()));
  auto next = flow_step(circle, cfg);
  CHECK(max_abs_difference(next.u.field(), circle.u.field()) <= 1e-10);

  // Displacement is first order in τ.
  auto start = FlowState::start(perturbed_circle_map(cfg.grid(), 2, 0.1, 5));
  FlowConfig small = cfg, half = cfg;
  small.tau = 1e-6;
  half.tau = 5e-7;
  const double d1 = max_abs_difference(flow_step(start, small).u.field(), start.u.field());
  const double d2 = max_abs_difference(flow_step(start, half).u.field(), start.u.field());
  CHECK(d1 / d2 == Catch::Approx(2.0).epsilon(1e-3));

  // 50 consecutive accepted steps with strictly decreasing energy.
  auto s = start;
  for (int i = 0; i < 50; ++i) {
    auto t = flow_step(s, cfg);
    CHECK(t.energy < s.energy);
    CHECK(t.iteration == s.iteration + 1);
    s = t;
  }

  FlowConfig bad = cfg;
  bad.backtrack = 1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidField);
}

TEST_CASE("flow runs", "[flow]") {
  FlowConfig cfg;
  cfg.n = 1;
  cfg.N = 256;
  auto trivial = flow_run(cfg, circle_map(cfg.grid()));
  CHECK(trivial.rows.size() == 1);
  CHECK(trivial.converged);

  cfg.tau = 1.0 / 128.0;
  auto trace = flow_run(cfg);
  CHECK(trace.converged);
  CHECK(trace.final_state.residual <= 1e-6);
  CHECK(trace.rows.size() <= 5001);
  for (std::size_t i = 1; i < trace.rows.size(); ++i)
    CHECK(energy_not_increased(trace.rows[i - 1].energy, trace.rows[i].energy));
  CHECK(trace.rows.back().energy <= trace.rows.front().energy);
  CHECK(trace.rows.back().residual < trace.rows.front().residual);
}

TEST_CASE("energy gradient matches central differences", "[flow]") {
  for (int n : {1, 3}) {
    PeriodicGrid g(n, n == 1 ? 128 : 16);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      auto u = perturbed_circle_map(g, 3, 0.3, seed);
      auto phi = gaussian_random_vector(g, 3, 2.0, seed + 50);
      auto check = gradient_check(u, phi);
      CHECK(check.relative_error <= 1e-5);
    }
  }
}

TEST_CASE("potential system assembly", "[flow]") {
  for (int n : {1, 3}) {
    PeriodicGrid g(n, n == 1 ? 64 : 8);
    auto u = random_sphere_map(g, 3, 2.0, 21);
    auto sys = assemble_system(u);
    CHECK(sys.v.target_dim() == 6);
    CHECK(max_abs(sys.big_omega + sys.big_omega.transpose()) <= 1e-12);
    // Block pattern: ±2ω.
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        const auto& w = sys.omegas.omega(i, j);
        CHECK(max_abs_difference(sys.big_omega(i, j), -2.0 * w) == 0.0);
        CHECK(max_abs_difference(sys.big_omega(i, j + 3), 2.0 * w) == 0.0);
        CHECK(max_abs_difference(sys.big_omega(i + 3, j), 2.0 * w) == 0.0);
        CHECK(max_abs_difference(sys.big_omega(i + 3, j + 3), -2.0 * w) == 0.0);
        CHECK(max_abs_difference(sys.tilde_omega1(i + 3, j), sys.omegas.omega1(i, j)) == 0.0);
        CHECK(max_abs_difference(sys.tilde_omega1(i, j), -1.0 * sys.omegas.omega1(i, j)) == 0.0);
      }
    for (double d : rewriting_identity_defects(u)) CHECK(d <= 1e-11);

    auto constant = ManifoldMap(VectorFieldMap(
        {ScalarField::zeros(g), ScalarField::zeros(g), ScalarField::constant(g, 1.0)}));
    auto zero = assemble_system(constant);
    CHECK(max_abs(zero.v) == 0.0);
    CHECK(max_abs(zero.big_omega) == 0.0);
    CHECK(max_abs(zero.tilde_omega1) == 0.0);
    CHECK(max_abs(zero.tilde_omega2) == 0.0);
    CHECK(system_residual(zero) == 0.0);
  }
}

TEST_CASE("system residual", "[flow]") {
  CHECK(system_residual(assemble_system(circle_map(PeriodicGrid(1, 256), 3))) <= 1e-8);
  CHECK(system_residual(assemble_system(circle_map(PeriodicGrid(3, 16), 3))) <= 1e-8);
  // Blaschke factors are exact critical points whose spectra are not band
  // limited, so the residual comes from truncation and shrinks with N.
  const double coarse = system_residual(assemble_system(blaschke_map(PeriodicGrid(1, 32), 0.5)));
  const double fine = system_residual(assemble_system(blaschke_map(PeriodicGrid(1, 64), 0.5)));
  CHECK(coarse > 0.0);
  CHECK(coarse / fine >= 1.5);
  // Away from criticality the residual is of the size of the EL defect.
  auto u = perturbed_circle_map(PeriodicGrid(1, 64), 3, 0.2, 3);
  CHECK(system_residual(assemble_system(u)) > 1e-3);
}
