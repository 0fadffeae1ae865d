#include <catch_amalgamated.hpp>

#include "fracharm/commutators.hpp"
#include "fracharm/random_field.hpp"
#include "fracharm/sample_maps.hpp"
#include "modes.hpp"
#include "support.hpp"

using namespace fracharm;
using namespace testing_support;

namespace {

double rel_gap(const ScalarField& a, const ScalarField& b) {
  const double scale = std::max({a.max_abs(), b.max_abs(), 1.0});
  return max_abs_difference(a, b) / scale;
}

double rel_gap(const VectorFieldMap& a, const VectorFieldMap& b) {
  const double scale = std::max({max_abs(a), max_abs(b), 1.0});
  return max_abs_difference(a, b) / scale;
}

PeriodicGrid grid_for(int n) { return n == 1 ? PeriodicGrid(1, 64) : PeriodicGrid(3, 16); }

// The three-term operators composed in exact Fourier series.
Modes modes_T(const Modes& q, const Modes& u, double h) {
  return (q.power(h) * u).power(h) - q * u.power(2 * h) + (q * u.power(h)).power(h);
}
Modes modes_T_star(const Modes& q, const Modes& u, double h) {
  return (q.power(h) * u).power(h) - (q * u).power(2 * h) + (q * u.power(h)).power(h);
}
Modes modes_T_euler(const Modes& q, const Modes& u, double h) {
  return q.power(h) * u.power(h) - q * u.power(2 * h) + (q * u.power(h)).power(h);
}

}  // namespace

TEST_CASE("three-term operators vanish for constant Q", "[commutators]") {
  for (int n : {1, 3}) {
    auto g = grid_for(n);
    auto u = gaussian_random_field(g, 1.5, 3);
    auto c = ScalarField::constant(g, 2.5);
    CHECK(op_T(c, u).max_abs() <= 1e-12 * std::max(1.0, u.max_abs()));
    CHECK(op_T_star(c, u).max_abs() <= 1e-12 * std::max(1.0, u.max_abs()));
    CHECK(op_T_euler(c, u).max_abs() <= 1e-12 * std::max(1.0, u.max_abs()));
  }
}

TEST_CASE("T with constant u is c times the top-order image of Q", "[commutators]") {
  for (int n : {1, 3}) {
    auto g = grid_for(n);
    auto q = gaussian_random_field(g, 1.5, 4);
    auto c = ScalarField::constant(g, -1.5);
    auto expected = -1.5 * fractional_laplacian(q, 0.5 * n);
    CHECK(rel_gap(op_T(q, c), expected) <= 1e-12);
  }
}

TEST_CASE("T, T* and the adjoint variant on two modes", "[commutators]") {
  PeriodicGrid g(3, 16);
  const double h = 1.5;
  auto qm = Modes::cosine({2, 0, 0}), um = Modes::cosine({3, 0, 0});
  auto q = qm.sample(g), u = um.sample(g);
  CHECK(rel_gap(op_T(q, u), modes_T(qm, um, h).sample(g)) <= 1e-12);
  // Closed form: ½[|k|^{3/2}(2^{3/2} + 3^{3/2}) − 27] cos(kx) over k ∈ {1, 5}.
  auto closed = ScalarField::sample(g, [](const auto& x) {
    const double a = std::pow(2.0, 1.5) + std::pow(3.0, 1.5);
    return 0.5 * (a - 27.0) * std::cos(x[0]) + 0.5 * (std::pow(5.0, 1.5) * a - 27.0) * std::cos(5 * x[0]);
  });
  CHECK(rel_gap(op_T(q, u), closed) <= 1e-12);

  auto qm2 = Modes::cosine({1, 2, 0}) + Modes::sine({0, 1, 1}, 0.5);
  auto um2 = Modes::sine({2, 0, 1}) + Modes::cosine({1, 1, 1}, 0.3);
  auto q2 = qm2.sample(g), u2 = um2.sample(g);
  CHECK(rel_gap(op_T(q2, u2), modes_T(qm2, um2, h).sample(g)) <= 1e-12);
  CHECK(rel_gap(op_T_star(q2, u2), modes_T_star(qm2, um2, h).sample(g)) <= 1e-12);
  CHECK(rel_gap(op_T_euler(q2, u2), modes_T_euler(qm2, um2, h).sample(g)) <= 1e-12);
}

TEST_CASE("T* minus T is a plain commutator with the top-order operator", "[commutators]") {
  for (int n : {1, 3}) {
    auto g = grid_for(n);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto q = gaussian_random_field(g, 0.5 * n, seed);
      auto u = gaussian_random_field(g, 0.5 * n, seed + 100);
      auto lhs = op_T_star(q, u) - op_T(q, u);
      auto rhs = q * fractional_laplacian(u, 0.5 * n) - fractional_laplacian(q * u, 0.5 * n);
      CHECK(rel_gap(lhs, rhs) <= 1e-11);
    }
  }
}

TEST_CASE("T* pairs with the adjoint variant of T", "[commutators]") {
  for (int n : {1, 3}) {
    auto g = grid_for(n);
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      auto q = gaussian_random_matrix(g, 3, 2, 0.5 * n, seed);
      auto u = gaussian_random_vector(g, 2, 0.5 * n, seed + 10);
      auto h = gaussian_random_vector(g, 3, 0.5 * n, seed + 20);
      const double left = inner_product(op_T_star(q, u), h);
      const double right = inner_product(u, op_T_euler(q.transpose(), h));
      const double scale = std::sqrt(inner_product(op_T_star(q, u), op_T_star(q, u)) *
                                     inner_product(h, h));
      CHECK(std::abs(left - right) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("three-term operators are bilinear", "[commutators]") {
  auto g = grid_for(3);
  auto q1 = gaussian_random_field(g, 1.5, 1), q2 = gaussian_random_field(g, 1.5, 2);
  auto u1 = gaussian_random_field(g, 1.5, 3), u2 = gaussian_random_field(g, 1.5, 4);
  const double a = 0.7, b = -1.3;
  for (auto op : {+[](const ScalarField& q, const ScalarField& u) { return op_T(q, u); },
                  +[](const ScalarField& q, const ScalarField& u) { return op_T_star(q, u); },
                  +[](const ScalarField& q, const ScalarField& u) { return op_M1(q, u); },
                  +[](const ScalarField& q, const ScalarField& u) { return op_M2(q, u); },
                  +[](const ScalarField& q, const ScalarField& u) { return half_order_commutator(q, u); }}) {
    CHECK(rel_gap(op(a * q1 + b * q2, u1), a * op(q1, u1) + b * op(q2, u1)) <= 1e-12);
    CHECK(rel_gap(op(q1, a * u1 + b * u2), a * op(q1, u1) + b * op(q1, u2)) <= 1e-12);
  }
}

TEST_CASE("paraproduct groups of T* add up to T*", "[commutators]") {
  for (int n : {1, 3}) {
    auto g = grid_for(n);
    DyadicPartition part(g);
    auto q = gaussian_random_field(g, 0.5 * n, 8);
    auto u = gaussian_random_field(g, 0.5 * n, 9);
    auto pieces = op_T_star_split(q, u, part);
    CHECK(rel_gap(pieces[0] + pieces[1] + pieces[2], op_T_star(q, u)) <= 1e-10);
  }
}

TEST_CASE("M1 and M2", "[commutators]") {
  auto g1 = grid_for(1);
  auto q1 = gaussian_random_field(g1, 1.0, 1), u1 = gaussian_random_field(g1, 1.0, 2);
  CHECK(op_M1(q1, u1).max_abs() == 0.0);
  CHECK(op_M2(q1, u1).max_abs() == 0.0);

  // n = 3, Q = cos(a·x), u = cos(b·x):
  // M1 = (3/2)(a·b)|a|^{-1/2}·½[|a−b|^{3/2}cos((a−b)·x) − |a+b|^{3/2}cos((a+b)·x)],
  // M2 the same with |b|^{-1/2}.
  PeriodicGrid g(3, 16);
  const std::array<int, 3> a{1, 2, 0}, b{2, 1, 1};
  auto qm = Modes::cosine(a), um = Modes::cosine(b);
  auto q = qm.sample(g), u = um.sample(g);
  auto closed = [&](double weight) {
    std::array<int, 3> d{a[0] - b[0], a[1] - b[1], a[2] - b[2]}, s{a[0] + b[0], a[1] + b[1], a[2] + b[2]};
    const double ab = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    return 1.5 * ab * weight * 0.5 *
           (std::pow(Modes::norm(d), 1.5) * Modes::cosine(d) - std::pow(Modes::norm(s), 1.5) * Modes::cosine(s));
  };
  // a·b = 0 here would make the check vacuous.
  REQUIRE(a[0] * b[0] + a[1] * b[1] + a[2] * b[2] != 0);
  const double na = Modes::norm(a), nb = Modes::norm(b);
  CHECK(rel_gap(op_M1(q, u), closed(std::pow(na, -0.5)).sample(g)) <= 1e-12);
  CHECK(rel_gap(op_M2(q, u), closed(std::pow(nb, -0.5)).sample(g)) <= 1e-12);

  // Term enumeration over α = e_1, e_2, e_3 for mixed modes.
  auto qm2 = Modes::cosine({1, 0, 2}) + Modes::sine({0, 1, 1});
  auto um2 = Modes::sine({1, 1, 0}) + Modes::cosine({2, 0, 1}, 0.5);
  Modes m1, m2;
  for (int k = 0; k < 3; ++k) {
    m1 = m1 + 1.5 * (qm2.partial(k).power(-0.5) * um2.partial(k)).power(1.5);
    m2 = m2 + 1.5 * (qm2.partial(k) * um2.partial(k).power(-0.5)).power(1.5);
  }
  CHECK(rel_gap(op_M1(qm2.sample(g), um2.sample(g)), m1.sample(g)) <= 1e-12);
  CHECK(rel_gap(op_M2(qm2.sample(g), um2.sample(g)), m2.sample(g)) <= 1e-12);
}

TEST_CASE("remainder operator", "[commutators]") {
  for (int n : {1, 3}) {
    auto g = grid_for(n);
    const double h = 0.5 * n;
    auto u = gaussian_random_vector(g, 2, h, 5);
    auto zero = VectorFieldMap::zeros(g, 2);
    auto q = gaussian_random_matrix(g, 2, 2, h, 6);
    CHECK(max_abs(op_R_remainder(q, zero)) == 0.0);

    // Closed form: R(Q,u) = QΛ^n u − (Λ^{n/2}Q)(Λ^{n/2}u); for constant Q this is cΛ^n u.
    auto expected = apply(q, fractional_laplacian(u, h)) -
                    apply(fractional_laplacian(q, 0.5 * h), fractional_laplacian(u, 0.5 * h));
    CHECK(rel_gap(op_R_remainder(q, u), expected) <= 1e-11);
    auto c = MatrixField::identity(g, 2);
    CHECK(rel_gap(op_R_remainder(c, u), fractional_laplacian(u, h)) <= 1e-12);

    // Against the two rewritten structure-equation terms.
    auto sphere = random_sphere_map(g, 3, 2.0, 7);
    auto pt = projector_fields(sphere).tangent;
    auto terms = structure_rewrite_terms(pt, sphere.field());
    CHECK(rel_gap(op_R_remainder(pt, sphere.field()), terms[0] + terms[1]) <= 1e-10);
  }
  // Single modes on n = 1 against the Fourier-series oracle.
  PeriodicGrid g(1, 64);
  auto qm = Modes::cosine({2, 0, 0}) + Modes::sine({5, 0, 0}), um = Modes::cosine({3, 0, 0});
  auto rm = (qm * um.power(0.5)).power(0.5) - modes_T_euler(qm, um, 0.5);
  auto r = op_R_remainder(MatrixField::scalar(qm.sample(g)), VectorFieldMap({um.sample(g)}));
  CHECK(rel_gap(r[0], rm.sample(g)) <= 1e-12);
}

TEST_CASE("structure equation pieces", "[commutators]") {
  for (int n : {1, 3}) {
    PeriodicGrid g(n, n == 1 ? 128 : 16);
    auto u = circle_map(g, 3);
    auto normal = projector_fields(u).normal;
    auto f = op_f_structure(normal, u);
    REQUIRE(int(f.size()) == n);
    // P^N∇u = 0 for the circle map, leaving the Riesz part only.
    auto pn_lu = apply(normal, fractional_laplacian(u.field(), 0.25 * n));
    for (std::size_t i = 0; i < 3; ++i) {
      auto r = riesz_transform(pn_lu[i]);
      for (int k = 0; k < n; ++k) CHECK(max_abs_difference(f[k][i], r[k]) <= 1e-12);
    }
    CHECK(structure_residual(u) <= 1e-12);

    auto constant = ManifoldMap(VectorFieldMap(
        {ScalarField::constant(g, 0.6), ScalarField::constant(g, 0.8), ScalarField::zeros(g)}));
    for (const auto& fk : op_f_structure(projector_fields(constant).normal, constant))
      CHECK(max_abs(fk) <= 1e-14);
  }

  // The residual is controlled by the tangency defect and shrinks with it.
  const double coarse = structure_residual(cusp_sphere_map(PeriodicGrid(1, 128)));
  const double fine = structure_residual(cusp_sphere_map(PeriodicGrid(1, 256)));
  CHECK(coarse / fine >= 1.5);
}

TEST_CASE("S1 on the line", "[commutators]") {
  PeriodicGrid g(1, 64);
  auto u = gaussian_random_field(g, 1.0, 3);
  CHECK(op_S1(ScalarField::constant(g, 1.7), u).max_abs() <= 1e-12);
  CHECK(op_S1(gaussian_random_field(g, 1.0, 4), ScalarField::zeros(g)).max_abs() == 0.0);
  REQUIRE_THROWS_AS(op_S1(ScalarField::zeros(PeriodicGrid(3, 8)), ScalarField::zeros(PeriodicGrid(3, 8))),
                    WrongDimension);

  auto qm = Modes::cosine({2, 0, 0}) + Modes::constant(0.5), um = Modes::sine({3, 0, 0});
  auto sm = (qm * um.power(0.5)).power(0.5) - (qm * um.partial(0)).riesz_adjoint(0) +
            qm.power(0.5) * um.power(0.5).riesz(0);
  CHECK(rel_gap(op_S1(qm.sample(g), um.sample(g)), sm.sample(g)) <= 1e-12);
}

TEST_CASE("omega matrices", "[commutators]") {
  for (int n : {1, 3}) {
    auto g = grid_for(n);
    auto pt = projector_fields(random_sphere_map(g, 3, 2.0, 12)).tangent;
    auto w = omega_fields(pt);
    CHECK(max_abs(w.omega + w.omega.transpose()) <= 1e-12);
    CHECK(max_abs(w.omega1 - w.omega1.transpose()) <= 1e-12);

    // (Λ^{n/2}P)P = ω₁ + ω + Λ^{n/2}P/2 when PP = P.
    auto lp = fractional_laplacian(pt, 0.25 * n);
    auto lhs = multiply(lp, pt);
    auto rhs = w.omega1 + w.omega + 0.5 * lp;
    CHECK(max_abs_difference(lhs, rhs) <= 1e-11 * std::max(1.0, max_abs(lhs)));

    auto flat = MatrixField::identity(g, 3);
    auto z = omega_fields(flat);
    CHECK(max_abs(z.omega) == 0.0);
    CHECK(max_abs(z.omega1) == 0.0);
    CHECK(max_abs(z.omega2) == 0.0);
  }
}

TEST_CASE("order-zero pseudo-differential commutator", "[commutators]") {
  PeriodicGrid g(1, 64);
  auto q = gaussian_random_field(g, 1.0, 1), u = gaussian_random_field(g, 1.0, 2);
  FourierMultiplier identity{[](const Frequency&, const PeriodicGrid&) { return Complex(1.0); },
                             Complex(1.0)};
  CHECK(pseudo_commutator(q, u, identity).max_abs() <= 1e-14);
  CHECK(pseudo_commutator(ScalarField::constant(g, 3.0), u, riesz_symbol(0)).max_abs() <= 1e-13);

  auto qm = Modes::cosine({1, 0, 0}), um = Modes::cosine({5, 0, 0});
  auto expected = (qm * um).riesz(0) - qm * um.riesz(0);
  CHECK(rel_gap(pseudo_commutator(qm.sample(g), um.sample(g), riesz_symbol(0)), expected.sample(g)) <= 1e-12);

  REQUIRE_THROWS_AS(pseudo_commutator(q, u, fractional_laplacian_symbol(0.5)), NonZeroOrder);
}

TEST_CASE("half-order commutator", "[commutators]") {
  PeriodicGrid g(3, 16);
  auto h = gaussian_random_field(g, 1.0, 3);
  CHECK(half_order_commutator(ScalarField::constant(g, 2.0), h).max_abs() <= 1e-12);
  auto qm = Modes::cosine({1, 1, 0}), hm = Modes::sine({0, 2, 1});
  auto expected = (qm * hm).power(0.5) - qm * hm.power(0.5);
  CHECK(rel_gap(half_order_commutator(qm.sample(g), hm.sample(g)), expected.sample(g)) <= 1e-12);
}
