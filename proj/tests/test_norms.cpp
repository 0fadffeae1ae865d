#include <catch_amalgamated.hpp>

#include <map>

#include "fracharm/norms.hpp"
#include "fracharm/random_field.hpp"
#include "support.hpp"

using namespace fracharm;
using namespace testing_support;

namespace {

// Centred ball averages by direct enumeration.
ScalarField brute_maximal(const ScalarField& f) {
  const auto& g = f.grid();
  const int N = g.points_per_axis();
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t c = 0; c < g.size(); ++c) {
    auto ci = g.multi_index(c);
    double best = std::abs(f[c]);
    for (int k = 1; k <= N / 2; ++k) {
      double sum = 0.0, count = 0.0;
      for (std::size_t q = 0; q < g.size(); ++q) {
        auto qi = g.multi_index(q);
        double d = 0.0;
        for (int a = 0; a < g.dimension(); ++a) {
          int m = std::abs(qi[a] - ci[a]);
          m = std::min(m, N - m);
          d += double(m) * m;
        }
        if (d <= double(k) * k) {
          sum += std::abs(f[q]);
          count += 1.0;
        }
      }
      best = std::max(best, sum / count);
    }
    out[c] = best;
  }
  return ScalarField(g, out);
}

}  // namespace

TEST_CASE("lp norms", "[norms]") {
  PeriodicGrid g(1, 64);
  CHECK(lp_norm(ScalarField::constant(g, 2.0), 1.0) == Catch::Approx(4.0 * pi).epsilon(1e-14));
  CHECK(lp_norm(cos_mode(g, 1), 2.0) == Catch::Approx(std::sqrt(pi)).epsilon(1e-14));
  auto pm = ScalarField::sample(g, [](const auto& x) { return x[0] < pi ? 1.0 : -1.0; });
  CHECK(lp_norm(pm, kInfinity) == 1.0);
  CHECK_THROWS_AS(lp_norm(pm, 0.5), BadExponent);
}

TEST_CASE("decreasing rearrangement", "[norms][lorentz]") {
  auto fs = rearrange({4, 3, 2, 1}, {1, 1, 1, 1});
  CHECK(fs.values == std::vector<double>{4, 3, 2, 1});
  auto shuffled = rearrange({2, -4, 1, 3}, {1, 1, 1, 1});
  CHECK(shuffled.values == std::vector<double>{4, 3, 2, 1});

  PeriodicGrid g(1, 16);
  auto c = decreasing_rearrangement(ScalarField::constant(g, -1.5));
  CHECK(c.measure() == Catch::Approx(2.0 * pi));
  for (double v : c.values) CHECK(v == 1.5);

  PeriodicGrid g3(3, 8);
  auto f = gaussian_random_field(g3, 0.0, 4);
  auto r = decreasing_rearrangement(f);
  CHECK(std::is_sorted(r.values.rbegin(), r.values.rend()));
  std::vector<double> abs_sorted;
  for (double v : f.values()) abs_sorted.push_back(std::abs(v));
  std::sort(abs_sorted.begin(), abs_sorted.end(), std::greater<>());
  CHECK(abs_sorted == r.values);
  // distribution functions agree at every level
  for (double level : {0.01, 0.1, 0.5, 1.0}) {
    double mf = 0.0, mr = 0.0;
    for (double v : f.values())
      if (std::abs(v) > level) mf += g3.cell_measure();
    for (std::size_t i = 0; i < r.values.size(); ++i)
      if (r.values[i] > level) mr += r.widths[i];
    CHECK(mf == mr);
  }
}

TEST_CASE("lorentz norms", "[norms][lorentz]") {
  auto fs = rearrange({4, 3, 2, 1}, {1, 1, 1, 1});
  CHECK(std::abs(lorentz_norm(fs, 2.0, kInfinity) - 3.0 * std::sqrt(2.0)) < 1e-12);
  auto one = rearrange({2.5}, {7.0});
  CHECK(lorentz_norm(one, 3.0, kInfinity) == Catch::Approx(2.5 * std::cbrt(7.0)).epsilon(1e-14));
  CHECK_THROWS_AS(lorentz_norm(fs, 0.5, 2.0), BadExponent);
  CHECK_THROWS_AS(lorentz_norm(fs, 2.0, 0.5), BadExponent);
  CHECK_THROWS_AS(lorentz_norm(fs, kInfinity, 2.0), BadExponent);

  for (int seed = 1; seed <= 20; ++seed) {
    PeriodicGrid g(seed % 2 ? 1 : 3, seed % 2 ? 128 : 16);
    auto f = gaussian_random_field(g, 0.5, seed);
    for (double p : {1.0, 2.0, 3.5}) {
      const double a = lorentz_norm(f, p, p), b = lp_norm(f, p);
      CHECK(std::abs(a - b) <= 1e-12 * b);
    }
  }
}

TEST_CASE("maximal function", "[norms][maximal]") {
  PeriodicGrid g(1, 32);
  auto c = ScalarField::constant(g, -2.0);
  auto mc = maximal_function(c);
  for (double v : mc.values()) CHECK(v == Catch::Approx(2.0).epsilon(1e-14));

  auto f = gaussian_random_field(g, 0.5, 8);
  auto mf = maximal_function(f);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(mf[i] >= std::abs(f[i]));
  CHECK(max_abs_difference(mf, brute_maximal(f)) < 1e-13);

  std::vector<double> spike(g.size(), 0.0);
  spike[5] = 1.0;
  auto ms = maximal_function(ScalarField(g, spike));
  auto bs = brute_maximal(ScalarField(g, spike));
  CHECK(max_abs_difference(ms, bs) < 1e-14);
  CHECK(ms[5] == Catch::Approx(1.0));
  CHECK(ms[8] == Catch::Approx(1.0 / 7.0));  // distance 3, ball of 7 cells

  PeriodicGrid g3(3, 8);
  auto f3 = gaussian_random_field(g3, 0.5, 2);
  CHECK(max_abs_difference(maximal_function(f3), brute_maximal(f3)) < 1e-13);
}

TEST_CASE("sobolev norms", "[norms][sobolev]") {
  PeriodicGrid g(3, 16);
  auto c1 = cos_mode(g, 1);
  CHECK(sobolev_norm(c1, 1.5) == Catch::Approx(lp_norm(c1, 2.0)).epsilon(1e-13));
  auto f = gaussian_random_field(g, 1.5, 2);
  CHECK(sobolev_norm(2.0 * f, 1.5) == Catch::Approx(2.0 * sobolev_norm(f, 1.5)).epsilon(1e-13));
  auto c2 = cos_mode(g, 2);
  CHECK(sobolev_norm(c2, 1.0) == Catch::Approx(2.0 * lp_norm(c2, 2.0)).epsilon(1e-13));
  CHECK_THROWS_AS(sobolev_norm(ScalarField::constant(g, 1.0), -1.5), MeanNotZero);
  CHECK(sobolev_norm(c2, -1.0) == Catch::Approx(0.5 * lp_norm(c2, 2.0)).epsilon(1e-13));
  CHECK(sobolev_norm(c2, 1.0, BaseNorm::lorentz_pq(2.0, 2.0)) ==
        Catch::Approx(2.0 * lp_norm(c2, 2.0)).epsilon(1e-12));
}

TEST_CASE("besov and triebel norms", "[norms][besov]") {
  PeriodicGrid g(1, 64);
  DyadicPartition p(g);
  auto c2 = cos_mode(g, 2);  // entirely in shell 1
  for (double s : {0.0, 0.5, 1.5})
    for (double pp : {1.0, 2.0, kInfinity}) {
      const double expect = std::pow(2.0, s) * lp_norm(c2, pp);
      CHECK(besov_norm(c2, s, pp, 2.0, p) == Catch::Approx(expect).epsilon(1e-12));
      CHECK(triebel_norm(c2, s, pp, 2.0, p) == Catch::Approx(expect).epsilon(1e-12));
    }
  CHECK(besov_norm(cos_mode(g, 1), 0.0, kInfinity, kInfinity, p) == Catch::Approx(1.0).epsilon(1e-13));
  CHECK_THROWS_AS(besov_norm(c2, 0.0, 2.0, 0.5, p), BadExponent);
  CHECK_THROWS_AS(triebel_norm(c2, 0.0, 2.0, 0.5, p), BadExponent);

  for (int n : {1, 3}) {
    PeriodicGrid gn(n, n == 1 ? 128 : 16);
    DyadicPartition pn(gn);
    for (int seed = 1; seed <= 10; ++seed) {
      auto f = gaussian_random_field(gn, 0.5, seed);
      const double l2 = lp_norm(f, 2.0);
      const double b = besov_norm(f, 0.0, 2.0, 2.0, pn);
      CHECK(b == Catch::Approx(triebel_norm(f, 0.0, 2.0, 2.0, pn)).epsilon(1e-12));
      CHECK(b / l2 >= 1.0 / std::sqrt(3.0));
      CHECK(b / l2 <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("hardy norm", "[norms][hardy]") {
  PeriodicGrid g(1, 64);
  DyadicPartition p(g);
  CHECK(hardy_norm(ScalarField::zeros(g), p) == 0.0);
  auto c2 = cos_mode(g, 2);
  CHECK(hardy_norm(c2, p) == Catch::Approx(lp_norm(c2, 1.0)).epsilon(1e-12));
  double worst = 0.0;
  for (int seed = 1; seed <= 20; ++seed) {
    auto f = gaussian_random_field(g, 0.5, seed);
    worst = std::max(worst, lp_norm(f, 1.0) / hardy_norm(f, p));
  }
  CHECK(worst <= 1.0 + 1e-12);  // |Σ f_j| ≤ (#overlap)^{1/2}(Σ|f_j|²)^{1/2}, two shells overlap
  INFO("L1/Hardy constant " << worst);
}

TEST_CASE("bmo norm", "[norms][bmo]") {
  PeriodicGrid g(1, 64), fine(1, 128);
  CHECK(bmo_norm(ScalarField::constant(g, 3.0)) < 1e-15);
  const double a = bmo_norm(cos_mode(g, 1)), b = bmo_norm(cos_mode(fine, 1));
  CHECK(a >= 0.3);
  CHECK(a <= 0.7);
  CHECK(std::abs(b / a - 1.0) <= 0.1);
  for (int n : {1, 3}) {
    PeriodicGrid gn(n, n == 1 ? 64 : 16);
    for (int seed = 1; seed <= 5; ++seed) {
      auto f = gaussian_random_field(gn, 0.5, seed);
      CHECK(bmo_norm(f) <= 2.0 * f.max_abs());
    }
  }
}

TEST_CASE("lorentz holder", "[norms][holder]") {
  PeriodicGrid g(1, 64);
  auto left = ScalarField::sample(g, [](const auto& x) { return x[0] < pi ? 1.0 + x[0] : 0.0; });
  auto right = ScalarField::sample(g, [](const auto& x) { return x[0] >= pi ? 2.0 : 0.0; });
  HolderExponents e{4, 4, 4, 4};
  CHECK(lorentz_holder_check(left, right, e) == 0.0);
  auto bump = ScalarField::sample(g, [](const auto& x) { return std::abs(x[0] - pi) < 1.0 ? 1.0 : 0.0; });
  CHECK(lorentz_holder_check(bump, bump, e) <= 4.0);
  auto one = ScalarField::constant(g, 1.0);
  CHECK(lorentz_holder_check(one, one, {3, kInfinity, 6, kInfinity}) == Catch::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(lorentz_holder_check(one, one, {0.5, 2, 2, 2}), BadExponent);
  CHECK_THROWS_AS(lorentz_holder_check(one, one, {2, 1, 2, 1}), BadExponent);
}

TEST_CASE("norm homogeneity and triangle inequality", "[norms]") {
  PeriodicGrid g(1, 128);
  DyadicPartition p(g);
  std::vector<std::pair<const char*, std::function<double(const ScalarField&)>>> norms = {
      {"l1", [](const ScalarField& f) { return lp_norm(f, 1.0); }},
      {"l3", [](const ScalarField& f) { return lp_norm(f, 3.0); }},
      {"linf", [](const ScalarField& f) { return lp_norm(f, kInfinity); }},
      {"lorentz21", [](const ScalarField& f) { return lorentz_norm(f, 2.0, 1.0); }},
      {"lorentz32", [](const ScalarField& f) { return lorentz_norm(f, 3.0, 2.0); }},
      {"sobolev", [](const ScalarField& f) { return sobolev_norm(f, 0.5); }},
      {"besov", [&](const ScalarField& f) { return besov_norm(f, 0.5, 2.0, 1.0, p); }},
      {"triebel", [&](const ScalarField& f) { return triebel_norm(f, 0.0, 1.0, 2.0, p); }},
      {"hardy", [&](const ScalarField& f) { return hardy_norm(f, p); }},
      {"bmo", [](const ScalarField& f) { return bmo_norm(f); }},
  };
  for (int seed = 1; seed <= 5; ++seed) {
    auto a = gaussian_random_field(g, 0.5, seed);
    auto b = gaussian_random_field(g, 0.5, seed + 50);
    for (auto& [name, nf] : norms) {
      INFO(name);
      CHECK(nf(-2.5 * a) == Catch::Approx(2.5 * nf(a)).epsilon(1e-12));
      CHECK(nf(a + b) <= nf(a) + nf(b) + 1e-10);
    }
  }
}

TEST_CASE("norm table", "[norms]") {
  PeriodicGrid g(1, 32);
  auto rows = norm_table(cos_mode(g, 1));
  CHECK(rows.size() == 11);
  for (const auto& r : rows) CHECK(std::isfinite(r.value));
}
