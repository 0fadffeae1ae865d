#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <exception>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "fracharm/commutators.hpp"
#include "fracharm/norms.hpp"
#include "fracharm/potential_system.hpp"
#include "fracharm/random_field.hpp"
#include "fracharm/sample_maps.hpp"

namespace fracharm {

/// One measured ratio left/right of an inequality ‖A(Q,u)‖ ≲ ‖Q‖‖u‖.
struct RatioReport {
  std::string id;
  std::uint64_t seed = 0;
  int n = 0;
  int N = 0;
  double left = 0.0;
  double right = 0.0;
  double ratio = 0.0;
};

/// Left side and right-hand product of one estimate.
struct EstimateSides {
  double left;
  double right;
};

/// left/right; a vanishing right side is accepted only with a left side at
/// roundoff level, which reports ratio 0.
inline double safe_ratio(const EstimateSides& s) {
  if (s.right > 0.0) return s.left / s.right;
  if (s.left <= 1e-12) return 0.0;
  throw DivisionByZero("estimate with vanishing right side and left side " + std::to_string(s.left));
}

namespace detail {

inline double minus_half_dim_l2(const ScalarField& f) {
  return lp_norm(lam(f, -half_dim(f.grid())), 2.0);
}
inline double minus_half_dim_lorentz(const ScalarField& f, double p, double q) {
  return lorentz_norm(lam(f, -half_dim(f.grid())), p, q);
}
inline double top_sobolev(const ScalarField& f) { return sobolev_norm(f, half_dim(f.grid())); }
inline double top_lorentz(const ScalarField& f) {
  return lorentz_norm(lam(f, half_dim(f.grid())), 2.0, kInfinity);
}

// Order n/2 − 1 of the half-order commutator estimates.
inline double sub_order(const PeriodicGrid& g) { return half_dim(g) - 1.0; }

inline ScalarField reverse_half_order_commutator(const ScalarField& q, const ScalarField& f) {
  const double a = sub_order(f.grid());
  return q * lam(f, a) - lam(q * f, a);
}

}  // namespace detail

/// A registered estimate. Scalar estimates act on a pair (Q, u) of random
/// fields; map estimates draw a random sphere map instead.
struct EstimateDef {
  std::string id;
  std::string statement;
  int min_dimension = 1;  // estimates stated for n > 2 need a 3-torus
  // Regularity of the random inputs, as (a, b) in s = a·n/2 + b.
  std::pair<double, double> q_regularity{1.0, 0.0};
  std::pair<double, double> u_regularity{1.0, 0.0};
  std::function<EstimateSides(const ScalarField& q, const ScalarField& u)> scalar;
  std::function<EstimateSides(const ManifoldMap& u)> on_map;
};

inline const std::vector<EstimateDef>& estimate_registry() {
  static const std::vector<EstimateDef> registry = [] {
    using detail::minus_half_dim_l2;
    using detail::minus_half_dim_lorentz;
    using detail::top_lorentz;
    using detail::top_sobolev;
    std::vector<EstimateDef> r;
    r.push_back({"T", "|T(Q,u)|_{H^-n/2} <= C |Q|_{H^n/2} |L u|_{L(2,inf)}", 1, {1, 0}, {1, 0},
                 [](const ScalarField& q, const ScalarField& u) {
                   return EstimateSides{minus_half_dim_l2(op_T(q, u)), top_sobolev(q) * top_lorentz(u)};
                 },
                 {}});
    r.push_back({"T_star", "|T*(Q,u)|_{W^-n/2,(2,1)} <= C |Q|_{H^n/2} |u|_{H^n/2}", 1, {1, 0}, {1, 0},
                 [](const ScalarField& q, const ScalarField& u) {
                   return EstimateSides{minus_half_dim_lorentz(op_T_star(q, u), 2.0, 1.0),
                                        top_sobolev(q) * top_sobolev(u)};
                 },
                 {}});
    r.push_back({"M1", "|M1(Q,u)|_{W^-n/2,(2,1)} <= C |Q|_{H^n/2} |L u|_{L2}", 1, {1, 0}, {1, 0},
                 [](const ScalarField& q, const ScalarField& u) {
                   return EstimateSides{minus_half_dim_lorentz(op_M1(q, u), 2.0, 1.0),
                                        top_sobolev(q) * top_sobolev(u)};
                 },
                 {}});
    r.push_back({"M2", "|M2(Q,u)|_{W^-n/2,(2,1)} <= C |Q|_{H^n/2} |L u|_{L2}", 1, {1, 0}, {1, 0},
                 [](const ScalarField& q, const ScalarField& u) {
                   return EstimateSides{minus_half_dim_lorentz(op_M2(q, u), 2.0, 1.0),
                                        top_sobolev(q) * top_sobolev(u)};
                 },
                 {}});
    // r = 2: ‖C(Q,h)‖_{Ẇ^{−(n/2−1),2}} ≲ ‖h‖_{L²}‖Q‖_{Ḣ^{n/2}}.
    r.push_back({"half_order", "|[L^(n/2-1), Q] h|_{W^-(n/2-1),2} <= C |h|_{L2} |Q|_{H^n/2}", 3, {1, 0}, {0, 0},
                 [](const ScalarField& q, const ScalarField& h) {
                   const auto c = half_order_commutator(q, h);
                   return EstimateSides{lp_norm(detail::lam(c, -detail::sub_order(c.grid())), 2.0),
                                        lp_norm(h, 2.0) * top_sobolev(q)};
                 },
                 {}});
    r.push_back({"half_order_dual", "|Q L^(n/2-1) f - L^(n/2-1)(Qf)|_{L2} <= C |Q|_{H^n/2} |f|_{W^(n/2-1),2}", 3, {1, 0}, {1, -1},
                 [](const ScalarField& q, const ScalarField& f) {
                   const auto c = detail::reverse_half_order_commutator(q, f);
                   return EstimateSides{lp_norm(c, 2.0),
                                        top_sobolev(q) * sobolev_norm(f, detail::sub_order(f.grid()))};
                 },
                 {}});
    r.push_back({"half_order_dual_lorentz", "|Q L^(n/2-1) f - L^(n/2-1)(Qf)|_{L(2,inf)} <= C |Q|_{H^n/2} |f|_{W^(n/2-1),(2,inf)}", 3, {1, 0}, {1, -1},
                 [](const ScalarField& q, const ScalarField& f) {
                   const auto c = detail::reverse_half_order_commutator(q, f);
                   const auto base = BaseNorm::lorentz_pq(2.0, kInfinity);
                   return EstimateSides{lorentz_norm(c, 2.0, kInfinity),
                                        top_sobolev(q) * sobolev_norm(f, detail::sub_order(f.grid()), base)};
                 },
                 {}});
    r.push_back({"CRW", "|R(Qu) - Q R u|_{L2} <= C |Q|_BMO |u|_{L2}", 1, {1, 0}, {0, 0},
                 [](const ScalarField& q, const ScalarField& u) {
                   return EstimateSides{lp_norm(pseudo_commutator(q, u, riesz_symbol(0)), 2.0),
                                        bmo_norm(q) * lp_norm(u, 2.0)};
                 },
                 {}});
    r.push_back({"CRW_Lorentz", "|R(Qu) - Q R u|_{L(2,inf)} <= C |Q|_BMO |u|_{L(2,inf)}", 1, {1, 0}, {0, 0},
                 [](const ScalarField& q, const ScalarField& u) {
                   return EstimateSides{lorentz_norm(pseudo_commutator(q, u, riesz_symbol(0)), 2.0, kInfinity),
                                        bmo_norm(q) * lorentz_norm(u, 2.0, kInfinity)};
                 },
                 {}});
    r.push_back({"riesz_hardy", "|u R h - (R u) h|_{H1} <= C |u|_{L(2,inf)} |h|_{L(2,1)}", 1, {0, 0}, {0, 0},
                 [](const ScalarField& u, const ScalarField& h) {
                   const auto ru = riesz_transform(u)[0], rh = riesz_transform(h)[0];
                   DyadicPartition part(u.grid());
                   return EstimateSides{hardy_norm(u * rh - ru * h, part),
                                        lorentz_norm(u, 2.0, kInfinity) * lorentz_norm(h, 2.0, 1.0)};
                 },
                 {}});
    r.push_back({"Omega1", "|Omega1~|_{L(2,1)} <= C (|P^N|^2 + |P^T|^2)_{H^n/2}", 1, {1, 0.5}, {1, 0}, {},
                 [](const ManifoldMap& u) {
                   const auto sys = assemble_system(u);
                   const auto p = projector_fields(u);
                   const double h = detail::half_dim(u.grid());
                   const double pt = sobolev_norm(p.tangent, h), pn = sobolev_norm(p.normal, h);
                   return EstimateSides{lorentz_norm(sys.tilde_omega1, 2.0, 1.0), pn * pn + pt * pt};
                 }});
    r.push_back({"Omega2", "|Omega2~|_{W^-n/2,(2,inf)} <= C (|P^N| + |P^T|)_{H^n/2} |L u|_{L(2,inf)}", 1, {1, 0.5}, {1, 0}, {},
                 [](const ManifoldMap& u) {
                   const auto sys = assemble_system(u);
                   const auto p = projector_fields(u);
                   const double h = detail::half_dim(u.grid());
                   const double pt = sobolev_norm(p.tangent, h), pn = sobolev_norm(p.normal, h);
                   const double lu = lorentz_norm(detail::lam(u.field(), h), 2.0, kInfinity);
                   return EstimateSides{lorentz_norm(sys.tilde_omega2_smoothed, 2.0, kInfinity),
                                        (pn + pt) * lu};
                 }});
    return r;
  }();
  return registry;
}

inline const EstimateDef& find_estimate(const std::string& id) {
  for (const auto& e : estimate_registry())
    if (e.id == id) return e;
  throw UnknownEstimate("no estimate registered as '" + id + "'");
}

/// Both sides of a scalar estimate on given fields.
inline EstimateSides estimate_sides(const std::string& id, const ScalarField& q, const ScalarField& u) {
  const auto& e = find_estimate(id);
  if (!e.scalar) throw InvalidField("estimate '" + id + "' acts on sphere maps, not field pairs");
  require_same_grid(q.grid(), u.grid());
  return e.scalar(q, u);
}

/// The seed of the second random field of a cell, decorrelated from the first.
inline std::uint64_t partner_seed(std::uint64_t seed) { return seed ^ 0x9E3779B97F4A7C15ULL; }

/// One (estimate, seed, grid) cell with fields drawn at the estimate's regularity.
inline RatioReport evaluate_estimate(const EstimateDef& e, std::uint64_t seed, const PeriodicGrid& g) {
  if (g.dimension() < e.min_dimension)
    throw WrongDimension("estimate '" + e.id + "' needs n >= " + std::to_string(e.min_dimension));
  const double h = detail::half_dim(g);
  auto level = [h](const std::pair<double, double>& r) { return r.first * h + r.second; };
  EstimateSides sides{};
  if (e.scalar) {
    const auto q = gaussian_random_field(g, level(e.q_regularity), seed);
    const auto u = gaussian_random_field(g, level(e.u_regularity), partner_seed(seed));
    sides = e.scalar(q, u);
  } else {
    sides = e.on_map(random_sphere_map(g, 3, level(e.q_regularity), seed));
  }
  return {e.id, seed, g.dimension(), g.points_per_axis(), sides.left, sides.right, safe_ratio(sides)};
}

/// Ratios for every seed and grid, ordered by (grid, seed). Cells run on up to
/// `threads` workers; the output order does not depend on scheduling.
inline std::vector<RatioReport> estimate_ratio(const std::string& id,
                                               const std::vector<std::uint64_t>& seeds,
                                               const std::vector<PeriodicGrid>& grids,
                                               unsigned threads = 1) {
  const auto& e = find_estimate(id);
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t gi = 0; gi < grids.size(); ++gi)
    for (std::size_t si = 0; si < seeds.size(); ++si) cells.emplace_back(gi, si);
  std::vector<RatioReport> out(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t c = next++; c < cells.size(); c = next++) {
      try {
        out[c] = evaluate_estimate(e, seeds[cells[c].second], grids[cells[c].first]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, unsigned(cells.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

struct RatioSummary {
  int N = 0;
  std::size_t count = 0;
  double max = 0.0;
  double median = 0.0;
};

/// Max and median ratio per grid size, in increasing N.
inline std::vector<RatioSummary> summarize(const std::vector<RatioReport>& reports) {
  std::map<int, std::vector<double>> by_grid;
  for (const auto& r : reports) by_grid[r.N].push_back(r.ratio);
  std::vector<RatioSummary> out;
  for (auto& [N, v] : by_grid) {
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size();
    const double med = k % 2 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
    out.push_back({N, k, v.back(), med});
  }
  return out;
}

inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// CSV with columns id, seed, n, N, left, right, ratio.
inline void write_ratio_csv(const std::vector<RatioReport>& reports, std::ostream& out) {
  out << "id,seed,n,N,left,right,ratio\n";
  for (const auto& r : reports)
    out << r.id << ',' << r.seed << ',' << r.n << ',' << r.N << ',' << format_double(r.left) << ','
        << format_double(r.right) << ',' << format_double(r.ratio) << '\n';
}

}  // namespace fracharm
