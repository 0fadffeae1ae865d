#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fracharm/commutators.hpp"
#include "fracharm/estimates.hpp"
#include "fracharm/grassmann.hpp"
#include "fracharm/harmonic_flow.hpp"
#include "fracharm/lemmas.hpp"
#include "fracharm/littlewood_paley.hpp"
#include "fracharm/norms.hpp"
#include "fracharm/potential_system.hpp"
#include "fracharm/random_field.hpp"
#include "fracharm/sample_maps.hpp"
#include "fracharm/snapshot.hpp"
#include "fracharm/taylor.hpp"

namespace fracharm {

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identity", "lemmas", "estimates", "flow", "norms"};
  return names;
}

/// What to run and where the reports go.
///
/// JSON keys (all optional):
///   suites      list of suite names            default: all five
///   n, N        dimension and base grid size   default: 3, 16
///   grids       grid sizes for the estimates   default: [N, 2N]
///   seeds       list of seeds                  default: 1..20
///   seed_base   offset added to every seed     default: 0
///   tolerances  {check id: threshold}          default: {}
///   output      report directory               default: "report"
///   threads     worker threads                 default: 1
struct SuiteConfig {
  std::vector<std::string> suites = suite_names();
  int n = 3;
  int N = 16;
  std::vector<int> grids{16, 32};
  std::vector<std::uint64_t> seeds = default_seeds();
  std::uint64_t seed_base = 0;
  std::map<std::string, double> tolerances;
  std::string output = "report";
  int threads = 1;

  static std::vector<std::uint64_t> default_seeds() {
    std::vector<std::uint64_t> s(20);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = i + 1;
    return s;
  }

  std::vector<std::uint64_t> effective_seeds() const {
    auto s = seeds;
    for (auto& x : s) x += seed_base;
    return s;
  }

  bool wants(const std::string& suite) const {
    return std::find(suites.begin(), suites.end(), suite) != suites.end();
  }

  void validate() const {
    if (suites.empty()) throw ConfigError("no suites requested");
    for (const auto& s : suites)
      if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
        throw ConfigError("unknown suite \"" + s + "\"");
    if (seeds.empty()) throw ConfigError("seed list is empty");
    if (grids.empty()) throw ConfigError("grid list is empty");
    if (threads < 1) throw ConfigError("threads must be at least 1");
    try {
      PeriodicGrid(n, N);
      for (int g : grids) PeriodicGrid(n, g);
    } catch (const InvalidGrid& e) {
      throw ConfigError(e.what());
    }
  }
};

/// Parses a JSON config; absent keys keep their defaults and grids follow N
/// unless given.
inline SuiteConfig parse_config(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // The byte offset is turned into a line number for the message.
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + std::ptrdiff_t(upto), '\n');
    throw ConfigError("line " + std::to_string(line) + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("top level must be an object");

  static const std::vector<std::string> known{"suites", "n",          "N",      "grids",  "seeds",
                                              "seed_base", "tolerances", "output", "threads"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw ConfigError("unknown key \"" + it.key() + "\"");

  SuiteConfig c;
  try {
    if (j.contains("suites")) c.suites = j.at("suites").get<std::vector<std::string>>();
    if (j.contains("n")) c.n = j.at("n").get<int>();
    if (j.contains("N")) c.N = j.at("N").get<int>();
    c.grids = {c.N, 2 * c.N};
    if (j.contains("grids")) c.grids = j.at("grids").get<std::vector<int>>();
    if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("seed_base")) c.seed_base = j.at("seed_base").get<std::uint64_t>();
    if (j.contains("tolerances")) c.tolerances = j.at("tolerances").get<std::map<std::string, double>>();
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value: ") + e.what());
  }
  c.validate();
  return c;
}

inline SuiteConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

/// Passing direction of a check.
enum class Bound { AtMost, AtLeast };

struct CheckSpec {
  std::string suite;
  std::string id;
  int criterion;
  double threshold;
  Bound bound = Bound::AtMost;
};

struct CheckResult {
  std::string suite;
  std::string id;
  int criterion = 0;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  Bound bound = Bound::AtMost;
  std::string note;
  double seconds = 0.0;  // time of the cell that measured it; not reported
};

/// Tables and fields a suite leaves behind besides its check rows.
struct SuiteArtifacts {
  std::map<std::string, std::string> tables;         // file name -> CSV text
  std::map<std::string, VectorFieldMap> snapshots;   // base name -> field
  std::vector<RatioReport> ratios;
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckResult> checks;
  double wall_seconds = 0.0;  // never written to the report
  SuiteArtifacts artifacts;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }
};

namespace detail {

/// A unit of work measuring one or more checks.
struct Cell {
  std::string suite;
  std::vector<CheckSpec> checks;
  std::function<std::vector<double>(const SuiteConfig&, SuiteArtifacts&)> run;
};

inline double relative_gap(const ScalarField& a, const ScalarField& b) {
  return max_abs_difference(a, b) / std::max(1.0, b.max_abs());
}

inline std::vector<PeriodicGrid> identity_grids() { return {PeriodicGrid(1, 128), PeriodicGrid(3, 16)}; }

inline std::vector<std::vector<double>> random_orthonormal(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<std::vector<double>> basis;
  while (int(basis.size()) < m) {
    std::vector<double> v(m);
    for (double& x : v) x = normal(rng);
    for (const auto& b : basis) {
      double d = 0.0;
      for (int i = 0; i < m; ++i) d += b[i] * v[i];
      for (int i = 0; i < m; ++i) v[i] -= d * b[i];
    }
    double r = 0.0;
    for (double x : v) r += x * x;
    r = std::sqrt(r);
    if (r < 1e-6) continue;
    for (double& x : v) x /= r;
    basis.push_back(std::move(v));
  }
  return basis;
}

inline std::string trace_csv(const FlowTrace& t) {
  std::ostringstream out;
  out << "iteration,energy,residual,tau\n";
  for (const auto& r : t.rows)
    out << r.iteration << ',' << format_double(r.energy) << ',' << format_double(r.residual) << ','
        << format_double(r.tau) << '\n';
  return out.str();
}

// Largest relative energy increase between consecutive iterates.
inline double worst_energy_increase(const FlowTrace& t) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    const double before = t.rows[i - 1].energy;
    worst = std::max(worst, (t.rows[i].energy - before) / std::max(std::abs(before), 1e-300));
  }
  return t.rows.size() < 2 ? 0.0 : worst;
}

// The step used by the acceptance flows: ten times the default.
inline FlowConfig acceptance_flow(int n) {
  FlowConfig c;
  c.n = n;
  c.N = n == 1 ? 256 : 16;
  c.m = 2;
  c.max_iterations = n == 1 ? 5000 : 3000;
  c.tau = 1.0 / std::pow(0.5 * c.N, n);
  c.seed = 1;
  c.amplitude = 0.1;
  return c;
}

inline std::vector<Cell> identity_cells() {
  std::vector<Cell> cells;
  auto add = [&](std::vector<CheckSpec> specs, auto fn) {
    for (auto& s : specs) s.suite = "identity";
    cells.push_back(Cell{"identity", std::move(specs), fn});
  };

  add({{"", "partition_of_unity", 1, 1e-14}}, [](const SuiteConfig&, SuiteArtifacts&) {
    double worst = 0.0;
    for (auto g : {PeriodicGrid(1, 256), PeriodicGrid(3, 16), PeriodicGrid(3, 32)}) {
      DyadicPartition p(g);
      for (std::size_t i = 0; i < g.size(); ++i) {
        double s = 0.0;
        for (int j = p.j_min(); j <= p.j_max(); ++j) s += p.shell_table(j)[i];
        worst = std::max(worst, std::abs(s - 1.0));
      }
    }
    return std::vector<double>{worst};
  });

  add({{"", "paraproduct_sum", 1, 1e-10}}, [](const SuiteConfig& c, SuiteArtifacts&) {
    double worst = 0.0;
    for (const auto& g : identity_grids()) {
      DyadicPartition p(g);
      for (std::uint64_t k = 1; k <= 50; ++k) {
        const auto seed = c.seed_base + k;
        auto f = band_limit_half(gaussian_random_field(g, 0.0, seed));
        auto h = band_limit_half(gaussian_random_field(g, 0.0, seed + 1000));
        auto sum = paraproduct(f, h, 1, p) + paraproduct(f, h, 2, p) + paraproduct(f, h, 3, p);
        const auto prod = f * h;
        worst = std::max(worst, max_abs_difference(sum, prod) / prod.max_abs());
      }
    }
    return std::vector<double>{worst};
  });

  add({{"", "three_term_constant", 1, 1e-12}, {"", "three_term_star_minus_plain", 1, 1e-11}},
      [](const SuiteConfig& c, SuiteArtifacts&) {
        double constant = 0.0, star = 0.0;
        for (const auto& g : identity_grids()) {
          const double h = 0.5 * g.dimension();
          for (std::uint64_t k = 1; k <= 5; ++k) {
            auto q = gaussian_random_field(g, h, c.seed_base + k);
            auto u = gaussian_random_field(g, h, c.seed_base + k + 100);
            auto one = ScalarField::constant(g, 1.7);
            const double scale = std::max(1.0, u.max_abs());
            constant = std::max({constant, op_T(one, u).max_abs() / scale,
                                 op_T_star(one, u).max_abs() / scale});
            auto rhs = q * fractional_laplacian(u, h) - fractional_laplacian(q * u, h);
            star = std::max(star, relative_gap(op_T_star(q, u) - op_T(q, u), rhs));
          }
        }
        return std::vector<double>{constant, star};
      });

  add({{"", "omega_antisymmetry", 1, 1e-12},
       {"", "omega1_symmetry", 1, 1e-12},
       {"", "rewriting_identities", 1, 1e-11}},
      [](const SuiteConfig& c, SuiteArtifacts&) {
        double anti = 0.0, sym = 0.0, rewrite = 0.0;
        for (auto g : {PeriodicGrid(1, 64), PeriodicGrid(3, 8)})
          for (std::uint64_t k = 1; k <= 3; ++k) {
            auto u = random_sphere_map(g, 3, 2.0, c.seed_base + k);
            auto w = omega_fields(projector_fields(u).tangent);
            anti = std::max(anti, max_abs(w.omega + w.omega.transpose()));
            sym = std::max(sym, max_abs(w.omega1 - w.omega1.transpose()));
            for (double d : rewriting_identity_defects(u)) rewrite = std::max(rewrite, d);
          }
        return std::vector<double>{anti, sym, rewrite};
      });

  add({{"", "grassmann_projector", 1, 1e-12}}, [](const SuiteConfig& c, SuiteArtifacts&) {
    std::mt19937_64 rng(c.seed_base + 7);
    std::normal_distribution<double> normal;
    double worst = 0.0;
    for (int m = 3; m <= 5; ++m)
      for (int k = 1; k < m; ++k)
        for (int trial = 0; trial < 10; ++trial) {
          auto basis = random_orthonormal(m, rng);
          std::vector<std::vector<double>> tf(basis.begin(), basis.begin() + k);
          std::vector<std::vector<double>> nf(basis.begin() + k, basis.end());
          std::vector<double> v(m);
          for (double& x : v) x = normal(rng);
          auto got = projector_from_frame(tf, nf, v);
          for (int i = 0; i < m; ++i) {
            double gram = 0.0;
            for (const auto& t : tf) {
              double d = 0.0;
              for (int a = 0; a < m; ++a) d += t[a] * v[a];
              gram += t[i] * d;
            }
            worst = std::max(worst, std::abs(got.tangent[i] - gram));
          }
        }
    return std::vector<double>{worst};
  });

  add({{"", "riesz_round_trip", 1, 1e-12}}, [](const SuiteConfig& c, SuiteArtifacts&) {
    double worst = 0.0;
    for (const auto& g : identity_grids())
      for (std::uint64_t k = 1; k <= 5; ++k) {
        auto f = gaussian_random_field(g, 0.0, c.seed_base + k);
        worst = std::max(worst, relative_gap(riesz_contraction(riesz_transform(f)), f));
      }
    return std::vector<double>{worst};
  });

  add({{"", "circle_el_residual", 2, 1e-10},
       {"", "circle_wedge_residual", 2, 1e-10},
       {"", "circle_energy", 2, 1e-12}},
      [](const SuiteConfig&, SuiteArtifacts&) {
        double el = 0.0, wedge = 0.0;
        for (auto g : {PeriodicGrid(1, 256), PeriodicGrid(3, 16)}) {
          auto u = circle_map(g);
          el = std::max(el, el_residual(u));
          wedge = std::max(wedge, wedge_residual(u));
        }
        const double e = energy(circle_map(PeriodicGrid(1, 256)));
        return std::vector<double>{el, wedge, std::abs(e - 2.0 * std::numbers::pi) / (2.0 * std::numbers::pi)};
      });

  add({{"", "tangency_refinement", 8, 3.0, Bound::AtLeast},
       {"", "structure_refinement", 8, 1.5, Bound::AtLeast}},
      [](const SuiteConfig&, SuiteArtifacts&) {
        auto coarse = cusp_sphere_map(PeriodicGrid(1, 128));
        auto fine = cusp_sphere_map(PeriodicGrid(1, 256));
        return std::vector<double>{tangency_residual(coarse) / tangency_residual(fine),
                                   structure_residual(coarse) / structure_residual(fine)};
      });
  return cells;
}

inline std::vector<Cell> lemma_cells() {
  std::vector<Cell> cells;
  auto add = [&](std::vector<CheckSpec> specs, auto fn) {
    for (auto& s : specs) s.suite = "lemmas";
    cells.push_back(Cell{"lemmas", std::move(specs), fn});
  };

  add({{"", "lemma_low_pass_maximal", 6, 1.2}}, [](const SuiteConfig& c, SuiteArtifacts&) {
    PeriodicGrid g(1, 128);
    DyadicPartition p(g);
    double worst = 0.0;
    for (std::uint64_t k = 1; k <= 50; ++k) {
      const double s = 0.5 + double(k % 5);
      worst = std::max(worst, lemma_a1_ratio(gaussian_random_field(g, s, c.seed_base + k), p));
    }
    return std::vector<double>{worst};
  });

  add({{"", "lemma_kernel_stability", 6, 0.02}}, [](const SuiteConfig&, SuiteArtifacts&) {
    double worst = 0.0;
    for (auto [n, N] : {std::pair{1, 64}, std::pair{3, 32}}) {
      DyadicPartition coarse(PeriodicGrid(n, N)), fine(PeriodicGrid(n, 2 * N));
      for (int k = 0; k <= 2; ++k)
        worst = std::max(worst, std::abs(lemma_a2_check(fine, k) / lemma_a2_check(coarse, k) - 1.0));
    }
    return std::vector<double>{worst};
  });

  add({{"", "lemma_shell_derivative", 6, 1.0 + 1e-6}}, [](const SuiteConfig& c, SuiteArtifacts&) {
    double worst = 0.0;
    for (const auto& g : identity_grids()) {
      DyadicPartition p(g);
      for (std::uint64_t k = 1; k <= 5; ++k) {
        auto f = gaussian_random_field(g, 0.5 * g.dimension(), c.seed_base + k);
        for (int j = p.j_min(); j <= p.j_max(); ++j)
          for (int order = 0; order <= 2; ++order)
            worst = std::max(worst, lemma_a3_check(f, j, order, p));
      }
    }
    return std::vector<double>{worst};
  });

  add({{"", "taylor_degree12", 7, 1e-10}, {"", "taylor_collinear", 7, 3e-6}},
      [](const SuiteConfig& c, SuiteArtifacts&) {
        const double a = 1.5;
        auto tc = taylor_coefficients(a, 12);
        std::mt19937_64 rng(c.seed_base + 12);
        std::normal_distribution<double> normal;
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        auto unit = [&] {
          std::array<double, 3> v{};
          double r = 0.0;
          while (r < 1e-6) {
            for (double& x : v) x = normal(rng);
            r = std::hypot(v[0], v[1], v[2]);
          }
          for (double& x : v) x /= r;
          return v;
        };
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
          auto e = unit(), d = unit();
          const double scale = 1.0 + 3.0 * uniform(rng);
          const double ratio = 0.5 * (1.0 - uniform(rng));  // in (0, 1/2]
          std::array<double, 3> zeta{}, xi{};
          for (int k = 0; k < 3; ++k) {
            zeta[k] = scale * e[k];
            xi[k] = ratio * scale * d[k];
          }
          const double err = std::abs(tc.partial_sum(zeta, xi) - symbol_difference(a, zeta, xi));
          worst = std::max(worst, err / std::pow(scale, a));
        }
        const double fixture = 1.0 - std::pow(0.9, 1.5);
        const double collinear = std::abs(taylor_coefficients(a, 3).collinear_sum(0.1) - fixture);
        return std::vector<double>{worst, collinear};
      });
  return cells;
}

inline std::vector<Cell> estimate_cells() {
  std::vector<Cell> cells;
  for (const auto& e : estimate_registry()) {
    std::vector<CheckSpec> specs{{"estimates", "estimate_" + e.id + "_max", 5, 1e3},
                                 {"estimates", "estimate_" + e.id + "_growth", 5, 2.0}};
    const std::string id = e.id;
    cells.push_back(Cell{"estimates", std::move(specs), [id](const SuiteConfig& c, SuiteArtifacts& out) {
                           std::vector<PeriodicGrid> grids;
                           for (int N : c.grids) grids.emplace_back(c.n, N);
                           auto rows = estimate_ratio(id, c.effective_seeds(), grids, 1);
                           auto summary = summarize(rows);
                           double worst = 0.0;
                           for (const auto& r : rows)
                             worst = std::isfinite(r.ratio) ? std::max(worst, r.ratio) : r.ratio;
                           // Growth from the coarsest to the finest grid.
                           const double coarse = summary.front().max, fine = summary.back().max;
                           const double growth = coarse > 0.0 ? fine / coarse : (fine > 0.0 ? kInfinity : 0.0);
                           out.ratios = std::move(rows);
                           return std::vector<double>{worst, growth};
                         }});
  }
  return cells;
}

inline std::vector<Cell> flow_cells() {
  std::vector<Cell> cells;
  for (int n : {1, 3}) {
    const std::string tag = "flow_n" + std::to_string(n);
    std::vector<CheckSpec> specs{{"flow", tag + "_energy_increase", 3, kEnergyTieSlack}};
    if (n == 1)
      specs.push_back({"flow", tag + "_final_residual", 3, 1e-6});
    else
      specs.push_back({"flow", tag + "_residual_reduction", 3, 1e-3});
    cells.push_back(Cell{"flow", std::move(specs), [n, tag](const SuiteConfig&, SuiteArtifacts& out) {
                           auto trace = flow_run(acceptance_flow(n));
                           out.tables[tag + "_trace.csv"] = trace_csv(trace);
                           out.snapshots.emplace(tag + "_final", trace.final_state.u.field());
                           const double last = trace.final_state.residual;
                           const double measured = n == 1 ? last : last / trace.rows.front().residual;
                           return std::vector<double>{worst_energy_increase(trace), measured};
                         }});
  }
  std::vector<CheckSpec> grad{{"flow", "gradient_check", 4, 1e-5}};
  cells.push_back(Cell{"flow", std::move(grad), [](const SuiteConfig& c, SuiteArtifacts&) {
                         double worst = 0.0;
                         for (const auto& g : identity_grids())
                           for (std::uint64_t k = 1; k <= 10; ++k) {
                             auto u = perturbed_circle_map(g, 3, 0.3, c.seed_base + k);
                             auto phi = gaussian_random_vector(g, 3, 2.0, c.seed_base + k + 50);
                             worst = std::max(worst, gradient_check(u, phi).relative_error);
                           }
                         return std::vector<double>{worst};
                       }});
  return cells;
}

// Largest of C(fine)/C(coarse) and its inverse.
inline double drift(double coarse, double fine) { return std::max(fine / coarse, coarse / fine); }

inline std::vector<Cell> norm_cells() {
  std::vector<Cell> cells;
  auto add = [&](std::vector<CheckSpec> specs, auto fn) {
    for (auto& s : specs) s.suite = "norms";
    cells.push_back(Cell{"norms", std::move(specs), fn});
  };

  add({{"", "lorentz_fixture", 9, 1e-12}, {"", "lorentz_diagonal", 9, 1e-12}},
      [](const SuiteConfig& c, SuiteArtifacts&) {
        const double fixture =
            std::abs(lorentz_norm(rearrange({4, 3, 2, 1}, {1, 1, 1, 1}), 2.0, kInfinity) - 3.0 * std::sqrt(2.0));
        double diag = 0.0;
        for (std::uint64_t k = 1; k <= 20; ++k) {
          PeriodicGrid g(k % 2 ? 1 : 3, k % 2 ? 128 : 16);
          auto f = gaussian_random_field(g, 0.5, c.seed_base + k);
          for (double p : {1.0, 2.0, 3.5}) {
            const double b = lp_norm(f, p);
            diag = std::max(diag, std::abs(lorentz_norm(f, p, p) - b) / b);
          }
        }
        return std::vector<double>{fixture, diag};
      });

  add({{"", "embedding_chain_drift", 9, 2.0}, {"", "fractional_embedding_drift", 9, 2.0}},
      [](const SuiteConfig& c, SuiteArtifacts& out) {
        // Constants over 200 fields on two resolutions of the one-dimensional torus.
        std::ostringstream table;
        table << "N,besov_over_bmo,bmo_over_sobolev,lorentz_sobolev_over_sobolev\n";
        std::array<double, 2> c1{}, c2{}, c3{};
        const std::array<int, 2> sizes{64, 128};
        for (int r = 0; r < 2; ++r) {
          PeriodicGrid g(1, sizes[r]);
          DyadicPartition p(g);
          for (std::uint64_t k = 1; k <= 200; ++k) {
            auto f = gaussian_random_field(g, 0.5, c.seed_base + k);
            const double bmo = bmo_norm(f), top = sobolev_norm(f, 0.5);
            c1[r] = std::max(c1[r], besov_norm(f, 0.0, kInfinity, kInfinity, p) / bmo);
            c2[r] = std::max(c2[r], bmo / top);
            c3[r] = std::max(c3[r], sobolev_norm(f, 0.25, BaseNorm::lorentz_pq(4.0, 2.0)) / top);
          }
          table << sizes[r] << ',' << format_double(c1[r]) << ',' << format_double(c2[r]) << ','
                << format_double(c3[r]) << '\n';
        }
        out.tables["embedding_constants.csv"] = table.str();
        return std::vector<double>{std::max(drift(c1[0], c1[1]), drift(c2[0], c2[1])),
                                   drift(c3[0], c3[1])};
      });

  add({{"", "duality_pairing", 9, 4.0}, {"", "lorentz_holder", 9, 4.0}},
      [](const SuiteConfig& c, SuiteArtifacts&) {
        double pairing = 0.0, holder = 0.0;
        for (const auto& g : identity_grids()) {
          const double h = 0.5 * g.dimension();
          for (std::uint64_t k = 1; k <= 20; ++k) {
            auto f = gaussian_random_field(g, 0.0, c.seed_base + k);
            auto q = gaussian_random_field(g, h, partner_seed(c.seed_base + k));
            const double lhs = std::abs(inner_product(f, q));
            const double rhs = sobolev_norm(f, -h, BaseNorm::lorentz_pq(2.0, 1.0)) *
                               sobolev_norm(q, h, BaseNorm::lorentz_pq(2.0, kInfinity));
            pairing = std::max(pairing, lhs / rhs);
            holder = std::max(holder, lorentz_holder_check(f, q, {2.0, 1.0, 2.0, kInfinity}));
          }
        }
        return std::vector<double>{pairing, holder};
      });
  return cells;
}

inline std::vector<Cell> all_cells() {
  std::vector<Cell> cells;
  for (auto part : {identity_cells(), lemma_cells(), estimate_cells(), flow_cells(), norm_cells()})
    for (auto& c : part) cells.push_back(std::move(c));
  return cells;
}

inline bool passes(double measured, double threshold, Bound bound) {
  if (!std::isfinite(measured)) return false;
  return bound == Bound::AtMost ? measured <= threshold : measured >= threshold;
}

}  // namespace detail

/// Every registered check in report order.
inline std::vector<CheckSpec> check_registry() {
  std::vector<CheckSpec> out;
  for (const auto& cell : detail::all_cells())
    for (const auto& s : cell.checks) out.push_back(s);
  return out;
}

/// Runs the requested suites, cells spread over config.threads workers.
/// Errors inside a cell fail all its checks and are kept in the note.
inline std::vector<SuiteResult> run_suite(const SuiteConfig& config) {
  config.validate();
  std::vector<detail::Cell> cells;
  for (auto& c : detail::all_cells())
    if (config.wants(c.suite)) cells.push_back(std::move(c));

  struct Outcome {
    std::vector<CheckResult> checks;
    SuiteArtifacts artifacts;
    double seconds = 0.0;
  };
  std::vector<Outcome> outcomes(cells.size());

  auto work = [&](std::size_t i) {
    const auto& cell = cells[i];
    auto& out = outcomes[i];
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> values;
    std::string note;
    try {
      values = cell.run(config, out.artifacts);
    } catch (const std::exception& e) {
      note = e.what();
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (std::size_t k = 0; k < cell.checks.size(); ++k) {
      const auto& s = cell.checks[k];
      CheckResult r{s.suite, s.id, s.criterion, false, std::numeric_limits<double>::quiet_NaN(),
                    s.threshold, s.bound, note, out.seconds};
      if (auto it = config.tolerances.find(s.id); it != config.tolerances.end()) r.threshold = it->second;
      if (k < values.size()) r.measured = values[k];
      r.passed = note.empty() && detail::passes(r.measured, r.threshold, r.bound);
      out.checks.push_back(std::move(r));
    }
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) work(i);
  };
  const int workers = std::min<int>(config.threads, int(cells.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<SuiteResult> results;
  for (const auto& name : suite_names()) {
    if (!config.wants(name)) continue;
    SuiteResult r;
    r.suite = name;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].suite != name) continue;
      auto& o = outcomes[i];
      r.wall_seconds += o.seconds;
      for (auto& c : o.checks) r.checks.push_back(std::move(c));
      for (auto& [k, v] : o.artifacts.tables) r.artifacts.tables[k] = std::move(v);
      for (auto& [k, v] : o.artifacts.snapshots) r.artifacts.snapshots.insert_or_assign(k, std::move(v));
      for (auto& row : o.artifacts.ratios) r.artifacts.ratios.push_back(std::move(row));
    }
    std::stable_sort(r.checks.begin(), r.checks.end(),
                     [](const CheckResult& a, const CheckResult& b) { return a.id < b.id; });
    results.push_back(std::move(r));
  }
  return results;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace detail

inline void write_check_csv(const SuiteResult& r, std::ostream& out) {
  out << "suite,id,criterion,bound,threshold,measured,passed,note\n";
  for (const auto& c : r.checks)
    out << c.suite << ',' << c.id << ',' << c.criterion << ','
        << (c.bound == Bound::AtMost ? "at_most" : "at_least") << ',' << format_double(c.threshold)
        << ',' << format_double(c.measured) << ',' << (c.passed ? 1 : 0) << ','
        << detail::csv_field(c.note) << '\n';
}

/// Writes <suite>.csv for every suite, the suites' extra tables and
/// snapshots, and summary.json. Wall times are left out so reruns with one
/// config give identical bytes.
inline void write_report(const std::vector<SuiteResult>& results, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());

  nlohmann::json summary = nlohmann::json::object();
  for (const auto& r : results) {
    std::ostringstream csv;
    write_check_csv(r, csv);
    detail::write_text(fs::path(dir) / (r.suite + ".csv"), csv.str());
    for (const auto& [name, text] : r.artifacts.tables) detail::write_text(fs::path(dir) / name, text);
    for (const auto& [name, field] : r.artifacts.snapshots) write_snapshot(field, (fs::path(dir) / name).string());

    std::size_t passed = 0;
    for (const auto& c : r.checks) passed += c.passed ? 1 : 0;
    nlohmann::json entry{{"passed", passed}, {"failed", r.checks.size() - passed}};
    if (!r.artifacts.ratios.empty()) {
      std::ostringstream ratios;
      write_ratio_csv(r.artifacts.ratios, ratios);
      detail::write_text(fs::path(dir) / "estimate_ratios.csv", ratios.str());
      double worst = 0.0;
      for (const auto& row : r.artifacts.ratios) worst = std::max(worst, row.ratio);
      entry["max_ratio"] = worst;
      entry["ratio_rows"] = r.artifacts.ratios.size();
    }
    summary[r.suite] = std::move(entry);
  }
  detail::write_text(fs::path(dir) / "summary.json", summary.dump(2) + "\n");
}

}  // namespace fracharm
