#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "fracharm/fracharm.hpp"

using namespace fracharm;

namespace {

constexpr int kPass = 0;
constexpr int kCheckFailure = 1;
constexpr int kConfigError = 2;

// "1..100" or "3,5,8".
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  try {
    if (auto dots = text.find(".."); dots != std::string::npos) {
      const auto lo = std::stoull(text.substr(0, dots)), hi = std::stoull(text.substr(dots + 2));
      if (hi < lo) throw ConfigError("empty seed range " + text);
      for (auto s = lo; s <= hi; ++s) out.push_back(s);
      return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
  } catch (const std::logic_error&) {
    throw ConfigError("cannot read seeds from \"" + text + "\"");
  }
  if (out.empty()) throw ConfigError("no seeds given");
  return out;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  } catch (const std::logic_error&) {
    throw ConfigError("cannot read integers from \"" + text + "\"");
  }
  if (out.empty()) throw ConfigError("empty list \"" + text + "\"");
  return out;
}

struct Globals {
  std::string config;
  std::string out;
  int threads = 0;
  std::optional<std::uint64_t> seed_base;
};

SuiteConfig load_config(const Globals& g) {
  SuiteConfig c = g.config.empty() ? parse_config("{}") : read_config(g.config);
  if (!g.out.empty()) c.output = g.out;
  if (g.threads > 0) c.threads = g.threads;
  if (g.seed_base) c.seed_base = *g.seed_base;
  c.validate();
  return c;
}

int run_verify(const Globals& g, const std::vector<std::string>& suites) {
  auto cfg = load_config(g);
  if (!suites.empty()) {
    cfg.suites = suites;
    cfg.validate();
  }
  auto results = run_suite(cfg);
  write_report(results, cfg.output);
  bool ok = true;
  for (const auto& r : results) {
    std::size_t passed = 0;
    for (const auto& c : r.checks) {
      passed += c.passed;
      std::printf("%-4s %-10s %-34s measured %-12.6g %s %-10.3g%s%s\n", c.passed ? "ok" : "FAIL",
                  r.suite.c_str(), c.id.c_str(), c.measured, c.bound == Bound::AtMost ? "<=" : ">=",
                  c.threshold, c.note.empty() ? "" : "  ", c.note.c_str());
    }
    std::printf("%s: %zu/%zu passed (%.1f s)\n", r.suite.c_str(), passed, r.checks.size(), r.wall_seconds);
    ok = ok && r.passed();
  }
  std::printf("report written to %s\n", cfg.output.c_str());
  return ok ? kPass : kCheckFailure;
}

int run_estimate(const Globals& g, const std::string& id, int n, const std::string& seeds,
                 const std::string& grids, const std::string& out) {
  std::vector<std::string> ids;
  if (id == "all")
    for (const auto& e : estimate_registry()) ids.push_back(e.id);
  else
    ids.push_back(find_estimate(id).id);
  auto seed_list = parse_seeds(seeds);
  if (g.seed_base)
    for (auto& s : seed_list) s += *g.seed_base;
  std::vector<PeriodicGrid> grid_list;
  for (int N : parse_ints(grids)) grid_list.emplace_back(n, N);
  const int threads = g.threads > 0 ? g.threads : 1;

  std::vector<RatioReport> rows;
  bool ok = true;
  for (const auto& e : ids) {
    auto r = estimate_ratio(e, seed_list, grid_list, threads);
    auto s = summarize(r);
    for (const auto& x : s) {
      std::fprintf(stderr, "%-12s N=%-4d seeds=%-4zu max %.6g median %.6g\n", e.c_str(), x.N, x.count,
                   x.max, x.median);
      ok = ok && std::isfinite(x.max) && x.max <= 1e3;
    }
    if (s.size() > 1 && s.back().max > 2.0 * s.front().max) ok = false;
    rows.insert(rows.end(), r.begin(), r.end());
  }
  if (out.empty() || out == "-") {
    write_ratio_csv(rows, std::cout);
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw IoError("cannot open " + out);
    write_ratio_csv(rows, f);
  }
  return ok ? kPass : kCheckFailure;
}

int run_flow(const Globals& g, FlowConfig cfg, const std::string& trace_path, const std::string& field_base) {
  if (g.seed_base) cfg.seed += *g.seed_base;
  auto trace = flow_run(cfg);
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!trace_path.empty() && trace_path != "-") {
    file.open(trace_path, std::ios::binary);
    if (!file) throw IoError("cannot open " + trace_path);
    out = &file;
  }
  *out << "iteration,energy,residual,tau\n";
  for (const auto& r : trace.rows)
    *out << r.iteration << ',' << format_double(r.energy) << ',' << format_double(r.residual) << ','
         << format_double(r.tau) << '\n';
  if (!field_base.empty()) write_snapshot(trace.final_state.u.field(), field_base);
  const auto& first = trace.rows.front();
  std::fprintf(stderr, "%s after %d iterations: energy %.12g -> %.12g, residual %.3g -> %.3g\n",
               trace.converged ? "converged" : "not converged", trace.final_state.iteration, first.energy,
               trace.final_state.energy, first.residual, trace.final_state.residual);
  return trace.converged ? kPass : kCheckFailure;
}

int run_norms(const std::string& field_base, const std::string& out) {
  auto u = read_snapshot(field_base);
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out.empty() && out != "-") {
    file.open(out, std::ios::binary);
    if (!file) throw IoError("cannot open " + out);
    os = &file;
  }
  *os << "name,params,value\n";
  const auto m = u.target_dim();
  for (std::size_t i = 0; i < m; ++i)
    for (const auto& r : norm_table(u[i])) {
      std::string params = r.params;
      if (m > 1) params += (params.empty() ? "" : ";") + std::string("component=") + std::to_string(i);
      *os << r.name << ',' << params << ',' << format_double(r.value) << '\n';
    }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for fractional harmonic maps on periodic grids"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "JSON suite configuration");
  app.add_option("--out", g.out, "Report directory (verify) or output file");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed-base", g.seed_base, "Offset added to every seed");

  auto* verify = app.add_subcommand("verify", "Run the check suites and write a report");
  std::vector<std::string> suites;
  verify->add_option("--suites", suites, "Subset of identity, lemmas, estimates, flow, norms")->delimiter(',');

  auto* estimate = app.add_subcommand("estimate", "Ratio harness for one estimate");
  std::string est_id, est_seeds = "1..20", est_grids = "16,32", est_out;
  int est_n = 3;
  estimate->add_option("--id", est_id, "Estimate id or \"all\"")->required();
  estimate->add_option("--n", est_n, "Dimension")->check(CLI::IsMember({1, 2, 3}));
  estimate->add_option("--seeds", est_seeds, "Seeds as a..b or a,b,c");
  estimate->add_option("--grids", est_grids, "Comma-separated grid sizes");
  estimate->add_option("--out", est_out, "CSV destination (default stdout)");

  auto* flow = app.add_subcommand("flow", "Projected gradient flow from a perturbed circle map");
  FlowConfig fc;
  std::string trace_path, field_base;
  flow->add_option("--n", fc.n, "Dimension")->check(CLI::IsMember({1, 2, 3}));
  flow->add_option("--N", fc.N, "Points per axis");
  flow->add_option("--m", fc.m, "Target sphere S^{m-1} ⊂ R^m")->check(CLI::Range(2, 8));
  flow->add_option("--tau", fc.tau, "Initial step; 0 picks 0.1/(N/2)^n");
  flow->add_option("--tol", fc.tolerance, "Stop when the residual falls below this");
  flow->add_option("--max-iter", fc.max_iterations, "Iteration cap");
  flow->add_option("--seed", fc.seed, "Seed of the perturbation");
  flow->add_option("--amplitude", fc.amplitude, "Size of the perturbation");
  flow->add_option("--out-trace", trace_path, "Trace CSV destination (default stdout)");
  flow->add_option("--out-field", field_base, "Snapshot base name for the final map");

  auto* norms = app.add_subcommand("norms", "Norm table of a field snapshot");
  std::string norms_field;
  norms->add_option("field", norms_field, "Snapshot base name (without .json/.bin)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigError;
  }

  try {
    if (*verify) return run_verify(g, suites);
    if (*estimate) return run_estimate(g, est_id, est_n, est_seeds, est_grids, est_out.empty() ? g.out : est_out);
    if (*flow) return run_flow(g, fc, trace_path, field_base);
    if (*norms) return run_norms(norms_field, g.out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigError;
  }
  return kConfigError;
}
