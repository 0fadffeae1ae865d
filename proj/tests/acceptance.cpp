// Runs every acceptance criterion and prints one line per criterion.
// Exit status is nonzero when any criterion fails.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fracharm/suite.hpp"

using namespace fracharm;
namespace fs = std::filesystem;

namespace {

const std::map<int, std::string> kTitles{
    {1, "identity suite"},         {2, "critical-point fixtures"}, {3, "gradient flow"},
    {4, "gradient check"},         {5, "estimate harness"},        {6, "lemma suite"},
    {7, "Taylor machinery"},       {8, "refinement order"},        {9, "norms"},
    {10, "determinism"}};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Names and contents of every regular file below dir.
std::map<std::string, std::string> directory_bytes(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = slurp(e.path());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path scratch =
      argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "fracharm_acceptance";
  fs::remove_all(scratch);

  // Criteria 1-9: every suite, estimates over 100 seeds on n = 3, N = 16 and 32.
  SuiteConfig full = parse_config(R"({"seeds": [)" + [] {
    std::string s;
    for (int i = 1; i <= 100; ++i) s += (i > 1 ? "," : "") + std::to_string(i);
    return s;
  }() + "]}");
  auto results = run_suite(full);
  write_report(results, (scratch / "full").string());

  std::map<int, std::vector<const CheckResult*>> by_criterion;
  for (const auto& r : results)
    for (const auto& c : r.checks) by_criterion[c.criterion].push_back(&c);

  std::map<int, bool> verdict;
  std::map<int, std::string> detail;
  for (const auto& [criterion, checks] : by_criterion) {
    bool ok = true;
    std::string failed;
    for (const auto* c : checks) {
      // Each flow run must also finish within two minutes.
      const bool timed = c->id.rfind("flow_n", 0) == 0;
      const bool in_time = !timed || c->seconds <= 120.0;
      if (!c->passed || !in_time) {
        ok = false;
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s%s=%.3g (%s %.3g)%s", failed.empty() ? "" : ", ", c->id.c_str(),
                      c->measured, c->bound == Bound::AtMost ? "<=" : ">=", c->threshold,
                      in_time ? "" : " too slow");
        failed += buf;
      }
    }
    verdict[criterion] = ok;
    detail[criterion] = ok ? std::to_string(checks.size()) + " checks" : "failed: " + failed;
  }

  // Criterion 10: two runs of the default configuration.
  {
    const auto cfg = parse_config("{}");
    write_report(run_suite(cfg), (scratch / "run_a").string());
    write_report(run_suite(cfg), (scratch / "run_b").string());
    const auto a = directory_bytes(scratch / "run_a"), b = directory_bytes(scratch / "run_b");
    std::string diff;
    for (const auto& [name, bytes] : a) {
      auto it = b.find(name);
      if (it == b.end() || it->second != bytes) diff += (diff.empty() ? "" : ", ") + name;
    }
    if (a.size() != b.size()) diff += (diff.empty() ? "" : ", ") + std::string("file sets differ");
    verdict[10] = diff.empty() && !a.empty();
    detail[10] = diff.empty() ? std::to_string(a.size()) + " files identical" : "differs: " + diff;
  }

  bool all = true;
  for (int k = 1; k <= 10; ++k) {
    const bool ok = verdict.count(k) && verdict[k];
    all = all && ok;
    std::printf("criterion %2d %-24s %s  %s\n", k, kTitles.at(k).c_str(), ok ? "PASS" : "FAIL",
                detail.count(k) ? detail[k].c_str() : "no checks registered");
  }
  for (const auto& r : results) std::printf("  %s suite: %.1f s\n", r.suite.c_str(), r.wall_seconds);
  return all ? 0 : 1;
}
