// Command-line front end: selects grid instances, runs their case scripts and
// writes the report. Exit status 1 iff some certificate fails, 2 on usage errors.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "noether/runner.hpp"

namespace {

std::vector<std::int64_t> parse_list(const std::string& s) {
  std::vector<std::int64_t> v;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) v.push_back(std::stoll(item));
  return v;
}

// "4", "3-5" or "3..5"
std::pair<std::int64_t, std::int64_t> parse_range(const std::string& s) {
  for (const std::string sep : {"..", "-"})
    if (auto at = s.find(sep); at != std::string::npos && at > 0)
      return {std::stoll(s.substr(0, at)), std::stoll(s.substr(at + sep.size()))};
  auto n = std::stoll(s);
  return {n, n};
}

}  // namespace

int main(int argc, char** argv) {
  using namespace noether;
  CLI::App app{"Exact verification of the constructive rationality steps, one certificate per group instance"};
  std::string p_list, n_range, theorem, report = "json", out;
  int family = 0;
  bool all = false;
  std::int64_t depth = 6;
  unsigned jobs = 1;
  app.add_option("--p", p_list, "comma-separated primes, e.g. 2,3");
  app.add_option("--n", n_range, "n or a range lo-hi");
  app.add_option("--theorem", theorem, "family list: 3.1 (odd p) or 3.2 (p = 2)")->check(CLI::IsMember({"3.1", "3.2"}));
  app.add_option("--family", family, "family index within the list");
  app.add_flag("--all", all, "the whole supported grid");
  app.add_option("--report", report, "report format")->check(CLI::IsMember({"json", "md"}));
  app.add_option("--out", out, "output file (default: stdout)");
  app.add_option("--oracle-depth", depth, "exponent bound of the brute-force lattice oracle")->check(CLI::PositiveNumber);
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (!all && p_list.empty() && n_range.empty() && theorem.empty() && family == 0) {
    std::cerr << "nothing selected: pass --all or at least one of --p, --n, --theorem, --family\n";
    return 2;
  }
  runner::RunConfig cfg;
  try {
    if (!p_list.empty()) cfg.ps = parse_list(p_list);
    if (!n_range.empty()) std::tie(cfg.n_min, cfg.n_max) = parse_range(n_range);
  } catch (const std::exception&) {
    std::cerr << "malformed --p or --n\n";
    return 2;
  }
  if (!theorem.empty()) cfg.theorem = fp::parse_list_label(theorem);
  if (family != 0) cfg.family = family;
  cfg.format = report;
  cfg.oracle_depth = depth;
  cfg.jobs = jobs;

  auto r = runner::run_all(cfg);
  std::string text = runner::render(r, cfg.format);
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) {
      std::cerr << "cannot write " << out << "\n";
      return 2;
    }
    f << text;
  }
  std::cerr << r.count_verdict(true) << " pass, " << r.count_verdict(false) << " fail\n";
  return r.all_pass() ? 0 : 1;
}
