#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <set>

#include "noether/gates.hpp"
#include "noether/runner.hpp"

using namespace noether;
using cert::Status;
using fp::FamilyList;
using fp::FamilySpec;

namespace {

FamilySpec odd(int f, std::int64_t p, std::int64_t n) { return {FamilyList::odd, f, p, n, std::nullopt}; }
FamilySpec two(int f, std::int64_t n) { return {FamilyList::two, f, 2, n, std::nullopt}; }

const cert::Step* find_step(const cert::Certificate& c, const std::string& name) {
  for (const auto& s : c.steps)
    if (s.name == name) return &s;
  return nullptr;
}

struct Proc {
  int status = -1;
  std::string out;
};

Proc run_cli(const std::string& args) {
  Proc r;
  std::string cmd = std::string(NOETHER_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return r;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), f)) > 0) r.out.append(buf.data(), got);
  int st = pclose(f);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

}  // namespace

TEST(RunCase, OddFamilyOneAllStepsPassOrGated) {
  auto c = runner::run_case(odd(1, 3, 3));
  EXPECT_TRUE(c.passed());
  EXPECT_EQ(c.verdict(), "pass");
  EXPECT_EQ(c.count(Status::fail), 0u);
  for (const char* s : {"realize", "claims", "eigen-Y1", "eigen-Y2", "table-xy", "table-uv", "linearize-v",
                        "fixed-lattice-w", "chain-z", "standardize", "linearize-s"}) {
    auto st = find_step(c, s);
    ASSERT_NE(st, nullptr) << s;
    EXPECT_EQ(st->status, Status::pass) << s;
  }
  ASSERT_NE(find_step(c, "gate:faithful-subspace"), nullptr);
  EXPECT_EQ(find_step(c, "gate:faithful-subspace")->status, Status::gated);
}

TEST(RunCase, MetacyclicFamilyIsGated) {
  auto c = runner::run_case(odd(2, 3, 4));
  EXPECT_TRUE(c.passed());
  auto g = find_step(c, "gate:metacyclic");
  ASSERT_NE(g, nullptr);
  EXPECT_EQ(g->status, Status::gated);
}

TEST(RunCase, SmallOrderExponentGate) {
  auto c = runner::run_case(odd(11, 3, 4));
  EXPECT_TRUE(c.passed());
  auto g = find_step(c, "gate:small-order-exponent");
  ASSERT_NE(g, nullptr);
  EXPECT_EQ(g->witness.at("exponent"), 9);
  // the exponent recomputed from element orders
  auto G = fp::realize(fp::build_presentation(odd(11, 3, 4)));
  std::int64_t ex = 1;
  for (fp::Elem e = 0; e < G.order(); ++e) ex = std::lcm(ex, fp::element_order(G, e));
  EXPECT_EQ(ex, 9);
}

TEST(RunCase, OutOfRangeBecomesFailingCertificate) {
  auto c = runner::run_case(odd(2, 3, 3));
  EXPECT_FALSE(c.passed());
  EXPECT_GE(c.count(Status::fail), 1u);
}

TEST(Gates, AbelianNormalCyclicQuotient) {
  auto G = fp::realize(fp::build_presentation(two(4, 5)));
  auto r = cert::gate_abelian_normal_cyclic_quotient(G, {G.gen(0), G.gen(1)}, 8);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.witness.at("quotient_order"), 2);
  // H = G is not abelian
  auto all = cert::gate_abelian_normal_cyclic_quotient(G, G.gens(), 8);
  EXPECT_FALSE(all.ok);
  EXPECT_FALSE(all.witness.at("abelian").get<bool>());
  // a non-normal abelian subgroup: <tau> in G1(3.2)
  auto H = fp::realize(fp::build_presentation(two(1, 4)));
  auto nn = cert::gate_abelian_normal_cyclic_quotient(H, {H.gen(1)}, 4);
  EXPECT_FALSE(nn.ok);
  EXPECT_FALSE(nn.witness.at("normal").get<bool>());
}

TEST(Gates, ZetaRingUfd) {
  for (std::int64_t m : {1, 2, 3, 4, 5, 8, 9, 16, 25, 27, 32}) EXPECT_TRUE(cert::zeta_ring_is_ufd(m)) << m;
  for (std::int64_t m : {23, 29, 31, 64, 81, 125}) EXPECT_FALSE(cert::zeta_ring_is_ufd(m)) << m;
}

TEST(RunAll, PTwoNFour) {
  runner::RunConfig cfg;
  cfg.ps = {2};
  cfg.n_min = cfg.n_max = 4;
  auto r = runner::run_all(cfg);
  EXPECT_EQ(r.certificates.size(), 5u);
  EXPECT_TRUE(r.all_pass());
  for (const auto& c : r.certificates) EXPECT_EQ(fp::ipow(2, c.family.n), 16);
}

TEST(RunAll, EmptySelection) {
  runner::RunConfig cfg;
  cfg.ps = {7};
  auto r = runner::run_all(cfg);
  EXPECT_TRUE(r.certificates.empty());
  EXPECT_TRUE(r.all_pass());
  auto j = nlohmann::json::parse(runner::to_json(r));
  EXPECT_EQ(j["summary"]["certificates"], 0);
}

TEST(RunAll, DeterministicAcrossThreadCounts) {
  runner::RunConfig a;
  a.ps = {3};
  a.n_min = a.n_max = 4;
  auto b = a;
  b.jobs = 4;
  EXPECT_EQ(runner::to_json(runner::run_all(a)), runner::to_json(runner::run_all(b)));
  EXPECT_EQ(runner::to_markdown(runner::run_all(a)), runner::to_markdown(runner::run_all(b)));
}

TEST(Coverage, EveryFamilyMappedOrListedUnmapped) {
  auto unmapped = runner::unmapped_families();
  EXPECT_EQ(unmapped, (std::vector<std::string>{"G25(3.2)"}));
  for (int f = 1; f <= fp::family_count(FamilyList::two); ++f) {
    bool listed = std::find(unmapped.begin(), unmapped.end(), "G" + std::to_string(f) + "(3.2)") != unmapped.end();
    EXPECT_NE(cases::two_cases_of(f).empty(), !listed) << f;
  }
  EXPECT_EQ(cases::two_cases_of(23), (std::vector<int>{3, 8}));
  for (int f = 1; f <= fp::family_count(FamilyList::odd); ++f) EXPECT_GE(cases::odd_case_of(f), 1) << f;
  // the grid has one instance per family at its least n for every prime
  std::set<std::pair<int, int>> seen;
  for (const auto& s : runner::grid({})) seen.insert({static_cast<int>(s.list), s.index});
  EXPECT_EQ(seen.size(), static_cast<std::size_t>(fp::family_count(FamilyList::odd) + fp::family_count(FamilyList::two)));
}

TEST(Certificate, VerdictRule) {
  cert::Certificate c;
  EXPECT_FALSE(c.passed());  // no steps
  c.add("a", true, "x");
  c.add_gate("gate:b", true, "x");
  EXPECT_TRUE(c.passed());
  c.add_discrepancy("c", true, "x", {{"printed", "p"}, {"computed", "q"}});
  EXPECT_TRUE(c.passed());
  c.add_discrepancy("d", false, "x", {{"printed", "p"}});
  EXPECT_FALSE(c.passed());
  cert::Certificate f;
  f.add("a", false, "x");
  EXPECT_EQ(f.verdict(), "fail");
  f.note("n");
  f.note("n");
  EXPECT_EQ(f.notes.size(), 1u);
}

TEST(Certificate, JsonSchema) {
  auto c = runner::run_case(two(1, 4));
  auto j = cert::to_json(c);
  EXPECT_EQ(j["schema_version"], cert::kSchemaVersion);
  EXPECT_EQ(j["family"]["theorem"], "3.2");
  EXPECT_EQ(j["family"]["index"], 1);
  EXPECT_EQ(j["family"]["p"], 2);
  EXPECT_EQ(j["family"]["n"], 4);
  EXPECT_EQ(j["verdict"], "pass");
  ASSERT_TRUE(j["steps"].is_array());
  const std::set<std::string> statuses{"pass", "gated", "noted-discrepancy", "fail"};
  for (const auto& s : j["steps"]) {
    EXPECT_TRUE(s.contains("name"));
    EXPECT_TRUE(s.contains("paper_anchor"));
    EXPECT_TRUE(s["witness"].is_object());
    EXPECT_TRUE(statuses.count(s["status"].get<std::string>()));
  }
  // key order is fixed
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"schema_version", "family", "steps", "verdict", "notes"}));
  EXPECT_NE(cert::to_markdown(c).find("| step | status |"), std::string::npos);
}

TEST(Cli, ExitCodesAndOutput) {
  auto ok = run_cli("--p 2 --n 4 --report json");
  EXPECT_EQ(ok.status, 0);
  auto j = nlohmann::json::parse(ok.out);
  EXPECT_EQ(j["summary"]["certificates"], 5);
  EXPECT_EQ(j["summary"]["fail"], 0);

  EXPECT_EQ(run_cli("").status, 2);
  EXPECT_EQ(run_cli("--report xml --all").status, 2);
  EXPECT_EQ(run_cli("--p x").status, 2);

  auto md = run_cli("--theorem 3.1 --family 11 --report md");
  EXPECT_EQ(md.status, 0);
  EXPECT_NE(md.out.find("G11(3.1)"), std::string::npos);
}

TEST(Cli, OutFileMatchesStdout) {
  std::string path = ::testing::TempDir() + "noether_cli_out.json";
  auto r = run_cli("--p 3 --n 3 --out " + path);
  EXPECT_EQ(r.status, 0);
  std::ifstream f(path);
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, run_cli("--p 3 --n 3").out);
  std::remove(path.c_str());
}
