#include <gtest/gtest.h>

#include <map>

#include "noether/fpgroups.hpp"
#include "noether/runner.hpp"

using namespace noether;
using fp::FamilyList;
using fp::FamilySpec;

namespace {

FamilySpec odd(int f, std::int64_t p, std::int64_t n) { return {FamilyList::odd, f, p, n, std::nullopt}; }
FamilySpec two(int f, std::int64_t n) { return {FamilyList::two, f, 2, n, std::nullopt}; }

fp::PermGroup group(const FamilySpec& s) { return fp::realize(fp::build_presentation(s)); }

std::vector<std::string> relator_strings(const fp::Presentation& pr) {
  std::vector<std::string> v;
  for (const auto& r : pr.relators) v.push_back(pr.word_str(r));
  return v;
}

// Order of g computed by walking the Cayley table, independent of element_order.
std::int64_t naive_order(const fp::PermGroup& G, fp::Elem g) {
  std::int64_t k = 1;
  for (fp::Elem x = g; x != G.identity(); x = G.mul(x, g)) ++k;
  return k;
}

}  // namespace

TEST(BuildPresentation, OddFamilyOneRelators) {
  auto pr = fp::build_presentation(odd(1, 3, 3));
  EXPECT_EQ(pr.generators, (std::vector<std::string>{"sigma", "tau", "lambda"}));
  EXPECT_EQ(relator_strings(pr), (std::vector<std::string>{"sigma^3", "tau^3", "lambda^3",
                                                           "sigma^-1 lambda^-1 sigma^1 lambda^1",
                                                           "tau^-1 lambda^-1 tau^1 lambda^1",
                                                           "tau^-1 sigma^1 tau^1 lambda^-1 sigma^-1"}));
}

TEST(BuildPresentation, RangeErrorNamesBound) {
  try {
    fp::build_presentation(odd(2, 3, 3));
    FAIL() << "expected ParameterRangeError";
  } catch (const ParameterRangeError& e) {
    EXPECT_NE(std::string(e.what()).find("n >= 4"), std::string::npos);
  }
  EXPECT_THROW(fp::build_presentation({FamilyList::two, 1, 3, 4, std::nullopt}), ParameterRangeError);
  EXPECT_THROW(fp::build_presentation(odd(12, 3, 4)), ParameterRangeError);
  EXPECT_THROW(fp::build_presentation(odd(11, 3, 5)), ParameterRangeError);
  EXPECT_THROW(fp::build_presentation({FamilyList::odd, 6, 3, 4, 1}), ParameterRangeError);  // 1 is a residue
}

TEST(BuildPresentation, TwoFamilyOneRelators) {
  auto pr = fp::build_presentation(two(1, 4));
  EXPECT_EQ(relator_strings(pr), (std::vector<std::string>{"sigma^4", "tau^4", "tau^-1 sigma^1 tau^1 sigma^-3"}));
}

TEST(BuildPresentation, RelatorsAreFreelyReduced) {
  for (auto list : {FamilyList::odd, FamilyList::two})
    for (const auto& s : runner::grid({.ps = {}, .theorem = list})) {
      auto pr = fp::build_presentation(s);
      for (const auto& r : pr.relators) {
        EXPECT_EQ(r, fp::free_reduce(r)) << s.label();
        for (const auto& l : r) EXPECT_NE(l.exp, 0);
      }
    }
}

TEST(BuildPresentation, TextRoundTrip) {
  auto pr = fp::build_presentation(odd(10, 3, 6));
  auto back = fp::Presentation::from_text(pr.to_text());
  EXPECT_EQ(back.generators, pr.generators);
  EXPECT_EQ(back.relators, pr.relators);
}

TEST(Realize, Degrees) {
  EXPECT_EQ(group(odd(1, 3, 3)).degree(), 27u);
  EXPECT_EQ(fp::realize(fp::Presentation::from_text("# generators: g\ng^1\n")).degree(), 1u);
  EXPECT_EQ(group(odd(9, 3, 5)).degree(), 243u);
}

TEST(Realize, OverBoundIsResourceError) {
  fp::RealizeOptions opt;
  opt.order_bound = 100;
  EXPECT_THROW(fp::realize(fp::build_presentation(odd(9, 3, 5)), opt), ResourceError);
}

TEST(Realize, Deterministic) {
  auto a = group(two(17, 5));
  auto b = group(two(17, 5));
  EXPECT_TRUE(a == b);
}

TEST(ElementOrder, Examples) {
  auto G = group(odd(1, 3, 4));
  EXPECT_EQ(fp::element_order(G, G.identity()), 1);
  EXPECT_EQ(fp::element_order(G, G.gen(0)), 9);
  auto H = group(odd(2, 3, 4));
  EXPECT_EQ(fp::element_order(H, H.gen(1)), 9);
  EXPECT_EQ(naive_order(H, H.gen(1)), 9);
  EXPECT_NE(H.pow(H.gen(1), 3), H.identity());
}

TEST(Claims, OddFamilyOne) {
  auto s = odd(1, 3, 3);
  auto G = group(s);
  auto r = fp::verify_family_claims(s, G);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.order, 27);
  EXPECT_EQ(*r.order_p_n2_witness, G.gen(0));
  EXPECT_EQ(r.exponent, 3);
  // exponent from the order spectrum computed here
  std::int64_t ex = 1;
  for (fp::Elem g = 0; g < G.order(); ++g) ex = std::lcm(ex, naive_order(G, g));
  EXPECT_EQ(ex, 3);
}

TEST(Claims, TwoFamilyOne) {
  auto s = two(1, 4);
  auto r = fp::verify_family_claims(s, group(s));
  EXPECT_EQ(r.order, 16);
  EXPECT_TRUE(r.has_order_p_n2);
  EXPECT_TRUE(r.no_order_p_n1);
}

TEST(Claims, AbelianFailsNonAbelianCheck) {
  auto pr = fp::Presentation::from_text("# generators: sigma tau\nsigma^3\ntau^9\nsigma^-1 tau^-1 sigma^1 tau^1\n");
  auto G = fp::realize(pr);
  auto r = fp::verify_family_claims(odd(1, 3, 3), G);
  EXPECT_TRUE(r.order_ok);
  EXPECT_FALSE(r.non_abelian);
  EXPECT_FALSE(r.ok());
}

TEST(SubgroupProps, Examples) {
  auto G = group(odd(4, 3, 4));
  auto sp = fp::subgroup_props(G, {G.gen(0), G.gen(1)});
  EXPECT_TRUE(sp.is_abelian);
  EXPECT_EQ(sp.order, 27u);

  auto t = fp::subgroup_props(G, {G.identity()});
  EXPECT_EQ(t.order, 1u);
  EXPECT_TRUE(t.is_abelian && t.is_normal && t.is_cyclic);

  auto H = group(two(4, 5));
  auto h = fp::subgroup_props(H, {H.gen(0), H.gen(1)});
  EXPECT_TRUE(h.is_abelian);
  EXPECT_TRUE(h.is_normal);
  EXPECT_EQ(*h.quotient_order, 2);
  EXPECT_TRUE(*h.quotient_cyclic);
  // independent closure: every product of the listed elements stays inside
  for (auto a : h.elements)
    for (auto b : h.elements) EXPECT_TRUE(std::binary_search(h.elements.begin(), h.elements.end(), H.mul(a, b)));
}

TEST(SubgroupProps, AllGeneratorsGiveWholeGroup) {
  for (const auto& s : {odd(3, 3, 4), two(12, 5), odd(7, 5, 4)}) {
    auto G = group(s);
    EXPECT_EQ(fp::subgroup_props(G, G.gens()).order, G.order()) << s.label();
  }
}

TEST(DirectProduct, Examples) {
  auto G = group(odd(3, 3, 4));
  EXPECT_TRUE(fp::direct_product_check(G, {G.gen(0), G.gen(1)}, G.gen(2)));

  auto C2 = fp::realize(fp::Presentation::from_text("# generators: c\nc^2\n"));
  EXPECT_TRUE(fp::direct_product_check(C2, {C2.gen(0)}, C2.identity()));

  // enumerate the centre of G2(3.2) and find the involutions that split off
  auto H = group(two(2, 4));
  int splitting = 0;
  for (fp::Elem e = 1; e < H.order(); ++e) {
    bool central = true;
    for (fp::Elem x = 0; x < H.order(); ++x) central = central && H.mul(e, x) == H.mul(x, e);
    if (central && naive_order(H, e) == 2 && fp::direct_product_check(H, {H.gen(0), H.gen(1)}, e)) ++splitting;
  }
  EXPECT_GE(splitting, 1);
  EXPECT_TRUE(fp::direct_product_check(H, {H.gen(0), H.gen(1)}, H.gen(2)));
}

TEST(Metacyclic, Examples) {
  auto G = group(odd(2, 3, 4));
  EXPECT_TRUE(fp::metacyclic_check(G, G.gen(0), G.gen(1)));
  auto C = fp::realize(fp::Presentation::from_text("# generators: g h\ng^9\nh^1\n"));
  EXPECT_TRUE(fp::metacyclic_check(C, C.gen(0), C.identity()));
  auto G1 = group(odd(1, 3, 3));
  EXPECT_FALSE(fp::metacyclic_check(G1, G1.gen(0), G1.gen(1)));
}

TEST(Realize, GridInvariants) {
  // relators trivial, |G| = p^n, associativity, max element order p^(n-2)
  for (const auto& s : runner::grid({})) {
    auto G = group(s);
    auto pr = fp::build_presentation(s);
    for (const auto& r : pr.relators) EXPECT_EQ(G.eval(r), G.identity()) << s.label();
    EXPECT_EQ(static_cast<std::int64_t>(G.order()), fp::ipow(s.p, s.n)) << s.label();
    EXPECT_TRUE(fp::check_group_axioms(G)) << s.label();
    std::int64_t mx = 0;
    for (fp::Elem g = 0; g < G.order(); ++g) mx = std::max(mx, naive_order(G, g));
    EXPECT_EQ(mx, fp::ipow(s.p, s.n - 2)) << s.label();
  }
}

TEST(Realize, LiteralReadingOfCorrectedFamiliesIsNotOfOrderTwoToTheN) {
  for (int f : {21, 24, 25}) {
    auto s = two(f, 6);
    std::size_t order = 0;
    try {
      order = fp::realize(fp::build_presentation(s, fp::Reading::literal)).order();
    } catch (const ResourceError&) {
      order = 0;
    }
    EXPECT_NE(static_cast<std::int64_t>(order), fp::ipow(2, 6)) << f;
  }
}
