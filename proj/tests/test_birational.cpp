#include <gtest/gtest.h>

#include <random>

#include "noether/birational.hpp"
#include "noether/expect.hpp"
#include "oracles.hpp"

using namespace noether;
using bir::Poly;
using bir::RationalFn;
using bir::Substitution;
using cyclo::Rational;

namespace {

using Vars = std::vector<std::string>;

RationalFn var(const Vars& vs, const std::string& n) { return RationalFn::variable(vs, 1, n); }
RationalFn cst(const Vars& vs, Rational q) { return RationalFn::constant(vs, 1, q); }

// Evaluation at a rational point, written against the raw term maps only.
// Only for rational coefficient fields.
Rational eval_poly(const Poly& p, const std::vector<Rational>& x) {
  Rational s = 0;
  for (const auto& [e, c] : p.terms()) {
    EXPECT_EQ(c.coeffs().size(), 1u);
    Rational t = c.coeffs()[0];
    for (std::size_t i = 0; i < e.size(); ++i)
      for (std::int64_t k = 0; k < e[i]; ++k) t *= x[i];
    s += t;
  }
  return s;
}

Rational eval(const RationalFn& f, const std::vector<Rational>& x) {
  return eval_poly(f.num(), x) / eval_poly(f.den(), x);
}

std::vector<Rational> random_point(std::mt19937_64& rng, std::size_t k) {
  std::uniform_int_distribution<int> num(1, 9), den(1, 5);
  std::vector<Rational> x;
  for (std::size_t i = 0; i < k; ++i) x.emplace_back(num(rng), den(rng));
  return x;
}

// tau on v: v_i -> v_{i+1}, v_{p-1} -> 1/(v_1 ... v_{p-1})
Substitution tau_on_v(std::int64_t p) {
  Vars V;
  for (std::int64_t i = 1; i < p; ++i) V.push_back("v" + std::to_string(i));
  Substitution s{V, {}};
  for (std::int64_t i = 1; i < p - 1; ++i) s.images.push_back(var(V, V[static_cast<std::size_t>(i)]));
  RationalFn prod = cst(V, 1);
  for (const auto& v : V) prod = prod * var(V, v);
  s.images.push_back(cst(V, 1) / prod);
  return s;
}

RationalFn random_poly(std::mt19937_64& rng, const Vars& V) {
  std::uniform_int_distribution<int> coef(-3, 3), ex(0, 2);
  RationalFn f = cst(V, 0);
  for (int t = 0; t < 3; ++t) {
    RationalFn m = cst(V, coef(rng));
    for (const auto& v : V) m = m * var(V, v).pow(ex(rng));
    f = f + m;
  }
  return f;
}

}  // namespace

TEST(Apply, Examples) {
  Vars V{"v1"};
  Substitution inv{V, {cst(V, 1) / var(V, "v1")}};
  RationalFn f = cst(V, 1) / (cst(V, 1) + var(V, "v1"));
  EXPECT_EQ(bir::apply(inv, f), var(V, "v1") / (cst(V, 1) + var(V, "v1")));
  EXPECT_EQ(bir::apply(Substitution::identity(V, 1), f), f);
  // v1 -> -1 kills the denominator
  Substitution bad{V, {cst(V, -1)}};
  EXPECT_THROW(bir::apply(bad, f), bir::DegenerateSubstitutionError);
}

TEST(Apply, AgreesWithPointEvaluation) {
  std::mt19937_64 rng(21);
  Vars V{"a", "b"};
  for (int it = 0; it < 50; ++it) {
    RationalFn f = random_poly(rng, V) / (random_poly(rng, V) + cst(V, 20));
    Substitution s{V, {random_poly(rng, V) + cst(V, 7), cst(V, 1) / (var(V, "a") + cst(V, 2))}};
    RationalFn g;
    try {
      g = bir::apply(s, f);
    } catch (const bir::DegenerateSubstitutionError&) {
      continue;
    }
    auto x = random_point(rng, 2);
    std::vector<Rational> sx{eval(s.images[0], x), eval(s.images[1], x)};
    if (eval_poly(f.den(), sx) == 0 || eval_poly(g.den(), x) == 0) continue;
    EXPECT_EQ(eval(g, x), eval(f, sx));
  }
}

TEST(Apply, IsRingHomomorphism) {
  std::mt19937_64 rng(22);
  Vars V{"a", "b"};
  Substitution s{V, {var(V, "b") / var(V, "a"), var(V, "a") + cst(V, 1)}};
  for (int it = 0; it < 40; ++it) {
    RationalFn f = random_poly(rng, V), g = random_poly(rng, V);
    EXPECT_EQ(bir::apply(s, f * g), bir::apply(s, f) * bir::apply(s, g));
    EXPECT_EQ(bir::apply(s, f + g), bir::apply(s, f) + bir::apply(s, g));
  }
}

TEST(Compose, MatchesSequentialApplication) {
  Vars V{"a", "b"};
  Substitution s1{V, {var(V, "b"), cst(V, 1) / var(V, "a")}};
  Substitution s2{V, {var(V, "a") + var(V, "b"), var(V, "b")}};
  auto c = bir::compose(s2, s1);
  std::mt19937_64 rng(23);
  for (int it = 0; it < 10; ++it) {
    RationalFn f = random_poly(rng, V);
    EXPECT_EQ(bir::apply(c, f), bir::apply(s2, bir::apply(s1, f)));
  }
}

TEST(BuildT, Formulas) {
  auto t2 = bir::build_t_substitution(2);
  Vars V2{"v1"};
  RationalFn t0 = cst(V2, 1) + var(V2, "v1");
  EXPECT_EQ(t2.t0, t0);
  EXPECT_EQ(t2.t[1], cst(V2, 1) / t0);
  EXPECT_EQ(t2.t[2], var(V2, "v1") / t0);

  auto t3 = bir::build_t_substitution(3);
  Vars V3{"v1", "v2"};
  RationalFn s0 = cst(V3, 1) + var(V3, "v1") + var(V3, "v1") * var(V3, "v2");
  EXPECT_EQ(t3.t0, s0);
  EXPECT_EQ(t3.t[1], cst(V3, 1) / s0);
  EXPECT_EQ(t3.t[2], var(V3, "v1") / s0);
  EXPECT_EQ(t3.t[3], var(V3, "v1") * var(V3, "v2") / s0);

  for (std::int64_t p : {2, 3, 5}) {
    auto tt = bir::build_t_substitution(p);
    EXPECT_TRUE(bir::t_sum_is_one(tt));
    EXPECT_TRUE(bir::t_roundtrip(tt));
    // recovered v_i = t_{i+1}/t_i at a point
    std::mt19937_64 rng(static_cast<std::uint64_t>(p));
    auto x = random_point(rng, static_cast<std::size_t>(p - 1));
    for (std::int64_t i = 1; i < p; ++i)
      EXPECT_EQ(eval(tt.t[static_cast<std::size_t>(i + 1)], x) / eval(tt.t[static_cast<std::size_t>(i)], x),
                x[static_cast<std::size_t>(i - 1)]);
  }
  EXPECT_THROW(bir::build_t_substitution(7), ParameterRangeError);
}

TEST(Linearization, TauCyclesT) {
  for (std::int64_t p : {2, 3, 5}) {
    auto tt = bir::build_t_substitution(p);
    auto rep = bir::verify_linearization(tau_on_v(p), tt);
    EXPECT_TRUE(rep.ok()) << p;
    // independent check at a point: tau(t_i)(x) = t_i(tau(x))
    std::mt19937_64 rng(100 + static_cast<std::uint64_t>(p));
    auto x = random_point(rng, static_cast<std::size_t>(p - 1));
    auto tau = tau_on_v(p);
    std::vector<Rational> tx;
    for (const auto& img : tau.images) tx.push_back(eval(img, x));
    for (std::int64_t i = 1; i < p; ++i)
      EXPECT_EQ(eval(tt.t[static_cast<std::size_t>(i)], tx), eval(tt.t[static_cast<std::size_t>(i + 1)], x));
  }
}

TEST(Linearization, WrongActionFails) {
  auto tt = bir::build_t_substitution(3);
  auto rep = bir::verify_linearization(Substitution::identity(tt.vars, 1), tt);
  EXPECT_FALSE(rep.images_ok);
  EXPECT_FALSE(rep.ok());
  EXPECT_TRUE(rep.sum_ok);
}

TEST(Linearization, FromMonomialTau) {
  // the same tau, built from its exponent matrix
  for (std::int64_t p : {3, 5}) {
    Vars V;
    for (std::int64_t i = 1; i < p; ++i) V.push_back("v" + std::to_string(i));
    std::vector<expect::Image> imgs;
    for (std::int64_t i = 1; i < p - 1; ++i) imgs.push_back({0, "v" + std::to_string(i + 1)});
    std::string last;
    for (std::int64_t i = 1; i < p; ++i) last += (i > 1 ? "*" : "") + std::string("v") + std::to_string(i) + "^-1";
    imgs.push_back({0, last});
    auto g = expect::automorphism(imgs, V, p);
    auto s = bir::from_monomial(g, V, 1);
    for (std::size_t i = 0; i < V.size(); ++i) EXPECT_EQ(s.images[i], tau_on_v(p).images[i]);
    EXPECT_TRUE(bir::verify_linearization(s, bir::build_t_substitution(p)).ok());
  }
}

TEST(AffineShift, CompanionOfPhiP) {
  for (std::int64_t p : {2, 3, 5}) {
    auto r = bir::affine_shift_check(tau_on_v(p), bir::build_t_substitution(p));
    EXPECT_TRUE(r.ok) << p;
    EXPECT_EQ(r.linear, cyclo::companion_phi(p)) << p;
  }
}

TEST(Mobius, InversionBecomesNegation) {
  Vars U{"u"}, Vv{"v"};
  Substitution lam{U, {cst(U, 1) / var(U, "u")}};
  bir::MobiusDef d{"u", "v", {1, 0}, true};
  EXPECT_TRUE(bir::mobius_check(lam, {d}, {cst(Vv, -1) * var(Vv, "v")}, 1));
  // v at u = 0 is 1
  auto t = bir::mobius_transform(Substitution::identity(U, 1), {d}, 1);
  EXPECT_EQ(t.images[0], var(Vv, "v"));
  RationalFn v_of_u = (cst(U, 1) - var(U, "u")) / (cst(U, 1) + var(U, "u"));
  EXPECT_EQ(eval(v_of_u, {Rational(0)}), Rational(1));
}

TEST(Mobius, SwapWithMixedDefinitions) {
  // sigma: u3 -> -u4, u4 -> -u3 with v3 = (1-u3)/(1+u3), v4 = (1+u4)/(1-u4)
  Vars U{"u3", "u4"}, V{"v3", "v4"};
  Substitution sigma{U, {cst(U, -1) * var(U, "u4"), cst(U, -1) * var(U, "u3")}};
  std::vector<bir::MobiusDef> defs{{"u3", "v3", {1, 0}, true}, {"u4", "v4", {1, 0}, false}};
  auto t = bir::mobius_transform(sigma, defs, 1);
  EXPECT_EQ(t.v_vars, V);
  EXPECT_EQ(t.images[0], var(V, "v4"));
  EXPECT_EQ(t.images[1], var(V, "v3"));
  // same definitions on both sides would give v3 -> 1/v4 instead
  std::vector<bir::MobiusDef> same{{"u3", "v3", {1, 0}, true}, {"u4", "v4", {1, 0}, true}};
  EXPECT_EQ(bir::mobius_transform(sigma, same, 1).images[0], cst(V, 1) / var(V, "v4"));
}

TEST(Mobius, ScaledDefinitionOverGaussianField) {
  // c = i: v = (1 - i u)/(1 + i u); u -> -u sends v to 1/v
  Vars U{"u"}, V{"v"};
  Substitution neg{U, {RationalFn::constant(U, 4, Rational(-1)) * RationalFn::variable(U, 4, 0)}};
  bir::MobiusDef d{"u", "v", {4, 1}, true};
  auto t = bir::mobius_transform(neg, {d}, 4);
  EXPECT_EQ(t.images[0], RationalFn::constant(V, 4, Rational(1)) / RationalFn::variable(V, 4, 0));
}

TEST(DegreeSanity, Bound) {
  Vars V{"a"};
  EXPECT_NO_THROW(bir::degree_sanity({var(V, "a").pow(3)}, 3));
  EXPECT_THROW(bir::degree_sanity({var(V, "a").pow(4)}, 3), StructuralError);
  auto tt = bir::build_t_substitution(5);
  EXPECT_NO_THROW(bir::degree_sanity(tt.t, 4));
}
