#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "noether/fpgroups.hpp"
#include "noether/regrep.hpp"

using namespace noether;
using cyclo::CycloNumber;
using cyclo::Rational;
using cyclo::RootOfUnity;
using fp::Elem;
using rep::GroupVector;

namespace {

fp::PermGroup group(fp::FamilyList l, int f, std::int64_t p, std::int64_t n) {
  return fp::realize(fp::build_presentation({l, f, p, n, std::nullopt}));
}

std::vector<Elem> powers(const fp::PermGroup& G, Elem g) {
  std::vector<Elem> v{G.identity()};
  for (Elem x = g; x != G.identity(); x = G.mul(x, g)) v.push_back(x);
  return v;
}

// Q-rank of the Q-span of zeta^k v_i: the K-rank times [K : Q].
std::size_t q_rank_of_k_span(const std::vector<GroupVector>& vs, std::int64_t N) {
  std::map<std::pair<Elem, std::size_t>, std::size_t> col;
  std::vector<std::map<std::size_t, Rational>> rows;
  const std::size_t d = cyclo::field(N)->degree();
  for (const auto& v : vs)
    for (std::size_t k = 0; k < d; ++k) {
      std::map<std::size_t, Rational> r;
      for (const auto& [h, c] : v.coeffs()) {
        auto cc = c * CycloNumber::zeta_power(N, static_cast<std::int64_t>(k));
        for (std::size_t i = 0; i < d; ++i)
          if (cc.coeffs()[i] != 0) r[col.try_emplace({h, i}, col.size()).first->second] = cc.coeffs()[i];
      }
      rows.push_back(r);
    }
  std::size_t rank = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].empty()) continue;
    auto [pc, pv] = *rows[i].begin();
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      auto it = rows[j].find(pc);
      if (it == rows[j].end()) continue;
      Rational f = it->second / pv;
      for (const auto& [c, v] : rows[i]) {
        rows[j][c] -= f * v;
        if (rows[j][c] == 0) rows[j].erase(c);
      }
    }
    ++rank;
  }
  return rank / d;
}

struct CaseOne {
  fp::PermGroup G;
  std::int64_t N;
  Elem s, t, l;
  GroupVector X1, X2, Y1, Y2;
  std::vector<GroupVector> basis;  // x_0..x_{p-1}, y_0..y_{p-1}
};

CaseOne case_one(std::int64_t p, std::int64_t n) {
  const std::int64_t N = fp::ipow(p, n - 2);
  CaseOne c{group(fp::FamilyList::odd, 1, p, n), N, 0, 0, 0, GroupVector(N), GroupVector(N), GroupVector(N), GroupVector(N), {}};
  auto& G = c.G;
  c.s = G.gen(0);
  c.t = G.gen(1);
  c.l = G.gen(2);
  const RootOfUnity zeta(c.N, 1), omega = zeta.pow(fp::ipow(p, n - 3));
  c.X1 = rep::orbit_sum(G, powers(G, c.s), G.identity(), c.N);
  c.X2 = rep::orbit_sum(G, powers(G, c.l), G.identity(), c.N);
  c.Y1 = rep::character_average(G, c.X1, c.l, omega, p);
  c.Y2 = rep::character_average(G, c.X2, c.s, zeta, c.N);
  auto tr = rep::translate_basis(G, {c.Y1, c.Y2}, c.t, p);
  EXPECT_TRUE(tr.independent);
  c.basis = tr.vectors;
  return c;
}

}  // namespace

TEST(Act, Examples) {
  auto G = group(fp::FamilyList::odd, 1, 3, 3);
  auto v = GroupVector::basis(3, G.gen(0)) + GroupVector::basis(3, G.gen(1)).scaled(CycloNumber::zeta_power(3, 1));
  EXPECT_EQ(rep::act(G, G.identity(), v), v);
  EXPECT_EQ(rep::act(G, G.gen(0), GroupVector::basis(3, G.identity())), GroupVector::basis(3, G.gen(0)));
  // lambda . X1 has support {lambda sigma^j}
  auto X1 = rep::orbit_sum(G, powers(G, G.gen(0)), G.identity(), 3);
  auto LX = rep::act(G, G.gen(2), X1);
  std::set<Elem> want;
  for (Elem h : powers(G, G.gen(0))) want.insert(G.mul(G.gen(2), h));
  std::set<Elem> got;
  for (const auto& [h, c] : LX.coeffs()) {
    got.insert(h);
    EXPECT_TRUE(c.is_one());
  }
  EXPECT_EQ(got, want);
}

TEST(OrbitSum, Examples) {
  auto G = group(fp::FamilyList::odd, 1, 3, 3);
  EXPECT_EQ(rep::orbit_sum(G, powers(G, G.gen(0)), G.identity(), 3).support_size(), 3u);
  EXPECT_EQ(rep::orbit_sum(G, powers(G, G.gen(2)), G.identity(), 3).support_size(), 3u);
  EXPECT_EQ(rep::orbit_sum(G, {G.identity()}, G.identity(), 3), GroupVector::basis(3, G.identity()));
}

TEST(CharacterAverage, EigenEquations) {
  for (auto [p, n] : {std::pair<std::int64_t, std::int64_t>{3, 3}, {3, 4}, {5, 3}}) {
    auto c = case_one(p, n);
    const RootOfUnity zeta(c.N, 1), omega = zeta.pow(fp::ipow(p, n - 3));
    EXPECT_TRUE(rep::is_eigenvector(c.G, c.Y2, c.s, zeta));
    EXPECT_TRUE(rep::is_eigenvector(c.G, c.Y1, c.l, omega));
    EXPECT_TRUE(rep::is_eigenvector(c.G, c.Y1, c.s, RootOfUnity::one()));
    EXPECT_TRUE(rep::is_eigenvector(c.G, c.Y2, c.l, RootOfUnity::one()));
  }
  auto G = group(fp::FamilyList::odd, 1, 3, 3);
  auto v = GroupVector::basis(3, G.gen(1));
  EXPECT_EQ(rep::character_average(G, v, G.identity(), RootOfUnity::one(), 1), v);
}

TEST(CharacterAverage, WrongCharacterIsDegenerate) {
  // X1 is sigma-invariant, so averaging against a nontrivial character of sigma vanishes
  auto G = group(fp::FamilyList::odd, 1, 3, 3);
  auto X1 = rep::orbit_sum(G, powers(G, G.gen(0)), G.identity(), 3);
  EXPECT_THROW(rep::character_average(G, X1, G.gen(0), RootOfUnity(3, 1), 3), StructuralError);
}

TEST(TranslateBasis, CaseOneIndependent) {
  auto c = case_one(3, 3);
  EXPECT_EQ(c.basis.size(), 6u);
  EXPECT_EQ(q_rank_of_k_span(c.basis, c.N), 6u);
  auto G = group(fp::FamilyList::odd, 1, 3, 3);
  auto v = GroupVector::basis(3, G.gen(1));
  auto one = rep::translate_basis(G, {v}, G.identity(), 1);
  ASSERT_EQ(one.vectors.size(), 1u);
  EXPECT_EQ(one.vectors[0], v);
}

TEST(TranslateBasis, DependenceDetected) {
  auto c = case_one(3, 3);
  // lambda fixes Y2, so {Y2, lambda Y2} has rank 1
  auto tr = rep::translate_set(c.G, {c.Y2}, {c.G.identity(), c.l});
  EXPECT_FALSE(tr.independent);
  EXPECT_EQ(tr.rank, 1u);
}

TEST(ExtractAction, CaseOneTableMatchesDisplay) {
  for (auto [p, n] : {std::pair<std::int64_t, std::int64_t>{3, 3}, {3, 4}, {5, 3}}) {
    auto c = case_one(p, n);
    auto pr = fp::build_presentation({fp::FamilyList::odd, 1, p, n, std::nullopt});
    auto t = rep::extract_action(c.G, c.basis, c.N, pr.relators);
    const std::int64_t w = fp::ipow(p, n - 3);  // omega = zeta^w
    const auto P = static_cast<std::size_t>(p);
    for (std::size_t i = 0; i < P; ++i) {
      // sigma: x_i -> omega^i x_i, y_i -> zeta y_i
      EXPECT_EQ(t.rows[0][i], (rep::PermEntry{i, RootOfUnity(c.N, w * static_cast<std::int64_t>(i))}));
      EXPECT_EQ(t.rows[0][P + i], (rep::PermEntry{P + i, RootOfUnity(c.N, 1)}));
      // tau: x_i -> x_{i+1}, cyclically
      EXPECT_EQ(t.rows[1][i], (rep::PermEntry{(i + 1) % P, RootOfUnity::one()}));
      EXPECT_EQ(t.rows[1][P + i], (rep::PermEntry{P + (i + 1) % P, RootOfUnity::one()}));
      // lambda: x_i -> omega x_i, y_i -> y_i
      EXPECT_EQ(t.rows[2][i], (rep::PermEntry{i, RootOfUnity(c.N, w)}));
      EXPECT_EQ(t.rows[2][P + i], (rep::PermEntry{P + i, RootOfUnity::one()}));
    }
    // homomorphism: relators act trivially
    for (const auto& r : pr.relators) EXPECT_TRUE(rep::MonomialPermTable::is_identity(t.eval(r)));
    EXPECT_TRUE(rep::faithful_check(c.G, t));
  }
}

TEST(ExtractAction, TrivialGroup) {
  auto G = fp::realize(fp::Presentation::from_text("# generators: g\ng^1\n"));
  auto t = rep::extract_action(G, {GroupVector::basis(1, G.identity())}, 1);
  EXPECT_TRUE(rep::MonomialPermTable::is_identity(t.rows[0]));
  EXPECT_TRUE(rep::faithful_check(G, t));
}

TEST(ExtractAction, NotMonomialIsRejected) {
  auto c = case_one(3, 3);
  // X1 + X2 is not mapped to a multiple of itself or of X1 by tau
  EXPECT_THROW(rep::extract_action(c.G, {c.X1 + c.X2, c.X1}, c.N), StructuralError);
}

TEST(FaithfulCheck, HalfSubspacesAreNotFaithful) {
  // Y1 alone is not tau-stable; its tau-translates span a subspace on which
  // sigma^p acts trivially, and the y-span is fixed pointwise by lambda
  auto c = case_one(3, 4);
  EXPECT_THROW(rep::extract_action(c.G, {c.Y1}, c.N), StructuralError);
  std::vector<GroupVector> xs(c.basis.begin(), c.basis.begin() + 3), ys(c.basis.begin() + 3, c.basis.end());
  auto tx = rep::extract_action(c.G, xs, c.N);
  auto ty = rep::extract_action(c.G, ys, c.N);
  EXPECT_FALSE(rep::faithful_check(c.G, tx));
  EXPECT_FALSE(rep::faithful_check(c.G, ty));
  auto kx = rep::action_kernel(c.G, tx), ky = rep::action_kernel(c.G, ty);
  EXPECT_TRUE(std::find(kx.begin(), kx.end(), c.G.pow(c.s, 3)) != kx.end());
  EXPECT_TRUE(std::find(ky.begin(), ky.end(), c.l) != ky.end());
}

TEST(ExtractAction, TwoListCaseFiveTauNegatesY) {
  // family 15 of the p = 2 list exists from n = 5 on
  auto G = group(fp::FamilyList::two, 15, 2, 5);
  const std::int64_t N = 8;
  Elem s = G.gen(0), t = G.gen(1), l = G.gen(2), s2 = G.mul(s, s);
  auto Y1 = rep::character_average(G, rep::orbit_sum(G, powers(G, t), 0, N), s2, RootOfUnity(N, 2), N / 2);
  auto Y2 = rep::character_average(G, rep::orbit_sum(G, powers(G, s2), 0, N), t, RootOfUnity(N, N / 2), 2);
  auto tr = rep::translate_set(G, {Y1, Y2}, {G.identity(), s, l, G.mul(l, s)});
  ASSERT_TRUE(tr.independent);
  EXPECT_EQ(q_rank_of_k_span(tr.vectors, N), 8u);
  auto tab = rep::extract_action(G, tr.vectors, N);
  for (std::size_t i = 4; i < 8; ++i) EXPECT_EQ(tab.rows[1][i], (rep::PermEntry{i, RootOfUnity(2, 1)}));
  EXPECT_TRUE(rep::faithful_check(G, tab));
}
