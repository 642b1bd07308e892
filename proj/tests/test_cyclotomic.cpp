#include <gtest/gtest.h>

#include <random>

#include "noether/cyclotomic.hpp"
#include "oracles.hpp"

using namespace noether;
using cyclo::CycloNumber;
using cyclo::Rational;
using cyclo::RootOfUnity;
using cyclo::ZOmegaElem;

TEST(RootMul, Examples) {
  EXPECT_EQ(cyclo::root_mul({4, 1}, {4, 1}), RootOfUnity(4, 2));
  EXPECT_EQ(RootOfUnity(4, 2), RootOfUnity(2, 1));
  EXPECT_TRUE(cyclo::root_mul({9, 3}, {9, 6}).is_one());
  // omega = zeta_9^3 for p = 3, n = 4, and omega * omega^(p-1) = 1
  RootOfUnity omega = RootOfUnity(9, 1).pow(3);
  EXPECT_EQ(omega.order(), 3);
  EXPECT_TRUE((omega * omega.pow(2)).is_one());
}

TEST(RootMul, MixedModuli) {
  auto r = cyclo::root_mul({4, 1}, {6, 1});  // 3/12 + 2/12
  EXPECT_EQ(r, RootOfUnity(12, 5));
  EXPECT_EQ(r.order(), 12);
}

TEST(RootOfUnity, Primitivity) {
  for (std::int64_t m : {1, 2, 3, 4, 8, 9, 16, 25, 27}) {
    EXPECT_TRUE(RootOfUnity(m, 1).pow(m).is_one());
    for (std::int64_t k = 1; k < m; ++k) EXPECT_FALSE(RootOfUnity(m, 1).pow(k).is_one()) << m << " " << k;
    EXPECT_TRUE(CycloNumber::zeta_power(m, m).is_one());
    for (std::int64_t k = 1; k < m; ++k) EXPECT_FALSE(CycloNumber::zeta_power(m, k).is_one()) << m << " " << k;
  }
}

TEST(CycloNumber, EmbeddingIsHomomorphism) {
  for (std::int64_t N : {8, 9, 12, 27}) {
    for (std::int64_t a = 0; a < N; ++a)
      for (std::int64_t b = 0; b < N; b += 3) {
        RootOfUnity x(N, a), y(N, b);
        EXPECT_EQ(CycloNumber::from_root(N, x * y), CycloNumber::from_root(N, x) * CycloNumber::from_root(N, y));
      }
  }
  // odd N receives the square roots of its roots: zeta_6 in Q(zeta_3)
  auto z6 = CycloNumber::from_root(3, {6, 1});
  EXPECT_TRUE(z6.pow(6).is_one());
  EXPECT_FALSE(z6.pow(3).is_one());
  EXPECT_THROW(CycloNumber::from_root(3, {4, 1}), std::invalid_argument);
}

TEST(CycloNumber, CanonicalFormDecidesEquality) {
  // 1 + zeta_3 + zeta_3^2 = 0 in the field, not just mod T^3 - 1
  auto s = CycloNumber::one(3) + CycloNumber::zeta_power(3, 1) + CycloNumber::zeta_power(3, 2);
  EXPECT_TRUE(s.is_zero());
  // i^2 = -1
  EXPECT_EQ(CycloNumber::zeta_power(4, 1) * CycloNumber::zeta_power(4, 1), -CycloNumber::one(4));
}

namespace {

CycloNumber random_cyclo(std::mt19937_64& rng, std::int64_t N) {
  std::uniform_int_distribution<int> coef(-5, 5), den(1, 4), exp(0, static_cast<int>(N) - 1);
  CycloNumber x = CycloNumber::zero(N);
  for (int t = 0; t < 3; ++t)
    x += Rational(coef(rng), den(rng)) * CycloNumber::zeta_power(N, exp(rng));
  return x;
}

ZOmegaElem random_zomega(std::mt19937_64& rng, std::int64_t p) {
  std::uniform_int_distribution<std::int64_t> coef(-6, 6);
  zlat::IntVec c(static_cast<std::size_t>(p - 1));
  for (auto& x : c) x = coef(rng);
  return {p, c};
}

}  // namespace

TEST(CycloNumber, RingAxiomsRandomized) {
  std::mt19937_64 rng(7);
  for (std::int64_t N : {4, 9, 8}) {
    for (int i = 0; i < 1000 / 3 + 1; ++i) {
      auto a = random_cyclo(rng, N), b = random_cyclo(rng, N), c = random_cyclo(rng, N);
      ASSERT_EQ((a * b) * c, a * (b * c));
      ASSERT_EQ(a * (b + c), a * b + a * c);
      ASSERT_EQ(a * b, b * a);
      if (!a.is_zero()) ASSERT_TRUE((a * a.inverse()).is_one());
    }
  }
}

TEST(ZOmega, RingAxiomsRandomized) {
  std::mt19937_64 rng(11);
  for (std::int64_t p : {2, 3, 5}) {
    for (int i = 0; i < 1000; ++i) {
      auto a = random_zomega(rng, p), b = random_zomega(rng, p), c = random_zomega(rng, p);
      ASSERT_EQ((a * b) * c, a * (b * c));
      ASSERT_EQ(a * (b + c), a * b + a * c);
      ASSERT_EQ(a * b, b * a);
    }
  }
}

TEST(PhiPReduce, Examples) {
  EXPECT_EQ(cyclo::phi_p_reduce({0, 0, 1}, 3), ZOmegaElem(3, {-1, -1}));
  for (std::int64_t p : {2, 3, 5}) EXPECT_TRUE(cyclo::phi_p_reduce(oracle_t::phi_p(p), p).is_zero());
  // (1+T)^3 against long division by T^2 + T + 1
  oracle_t::Vec cube = oracle_t::poly_mul(oracle_t::poly_mul({1, 1}, {1, 1}), {1, 1});
  auto expect = oracle_t::poly_rem_monic(cube, oracle_t::phi_p(3));
  EXPECT_EQ(cyclo::phi_p_reduce(cube, 3).coeffs(), expect);
  // 1 + omega = -omega^2, so the cube is -1
  EXPECT_EQ(cyclo::phi_p_reduce(cube, 3), ZOmegaElem::constant(3, -1));
}

TEST(PhiPReduce, AgreesWithLongDivision) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int64_t> coef(-9, 9);
  std::uniform_int_distribution<std::size_t> len(1, 12);
  for (std::int64_t p : {2, 3, 5})
    for (int i = 0; i < 300; ++i) {
      oracle_t::Vec f(len(rng));
      for (auto& x : f) x = coef(rng);
      EXPECT_EQ(cyclo::phi_p_reduce(f, p).coeffs(), oracle_t::poly_rem_monic(f, oracle_t::phi_p(p)));
    }
}

TEST(PhiPReduce, TPowerP) {
  for (std::int64_t p : {2, 3, 5}) {
    oracle_t::Vec tp(static_cast<std::size_t>(p) + 1, 0);
    tp.back() = 1;
    EXPECT_EQ(cyclo::phi_p_reduce(tp, p), ZOmegaElem::constant(p, 1));
    // T * T^(p-1) reduces to 1 as well
    oracle_t::Vec t1{0, 1}, tpm1(static_cast<std::size_t>(p), 0);
    tpm1.back() = 1;
    EXPECT_EQ(cyclo::phi_p_reduce(t1, p) * cyclo::phi_p_reduce(tpm1, p), ZOmegaElem::constant(p, 1));
  }
}

TEST(ZOmegaSolve, Examples) {
  const std::int64_t p = 3;
  ZOmegaElem one = ZOmegaElem::constant(p, 1), zero = ZOmegaElem::zero(p);
  std::vector<ZOmegaElem> b{ZOmegaElem(p, {2, -1}), ZOmegaElem(p, {0, 5})};
  auto x = cyclo::zomega_solve({{one, zero}, {zero, one}}, b);
  ASSERT_TRUE(x);
  EXPECT_EQ(*x, b);

  ZOmegaElem onept(p, {1, 1});
  auto y = cyclo::zomega_solve({{onept}}, {onept});
  ASSERT_TRUE(y);
  EXPECT_EQ((*y)[0], one);

  // 1 - T generates a prime of norm 3, so 1 is not a multiple of it
  EXPECT_FALSE(cyclo::zomega_solve({{ZOmegaElem(p, {1, -1})}}, {one}));
}

TEST(ZOmegaSolve, AgreesWithExhaustiveSearch) {
  // 1x1 systems with small coefficients: whenever a search over
  // coefficients in [-3,3] finds a solution, zomega_solve must find one too,
  // and every returned solution must substitute back.
  std::mt19937_64 rng(5);
  const std::int64_t p = 3;
  auto all_small = [&] {
    std::vector<ZOmegaElem> v;
    for (std::int64_t a = -3; a <= 3; ++a)
      for (std::int64_t b = -3; b <= 3; ++b) v.emplace_back(p, zlat::IntVec{a, b});
    return v;
  }();
  for (int it = 0; it < 60; ++it) {
    auto a = random_zomega(rng, p);
    auto x0 = all_small[rng() % all_small.size()];
    auto bb = a * x0;
    auto x = cyclo::zomega_solve({{a}}, {bb});
    if (a.is_zero()) continue;
    ASSERT_TRUE(x);
    EXPECT_EQ(a * (*x)[0], bb);
    auto c = random_zomega(rng, p);
    bool searched = false;
    for (const auto& s : all_small) searched = searched || a * s == c;
    auto xc = cyclo::zomega_solve({{a}}, {c});
    if (searched) EXPECT_TRUE(xc);
    if (xc) EXPECT_EQ(a * (*xc)[0], c);
  }
}

TEST(Companion, PhiPAnnihilates) {
  for (std::int64_t p : {2, 3, 5}) {
    auto C = cyclo::companion_phi(p);
    auto acc = zlat::IntMatrix::identity(C.rows()), pw = acc;
    for (std::int64_t i = 1; i < p; ++i) {
      pw = pw * C;
      acc = acc + pw;
    }
    EXPECT_TRUE(acc.is_zero()) << p;
  }
}
