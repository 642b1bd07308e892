#pragma once

// Z[pi]-modules for pi = <lambda> cyclic of prime order p, given as an integer
// action matrix on Z^r (column j = image of basis vector j). When Phi_p kills
// the action the module is a Z[omega]-module; rank-one free pieces are
// recognized by Krylov bases and short exact sequences are split explicitly.

#include <optional>
#include <string>
#include <vector>

#include "noether/cyclotomic.hpp"
#include "noether/error.hpp"
#include "noether/intmat.hpp"
#include "noether/monomial.hpp"

namespace noether::zmod {

using cyclo::ZOmegaElem;
using zlat::IntMatrix;
using zlat::IntVec;

struct CyclicModule {
  IntMatrix L{0, 0};
  std::int64_t p = 2;

  std::size_t rank() const { return L.rows(); }
  bool has_order_dividing_p() const { return zlat::power(L, static_cast<unsigned>(p)).is_identity(); }

  /// Action of c(T) = sum c_j T^j, i.e. sum c_j L^j.
  IntMatrix eval(const ZOmegaElem& c) const {
    IntMatrix acc(rank(), rank());
    IntMatrix pw = IntMatrix::identity(rank());
    for (std::size_t j = 0; j < c.coeffs().size(); ++j) {
      if (j) pw = pw * L;
      acc = acc + zlat::scaled(pw, c.coeffs()[j]);
    }
    return acc;
  }
};

inline bool annihilation_check(const CyclicModule& M) { return mono::phi_p_of(M.L, M.p).is_zero(); }

/// Unimodular P with P^-1 L P = companion(Phi_p), if one exists. Rank must be
/// p-1 and Phi_p(L) = 0; otherwise nothing is returned.
inline std::optional<IntMatrix> isomorphic_to_standard(const CyclicModule& N,
                                                       const std::optional<IntVec>& preferred = std::nullopt) {
  if (static_cast<std::int64_t>(N.rank()) != N.p - 1) return std::nullopt;
  if (!annihilation_check(N)) return std::nullopt;
  auto P = mono::cyclic_standardize(N.L, N.p, preferred);
  if (!P) return std::nullopt;
  if (!(zlat::unimodular_inverse(*P) * N.L * *P == cyclo::companion_phi(N.p)))
    throw StructuralError("isomorphic_to_standard: conjugation check failed");
  return P;
}

/// 0 -> M1 -> M -> M2 -> 0 in coordinates adapted to M1: basis = [S | C]
/// is unimodular and basis^-1 L basis = [[L1, X], [0, L2]].
struct ModuleSES {
  std::int64_t p = 2;
  IntMatrix sub{0, 0};         // columns: basis of M1 in M-coordinates
  IntMatrix complement{0, 0};  // columns: lattice complement (not yet L-stable)
  IntMatrix basis{0, 0};
  IntMatrix L1{0, 0}, X{0, 0}, L2{0, 0};

  std::size_t sub_rank() const { return sub.cols(); }
  std::size_t quotient_rank() const { return complement.cols(); }
};

/// Requires span(sub) to be L-stable and pure; throws StructuralError with a
/// witness otherwise.
inline ModuleSES build_ses(const CyclicModule& M, const std::vector<IntVec>& sub_basis) {
  const std::size_t r = M.rank(), k = sub_basis.size();
  ModuleSES s;
  s.p = M.p;
  s.sub = IntMatrix::from_columns(sub_basis, r);
  if (k > 0) {
    if (zlat::rank(s.sub) != k) throw StructuralError("build_ses: submodule basis is dependent");
    for (std::size_t i = 0; i < k; ++i)
      if (!zlat::solve_integer(s.sub, M.L * sub_basis[i]))
        throw StructuralError("build_ses: submodule not stable, image of " + zlat::vec_str(sub_basis[i]) + " is " +
                              zlat::vec_str(M.L * sub_basis[i]));
    auto snf = zlat::smith_normal_form(s.sub);
    for (auto d : snf.invariant_factors())
      if (d != 1) throw StructuralError("build_ses: submodule not pure (invariant factor " + std::to_string(d) + ")");
    // U S V = D with D = [I; 0], so the first k columns of U^-1 span S and the
    // rest complete it to a basis.
    IntMatrix Ui = zlat::unimodular_inverse(snf.U);
    std::vector<IntVec> comp;
    for (std::size_t j = k; j < r; ++j) comp.push_back(Ui.column(j));
    s.complement = IntMatrix::from_columns(comp, r);
  } else {
    s.sub = IntMatrix(r, 0);
    s.complement = IntMatrix::identity(r);
  }
  std::vector<IntVec> cols = sub_basis;
  for (std::size_t j = 0; j < s.complement.cols(); ++j) cols.push_back(s.complement.column(j));
  s.basis = cols.empty() ? IntMatrix(0, 0) : IntMatrix::from_columns(cols, r);
  if (r > 0 && !zlat::is_unimodular(s.basis)) throw StructuralError("build_ses: adapted basis not unimodular");
  IntMatrix Lb = r > 0 ? zlat::unimodular_inverse(s.basis) * M.L * s.basis : IntMatrix(0, 0);
  const std::size_t q = r - k;
  s.L1 = IntMatrix(k, k);
  s.X = IntMatrix(k, q);
  s.L2 = IntMatrix(q, q);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      if (i < k && j < k) s.L1(i, j) = Lb(i, j);
      else if (i < k) s.X(i, j - k) = Lb(i, j);
      else if (j >= k) s.L2(i - k, j - k) = Lb(i, j);
      else if (Lb(i, j) != 0) throw StructuralError("build_ses: lower-left block nonzero");
    }
  return s;
}

struct SplitResult {
  IntMatrix conj1{0, 0};  // P1: M1-coordinates, P1^-1 L1 P1 = companion
  IntMatrix conj2{0, 0};  // P2: quotient coordinates
  ZOmegaElem lift_scale;  // x with x * pi(m0) = standard generator of M2
  ZOmegaElem kappa;       // correction m = x.m0 + kappa.s1
  IntVec s1;              // Z[omega]-generator of M1 in M-coordinates
  IntVec m;               // Z[omega]-generator of the complement
  IntMatrix new_basis{0, 0};  // columns: s1, L s1, ..., m, L m, ...
  IntMatrix new_action{0, 0};
};

/// Krylov columns c, Lc, ..., L^{p-2} c.
inline IntMatrix krylov_columns(const IntMatrix& L, const IntVec& c, std::int64_t p) { return mono::krylov(L, c, p); }

inline std::int64_t max_norm(const IntMatrix& m) {
  std::int64_t r = 0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r = std::max(r, m(i, j) < 0 ? -m(i, j) : m(i, j));
  return r;
}

/// Splits a sequence whose outer terms are free of rank one over Z[omega].
/// The complement generator is m = x.m0 + kappa.s1 with m0 a lift of the
/// standard generator of M2, x solving x * pi(m0) = g2 over Z[omega], and kappa from
/// a box search minimizing the max-norm of the Krylov basis of m, ties broken
/// lexicographically on kappa. Returns nothing if the search fails.
inline std::optional<SplitResult> split_ses(const CyclicModule& M, const ModuleSES& s,
                                            const std::optional<IntVec>& preferred_sub = std::nullopt,
                                            std::int64_t kappa_bound = 2) {
  const std::int64_t p = M.p;
  if (!annihilation_check(M)) return std::nullopt;
  const std::size_t k = s.sub_rank(), q = s.quotient_rank();
  if (static_cast<std::int64_t>(k) != p - 1 || static_cast<std::int64_t>(q) != p - 1) return std::nullopt;
  auto P1 = isomorphic_to_standard({s.L1, p}, preferred_sub);
  auto P2 = isomorphic_to_standard({s.L2, p});
  if (!P1 || !P2) return std::nullopt;
  SplitResult r;
  r.conj1 = *P1;
  r.conj2 = *P2;
  r.s1 = s.sub * P1->column(0);
  // m0 lifts the standard generator g2 = P2 e_0 of M2; its Z[omega]-coordinate
  // relative to g2 is recomputed rather than assumed.
  IntVec pim0 = P2->column(0);
  IntVec m0 = s.complement * pim0;
  auto c = zlat::solve_integer(*P2, pim0);
  if (!c) return std::nullopt;
  ZOmegaElem cz(p, *c);
  auto x = cyclo::zomega_solve({{cz}}, {ZOmegaElem::constant(p, 1)});
  if (!x) return std::nullopt;
  r.lift_scale = (*x)[0];
  CyclicModule Mm = M;
  IntVec base = Mm.eval(r.lift_scale) * m0;
  // kappa search
  std::optional<std::pair<std::int64_t, IntVec>> best;
  IntVec kv(static_cast<std::size_t>(p - 1), -kappa_bound);
  for (;;) {
    IntVec mm = zlat::vec_add(base, Mm.eval(ZOmegaElem(p, kv)) * r.s1);
    IntMatrix B = zlat::stack_cols(krylov_columns(M.L, r.s1, p), krylov_columns(M.L, mm, p));
    if (zlat::is_unimodular(B)) {
      std::int64_t nrm = max_norm(B);
      std::pair<std::int64_t, IntVec> cand{nrm, kv};
      if (!best || cand < *best) best = cand;
    }
    std::size_t i = 0;
    while (i < kv.size() && kv[i] == kappa_bound) kv[i++] = -kappa_bound;
    if (i == kv.size()) break;
    ++kv[i];
  }
  if (!best) return std::nullopt;
  r.kappa = ZOmegaElem(p, best->second);
  r.m = zlat::vec_add(base, Mm.eval(r.kappa) * r.s1);
  r.new_basis = zlat::stack_cols(krylov_columns(M.L, r.s1, p), krylov_columns(M.L, r.m, p));
  r.new_action = zlat::unimodular_inverse(r.new_basis) * M.L * r.new_basis;
  return r;
}

/// Block-diagonal companion form expected after a successful split.
inline IntMatrix double_companion(std::int64_t p) {
  IntMatrix c = cyclo::companion_phi(p);
  const std::size_t d = c.rows();
  IntMatrix out(2 * d, 2 * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      out(i, j) = c(i, j);
      out(d + i, d + j) = c(i, j);
    }
  return out;
}

inline bool split_verified(const CyclicModule& M, const SplitResult& r) {
  return zlat::is_unimodular(r.new_basis) && r.new_action == double_companion(M.p) &&
         M.L * r.new_basis == r.new_basis * r.new_action;
}

struct MonomialBasisOut {
  std::vector<std::string> names;    // Z1.., W1..
  std::vector<IntVec> exponents;     // in the module's coordinates
  mono::MonomialGroupAction action;  // generator action rewritten on Z, W
  bool matches_expected = false;
};

/// Z_i = s_i, W_i = m_i as monomials in the module's variables; re-derives the
/// action of the cyclic generator multiplicatively (scalars included) and
/// compares with Z_1 -> ... -> Z_{p-1} -> (Z_1...Z_{p-1})^-1, same for W.
inline MonomialBasisOut monomial_basis_out(const SplitResult& r, const mono::MonomialGroupAction& a,
                                           std::size_t gen_index, std::int64_t p) {
  MonomialBasisOut out;
  const std::size_t d = static_cast<std::size_t>(p - 1);
  for (std::size_t i = 0; i < d; ++i) out.names.push_back("Z" + std::to_string(i + 1));
  for (std::size_t i = 0; i < d; ++i) out.names.push_back("W" + std::to_string(i + 1));
  out.exponents = r.new_basis.columns();
  out.action = mono::induced_on_basis(a, out.exponents, out.names);
  mono::MonomialAutomorphism expected(double_companion(p), IntVec(2 * d, 0), a.modulus);
  out.matches_expected = out.action.gens[gen_index] == expected;
  return out;
}

}  // namespace noether::zmod
