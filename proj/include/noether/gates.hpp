#pragma once

// Hypothesis checks for the rationality criteria cited along the proofs. A
// gate verifies exactly the hypotheses of the invoked criterion on the
// concrete instance and returns a witness; the criterion itself is trusted.

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "noether/certificate.hpp"
#include "noether/fpgroups.hpp"
#include "noether/monomial.hpp"

namespace noether::cert {

using fp::Elem;
using fp::PermGroup;
using mono::MonomialAutomorphism;
using mono::MonomialGroupAction;
using zlat::IntVec;

struct GateResult {
  bool ok = false;
  json witness = json::object();
};

inline std::int64_t group_exponent(const PermGroup& G) {
  std::int64_t e = 1;
  for (Elem g = 0; g < G.order(); ++g) e = std::lcm(e, G.element_order(g));
  return e;
}

inline std::vector<std::string> names_of(const PermGroup& G, const std::vector<Elem>& es) {
  std::vector<std::string> out;
  for (Elem e : es) out.push_back(G.name(e));
  return out;
}

/// Z[zeta_m] is a UFD exactly for these m (m != 2 mod 4 representatives and
/// their doubles).
inline bool zeta_ring_is_ufd(std::int64_t m) {
  static const std::int64_t list[] = {1,  2,  3,  4,  5,  6,  7,  8,  9,  10, 11, 12, 13, 14, 15, 16, 17, 18,
                                      19, 20, 21, 22, 24, 25, 26, 27, 28, 30, 32, 33, 34, 35, 36, 38, 40, 42,
                                      44, 45, 48, 50, 54, 60, 66, 70, 84, 90};
  return std::find(std::begin(list), std::end(list), m) != std::end(list);
}

/// Order <= p^4, non-abelian, exponent p^e with zeta_{p^e} available.
inline GateResult gate_small_order_exponent(const PermGroup& G, std::int64_t p, std::int64_t root_order) {
  GateResult r;
  std::int64_t ex = group_exponent(G);
  bool small = static_cast<std::int64_t>(G.order()) <= fp::ipow(p, 4);
  r.ok = small && !G.is_abelian() && root_order % ex == 0;
  r.witness = {{"order", G.order()}, {"exponent", ex}, {"root_order_available", root_order}};
  return r;
}

inline std::int64_t subgroup_exponent(const PermGroup& G, const std::vector<Elem>& elems) {
  std::int64_t e = 1;
  for (Elem g : elems) e = std::lcm(e, G.element_order(g));
  return e;
}

/// H = <s, t> with <s> normal in H and H/<s> generated by t.
inline bool metacyclic_subgroup_check(const PermGroup& G, Elem s, Elem t) {
  auto H = fp::closure(G, {s, t});
  auto S = fp::closure(G, {s});
  if (!std::binary_search(S.begin(), S.end(), G.conj(s, t))) return false;
  return static_cast<std::size_t>(fp::order_mod(G, t, S)) * S.size() == H.size();
}

/// The subgroup <s, t> is metacyclic (<s> normal), non-abelian, and its
/// exponent divides the available root order.
inline GateResult gate_metacyclic_subgroup(const PermGroup& G, Elem s, Elem t, std::int64_t root_order) {
  GateResult r;
  auto H = fp::closure(G, {s, t});
  std::int64_t ex = subgroup_exponent(G, H);
  bool meta = metacyclic_subgroup_check(G, s, t);
  bool nonab = !G.commute(s, t);
  r.ok = meta && nonab && root_order % ex == 0;
  r.witness = {{"normal_cyclic", G.name(s)}, {"other", G.name(t)},      {"order", H.size()},
               {"metacyclic", meta},         {"non_abelian", nonab},   {"exponent", ex},
               {"root_order_available", root_order}};
  return r;
}

/// Generated by s, t with <s> normal; non-abelian; exponent covered.
inline GateResult gate_metacyclic(const PermGroup& G, Elem s, Elem t, std::int64_t root_order) {
  GateResult r = gate_metacyclic_subgroup(G, s, t, root_order);
  bool whole = fp::closure(G, {s, t}).size() == G.order();
  r.witness["generates_G"] = whole;
  r.ok = r.ok && whole;
  return r;
}

/// G = H x <c> internally (c central, trivial intersection, orders multiply),
/// and both factors were shown rational by the gates passed in.
inline GateResult gate_direct_product(const PermGroup& G, const std::vector<Elem>& h_gens, Elem c, bool h_rational,
                                      bool c_rational) {
  GateResult r;
  bool dp = fp::direct_product_check(G, h_gens, c);
  r.ok = dp && h_rational && c_rational;
  r.witness = {{"H", names_of(G, h_gens)},
               {"C", G.name(c)},
               {"C_order", G.element_order(c)},
               {"direct_product", dp},
               {"H_rational", h_rational},
               {"C_rational", c_rational}};
  return r;
}

/// Abelian group given by generators inside G; exponent covered.
inline GateResult gate_abelian_group(const PermGroup& G, const std::vector<Elem>& gens, std::int64_t root_order) {
  GateResult r;
  auto H = fp::closure(G, gens);
  std::int64_t ex = subgroup_exponent(G, H);
  bool ab = fp::subgroup_is_abelian(G, gens);
  r.ok = ab && root_order % ex == 0;
  r.witness = {{"group", names_of(G, gens)}, {"order", H.size()}, {"abelian", ab}, {"exponent", ex},
               {"root_order_available", root_order}};
  return r;
}

inline GateResult gate_order32(const PermGroup& G, std::int64_t root_order) {
  GateResult r;
  std::int64_t ex = group_exponent(G);
  r.ok = G.order() == 32 && !G.is_abelian() && root_order % ex == 0;
  r.witness = {{"order", G.order()}, {"exponent", ex}, {"root_order_available", root_order}};
  return r;
}

/// Subgroup H (given by generators) non-abelian of order p^m, m >= 3, with an
/// element of order p^{m-1}; zeta_{p^{m-2}} available.
inline GateResult gate_cyclic_index_p(const PermGroup& G, const std::vector<Elem>& h_gens, std::int64_t p,
                                      std::int64_t root_order) {
  GateResult r;
  auto H = fp::closure(G, h_gens);
  std::int64_t target = static_cast<std::int64_t>(H.size()) / p;
  std::optional<Elem> w;
  for (Elem h : H)
    if (G.element_order(h) == target) {
      w = h;
      break;
    }
  bool nonab = !fp::subgroup_is_abelian(G, h_gens);
  std::int64_t need = target / p;
  r.ok = w && nonab && H.size() >= static_cast<std::size_t>(p * p * p) && root_order % need == 0;
  r.witness = {{"subgroup", names_of(G, h_gens)}, {"order", H.size()}, {"non_abelian", nonab}};
  if (w) r.witness["cyclic_index_p_generator"] = G.name(*w);
  return r;
}

/// Abelian acting group (given by its generators' automorphisms) whose
/// exponent divides the available root order, acting linearly.
inline GateResult gate_abelian_linear(const std::vector<MonomialAutomorphism>& gens, std::int64_t root_order,
                                      bool linearized, const std::string& how) {
  GateResult r;
  bool ab = true;
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (!(compose(gens[i], gens[j]) == compose(gens[j], gens[i]))) ab = false;
  std::int64_t ex = 1;
  for (const auto& g : gens) {
    std::int64_t o = 1;
    auto x = g;
    while (!x.is_identity()) {
      x = compose(x, g);
      if (++o > 1'000'000) throw ResourceError("gate_abelian_linear: automorphism of unbounded order");
    }
    ex = std::lcm(ex, o);
  }
  r.ok = ab && linearized && root_order % ex == 0;
  r.witness = {{"abelian", ab}, {"exponent", ex}, {"linear", linearized}, {"linearization", how}};
  return r;
}

/// Abelian normal H with G/H cyclic of order m, Z[zeta_m] a UFD, exponent of
/// G covered by the available roots of unity.
inline GateResult gate_abelian_normal_cyclic_quotient(const PermGroup& G, const std::vector<Elem>& h_gens,
                                                      std::int64_t root_order) {
  GateResult r;
  auto sp = fp::subgroup_props(G, h_gens);
  std::int64_t ex = group_exponent(G);
  bool abel = fp::subgroup_is_abelian(G, h_gens);
  r.witness = {{"H", names_of(G, h_gens)}, {"abelian", abel}, {"normal", sp.is_normal}, {"exponent", ex}};
  if (!abel || !sp.is_normal || !sp.quotient_cyclic.value_or(false)) return r;
  std::int64_t m = *sp.quotient_order;
  r.witness["quotient_order"] = m;
  r.witness["ufd"] = zeta_ring_is_ufd(m);
  r.ok = zeta_ring_is_ufd(m) && root_order % ex == 0;
  return r;
}

/// Searches index-p^k normal abelian subgroups with cyclic quotient, smallest
/// quotient first; returns generators.
inline std::optional<std::vector<Elem>> find_abelian_normal_cyclic(const PermGroup& G, std::int64_t p) {
  for (std::int64_t m = p; m <= static_cast<std::int64_t>(G.order()); m *= p)
    for (auto& cq : fp::cyclic_quotients(G, m)) {
      auto gens = fp::generating_set(G, cq.kernel);
      if (fp::subgroup_is_abelian(G, gens)) return gens;
    }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Field-extension gates on monomial actions

inline bool supported_in(const IntVec& e, const std::vector<std::size_t>& idx) {
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i] != 0 && std::find(idx.begin(), idx.end(), i) == idx.end()) return false;
  return true;
}

/// For each generator: every L-variable maps into K(L) (hypothesis (i)).
inline bool l_invariant(const MonomialGroupAction& a, const std::vector<std::size_t>& L) {
  for (const auto& g : a.gens)
    for (std::size_t j : L)
      if (!supported_in(g.matrix().column(j), L)) return false;
  return true;
}

/// x_j -> c * (monomial in L) * x_{pi(j)}: linear over L. Returns pi per
/// generator, or nothing.
inline std::optional<std::vector<std::vector<std::size_t>>> affine_permutations(const MonomialGroupAction& a,
                                                                                const std::vector<std::size_t>& L,
                                                                                const std::vector<std::size_t>& X) {
  std::vector<std::vector<std::size_t>> perms;
  for (const auto& g : a.gens) {
    std::vector<std::size_t> pi;
    for (std::size_t j : X) {
      IntVec col = g.matrix().column(j);
      std::optional<std::size_t> target;
      for (std::size_t t = 0; t < X.size(); ++t) {
        std::int64_t c = col[X[t]];
        if (c == 0) continue;
        if (c != 1 || target) return std::nullopt;
        target = t;
      }
      if (!target) return std::nullopt;
      IntVec rest = col;
      rest[X[*target]] = 0;
      if (!supported_in(rest, L)) return std::nullopt;
      pi.push_back(*target);
    }
    perms.push_back(std::move(pi));
  }
  return perms;
}

inline std::vector<std::string> var_names(const MonomialGroupAction& a, const std::vector<std::size_t>& idx) {
  std::vector<std::string> v;
  for (auto i : idx) v.push_back(a.vars.at(i));
  return v;
}

/// Two adjoined variables whose kernel-invariant lattice is not diagonal.
/// Looks for a basis {f, a} of that lattice with x^f mapped to an L-monomial
/// multiple of itself by every generator, and a twist Y = zeta^k * u^e * x^a
/// (u^e in L) with g(Y) = Y or g(Y) = 1/Y for every generator. Then
/// v = (1 - Y)/(1 + Y) goes to +v or -v, and L(x)^N = L(x^f, v) with affine
/// images.
inline std::optional<json> cayley_reduction(const MonomialGroupAction& a, const std::vector<std::size_t>& L,
                                            const std::vector<std::size_t>& X, const mono::LatticeBasis& lam) {
  constexpr std::int64_t bx = 4, bl = 2;
  const std::size_t rk = a.rank();
  std::int64_t det = std::llabs(lam[0][0] * lam[1][1] - lam[0][1] * lam[1][0]);
  auto embed = [&](std::int64_t c0, std::int64_t c1) {
    IntVec e(rk, 0);
    e[X[0]] = c0;
    e[X[1]] = c1;
    return e;
  };
  auto in_lam = [&](std::int64_t c0, std::int64_t c1) { return zlat::lattice_contains(lam, {IntVec{c0, c1}}, 2); };
  for (std::int64_t f0 = -bx; f0 <= bx; ++f0)
    for (std::int64_t f1 = -bx; f1 <= bx; ++f1) {
      if ((f0 == 0 && f1 == 0) || !in_lam(f0, f1)) continue;
      IntVec fe = embed(f0, f1);
      bool fixed = true;
      for (const auto& g : a.gens) {
        IntVec img = g.apply(fe).second;
        if (img[X[0]] != f0 || img[X[1]] != f1 || !supported_in(zlat::vec_sub(img, fe), L)) fixed = false;
      }
      if (!fixed) continue;
      for (std::int64_t a0 = -bx; a0 <= bx; ++a0)
        for (std::int64_t a1 = -bx; a1 <= bx; ++a1) {
          if (std::llabs(f0 * a1 - f1 * a0) != det || !in_lam(a0, a1)) continue;
          IntVec e(L.size(), -bl);
          for (;;) {
            IntVec y = embed(a0, a1);
            for (std::size_t i = 0; i < L.size(); ++i) y[L[i]] = e[i];
            for (std::int64_t kk = 0; kk < a.modulus; ++kk) {
              std::string eps;
              for (const auto& g : a.gens) {
                auto [sc, img] = g.apply(y);
                if (img == y && zlat::mod_floor(sc, a.modulus) == 0) eps += '+';
                else if (img == zlat::vec_scale(y, -1) && zlat::mod_floor(sc + 2 * kk, a.modulus) == 0) eps += '-';
                else break;
              }
              if (eps.size() != a.gens.size()) continue;
              json w;
              w["fixed_monomial"] = mono::monomial_str(fe, a.vars);
              w["twist"] = "z" + std::to_string(a.modulus) + "^" + std::to_string(kk) + "*" +
                           mono::monomial_str(y, a.vars);
              json signs = json::object();
              for (std::size_t i = 0; i < a.gens.size(); ++i)
                signs[a.gen_names.at(i)] = eps[i] == '+' ? "v->v" : "v->-v";
              w["cayley_images"] = signs;
              return w;
            }
            std::size_t i = 0;
            while (i < e.size() && e[i] == bl) e[i++] = -bl;
            if (i == e.size()) break;
            ++e[i];
          }
        }
    }
  return std::nullopt;
}

struct AffineFaithfulSpec {
  std::vector<std::size_t> L;      // monomial generators of L
  std::vector<std::size_t> X;      // adjoined monomial variables (may be empty)
  std::vector<std::size_t> field;  // monomial generators of L(new variables); default L and X
  int max_mode = 1;
  // non-monomial adjoined variables: result of their affine-shape check
  std::optional<bool> external_affine;
  std::string external_description;
};

/// Faithfulness, in increasing order of indirection:
///  1  G acts faithfully on L;
///  2  the kernel on L equals the kernel on the whole field, so G/kernel acts
///     faithfully on L and has the same invariants;
///  3  the kernel N on L scales each adjoined x_j by a root of unity; the
///     N-invariant monomials in the x's form a diagonal lattice sum k_j x_j
///     whose exponents are respected by every generator's permutation, so
///     G/N acts on L(x_j^{k_j}) faithfully on L with affine images;
///  4  as 3 for two variables with a non-diagonal lattice, via a Cayley
///     transform of a twisted lattice monomial.
inline GateResult gate_affine_faithful(const PermGroup& G, const MonomialGroupAction& a, AffineFaithfulSpec s) {
  GateResult r;
  if (s.field.empty()) {
    s.field = s.L;
    s.field.insert(s.field.end(), s.X.begin(), s.X.end());
  }
  r.witness["L"] = var_names(a, s.L);
  r.witness["adjoined"] = var_names(a, s.X);
  bool inv = l_invariant(a, s.L);
  r.witness["L_invariant"] = inv;
  auto perms = affine_permutations(a, s.L, s.X);
  bool affine = perms.has_value() && s.external_affine.value_or(true);
  r.witness["affine_shape"] = affine;
  if (s.external_affine) r.witness["affine_shape_detail"] = s.external_description;
  auto kL = mono::action_kernel(G, a, s.L);
  auto kF = mono::action_kernel(G, a, s.field);
  r.witness["kernel_on_L"] = names_of(G, kL);
  r.witness["kernel_on_field"] = names_of(G, kF);
  if (!inv || !affine) return r;
  if (kL.size() == 1) {
    r.witness["mode"] = "faithful";
    r.ok = true;
    return r;
  }
  if (s.max_mode >= 2 && kL == kF) {
    r.witness["mode"] = "kernel-quotient";
    r.ok = true;
    return r;
  }
  if (s.max_mode < 3 || s.X.empty()) {
    r.witness["mode"] = "none";
    return r;
  }
  // mode 3
  auto acts = mono::element_automorphisms(G, a);
  std::vector<MonomialAutomorphism> diag;
  for (Elem e : kL) {
    IntVec sc;
    for (std::size_t j : s.X) {
      IntVec ej(a.rank(), 0);
      ej[j] = 1;
      auto [c, img] = acts[e].apply(ej);
      if (img != ej) {
        r.witness["mode"] = "none";
        r.witness["non_diagonal_kernel_element"] = G.name(e);
        return r;
      }
      sc.push_back(c);
    }
    diag.emplace_back(zlat::IntMatrix::identity(s.X.size()), sc, a.modulus);
  }
  auto lam = zlat::hermite_basis(mono::fixed_lattice(diag, s.X.size()), s.X.size());
  std::vector<std::int64_t> k(s.X.size(), 0);
  bool diagonal = lam.size() == s.X.size();
  for (const auto& row : lam) {
    std::size_t nz = 0, at = 0;
    for (std::size_t i = 0; i < row.size(); ++i)
      if (row[i] != 0) {
        ++nz;
        at = i;
      }
    if (nz != 1) diagonal = false;
    else k[at] = row[at];
  }
  r.witness["kernel_invariant_exponents"] = k;
  bool respected = diagonal;
  if (diagonal)
    for (const auto& pi : *perms)
      for (std::size_t j = 0; j < pi.size(); ++j)
        if (k[pi[j]] != k[j]) respected = false;
  if (respected) {
    r.witness["mode"] = "kernel-diagonal-reduction";
    r.ok = true;
    return r;
  }
  json lw = json::array();
  for (const auto& row : lam) lw.push_back(zlat::vec_str(row));
  r.witness["kernel_invariant_lattice"] = lw;
  if (s.max_mode >= 4 && s.X.size() == 2 && lam.size() == 2) {
    if (auto c = cayley_reduction(a, s.L, s.X, lam)) {
      r.witness["mode"] = "kernel-cayley-reduction";
      r.witness["cayley"] = *c;
      r.ok = true;
      return r;
    }
  }
  r.witness["mode"] = "none";
  return r;
}

/// One adjoined variable x with g(x) = c * (monomial in L) * x for every
/// generator g, and L stable.
inline GateResult gate_affine_one_variable(const MonomialGroupAction& a, const std::vector<std::size_t>& L,
                                           std::size_t x) {
  GateResult r;
  bool inv = l_invariant(a, L);
  bool shape = true;
  for (const auto& g : a.gens) {
    IntVec col = g.matrix().column(x);
    if (col[x] != 1) shape = false;
    col[x] = 0;
    if (!supported_in(col, L)) shape = false;
  }
  r.ok = inv && shape;
  r.witness = {{"variable", a.vars.at(x)}, {"L", var_names(a, L)}, {"L_invariant", inv}, {"affine_shape", shape}};
  return r;
}

/// Monomial action on exactly two variables.
inline GateResult gate_rank2_monomial(const MonomialGroupAction& a) {
  GateResult r;
  r.ok = a.rank() == 2 && a.gens.size() > 0;
  r.witness = {{"variables", a.vars}, {"action", a.str()}};
  return r;
}

}  // namespace noether::cert
