#pragma once

// Shared plumbing for the case scripts: one Context per family instance, and
// helpers that run a check and append the resulting step to its certificate.

#include <string>
#include <vector>

#include "noether/birational.hpp"
#include "noether/certificate.hpp"
#include "noether/expect.hpp"
#include "noether/fpgroups.hpp"
#include "noether/gates.hpp"
#include "noether/monomial.hpp"
#include "noether/oracle.hpp"
#include "noether/regrep.hpp"

namespace noether::cases {

using cert::json;
using cert::Status;
using cyclo::RootOfUnity;
using fp::Elem;
using fp::PermGroup;
using mono::LatticeBasis;
using mono::MonomialAutomorphism;
using mono::MonomialGroupAction;
using zlat::IntMatrix;
using zlat::IntVec;

struct Context {
  fp::FamilySpec spec;
  fp::Presentation pr;
  PermGroup G;
  cert::Certificate cert;
  std::int64_t oracle_depth = 6;
  std::int64_t N = 1;  // p^{n-2}: order of the roots of unity available
  std::string prefix;  // anchor prefix, e.g. "p-odd:case-1"

  std::string anchor(const std::string& step = "") const { return step.empty() ? prefix : prefix + ":" + step; }
  Elem gen(const std::string& name) const { return G.gen(static_cast<std::size_t>(pr.gen_index(name))); }
};

inline std::vector<std::string> names(const std::string& base, std::int64_t k, std::int64_t start = 0) {
  std::vector<std::string> v;
  for (std::int64_t i = 0; i < k; ++i) v.push_back(base + std::to_string(i + start));
  return v;
}

inline std::vector<std::string> concat_names(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> v;
  for (const auto& p : parts) v.insert(v.end(), p.begin(), p.end());
  return v;
}

inline std::vector<std::size_t> range(std::size_t from, std::size_t to) {
  std::vector<std::size_t> v;
  for (std::size_t i = from; i < to; ++i) v.push_back(i);
  return v;
}

inline std::vector<Elem> powers(const PermGroup& G, Elem g) {
  std::vector<Elem> v;
  Elem x = G.identity();
  do {
    v.push_back(x);
    x = G.mul(x, g);
  } while (x != G.identity());
  return v;
}

/// Presentation, permutation realization, and the structural claims of the
/// classification. Returns false if the group could not be realized.
inline bool realize_and_claims(Context& c) {
  c.pr = fp::build_presentation(c.spec);
  c.G = fp::realize(c.pr);
  json w;
  w["order"] = c.G.order();
  w["expected_order"] = fp::ipow(c.spec.p, c.spec.n);
  w["generators"] = c.pr.generators;
  std::vector<std::string> rels;
  for (const auto& r : c.pr.relators) rels.push_back(c.pr.word_str(r));
  w["relators"] = rels;
  bool order_ok = static_cast<std::int64_t>(c.G.order()) == fp::ipow(c.spec.p, c.spec.n);
  c.cert.add("realize", order_ok, c.anchor("realize"), w);
  auto cr = fp::verify_family_claims(c.spec, c.G);
  json cw;
  cw["non_abelian"] = cr.non_abelian;
  if (cr.noncommuting_a)
    cw["noncommuting_pair"] = {c.G.name(*cr.noncommuting_a), c.G.name(*cr.noncommuting_b)};
  cw["element_of_order_p^(n-2)"] = cr.order_p_n2_witness ? c.G.name(*cr.order_p_n2_witness) : "none";
  cw["element_of_order_p^(n-1)"] = cr.order_p_n1_witness ? c.G.name(*cr.order_p_n1_witness) : "none";
  cw["exponent"] = cr.exponent;
  json spec = json::array();
  for (auto [o, k] : cr.spectrum) spec.push_back({o, k});
  cw["order_spectrum"] = spec;
  c.cert.add("claims", cr.ok(), c.anchor("claims"), cw);
  return order_ok;
}

struct Eigen {
  std::string label;  // e.g. "sigma.Y2 = zeta Y2"
  Elem g;
  RootOfUnity c;
};

inline bool eigen_step(Context& c, const std::string& name, const std::string& anchor, const rep::GroupVector& y,
                       const std::vector<Eigen>& eqs) {
  json w = json::object();
  bool all = true;
  for (const auto& e : eqs) {
    bool ok = rep::is_eigenvector(c.G, y, e.g, e.c);
    w[e.label] = ok;
    all = all && ok;
  }
  w["support_size"] = y.support_size();
  c.cert.add(name, all, anchor, w);
  return all;
}

inline bool table_step(Context& c, const std::string& name, const std::string& anchor,
                       const MonomialGroupAction& computed, const std::vector<std::string>& gens,
                       const std::vector<MonomialAutomorphism>& expected) {
  auto cmp = expect::compare(computed, gens, expected);
  c.cert.add(name, cmp.match, anchor, cmp.witness);
  return cmp.match;
}

/// A computed table with nothing printed to compare against.
inline void record_table(Context& c, const std::string& name, const std::string& anchor,
                         const MonomialGroupAction& a) {
  c.cert.add(name, true, anchor, {{"computed", a.str()}});
}

/// The automorphism restricted to variables idx (which it must preserve).
inline MonomialAutomorphism restrict_to(const MonomialAutomorphism& g, const std::vector<std::size_t>& idx) {
  std::vector<std::pair<IntVec, std::int64_t>> imgs;
  for (std::size_t j : idx) {
    IntVec col = g.matrix().column(j);
    IntVec sub(idx.size(), 0);
    for (std::size_t i = 0; i < col.size(); ++i) {
      if (col[i] == 0) continue;
      auto it = std::find(idx.begin(), idx.end(), i);
      if (it == idx.end()) throw StructuralError("restrict_to: variable set not preserved");
      sub[static_cast<std::size_t>(it - idx.begin())] = col[i];
    }
    imgs.emplace_back(sub, g.scalars()[j]);
  }
  return MonomialAutomorphism::from_images(imgs, g.modulus());
}

inline MonomialGroupAction restrict_action(const MonomialGroupAction& a, const std::vector<std::size_t>& idx) {
  MonomialGroupAction out;
  out.gen_names = a.gen_names;
  out.modulus = a.modulus;
  for (auto i : idx) out.vars.push_back(a.vars[i]);
  for (const auto& g : a.gens) out.gens.push_back(restrict_to(g, idx));
  return out;
}

/// x_1 -> x_2 -> ... -> x_{p-1} -> (x_1 ... x_{p-1})^-1, no scalars.
inline MonomialAutomorphism standard_cycle(std::int64_t p, std::int64_t m) {
  return {cyclo::companion_phi(p), IntVec(static_cast<std::size_t>(p - 1), 0), m};
}

/// The t-substitution linearizes the standard cyclic action on `vars`.
inline bool linearization_step(Context& c, const std::string& name, const std::string& anchor,
                               const MonomialAutomorphism& g, const std::vector<std::string>& vars,
                               const std::string& base) {
  const std::int64_t p = static_cast<std::int64_t>(vars.size()) + 1;
  json w;
  bool standard = g == standard_cycle(p, g.modulus());
  w["action"] = g.str(vars);
  w["standard_cycle"] = standard;
  bool ok = false;
  if (standard) {
    auto tt = bir::build_t_substitution(p, base);
    auto sub = bir::from_monomial(g, tt.vars, 1);
    auto lin = bir::verify_linearization(sub, tt);
    auto aff = bir::affine_shift_check(sub, tt);
    w["t_images"] = lin.images;
    w["t0_rule"] = lin.t0_ok;
    w["sum_is_one"] = lin.sum_ok;
    w["round_trip"] = lin.roundtrip_ok;
    w["shifted_images"] = aff.images;
    w["affine_shift"] = aff.ok;
    ok = lin.ok() && aff.ok;
  }
  c.cert.add(name, ok, anchor, w);
  return ok;
}

/// Claimed generators of a fixed lattice: containment, index 1, and the
/// brute-force box comparison whenever the rank is at most 4.
inline bool claim_step(Context& c, const std::string& name, const std::string& anchor, const LatticeBasis& claimed,
                       const std::vector<MonomialAutomorphism>& auts, std::size_t rank,
                       const std::vector<std::string>& vars) {
  auto gc = mono::check_generators(claimed, auts, rank);
  json w;
  json cl = json::array();
  for (const auto& e : claimed) cl.push_back(mono::monomial_str(e, vars));
  w["claimed"] = cl;
  w["contained"] = gc.contained;
  w["index"] = gc.index;
  bool ok = gc.contained && gc.index == 1;
  auto orc = oracle::compare_fixed_lattice(auts, rank, c.oracle_depth);
  if (rank <= 4) {
    w["oracle"] = {{"bound", c.oracle_depth},
                   {"agrees", orc.agrees},
                   {"invariant_vectors", orc.invariant_count},
                   {"reason", orc.reason}};
    ok = ok && orc.agrees;
  } else {
    w["oracle"] = {{"bound", c.oracle_depth}, {"skipped", orc.reason}};
  }
  c.cert.add(name, ok, anchor, w);
  return ok;
}

/// Lattice oracle alone (for computed, not claimed, lattices).
inline bool oracle_step(Context& c, const std::string& name, const std::string& anchor,
                        const std::vector<MonomialAutomorphism>& auts, std::size_t rank) {
  if (rank > 4) return true;
  auto orc = oracle::compare_fixed_lattice(auts, rank, c.oracle_depth);
  c.cert.add(name, orc.agrees, anchor,
             {{"bound", c.oracle_depth}, {"invariant_vectors", orc.invariant_count}, {"reason", orc.reason}});
  return orc.agrees;
}

inline bool gate_step(Context& c, const std::string& name, const std::string& anchor, const cert::GateResult& g) {
  c.cert.add_gate(name, g.ok, anchor, g.witness);
  return g.ok;
}

/// The regular-representation subspace spanned by the basis is faithful and
/// the table extracted from it has full rank: hypotheses of the reduction
/// from K(G) to the subspace.
inline bool faithful_subspace_gate(Context& c, const std::string& anchor, const rep::MonomialPermTable& t,
                                   const rep::TranslateResult& tr) {
  auto ker = rep::action_kernel(c.G, t);
  cert::GateResult g;
  g.ok = ker.size() == 1 && tr.independent;
  g.witness = {{"dimension", tr.vectors.size()},
               {"rank", tr.rank},
               {"kernel", cert::names_of(c.G, ker)}};
  return gate_step(c, "gate:faithful-subspace", anchor, g);
}

/// One-variable extension for each listed variable in turn: L grows by the variables
/// already adjoined.
inline bool one_variable_chain(Context& c, const std::string& anchor, const MonomialGroupAction& a,
                               std::vector<std::size_t> L, const std::vector<std::size_t>& xs) {
  bool all = true;
  for (std::size_t x : xs) {
    auto g = cert::gate_affine_one_variable(a, L, x);
    all = gate_step(c, "gate:one-variable:" + a.vars[x], anchor, g) && all;
    L.push_back(x);
  }
  return all;
}

inline IntVec ratio_vector(std::size_t dim, std::size_t num, std::size_t den) {
  IntVec e(dim, 0);
  e[num] += 1;
  e[den] -= 1;
  return e;
}

}  // namespace noether::cases
