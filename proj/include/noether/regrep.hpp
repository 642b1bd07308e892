#pragma once

// Vectors in the regular representation V* = sum_g K x(g), eigenvector
// constructions, translate bases and the induced monomial-permutation tables.

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "noether/cyclotomic.hpp"
#include "noether/error.hpp"
#include "noether/fpgroups.hpp"

namespace noether::rep {

using cyclo::CycloNumber;
using cyclo::RootOfUnity;
using fp::Elem;
using fp::PermGroup;

/// Sparse vector sum_h c_h x(h) over Q(zeta_N); never stores zero coefficients.
class GroupVector {
 public:
  explicit GroupVector(std::int64_t field_modulus = 1) : n_(field_modulus) {}

  static GroupVector basis(std::int64_t n, Elem h) {
    GroupVector v(n);
    v.c_.emplace(h, CycloNumber::one(n));
    return v;
  }

  std::int64_t field_modulus() const { return n_; }
  const std::map<Elem, CycloNumber>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  std::size_t support_size() const { return c_.size(); }

  CycloNumber at(Elem h) const {
    auto it = c_.find(h);
    return it == c_.end() ? CycloNumber::zero(n_) : it->second;
  }

  void add(Elem h, const CycloNumber& c) {
    if (c.is_zero()) return;
    auto it = c_.find(h);
    if (it == c_.end()) {
      c_.emplace(h, c);
      return;
    }
    it->second += c;
    if (it->second.is_zero()) c_.erase(it);
  }

  GroupVector& operator+=(const GroupVector& o) {
    for (const auto& [h, c] : o.c_) add(h, c);
    return *this;
  }
  friend GroupVector operator+(GroupVector a, const GroupVector& b) { return a += b; }
  friend GroupVector operator-(GroupVector a, const GroupVector& b) { return a += b.scaled(CycloNumber(cyclo::field(b.n_), -1)); }

  GroupVector scaled(const CycloNumber& s) const {
    GroupVector r(n_);
    if (s.is_zero()) return r;
    for (const auto& [h, c] : c_) r.c_.emplace(h, c * s);
    return r;
  }

  friend bool operator==(const GroupVector& a, const GroupVector& b) { return a.n_ == b.n_ && a.c_ == b.c_; }

  std::string str(const PermGroup& G) const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [h, c] : c_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << c.str() << ")x(" << G.name(h) << ")";
    }
    if (first) os << "0";
    return os.str();
  }

 private:
  std::int64_t n_;
  std::map<Elem, CycloNumber> c_;
};

/// g . x(h) = x(gh)
inline GroupVector act(const PermGroup& G, Elem g, const GroupVector& v) {
  GroupVector r(v.field_modulus());
  for (const auto& [h, c] : v.coeffs()) r.add(G.mul(g, h), c);
  return r;
}

/// sum over listed h of x(h * base)
inline GroupVector orbit_sum(const PermGroup& G, const std::vector<Elem>& elems, Elem base, std::int64_t field_modulus) {
  GroupVector r(field_modulus);
  for (Elem h : elems) r.add(G.mul(h, base), CycloNumber::one(field_modulus));
  return r;
}

/// Y = sum_{j<len} c^-j g^j . v, with g.Y = c.Y asserted.
inline GroupVector character_average(const PermGroup& G, const GroupVector& v, Elem g, const RootOfUnity& c,
                                     std::int64_t len) {
  const std::int64_t N = v.field_modulus();
  GroupVector y(N);
  GroupVector cur = v;
  for (std::int64_t j = 0; j < len; ++j) {
    y += cur.scaled(CycloNumber::from_root(N, c.pow(-j)));
    cur = act(G, g, cur);
  }
  if (y.is_zero())
    throw StructuralError("character average of " + G.name(g) + " with character " + c.str() + " is zero");
  if (!(act(G, g, y) == y.scaled(CycloNumber::from_root(N, c))))
    throw StructuralError("character average fails its eigen-equation for " + G.name(g));
  return y;
}

/// True iff g.v = c v exactly.
inline bool is_eigenvector(const PermGroup& G, const GroupVector& v, Elem g, const RootOfUnity& c) {
  return act(G, g, v) == v.scaled(CycloNumber::from_root(v.field_modulus(), c));
}

/// Exact rank over Q(zeta_N) by sparse Gaussian elimination.
inline std::size_t rank(std::vector<GroupVector> vs) {
  std::size_t r = 0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (vs[i].is_zero()) continue;
    auto [pivot, pc] = *vs[i].coeffs().begin();
    CycloNumber inv = pc.inverse();
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      CycloNumber cj = vs[j].at(pivot);
      if (cj.is_zero()) continue;
      vs[j] = vs[j] - vs[i].scaled(cj * inv);
    }
    ++r;
  }
  return r;
}

struct TranslateResult {
  std::vector<GroupVector> vectors;
  std::size_t rank = 0;
  bool independent = false;
};

/// translators[k] . v for each v (grouped by v), with exact rank.
inline TranslateResult translate_set(const PermGroup& G, const std::vector<GroupVector>& vecs,
                                     const std::vector<Elem>& translators) {
  TranslateResult r;
  for (const auto& v : vecs)
    for (Elem t : translators) r.vectors.push_back(act(G, t, v));
  r.rank = rank(r.vectors);
  r.independent = r.rank == r.vectors.size();
  return r;
}

/// translator^i . v for 0 <= i < count.
inline TranslateResult translate_basis(const PermGroup& G, const std::vector<GroupVector>& vecs, Elem translator,
                                       std::int64_t count) {
  std::vector<Elem> ts;
  Elem t = G.identity();
  for (std::int64_t i = 0; i < count; ++i) {
    ts.push_back(t);
    t = G.mul(translator, t);
  }
  return translate_set(G, vecs, ts);
}

// ---------------------------------------------------------------------------
// Monomial permutation tables

struct PermEntry {
  std::size_t target = 0;
  RootOfUnity scalar;
  friend bool operator==(const PermEntry& a, const PermEntry& b) {
    return a.target == b.target && a.scalar == b.scalar;
  }
};

/// g . b_i = scalar * b_target, one row per group generator.
struct MonomialPermTable {
  std::vector<std::string> gen_names;
  std::vector<std::vector<PermEntry>> rows;
  std::int64_t scalar_modulus = 1;

  std::size_t dim() const { return rows.empty() ? 0 : rows[0].size(); }

  static std::vector<PermEntry> identity_row(std::size_t d) {
    std::vector<PermEntry> r(d);
    for (std::size_t i = 0; i < d; ++i) r[i].target = i;
    return r;
  }

  /// Row of (a then-applied-after b): (a*b).e_i = a.(b.e_i).
  static std::vector<PermEntry> compose(const std::vector<PermEntry>& a, const std::vector<PermEntry>& b) {
    std::vector<PermEntry> r(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
      const PermEntry& bi = b[i];
      const PermEntry& ab = a[bi.target];
      r[i] = {ab.target, cyclo::root_mul(bi.scalar, ab.scalar)};
    }
    return r;
  }

  static std::vector<PermEntry> inverse(const std::vector<PermEntry>& a) {
    std::vector<PermEntry> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[a[i].target] = {i, a[i].scalar.inverse()};
    return r;
  }

  std::vector<PermEntry> eval(const fp::Word& w) const {
    auto r = identity_row(dim());
    for (const auto& l : w) {
      auto g = rows[static_cast<std::size_t>(l.gen)];
      if (l.exp < 0) g = inverse(g);
      std::int64_t k = l.exp < 0 ? -l.exp : l.exp;
      for (std::int64_t i = 0; i < k; ++i) r = compose(r, g);
    }
    return r;
  }

  static bool is_identity(const std::vector<PermEntry>& r) {
    for (std::size_t i = 0; i < r.size(); ++i)
      if (r[i].target != i || !r[i].scalar.is_one()) return false;
    return true;
  }

  std::string str(const std::vector<std::string>& var_names) const {
    std::ostringstream os;
    for (std::size_t g = 0; g < rows.size(); ++g) {
      os << gen_names[g] << ":";
      for (std::size_t i = 0; i < rows[g].size(); ++i) {
        const auto& e = rows[g][i];
        os << (i ? ", " : " ") << var_names[i] << "->";
        if (!e.scalar.is_one()) os << e.scalar.reduced().str() << "*";
        os << var_names[e.target];
      }
      os << ";";
    }
    return os.str();
  }
};

/// Table of the group generators on a basis each of whose images is a root of
/// unity (of order dividing scalar_modulus) times another basis vector.
inline MonomialPermTable extract_action(const PermGroup& G, const std::vector<GroupVector>& basis,
                                        std::int64_t scalar_modulus, const std::vector<fp::Word>& relators = {}) {
  MonomialPermTable t;
  t.gen_names = G.gen_names();
  t.scalar_modulus = scalar_modulus;
  for (std::size_t gi = 0; gi < G.ngens(); ++gi) {
    std::vector<PermEntry> row;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      GroupVector w = act(G, G.gen(gi), basis[i]);
      if (w.is_zero()) throw StructuralError("zero image in extract_action");
      auto [key, kc] = *w.coeffs().begin();
      std::optional<PermEntry> found;
      for (std::size_t j = 0; j < basis.size() && !found; ++j) {
        if (basis[j].support_size() != w.support_size()) continue;
        CycloNumber bj = basis[j].at(key);
        if (bj.is_zero()) continue;
        CycloNumber c = kc / bj;
        if (!(w == basis[j].scaled(c))) continue;
        auto r = c.as_root(scalar_modulus);
        if (!r) throw StructuralError("image scalar " + c.str() + " is not a root of unity of order dividing " +
                                      std::to_string(scalar_modulus));
        found = PermEntry{j, *r};
      }
      if (!found)
        throw StructuralError("not monomial: " + G.gen_names()[gi] + " maps basis vector " + std::to_string(i) +
                              " outside the scalar multiples of the basis");
      row.push_back(*found);
    }
    t.rows.push_back(std::move(row));
  }
  for (const auto& r : relators)
    if (!MonomialPermTable::is_identity(t.eval(r))) throw StructuralError("extracted table violates a relator");
  return t;
}

/// Action of every group element (indexed like G) derived from the table.
inline std::vector<std::vector<PermEntry>> element_actions(const PermGroup& G, const MonomialPermTable& t) {
  std::vector<std::vector<PermEntry>> acts(G.order());
  std::vector<char> done(G.order(), 0);
  acts[0] = MonomialPermTable::identity_row(t.dim());
  done[0] = 1;
  std::vector<Elem> queue{0};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    Elem a = queue[qi];
    for (std::size_t gi = 0; gi < G.ngens(); ++gi) {
      Elem b = G.mul(a, G.gen(gi));
      if (done[b]) continue;
      done[b] = 1;
      acts[b] = MonomialPermTable::compose(acts[a], t.rows[gi]);
      queue.push_back(b);
    }
  }
  return acts;
}

/// Elements acting as the identity on the table's basis.
inline std::vector<Elem> action_kernel(const PermGroup& G, const MonomialPermTable& t) {
  auto acts = element_actions(G, t);
  std::vector<Elem> k;
  for (Elem e = 0; e < G.order(); ++e)
    if (MonomialPermTable::is_identity(acts[e])) k.push_back(e);
  return k;
}

inline bool faithful_check(const PermGroup& G, const MonomialPermTable& t) { return action_kernel(G, t).size() == 1; }

}  // namespace noether::rep
