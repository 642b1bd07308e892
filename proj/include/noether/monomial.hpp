#pragma once

// Monomial actions on Laurent lattices with root-of-unity scalars: x_j maps
// to zeta_M^{s_j} * x^{A e_j}. Invariance including scalars is a linear
// congruence, so fixed fields of such actions reduce to integer kernels.

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "noether/cyclotomic.hpp"
#include "noether/error.hpp"
#include "noether/fpgroups.hpp"
#include "noether/intmat.hpp"
#include "noether/regrep.hpp"

namespace noether::mono {

using zlat::IntMatrix;
using zlat::IntVec;
using LatticeBasis = std::vector<IntVec>;

/// Renders x^e as "u1^2*u3^-1" ("1" for e = 0).
inline std::string monomial_str(const IntVec& e, const std::vector<std::string>& names) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!first) os << '*';
    first = false;
    os << names[i];
    if (e[i] != 1) os << '^' << e[i];
  }
  if (first) os << '1';
  return os.str();
}

class MonomialAutomorphism {
 public:
  MonomialAutomorphism() = default;
  MonomialAutomorphism(IntMatrix a, IntVec s, std::int64_t m) : a_(std::move(a)), s_(std::move(s)), m_(m) {
    if (a_.rows() != a_.cols() || s_.size() != a_.cols()) throw std::invalid_argument("MonomialAutomorphism: shape");
    for (auto& x : s_) x = zlat::mod_floor(x, m_);
  }
  static MonomialAutomorphism identity(std::size_t k, std::int64_t m) {
    return {IntMatrix::identity(k), IntVec(k, 0), m};
  }
  /// images[j] = (exponent vector of the image of x_j, scalar exponent).
  static MonomialAutomorphism from_images(const std::vector<std::pair<IntVec, std::int64_t>>& images, std::int64_t m) {
    std::vector<IntVec> cols;
    IntVec s;
    for (const auto& [e, c] : images) {
      cols.push_back(e);
      s.push_back(c);
    }
    return {IntMatrix::from_columns(cols, images.size()), s, m};
  }

  std::size_t rank() const { return a_.cols(); }
  const IntMatrix& matrix() const { return a_; }
  const IntVec& scalars() const { return s_; }
  std::int64_t modulus() const { return m_; }

  /// g(x^e) = zeta^{first} x^{second}
  std::pair<std::int64_t, IntVec> apply(const IntVec& e) const {
    std::int64_t sc = 0;
    for (std::size_t j = 0; j < e.size(); ++j) sc = zlat::mod_floor(sc + zlat::checked_mul(s_[j], e[j]) % m_, m_);
    return {sc, a_ * e};
  }

  /// (g o h)(x) = g(h(x))
  friend MonomialAutomorphism compose(const MonomialAutomorphism& g, const MonomialAutomorphism& h) {
    std::int64_t m = std::lcm(g.m_, h.m_);
    MonomialAutomorphism gl = g.lifted(m), hl = h.lifted(m);
    IntVec s(h.rank());
    for (std::size_t j = 0; j < h.rank(); ++j) s[j] = hl.s_[j] + gl.apply(hl.a_.column(j)).first;
    return {gl.a_ * hl.a_, s, m};
  }

  MonomialAutomorphism lifted(std::int64_t m) const {
    if (m % m_ != 0) throw std::invalid_argument("MonomialAutomorphism::lifted");
    IntVec s = s_;
    for (auto& x : s) x *= m / m_;
    return {a_, s, m};
  }

  MonomialAutomorphism inverse() const {
    IntMatrix ai = zlat::unimodular_inverse(a_);
    // g^-1(x_j) = zeta^{t_j} x^{ai e_j} with g(g^-1(x_j)) = x_j
    IntVec t(rank());
    for (std::size_t j = 0; j < rank(); ++j) t[j] = -apply(ai.column(j)).first;
    return {ai, t, m_};
  }

  MonomialAutomorphism pow(std::int64_t k) const {
    if (k < 0) return inverse().pow(-k);
    MonomialAutomorphism r = identity(rank(), m_);
    for (std::int64_t i = 0; i < k; ++i) r = compose(r, *this);
    return r;
  }

  bool is_identity() const {
    if (!a_.is_identity()) return false;
    for (auto x : s_)
      if (x != 0) return false;
    return true;
  }

  friend bool operator==(const MonomialAutomorphism& a, const MonomialAutomorphism& b) {
    std::int64_t m = std::lcm(a.m_, b.m_);
    auto al = a.lifted(m), bl = b.lifted(m);
    return al.a_ == bl.a_ && al.s_ == bl.s_;
  }

  std::string str(const std::vector<std::string>& names) const {
    std::ostringstream os;
    for (std::size_t j = 0; j < rank(); ++j) {
      if (j) os << ", ";
      os << names[j] << "->";
      cyclo::RootOfUnity r(m_, s_[j]);
      if (!r.is_one()) os << r.reduced().str() << '*';
      os << monomial_str(a_.column(j), names);
    }
    return os.str();
  }

 private:
  IntMatrix a_{0, 0};
  IntVec s_;
  std::int64_t m_ = 1;
};

struct MonomialGroupAction {
  std::vector<std::string> gen_names;
  std::vector<MonomialAutomorphism> gens;
  std::vector<std::string> vars;
  std::int64_t modulus = 1;

  std::size_t rank() const { return vars.size(); }

  MonomialAutomorphism eval(const fp::Word& w) const {
    MonomialAutomorphism r = MonomialAutomorphism::identity(rank(), modulus);
    for (const auto& l : w) r = compose(r, gens[static_cast<std::size_t>(l.gen)].pow(l.exp));
    return r;
  }

  bool check_relators(const std::vector<fp::Word>& relators) const {
    for (const auto& r : relators)
      if (!eval(r).is_identity()) return false;
    return true;
  }

  const MonomialAutomorphism& gen(const std::string& name) const {
    for (std::size_t i = 0; i < gen_names.size(); ++i)
      if (gen_names[i] == name) return gens[i];
    throw std::invalid_argument("unknown generator " + name);
  }

  std::string str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (i) os << "; ";
      os << gen_names[i] << ": " << gens[i].str(vars);
    }
    return os.str();
  }

  friend bool operator==(const MonomialGroupAction& a, const MonomialGroupAction& b) {
    return a.gens == b.gens;
  }
};

/// Action of every element of G (indexed like G) under a monomial action of
/// its generators.
inline std::vector<MonomialAutomorphism> element_automorphisms(const fp::PermGroup& G, const MonomialGroupAction& a) {
  std::vector<MonomialAutomorphism> acts(G.order());
  std::vector<char> done(G.order(), 0);
  acts[0] = MonomialAutomorphism::identity(a.rank(), a.modulus);
  done[0] = 1;
  std::vector<fp::Elem> queue{0};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    fp::Elem x = queue[qi];
    for (std::size_t gi = 0; gi < G.ngens(); ++gi) {
      fp::Elem y = G.mul(x, G.gen(gi));
      if (done[y]) continue;
      done[y] = 1;
      acts[y] = compose(acts[x], a.gens[gi]);
      queue.push_back(y);
    }
  }
  return acts;
}

/// Elements of G acting trivially (matrix and scalars) on the given variables.
inline std::vector<fp::Elem> action_kernel(const fp::PermGroup& G, const MonomialGroupAction& a,
                                           const std::vector<std::size_t>& vars) {
  auto acts = element_automorphisms(G, a);
  std::vector<fp::Elem> k;
  for (fp::Elem e = 0; e < G.order(); ++e) {
    bool trivial = true;
    for (std::size_t j : vars) {
      IntVec ej(a.rank(), 0);
      ej[j] = 1;
      auto [sc, img] = acts[e].apply(ej);
      if (sc != 0 || img != ej) {
        trivial = false;
        break;
      }
    }
    if (trivial) k.push_back(e);
  }
  return k;
}

inline std::vector<fp::Elem> action_kernel(const fp::PermGroup& G, const MonomialGroupAction& a) {
  std::vector<std::size_t> all(a.rank());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return action_kernel(G, a, all);
}

/// Permutation-with-scalar table as a monomial action (permutation matrices).
inline MonomialGroupAction from_perm_table(const rep::MonomialPermTable& t, const std::vector<std::string>& vars) {
  MonomialGroupAction a;
  a.gen_names = t.gen_names;
  a.vars = vars;
  a.modulus = t.scalar_modulus;
  for (const auto& row : t.rows) {
    std::vector<std::pair<IntVec, std::int64_t>> imgs;
    for (const auto& e : row) {
      IntVec v(row.size(), 0);
      v[e.target] = 1;
      auto r = e.scalar.reduced();
      if (t.scalar_modulus % r.modulus != 0) throw StructuralError("table scalar outside mu_M");
      imgs.emplace_back(v, r.lifted(t.scalar_modulus).exponent);
    }
    a.gens.push_back(MonomialAutomorphism::from_images(imgs, t.scalar_modulus));
  }
  return a;
}

/// Re-expresses the action on new variables X'_i = zeta^{offsets_i} x^{basis_i}.
/// Throws StructuralError naming the generator whose image leaves the span.
inline MonomialGroupAction induced_on_basis(const MonomialGroupAction& a, const LatticeBasis& basis,
                                            const std::vector<std::string>& names, const IntVec& offsets = {}) {
  const std::size_t k = basis.size();
  IntVec off = offsets.empty() ? IntVec(k, 0) : offsets;
  IntMatrix B = IntMatrix::from_columns(basis, a.rank());
  MonomialGroupAction out;
  out.gen_names = a.gen_names;
  out.vars = names;
  out.modulus = a.modulus;
  for (std::size_t gi = 0; gi < a.gens.size(); ++gi) {
    std::vector<std::pair<IntVec, std::int64_t>> imgs;
    for (std::size_t i = 0; i < k; ++i) {
      auto [sc, img] = a.gens[gi].apply(basis[i]);
      auto r = zlat::solve_integer(B, img);
      if (!r)
        throw StructuralError("span not stable under " + a.gen_names[gi] + " (image of " + names[i] + ")");
      std::int64_t s = off[i] + sc;
      for (std::size_t j = 0; j < k; ++j) s -= zlat::checked_mul(off[j], (*r)[j]);
      imgs.emplace_back(*r, s);
    }
    out.gens.push_back(MonomialAutomorphism::from_images(imgs, a.modulus));
  }
  return out;
}

/// Ratio variables x_num / x_den, e.g. u_i = x_i / x_{i-1}.
inline MonomialGroupAction quotient_action(const MonomialGroupAction& a,
                                           const std::vector<std::pair<std::size_t, std::size_t>>& ratios,
                                           const std::vector<std::string>& names) {
  LatticeBasis basis;
  for (auto [num, den] : ratios) {
    IntVec e(a.rank(), 0);
    e[num] += 1;
    e[den] -= 1;
    basis.push_back(e);
  }
  if (basis.empty()) {
    MonomialGroupAction out;
    out.gen_names = a.gen_names;
    out.modulus = a.modulus;
    for (std::size_t i = 0; i < a.gens.size(); ++i) out.gens.push_back(MonomialAutomorphism::identity(0, a.modulus));
    return out;
  }
  return induced_on_basis(a, basis, names);
}

/// Consecutive ratios within blocks of size m starting at the given offsets.
inline std::vector<std::pair<std::size_t, std::size_t>> consecutive_ratios(const std::vector<std::size_t>& block_starts,
                                                                           std::size_t m) {
  std::vector<std::pair<std::size_t, std::size_t>> r;
  for (std::size_t b : block_starts)
    for (std::size_t i = 1; i < m; ++i) r.emplace_back(b + i, b + i - 1);
  return r;
}

/// Monomials invariant (scalars included) under every listed automorphism:
/// integer kernel of [[A_g - I, 0], [s_g, M]] projected to the exponent part.
inline LatticeBasis fixed_lattice(const std::vector<MonomialAutomorphism>& auts, std::size_t rank) {
  if (rank == 0) return {};
  if (auts.empty()) {
    LatticeBasis b;
    for (std::size_t i = 0; i < rank; ++i) {
      IntVec e(rank, 0);
      e[i] = 1;
      b.push_back(e);
    }
    return b;
  }
  const std::size_t ng = auts.size();
  IntMatrix sys(ng * (rank + 1), rank + ng);
  for (std::size_t g = 0; g < ng; ++g) {
    const auto& A = auts[g].matrix();
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t j = 0; j < rank; ++j) sys(g * (rank + 1) + i, j) = A(i, j) - (i == j ? 1 : 0);
    for (std::size_t j = 0; j < rank; ++j) sys(g * (rank + 1) + rank, j) = auts[g].scalars()[j];
    sys(g * (rank + 1) + rank, rank + g) = auts[g].modulus();
  }
  LatticeBasis proj;
  for (const auto& v : zlat::kernel_basis(sys)) proj.emplace_back(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(rank));
  return zlat::hermite_basis(proj, rank);
}

inline LatticeBasis fixed_lattice(const MonomialGroupAction& a, const std::vector<fp::Word>& subgroup_words) {
  std::vector<MonomialAutomorphism> auts;
  for (const auto& w : subgroup_words) auts.push_back(a.eval(w));
  return fixed_lattice(auts, a.rank());
}

inline bool is_invariant(const MonomialAutomorphism& g, const IntVec& e) {
  auto [sc, img] = g.apply(e);
  return sc == 0 && img == e;
}

struct GeneratorCheck {
  bool contained = false;
  std::int64_t index = 0;  // 0 when the claimed span has lower rank
};

inline GeneratorCheck check_generators(const LatticeBasis& claimed, const std::vector<MonomialAutomorphism>& auts,
                                       std::size_t rank) {
  GeneratorCheck r;
  r.contained = true;
  for (const auto& e : claimed)
    for (const auto& g : auts)
      if (!is_invariant(g, e)) r.contained = false;
  if (!r.contained) return r;
  LatticeBasis fixed = fixed_lattice(auts, rank);
  r.index = zlat::sublattice_index(fixed, claimed, rank);
  return r;
}

inline GeneratorCheck check_generators(const LatticeBasis& claimed, const MonomialGroupAction& a,
                                       const std::vector<fp::Word>& subgroup_words) {
  std::vector<MonomialAutomorphism> auts;
  for (const auto& w : subgroup_words) auts.push_back(a.eval(w));
  return check_generators(claimed, auts, a.rank());
}

// ---------------------------------------------------------------------------
// Cyclic standardization

/// Phi_p(L) = I + L + ... + L^{p-1}.
inline IntMatrix phi_p_of(const IntMatrix& L, std::int64_t p) {
  IntMatrix acc = IntMatrix::identity(L.rows());
  IntMatrix pw = IntMatrix::identity(L.rows());
  for (std::int64_t i = 1; i < p; ++i) {
    pw = pw * L;
    acc = acc + pw;
  }
  return acc;
}

/// Columns v, Lv, ..., L^{p-2} v.
inline IntMatrix krylov(const IntMatrix& L, const IntVec& v, std::int64_t p) {
  std::vector<IntVec> cols{v};
  for (std::int64_t i = 1; i + 1 < p; ++i) cols.push_back(L * cols.back());
  return IntMatrix::from_columns(cols, L.rows());
}

/// Unimodular P with P^-1 L P equal to the companion matrix of Phi_p, built
/// as a Krylov basis from a cyclic vector. The preferred start vector is tried
/// first, then unit vectors, then small vectors in a fixed order. Throws if
/// Phi_p(L) != 0 (the action is not of the standard shape at all).
inline std::optional<IntMatrix> cyclic_standardize(const IntMatrix& L, std::int64_t p,
                                                   const std::optional<IntVec>& preferred = std::nullopt,
                                                   std::int64_t search_bound = 2) {
  const std::size_t r = L.rows();
  if (static_cast<std::int64_t>(r) != p - 1) throw StructuralError("cyclic_standardize: rank must be p-1");
  if (!phi_p_of(L, p).is_zero()) throw StructuralError("not standardizable: Phi_p(L) != 0");
  auto try_vec = [&](const IntVec& v) -> std::optional<IntMatrix> {
    IntMatrix P = krylov(L, v, p);
    if (zlat::is_unimodular(P)) return P;
    return std::nullopt;
  };
  if (preferred)
    if (auto P = try_vec(*preferred)) return P;
  for (std::size_t i = 0; i < r; ++i) {
    IntVec e(r, 0);
    e[i] = 1;
    if (auto P = try_vec(e)) return P;
  }
  IntVec v(r, -search_bound);
  for (;;) {
    if (auto P = try_vec(v)) return P;
    std::size_t i = 0;
    while (i < r && v[i] == search_bound) v[i++] = -search_bound;
    if (i == r) break;
    ++v[i];
  }
  return std::nullopt;
}

}  // namespace noether::mono
