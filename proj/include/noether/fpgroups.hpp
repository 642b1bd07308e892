#pragma once

// Finitely presented families, Todd-Coxeter realization as a regular
// permutation group, and the structural checks run on each family.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "noether/error.hpp"
#include "noether/intmat.hpp"

namespace noether::fp {

// ---------------------------------------------------------------------------
// Family parameters

/// Which classification list a family belongs to: odd primes (11 families)
/// or p = 2 (25 families). Rendered as "3.1" / "3.2" at the interface.
enum class FamilyList { odd, two };

inline std::string list_label(FamilyList l) { return l == FamilyList::odd ? "3.1" : "3.2"; }

inline FamilyList parse_list_label(const std::string& s) {
  if (s == "3.1") return FamilyList::odd;
  if (s == "3.2") return FamilyList::two;
  throw ParameterRangeError("unknown family list '" + s + "' (expected 3.1 or 3.2)");
}

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::int64_t ipow(std::int64_t b, std::int64_t e) {
  std::int64_t r = 1;
  for (std::int64_t i = 0; i < e; ++i) r = zlat::checked_mul(r, b);
  return r;
}

inline bool is_quadratic_residue(std::int64_t a, std::int64_t p) {
  a = zlat::mod_floor(a, p);
  for (std::int64_t x = 1; x < p; ++x)
    if ((x * x) % p == a) return true;
  return false;
}

inline std::int64_t least_nonresidue(std::int64_t p) {
  for (std::int64_t a = 2; a < p; ++a)
    if (!is_quadratic_residue(a, p)) return a;
  throw ParameterRangeError("no quadratic non-residue mod " + std::to_string(p));
}

struct FamilySpec {
  FamilyList list = FamilyList::odd;
  int index = 1;
  std::int64_t p = 3;
  std::int64_t n = 3;
  std::optional<std::int64_t> a;  // non-residue parameter (odd list, family 6)

  std::string label() const {
    std::ostringstream os;
    os << "G" << index << "(" << list_label(list) << ") p=" << p << " n=" << n;
    if (a) os << " a=" << *a;
    return os.str();
  }
};

inline int family_count(FamilyList l) { return l == FamilyList::odd ? 11 : 25; }

/// Smallest n allowed for the family (the exact-n family 11 returns 4).
inline std::int64_t family_min_n(FamilyList l, int index) {
  if (l == FamilyList::odd) {
    if (index == 1) return 3;
    if (index <= 7) return 4;
    if (index <= 9) return 5;
    if (index == 10) return 6;
    return 4;
  }
  if (index <= 5) return 4;
  if (index <= 18) return 5;
  return 6;
}

/// Throws ParameterRangeError naming the violated bound.
inline void validate(const FamilySpec& s) {
  const std::string who = "G" + std::to_string(s.index) + "(" + list_label(s.list) + ")";
  if (s.index < 1 || s.index > family_count(s.list))
    throw ParameterRangeError(who + ": family index out of range 1.." + std::to_string(family_count(s.list)));
  if (s.list == FamilyList::odd) {
    if (!is_prime(s.p) || s.p == 2) throw ParameterRangeError(who + ": requires an odd prime p");
  } else if (s.p != 2) {
    throw ParameterRangeError(who + ": requires p = 2");
  }
  std::int64_t lo = family_min_n(s.list, s.index);
  if (s.list == FamilyList::odd && s.index == 11) {
    if (s.p != 3 || s.n != 4) throw ParameterRangeError(who + ": requires n = 4 and p = 3");
  } else if (s.n < lo) {
    throw ParameterRangeError(who + ": requires n >= " + std::to_string(lo));
  }
  if (s.a) {
    if (!(s.list == FamilyList::odd && s.index == 6)) throw ParameterRangeError(who + ": parameter a not used");
    if (zlat::mod_floor(*s.a, s.p) == 0 || is_quadratic_residue(*s.a, s.p))
      throw ParameterRangeError(who + ": a must be a quadratic non-residue mod p");
  }
}

/// Fills the default non-residue parameter where the family needs one.
inline FamilySpec normalized(FamilySpec s) {
  if (s.list == FamilyList::odd && s.index == 6 && !s.a) s.a = least_nonresidue(s.p);
  validate(s);
  return s;
}

// ---------------------------------------------------------------------------
// Presentations

struct Letter {
  int gen;
  std::int64_t exp;
  friend bool operator==(const Letter&, const Letter&) = default;
};
using Word = std::vector<Letter>;

/// Merges adjacent powers of the same generator and drops zero exponents.
inline Word free_reduce(const Word& w) {
  Word out;
  for (const auto& l : w) {
    if (l.exp == 0) continue;
    if (!out.empty() && out.back().gen == l.gen) {
      out.back().exp += l.exp;
      if (out.back().exp == 0) out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

inline Word inverse_word(const Word& w) {
  Word out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back({it->gen, -it->exp});
  return out;
}

inline Word concat(std::initializer_list<Word> parts) {
  Word out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return free_reduce(out);
}

struct Presentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;

  int gen_index(const std::string& name) const {
    for (std::size_t i = 0; i < generators.size(); ++i)
      if (generators[i] == name) return static_cast<int>(i);
    return -1;
  }

  std::string word_str(const Word& w) const {
    std::ostringstream os;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) os << ' ';
      os << generators[static_cast<std::size_t>(w[i].gen)] << '^' << w[i].exp;
    }
    return os.str();
  }

  /// Plain text: a generator header line, then one relator per line.
  std::string to_text() const {
    std::ostringstream os;
    os << "# generators:";
    for (const auto& g : generators) os << ' ' << g;
    os << '\n';
    for (const auto& r : relators) os << word_str(r) << '\n';
    return os.str();
  }

  static Presentation from_text(const std::string& text) {
    Presentation pr;
    std::istringstream is(text);
    std::string line;
    bool have_header = false;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      if (line.rfind("# generators:", 0) == 0) {
        std::istringstream hs(line.substr(13));
        std::string g;
        while (hs >> g) pr.generators.push_back(g);
        have_header = true;
        continue;
      }
      if (line[0] == '#') continue;
      if (!have_header) throw std::invalid_argument("presentation text: missing generator header");
      std::istringstream ls(line);
      std::string tok;
      Word w;
      while (ls >> tok) {
        auto caret = tok.find('^');
        std::string name = tok.substr(0, caret);
        std::int64_t e = caret == std::string::npos ? 1 : std::stoll(tok.substr(caret + 1));
        int gi = pr.gen_index(name);
        if (gi < 0) throw std::invalid_argument("presentation text: unknown generator '" + name + "'");
        w.push_back({gi, e});
      }
      pr.relators.push_back(free_reduce(w));
    }
    return pr;
  }
};

namespace detail {

inline Word g(int i, std::int64_t e = 1) { return Word{{i, e}}; }
/// lhs = rhs  ->  lhs * rhs^-1
inline Word eq(const Word& lhs, const Word& rhs) { return concat({lhs, inverse_word(rhs)}); }
/// x^-1 y x = rhs
inline Word conj(int x, int y, const Word& rhs) { return eq(concat({g(x, -1), g(y), g(x)}), rhs); }
/// [x,y] = x^-1 y^-1 x y
inline Word comm(int x, int y) { return concat({g(x, -1), g(y, -1), g(x), g(y)}); }

}  // namespace detail

/// Printed vs corrected relations for the p = 2 families 21, 24 and 25,
/// whose relations as printed do not define a group of order 2^n.
enum class Reading { corrected, literal };

inline bool has_corrected_reading(const FamilySpec& s) {
  return s.list == FamilyList::two && (s.index == 21 || s.index == 24 || s.index == 25);
}

/// Transcribes the family's defining relations as relators.
inline Presentation build_presentation(const FamilySpec& raw, Reading reading = Reading::corrected) {
  using namespace detail;
  const FamilySpec s = normalized(raw);
  const std::int64_t p = s.p, n = s.n;
  const std::int64_t S = ipow(p, n - 2);  // order of sigma
  const std::int64_t q = ipow(p, n - 3);
  const int sg = 0, ta = 1, la = 2;
  Presentation pr;
  auto two_gens = [&] { pr.generators = {"sigma", "tau"}; };
  auto three_gens = [&] { pr.generators = {"sigma", "tau", "lambda"}; };
  auto& R = pr.relators;

  if (s.list == FamilyList::odd) {
    switch (s.index) {
      case 1:
        three_gens();
        R = {g(sg, S), g(ta, p), g(la, p), comm(sg, la), comm(ta, la), conj(ta, sg, concat({g(sg), g(la)}))};
        break;
      case 2:
        two_gens();
        R = {g(sg, S), g(ta, p * p), conj(ta, sg, g(sg, 1 + q))};
        break;
      case 3:
        three_gens();
        R = {g(sg, S), g(ta, p), g(la, p), comm(sg, la), comm(ta, la), conj(ta, sg, g(sg, 1 + q))};
        break;
      case 4:
        three_gens();
        R = {g(sg, S), g(ta, p), g(la, p), comm(sg, ta), comm(sg, la), conj(la, ta, concat({g(sg, q), g(ta)}))};
        break;
      case 5:
      case 6: {
        std::int64_t a = s.index == 6 ? *s.a : 1;
        three_gens();
        R = {g(sg, S),     g(ta, p), g(la, p), comm(sg, ta), conj(la, sg, concat({g(sg), g(ta)})),
             conj(la, ta, concat({g(sg, a * q), g(ta)}))};
        break;
      }
      case 7:
        three_gens();
        R = {g(sg, S), g(ta, p), g(la, p), conj(ta, sg, g(sg, 1 + q)), conj(la, sg, concat({g(sg), g(ta)})),
             comm(ta, la)};
        break;
      case 8:
        two_gens();
        R = {g(sg, S), g(ta, p * p), conj(ta, sg, g(sg, 1 + q / p))};
        break;
      case 9:
        two_gens();
        R = {g(sg, S), g(ta, p * p), conj(sg, ta, g(ta, 1 + p))};
        break;
      case 10:
        two_gens();
        R = {g(sg, S), eq(g(sg, q), g(ta, p * p)), conj(sg, ta, g(ta, 1 - p))};
        break;
      case 11:
        three_gens();
        R = {g(sg, 9),    g(ta, 3), eq(g(sg, 3), g(la, 3)), comm(sg, ta), conj(la, sg, concat({g(sg), g(ta)})),
             conj(la, ta, concat({g(sg, 6), g(ta)}))};
        break;
    }
    return pr;
  }

  const std::int64_t h = q / 2;  // 2^(n-4)
  switch (s.index) {
    case 1:
      two_gens();
      R = {g(sg, S), g(ta, 4), conj(ta, sg, g(sg, 1 + q))};
      break;
    case 2:
      three_gens();
      R = {g(sg, S), g(la, 2), eq(g(sg, q), g(ta, 2)), conj(ta, sg, g(sg, -1)), comm(sg, la), comm(ta, la)};
      break;
    case 3:
      three_gens();
      R = {g(sg, S), g(ta, 2), g(la, 2), conj(ta, sg, g(sg, -1)), comm(sg, la), comm(ta, la)};
      break;
    case 4:
      three_gens();
      R = {g(sg, S), g(ta, 2), g(la, 2), comm(sg, ta), comm(sg, la), conj(la, ta, concat({g(sg, q), g(ta)}))};
      break;
    case 5:
      three_gens();
      R = {g(sg, S), g(ta, 2), g(la, 2), comm(sg, ta), conj(la, sg, concat({g(sg), g(ta)})), comm(ta, la)};
      break;
    case 6:
      two_gens();
      R = {g(sg, S), g(ta, 4), conj(ta, sg, g(sg, -1))};
      break;
    case 7:
      two_gens();
      R = {g(sg, S), g(ta, 4), conj(ta, sg, g(sg, -1 + q))};
      break;
    case 8:
      two_gens();
      R = {g(sg, S), eq(g(sg, q), g(ta, 4)), conj(ta, sg, g(sg, -1))};
      break;
    case 9:
      two_gens();
      R = {g(sg, S), g(ta, 4), conj(sg, ta, g(ta, -1))};
      break;
    case 10:
      three_gens();
      R = {g(sg, S), g(ta, 2), g(la, 2), conj(ta, sg, g(sg, 1 + q)), comm(sg, la), comm(ta, la)};
      break;
    case 11:
      three_gens();
      R = {g(sg, S), g(ta, 2), g(la, 2), conj(ta, sg, g(sg, -1 + q)), comm(sg, la), comm(ta, la)};
      break;
    case 12:
      three_gens();
      R = {g(sg, S),    g(ta, 2), g(la, 2), comm(sg, ta), conj(la, sg, g(sg, -1)),
           conj(la, ta, concat({g(sg, q), g(ta)}))};
      break;
    case 13:
      three_gens();
      R = {g(sg, S), g(ta, 2), g(la, 2), comm(sg, ta), conj(la, sg, concat({g(sg, -1), g(ta)})), comm(ta, la)};
      break;
    case 14:
      three_gens();
      R = {g(sg, S),    g(ta, 2), eq(g(sg, q), g(la, 2)), comm(sg, ta), conj(la, sg, concat({g(sg, -1), g(ta)})),
           comm(ta, la)};
      break;
    case 15:
      three_gens();
      R = {g(sg, S), g(ta, 2), g(la, 2), conj(ta, sg, g(sg, 1 + q)), conj(la, sg, g(sg, -1 + q)), comm(ta, la)};
      break;
    case 16:
      three_gens();
      R = {g(sg, S),
           g(ta, 2),
           g(la, 2),
           conj(ta, sg, g(sg, 1 + q)),
           conj(la, sg, g(sg, -1 + q)),
           conj(la, ta, concat({g(sg, q), g(ta)}))};
      break;
    case 17:
      three_gens();
      R = {g(sg, S), g(ta, 2), g(la, 2), conj(ta, sg, g(sg, 1 + q)), conj(la, sg, concat({g(sg), g(ta)})),
           comm(ta, la)};
      break;
    case 18:
      three_gens();
      R = {g(sg, S), g(ta, 2), eq(g(la, 2), g(ta)), conj(ta, sg, g(sg, 1 + q)), conj(la, sg, concat({g(sg, -1), g(ta)}))};
      break;
    case 19:
      two_gens();
      R = {g(sg, S), g(ta, 4), conj(ta, sg, g(sg, 1 + h))};
      break;
    case 20:
      two_gens();
      R = {g(sg, S), g(ta, 4), conj(ta, sg, g(sg, -1 + h))};
      break;
    case 21:
      two_gens();
      // printed: tau^-1 sigma tau = tau^-1, which forces a cyclic group of
      // order 4. Corrected: sigma^-1 tau sigma = tau^-1.
      R = {g(sg, S), eq(g(sg, q), g(ta, 4)),
           reading == Reading::literal ? conj(ta, sg, g(ta, -1)) : conj(sg, ta, g(ta, -1))};
      break;
    case 22:
      three_gens();
      R = {g(sg, S),    g(ta, 2), g(la, 2), comm(sg, ta), conj(la, sg, concat({g(sg, 1 + h), g(ta)})),
           conj(la, ta, concat({g(sg, q), g(ta)}))};
      break;
    case 23:
      three_gens();
      R = {g(sg, S),    g(ta, 2), g(la, 2), comm(sg, ta), conj(la, sg, concat({g(sg, -1 + h), g(ta)})),
           conj(la, ta, concat({g(sg, q), g(ta)}))};
      break;
    case 24:
      three_gens();
      // printed lambda^-1 sigma lambda = sigma^(-1+2^(n-4)) is incompatible
      // with lambda^2 = 1 (order drops to 2^(n-1)); corrected form adds tau.
      R = {g(sg, S), g(ta, 2), g(la, 2), conj(ta, sg, g(sg, 1 + q)),
           conj(la, sg, reading == Reading::literal ? g(sg, -1 + h) : concat({g(sg, -1 + h), g(ta)})), comm(ta, la)};
      break;
    case 25:
      three_gens();
      R = {g(sg, S),
           g(ta, 2),
           eq(g(sg, q), g(la, 2)),
           conj(ta, sg, g(sg, 1 + q)),
           conj(la, sg, reading == Reading::literal ? g(sg, -1 + h) : concat({g(sg, -1 + h), g(ta)})),
           comm(ta, la)};
      break;
  }
  return pr;
}

// ---------------------------------------------------------------------------
// Todd-Coxeter (HLT with lookahead) over the trivial subgroup

struct CosetTable {
  int ngens = 0;
  /// table[c][2*g] = c*g, table[c][2*g+1] = c*g^-1; 0-based, identity coset 0.
  std::vector<std::vector<std::int32_t>> table;
};

namespace detail {

class Enumerator {
 public:
  Enumerator(const Presentation& pr, std::size_t cap) : cap_(cap), cols_(2 * static_cast<int>(pr.generators.size())) {
    for (const auto& r : pr.relators) {
      std::vector<int> w;
      for (const auto& l : free_reduce(r)) {
        int c = l.exp > 0 ? 2 * l.gen : 2 * l.gen + 1;
        for (std::int64_t k = 0; k < (l.exp > 0 ? l.exp : -l.exp); ++k) w.push_back(c);
      }
      if (!w.empty()) rels_.push_back(std::move(w));
    }
    alloc();
  }

  CosetTable run() {
    for (std::size_t c = 0; c < tab_.size(); ++c) {
      if (!live(c)) continue;
      for (const auto& r : rels_) {
        scan(static_cast<std::int32_t>(c), r, true);
        if (!live(c)) break;
      }
      for (int x = 0; x < cols_ && live(c); ++x)
        if (at(static_cast<std::int32_t>(c), x) < 0) define(static_cast<std::int32_t>(c), x);
    }
    return compact();
  }

 private:
  static int inv(int x) { return x ^ 1; }
  bool live(std::size_t c) const { return parent_[c] == static_cast<std::int32_t>(c); }
  std::int32_t& at(std::int32_t c, int x) { return tab_[static_cast<std::size_t>(c)][static_cast<std::size_t>(x)]; }

  std::int32_t alloc() {
    tab_.emplace_back(static_cast<std::size_t>(cols_), -1);
    parent_.push_back(static_cast<std::int32_t>(tab_.size() - 1));
    ++live_count_;
    return static_cast<std::int32_t>(tab_.size() - 1);
  }

  void define(std::int32_t c, int x) {
    if (live_count_ >= cap_) {
      lookahead();
      c = rep(c);
      if (at(c, x) >= 0) return;
      if (live_count_ >= cap_)
        throw ResourceError("coset enumeration exceeded " + std::to_string(cap_) + " live cosets");
    }
    if (tab_.size() >= 8 * cap_) throw ResourceError("coset enumeration exhausted its coset budget");
    set(c, x, alloc());
  }

  void set(std::int32_t c, int x, std::int32_t d) {
    at(c, x) = d;
    at(d, inv(x)) = c;
  }

  std::int32_t rep(std::int32_t c) {
    std::int32_t r = c;
    while (parent_[static_cast<std::size_t>(r)] != r) r = parent_[static_cast<std::size_t>(r)];
    while (parent_[static_cast<std::size_t>(c)] != r) {
      std::int32_t nx = parent_[static_cast<std::size_t>(c)];
      parent_[static_cast<std::size_t>(c)] = r;
      c = nx;
    }
    return r;
  }

  void merge(std::int32_t k, std::int32_t l, std::vector<std::int32_t>& queue) {
    k = rep(k);
    l = rep(l);
    if (k == l) return;
    if (k > l) std::swap(k, l);
    parent_[static_cast<std::size_t>(l)] = k;
    --live_count_;
    queue.push_back(l);
  }

  void coincidence(std::int32_t a, std::int32_t b) {
    std::vector<std::int32_t> queue;
    merge(a, b, queue);
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      std::int32_t e = queue[qi];
      for (int x = 0; x < cols_; ++x) {
        std::int32_t f = at(e, x);
        if (f < 0) continue;
        if (at(f, inv(x)) == e) at(f, inv(x)) = -1;
        std::int32_t e1 = rep(e), f1 = rep(f);
        std::int32_t ex = at(e1, x);
        std::int32_t fx = at(f1, inv(x));
        if (ex >= 0)
          merge(f1, ex, queue);
        else if (fx >= 0)
          merge(e1, fx, queue);
        else
          set(e1, x, f1);
      }
    }
  }

  /// Scans relator w from coset c; with fill, undefined entries get new cosets.
  void scan(std::int32_t c, const std::vector<int>& w, bool fill) {
    std::int32_t f = c, b = c;
    std::ptrdiff_t i = 0, j = static_cast<std::ptrdiff_t>(w.size()) - 1;
    auto W = [&](std::ptrdiff_t k) { return w[static_cast<std::size_t>(k)]; };
    for (;;) {
      while (i <= j && at(f, W(i)) >= 0) f = at(f, W(i++));
      if (i > j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j >= i && at(b, inv(W(j))) >= 0) b = at(b, inv(W(j--)));
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (i == j) {
        set(f, W(i), b);
        return;
      }
      if (!fill) return;
      define(f, W(i));
      // a lookahead inside define may have merged cosets; restart from c
      if (!live(static_cast<std::size_t>(c))) return;
      if (!live(static_cast<std::size_t>(f)) || !live(static_cast<std::size_t>(b))) {
        f = b = c;
        i = 0;
        j = static_cast<std::ptrdiff_t>(w.size()) - 1;
      }
    }
  }

  void lookahead() {
    for (std::size_t c = 0; c < tab_.size(); ++c)
      for (const auto& r : rels_) {
        if (!live(c)) break;
        scan(static_cast<std::int32_t>(c), r, false);
      }
  }

  /// Renumbers live cosets consecutively, preserving order.
  CosetTable compact() {
    std::vector<std::int32_t> newid(tab_.size(), -1);
    std::int32_t k = 0;
    for (std::size_t c = 0; c < tab_.size(); ++c)
      if (live(c)) newid[c] = k++;
    CosetTable ct;
    ct.ngens = cols_ / 2;
    for (std::size_t c = 0; c < tab_.size(); ++c) {
      if (!live(c)) continue;
      std::vector<std::int32_t> row(static_cast<std::size_t>(cols_), -1);
      for (int x = 0; x < cols_; ++x) {
        std::int32_t d = tab_[c][static_cast<std::size_t>(x)];
        if (d < 0) throw StructuralError("coset enumeration finished with an incomplete table");
        row[static_cast<std::size_t>(x)] = newid[static_cast<std::size_t>(rep(d))];
      }
      ct.table.push_back(std::move(row));
    }
    return ct;
  }

  std::size_t cap_;
  int cols_;
  std::vector<std::vector<int>> rels_;
  std::vector<std::vector<std::int32_t>> tab_;
  std::vector<std::int32_t> parent_;
  std::size_t live_count_ = 0;
};

}  // namespace detail

/// Enumerates the cosets of the trivial subgroup (the regular representation).
inline CosetTable enumerate_cosets(const Presentation& pr, std::size_t coset_cap) {
  if (pr.generators.empty()) {
    CosetTable ct;
    ct.table.emplace_back();
    return ct;
  }
  return detail::Enumerator(pr, coset_cap).run();
}

// ---------------------------------------------------------------------------
// Permutation groups on the regular coset space

using Elem = std::uint32_t;

class PermGroup {
 public:
  PermGroup() = default;

  /// Builds the group from a complete coset table; elements are renumbered
  /// breadth-first from the identity so equal presentations give equal tables.
  static PermGroup from_table(const std::vector<std::string>& gen_names, const CosetTable& ct) {
    PermGroup G;
    G.gen_names_ = gen_names;
    const std::size_t N = ct.table.size();
    const std::size_t k = gen_names.size();
    // BFS standardization along generator columns
    std::vector<std::int32_t> order, pos(N, -1);
    order.push_back(0);
    pos[0] = 0;
    std::vector<std::int32_t> par(1, -1);
    std::vector<int> pgen(1, -1);
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (std::size_t gi = 0; gi < k; ++gi) {
        std::int32_t d = ct.table[static_cast<std::size_t>(order[i])][2 * gi];
        if (pos[static_cast<std::size_t>(d)] < 0) {
          pos[static_cast<std::size_t>(d)] = static_cast<std::int32_t>(order.size());
          order.push_back(d);
          par.push_back(static_cast<std::int32_t>(i));
          pgen.push_back(static_cast<int>(gi));
        }
      }
    }
    if (order.size() != N) throw StructuralError("coset table is not connected");
    G.n_ = N;
    G.right_.assign(k, std::vector<Elem>(N));
    for (std::size_t gi = 0; gi < k; ++gi)
      for (std::size_t c = 0; c < N; ++c)
        G.right_[gi][c] = static_cast<Elem>(pos[static_cast<std::size_t>(ct.table[static_cast<std::size_t>(order[c])][2 * gi])]);
    G.parent_ = par;
    G.parent_gen_ = pgen;
    G.build_tables();
    return G;
  }

  std::size_t order() const { return n_; }
  std::size_t degree() const { return n_; }
  std::size_t ngens() const { return gen_names_.size(); }
  const std::vector<std::string>& gen_names() const { return gen_names_; }
  Elem identity() const { return 0; }
  Elem gen(std::size_t i) const { return right_[i][0]; }
  std::vector<Elem> gens() const {
    std::vector<Elem> v;
    for (std::size_t i = 0; i < ngens(); ++i) v.push_back(gen(i));
    return v;
  }
  /// Permutation of the coset space induced by right multiplication by generator i.
  const std::vector<Elem>& generator_perm(std::size_t i) const { return right_[i]; }

  Elem mul(Elem a, Elem b) const { return mult_[static_cast<std::size_t>(a) * n_ + b]; }
  Elem inv(Elem a) const { return inv_[a]; }
  Elem pow(Elem a, std::int64_t k) const {
    if (k < 0) {
      a = inv(a);
      k = -k;
    }
    Elem r = identity();
    Elem b = a;
    while (k > 0) {
      if (k & 1) r = mul(r, b);
      b = mul(b, b);
      k >>= 1;
    }
    return r;
  }
  Elem conj(Elem a, Elem by) const { return mul(mul(inv(by), a), by); }  // by^-1 a by
  Elem commutator(Elem a, Elem b) const { return mul(mul(inv(a), inv(b)), mul(a, b)); }

  Elem eval(const Word& w) const {
    Elem r = identity();
    for (const auto& l : w) r = mul(r, pow(gen(static_cast<std::size_t>(l.gen)), l.exp));
    return r;
  }

  /// Shortlex-ish word from the BFS tree.
  Word word_of(Elem e) const {
    Word w;
    while (e != 0) {
      w.push_back({parent_gen_[e], 1});
      e = static_cast<Elem>(parent_[e]);
    }
    std::reverse(w.begin(), w.end());
    return free_reduce(w);
  }

  std::string name(Elem e) const {
    if (e == 0) return "1";
    Word w = word_of(e);
    std::ostringstream os;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) os << ' ';
      os << gen_names_[static_cast<std::size_t>(w[i].gen)];
      if (w[i].exp != 1) os << '^' << w[i].exp;
    }
    return os.str();
  }

  std::int64_t element_order(Elem g) const {
    std::int64_t k = 1;
    Elem x = g;
    while (x != identity()) {
      x = mul(x, g);
      ++k;
    }
    return k;
  }

  bool commute(Elem a, Elem b) const { return mul(a, b) == mul(b, a); }

  bool is_abelian() const {
    for (std::size_t i = 0; i < ngens(); ++i)
      for (std::size_t j = i + 1; j < ngens(); ++j)
        if (!commute(gen(i), gen(j))) return false;
    return true;
  }

  bool is_central(Elem c) const {
    for (std::size_t i = 0; i < ngens(); ++i)
      if (!commute(c, gen(i))) return false;
    return true;
  }

  const std::vector<Elem>& mult_table() const { return mult_; }

  friend bool operator==(const PermGroup& a, const PermGroup& b) {
    return a.gen_names_ == b.gen_names_ && a.right_ == b.right_;
  }

 private:
  void build_tables() {
    const std::size_t N = n_;
    mult_.assign(N * N, 0);
    // row a: a*b = (a*parent(b))*gen(b)
    for (std::size_t a = 0; a < N; ++a) {
      mult_[a * N] = static_cast<Elem>(a);
      for (std::size_t b = 1; b < N; ++b)
        mult_[a * N + b] = right_[static_cast<std::size_t>(parent_gen_[b])][mult_[a * N + static_cast<std::size_t>(parent_[b])]];
    }
    inv_.assign(N, 0);
    for (std::size_t a = 0; a < N; ++a)
      for (std::size_t b = 0; b < N; ++b)
        if (mult_[a * N + b] == 0) {
          inv_[a] = static_cast<Elem>(b);
          break;
        }
  }

  std::vector<std::string> gen_names_;
  std::size_t n_ = 1;
  std::vector<std::vector<Elem>> right_;
  std::vector<std::int32_t> parent_{-1};
  std::vector<int> parent_gen_{-1};
  std::vector<Elem> mult_{0};
  std::vector<Elem> inv_{0};
};

struct RealizeOptions {
  std::size_t order_bound = 4096;
  std::size_t coset_factor = 10;
};

/// Regular permutation representation of a finite presented group.
inline PermGroup realize(const Presentation& pr, const RealizeOptions& opt = {}) {
  CosetTable ct = enumerate_cosets(pr, opt.order_bound * opt.coset_factor);
  if (ct.table.size() > opt.order_bound)
    throw ResourceError("group order " + std::to_string(ct.table.size()) + " exceeds bound " +
                        std::to_string(opt.order_bound));
  PermGroup G = PermGroup::from_table(pr.generators, ct);
  for (const auto& r : pr.relators)
    if (G.eval(r) != G.identity()) throw StructuralError("relator " + pr.word_str(r) + " acts nontrivially");
  return G;
}

inline std::int64_t element_order(const PermGroup& G, Elem g) { return G.element_order(g); }

/// Group axioms on the Cayley table: full associativity for small orders,
/// otherwise `samples` deterministic pseudo-random triples.
inline bool check_group_axioms(const PermGroup& G, std::size_t full_limit = 81, std::size_t samples = 1000) {
  const std::size_t N = G.order();
  for (Elem a = 0; a < N; ++a) {
    if (G.mul(a, 0) != a || G.mul(0, a) != a) return false;
    if (G.mul(a, G.inv(a)) != 0) return false;
  }
  auto assoc = [&](Elem a, Elem b, Elem c) { return G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c)); };
  if (N <= full_limit) {
    for (Elem a = 0; a < N; ++a)
      for (Elem b = 0; b < N; ++b)
        for (Elem c = 0; c < N; ++c)
          if (!assoc(a, b, c)) return false;
    return true;
  }
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;
  auto next = [&] {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return static_cast<Elem>(state % N);
  };
  for (std::size_t i = 0; i < samples; ++i) {
    Elem a = next(), b = next(), c = next();
    if (!assoc(a, b, c)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Subgroups and structural claims

/// Subgroup generated by gens (closure under right multiplication).
inline std::vector<Elem> closure(const PermGroup& G, const std::vector<Elem>& gens) {
  std::vector<char> in(G.order(), 0);
  std::vector<Elem> out{G.identity()};
  in[0] = 1;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (Elem g : gens) {
      Elem x = G.mul(out[i], g);
      if (!in[x]) {
        in[x] = 1;
        out.push_back(x);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

struct SubgroupProps {
  std::size_t order = 1;
  bool is_abelian = true;
  bool is_normal = true;
  bool is_cyclic = true;
  std::optional<std::int64_t> quotient_order;  // set when normal
  std::optional<bool> quotient_cyclic;
  std::vector<Elem> elements;
};

/// Smallest k >= 1 with g^k in the (sorted) subgroup.
inline std::int64_t order_mod(const PermGroup& G, Elem g, const std::vector<Elem>& sub) {
  std::int64_t k = 1;
  Elem x = g;
  while (!std::binary_search(sub.begin(), sub.end(), x)) {
    x = G.mul(x, g);
    ++k;
  }
  return k;
}

inline SubgroupProps subgroup_props(const PermGroup& G, const std::vector<Elem>& gens) {
  SubgroupProps sp;
  sp.elements = closure(G, gens);
  sp.order = sp.elements.size();
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (!G.commute(gens[i], gens[j])) sp.is_abelian = false;
  for (Elem h : gens)
    for (Elem g : G.gens())
      if (!std::binary_search(sp.elements.begin(), sp.elements.end(), G.conj(h, g))) sp.is_normal = false;
  sp.is_cyclic = false;
  for (Elem h : sp.elements)
    if (static_cast<std::size_t>(G.element_order(h)) == sp.order) {
      sp.is_cyclic = true;
      break;
    }
  if (sp.is_normal) {
    std::int64_t idx = static_cast<std::int64_t>(G.order() / sp.order);
    sp.quotient_order = idx;
    bool cyc = false;
    for (Elem g = 0; g < G.order() && !cyc; ++g)
      if (order_mod(G, g, sp.elements) == idx) cyc = true;
    sp.quotient_cyclic = cyc;
  }
  return sp;
}

inline bool direct_product_check(const PermGroup& G, const std::vector<Elem>& h_gens, Elem c) {
  auto H = closure(G, h_gens);
  auto C = closure(G, {c});
  if (!G.is_central(c)) return false;
  for (Elem x : C)
    if (x != G.identity() && std::binary_search(H.begin(), H.end(), x)) return false;
  return H.size() * C.size() == G.order();
}

inline bool metacyclic_check(const PermGroup& G, Elem s, Elem t) {
  if (closure(G, {s, t}).size() != G.order()) return false;
  auto S = closure(G, {s});
  for (Elem g : G.gens())
    if (!std::binary_search(S.begin(), S.end(), G.conj(s, g))) return false;
  return static_cast<std::size_t>(order_mod(G, t, S)) * S.size() == G.order();
}

struct ClaimReport {
  std::int64_t order = 0;
  std::int64_t expected_order = 0;
  bool order_ok = false;
  bool non_abelian = false;
  std::optional<Elem> noncommuting_a, noncommuting_b;
  bool has_order_p_n2 = false;
  std::optional<Elem> order_p_n2_witness;
  bool no_order_p_n1 = false;
  std::optional<Elem> order_p_n1_witness;
  std::int64_t exponent = 1;
  std::vector<std::pair<std::int64_t, std::int64_t>> spectrum;  // (order, count)

  bool ok() const { return order_ok && non_abelian && has_order_p_n2 && no_order_p_n1; }
};

inline ClaimReport verify_family_claims(const FamilySpec& spec, const PermGroup& G) {
  ClaimReport r;
  r.order = static_cast<std::int64_t>(G.order());
  r.expected_order = ipow(spec.p, spec.n);
  r.order_ok = r.order == r.expected_order;
  r.non_abelian = false;
  for (std::size_t i = 0; i < G.ngens() && !r.non_abelian; ++i)
    for (std::size_t j = i + 1; j < G.ngens(); ++j)
      if (!G.commute(G.gen(i), G.gen(j))) {
        r.non_abelian = true;
        r.noncommuting_a = G.gen(i);
        r.noncommuting_b = G.gen(j);
        break;
      }
  const std::int64_t target = ipow(spec.p, spec.n - 2);
  const std::int64_t forbidden = target * spec.p;
  std::map<std::int64_t, std::int64_t> spec_count;
  std::int64_t ex = 1;
  // sigma first so the natural witness is reported
  std::vector<Elem> order_list;
  if (G.ngens() > 0) order_list.push_back(G.gen(0));
  for (Elem g = 0; g < G.order(); ++g) order_list.push_back(g);
  std::vector<char> seen(G.order(), 0);
  for (Elem g : order_list) {
    if (seen[g]) continue;
    seen[g] = 1;
    std::int64_t o = G.element_order(g);
    spec_count[o]++;
    ex = std::lcm(ex, o);
    if (o == target && !r.order_p_n2_witness) r.order_p_n2_witness = g;
    if (o == forbidden && !r.order_p_n1_witness) r.order_p_n1_witness = g;
  }
  r.has_order_p_n2 = r.order_p_n2_witness.has_value();
  r.no_order_p_n1 = !r.order_p_n1_witness.has_value();
  r.exponent = ex;
  for (auto [o, c] : spec_count) r.spectrum.emplace_back(o, c);
  return r;
}

/// Homomorphisms onto a cyclic group Z/m: images of the generators in Z/m
/// that kill every relator, with the kernel listed. Only surjective ones.
struct CyclicQuotient {
  std::int64_t m = 1;
  std::vector<std::int64_t> images;
  std::vector<Elem> kernel;
};

inline std::vector<CyclicQuotient> cyclic_quotients(const PermGroup& G, std::int64_t m) {
  std::vector<CyclicQuotient> out;
  const std::size_t k = G.ngens();
  if (m <= 0 || G.order() % static_cast<std::size_t>(m) != 0) return out;
  std::vector<std::int64_t> img(k, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == k) {
      // image of each element along the BFS words; check well-definedness via
      // the relation hom(a*g) = hom(a) + img(g) for all a, g.
      std::vector<std::int64_t> h(G.order(), -1);
      h[0] = 0;
      std::vector<Elem> queue{0};
      for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        Elem a = queue[qi];
        for (std::size_t gi = 0; gi < k; ++gi) {
          Elem b = G.mul(a, G.gen(gi));
          std::int64_t v = (h[a] + img[gi]) % m;
          if (h[b] < 0) {
            h[b] = v;
            queue.push_back(b);
          } else if (h[b] != v) {
            return;
          }
        }
      }
      std::int64_t gcdall = m;
      for (auto x : img) gcdall = std::gcd(gcdall, x);
      if (gcdall != 1) return;
      CyclicQuotient cq;
      cq.m = m;
      cq.images = img;
      for (Elem e = 0; e < G.order(); ++e)
        if (h[e] == 0) cq.kernel.push_back(e);
      out.push_back(std::move(cq));
      return;
    }
    for (std::int64_t v = 0; v < m; ++v) {
      img[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

/// A small generating set for a subgroup given by its sorted element list.
inline std::vector<Elem> generating_set(const PermGroup& G, const std::vector<Elem>& sub) {
  std::vector<Elem> gens;
  std::vector<Elem> cur{G.identity()};
  // prefer elements of large order so generating sets stay short
  std::vector<Elem> cand(sub.begin(), sub.end());
  std::stable_sort(cand.begin(), cand.end(),
                   [&](Elem a, Elem b) { return G.element_order(a) > G.element_order(b); });
  for (Elem x : cand) {
    if (std::binary_search(cur.begin(), cur.end(), x)) continue;
    gens.push_back(x);
    cur = closure(G, gens);
    if (cur.size() == sub.size()) break;
  }
  return gens;
}

inline bool subgroup_is_abelian(const PermGroup& G, const std::vector<Elem>& gens) {
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (!G.commute(gens[i], gens[j])) return false;
  return true;
}

}  // namespace noether::fp
