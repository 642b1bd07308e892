#pragma once

// Sparse multivariate rational functions over Q(zeta_m), substitution, and the
// non-monomial coordinate changes: the t-linearization, the affine shift
// T_i = t_i - 1/p, and Moebius maps v = (1 - c u)/(1 + c u).
//
// Equality is always decided by cross-multiplication of canonical sparse
// polynomials. Reduction strips monomial content, normalizes the leading
// coefficient of the denominator, and cancels when one side divides the other;
// that is all the fractions in scope ever need.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "noether/cyclotomic.hpp"
#include "noether/error.hpp"
#include "noether/monomial.hpp"

namespace noether::bir {

using cyclo::CycloNumber;
using cyclo::Rational;
using cyclo::RootOfUnity;
using Exponent = std::vector<std::int64_t>;

/// Denominator became identically zero after a substitution.
class DegenerateSubstitutionError : public StructuralError {
 public:
  using StructuralError::StructuralError;
};

class Poly {
 public:
  Poly() = default;
  Poly(std::int64_t m, std::size_t nvars) : m_(m), n_(nvars) {}

  static Poly constant(std::int64_t m, std::size_t nvars, const CycloNumber& c) {
    Poly r(m, nvars);
    r.add_term(Exponent(nvars, 0), c);
    return r;
  }
  static Poly constant(std::int64_t m, std::size_t nvars, const Rational& q) {
    return constant(m, nvars, CycloNumber(cyclo::field(m), q));
  }
  static Poly monomial(std::int64_t m, const Exponent& e, const CycloNumber& c) {
    Poly r(m, e.size());
    r.add_term(e, c);
    return r;
  }
  static Poly variable(std::int64_t m, std::size_t nvars, std::size_t i) {
    Exponent e(nvars, 0);
    e[i] = 1;
    return monomial(m, e, CycloNumber::one(m));
  }

  std::int64_t modulus() const { return m_; }
  std::size_t nvars() const { return n_; }
  const std::map<Exponent, CycloNumber>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  bool is_constant() const { return t_.empty() || (t_.size() == 1 && is_zero_exp(t_.begin()->first)); }

  void add_term(const Exponent& e, const CycloNumber& c) {
    if (e.size() != n_) throw std::invalid_argument("Poly: exponent arity mismatch");
    if (c.is_zero()) return;
    auto it = t_.find(e);
    if (it == t_.end()) {
      t_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) t_.erase(it);
    }
  }

  /// Lex-largest term; keys are ordered ascending so it is the last one.
  const std::pair<const Exponent, CycloNumber>& leading() const { return *t_.rbegin(); }

  std::int64_t total_degree() const {
    std::int64_t d = 0;
    for (const auto& [e, c] : t_) {
      std::int64_t s = 0;
      for (auto x : e) s += x;
      d = std::max(d, s);
    }
    return d;
  }

  /// Componentwise minimum exponent over all terms.
  Exponent min_exponent() const {
    Exponent r(n_, 0);
    bool first = true;
    for (const auto& [e, c] : t_) {
      if (first) {
        r = e;
        first = false;
      } else {
        for (std::size_t i = 0; i < n_; ++i) r[i] = std::min(r[i], e[i]);
      }
    }
    return r;
  }

  Poly shifted(const Exponent& d, int sign) const {
    Poly r(m_, n_);
    for (const auto& [e, c] : t_) {
      Exponent f = e;
      for (std::size_t i = 0; i < n_; ++i) f[i] += sign * d[i];
      r.t_.emplace(std::move(f), c);
    }
    return r;
  }

  Poly scaled(const CycloNumber& s) const {
    Poly r(m_, n_);
    for (const auto& [e, c] : t_) r.add_term(e, c * s);
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    check(a, b);
    Poly r = a;
    for (const auto& [e, c] : b.t_) r.add_term(e, c);
    return r;
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    check(a, b);
    Poly r = a;
    for (const auto& [e, c] : b.t_) r.add_term(e, -c);
    return r;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    check(a, b);
    Poly r(a.m_, a.n_);
    for (const auto& [ea, ca] : a.t_)
      for (const auto& [eb, cb] : b.t_) {
        Exponent e = ea;
        for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.m_ == b.m_ && a.n_ == b.n_ && a.t_ == b.t_; }

  Poly pow(std::int64_t k) const {
    Poly r = constant(m_, n_, Rational(1));
    for (std::int64_t i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  /// Exact quotient a / b when b divides a, by lex leading-term division.
  friend std::optional<Poly> exact_div(const Poly& a, const Poly& b) {
    check(a, b);
    if (b.is_zero()) throw std::invalid_argument("Poly: division by zero");
    Poly rem = a, q(a.m_, a.n_);
    const auto& [lb, cb] = b.leading();
    CycloNumber cbi = cb.inverse();
    while (!rem.is_zero()) {
      const auto& [lr, cr] = rem.leading();
      Exponent d(lr.size());
      for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = lr[i] - lb[i];
        if (d[i] < 0) return std::nullopt;
      }
      Poly term = monomial(a.m_, d, cr * cbi);
      q = q + term;
      rem = rem - term * b;
    }
    return q;
  }

  std::string str(const std::vector<std::string>& names) const {
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // descending lex for readability
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
      const auto& [e, c] = *it;
      std::string cs = c.str();
      bool simple_neg = c.is_rational() && c.coeffs()[0] < 0;
      bool compound = !c.is_rational() && cs.find_first_of("+-", 1) != std::string::npos;
      std::string mono;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!mono.empty()) mono += '*';
        mono += names.at(i);
        if (e[i] != 1) mono += '^' + std::to_string(e[i]);
      }
      if (!first) os << (simple_neg ? " - " : " + ");
      else if (simple_neg) os << '-';
      first = false;
      std::string coef = simple_neg ? (-c).str() : cs;
      if (compound) coef = '(' + coef + ')';
      if (mono.empty()) os << coef;
      else if (coef == "1") os << mono;
      else os << coef << '*' << mono;
    }
    return os.str();
  }

 private:
  static bool is_zero_exp(const Exponent& e) {
    return std::all_of(e.begin(), e.end(), [](std::int64_t x) { return x == 0; });
  }
  static void check(const Poly& a, const Poly& b) {
    if (a.m_ != b.m_ || a.n_ != b.n_) throw std::invalid_argument("Poly: ring mismatch");
  }

  std::int64_t m_ = 1;
  std::size_t n_ = 0;
  std::map<Exponent, CycloNumber> t_;
};

/// num / den over Q(zeta_m)[vars]; kept reduced as described above.
class RationalFn {
 public:
  RationalFn() = default;
  RationalFn(std::vector<std::string> vars, Poly num, Poly den)
      : vars_(std::move(vars)), num_(std::move(num)), den_(std::move(den)) {
    reduce();
  }
  RationalFn(std::vector<std::string> vars, Poly num)
      : RationalFn(vars, num, Poly::constant(num.modulus(), num.nvars(), Rational(1))) {}

  static RationalFn constant(const std::vector<std::string>& vars, std::int64_t m, const CycloNumber& c) {
    return {vars, Poly::constant(m, vars.size(), c)};
  }
  static RationalFn constant(const std::vector<std::string>& vars, std::int64_t m, const Rational& q) {
    return {vars, Poly::constant(m, vars.size(), q)};
  }
  static RationalFn variable(const std::vector<std::string>& vars, std::int64_t m, std::size_t i) {
    return {vars, Poly::variable(m, vars.size(), i)};
  }
  static RationalFn variable(const std::vector<std::string>& vars, std::int64_t m, const std::string& name) {
    auto it = std::find(vars.begin(), vars.end(), name);
    if (it == vars.end()) throw std::invalid_argument("RationalFn: unknown variable " + name);
    return variable(vars, m, static_cast<std::size_t>(it - vars.begin()));
  }
  /// c * prod vars^e with e possibly negative.
  static RationalFn laurent(const std::vector<std::string>& vars, std::int64_t m, const Exponent& e,
                            const CycloNumber& c) {
    Exponent pos(e.size(), 0), neg(e.size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) (e[i] >= 0 ? pos[i] : neg[i]) = e[i] >= 0 ? e[i] : -e[i];
    return {vars, Poly::monomial(m, pos, c), Poly::monomial(m, neg, CycloNumber::one(m))};
  }

  const std::vector<std::string>& vars() const { return vars_; }
  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  std::int64_t modulus() const { return num_.modulus(); }
  bool is_zero() const { return num_.is_zero(); }
  std::int64_t total_degree() const { return std::max(num_.total_degree(), den_.total_degree()); }

  friend RationalFn operator+(const RationalFn& a, const RationalFn& b) { return add(a, b, 1); }
  friend RationalFn operator-(const RationalFn& a, const RationalFn& b) { return add(a, b, -1); }
  friend RationalFn operator*(const RationalFn& a, const RationalFn& b) {
    check(a, b);
    return {a.vars_, a.num_ * b.num_, a.den_ * b.den_};
  }
  friend RationalFn operator/(const RationalFn& a, const RationalFn& b) {
    check(a, b);
    if (b.is_zero()) throw DegenerateSubstitutionError("RationalFn: division by zero");
    return {a.vars_, a.num_ * b.den_, a.den_ * b.num_};
  }
  RationalFn operator-() const { return {vars_, num_.scaled(-CycloNumber::one(modulus())), den_}; }
  RationalFn inverse() const { return RationalFn::constant(vars_, modulus(), Rational(1)) / *this; }
  RationalFn pow(std::int64_t k) const {
    if (k < 0) return inverse().pow(-k);
    return {vars_, num_.pow(k), den_.pow(k)};
  }

  /// Exact equality by cross-multiplication.
  friend bool operator==(const RationalFn& a, const RationalFn& b) {
    return a.vars_ == b.vars_ && a.num_ * b.den_ == b.num_ * a.den_;
  }

  std::string str() const {
    std::string n = num_.str(vars_);
    if (den_.is_constant() && den_.terms().begin()->second.is_one()) return n;
    auto wrap = [](const Poly& p, const std::string& s) {
      return p.terms().size() > 1 ? "(" + s + ")" : s;
    };
    return wrap(num_, n) + "/" + wrap(den_, den_.str(vars_));
  }

 private:
  static void check(const RationalFn& a, const RationalFn& b) {
    if (a.vars_ != b.vars_) throw std::invalid_argument("RationalFn: variable lists differ");
  }

  // There is no multivariate gcd here, so sums reuse a denominator whenever
  // one divides the other; otherwise 1 - t_1 - ... - t_{p-1} keeps a spurious
  // power of t_0.
  static RationalFn add(const RationalFn& a, const RationalFn& b, int sign) {
    check(a, b);
    Poly bn = sign > 0 ? b.num_ : b.num_.scaled(-CycloNumber::one(b.modulus()));
    if (a.den_ == b.den_) return {a.vars_, a.num_ + bn, a.den_};
    if (auto q = exact_div(b.den_, a.den_)) return {a.vars_, a.num_ * *q + bn, b.den_};
    if (auto q = exact_div(a.den_, b.den_)) return {a.vars_, a.num_ + bn * *q, a.den_};
    return {a.vars_, a.num_ * b.den_ + bn * a.den_, a.den_ * b.den_};
  }

  void reduce() {
    if (den_.is_zero()) throw DegenerateSubstitutionError("RationalFn: zero denominator");
    if (num_.is_zero()) {
      den_ = Poly::constant(den_.modulus(), den_.nvars(), Rational(1));
      return;
    }
    // monomial content
    Exponent mn = num_.min_exponent(), md = den_.min_exponent();
    Exponent common(mn.size());
    for (std::size_t i = 0; i < mn.size(); ++i) common[i] = std::min(mn[i], md[i]);
    num_ = num_.shifted(common, -1);
    den_ = den_.shifted(common, -1);
    if (auto q = exact_div(num_, den_)) {
      num_ = *q;
      den_ = Poly::constant(den_.modulus(), den_.nvars(), Rational(1));
    } else if (auto q2 = exact_div(den_, num_)) {
      den_ = *q2;
      num_ = Poly::constant(num_.modulus(), num_.nvars(), Rational(1));
    }
    CycloNumber lc = den_.leading().second.inverse();
    num_ = num_.scaled(lc);
    den_ = den_.scaled(lc);
  }

  std::vector<std::string> vars_;
  Poly num_, den_;
};

/// Simultaneous substitution of the domain variables by rational functions in
/// a (possibly different) target variable list.
struct Substitution {
  std::vector<std::string> domain;
  std::vector<RationalFn> images;

  const std::vector<std::string>& target_vars() const {
    if (images.empty()) throw std::invalid_argument("Substitution: empty");
    return images.front().vars();
  }

  static Substitution identity(const std::vector<std::string>& vars, std::int64_t m) {
    Substitution s{vars, {}};
    for (std::size_t i = 0; i < vars.size(); ++i) s.images.push_back(RationalFn::variable(vars, m, i));
    return s;
  }
};

inline RationalFn apply(const Substitution& s, const Poly& p, const std::vector<std::string>& p_vars) {
  const auto& tv = s.target_vars();
  const std::int64_t m = s.images.front().modulus();
  std::vector<std::size_t> where(p_vars.size());
  for (std::size_t i = 0; i < p_vars.size(); ++i) {
    auto it = std::find(s.domain.begin(), s.domain.end(), p_vars[i]);
    if (it == s.domain.end()) throw std::invalid_argument("apply: variable " + p_vars[i] + " outside substitution");
    where[i] = static_cast<std::size_t>(it - s.domain.begin());
  }
  // common denominator prod h_i^{E_i}
  Exponent maxe(p_vars.size(), 0);
  for (const auto& [e, c] : p.terms())
    for (std::size_t i = 0; i < e.size(); ++i) maxe[i] = std::max(maxe[i], e[i]);
  Poly den = Poly::constant(m, tv.size(), Rational(1));
  for (std::size_t i = 0; i < maxe.size(); ++i) den = den * s.images[where[i]].den().pow(maxe[i]);
  Poly num(m, tv.size());
  for (const auto& [e, c] : p.terms()) {
    if (c.modulus() != m) throw std::invalid_argument("apply: coefficient field mismatch");
    Poly t = Poly::constant(m, tv.size(), c);
    for (std::size_t i = 0; i < e.size(); ++i) {
      const auto& img = s.images[where[i]];
      t = t * img.num().pow(e[i]) * img.den().pow(maxe[i] - e[i]);
    }
    num = num + t;
  }
  return {tv, num, den};
}

/// Exact composition f(images); throws DegenerateSubstitutionError when the
/// denominator of f vanishes identically after substitution.
inline RationalFn apply(const Substitution& s, const RationalFn& f) {
  RationalFn n = apply(s, f.num(), f.vars());
  RationalFn d = apply(s, f.den(), f.vars());
  if (d.is_zero()) throw DegenerateSubstitutionError("apply: denominator vanishes after substitution");
  return n / d;
}

/// s2 after s1: x -> s2(s1(x)).
inline Substitution compose(const Substitution& s2, const Substitution& s1) {
  Substitution r{s1.domain, {}};
  for (const auto& img : s1.images) r.images.push_back(apply(s2, img));
  return r;
}

/// A monomial automorphism on named variables as a substitution; scalars are
/// zeta_modulus^k embedded in Q(zeta_m).
inline Substitution from_monomial(const mono::MonomialAutomorphism& g, const std::vector<std::string>& vars,
                                  std::int64_t m) {
  Substitution s{vars, {}};
  for (std::size_t j = 0; j < g.rank(); ++j) {
    Exponent e = g.matrix().column(j);
    auto c = CycloNumber::from_root(m, cyclo::RootOfUnity(g.modulus(), g.scalars()[j]));
    s.images.push_back(RationalFn::laurent(vars, m, e, c));
  }
  return s;
}

// ---------------------------------------------------------------------------
// t-linearization

struct TTuple {
  std::int64_t p = 2;
  std::vector<std::string> vars;  // v_1 .. v_{p-1}
  RationalFn t0;
  std::vector<RationalFn> t;  // t[i] = t_i for 1 <= i <= p; t[0] unused (= t0)
};

/// t_0 = 1 + v_1 + v_1 v_2 + ... + v_1...v_{p-1}, t_1 = 1/t_0,
/// t_i = v_1...v_{i-1}/t_0, and t_p = 1 - t_1 - ... - t_{p-1}.
inline TTuple build_t_substitution(std::int64_t p, const std::string& base = "v", std::int64_t m = 1) {
  if (p != 2 && p != 3 && p != 5) throw ParameterRangeError("build_t_substitution: p must be 2, 3 or 5");
  TTuple r;
  r.p = p;
  for (std::int64_t i = 1; i < p; ++i) r.vars.push_back(base + std::to_string(i));
  const auto& V = r.vars;
  const std::size_t k = V.size();
  auto prefix = [&](std::int64_t upto) {  // v_1 ... v_upto
    Exponent e(k, 0);
    for (std::int64_t j = 0; j < upto; ++j) e[static_cast<std::size_t>(j)] = 1;
    return Poly::monomial(m, e, CycloNumber::one(m));
  };
  Poly t0(m, k);
  for (std::int64_t i = 0; i < p; ++i) t0 = t0 + prefix(i);
  r.t0 = RationalFn(V, t0);
  r.t.push_back(r.t0);
  for (std::int64_t i = 1; i < p; ++i) r.t.push_back(RationalFn(V, prefix(i - 1), t0));
  RationalFn tp = RationalFn::constant(V, m, Rational(1));
  for (std::int64_t i = 1; i < p; ++i) tp = tp - r.t[static_cast<std::size_t>(i)];
  r.t.push_back(tp);
  return r;
}

/// sum_{1 <= i <= p} t_i == 1.
inline bool t_sum_is_one(const TTuple& tt) {
  RationalFn s = RationalFn::constant(tt.vars, tt.t0.modulus(), Rational(0));
  for (std::int64_t i = 1; i <= tt.p; ++i) s = s + tt.t[static_cast<std::size_t>(i)];
  return s == RationalFn::constant(tt.vars, tt.t0.modulus(), Rational(1));
}

struct LinearizationReport {
  bool images_ok = false;    // tau(t_i) = t_{i+1}, tau(t_{p-1}) = t_p
  bool t0_ok = false;        // tau(t_0) = t_0 / v_1
  bool sum_ok = false;
  bool roundtrip_ok = false;  // v_i = t_{i+1}/t_i and back
  std::vector<std::string> images;  // rendered tau(t_i)
  bool ok() const { return images_ok && t0_ok && sum_ok && roundtrip_ok; }
};

/// Round trip through the recovered inverse v_i = t_{i+1}/t_i, in free
/// variables t_1..t_{p-1}: both compositions must be the identity.
inline bool t_roundtrip(const TTuple& tt) {
  const std::int64_t p = tt.p, m = tt.t0.modulus();
  std::vector<std::string> T;
  for (std::int64_t i = 1; i < p; ++i) T.push_back("t" + std::to_string(i));
  auto tfree = [&](std::int64_t i) {
    if (i < p) return RationalFn::variable(T, m, static_cast<std::size_t>(i - 1));
    RationalFn s = RationalFn::constant(T, m, Rational(1));
    for (std::int64_t j = 1; j < p; ++j) s = s - RationalFn::variable(T, m, static_cast<std::size_t>(j - 1));
    return s;
  };
  Substitution inv{tt.vars, {}};  // v_i in terms of t
  for (std::int64_t i = 1; i < p; ++i) inv.images.push_back(tfree(i + 1) / tfree(i));
  Substitution fwd{T, {}};  // t_i in terms of v
  for (std::int64_t i = 1; i < p; ++i) fwd.images.push_back(tt.t[static_cast<std::size_t>(i)]);
  Substitution vv = compose(fwd, inv);  // v -> t(v) recovered -> v
  Substitution ttt = compose(inv, fwd);
  for (std::int64_t i = 1; i < p; ++i) {
    const auto k = static_cast<std::size_t>(i - 1);
    if (!(vv.images[k] == RationalFn::variable(tt.vars, m, k))) return false;
    if (!(ttt.images[k] == RationalFn::variable(T, m, k))) return false;
  }
  return true;
}

/// tau given as a substitution on the v's.
inline LinearizationReport verify_linearization(const Substitution& tau, const TTuple& tt) {
  LinearizationReport r;
  const std::int64_t p = tt.p;
  r.images_ok = true;
  for (std::int64_t i = 1; i < p; ++i) {
    RationalFn img = apply(tau, tt.t[static_cast<std::size_t>(i)]);
    r.images.push_back(img.str());
    if (!(img == tt.t[static_cast<std::size_t>(i + 1)])) r.images_ok = false;
  }
  RationalFn v1 = RationalFn::variable(tt.vars, tt.t0.modulus(), 0);
  r.t0_ok = apply(tau, tt.t0) == tt.t0 / v1;
  r.sum_ok = t_sum_is_one(tt);
  r.roundtrip_ok = t_roundtrip(tt);
  return r;
}

struct AffineShiftReport {
  bool ok = false;
  zlat::IntMatrix linear{0, 0};  // columns: images of T_1..T_{p-1} in the T basis
  std::vector<std::string> images;
};

/// T_i = t_i - 1/p. Expected: T_i -> T_{i+1} (i < p-1), T_{p-1} -> -T_1 - ... - T_{p-1},
/// with zero constant term.
inline AffineShiftReport affine_shift_check(const Substitution& tau, const TTuple& tt) {
  AffineShiftReport r;
  const std::int64_t p = tt.p, m = tt.t0.modulus();
  const std::size_t k = static_cast<std::size_t>(p - 1);
  RationalFn shift = RationalFn::constant(tt.vars, m, Rational(1, p));
  std::vector<RationalFn> T;
  for (std::int64_t i = 1; i < p; ++i) T.push_back(tt.t[static_cast<std::size_t>(i)] - shift);
  r.linear = zlat::IntMatrix(k, k);
  r.ok = true;
  for (std::size_t i = 0; i < k; ++i) {
    RationalFn img = apply(tau, T[i]);
    RationalFn expect = RationalFn::constant(tt.vars, m, Rational(0));
    if (i + 1 < k) {
      expect = T[i + 1];
      r.linear(i + 1, i) = 1;
    } else {
      for (std::size_t j = 0; j < k; ++j) {
        expect = expect - T[j];
        r.linear(j, i) = -1;
      }
    }
    r.images.push_back(i + 1 < k ? "T" + std::to_string(i + 2) : (k == 1 ? "-T1" : "-T1-...-T" + std::to_string(k)));
    if (!(img == expect)) r.ok = false;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Moebius substitutions

/// v = (1 - c u)/(1 + c u) when plus_form, else v = (1 + c u)/(1 - c u).
struct MobiusDef {
  std::string u, v;
  RootOfUnity c{1, 0};
  bool plus_form = true;
};

/// Image of every v under a generator acting on the u-variables; u's not
/// covered by a definition pass through unchanged. `vars` lists the u-side
/// variables; the result lives on the v-side list (u replaced by v).
struct MobiusTable {
  std::vector<std::string> v_vars;
  std::vector<RationalFn> images;  // per v-variable, in v-coordinates
  std::vector<std::string> rendered;
};

inline MobiusTable mobius_transform(const Substitution& g_on_u, const std::vector<MobiusDef>& defs, std::int64_t m) {
  const auto& U = g_on_u.domain;
  MobiusTable out;
  out.v_vars = U;
  std::vector<int> def_of(U.size(), -1);
  for (std::size_t d = 0; d < defs.size(); ++d) {
    auto it = std::find(U.begin(), U.end(), defs[d].u);
    if (it == U.end()) throw std::invalid_argument("mobius: unknown variable " + defs[d].u);
    auto i = static_cast<std::size_t>(it - U.begin());
    def_of[i] = static_cast<int>(d);
    out.v_vars[i] = defs[d].v;
  }
  const auto& V = out.v_vars;
  RationalFn one_u = RationalFn::constant(U, m, Rational(1));
  RationalFn one_v = RationalFn::constant(V, m, Rational(1));
  // forward: v-variable in u-coordinates; backward: u-variable in v-coordinates
  Substitution back{U, {}};
  std::vector<RationalFn> fwd;
  for (std::size_t i = 0; i < U.size(); ++i) {
    if (def_of[i] < 0) {
      fwd.push_back(RationalFn::variable(U, m, i));
      back.images.push_back(RationalFn::variable(V, m, i));
      continue;
    }
    const auto& d = defs[static_cast<std::size_t>(def_of[i])];
    RationalFn c_u = RationalFn::constant(U, m, CycloNumber::from_root(m, d.c));
    RationalFn c_v = RationalFn::constant(V, m, CycloNumber::from_root(m, d.c));
    RationalFn cu = c_u * RationalFn::variable(U, m, i);
    RationalFn v = RationalFn::variable(V, m, i);
    if (d.plus_form) {
      fwd.push_back((one_u - cu) / (one_u + cu));
      back.images.push_back((one_v - v) / (c_v * (one_v + v)));
    } else {
      fwd.push_back((one_u + cu) / (one_u - cu));
      back.images.push_back((v - one_v) / (c_v * (v + one_v)));
    }
  }
  Substitution g_then_back = compose(back, g_on_u);  // u -> g(u) in v-coordinates
  for (std::size_t i = 0; i < U.size(); ++i) {
    RationalFn img = apply(g_then_back, fwd[i]);
    out.rendered.push_back(V[i] + " -> " + img.str());
    out.images.push_back(std::move(img));
  }
  return out;
}

/// True iff the transformed action matches `expected` (images in v-coordinates).
inline bool mobius_check(const Substitution& g_on_u, const std::vector<MobiusDef>& defs,
                         const std::vector<RationalFn>& expected, std::int64_t m) {
  MobiusTable t = mobius_transform(g_on_u, defs, m);
  if (expected.size() != t.images.size()) return false;
  for (std::size_t i = 0; i < expected.size(); ++i)
    if (!(t.images[i] == expected[i])) return false;
  return true;
}

/// Largest total degree among the reduced fractions; exceeding `bound` means
/// expression growth escaped the intended scope.
inline void degree_sanity(const std::vector<RationalFn>& fs, std::int64_t bound) {
  for (const auto& f : fs)
    if (f.total_degree() > bound)
      throw StructuralError("degree sanity: " + f.str() + " exceeds total degree " + std::to_string(bound));
}

}  // namespace noether::bir
