#pragma once

// Exact arithmetic for roots of unity, the cyclotomic fields Q(zeta_N) and the
// ring Z[omega] = Z[T]/Phi_p(T) of p-th cyclotomic integers.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "noether/error.hpp"
#include "noether/intmat.hpp"

namespace noether::cyclo {

using Rational = boost::multiprecision::cpp_rational;
using zlat::IntVec;

inline std::string rational_str(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

// ---------------------------------------------------------------------------
// Roots of unity

/// zeta_m^e with 0 <= e < m.
struct RootOfUnity {
  std::int64_t modulus = 1;
  std::int64_t exponent = 0;

  RootOfUnity() = default;
  RootOfUnity(std::int64_t m, std::int64_t e) : modulus(m), exponent(0) {
    if (m <= 0) throw std::invalid_argument("RootOfUnity modulus must be positive");
    exponent = zlat::mod_floor(e, m);
  }

  static RootOfUnity one() { return {1, 0}; }

  std::int64_t order() const { return modulus / std::gcd(modulus, exponent == 0 ? modulus : exponent); }
  bool is_one() const { return exponent == 0; }

  /// Same element written over a multiple of the modulus.
  RootOfUnity lifted(std::int64_t m) const {
    if (m % modulus != 0) throw std::invalid_argument("RootOfUnity::lifted: not a multiple");
    return {m, exponent * (m / modulus)};
  }
  /// Smallest modulus representation.
  RootOfUnity reduced() const {
    std::int64_t g = std::gcd(modulus, exponent);
    if (exponent == 0) return one();
    return {modulus / g, exponent / g};
  }

  RootOfUnity inverse() const { return {modulus, -exponent}; }
  RootOfUnity pow(std::int64_t k) const {
    return {modulus, zlat::mod_floor(static_cast<std::int64_t>((static_cast<__int128>(exponent) * k) % modulus), modulus)};
  }

  friend bool operator==(const RootOfUnity& a, const RootOfUnity& b) {
    auto ra = a.reduced(), rb = b.reduced();
    return ra.modulus == rb.modulus && ra.exponent == rb.exponent;
  }

  std::string str() const {
    if (exponent == 0) return "1";
    std::ostringstream os;
    os << "z" << modulus << "^" << exponent;
    return os.str();
  }
};

inline RootOfUnity root_mul(const RootOfUnity& a, const RootOfUnity& b) {
  std::int64_t m = std::lcm(a.modulus, b.modulus);
  return {m, a.lifted(m).exponent + b.lifted(m).exponent};
}

inline RootOfUnity operator*(const RootOfUnity& a, const RootOfUnity& b) { return root_mul(a, b); }

// ---------------------------------------------------------------------------
// Integer polynomials (dense, coefficient of x^i at index i)

inline void trim(IntVec& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

/// Exact quotient of a by a monic polynomial b (remainder must be zero).
inline IntVec poly_exact_div(IntVec a, const IntVec& b) {
  trim(a);
  if (b.empty() || b.back() != 1) throw std::invalid_argument("poly_exact_div: divisor must be monic");
  if (a.size() < b.size()) {
    if (!a.empty()) throw StructuralError("poly_exact_div: nonzero remainder");
    return {};
  }
  IntVec q(a.size() - b.size() + 1, 0);
  for (std::size_t k = q.size(); k-- > 0;) {
    std::int64_t c = a[k + b.size() - 1];
    q[k] = c;
    for (std::size_t i = 0; i < b.size(); ++i) a[k + i] = zlat::checked_sub(a[k + i], zlat::checked_mul(c, b[i]));
  }
  trim(a);
  if (!a.empty()) throw StructuralError("poly_exact_div: nonzero remainder");
  return q;
}

/// The N-th cyclotomic polynomial, coefficients in increasing degree.
inline IntVec cyclotomic_polynomial(std::int64_t n) {
  if (n <= 0) throw std::invalid_argument("cyclotomic_polynomial: n must be positive");
  IntVec num(static_cast<std::size_t>(n) + 1, 0);
  num[0] = -1;
  num[static_cast<std::size_t>(n)] = 1;
  for (std::int64_t d = 1; d < n; ++d)
    if (n % d == 0) num = poly_exact_div(num, cyclotomic_polynomial(d));
  return num;
}

inline std::int64_t euler_phi(std::int64_t n) {
  std::int64_t result = n;
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  if (n > 1) result -= result / n;
  return result;
}

// ---------------------------------------------------------------------------
// Q(zeta_N)

/// Reduction data for Q(zeta_N) in the power basis 1, z, ..., z^(phi-1).
class CycloField {
 public:
  explicit CycloField(std::int64_t n) : n_(n), phi_(euler_phi(n)), poly_(cyclotomic_polynomial(n)) {
    // powers_[k] = z^k reduced, for 0 <= k < n.
    const auto deg = static_cast<std::size_t>(phi_);
    IntVec cur(deg, 0);
    cur[0] = 1;
    for (std::int64_t k = 0; k < n_; ++k) {
      powers_.push_back(cur);
      // multiply by z
      std::int64_t top = cur[deg - 1];
      for (std::size_t i = deg - 1; i > 0; --i) cur[i] = cur[i - 1];
      cur[0] = 0;
      if (top != 0)
        for (std::size_t i = 0; i < deg; ++i) cur[i] = zlat::checked_sub(cur[i], zlat::checked_mul(top, poly_[i]));
    }
  }

  std::int64_t modulus() const { return n_; }
  std::size_t degree() const { return static_cast<std::size_t>(phi_); }
  const IntVec& polynomial() const { return poly_; }
  /// z^k reduced, for any integer k.
  const IntVec& power(std::int64_t k) const { return powers_[static_cast<std::size_t>(zlat::mod_floor(k, n_))]; }

 private:
  std::int64_t n_;
  std::int64_t phi_;
  IntVec poly_;
  std::vector<IntVec> powers_;
};

using FieldPtr = std::shared_ptr<const CycloField>;

/// Shared, immutable field descriptors keyed by modulus.
inline FieldPtr field(std::int64_t n) {
  static std::mutex mu;
  static std::map<std::int64_t, FieldPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto f = std::make_shared<const CycloField>(n);
  cache.emplace(n, f);
  return f;
}

/// Element of Q(zeta_N) in canonical reduced form (power basis mod Phi_N).
class CycloNumber {
 public:
  CycloNumber() : CycloNumber(field(1)) {}
  explicit CycloNumber(FieldPtr f) : f_(std::move(f)), c_(f_->degree()) {}
  CycloNumber(FieldPtr f, const Rational& q) : CycloNumber(std::move(f)) { c_[0] = q; }

  static CycloNumber zero(std::int64_t n) { return CycloNumber(field(n)); }
  static CycloNumber one(std::int64_t n) { return CycloNumber(field(n), Rational(1)); }

  /// zeta_N^k.
  static CycloNumber zeta_power(std::int64_t n, std::int64_t k) {
    CycloNumber r(field(n));
    const IntVec& v = r.f_->power(k);
    for (std::size_t i = 0; i < v.size(); ++i) r.c_[i] = v[i];
    return r;
  }

  /// Embeds zeta_m^e into Q(zeta_N); needs m | N, or N odd and m | 2N.
  static CycloNumber from_root(std::int64_t n, const RootOfUnity& r0) {
    RootOfUnity r = r0;
    {
      std::int64_t e = ((r.exponent % r.modulus) + r.modulus) % r.modulus;
      std::int64_t g = std::gcd(e, r.modulus);  // gcd(0, m) = m
      r = RootOfUnity(r.modulus / g, e / g);
    }
    if (n % r.modulus == 0) return zeta_power(n, r.exponent * (n / r.modulus));
    if (n % 2 == 1 && (2 * n) % r.modulus == 0) {
      // zeta_{2N} := -zeta_N^{(N+1)/2}
      std::int64_t e = r.exponent * (2 * n / r.modulus);
      CycloNumber z = zeta_power(n, e * ((n + 1) / 2));
      return (e % 2 == 0) ? z : -z;
    }
    throw std::invalid_argument("root of unity of order " + std::to_string(r.modulus) +
                                " does not embed in Q(zeta_" + std::to_string(n) + ")");
  }

  const FieldPtr& field_ptr() const { return f_; }
  std::int64_t modulus() const { return f_->modulus(); }
  const std::vector<Rational>& coeffs() const { return c_; }

  bool is_zero() const {
    for (const auto& q : c_)
      if (q != 0) return false;
    return true;
  }
  bool is_one() const {
    if (c_[0] != 1) return false;
    for (std::size_t i = 1; i < c_.size(); ++i)
      if (c_[i] != 0) return false;
    return true;
  }
  /// True iff the element lies in Q.
  bool is_rational() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
      if (c_[i] != 0) return false;
    return true;
  }

  CycloNumber& operator+=(const CycloNumber& o) {
    check_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  CycloNumber& operator-=(const CycloNumber& o) {
    check_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  CycloNumber operator-() const {
    CycloNumber r(*this);
    for (auto& q : r.c_) q = -q;
    return r;
  }
  friend CycloNumber operator+(CycloNumber a, const CycloNumber& b) { return a += b; }
  friend CycloNumber operator-(CycloNumber a, const CycloNumber& b) { return a -= b; }

  friend CycloNumber operator*(const CycloNumber& a, const CycloNumber& b) {
    a.check_same(b);
    const std::size_t d = a.c_.size();
    std::vector<Rational> conv(2 * d - 1);
    for (std::size_t i = 0; i < d; ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < d; ++j)
        if (b.c_[j] != 0) conv[i + j] += a.c_[i] * b.c_[j];
    }
    CycloNumber r(a.f_);
    for (std::size_t k = 0; k < conv.size(); ++k) {
      if (conv[k] == 0) continue;
      if (k < d) {
        r.c_[k] += conv[k];
        continue;
      }
      const IntVec& pk = a.f_->power(static_cast<std::int64_t>(k));
      for (std::size_t i = 0; i < d; ++i)
        if (pk[i] != 0) r.c_[i] += conv[k] * pk[i];
    }
    return r;
  }
  CycloNumber& operator*=(const CycloNumber& o) { return *this = *this * o; }

  friend CycloNumber operator*(const Rational& q, CycloNumber a) {
    for (auto& x : a.c_) x *= q;
    return a;
  }

  /// Multiplicative inverse (throws on zero).
  CycloNumber inverse() const {
    if (is_zero()) throw std::domain_error("CycloNumber::inverse of zero");
    const std::size_t d = c_.size();
    // Columns of M are a * z^j; solve M x = e_0.
    std::vector<std::vector<Rational>> m(d, std::vector<Rational>(d + 1));
    for (std::size_t j = 0; j < d; ++j) {
      CycloNumber col = *this * zeta_power(modulus(), static_cast<std::int64_t>(j));
      for (std::size_t i = 0; i < d; ++i) m[i][j] = col.c_[i];
    }
    m[0][d] = 1;
    for (std::size_t col = 0; col < d; ++col) {
      std::size_t piv = col;
      while (piv < d && m[piv][col] == 0) ++piv;
      if (piv == d) throw std::domain_error("CycloNumber::inverse: singular");
      std::swap(m[piv], m[col]);
      Rational inv = 1 / m[col][col];
      for (std::size_t j = col; j <= d; ++j) m[col][j] *= inv;
      for (std::size_t i = 0; i < d; ++i) {
        if (i == col || m[i][col] == 0) continue;
        Rational f = m[i][col];
        for (std::size_t j = col; j <= d; ++j) m[i][j] -= f * m[col][j];
      }
    }
    CycloNumber r(f_);
    for (std::size_t i = 0; i < d; ++i) r.c_[i] = m[i][d];
    return r;
  }

  friend CycloNumber operator/(const CycloNumber& a, const CycloNumber& b) { return a * b.inverse(); }

  CycloNumber pow(std::int64_t k) const {
    if (k < 0) return inverse().pow(-k);
    CycloNumber r = one(modulus()), base = *this;
    while (k > 0) {
      if (k & 1) r = r * base;
      base = base * base;
      k >>= 1;
    }
    return r;
  }

  friend bool operator==(const CycloNumber& a, const CycloNumber& b) {
    return a.modulus() == b.modulus() && a.c_ == b.c_;
  }

  /// If this equals a root of unity of order dividing `m`, its exponent mod m.
  std::optional<RootOfUnity> as_root(std::int64_t m) const {
    for (std::int64_t e = 0; e < m; ++e) {
      RootOfUnity r(m, e);
      if (from_root(modulus(), r) == *this) return r;
    }
    return std::nullopt;
  }

  /// Polynomial in z = zeta_N with increasing powers, e.g. "1 - 2*z + z^3".
  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      Rational q = c_[i];
      bool neg = q < 0;
      if (neg) q = -q;
      if (first)
        os << (neg ? "-" : "");
      else
        os << (neg ? " - " : " + ");
      first = false;
      if (i == 0) {
        os << q;
      } else {
        if (q != 1) os << q << '*';
        os << 'z';
        if (i > 1) os << '^' << i;
      }
    }
    if (first) os << '0';
    return os.str();
  }

 private:
  void check_same(const CycloNumber& o) const {
    if (f_->modulus() != o.f_->modulus()) throw std::invalid_argument("CycloNumber field mismatch");
  }

  FieldPtr f_;
  std::vector<Rational> c_;
};

// ---------------------------------------------------------------------------
// Z[omega] = Z[T]/Phi_p(T)

/// Integer element of Z[T]/Phi_p(T) in the basis 1, T, ..., T^(p-2).
class ZOmegaElem {
 public:
  ZOmegaElem() = default;
  ZOmegaElem(std::int64_t p, IntVec coeffs) : p_(p), c_(std::move(coeffs)) {
    if (c_.size() != static_cast<std::size_t>(p - 1)) throw std::invalid_argument("ZOmegaElem: wrong length");
  }
  static ZOmegaElem zero(std::int64_t p) { return {p, IntVec(static_cast<std::size_t>(p - 1), 0)}; }
  static ZOmegaElem constant(std::int64_t p, std::int64_t c) {
    auto z = zero(p);
    z.c_[0] = c;
    return z;
  }

  std::int64_t prime() const { return p_; }
  const IntVec& coeffs() const { return c_; }
  bool is_zero() const {
    for (auto x : c_)
      if (x != 0) return false;
    return true;
  }

  friend ZOmegaElem operator+(const ZOmegaElem& a, const ZOmegaElem& b);
  friend ZOmegaElem operator-(const ZOmegaElem& a, const ZOmegaElem& b);
  friend ZOmegaElem operator*(const ZOmegaElem& a, const ZOmegaElem& b);
  friend bool operator==(const ZOmegaElem&, const ZOmegaElem&) = default;

  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      std::int64_t q = c_[i];
      bool neg = q < 0;
      if (neg) q = -q;
      os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
      first = false;
      if (i == 0)
        os << q;
      else {
        if (q != 1) os << q << '*';
        os << 'T';
        if (i > 1) os << '^' << i;
      }
    }
    if (first) os << '0';
    return os.str();
  }

 private:
  std::int64_t p_ = 2;
  IntVec c_{0};
};

/// Canonical representative of an integer polynomial in T modulo Phi_p(T).
inline ZOmegaElem phi_p_reduce(const IntVec& poly, std::int64_t p) {
  if (p < 2) throw std::invalid_argument("phi_p_reduce: p must be prime");
  // T^p = 1 mod Phi_p, then T^(p-1) = -(1 + T + ... + T^(p-2)).
  IntVec folded(static_cast<std::size_t>(p), 0);
  for (std::size_t k = 0; k < poly.size(); ++k) {
    auto& slot = folded[k % static_cast<std::size_t>(p)];
    slot = zlat::checked_add(slot, poly[k]);
  }
  IntVec out(static_cast<std::size_t>(p - 1));
  std::int64_t top = folded[static_cast<std::size_t>(p - 1)];
  for (std::size_t i = 0; i + 1 < folded.size(); ++i) out[i] = zlat::checked_sub(folded[i], top);
  return {p, out};
}

inline ZOmegaElem operator+(const ZOmegaElem& a, const ZOmegaElem& b) {
  IntVec c(a.c_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = zlat::checked_add(a.c_[i], b.c_[i]);
  return {a.p_, c};
}
inline ZOmegaElem operator-(const ZOmegaElem& a, const ZOmegaElem& b) {
  IntVec c(a.c_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = zlat::checked_sub(a.c_[i], b.c_[i]);
  return {a.p_, c};
}
inline ZOmegaElem operator*(const ZOmegaElem& a, const ZOmegaElem& b) {
  if (a.p_ != b.p_) throw std::invalid_argument("ZOmegaElem prime mismatch");
  IntVec conv(a.c_.size() + b.c_.size(), 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j)
      conv[i + j] = zlat::checked_add(conv[i + j], zlat::checked_mul(a.c_[i], b.c_[j]));
  return phi_p_reduce(conv, a.p_);
}

/// Integer matrix of multiplication by `a` on the Z-basis 1, T, ..., T^(p-2).
inline zlat::IntMatrix multiplication_matrix(const ZOmegaElem& a) {
  const std::int64_t p = a.prime();
  const auto d = static_cast<std::size_t>(p - 1);
  zlat::IntMatrix m(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    IntVec tj(d + 1, 0);
    tj[j] = 1;
    ZOmegaElem col = a * phi_p_reduce(tj, p);
    for (std::size_t i = 0; i < d; ++i) m(i, j) = col.coeffs()[i];
  }
  return m;
}

/// Companion matrix of Phi_p: multiplication by T.
inline zlat::IntMatrix companion_phi(std::int64_t p) {
  IntVec t(2, 0);
  t[1] = 1;
  if (p == 2) return zlat::IntMatrix{{-1}};
  return multiplication_matrix(phi_p_reduce(t, p));
}

using ZOmegaMatrix = std::vector<std::vector<ZOmegaElem>>;

/// Solves A x = b over Z[omega]. The system is rewritten over Z by restriction
/// of scalars (each entry becomes its (p-1)x(p-1) multiplication matrix) and
/// handed to the Smith-form solver; the result is checked by substitution.
inline std::optional<std::vector<ZOmegaElem>> zomega_solve(const ZOmegaMatrix& a, const std::vector<ZOmegaElem>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("zomega_solve: row count mismatch");
  if (a.empty()) return std::vector<ZOmegaElem>{};
  const std::size_t rows = a.size(), cols = a[0].size();
  const std::int64_t p = b[0].prime();
  const auto d = static_cast<std::size_t>(p - 1);
  zlat::IntMatrix big(rows * d, cols * d);
  IntVec rhs(rows * d);
  for (std::size_t i = 0; i < rows; ++i) {
    if (a[i].size() != cols) throw std::invalid_argument("zomega_solve: ragged matrix");
    for (std::size_t j = 0; j < cols; ++j) {
      zlat::IntMatrix m = multiplication_matrix(a[i][j]);
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) big(i * d + r, j * d + c) = m(r, c);
    }
    for (std::size_t r = 0; r < d; ++r) rhs[i * d + r] = b[i].coeffs()[r];
  }
  auto sol = zlat::solve_integer(big, rhs);
  if (!sol) return std::nullopt;
  std::vector<ZOmegaElem> x;
  for (std::size_t j = 0; j < cols; ++j)
    x.emplace_back(p, IntVec(sol->begin() + static_cast<std::ptrdiff_t>(j * d),
                             sol->begin() + static_cast<std::ptrdiff_t>((j + 1) * d)));
  for (std::size_t i = 0; i < rows; ++i) {
    ZOmegaElem acc = ZOmegaElem::zero(p);
    for (std::size_t j = 0; j < cols; ++j) acc = acc + a[i][j] * x[j];
    if (!(acc == b[i])) throw StructuralError("zomega_solve: substitution check failed");
  }
  return x;
}

}  // namespace noether::cyclo
