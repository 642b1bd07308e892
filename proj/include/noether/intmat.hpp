#pragma once

// Dense integer matrices and the Smith/Hermite normal form engine used for
// every kernel, index, solve and change-of-basis computation on exponent
// lattices. Sizes in this project stay below ~20x20, so int64 with explicit
// overflow traps is enough.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "noether/error.hpp"

namespace noether::zlat {

using IntVec = std::vector<std::int64_t>;

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("int64 add overflow");
  return r;
}
inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("int64 sub overflow");
  return r;
}
inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("int64 mul overflow");
  return r;
}

/// Floor division for signed operands (b != 0).
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Non-negative residue of a mod m (m > 0).
inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  a = std::llabs(a);
  b = std::llabs(b);
  while (b != 0) {
    std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::int64_t lcm64(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  return checked_mul(std::llabs(a) / gcd64(a, b), std::llabs(b));
}

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw std::invalid_argument("ragged IntMatrix initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  /// Matrix whose columns are the given vectors (all of length `rows`).
  static IntMatrix from_columns(const std::vector<IntVec>& cols, std::size_t rows) {
    IntMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw std::invalid_argument("column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  static IntMatrix from_rows(const std::vector<IntVec>& rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw std::invalid_argument("row length mismatch");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::int64_t& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntVec column(std::size_t j) const {
    IntVec v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  IntVec row(std::size_t i) const {
    return IntVec(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }
  std::vector<IntVec> columns() const {
    std::vector<IntVec> out;
    out.reserve(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
    return out;
  }

  IntMatrix transposed() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](std::int64_t x) { return x == 0; });
  }
  bool is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
    return true;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  /// row[dst] += k * row[src]
  void add_row(std::size_t dst, std::size_t src, std::int64_t k) {
    if (k == 0) return;
    for (std::size_t j = 0; j < cols_; ++j)
      (*this)(dst, j) = checked_add((*this)(dst, j), checked_mul(k, (*this)(src, j)));
  }
  /// col[dst] += k * col[src]
  void add_col(std::size_t dst, std::size_t src, std::int64_t k) {
    if (k == 0) return;
    for (std::size_t i = 0; i < rows_; ++i)
      (*this)(i, dst) = checked_add((*this)(i, dst), checked_mul(k, (*this)(i, src)));
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
  }
  void negate_col(std::size_t j) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = -(*this)(i, j);
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  std::string str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i) os << ", ";
      os << '[';
      for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j);
      os << ']';
    }
    os << ']';
    return os.str();
  }

  /// Row-major nested vectors, for serialization.
  std::vector<IntVec> to_rows() const {
    std::vector<IntVec> out;
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> data_;
};

inline IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      std::int64_t aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        c(i, j) = checked_add(c(i, j), checked_mul(aik, b(k, j)));
    }
  return c;
}

inline IntVec operator*(const IntMatrix& a, const IntVec& v) {
  if (a.cols() != v.size()) throw std::invalid_argument("matrix-vector shape mismatch");
  IntVec out(a.rows(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      out[i] = checked_add(out[i], checked_mul(a(i, j), v[j]));
  return out;
}

inline IntVec vec_add(const IntVec& a, const IntVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vec_add: size mismatch");
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked_add(a[i], b[i]);
  return r;
}
inline IntVec vec_sub(const IntVec& a, const IntVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vec_sub: size mismatch");
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked_sub(a[i], b[i]);
  return r;
}
inline IntVec vec_scale(const IntVec& a, std::int64_t k) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked_mul(a[i], k);
  return r;
}
inline IntVec unit_vec(std::size_t dim, std::size_t i) {
  IntVec r(dim, 0);
  r.at(i) = 1;
  return r;
}

inline IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = checked_add(a(i, j), b(i, j));
  return c;
}

inline IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = checked_sub(a(i, j), b(i, j));
  return c;
}

inline IntMatrix scaled(const IntMatrix& a, std::int64_t k) {
  IntMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = checked_mul(a(i, j), k);
  return c;
}

inline IntMatrix power(const IntMatrix& a, unsigned e) {
  IntMatrix r = IntMatrix::identity(a.rows());
  for (unsigned i = 0; i < e; ++i) r = r * a;
  return r;
}

/// Vertical concatenation [a; b].
inline IntMatrix stack_rows(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("stack_rows width mismatch");
  IntMatrix c(a.rows() + b.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(a.rows() + i, j) = b(i, j);
  return c;
}

/// Horizontal concatenation [a | b].
inline IntMatrix stack_cols(const IntMatrix& a, const IntMatrix& b) {
  return stack_rows(a.transposed(), b.transposed()).transposed();
}

/// U * A * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ... | d_rank, d_i > 0.
struct SmithForm {
  IntMatrix D;
  IntMatrix U;
  IntMatrix V;
  std::size_t rank = 0;

  std::vector<std::int64_t> invariant_factors() const {
    std::vector<std::int64_t> d;
    for (std::size_t i = 0; i < rank; ++i) d.push_back(D(i, i));
    return d;
  }
};

inline SmithForm smith_normal_form(const IntMatrix& a) {
  SmithForm s{a, IntMatrix::identity(a.rows()), IntMatrix::identity(a.cols()), 0};
  IntMatrix& D = s.D;
  const std::size_t r = a.rows(), c = a.cols();
  std::size_t t = 0;
  while (t < std::min(r, c)) {
    // Smallest nonzero entry of the trailing block becomes the pivot.
    std::size_t pi = r, pj = c;
    std::int64_t best = 0;
    for (std::size_t i = t; i < r; ++i)
      for (std::size_t j = t; j < c; ++j)
        if (D(i, j) != 0 && (best == 0 || std::llabs(D(i, j)) < best)) {
          best = std::llabs(D(i, j));
          pi = i;
          pj = j;
        }
    if (best == 0) break;
    D.swap_rows(t, pi);
    s.U.swap_rows(t, pi);
    D.swap_cols(t, pj);
    s.V.swap_cols(t, pj);

    for (;;) {
      bool changed = false;
      for (std::size_t i = t + 1; i < r; ++i) {
        if (D(i, t) == 0) continue;
        std::int64_t q = floor_div(D(i, t), D(t, t));
        D.add_row(i, t, -q);
        s.U.add_row(i, t, -q);
        if (D(i, t) != 0) {
          D.swap_rows(t, i);
          s.U.swap_rows(t, i);
          changed = true;
        }
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        if (D(t, j) == 0) continue;
        std::int64_t q = floor_div(D(t, j), D(t, t));
        D.add_col(j, t, -q);
        s.V.add_col(j, t, -q);
        if (D(t, j) != 0) {
          D.swap_cols(t, j);
          s.V.swap_cols(t, j);
          changed = true;
        }
      }
      if (changed) continue;
      // Pivot must divide the whole trailing block.
      bool divisible = true;
      for (std::size_t i = t + 1; i < r && divisible; ++i)
        for (std::size_t j = t + 1; j < c; ++j)
          if (D(i, j) % D(t, t) != 0) {
            D.add_row(t, i, 1);
            s.U.add_row(t, i, 1);
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    if (D(t, t) < 0) {
      D.negate_row(t);
      s.U.negate_row(t);
    }
    ++t;
  }
  s.rank = t;
  return s;
}

/// Basis (as columns) of the integer kernel {x in Z^c : A x = 0}.
inline std::vector<IntVec> kernel_basis(const IntMatrix& a) {
  SmithForm s = smith_normal_form(a);
  std::vector<IntVec> out;
  for (std::size_t j = s.rank; j < a.cols(); ++j) out.push_back(s.V.column(j));
  return out;
}

/// Some integer solution of A x = b, or nullopt when none exists.
inline std::optional<IntVec> solve_integer(const IntMatrix& a, const IntVec& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve_integer: rhs length mismatch");
  SmithForm s = smith_normal_form(a);
  IntVec ub = s.U * b;
  IntVec y(a.cols(), 0);
  for (std::size_t i = 0; i < ub.size(); ++i) {
    if (i < s.rank) {
      if (ub[i] % s.D(i, i) != 0) return std::nullopt;
      y[i] = ub[i] / s.D(i, i);
    } else if (ub[i] != 0) {
      return std::nullopt;
    }
  }
  return s.V * y;
}

inline std::size_t rank(const IntMatrix& a) { return smith_normal_form(a).rank; }

/// Determinant via fraction-free (Bareiss) elimination.
inline std::int64_t determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant of non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  std::vector<__int128> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = a(i, j);
  __int128 prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k * n + k] == 0) {
      std::size_t sw = k + 1;
      while (sw < n && m[sw * n + k] == 0) ++sw;
      if (sw == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m[k * n + j], m[sw * n + j]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m[i * n + j] = (m[i * n + j] * m[k * n + k] - m[i * n + k] * m[k * n + j]) / prev;
    prev = m[k * n + k];
  }
  __int128 d = m[n * n - 1] * sign;
  if (d > INT64_MAX || d < INT64_MIN) throw OverflowError("determinant overflow");
  return static_cast<std::int64_t>(d);
}

inline bool is_unimodular(const IntMatrix& a) {
  return a.rows() == a.cols() && std::llabs(determinant(a)) == 1;
}

/// Inverse of a unimodular matrix (throws otherwise).
inline IntMatrix unimodular_inverse(const IntMatrix& a) {
  if (!is_unimodular(a)) throw StructuralError("matrix is not unimodular: " + a.str());
  const std::size_t n = a.rows();
  IntMatrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    IntVec e(n, 0);
    e[j] = 1;
    auto x = solve_integer(a, e);
    if (!x) throw StructuralError("unimodular inverse failed");
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = (*x)[i];
  }
  return inv;
}

/// Row-style Hermite normal form of the lattice spanned by `vectors`:
/// returns a basis whose rows are in echelon form with positive pivots and
/// entries above each pivot reduced into [0, pivot). Zero rows are dropped.
inline std::vector<IntVec> hermite_basis(std::vector<IntVec> vectors, std::size_t dim) {
  std::vector<IntVec> rows;
  for (auto& v : vectors) {
    if (v.size() != dim) throw std::invalid_argument("hermite_basis: dimension mismatch");
    if (std::any_of(v.begin(), v.end(), [](std::int64_t x) { return x != 0; })) rows.push_back(std::move(v));
  }
  std::size_t top = 0;
  for (std::size_t col = 0; col < dim && top < rows.size(); ++col) {
    // Euclid on column `col` among rows[top..].
    for (;;) {
      std::size_t piv = rows.size();
      for (std::size_t i = top; i < rows.size(); ++i)
        if (rows[i][col] != 0 && (piv == rows.size() || std::llabs(rows[i][col]) < std::llabs(rows[piv][col])))
          piv = i;
      if (piv == rows.size()) break;
      std::swap(rows[top], rows[piv]);
      bool done = true;
      for (std::size_t i = top + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        std::int64_t q = floor_div(rows[i][col], rows[top][col]);
        for (std::size_t j = 0; j < dim; ++j) rows[i][j] = checked_sub(rows[i][j], checked_mul(q, rows[top][j]));
        if (rows[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[top][col] == 0) continue;
    if (rows[top][col] < 0)
      for (auto& x : rows[top]) x = -x;
    for (std::size_t i = 0; i < top; ++i) {
      std::int64_t q = floor_div(rows[i][col], rows[top][col]);
      if (q != 0)
        for (std::size_t j = 0; j < dim; ++j) rows[i][j] = checked_sub(rows[i][j], checked_mul(q, rows[top][j]));
    }
    ++top;
  }
  rows.resize(top);
  return rows;
}

/// True iff every vector of `sub` is an integer combination of `basis`.
inline bool lattice_contains(const std::vector<IntVec>& basis, const std::vector<IntVec>& sub, std::size_t dim) {
  IntMatrix b = IntMatrix::from_columns(basis, dim);
  for (const auto& v : sub)
    if (!solve_integer(b, v)) return false;
  return true;
}

/// Index [L : S] for S a sublattice of L given by bases; 0 when rank(S) < rank(L).
/// Throws if S is not contained in L.
inline std::int64_t sublattice_index(const std::vector<IntVec>& lattice, const std::vector<IntVec>& sub,
                                     std::size_t dim) {
  IntMatrix lb = IntMatrix::from_columns(lattice, dim);
  std::vector<IntVec> coords;
  for (const auto& v : sub) {
    auto x = solve_integer(lb, v);
    if (!x) throw StructuralError("sublattice_index: vector not in lattice");
    coords.push_back(*x);
  }
  IntMatrix c = IntMatrix::from_columns(coords, lattice.size());
  SmithForm s = smith_normal_form(c);
  if (s.rank < lattice.size()) return 0;
  std::int64_t idx = 1;
  for (std::size_t i = 0; i < s.rank; ++i) idx = checked_mul(idx, s.D(i, i));
  return idx;
}

inline std::string vec_str(const IntVec& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

}  // namespace noether::zlat
