#pragma once

// Exact linear algebra over Z, Q and F_p.
//
// IntMatrix carries arbitrary-precision integers and supports the Smith normal
// form.  FieldMatrix carries field elements (stored as exact rationals; prime
// field elements are kept reduced into [0, p)) and supports row reduction,
// kernels, images and subspace intersection.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tcmap/errors.hpp"

namespace tcmap {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Integer matrices and the Smith normal form
// ---------------------------------------------------------------------------

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}
  IntMatrix(std::size_t rows, std::size_t cols, std::vector<BigInt> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
      throw DimensionMismatch("IntMatrix: expected " + std::to_string(rows_ * cols_) + " entries, got " +
                              std::to_string(entries_.size()));
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(const std::vector<std::vector<long long>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw DimensionMismatch("IntMatrix::from_rows: ragged rows");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const std::vector<BigInt>& entries() const noexcept { return entries_; }

  BigInt& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const BigInt& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  bool is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const BigInt& x) { return x == 0; });
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionMismatch("IntMatrix product: inner dimensions differ");
    IntMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const BigInt& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> entries_;
};

/// D = U * M * V with U, V unimodular and D diagonal with d1 | d2 | ... (all d_i >= 0).
struct SmithForm {
  IntMatrix diagonal;
  IntMatrix left;   // U, rows x rows
  IntMatrix right;  // V, cols x cols
};

namespace detail {

inline void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

inline void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

// row[dst] += q * row[src]
inline void add_row(IntMatrix& m, std::size_t dst, std::size_t src, const BigInt& q) {
  if (q == 0) return;
  for (std::size_t j = 0; j < m.cols(); ++j) m(dst, j) += q * m(src, j);
}

// col[dst] += q * col[src]
inline void add_col(IntMatrix& m, std::size_t dst, std::size_t src, const BigInt& q) {
  if (q == 0) return;
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, dst) += q * m(i, src);
}

}  // namespace detail

/// Smith normal form by unimodular row and column operations.
///
/// Pivots are chosen as the entry of smallest nonzero absolute value in the
/// remaining block, which keeps intermediate growth modest on small inputs.
inline SmithForm smith_normal_form(const IntMatrix& m) {
  IntMatrix d = m;
  IntMatrix u = IntMatrix::identity(m.rows());
  IntMatrix v = IntMatrix::identity(m.cols());
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();

  auto find_min = [&](std::size_t t) -> std::optional<std::pair<std::size_t, std::size_t>> {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    BigInt best_abs;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j) {
        if (d(i, j) == 0) continue;
        BigInt a = abs(d(i, j));
        if (!best || a < best_abs) {
          best = {i, j};
          best_abs = a;
        }
      }
    return best;
  };

  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    auto pivot = find_min(t);
    if (!pivot) break;

    for (;;) {
      detail::swap_rows(d, t, pivot->first);
      detail::swap_rows(u, t, pivot->first);
      detail::swap_cols(d, t, pivot->second);
      detail::swap_cols(v, t, pivot->second);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (d(i, t) == 0) continue;
        BigInt q = d(i, t) / d(t, t);
        detail::add_row(d, i, t, -q);
        detail::add_row(u, i, t, -q);
        if (d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (d(t, j) == 0) continue;
        BigInt q = d(t, j) / d(t, t);
        detail::add_col(d, j, t, -q);
        detail::add_col(v, j, t, -q);
        if (d(t, j) != 0) clean = false;
      }

      if (clean) {
        // Divisibility: fold any offending row into row t and keep reducing.
        std::optional<std::size_t> offending;
        for (std::size_t i = t + 1; i < rows && !offending; ++i)
          for (std::size_t j = t + 1; j < cols; ++j)
            if (d(i, j) % d(t, t) != 0) {
              offending = i;
              break;
            }
        if (!offending) break;
        detail::add_row(d, t, *offending, 1);
        detail::add_row(u, t, *offending, 1);
      }

      // Restart from the smallest entry in row t / column t.
      std::pair<std::size_t, std::size_t> next{t, t};
      BigInt best = abs(d(t, t));
      for (std::size_t i = t + 1; i < rows; ++i)
        if (d(i, t) != 0 && abs(d(i, t)) < best) {
          best = abs(d(i, t));
          next = {i, t};
        }
      for (std::size_t j = t + 1; j < cols; ++j)
        if (d(t, j) != 0 && abs(d(t, j)) < best) {
          best = abs(d(t, j));
          next = {t, j};
        }
      pivot = next;
    }

    if (d(t, t) < 0) {
      for (std::size_t j = 0; j < cols; ++j) d(t, j) = -d(t, j);
      for (std::size_t j = 0; j < rows; ++j) u(t, j) = -u(t, j);
    }
  }
  return {std::move(d), std::move(u), std::move(v)};
}

/// Rank of M as a homomorphism Z^cols -> Z^rows (equals the rank over Q).
inline std::size_t int_rank(const IntMatrix& m) {
  const SmithForm snf = smith_normal_form(m);
  std::size_t r = 0;
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i)
    if (snf.diagonal(i, i) != 0) ++r;
  return r;
}

// ---------------------------------------------------------------------------
// Fields
// ---------------------------------------------------------------------------

inline bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

/// Either the rationals or a prime field F_p.  Elements are Rationals; over
/// F_p they are always integers in [0, p).
class Field {
 public:
  static Field rationals() { return Field(0); }
  static Field prime(std::int64_t p) {
    if (!is_prime(p)) throw InvalidInput("Field: " + std::to_string(p) + " is not prime");
    return Field(p);
  }

  bool is_rational() const noexcept { return p_ == 0; }
  std::int64_t characteristic() const noexcept { return p_; }
  std::string name() const { return p_ == 0 ? "Q" : "F_" + std::to_string(p_); }

  Rational element(const Rational& x) const {
    if (p_ == 0) return x;
    const BigInt p = p_;
    BigInt num = numerator(x) % p;
    if (num < 0) num += p;
    BigInt den = denominator(x) % p;
    if (den < 0) den += p;
    if (den == 0) throw InvalidInput("Field: denominator divisible by characteristic " + std::to_string(p_));
    return Rational((num * inverse_mod(den)) % p);
  }
  Rational element(long long x) const { return element(Rational(x)); }

  Rational add(const Rational& a, const Rational& b) const { return reduce(a + b); }
  Rational sub(const Rational& a, const Rational& b) const { return reduce(a - b); }
  Rational mul(const Rational& a, const Rational& b) const { return reduce(a * b); }
  Rational neg(const Rational& a) const { return reduce(-a); }
  Rational inv(const Rational& a) const {
    if (a == 0) throw InvalidInput("Field: inverse of zero");
    if (p_ == 0) return 1 / a;
    return Rational(inverse_mod(numerator(a)));
  }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  explicit Field(std::int64_t p) : p_(p) {}

  // Integer-valued input stays integer-valued under the field operations.
  Rational reduce(const Rational& x) const {
    if (p_ == 0) return x;
    const BigInt p = p_;
    BigInt n = numerator(x) % p;
    if (n < 0) n += p;
    return Rational(n);
  }

  BigInt inverse_mod(const BigInt& a) const {
    // Extended Euclid on (a mod p, p).
    BigInt old_r = a % p_, r = p_, old_s = 1, s = 0;
    if (old_r < 0) old_r += p_;
    while (r != 0) {
      BigInt q = old_r / r;
      BigInt tmp = old_r - q * r;
      old_r = r;
      r = tmp;
      tmp = old_s - q * s;
      old_s = s;
      s = tmp;
    }
    BigInt out = old_s % p_;
    if (out < 0) out += p_;
    return out;
  }

  std::int64_t p_;
};

// ---------------------------------------------------------------------------
// Field matrices and subspaces
// ---------------------------------------------------------------------------

class FieldMatrix {
 public:
  FieldMatrix() : field_(Field::rationals()) {}
  FieldMatrix(Field field, std::size_t rows, std::size_t cols)
      : field_(field), rows_(rows), cols_(cols), entries_(rows * cols, Rational(0)) {}
  FieldMatrix(Field field, std::size_t rows, std::size_t cols, std::vector<Rational> entries)
      : field_(field), rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) throw DimensionMismatch("FieldMatrix: entry count does not match shape");
    for (auto& e : entries_) e = field_.element(e);
  }

  static FieldMatrix identity(Field field, std::size_t n) {
    FieldMatrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
  }

  static FieldMatrix from_rows(Field field, const std::vector<std::vector<Rational>>& rows, std::size_t cols) {
    FieldMatrix m(field, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw DimensionMismatch("FieldMatrix::from_rows: ragged rows");
      for (std::size_t j = 0; j < cols; ++j) m.set(i, j, rows[i][j]);
    }
    return m;
  }

  const Field& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  const Rational& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, const Rational& x) { entries_[r * cols_ + c] = field_.element(x); }

  std::vector<Rational> row(std::size_t r) const {
    return {entries_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
            entries_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
  }

  FieldMatrix transpose() const {
    FieldMatrix t(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.entries_[j * rows_ + i] = (*this)(i, j);
    return t;
  }

  /// Matrix-vector product A x.
  std::vector<Rational> apply(const std::vector<Rational>& x) const {
    if (x.size() != cols_) throw DimensionMismatch("FieldMatrix::apply: vector length differs from column count");
    std::vector<Rational> y(rows_, Rational(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if ((*this)(i, j) != 0 && x[j] != 0) y[i] = field_.add(y[i], field_.mul((*this)(i, j), x[j]));
    return y;
  }

  friend FieldMatrix operator*(const FieldMatrix& a, const FieldMatrix& b) {
    if (!(a.field_ == b.field_)) throw DimensionMismatch("FieldMatrix product: fields differ");
    if (a.cols_ != b.rows_) throw DimensionMismatch("FieldMatrix product: inner dimensions differ");
    FieldMatrix out(a.field_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (b(k, j) != 0)
            out.entries_[i * out.cols_ + j] = a.field_.add(out(i, j), a.field_.mul(a(i, k), b(k, j)));
      }
    return out;
  }

  friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

 private:
  Field field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> entries_;
};

struct RrefResult {
  FieldMatrix reduced;
  std::vector<std::size_t> pivots;
};

/// Reduced row-echelon form.  Zero rows are kept at the bottom so the shape
/// of the input is preserved.
inline RrefResult rref(const FieldMatrix& a) {
  const Field& f = a.field();
  std::vector<std::vector<Rational>> m(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) m[i] = a.row(i);

  std::vector<std::size_t> pivots;
  std::size_t lead_row = 0;
  for (std::size_t c = 0; c < a.cols() && lead_row < a.rows(); ++c) {
    std::size_t pr = lead_row;
    while (pr < a.rows() && m[pr][c] == 0) ++pr;
    if (pr == a.rows()) continue;
    std::swap(m[pr], m[lead_row]);
    const Rational inv = f.inv(m[lead_row][c]);
    for (auto& x : m[lead_row]) x = f.mul(x, inv);
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == lead_row || m[r][c] == 0) continue;
      const Rational factor = m[r][c];
      for (std::size_t j = c; j < a.cols(); ++j)
        if (m[lead_row][j] != 0) m[r][j] = f.sub(m[r][j], f.mul(factor, m[lead_row][j]));
    }
    pivots.push_back(c);
    ++lead_row;
  }
  return {FieldMatrix::from_rows(f, m, a.cols()), std::move(pivots)};
}

/// A linear subspace of F^ambient, stored as the nonzero rows of an RREF basis.
class Subspace {
 public:
  Subspace(Field field, std::size_t ambient) : basis_(field, 0, ambient) {}

  /// Span of the given vectors (rows of `spanning`).
  static Subspace span(const FieldMatrix& spanning) {
    RrefResult r = rref(spanning);
    const std::size_t k = r.pivots.size();
    std::vector<std::vector<Rational>> rows;
    rows.reserve(k);
    for (std::size_t i = 0; i < k; ++i) rows.push_back(r.reduced.row(i));
    return Subspace(FieldMatrix::from_rows(spanning.field(), rows, spanning.cols()), std::move(r.pivots));
  }

  static Subspace span(Field field, std::size_t ambient, const std::vector<std::vector<Rational>>& vectors) {
    return span(FieldMatrix::from_rows(field, vectors, ambient));
  }

  /// Coordinate subspace spanned by the listed standard basis vectors.
  static Subspace coordinate(Field field, std::size_t ambient, const std::vector<std::size_t>& indices) {
    std::vector<std::vector<Rational>> rows;
    for (std::size_t i : indices) {
      std::vector<Rational> v(ambient, Rational(0));
      v.at(i) = 1;
      rows.push_back(std::move(v));
    }
    return span(field, ambient, rows);
  }

  const Field& field() const noexcept { return basis_.field(); }
  std::size_t ambient() const noexcept { return basis_.cols(); }
  std::size_t dim() const noexcept { return basis_.rows(); }
  bool is_zero() const noexcept { return dim() == 0; }
  const FieldMatrix& basis() const noexcept { return basis_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }
  std::vector<Rational> vector(std::size_t i) const { return basis_.row(i); }

  bool contains(const std::vector<Rational>& v) const {
    if (v.size() != ambient()) throw DimensionMismatch("Subspace::contains: vector length differs from ambient dimension");
    // Reduce against the RREF basis using pivot coordinates.
    std::vector<Rational> rest(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) rest[j] = field().element(v[j]);
    for (std::size_t i = 0; i < dim(); ++i) {
      const Rational c = rest[pivots_[i]];
      if (c == 0) continue;
      for (std::size_t j = 0; j < ambient(); ++j)
        if (basis_(i, j) != 0) rest[j] = field().sub(rest[j], field().mul(c, basis_(i, j)));
    }
    return std::all_of(rest.begin(), rest.end(), [](const Rational& x) { return x == 0; });
  }

  bool contains(const Subspace& other) const {
    check_compatible(other, "Subspace::contains");
    for (std::size_t i = 0; i < other.dim(); ++i)
      if (!contains(other.vector(i))) return false;
    return true;
  }

  void check_compatible(const Subspace& other, const char* what) const {
    if (ambient() != other.ambient())
      throw DimensionMismatch(std::string(what) + ": ambient dimensions " + std::to_string(ambient()) + " and " +
                              std::to_string(other.ambient()) + " differ");
    if (!(field() == other.field())) throw DimensionMismatch(std::string(what) + ": fields differ");
  }

  friend bool operator==(const Subspace& a, const Subspace& b) { return a.basis_ == b.basis_; }

 private:
  Subspace(FieldMatrix basis, std::vector<std::size_t> pivots) : basis_(std::move(basis)), pivots_(std::move(pivots)) {}

  FieldMatrix basis_;
  std::vector<std::size_t> pivots_;
};

/// Null space {x : A x = 0} inside F^cols.
inline Subspace kernel_basis(const FieldMatrix& a) {
  const RrefResult r = rref(a);
  const Field& f = a.field();
  std::vector<bool> is_pivot(a.cols(), false);
  for (std::size_t c : r.pivots) is_pivot[c] = true;

  std::vector<std::vector<Rational>> vectors;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(a.cols(), Rational(0));
    v[free] = 1;
    for (std::size_t i = 0; i < r.pivots.size(); ++i) v[r.pivots[i]] = f.neg(r.reduced(i, free));
    vectors.push_back(std::move(v));
  }
  return Subspace::span(f, a.cols(), vectors);
}

/// Column space {A x} inside F^rows.
inline Subspace image_basis(const FieldMatrix& a) { return Subspace::span(a.transpose()); }

inline Subspace subspace_sum(const Subspace& s1, const Subspace& s2) {
  s1.check_compatible(s2, "subspace_sum");
  std::vector<std::vector<Rational>> rows;
  for (std::size_t i = 0; i < s1.dim(); ++i) rows.push_back(s1.vector(i));
  for (std::size_t i = 0; i < s2.dim(); ++i) rows.push_back(s2.vector(i));
  return Subspace::span(s1.field(), s1.ambient(), rows);
}

/// S1 ∩ S2, computed from the kernel of the stacked system a·B1 - b·B2 = 0.
inline Subspace intersect(const Subspace& s1, const Subspace& s2) {
  s1.check_compatible(s2, "intersect");
  const Field& f = s1.field();
  const std::size_t n = s1.ambient();
  const std::size_t k1 = s1.dim();
  const std::size_t k2 = s2.dim();
  if (k1 == 0 || k2 == 0) return Subspace(f, n);

  // Columns of `system` are the basis vectors of S1 followed by those of -S2.
  FieldMatrix system(f, n, k1 + k2);
  for (std::size_t i = 0; i < k1; ++i)
    for (std::size_t j = 0; j < n; ++j) system.set(j, i, s1.basis()(i, j));
  for (std::size_t i = 0; i < k2; ++i)
    for (std::size_t j = 0; j < n; ++j) system.set(j, k1 + i, f.neg(s2.basis()(i, j)));

  const Subspace relations = kernel_basis(system);
  std::vector<std::vector<Rational>> vectors;
  for (std::size_t r = 0; r < relations.dim(); ++r) {
    std::vector<Rational> v(n, Rational(0));
    for (std::size_t i = 0; i < k1; ++i) {
      const Rational& c = relations.basis()(r, i);
      if (c == 0) continue;
      for (std::size_t j = 0; j < n; ++j) v[j] = f.add(v[j], f.mul(c, s1.basis()(i, j)));
    }
    vectors.push_back(std::move(v));
  }
  return Subspace::span(f, n, vectors);
}

}  // namespace tcmap
