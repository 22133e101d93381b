#pragma once

// Finite-dimensional graded-commutative algebras over a field, given by
// structure constants on a named basis, together with degree-preserving
// algebra maps.  These model cohomology rings H*(X; k) with constant field
// coefficients, and provide the cup-length lower bounds for cat and TC of
// spaces and maps.

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tcmap/errors.hpp"
#include "tcmap/exact_linalg.hpp"

namespace tcmap {

struct BasisElement {
  std::string name;
  int degree = 0;

  friend bool operator==(const BasisElement&, const BasisElement&) = default;
};

/// Basis index -> nonzero coefficient.
using SparseVector = std::map<std::size_t, Rational>;

class GradedAlgebra {
 public:
  using ProductTable = std::map<std::pair<std::size_t, std::size_t>, SparseVector>;

  GradedAlgebra(Field field, std::vector<BasisElement> basis, std::size_t unit, ProductTable products)
      : field_(field), basis_(std::move(basis)), unit_(unit) {
    if (unit_ >= basis_.size()) throw InvalidInput("GradedAlgebra: unit index out of range");
    for (const auto& b : basis_)
      if (b.degree < 0) throw InvalidInput("GradedAlgebra: basis element '" + b.name + "' has negative degree");
    for (auto& [key, value] : products) {
      if (key.first >= basis_.size() || key.second >= basis_.size())
        throw InvalidInput("GradedAlgebra: product refers to a basis index out of range");
      SparseVector clean;
      for (const auto& [k, c] : value) {
        if (k >= basis_.size()) throw InvalidInput("GradedAlgebra: product result index out of range");
        Rational x = field_.element(c);
        if (x != 0) clean[k] = x;
      }
      if (!clean.empty()) products_[key] = std::move(clean);
    }
  }

  const Field& field() const noexcept { return field_; }
  std::size_t dim() const noexcept { return basis_.size(); }
  const std::vector<BasisElement>& basis() const noexcept { return basis_; }
  std::size_t unit() const noexcept { return unit_; }
  int degree(std::size_t i) const { return basis_.at(i).degree; }
  const ProductTable& products() const noexcept { return products_; }

  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (basis_[i].name == name) return i;
    throw InvalidInput("GradedAlgebra: no basis element named '" + name + "'");
  }

  int top_degree() const {
    int top = 0;
    for (const auto& b : basis_) top = std::max(top, b.degree);
    return top;
  }

  std::vector<std::size_t> positive_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (basis_[i].degree > 0) out.push_back(i);
    return out;
  }

  /// Coordinate subspace spanned by the positive-degree basis elements.
  Subspace positive_part() const { return Subspace::coordinate(field_, dim(), positive_indices()); }

  /// a_i · a_j as a sparse vector.
  const SparseVector& product(std::size_t i, std::size_t j) const {
    static const SparseVector zero;
    auto it = products_.find({i, j});
    return it == products_.end() ? zero : it->second;
  }

  SparseVector multiply(const SparseVector& v, const SparseVector& w) const {
    SparseVector out;
    for (const auto& [i, a] : v)
      for (const auto& [j, b] : w) {
        const SparseVector& p = product(i, j);
        if (p.empty()) continue;
        const Rational ab = field_.mul(a, b);
        for (const auto& [k, c] : p) accumulate(out, k, field_.mul(ab, c));
      }
    return out;
  }

  /// Product of dense coordinate vectors.
  std::vector<Rational> multiply(const std::vector<Rational>& v, const std::vector<Rational>& w) const {
    std::vector<Rational> out(dim(), Rational(0));
    for (const auto& [key, p] : products_) {
      const Rational& a = v[key.first];
      const Rational& b = w[key.second];
      if (a == 0 || b == 0) continue;
      const Rational ab = field_.mul(a, b);
      for (const auto& [k, c] : p) out[k] = field_.add(out[k], field_.mul(ab, c));
    }
    return out;
  }

  SparseVector basis_vector(std::size_t i) const { return SparseVector{{i, Rational(1)}}; }

  void accumulate(SparseVector& into, std::size_t k, const Rational& c) const {
    if (c == 0) return;
    auto [it, inserted] = into.emplace(k, c);
    if (!inserted) {
      it->second = field_.add(it->second, c);
      if (it->second == 0) into.erase(it);
    }
  }

 private:
  Field field_;
  std::vector<BasisElement> basis_;
  std::size_t unit_;
  ProductTable products_;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class AxiomKind { UnitDegree, Unit, Degree, Commutativity, Associativity, MapDegree, MapUnit, MapMultiplicative };

inline const char* to_string(AxiomKind k) {
  switch (k) {
    case AxiomKind::UnitDegree: return "unit-degree";
    case AxiomKind::Unit: return "unit";
    case AxiomKind::Degree: return "degree";
    case AxiomKind::Commutativity: return "graded-commutativity";
    case AxiomKind::Associativity: return "associativity";
    case AxiomKind::MapDegree: return "map-degree";
    case AxiomKind::MapUnit: return "map-unit";
    case AxiomKind::MapMultiplicative: return "map-multiplicative";
  }
  return "unknown";
}

struct Violation {
  AxiomKind kind;
  std::vector<std::size_t> indices;  // basis indices of the offending pair/triple
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(AxiomKind k) const {
    return std::any_of(violations.begin(), violations.end(), [k](const Violation& v) { return v.kind == k; });
  }
};

inline int koszul_sign(int d1, int d2) { return (d1 % 2 != 0 && d2 % 2 != 0) ? -1 : 1; }

inline ValidationReport validate_algebra(const GradedAlgebra& a) {
  ValidationReport report;
  const std::size_t n = a.dim();
  const Field& f = a.field();
  const std::size_t e = a.unit();

  if (a.degree(e) != 0) report.violations.push_back({AxiomKind::UnitDegree, {e}});

  for (std::size_t i = 0; i < n; ++i) {
    const SparseVector ai = a.basis_vector(i);
    if (a.product(e, i) != ai || a.product(i, e) != ai) report.violations.push_back({AxiomKind::Unit, {i}});
  }

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const SparseVector& p = a.product(i, j);
      const int d = a.degree(i) + a.degree(j);
      if (std::any_of(p.begin(), p.end(), [&](const auto& kv) { return a.degree(kv.first) != d; }))
        report.violations.push_back({AxiomKind::Degree, {i, j}});
      if (j < i) continue;
      SparseVector swapped;
      const Rational sign = f.element(koszul_sign(a.degree(i), a.degree(j)));
      for (const auto& [k, c] : a.product(j, i)) a.accumulate(swapped, k, f.mul(sign, c));
      if (p != swapped) report.violations.push_back({AxiomKind::Commutativity, {i, j}});
    }

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const SparseVector& ij = a.product(i, j);
      for (std::size_t k = 0; k < n; ++k) {
        const SparseVector left = a.multiply(ij, a.basis_vector(k));
        const SparseVector right = a.multiply(a.basis_vector(i), a.product(j, k));
        if (left != right) report.violations.push_back({AxiomKind::Associativity, {i, j, k}});
      }
    }
  return report;
}

inline void require_valid(const GradedAlgebra& a, const char* what) {
  const ValidationReport r = validate_algebra(a);
  if (!r.ok())
    throw InvalidInput(std::string(what) + ": algebra fails the " + to_string(r.violations.front().kind) + " axiom");
}

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

/// A ⊗ B with the Koszul sign rule (a⊗b)(c⊗d) = (-1)^{|b||c|} ac ⊗ bd.
/// Basis element (i, j) has index i * dim(B) + j.
inline GradedAlgebra tensor_product(const GradedAlgebra& a, const GradedAlgebra& b) {
  if (!(a.field() == b.field())) throw DimensionMismatch("tensor_product: fields differ");
  const Field& f = a.field();
  const std::size_t nb = b.dim();
  std::vector<BasisElement> basis;
  basis.reserve(a.dim() * nb);
  for (const auto& x : a.basis())
    for (const auto& y : b.basis()) basis.push_back({x.name + "⊗" + y.name, x.degree + y.degree});

  GradedAlgebra::ProductTable table;
  for (const auto& [ka, pa] : a.products())
    for (const auto& [kb, pb] : b.products()) {
      // (a_i ⊗ b_j)(a_k ⊗ b_l) with (i,k) = ka and (j,l) = kb
      const auto [i, k] = ka;
      const auto [j, l] = kb;
      const Rational sign = f.element(koszul_sign(b.degree(j), a.degree(k)));
      SparseVector out;
      for (const auto& [r, c] : pa)
        for (const auto& [s, d] : pb) out[r * nb + s] = f.mul(sign, f.mul(c, d));
      table[{i * nb + j, k * nb + l}] = std::move(out);
    }
  return GradedAlgebra(f, std::move(basis), a.unit() * nb + b.unit(), std::move(table));
}

/// Künneth model of H*(X × X) from H*(X).
inline GradedAlgebra tensor_square(const GradedAlgebra& a) {
  require_valid(a, "tensor_square");
  return tensor_product(a, a);
}

/// Exterior algebra on generators of odd degree; basis = subsets in
/// lexicographic-by-bitmask order, named by concatenating generator names.
inline GradedAlgebra exterior_algebra(Field f, const std::vector<BasisElement>& generators) {
  const std::size_t g = generators.size();
  if (g > 16) throw InvalidInput("exterior_algebra: too many generators");
  for (const auto& x : generators)
    if (x.degree % 2 == 0) throw InvalidInput("exterior_algebra: generator '" + x.name + "' must have odd degree");

  const std::size_t n = std::size_t{1} << g;
  std::vector<BasisElement> basis(n);
  for (std::size_t mask = 0; mask < n; ++mask) {
    std::string name;
    int degree = 0;
    for (std::size_t t = 0; t < g; ++t)
      if (mask & (std::size_t{1} << t)) {
        name += generators[t].name;
        degree += generators[t].degree;
      }
    basis[mask] = {name.empty() ? "1" : name, degree};
  }

  GradedAlgebra::ProductTable table;
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) {
      if (s & t) continue;
      // Sign of merging the sorted word s followed by t: count inversions.
      int inversions = 0;
      for (std::size_t x = 0; x < g; ++x)
        if (t & (std::size_t{1} << x))
          for (std::size_t y = x + 1; y < g; ++y)
            if (s & (std::size_t{1} << y)) ++inversions;
      table[{s, t}] = SparseVector{{s | t, f.element(inversions % 2 == 0 ? 1 : -1)}};
    }
  return GradedAlgebra(f, std::move(basis), 0, std::move(table));
}

/// k[u]/(u^height) with |u| = degree.  Odd degree is only graded-commutative
/// for height <= 2 (or in characteristic 2).
inline GradedAlgebra truncated_polynomial_algebra(Field f, const std::string& name, int degree, int height) {
  if (degree <= 0 || height < 1) throw InvalidInput("truncated_polynomial_algebra: need degree > 0 and height >= 1");
  std::vector<BasisElement> basis;
  for (int p = 0; p < height; ++p)
    basis.push_back({p == 0 ? "1" : (p == 1 ? name : name + "^" + std::to_string(p)), p * degree});
  GradedAlgebra::ProductTable table;
  for (int p = 0; p < height; ++p)
    for (int q = 0; p + q < height; ++q)
      table[{static_cast<std::size_t>(p), static_cast<std::size_t>(q)}] =
          SparseVector{{static_cast<std::size_t>(p + q), Rational(1)}};
  GradedAlgebra out(f, std::move(basis), 0, std::move(table));
  require_valid(out, "truncated_polynomial_algebra");
  return out;
}

/// H*(S^n; k) = k[u]/(u^2), |u| = n.
inline GradedAlgebra sphere_cohomology(Field f, int n) { return truncated_polynomial_algebra(f, "u", n, 2); }

/// H*(point; k).
inline GradedAlgebra point_cohomology(Field f) {
  return GradedAlgebra(f, {{"1", 0}}, 0, {{{0, 0}, SparseVector{{0, Rational(1)}}}});
}

// ---------------------------------------------------------------------------
// Algebra maps
// ---------------------------------------------------------------------------

/// Linear map source -> target; column j of `matrix` is the image of source basis j.
class AlgebraMap {
 public:
  AlgebraMap(GradedAlgebra source, GradedAlgebra target, FieldMatrix matrix)
      : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
    if (!(source_.field() == target_.field()) || !(matrix_.field() == source_.field()))
      throw DimensionMismatch("AlgebraMap: fields differ");
    if (matrix_.rows() != target_.dim() || matrix_.cols() != source_.dim())
      throw DimensionMismatch("AlgebraMap: matrix shape does not match source/target dimensions");
  }

  static AlgebraMap identity(const GradedAlgebra& a) {
    return AlgebraMap(a, a, FieldMatrix::identity(a.field(), a.dim()));
  }

  const GradedAlgebra& source() const noexcept { return source_; }
  const GradedAlgebra& target() const noexcept { return target_; }
  const FieldMatrix& matrix() const noexcept { return matrix_; }

  SparseVector image(std::size_t j) const {
    SparseVector out;
    for (std::size_t i = 0; i < matrix_.rows(); ++i)
      if (matrix_(i, j) != 0) out[i] = matrix_(i, j);
    return out;
  }

  SparseVector apply(const SparseVector& v) const {
    SparseVector out;
    for (const auto& [j, c] : v)
      for (std::size_t i = 0; i < matrix_.rows(); ++i)
        if (matrix_(i, j) != 0) target_.accumulate(out, i, target_.field().mul(c, matrix_(i, j)));
    return out;
  }

 private:
  GradedAlgebra source_;
  GradedAlgebra target_;
  FieldMatrix matrix_;
};

/// Checks degree preservation, unitality and multiplicativity on basis pairs.
/// Source and target are assumed valid; validate them separately.
inline ValidationReport validate_map(const AlgebraMap& phi) {
  ValidationReport report;
  const GradedAlgebra& s = phi.source();
  const GradedAlgebra& t = phi.target();
  for (std::size_t j = 0; j < s.dim(); ++j)
    for (const auto& [i, c] : phi.image(j))
      if (t.degree(i) != s.degree(j)) {
        report.violations.push_back({AxiomKind::MapDegree, {j}});
        break;
      }
  if (phi.image(s.unit()) != t.basis_vector(t.unit())) report.violations.push_back({AxiomKind::MapUnit, {s.unit()}});
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t j = 0; j < s.dim(); ++j)
      if (phi.apply(s.product(i, j)) != t.multiply(phi.image(i), phi.image(j)))
        report.violations.push_back({AxiomKind::MapMultiplicative, {i, j}});
  return report;
}

inline void require_valid(const AlgebraMap& phi, const char* what) {
  require_valid(phi.source(), what);
  require_valid(phi.target(), what);
  const ValidationReport r = validate_map(phi);
  if (!r.ok()) throw InvalidInput(std::string(what) + ": map fails the " + to_string(r.violations.front().kind) + " axiom");
}

/// Cup product Δ*: A ⊗ A -> A, a ⊗ b ↦ a·b.
inline AlgebraMap mult_map(const GradedAlgebra& a) {
  GradedAlgebra square = tensor_square(a);
  const std::size_t n = a.dim();
  FieldMatrix m(a.field(), n, n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& [k, c] : a.product(i, j)) m.set(k, i * n + j, c);
  return AlgebraMap(std::move(square), a, std::move(m));
}

/// φ ⊗ φ between tensor squares.
inline AlgebraMap tensor_square_map(const AlgebraMap& phi) {
  require_valid(phi, "tensor_square_map");
  const Field& f = phi.source().field();
  const std::size_t ns = phi.source().dim();
  const std::size_t nt = phi.target().dim();
  FieldMatrix m(f, nt * nt, ns * ns);
  for (std::size_t i = 0; i < ns; ++i)
    for (std::size_t j = 0; j < ns; ++j)
      for (const auto& [k, c] : phi.image(i))
        for (const auto& [l, d] : phi.image(j)) m.set(k * nt + l, i * ns + j, f.mul(c, d));
  return AlgebraMap(tensor_square(phi.source()), tensor_square(phi.target()), std::move(m));
}

// ---------------------------------------------------------------------------
// Cup-length
// ---------------------------------------------------------------------------

namespace detail {

// Row-echelon basis kept as sparse rows keyed by leading index.  Each row has
// leading coefficient 1 and no entries below its leading index.
class SparseEchelon {
 public:
  explicit SparseEchelon(Field field) : field_(field) {}

  /// Adds v to the span; returns false if it was already in it.
  bool insert(SparseVector v) {
    while (!v.empty()) {
      const auto [lead, c] = *v.begin();
      auto it = rows_.find(lead);
      if (it == rows_.end()) {
        const Rational inv = field_.inv(c);
        for (auto& [k, x] : v) x = field_.mul(x, inv);
        rows_.emplace(lead, std::move(v));
        return true;
      }
      const Rational factor = c;
      for (const auto& [k, r] : it->second) {
        auto [pos, inserted] = v.emplace(k, field_.neg(field_.mul(factor, r)));
        if (!inserted) {
          pos->second = field_.sub(pos->second, field_.mul(factor, r));
          if (pos->second == 0) v.erase(pos);
        }
      }
    }
    return false;
  }

  std::vector<SparseVector> rows() const {
    std::vector<SparseVector> out;
    out.reserve(rows_.size());
    for (const auto& [lead, row] : rows_) out.push_back(row);
    return out;
  }

 private:
  Field field_;
  std::map<std::size_t, SparseVector> rows_;
};

}  // namespace detail

/// Largest k such that some k-fold product of elements of V is nonzero
/// (0 for V = 0).  Iterates W_1 = V, W_{k+1} = span{v·w : v ∈ basis V, w ∈ basis W_k}.
inline std::size_t subspace_cuplength(const GradedAlgebra& a, const Subspace& v) {
  if (v.ambient() != a.dim()) throw DimensionMismatch("subspace_cuplength: subspace ambient differs from algebra dimension");
  if (!(v.field() == a.field())) throw DimensionMismatch("subspace_cuplength: fields differ");
  if (!a.positive_part().contains(v)) throw InvalidInput("subspace_cuplength: subspace has a degree-0 component");

  std::vector<SparseVector> generators;
  for (std::size_t i = 0; i < v.dim(); ++i) {
    SparseVector s;
    const std::vector<Rational> dense = v.vector(i);
    for (std::size_t k = 0; k < dense.size(); ++k)
      if (dense[k] != 0) s.emplace(k, dense[k]);
    generators.push_back(std::move(s));
  }

  std::size_t k = 0;
  std::vector<SparseVector> w = generators;
  while (!w.empty()) {
    ++k;
    detail::SparseEchelon next(a.field());
    for (const auto& g : generators)
      for (const auto& x : w) {
        SparseVector p = a.multiply(g, x);
        if (!p.empty()) next.insert(std::move(p));
      }
    w = next.rows();
  }
  return k;
}

/// Positive-degree part of the zero-divisor ideal ker(Δ*) ⊂ A ⊗ A.
inline Subspace zero_divisors(const GradedAlgebra& a) {
  const AlgebraMap mult = mult_map(a);
  return intersect(kernel_basis(mult.matrix()), mult.source().positive_part());
}

/// Zero-divisor cup-length of A, a lower bound for TC of any space with cohomology A.
inline std::size_t zero_divisor_cuplength(const GradedAlgebra& a) {
  const Subspace z = zero_divisors(a);
  return subspace_cuplength(tensor_square(a), z);
}

/// For φ = f*: H*(Y) -> H*(X), the cup-length of ker Δ* ∩ im (f×f)* in H*(X×X);
/// a lower bound for TC(f).
inline std::size_t tc_map_lower_bound(const AlgebraMap& phi) {
  const AlgebraMap square = tensor_square_map(phi);
  const Subspace v = intersect(image_basis(square.matrix()), zero_divisors(phi.target()));
  return subspace_cuplength(square.target(), v);
}

/// Cup-length of the positive-degree kernel of φ = f* in H*(Y); a lower bound for cat(f).
inline std::size_t cat_map_lower_bound(const AlgebraMap& phi) {
  require_valid(phi, "cat_map_lower_bound");
  const Subspace v = intersect(kernel_basis(phi.matrix()), phi.source().positive_part());
  return subspace_cuplength(phi.source(), v);
}

}  // namespace tcmap
