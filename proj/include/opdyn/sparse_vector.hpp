#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "opdyn/errors.hpp"
#include "opdyn/norms.hpp"
#include "opdyn/scalar.hpp"

namespace opdyn {

// Finitely supported vector with unbounded (possibly negative) integer
// indices. Coefficients are stored exactly: only values that are exactly
// zero are dropped, so unit-weight shifts act as genuine isometries and
// disjoint-support identities like ||e_i - e_j||_2 = sqrt(2) hold to the
// last bit. Immutable in spirit: operations return new vectors.
class SparseVector {
public:
  using Index = std::int64_t;
  using Support = std::map<Index, Complex>;

  explicit SparseVector(ScalarField field = ScalarField::Real)
      : field_(field) {}

  static SparseVector zero(ScalarField field) { return SparseVector(field); }

  static SparseVector unit(Index i, ScalarField field = ScalarField::Real) {
    SparseVector v(field);
    v.set(i, Complex(1.0, 0.0));
    return v;
  }

  static SparseVector from_support(Support s, ScalarField field);

  ScalarField field() const { return field_; }
  const Support& support() const { return support_; }
  bool empty() const { return support_.empty(); }
  std::size_t nnz() const { return support_.size(); }

  Index min_index() const;
  Index max_index() const;

  Complex coeff(Index i) const {
    auto it = support_.find(i);
    return it == support_.end() ? Complex(0.0, 0.0) : it->second;
  }

  // Stores c at index i; exact zeros are pruned. A Real-tagged vector
  // rejects coefficients with a nonzero imaginary part.
  void set(Index i, Complex c);

  SparseVector operator+(const SparseVector& rhs) const;
  SparseVector operator-(const SparseVector& rhs) const;
  SparseVector scaled(Complex c) const;
  SparseVector operator-() const { return scaled(Complex(-1.0, 0.0)); }

  // Exact index translation; preserves every coefficient bitwise.
  SparseVector translated(Index offset) const;

  // Returns the same coefficients under a Complex tag.
  SparseVector to_complex() const;

  double norm(BaseNorm n) const;

  friend bool operator==(const SparseVector& a, const SparseVector& b) {
    return a.field_ == b.field_ && a.support_ == b.support_;
  }

private:
  ScalarField field_;
  Support support_;
};

// Hermitian inner product, conjugate-linear in the second argument:
// inner(x, y) = sum_i x_i * conj(y_i).
Complex inner(const SparseVector& x, const SparseVector& y);

inline void check_same_field(const SparseVector& a, const SparseVector& b) {
  require(a.field() == b.field(), Err::FieldMismatch,
          "vectors carry different scalar fields");
}

}  // namespace opdyn
