#include "opdyn/sparse_vector.hpp"

#include <algorithm>
#include <cmath>

namespace opdyn {

SparseVector SparseVector::from_support(Support s, ScalarField field) {
  SparseVector v(field);
  for (const auto& [i, c] : s) v.set(i, c);
  return v;
}

SparseVector::Index SparseVector::min_index() const {
  require(!support_.empty(), Err::InvariantViolation,
          "min_index of empty vector");
  return support_.begin()->first;
}

SparseVector::Index SparseVector::max_index() const {
  require(!support_.empty(), Err::InvariantViolation,
          "max_index of empty vector");
  return support_.rbegin()->first;
}

void SparseVector::set(Index i, Complex c) {
  if (field_ == ScalarField::Real && !is_real_value(c)) {
    fail(Err::FieldMismatch,
         "complex coefficient assigned to a real-field vector");
  }
  if (c == Complex(0.0, 0.0)) {
    support_.erase(i);
  } else {
    support_[i] = c;
  }
}

SparseVector SparseVector::operator+(const SparseVector& rhs) const {
  check_same_field(*this, rhs);
  SparseVector out(field_);
  out.support_ = support_;
  for (const auto& [i, c] : rhs.support_) {
    auto it = out.support_.find(i);
    if (it == out.support_.end()) {
      out.support_[i] = c;
    } else {
      Complex s = it->second + c;
      if (s == Complex(0.0, 0.0)) {
        out.support_.erase(it);
      } else {
        it->second = s;
      }
    }
  }
  return out;
}

SparseVector SparseVector::operator-(const SparseVector& rhs) const {
  check_same_field(*this, rhs);
  SparseVector out(field_);
  out.support_ = support_;
  for (const auto& [i, c] : rhs.support_) {
    auto it = out.support_.find(i);
    if (it == out.support_.end()) {
      out.support_[i] = -c;
    } else {
      Complex s = it->second - c;
      if (s == Complex(0.0, 0.0)) {
        out.support_.erase(it);
      } else {
        it->second = s;
      }
    }
  }
  return out;
}

SparseVector SparseVector::scaled(Complex c) const {
  ScalarField f = field_;
  if (field_ == ScalarField::Real && !is_real_value(c)) {
    fail(Err::FieldMismatch, "complex scalar applied to a real-field vector");
  }
  SparseVector out(f);
  if (c == Complex(0.0, 0.0)) return out;
  for (const auto& [i, v] : support_) {
    Complex s = (c == Complex(1.0, 0.0)) ? v : Complex(c * v);
    if (s != Complex(0.0, 0.0)) out.support_[i] = s;
  }
  return out;
}

SparseVector SparseVector::translated(Index offset) const {
  SparseVector out(field_);
  for (const auto& [i, c] : support_) out.support_[i + offset] = c;
  return out;
}

SparseVector SparseVector::to_complex() const {
  SparseVector out(ScalarField::Complex);
  out.support_ = support_;
  return out;
}

double SparseVector::norm(BaseNorm n) const {
  switch (n) {
    case BaseNorm::L1: {
      double s = 0.0;
      for (const auto& [i, c] : support_) s += std::abs(c);
      return s;
    }
    case BaseNorm::L2: {
      double s = 0.0;
      for (const auto& [i, c] : support_) s += std::norm(c);
      return std::sqrt(s);
    }
    case BaseNorm::Sup: {
      double s = 0.0;
      for (const auto& [i, c] : support_) s = std::max(s, std::abs(c));
      return s;
    }
  }
  return 0.0;
}

Complex inner(const SparseVector& x, const SparseVector& y) {
  check_same_field(x, y);
  // iterate over the smaller support
  const SparseVector& small = x.nnz() <= y.nnz() ? x : y;
  const SparseVector& large = x.nnz() <= y.nnz() ? y : x;
  const bool small_is_x = &small == &x;
  Complex s(0.0, 0.0);
  for (const auto& [i, c] : small.support()) {
    Complex other = large.coeff(i);
    if (other == Complex(0.0, 0.0)) continue;
    if (small_is_x) {
      s += c * std::conj(other);
    } else {
      s += other * std::conj(c);
    }
  }
  return s;
}

}  // namespace opdyn
