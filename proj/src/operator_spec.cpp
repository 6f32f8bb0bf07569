#include "opdyn/operator_spec.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <string>

namespace opdyn {

namespace {

bool matrix_is_real(const Eigen::MatrixXcd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (m(i, j).imag() != 0.0) return false;
  return true;
}

bool matrix_is_finite(const Eigen::MatrixXcd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
        return false;
  return true;
}

Eigen::MatrixXcd rotation_matrix(double angle) {
  Eigen::MatrixXcd m(2, 2);
  const double c = std::cos(angle), s = std::sin(angle);
  m << Complex(c, 0), Complex(-s, 0), Complex(s, 0), Complex(c, 0);
  return m;
}

Eigen::MatrixXcd matrix_power(Eigen::MatrixXcd base, std::int64_t n) {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(base.rows(), base.cols());
  while (n > 0) {
    if (n & 1) acc = (acc * base).eval();
    base = (base * base).eval();
    n >>= 1;
  }
  return acc;
}

struct Block {
  std::int64_t offset = 0;
  std::optional<int> dim;  // nullopt: shift tail occupying [offset, inf)
  const OperatorSpec* spec = nullptr;
};

std::vector<Block> block_layout(const DirectSumOp& sum) {
  std::vector<Block> blocks;
  std::int64_t offset = 0;
  for (const auto& s : sum.summands) {
    Block b;
    b.offset = offset;
    b.dim = dimension(s);
    b.spec = &s;
    blocks.push_back(b);
    if (b.dim) offset += *b.dim;
  }
  return blocks;
}

SparseVector apply_dense_like(const Eigen::MatrixXcd& m, const SparseVector& x,
                              ScalarField field) {
  const auto d = m.rows();
  for (const auto& [i, c] : x.support()) {
    if (i < 0 || i >= d) {
      fail(Err::IndexDomainViolation,
           "index " + std::to_string(i) +
               " outside the operator's finite domain of dimension " +
               std::to_string(d));
    }
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
  for (const auto& [i, c] : x.support()) v(static_cast<Eigen::Index>(i)) = c;
  Eigen::VectorXcd y = m * v;
  SparseVector out(field);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (y(i) != Complex(0.0, 0.0)) out.set(i, y(i));
  }
  return out;
}

SparseVector apply_shift(const WeightedShiftOp& sh, const SparseVector& x,
                         ScalarField field) {
  const bool unit =
      sh.weights.size() == 1 && sh.weights[0] == Complex(1.0, 0.0);
  if (sh.direction != ShiftDirection::Bilateral) {
    for (const auto& [i, c] : x.support()) {
      if (i < 0) {
        fail(Err::IndexDomainViolation,
             "negative index fed to a one-sided shift model");
      }
    }
  }
  SparseVector out(field);
  switch (sh.direction) {
    case ShiftDirection::Forward:
    case ShiftDirection::Bilateral:
      if (unit) return x.translated(1);
      for (const auto& [i, c] : x.support()) out.set(i + 1, sh.weight_at(i) * c);
      return out;
    case ShiftDirection::Backward:
      for (const auto& [i, c] : x.support()) {
        if (i == 0) continue;  // e_0 is annihilated
        out.set(i - 1, unit ? c : Complex(sh.weight_at(i) * c));
      }
      return out;
  }
  return out;
}

SparseVector apply_shift_power(const WeightedShiftOp& sh, const SparseVector& x,
                               ScalarField field, std::int64_t n) {
  const bool unit =
      sh.weights.size() == 1 && sh.weights[0] == Complex(1.0, 0.0);
  if (sh.direction != ShiftDirection::Bilateral) {
    for (const auto& [i, c] : x.support()) {
      if (i < 0) {
        fail(Err::IndexDomainViolation,
             "negative index fed to a one-sided shift model");
      }
    }
  }
  const bool forward = sh.direction != ShiftDirection::Backward;
  if (unit) {
    if (forward) return x.translated(n);
    SparseVector out(field);
    for (const auto& [i, c] : x.support()) {
      if (i >= n) out.set(i - n, c);
    }
    return out;
  }
  SparseVector out(field);
  for (const auto& [i, c] : x.support()) {
    if (forward) {
      Complex w(1.0, 0.0);
      for (std::int64_t j = 0; j < n; ++j) w *= sh.weight_at(i + j);
      out.set(i + n, w * c);
    } else {
      if (i < n) continue;
      Complex w(1.0, 0.0);
      for (std::int64_t j = 0; j < n; ++j) w *= sh.weight_at(i - j);
      out.set(i - n, w * c);
    }
  }
  return out;
}

}  // namespace

bool operator==(const OperatorSpec& a, const OperatorSpec& b) {
  if (a.field != b.field || !(a.norm == b.norm)) return false;
  if (a.op.index() != b.op.index()) return false;
  return std::visit(
      [&](const auto& lhs) -> bool {
        using T = std::decay_t<decltype(lhs)>;
        const auto& rhs = std::get<T>(b.op);
        if constexpr (std::is_same_v<T, DenseMatrixOp> ||
                      std::is_same_v<T, GeneratorOp>) {
          return lhs.entries.rows() == rhs.entries.rows() &&
                 lhs.entries == rhs.entries;
        } else if constexpr (std::is_same_v<T, RotationBlockOp>) {
          return lhs.angle == rhs.angle;
        } else if constexpr (std::is_same_v<T, WeightedShiftOp>) {
          return lhs.direction == rhs.direction && lhs.weights == rhs.weights;
        } else if constexpr (std::is_same_v<T, StochasticMatrixOp>) {
          return lhs.entries.rows() == rhs.entries.rows() &&
                 lhs.entries == rhs.entries;
        } else {
          const auto& ls = lhs.summands;
          const auto& rs = std::get<DirectSumOp>(b.op).summands;
          if (ls.size() != rs.size()) return false;
          for (std::size_t i = 0; i < ls.size(); ++i)
            if (!(ls[i] == rs[i])) return false;
          return true;
        }
      },
      a.op);
}

OperatorSpec make_dense(const Eigen::MatrixXcd& entries, ScalarField field,
                        NormTag norm) {
  require(entries.rows() == entries.cols(), Err::InvariantViolation,
          "dense operator must be square");
  require(matrix_is_finite(entries), Err::InvariantViolation,
          "dense operator entries must be finite");
  if (field == ScalarField::Real) {
    require(matrix_is_real(entries), Err::FieldMismatch,
            "complex entries in a real-field operator");
  }
  OperatorSpec s;
  s.field = field;
  s.norm = norm;
  s.op = DenseMatrixOp{entries};
  return s;
}

OperatorSpec make_dense_real(const Eigen::MatrixXd& entries, NormTag norm) {
  return make_dense(entries.cast<Complex>(), ScalarField::Real, norm);
}

OperatorSpec make_rotation(double angle, NormTag norm) {
  require(std::isfinite(angle), Err::InvariantViolation,
          "rotation angle must be finite");
  OperatorSpec s;
  s.field = ScalarField::Real;
  s.norm = norm;
  s.op = RotationBlockOp{angle};
  return s;
}

OperatorSpec make_shift(ShiftDirection direction, std::vector<Complex> weights,
                        ScalarField field, NormTag norm) {
  require(!weights.empty(), Err::InvariantViolation,
          "shift weight rule must be nonempty");
  for (const auto& w : weights) {
    require(std::isfinite(w.real()) && std::isfinite(w.imag()),
            Err::InvariantViolation, "shift weights must be finite");
    if (field == ScalarField::Real) {
      require(is_real_value(w), Err::FieldMismatch,
              "complex weight in a real-field shift");
    }
  }
  if (direction == ShiftDirection::Bilateral) {
    for (const auto& w : weights) {
      require(w != Complex(0.0, 0.0), Err::InvariantViolation,
              "bilateral shift must be invertible: weights nonzero");
    }
  }
  OperatorSpec s;
  s.field = field;
  s.norm = norm;
  s.op = WeightedShiftOp{direction, std::move(weights)};
  return s;
}

OperatorSpec make_stochastic(const Eigen::MatrixXd& entries, NormTag norm) {
  require(entries.rows() == entries.cols(), Err::InvariantViolation,
          "stochastic matrix must be square");
  for (Eigen::Index j = 0; j < entries.cols(); ++j) {
    double colsum = 0.0;
    for (Eigen::Index i = 0; i < entries.rows(); ++i) {
      require(std::isfinite(entries(i, j)), Err::InvariantViolation,
              "stochastic entries must be finite");
      require(entries(i, j) >= 0.0, Err::InvariantViolation,
              "stochastic entries must be nonnegative");
      colsum += entries(i, j);
    }
    require(std::abs(colsum - 1.0) <= 1e-12, Err::InvariantViolation,
            "stochastic column " + std::to_string(j) + " sums to " +
                std::to_string(colsum) + ", expected 1");
  }
  OperatorSpec s;
  s.field = ScalarField::Real;
  s.norm = norm;
  s.op = StochasticMatrixOp{entries};
  return s;
}

OperatorSpec make_direct_sum(std::vector<OperatorSpec> summands) {
  require(!summands.empty(), Err::InvariantViolation,
          "direct sum needs at least one summand");
  const ScalarField field = summands.front().field;
  const NormTag norm = summands.front().norm;
  for (std::size_t i = 0; i < summands.size(); ++i) {
    const auto& s = summands[i];
    require(s.field == field, Err::FieldMismatch,
            "direct-sum summands must share one scalar field");
    require(s.norm == norm, Err::InvariantViolation,
            "direct-sum summands must share one norm tag");
    if (s.is_shift()) {
      require(i + 1 == summands.size(), Err::InvariantViolation,
              "a shift summand must be the last block of a direct sum");
      const auto& sh = std::get<WeightedShiftOp>(s.op);
      require(sh.direction != ShiftDirection::Bilateral,
              Err::InvariantViolation,
              "bilateral shifts act on all of Z and cannot be direct-summed");
    } else {
      require(is_finite_dimensional(s), Err::InvariantViolation,
              "interior direct-sum blocks must be finite-dimensional");
    }
  }
  OperatorSpec s;
  s.field = field;
  s.norm = norm;
  s.op = DirectSumOp{std::move(summands)};
  return s;
}

OperatorSpec make_generator(const Eigen::MatrixXcd& entries, ScalarField field,
                            NormTag norm) {
  require(entries.rows() == entries.cols(), Err::InvariantViolation,
          "generator must be square");
  require(matrix_is_finite(entries), Err::InvariantViolation,
          "generator entries must be finite");
  if (field == ScalarField::Real) {
    require(matrix_is_real(entries), Err::FieldMismatch,
            "complex entries in a real-field generator");
  }
  OperatorSpec s;
  s.field = field;
  s.norm = norm;
  s.op = GeneratorOp{entries};
  return s;
}

void validate(const OperatorSpec& spec) {
  std::visit(
      [&](const auto& op) {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, DenseMatrixOp>) {
          make_dense(op.entries, spec.field, spec.norm);
        } else if constexpr (std::is_same_v<T, RotationBlockOp>) {
          require(std::isfinite(op.angle), Err::InvariantViolation,
                  "rotation angle must be finite");
        } else if constexpr (std::is_same_v<T, WeightedShiftOp>) {
          make_shift(op.direction, op.weights, spec.field, spec.norm);
        } else if constexpr (std::is_same_v<T, StochasticMatrixOp>) {
          make_stochastic(op.entries, spec.norm);
        } else if constexpr (std::is_same_v<T, GeneratorOp>) {
          make_generator(op.entries, spec.field, spec.norm);
        } else {
          auto copy = op.summands;
          make_direct_sum(std::move(copy));
          for (const auto& s : op.summands) validate(s);
        }
      },
      spec.op);
}

std::optional<int> dimension(const OperatorSpec& spec) {
  return std::visit(
      [&](const auto& op) -> std::optional<int> {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, DenseMatrixOp> ||
                      std::is_same_v<T, GeneratorOp>) {
          return static_cast<int>(op.entries.rows());
        } else if constexpr (std::is_same_v<T, RotationBlockOp>) {
          return 2;
        } else if constexpr (std::is_same_v<T, StochasticMatrixOp>) {
          return static_cast<int>(op.entries.rows());
        } else if constexpr (std::is_same_v<T, WeightedShiftOp>) {
          return std::nullopt;
        } else {
          int total = 0;
          for (const auto& s : op.summands) {
            auto d = dimension(s);
            if (!d) return std::nullopt;
            total += *d;
          }
          return total;
        }
      },
      spec.op);
}

Eigen::MatrixXcd to_dense(const OperatorSpec& spec) {
  return std::visit(
      [&](const auto& op) -> Eigen::MatrixXcd {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, DenseMatrixOp> ||
                      std::is_same_v<T, GeneratorOp>) {
          return op.entries;
        } else if constexpr (std::is_same_v<T, RotationBlockOp>) {
          return rotation_matrix(op.angle);
        } else if constexpr (std::is_same_v<T, StochasticMatrixOp>) {
          return op.entries.cast<Complex>();
        } else if constexpr (std::is_same_v<T, WeightedShiftOp>) {
          fail(Err::NotFiniteDimensional,
               "shift models have no dense realization");
        } else {
          int total = 0;
          std::vector<Eigen::MatrixXcd> parts;
          for (const auto& s : op.summands) {
            parts.push_back(to_dense(s));
            total += static_cast<int>(parts.back().rows());
          }
          Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(total, total);
          int off = 0;
          for (const auto& p : parts) {
            const int d = static_cast<int>(p.rows());
            m.block(off, off, d, d) = p;
            off += d;
          }
          return m;
        }
      },
      spec.op);
}

SparseVector apply(const OperatorSpec& spec, const SparseVector& x) {
  require(x.field() == spec.field, Err::FieldMismatch,
          "vector field does not match operator field");
  return std::visit(
      [&](const auto& op) -> SparseVector {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, DenseMatrixOp> ||
                      std::is_same_v<T, GeneratorOp>) {
          return apply_dense_like(op.entries, x, spec.field);
        } else if constexpr (std::is_same_v<T, RotationBlockOp>) {
          return apply_dense_like(rotation_matrix(op.angle), x, spec.field);
        } else if constexpr (std::is_same_v<T, StochasticMatrixOp>) {
          return apply_dense_like(op.entries.cast<Complex>(), x, spec.field);
        } else if constexpr (std::is_same_v<T, WeightedShiftOp>) {
          return apply_shift(op, x, spec.field);
        } else {
          const auto blocks = block_layout(op);
          const std::int64_t finite_end =
          blocks.back().dim ? blocks.back().offset + *blocks.back().dim
                                : blocks.back().offset;
          std::vector<SparseVector> locals(blocks.size(),
                                           SparseVector(spec.field));
          for (const auto& [i, c] : x.support()) {
            if (i < 0) {
              fail(Err::IndexDomainViolation,
                   "negative index fed to a direct sum");
            }
            bool placed = false;
            for (std::size_t b = 0; b < blocks.size(); ++b) {
              const auto& blk = blocks[b];
              const bool tail = !blk.dim;
              if (i >= blk.offset && (tail || i < blk.offset + *blk.dim)) {
                locals[b].set(i - blk.offset, c);
                placed = true;
                break;
              }
            }
            if (!placed) {
              fail(Err::IndexDomainViolation,
                   "index " + std::to_string(i) +
                       " beyond the direct sum's blocks (total dimension " +
                       std::to_string(finite_end) + ")");
            }
          }
          SparseVector out(spec.field);
          for (std::size_t b = 0; b < blocks.size(); ++b) {
            if (locals[b].empty()) continue;
            SparseVector img = apply(*blocks[b].spec, locals[b]);
            out = out + img.translated(blocks[b].offset);
          }
          return out;
        }
      },
      spec.op);
}

SparseVector apply_power(const OperatorSpec& spec, const SparseVector& x,
                         std::int64_t n) {
  require(n >= 0, Err::InvariantViolation, "power must be nonnegative");
  require(x.field() == spec.field, Err::FieldMismatch,
          "vector field does not match operator field");
  if (n == 0) return x;
  if (const auto* sh = std::get_if<WeightedShiftOp>(&spec.op)) {
    return apply_shift_power(*sh, x, spec.field, n);
  }
  if (const auto* sum = std::get_if<DirectSumOp>(&spec.op)) {
    const auto blocks = block_layout(*sum);
    SparseVector out(spec.field);
    std::vector<SparseVector> locals(blocks.size(), SparseVector(spec.field));
    for (const auto& [i, c] : x.support()) {
      bool placed = false;
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto& blk = blocks[b];
        const bool tail = !blk.dim;
        if (i >= blk.offset && (tail || i < blk.offset + *blk.dim)) {
          locals[b].set(i - blk.offset, c);
          placed = true;
          break;
        }
      }
      if (!placed) {
        fail(Err::IndexDomainViolation, "index outside the direct sum");
      }
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (locals[b].empty()) continue;
      SparseVector img = apply_power(*blocks[b].spec, locals[b], n);
      out = out + img.translated(blocks[b].offset);
    }
    return out;
  }
  // finite-dimensional: iterate for short runs, square for long ones
  if (n <= 64) {
    SparseVector y = x;
    for (std::int64_t k = 0; k < n; ++k) y = apply(spec, y);
    return y;
  }
  Eigen::MatrixXcd p = matrix_power(to_dense(spec), n);
  return apply_dense_like(p, x, spec.field);
}

double operator_norm(const OperatorSpec& spec, BaseNorm base) {
  return std::visit(
      [&](const auto& op) -> double {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, WeightedShiftOp>) {
          double s = 0.0;
          for (const auto& w : op.weights) s = std::max(s, std::abs(w));
          return s;
        } else if constexpr (std::is_same_v<T, DirectSumOp>) {
          double s = 0.0;
          for (const auto& sm : op.summands)
            s = std::max(s, operator_norm(sm, base));
          return s;
        } else {
          Eigen::MatrixXcd m = to_dense(spec);
          switch (base) {
            case BaseNorm::L2: {
              Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
              return svd.singularValues().size() ? svd.singularValues()(0)
                                                 : 0.0;
            }
            case BaseNorm::L1: {
              double best = 0.0;
              for (Eigen::Index j = 0; j < m.cols(); ++j)
                best = std::max(best, m.col(j).cwiseAbs().sum());
              return best;
            }
            case BaseNorm::Sup: {
              double best = 0.0;
              for (Eigen::Index i = 0; i < m.rows(); ++i)
                best = std::max(best, m.row(i).cwiseAbs().sum());
              return best;
            }
          }
          return 0.0;
        }
      },
      spec.op);
}

bool is_exact_isometry(const OperatorSpec& spec) {
  return std::visit(
      [&](const auto& op) -> bool {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, WeightedShiftOp>) {
          if (op.direction == ShiftDirection::Backward) return false;
          for (const auto& w : op.weights) {
            if (!(w == Complex(1.0, 0.0))) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, RotationBlockOp>) {
          return spec.norm.base == BaseNorm::L2;
        } else if constexpr (std::is_same_v<T, DirectSumOp>) {
          for (const auto& s : op.summands) {
            if (!is_exact_isometry(s)) return false;
          }
          return true;
        } else {
          return false;
        }
      },
      spec.op);
}

OperatorSpec complexify(const OperatorSpec& spec) {
  require(spec.field == ScalarField::Real, Err::AlreadyComplex,
          "operator already carries the complex field");
  OperatorSpec out = spec;
  out.field = ScalarField::Complex;
  if (auto* sum = std::get_if<DirectSumOp>(&out.op)) {
    for (auto& s : sum->summands) s = complexify(s);
  }
  return out;
}

std::optional<OperatorSpec> dense_inverse(const OperatorSpec& spec) {
  if (!is_finite_dimensional(spec)) return std::nullopt;
  Eigen::MatrixXcd m = to_dense(spec);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) return std::nullopt;
  Eigen::MatrixXcd inv = lu.inverse();
  if (spec.field == ScalarField::Real) {
    // a real matrix has a real inverse; strip roundoff in imaginary parts
    inv = inv.real().cast<Complex>();
  }
  return make_dense(inv, spec.field, spec.norm);
}

}  // namespace opdyn
