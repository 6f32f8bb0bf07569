#pragma once

#include <Eigen/Dense>
#include <optional>
#include <variant>
#include <vector>

#include "opdyn/norms.hpp"
#include "opdyn/sparse_vector.hpp"

namespace opdyn {

enum class ShiftDirection { Forward, Backward, Bilateral };

inline const char* direction_name(ShiftDirection d) {
  switch (d) {
    case ShiftDirection::Forward: return "forward";
    case ShiftDirection::Backward: return "backward";
    case ShiftDirection::Bilateral: return "bilateral";
  }
  return "?";
}

struct OperatorSpec;

// d x d matrix acting on coordinates 0..d-1.
struct DenseMatrixOp {
  Eigen::MatrixXcd entries;
};

// Rotation by `angle` on a 2-dimensional real space:
// [[cos a, -sin a], [sin a, cos a]].
struct RotationBlockOp {
  double angle = 0.0;
};

// e_k -> w(k) e_{k+1} (Forward / Bilateral) or e_k -> w(k) e_{k-1}
// (Backward, with e_0 annihilated). One stored weight means a constant
// rule; several mean periodic repetition indexed by k mod period.
struct WeightedShiftOp {
  ShiftDirection direction = ShiftDirection::Forward;
  std::vector<Complex> weights = {Complex(1.0, 0.0)};

  Complex weight_at(std::int64_t k) const {
    auto p = static_cast<std::int64_t>(weights.size());
    std::int64_t r = ((k % p) + p) % p;
    return weights[static_cast<std::size_t>(r)];
  }
};

// Column-stochastic nonnegative matrix; default norm is L1.
struct StochasticMatrixOp {
  Eigen::MatrixXd entries;
};

// Block direct sum. Finite summands occupy consecutive index blocks; at
// most one shift summand is allowed and it must sit last, taking the
// remaining indices. Bilateral shifts need all of Z and cannot be summed.
struct DirectSumOp {
  std::vector<OperatorSpec> summands;
};

// d x d matrix used as a semigroup generator; applied directly it is just
// the matrix G.
struct GeneratorOp {
  Eigen::MatrixXcd entries;
};

struct OperatorSpec {
  ScalarField field = ScalarField::Real;
  NormTag norm = l2_tag();
  std::variant<DenseMatrixOp, RotationBlockOp, WeightedShiftOp,
               StochasticMatrixOp, DirectSumOp, GeneratorOp>
      op;

  bool is_shift() const {
    return std::holds_alternative<WeightedShiftOp>(op);
  }
};

bool operator==(const OperatorSpec& a, const OperatorSpec& b);

// Constructors that validate the variant invariants (stochastic columns,
// rotation field, direct-sum shape). Throw InvariantViolation on misuse.
OperatorSpec make_dense(const Eigen::MatrixXcd& entries, ScalarField field,
                        NormTag norm = l2_tag());
OperatorSpec make_dense_real(const Eigen::MatrixXd& entries,
                             NormTag norm = l2_tag());
OperatorSpec make_rotation(double angle, NormTag norm = l2_tag());
OperatorSpec make_shift(ShiftDirection direction,
                        std::vector<Complex> weights = {Complex(1.0, 0.0)},
                        ScalarField field = ScalarField::Real,
                        NormTag norm = l2_tag());
OperatorSpec make_stochastic(const Eigen::MatrixXd& entries,
                             NormTag norm = l1_tag());
OperatorSpec make_direct_sum(std::vector<OperatorSpec> summands);
OperatorSpec make_generator(const Eigen::MatrixXcd& entries, ScalarField field,
                            NormTag norm = l2_tag());

// Re-checks all construction invariants (used after JSON parsing).
void validate(const OperatorSpec& spec);

// Ambient dimension; nullopt for shift models (and sums containing one).
std::optional<int> dimension(const OperatorSpec& spec);

inline bool is_finite_dimensional(const OperatorSpec& spec) {
  return dimension(spec).has_value();
}

// Dense realization of a finite-dimensional operator.
// Throws NotFiniteDimensional for shift models.
Eigen::MatrixXcd to_dense(const OperatorSpec& spec);

// Exact image Tx. Shift variants act by index translation times weight.
SparseVector apply(const OperatorSpec& spec, const SparseVector& x);

// x |-> T^n x by successive application.
SparseVector apply_power(const OperatorSpec& spec, const SparseVector& x,
                         std::int64_t n);

// Induced operator norm under a base norm: largest singular value (L2),
// max column sum (L1), max row sum (Sup). Shifts: sup of |weights|.
double operator_norm(const OperatorSpec& spec, BaseNorm base);

// True when T provably preserves the tagged norm of every sparse vector:
// shifts with every weight exactly 1 (Forward or Bilateral), rotation
// blocks under L2, and direct sums of such.
bool is_exact_isometry(const OperatorSpec& spec);

// T_C(x + iy) = Tx + iTy: same coefficients, complex field tag.
// Throws AlreadyComplex for complex operators.
OperatorSpec complexify(const OperatorSpec& spec);

// Dense inverse for finite-dimensional invertible operators; nullopt when
// singular (rank test at 1e-12 * ||T||) or not finite-dimensional.
std::optional<OperatorSpec> dense_inverse(const OperatorSpec& spec);

}  // namespace opdyn
