#pragma once

#include <vector>

#include "opdyn/orbit.hpp"

namespace opdyn {

// Asymptotic splitting X = X0 (+) L of a power-bounded finite-dimensional
// operator: L is the peripheral spectral subspace (eigenvalues of modulus
// >= 1 - tol, all semisimple by the power-bound certificate), X0 the
// complementary spectral subspace on which the powers decay, and A the
// spectral projector onto L along X0. Computed from an eigenvalue-ordered
// Schur form: with U = [[U11, U12], [0, U22]] and U11 carrying the
// peripheral cluster, the projector in Schur coordinates is
// [[I, R], [0, 0]] where U11 R - R U22 = U12.
struct AsymptoticDecomposition {
  int dim_L = 0;
  std::vector<SparseVector> L_basis;   // orthonormal basis of range(A)
  std::vector<SparseVector> X0_basis;  // orthonormal basis of ker(A)
  Eigen::MatrixXcd projector;          // A (real-valued for real operators)
  std::vector<Complex> peripheral_eigenvalues;
  ScalarField field = ScalarField::Real;
  double peripheral_tol = 1e-9;

  // classification near |lambda| = 1 is ill-conditioned; eigenvalues
  // strictly inside (1 - tol, 1) are flagged rather than silently binned
  bool gap_warning = false;
  std::vector<Complex> gap_eigenvalues;

  double idempotency_defect = 0.0;  // ||A^2 - A||_2
  double commutation_defect = 0.0;  // ||TA - AT||_2
  double projector_norm = 0.0;      // ||A||_2 (reported, no gate)

  struct DecayFit {
    double C = 0.0;
    double q = 0.0;  // fitted ||T^n x0|| <= C q^n on the sampled range
    std::vector<std::pair<int, double>> tail;  // (n, ||T^n x0||) checkpoints
  };
  std::vector<DecayFit> decay;  // one per X0 basis vector

  // every L-basis vector is re-checked returning under the rescaled norm
  bool returning_verified = false;
  double returning_tol = 0.0;
  int returning_horizon = 0;
};

AsymptoticDecomposition decompose_asymptotic(const OperatorSpec& spec,
                                             double tol = 1e-9);

struct ProjectionReport {
  SparseVector projection{ScalarField::Real};  // a(x) = A x
  double tail_residual = 0.0;  // ||T^horizon (x - a(x))||
  double rho_at_projection = 0.0;
  bool locally_optimal = false;
  double perturbation = 1e-3;
};

// a(x) = A x, with the tail residual at `horizon` and a local-optimality
// check of the sampled rho_x(a) = min over the tail window of
// ||T^n x - T^n a|| against grid perturbations of a(x) inside L.
ProjectionReport asymptotic_project(const AsymptoticDecomposition& D,
                                    const OperatorSpec& spec,
                                    const SparseVector& x, int horizon);

// Real quadratic pencil witness: (r, s) = (-(lambda + conj lambda),
// |lambda|^2) for an eigenvalue lambda of the complexification, making
// T^2 + rT + sI singular.
struct RealQuadraticWitness {
  double r = 0.0;
  double s = 0.0;
  double singularity = 0.0;  // smallest singular value of T^2 + rT + sI
  Complex source_eigenvalue;
};

RealQuadraticWitness real_quadratic_witness(const OperatorSpec& spec);

}  // namespace opdyn
