#pragma once

#include <variant>
#include <vector>

#include "opdyn/orbit.hpp"

namespace opdyn {

// Family of unit approximate eigenvectors: ||T z_n - lambda z_n|| -> 0 with
// a uniform pairwise separation, so no subsequence can converge.
struct WeylSequenceReport {
  Complex lambda;
  std::vector<SparseVector> vectors;
  std::vector<double> residuals;  // measured ||T z_n - lambda z_n||
  double separation = 0.0;        // min pairwise ||z_n - z_m||, 0 if < 2
  bool finite_dimensional = false;  // dense-model truncation diagnostic
};

// Weyl vectors for the unit-weight shift at a unimodular lambda:
// z_n = n^{-1/2} sum_{k=a_n}^{a_n+n-1} lambda^{-k} e_k on the disjoint
// windows a_n = n^2. The interior of T z_n - lambda z_n cancels exactly by
// construction (coefficients are built by the downward recurrence
// c_{k-1} = lambda * c_k), leaving the two boundary terms, so the L2
// residual is sqrt(2)/sqrt(n) and the pairwise separation sqrt(2).
WeylSequenceReport weyl_sequence_shift(ShiftDirection direction, Complex lambda,
                                       int count);

// The infinite-kernel branch in its one in-scope instance: for the identity
// at lambda = 1, ker(T - 1) is everything, and the orthonormal basis e_n is
// already a Weyl sequence with exact zero residuals.
WeylSequenceReport weyl_sequence_identity(int count);

// Dense emulation: S = T - lambda. A nontrivial numerical kernel returns
// exact eigendirections; otherwise the smallest singular direction is
// returned when its residual is under `threshold`. Finite dimensions have
// empty essential spectrum, so the report is flagged finite_dimensional.
WeylSequenceReport weyl_sequence_dense(const OperatorSpec& spec, Complex lambda,
                                       double threshold);

struct FalsifyWitness {
  std::size_t probe_index = 0;
  SparseVector probe{ScalarField::Real};
  double min_tail_distance = 0.0;
};

struct NetSurvives {
  double max_min_tail_distance = 0.0;  // closest any probe came to escaping
};

using FalsifyOutcome = std::variant<FalsifyWitness, NetSurvives>;

// Falsification harness for exact isometries: hunts for a probe whose tail
// orbit stays farther than mesh + 1e-9 from the net, which refutes the
// liminf condition for this net at this horizon. NetSurvives is
// inconclusive by design; the universal claim is not finitely checkable.
FalsifyOutcome isometry_net_falsify(const OperatorSpec& spec,
                                    const CompactNet& K,
                                    const std::vector<SparseVector>& probes,
                                    int horizon);

}  // namespace opdyn
