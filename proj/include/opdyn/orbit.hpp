#pragma once

#include <variant>
#include <vector>

#include "opdyn/power_bound.hpp"

namespace opdyn {

// Strided orbit prefix: iterates[k] = T^{stride * k}(base), norms attached.
struct OrbitTrace {
  SparseVector base{ScalarField::Real};
  int horizon = 0;
  int stride = 1;
  std::vector<SparseVector> iterates;
  std::vector<double> norms;
};

OrbitTrace orbit(const OperatorSpec& spec, const SparseVector& x, int horizon,
                 int stride = 1);

// Finite epsilon-net standing in for a compact set: the union of closed
// mesh-balls around the centers. A mesh of zero is allowed in code (a finite
// set is compact); file input demands mesh > 0.
struct CompactNet {
  std::vector<SparseVector> centers;
  double mesh = 0.0;
};

CompactNet make_net(std::vector<SparseVector> centers, double mesh);

// Distance from x to the represented set, as an interval: the min distance d
// to the centers bounds it above, d - mesh (clamped at 0) below.
struct DistanceInterval {
  double lower = 0.0;
  double upper = 0.0;
};

DistanceInterval point_set_distance(const SparseVector& x, const CompactNet& K,
                                    BaseNorm base = BaseNorm::L2);

// Witnessed near-returns: indices m_k with ||T^{m_k} a - a|| <= tolerance.
struct ReturningCertificate {
  SparseVector vector{ScalarField::Real};
  std::vector<std::int64_t> indices;
  std::vector<double> residuals;
  double tolerance = 0.0;
};

struct NotReturning {
  double min_residual = 0.0;
  std::int64_t argmin = 0;
};

using ReturningOutcome = std::variant<ReturningCertificate, NotReturning>;

// Scans ||T^n a - a|| for n = 1..horizon under the active norm (the
// operator's tag unless overridden). A certificate needs at least three
// witnesses under tol. Throws NotPowerBounded when no rescaling can tame T.
// max_witnesses > 0 stops the scan once that many witnesses are collected.
ReturningOutcome is_returning(const OperatorSpec& spec, const SparseVector& a,
                              double tol, int horizon,
                              const NormTag* norm_override = nullptr,
                              int max_witnesses = 0);

struct ReturningSpanVerdict {
  bool norm_constancy = false;
  int span_dim = 0;
  bool isometry_on_span = false;
  double max_norm_drift = 0.0;  // max |  ||T^n a|| - ||a||  | over the horizon
};

// Checks the returning-span picture: the orbit norms of a returning vector
// are constant and T acts isometrically on the span of the orbit.
// Preconditions: ||T|| <= 1 under the active norm, `a` certified returning.
ReturningSpanVerdict returning_span_check(const OperatorSpec& spec,
                                          const SparseVector& a, double tol,
                                          int horizon,
                                          const NormTag* norm_override = nullptr);

struct VanishingOrbit {
  std::int64_t first_index = 0;  // first n with ||T^n a|| <= tol * ||a||
  double norm_at_index = 0.0;
};

using ScalarRecoveryOutcome = std::variant<ReturningCertificate, VanishingOrbit>;

// Recovers a returning certificate from scalar data lambda_k, n_k with
// lambda_k T^{n_k} a -> a: clusters the scalars, takes the largest cluster's
// mean c (snapped to +-1 over the reals), requires |c| = 1 within tol, finds
// m with |c^m - 1| <= tol and certifies the indices m * n_k. If the orbit
// norm dies below tol * ||a|| first, reports VanishingOrbit instead.
ScalarRecoveryOutcome recover_returning_from_scalars(
    const OperatorSpec& spec, const SparseVector& a,
    const std::vector<Complex>& lambdas, const std::vector<std::int64_t>& ns,
    double tol, int horizon);

struct AttractionVerdict {
  bool attracted = false;
  double tail_distance = 0.0;  // max (limit check) or min (liminf check)
};

// Per-sample limit check: attracted iff the max of the center distance over
// the last quarter of the horizon is <= mesh + tol.
std::vector<AttractionVerdict> attractor_check(
    const OperatorSpec& spec, const CompactNet& K,
    const std::vector<SparseVector>& unit_samples, int horizon, double tol);

// Per-sample liminf check: the tail minimum over [horizon/2, horizon].
std::vector<AttractionVerdict> occasional_attractor_check(
    const OperatorSpec& spec, const CompactNet& K,
    const std::vector<SparseVector>& unit_samples, int horizon, double tol);

}  // namespace opdyn
