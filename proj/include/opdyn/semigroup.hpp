#pragma once

#include <vector>

#include "opdyn/orbit.hpp"

namespace opdyn {

// One-parameter semigroup T_t = exp(tG) for a d x d generator.
// Boundedness is certified by the eigenvalue criterion (real parts <= 0,
// imaginary-axis eigenvalues semisimple); the sampled sup of ||T_t|| is a
// cross-check, never the deciding evidence.
struct SemigroupSpec {
  OperatorSpec generator;
  Eigen::MatrixXcd g;  // dense generator matrix
  bool bounded = false;
  double sampled_sup = 1.0;       // max ||exp(tG)||_2 over the sample grid
  double sup_on_unit_time = 1.0;  // max ||exp(tG)||_2 over t in [0, 1]
  double generator_norm = 0.0;    // ||G||_2
};

SemigroupSpec make_semigroup(const OperatorSpec& generator_spec);

// exp(tG); t >= 0.
Eigen::MatrixXcd semigroup_at(const SemigroupSpec& S, double t);

// T_t = exp(tG) applied to a sparse vector.
SparseVector semigroup_apply(const SemigroupSpec& S, double t,
                             const SparseVector& x);

struct SemigroupSample {
  std::vector<double> times;
  std::vector<Eigen::MatrixXcd> operators;
};

SemigroupSample semigroup_sample(const SemigroupSpec& S,
                                 const std::vector<double>& times);

// Net covering the union of T_t(K) over t in [0, 1]: centers are
// exp(j dt G) c on the dt-grid, and the mesh is inflated by
// K.mesh * sup_{t<=1} ||T_t|| + dt * ||G|| * sup_{t<=1} ||T_t|| * max ||c||,
// the crude Lipschitz-in-t bound, so the result covers the true union.
CompactNet semigroup_interval_net(const SemigroupSpec& S, const CompactNet& K,
                                  double dt);

struct ContinuousAttractionReport {
  bool converges = false;
  double max_tail_distance = 0.0;
  std::vector<double> betas;  // fractional-part cluster representatives
  std::vector<std::pair<double, double>> per_time;  // (t, distance to span L)
  double max_split_defect = 0.0;  // ||T_t x - T_[t](T_{t} x)|| over samples
};

// Transfers certified integer-time attraction to real times: checks that
// T_t L stays inside span(L_basis), then measures the distance of T_t x to
// span(L_basis) at the supplied real times. The fractional parts {t} are
// clustered into bins of width `dt`; each time is also re-evaluated through
// the split T_t = T_[t] T_{t} as a consistency check.
ContinuousAttractionReport continuous_attraction_check(
    const SemigroupSpec& S, const std::vector<SparseVector>& L_basis,
    const SparseVector& x, const std::vector<double>& real_times, double tol,
    double dt = 1.0 / 64.0);

}  // namespace opdyn
