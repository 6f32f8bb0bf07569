#pragma once

#include <optional>
#include <vector>

#include "opdyn/operator_spec.hpp"

namespace opdyn {

// Finite-dimensional criterion: spectral radius <= 1 + tol and every
// eigenvalue with |lambda| >= 1 - tol semisimple. Shifts are certified from
// sup of weight-window products. The horizon sup of ||T^n|| is attached as a
// cross-check, never as the deciding evidence.
struct PowerBoundCertificate {
  bool bounded = false;
  double sup_norm_estimate = 1.0;  // max_{n <= horizon} ||T^n||, >= 1
  double spectral_radius = 0.0;
  struct Witness {
    Complex eigenvalue;
    bool jordan_chain = false;  // unimodular eigenvalue with defect
  };
  std::optional<Witness> witness;  // populated when bounded = false
};

inline constexpr double kSpectralTol = 1e-9;

PowerBoundCertificate power_bounded_check(const OperatorSpec& spec,
                                          int horizon = 64);

// Rescaled-norm tag factory: the only way to mint a rescaled NormTag, gated
// on a bounded certificate.
NormTag make_rescaled_tag(const PowerBoundCertificate& cert, BaseNorm base,
                          int horizon = 1000);

// ||x|| := sup{||x||, ||Tx||, ||T^2 x||, ...} truncated at `horizon`.
// `value` is max_{0 <= n <= horizon} ||T^n x||; the truncation is audited by
// `tail_bound`: for m > horizon, ||T^m x|| <= sup_norm_estimate *
// min_{n <= horizon} ||T^n x||, since T^m x = T^{m-n}(T^n x).
struct RescaledNormResult {
  double value = 0.0;
  double tail_bound = 0.0;
  std::int64_t argmax = 0;
  int horizon = 0;
};

RescaledNormResult rescaled_norm(const OperatorSpec& spec,
                                 const SparseVector& x, int horizon = 1000,
                                 const PowerBoundCertificate* cert = nullptr);

// ||T^n x|| in the base norm for n = 0..horizon (successive application).
std::vector<double> orbit_base_norms(const OperatorSpec& spec,
                                     const SparseVector& x, int horizon,
                                     BaseNorm base);

// Suffix maxima M_n = max_{n <= m <= N} s_m. Rescaled norms of the orbit
// points of one trace, evaluated against a shared terminal index, are
// exactly these values, which makes the monotone-norm law structural
// instead of a floating-point accident.
std::vector<double> suffix_maxima(const std::vector<double>& s);

// Norm of a vector under a tag; rescaled tags need the operator.
double norm_of(const SparseVector& x, const NormTag& tag,
               const OperatorSpec* spec = nullptr);

}  // namespace opdyn
