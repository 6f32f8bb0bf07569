#include "opdyn/orbit.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <deque>

#include "opdyn/sampling.hpp"

namespace opdyn {

namespace {

// max over the window [i, min(i+w, N-1)] for each i, via monotone deque
std::vector<double> sliding_window_max(const std::vector<double>& s,
                                       std::size_t w) {
  const std::size_t n = s.size();
  std::vector<double> out(n);
  std::deque<std::size_t> dq;
  std::size_t right = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t hi = std::min(n - 1, i + w);
    while (right <= hi) {
      while (!dq.empty() && s[dq.back()] <= s[right]) dq.pop_back();
      dq.push_back(right);
      ++right;
    }
    while (!dq.empty() && dq.front() < i) dq.pop_front();
    out[i] = s[dq.front()];
  }
  return out;
}

double active_residual_norm(const OperatorSpec& spec, const NormTag& tag,
                            const SparseVector& v) {
  if (!tag.rescaled) return v.norm(tag.base);
  return rescaled_norm(spec, v, tag.horizon).value;
}

SparseVector dense_column_to_sparse(const Eigen::VectorXcd& col,
                                    const std::vector<std::int64_t>& coords,
                                    ScalarField field) {
  SparseVector v(field);
  for (Eigen::Index i = 0; i < col.size(); ++i) {
    Complex c = col(i);
    if (field == ScalarField::Real) c = Complex(c.real(), 0.0);
    if (c != Complex(0.0, 0.0)) v.set(coords[static_cast<std::size_t>(i)], c);
  }
  return v;
}

}  // namespace

OrbitTrace orbit(const OperatorSpec& spec, const SparseVector& x, int horizon,
                 int stride) {
  require(horizon >= 1, Err::InvariantViolation, "orbit horizon must be >= 1");
  require(stride >= 1, Err::InvariantViolation, "orbit stride must be >= 1");
  require(x.field() == spec.field, Err::FieldMismatch,
          "vector field does not match operator field");
  OrbitTrace t;
  t.base = x;
  t.horizon = horizon;
  t.stride = stride;
  SparseVector y = x;
  t.iterates.push_back(y);
  t.norms.push_back(y.norm(spec.norm.base));
  for (int n = stride; n <= horizon; n += stride) {
    y = apply_power(spec, y, stride);
    t.iterates.push_back(y);
    t.norms.push_back(y.norm(spec.norm.base));
  }
  return t;
}

CompactNet make_net(std::vector<SparseVector> centers, double mesh) {
  require(!centers.empty(), Err::EmptyNet, "net needs at least one center");
  require(mesh >= 0.0 && std::isfinite(mesh), Err::InvariantViolation,
          "net mesh must be finite and nonnegative");
  for (std::size_t i = 1; i < centers.size(); ++i) {
    require(centers[i].field() == centers[0].field(), Err::FieldMismatch,
            "net centers carry mixed scalar fields");
  }
  return CompactNet{std::move(centers), mesh};
}

DistanceInterval point_set_distance(const SparseVector& x, const CompactNet& K,
                                    BaseNorm base) {
  require(!K.centers.empty(), Err::EmptyNet, "distance to an empty net");
  double d = std::numeric_limits<double>::infinity();
  for (const auto& c : K.centers) {
    check_same_field(x, c);
    d = std::min(d, (x - c).norm(base));
  }
  return DistanceInterval{std::max(0.0, d - K.mesh), d};
}

ReturningOutcome is_returning(const OperatorSpec& spec, const SparseVector& a,
                              double tol, int horizon,
                              const NormTag* norm_override,
                              int max_witnesses) {
  const PowerBoundCertificate cert = power_bounded_check(spec);
  require(cert.bounded, Err::NotPowerBounded,
          "returning detection requires a power-bounded operator");
  const NormTag tag = norm_override ? *norm_override : spec.norm;
  // when sup ||T^n|| = 1 the rescaled norm coincides with the base norm
  const bool rescale_is_base =
      !tag.rescaled || cert.sup_norm_estimate <= 1.0 + 1e-12;

  ReturningCertificate out;
  out.vector = a;
  out.tolerance = tol;

  double min_base = std::numeric_limits<double>::infinity();
  std::int64_t argmin = 0;
  SparseVector y = a;
  for (int n = 1; n <= horizon; ++n) {
    y = apply(spec, y);
    const SparseVector diff = y - a;
    const double base_res = diff.norm(tag.base);
    if (base_res < min_base) {
      min_base = base_res;
      argmin = n;
    }
    if (base_res > tol) continue;  // rescaled residual dominates the base one
    double res = base_res;
    if (!rescale_is_base) {
      res = rescaled_norm(spec, diff, tag.horizon, &cert).value;
      if (res > tol) continue;
    }
    out.indices.push_back(n);
    out.residuals.push_back(res);
    if (max_witnesses > 0 &&
        out.indices.size() >= static_cast<std::size_t>(max_witnesses)) {
      break;
    }
  }

  if (out.indices.size() >= 3) return out;

  NotReturning nr;
  nr.argmin = argmin;
  if (tag.rescaled && std::isfinite(min_base)) {
    SparseVector d = apply_power(spec, a, argmin) - a;
    nr.min_residual = rescaled_norm(spec, d, tag.horizon, &cert).value;
  } else {
    nr.min_residual = min_base;
  }
  return nr;
}

ReturningSpanVerdict returning_span_check(const OperatorSpec& spec,
                                          const SparseVector& a, double tol,
                                          int horizon,
                                          const NormTag* norm_override) {
  const NormTag tag = norm_override ? *norm_override : spec.norm;
  if (!tag.rescaled) {
    const double opn = operator_norm(spec, tag.base);
    require(opn <= 1.0 + 1e-9, Err::NotContraction,
            "||T|| = " + std::to_string(opn) +
                " > 1 under the active norm; rescale first");
  }

  const auto ret = is_returning(spec, a, tol, horizon, &tag);
  require(std::holds_alternative<ReturningCertificate>(ret),
          Err::PreconditionNotReturning,
          "vector is not certified returning at this tolerance and horizon");

  ReturningSpanVerdict v;

  // Norm constancy along the orbit. Under a rescaled tag the orbit-point
  // norms are sliding-window maxima of one shared base-norm trace.
  if (tag.rescaled) {
    const auto base_norms =
        orbit_base_norms(spec, a, horizon + tag.horizon, tag.base);
    const auto win =
        sliding_window_max(base_norms, static_cast<std::size_t>(tag.horizon));
    double drift = 0.0;
    for (int n = 0; n <= horizon; ++n) {
      drift = std::max(drift, std::abs(win[static_cast<std::size_t>(n)] - win[0]));
    }
    v.max_norm_drift = drift;
  } else {
    const auto norms = orbit_base_norms(spec, a, horizon, tag.base);
    double drift = 0.0;
    for (double s : norms) drift = std::max(drift, std::abs(s - norms[0]));
    v.max_norm_drift = drift;
  }
  v.norm_constancy = v.max_norm_drift <= tol;

  // Spanning set of the orbit; numerical rank over the union support.
  const int span_cap = std::min(horizon, 127);
  std::vector<SparseVector> iterates;
  {
    SparseVector y = a;
    iterates.push_back(y);
    for (int n = 1; n <= span_cap; ++n) {
      y = apply(spec, y);
      iterates.push_back(y);
    }
  }
  std::vector<std::int64_t> coords;
  {
    std::map<std::int64_t, bool> seen;
    for (const auto& it : iterates)
      for (const auto& [i, c] : it.support()) seen[i] = true;
    for (const auto& [i, b] : seen) coords.push_back(i);
  }
  if (coords.empty()) {
    v.span_dim = 0;
    v.isometry_on_span = true;
    return v;
  }
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(coords.size()),
                     static_cast<Eigen::Index>(iterates.size()));
  m.setZero();
  for (std::size_t j = 0; j < iterates.size(); ++j) {
    for (const auto& [i, c] : iterates[j].support()) {
      const auto row = std::lower_bound(coords.begin(), coords.end(), i) -
                       coords.begin();
      m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j)) = c;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double rank_tol = sv.size() ? 1e-9 * sv(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rank_tol) ++rank;
  v.span_dim = rank;

  // T on sampled span elements: seeded combinations of the singular basis.
  DeterministicRng rng(kDefaultSeed);
  bool isom = true;
  for (int trial = 0; trial < 32 && isom; ++trial) {
    Eigen::VectorXcd g(rank);
    for (int r = 0; r < rank; ++r) {
      g(r) = spec.field == ScalarField::Real ? Complex(rng.normal(), 0.0)
                                             : rng.normal_complex();
    }
    Eigen::VectorXcd zd = svd.matrixU().leftCols(rank) * g;
    SparseVector z = dense_column_to_sparse(zd, coords, spec.field);
    if (z.empty()) continue;
    const double nz = active_residual_norm(spec, tag, z);
    const double ntz = active_residual_norm(spec, tag, apply(spec, z));
    if (std::abs(ntz - nz) > tol * std::max(1.0, nz)) isom = false;
  }
  v.isometry_on_span = isom;
  return v;
}

ScalarRecoveryOutcome recover_returning_from_scalars(
    const OperatorSpec& spec, const SparseVector& a,
    const std::vector<Complex>& lambdas, const std::vector<std::int64_t>& ns,
    double tol, int horizon) {
  require(lambdas.size() == ns.size() && !lambdas.empty(),
          Err::HypothesisNotSatisfied,
          "scalar and index sequences must align and be nonempty");
  for (std::size_t k = 1; k < ns.size(); ++k) {
    require(ns[k] > ns[k - 1], Err::HypothesisNotSatisfied,
            "indices n_k must be strictly increasing");
  }
  require(ns.front() >= 1, Err::HypothesisNotSatisfied,
          "indices n_k must be positive");
  if (spec.field == ScalarField::Real) {
    for (const auto& l : lambdas) {
      require(is_real_value(l), Err::FieldMismatch,
              "complex scalar data over a real-field operator");
    }
  }

  const NormTag tag = spec.norm;
  const double norm_a = active_residual_norm(spec, tag, a);
  require(norm_a > 0.0, Err::HypothesisNotSatisfied, "zero vector");

  // hypothesis: ||lambda_k T^{n_k} a - a|| non-increasing and ending <= tol
  std::vector<double> h(lambdas.size());
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const SparseVector d = apply_power(spec, a, ns[k]).scaled(lambdas[k]) - a;
    h[k] = active_residual_norm(spec, tag, d);
    if (k > 0) {
      require(h[k] <= h[k - 1] + 1e-9 * (1.0 + norm_a),
              Err::HypothesisNotSatisfied,
              "residuals lambda_k T^{n_k} a - a do not decrease");
    }
  }
  require(h.back() <= tol, Err::HypothesisNotSatisfied,
          "residuals do not fall below tol along the provided data");

  // orbit vanishing pre-empts extraction
  {
    SparseVector y = a;
    const double floor = tol * a.norm(tag.base);
    for (int n = 1; n <= horizon; ++n) {
      y = apply(spec, y);
      const double nn = y.norm(tag.base);
      if (nn <= floor) return VanishingOrbit{n, nn};
    }
  }

  // cluster the scalars attached to sub-tol residuals; largest cluster wins
  struct Cluster {
    Complex sum{0.0, 0.0};
    std::vector<std::size_t> members;
    Complex mean() const {
      return sum / static_cast<double>(members.size());
    }
  };
  std::vector<Cluster> clusters;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (h[k] > tol) continue;
    bool placed = false;
    for (auto& cl : clusters) {
      if (std::abs(lambdas[k] - cl.mean()) <= tol) {
        cl.sum += lambdas[k];
        cl.members.push_back(k);
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back(Cluster{lambdas[k], {k}});
  }
  require(!clusters.empty(), Err::HypothesisNotSatisfied,
          "no scalar data below tol to extract from");
  std::size_t best = 0;
  for (std::size_t i = 1; i < clusters.size(); ++i) {
    if (clusters[i].members.size() > clusters[best].members.size()) best = i;
  }
  Complex c = clusters[best].mean();
  require(std::abs(std::abs(c) - 1.0) <= tol, Err::ScalarNotUnimodular,
          "extracted scalar has modulus " + std::to_string(std::abs(c)));
  if (spec.field == ScalarField::Real) {
    c = Complex(c.real() >= 0.0 ? 1.0 : -1.0, 0.0);
  }

  // smallest m with |c^m - 1| <= tol; exists since |c| = 1 up to tol
  std::int64_t m = 0;
  {
    const std::int64_t cap =
        std::max<std::int64_t>(16, static_cast<std::int64_t>(std::ceil(
                                       4.0 * M_PI / std::max(tol, 1e-9))));
    Complex cm = c;
    for (std::int64_t j = 1; j <= cap; ++j) {
      if (std::abs(cm - Complex(1.0, 0.0)) <= tol) {
        m = j;
        break;
      }
      cm *= c;
    }
    require(m >= 1, Err::ScalarNotUnimodular,
            "no power of the extracted scalar approaches 1");
  }

  ReturningCertificate cert;
  cert.vector = a;
  std::vector<std::int64_t> base_indices;
  for (std::size_t k : clusters[best].members) base_indices.push_back(ns[k]);
  std::sort(base_indices.begin(), base_indices.end());
  std::vector<std::int64_t> indices;
  for (std::int64_t nk : base_indices) indices.push_back(m * nk);
  std::int64_t mult = 2;
  while (indices.size() < 3) {
    indices.push_back(mult * m * base_indices.back());
    ++mult;
  }
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  while (indices.size() < 3) {
    indices.push_back(indices.back() + m * base_indices.back());
  }

  double worst = 0.0;
  for (std::int64_t idx : indices) {
    const SparseVector d = apply_power(spec, a, idx) - a;
    const double r = active_residual_norm(spec, tag, d);
    cert.indices.push_back(idx);
    cert.residuals.push_back(r);
    worst = std::max(worst, r);
  }
  cert.tolerance = std::max(tol, worst);
  return cert;
}

namespace {

std::vector<AttractionVerdict> attraction_run(
    const OperatorSpec& spec, const CompactNet& K,
    const std::vector<SparseVector>& samples, int horizon, double tol,
    bool liminf_mode) {
  require(!samples.empty(), Err::EmptySampleSet,
          "attraction check needs at least one sample");
  require(!K.centers.empty(), Err::EmptyNet, "attraction check needs a net");
  require(horizon >= 4, Err::InvariantViolation, "horizon too small");
  const BaseNorm base = spec.norm.base;
  for (const auto& s : samples) {
    require(s.norm(base) <= 1.0 + 1e-9, Err::InvariantViolation,
            "samples must lie in the unit ball of the active norm");
  }

  const int window_start = liminf_mode ? horizon / 2 : (3 * horizon) / 4;
  std::vector<AttractionVerdict> verdicts;
  verdicts.reserve(samples.size());
  for (const auto& s : samples) {
    SparseVector y = s;
    double agg = liminf_mode ? std::numeric_limits<double>::infinity() : 0.0;
    for (int n = 0; n <= horizon; ++n) {
      if (n > 0) y = apply(spec, y);
      if (n < window_start) continue;
      const double d = point_set_distance(y, K, base).upper;
      agg = liminf_mode ? std::min(agg, d) : std::max(agg, d);
    }
    AttractionVerdict v;
    v.tail_distance = agg;
    v.attracted = agg <= K.mesh + tol;
    verdicts.push_back(v);
  }
  return verdicts;
}

}  // namespace

std::vector<AttractionVerdict> attractor_check(
    const OperatorSpec& spec, const CompactNet& K,
    const std::vector<SparseVector>& unit_samples, int horizon, double tol) {
  return attraction_run(spec, K, unit_samples, horizon, tol, false);
}

std::vector<AttractionVerdict> occasional_attractor_check(
    const OperatorSpec& spec, const CompactNet& K,
    const std::vector<SparseVector>& unit_samples, int horizon, double tol) {
  return attraction_run(spec, K, unit_samples, horizon, tol, true);
}

}  // namespace opdyn
