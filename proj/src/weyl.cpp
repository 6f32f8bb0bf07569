#include "opdyn/weyl.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace opdyn {

namespace {

double min_pairwise_distance(const std::vector<SparseVector>& vs,
                             BaseNorm base) {
  if (vs.size() < 2) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      best = std::min(best, (vs[i] - vs[j]).norm(base));
    }
  }
  return best;
}

}  // namespace

WeylSequenceReport weyl_sequence_shift(ShiftDirection direction, Complex lambda,
                                       int count) {
  require(direction != ShiftDirection::Backward, Err::InvariantViolation,
          "Weyl construction covers forward and bilateral shifts");
  require(count >= 1, Err::InvariantViolation, "count must be >= 1");
  require(std::abs(std::abs(lambda) - 1.0) <= 1e-12, Err::NotUnimodular,
          "shift Weyl vectors exist for unimodular lambda only");

  const OperatorSpec shift = make_shift(direction, {Complex(1.0, 0.0)},
                                        ScalarField::Complex, l2_tag());
  const double theta = std::arg(lambda);

  WeylSequenceReport rep;
  rep.lambda = lambda;
  rep.finite_dimensional = false;
  for (int n = 1; n <= count; ++n) {
    const std::int64_t a = static_cast<std::int64_t>(n) * n;
    const std::int64_t top = a + n - 1;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    // downward recurrence c_{k-1} = lambda * c_k makes the interior of
    // S z - lambda z cancel bitwise, leaving the two boundary terms
    SparseVector z(ScalarField::Complex);
    Complex c = std::polar(scale, -theta * static_cast<double>(top));
    z.set(top, c);
    for (std::int64_t k = top; k > a; --k) {
      c = lambda * c;
      z.set(k - 1, c);
    }
    rep.vectors.push_back(z);
    const SparseVector resv = apply(shift, z) - z.scaled(lambda);
    rep.residuals.push_back(resv.norm(BaseNorm::L2));
  }
  rep.separation = min_pairwise_distance(rep.vectors, BaseNorm::L2);
  return rep;
}

WeylSequenceReport weyl_sequence_identity(int count) {
  require(count >= 1, Err::InvariantViolation, "count must be >= 1");
  WeylSequenceReport rep;
  rep.lambda = Complex(1.0, 0.0);
  rep.finite_dimensional = false;
  for (int n = 1; n <= count; ++n) {
    rep.vectors.push_back(SparseVector::unit(n, ScalarField::Complex));
    rep.residuals.push_back(0.0);  // (T - 1) z = 0 identically
  }
  rep.separation = min_pairwise_distance(rep.vectors, BaseNorm::L2);
  return rep;
}

WeylSequenceReport weyl_sequence_dense(const OperatorSpec& spec, Complex lambda,
                                       double threshold) {
  require(is_finite_dimensional(spec), Err::NotFiniteDimensional,
          "dense Weyl emulation needs a finite-dimensional operator");
  const Eigen::MatrixXcd m = to_dense(spec);
  const int d = static_cast<int>(m.rows());
  const Eigen::MatrixXcd s =
      m - lambda * Eigen::MatrixXcd::Identity(d, d);

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double kernel_tol = 1e-9 * std::max(1.0, smax);

  WeylSequenceReport rep;
  rep.lambda = lambda;
  rep.finite_dimensional = true;

  auto col_to_sparse = [&](const Eigen::VectorXcd& col) {
    SparseVector v(ScalarField::Complex);
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (col(i) != Complex(0.0, 0.0))
        v.set(static_cast<std::int64_t>(i), col(i));
    }
    return v;
  };
  auto measured_residual = [&](const Eigen::VectorXcd& col) {
    return (s * col).norm();
  };

  int kernel_dim = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) <= kernel_tol) ++kernel_dim;

  if (kernel_dim > 0) {
    for (int i = d - kernel_dim; i < d; ++i) {
      rep.vectors.push_back(col_to_sparse(svd.matrixV().col(i)));
      rep.residuals.push_back(measured_residual(svd.matrixV().col(i)));
    }
  } else {
    const double smin = sv(d - 1);
    if (smin > threshold) {
      fail(Err::NoApproximateKernel,
           "smallest singular value of T - lambda is " +
               std::to_string(smin) + ", above the threshold " +
               std::to_string(threshold));
    }
    rep.vectors.push_back(col_to_sparse(svd.matrixV().col(d - 1)));
    rep.residuals.push_back(measured_residual(svd.matrixV().col(d - 1)));
  }
  rep.separation = min_pairwise_distance(rep.vectors, BaseNorm::L2);
  return rep;
}

FalsifyOutcome isometry_net_falsify(const OperatorSpec& spec,
                                    const CompactNet& K,
                                    const std::vector<SparseVector>& probes,
                                    int horizon) {
  require(is_exact_isometry(spec), Err::NotIsometry,
          "falsification harness runs on certified exact isometries only");
  require(!probes.empty(), Err::EmptySampleSet, "no probes supplied");
  require(!K.centers.empty(), Err::EmptyNet, "no net supplied");
  require(horizon >= 4, Err::InvariantViolation, "horizon too small");
  const BaseNorm base = spec.norm.base;
  for (const auto& p : probes) {
    require(p.norm(base) <= 1.0 + 1e-9, Err::InvariantViolation,
            "probes must lie in the unit ball");
  }

  const int window_start = horizon / 2;
  double closest_escape = 0.0;
  for (std::size_t pi = 0; pi < probes.size(); ++pi) {
    SparseVector y = probes[pi];
    double tail_min = std::numeric_limits<double>::infinity();
    for (int n = 0; n <= horizon; ++n) {
      if (n > 0) y = apply(spec, y);
      if (n < window_start) continue;
      tail_min = std::min(tail_min, point_set_distance(y, K, base).upper);
    }
    if (tail_min > K.mesh + 1e-9) {
      FalsifyWitness w;
      w.probe_index = pi;
      w.probe = probes[pi];
      w.min_tail_distance = tail_min;
      return w;
    }
    closest_escape = std::max(closest_escape, tail_min);
  }
  return NetSurvives{closest_escape};
}

}  // namespace opdyn
