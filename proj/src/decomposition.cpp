#include "opdyn/decomposition.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace opdyn {

namespace {

double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

// Swaps the adjacent diagonal entries (k, k) and (k+1, k+1) of the upper
// triangular U by a unitary similarity; Q absorbs the rotation. The first
// column of the rotation is the normalized eigenvector [b, c - a] of the
// 2x2 block [[a, b], [0, c]] for the eigenvalue c.
void schur_swap_adjacent(Eigen::MatrixXcd& U, Eigen::MatrixXcd& Q, int k) {
  const Complex a = U(k, k);
  const Complex b = U(k, k + 1);
  const Complex c = U(k + 1, k + 1);
  const double r = std::sqrt(std::norm(b) + std::norm(c - a));
  if (r == 0.0) return;  // identical eigenvalues, nothing to move
  Eigen::Matrix2cd G;
  const Complex v1 = b / r;
  const Complex v2 = (c - a) / r;
  G << v1, -std::conj(v2), v2, std::conj(v1);
  U.middleCols(k, 2) = (U.middleCols(k, 2) * G).eval();
  U.middleRows(k, 2) = (G.adjoint() * U.middleRows(k, 2)).eval();
  Q.middleCols(k, 2) = (Q.middleCols(k, 2) * G).eval();
  U(k + 1, k) = Complex(0.0, 0.0);
}

// U11 R - R U22 = U12 with both diagonal blocks upper triangular, solved
// column by column; the diagonal gaps are bounded below by the spectral
// split between the peripheral cluster and the interior one.
Eigen::MatrixXcd solve_triangular_sylvester(const Eigen::MatrixXcd& U11,
                                            const Eigen::MatrixXcd& U22,
                                            const Eigen::MatrixXcd& U12) {
  const int k = static_cast<int>(U11.rows());
  const int m = static_cast<int>(U22.rows());
  Eigen::MatrixXcd R(k, m);
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXcd rhs = U12.col(j);
    for (int i = 0; i < j; ++i) rhs += R.col(i) * U22(i, j);
    Eigen::MatrixXcd lhs =
        U11 - U22(j, j) * Eigen::MatrixXcd::Identity(k, k);
    R.col(j) = lhs.triangularView<Eigen::Upper>().solve(rhs);
  }
  return R;
}

AsymptoticDecomposition::DecayFit fit_decay(const OperatorSpec& spec,
                                            const SparseVector& x0,
                                            BaseNorm base) {
  AsymptoticDecomposition::DecayFit fit;
  const int n_max = 200;
  const std::vector<int> checkpoints = {0, 1, 2, 5, 10, 20, 50, 100, 150, 200};
  std::vector<double> norms(n_max + 1);
  SparseVector y = x0;
  norms[0] = y.norm(base);
  for (int n = 1; n <= n_max; ++n) {
    y = apply(spec, y);
    norms[static_cast<std::size_t>(n)] = y.norm(base);
  }
  for (int n : checkpoints) {
    fit.tail.emplace_back(n, norms[static_cast<std::size_t>(n)]);
  }
  // least squares on log ||T^n x0|| over the decaying stretch
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int n = 5; n <= n_max; ++n) {
    const double v = norms[static_cast<std::size_t>(n)];
    if (v <= 0.0) continue;
    const double lx = static_cast<double>(n), ly = std::log(v);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  if (count >= 2) {
    const double denom = count * sxx - sx * sx;
    const double slope = denom != 0.0 ? (count * sxy - sx * sy) / denom : 0.0;
    fit.q = std::min(std::exp(slope), 1.0);
  } else {
    fit.q = 0.0;  // orbit hit exact zero almost immediately (nilpotent part)
  }
  // lift C so the bound holds on every sampled point
  double c = norms[0];
  if (fit.q > 0.0) {
    for (int n = 0; n <= n_max; ++n) {
      const double qn = std::pow(fit.q, n);
      if (qn > 0.0)
        c = std::max(c, norms[static_cast<std::size_t>(n)] / qn);
    }
  }
  fit.C = c;
  return fit;
}

}  // namespace

AsymptoticDecomposition decompose_asymptotic(const OperatorSpec& spec,
                                             double tol) {
  require(is_finite_dimensional(spec), Err::NotFiniteDimensional,
          "asymptotic decomposition is computed for finite-dimensional "
          "operators; shift models are out of scope");
  const PowerBoundCertificate cert = power_bounded_check(spec);
  if (!cert.bounded) {
    std::string what = "operator is not power bounded";
    if (cert.witness) {
      what += cert.witness->jordan_chain
                  ? " (nontrivial Jordan chain at a unimodular eigenvalue)"
                  : " (eigenvalue of modulus > 1)";
    }
    fail(Err::NotPowerBounded, what);
  }

  const Eigen::MatrixXcd m = to_dense(spec);
  const int d = static_cast<int>(m.rows());

  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(m);
  require(schur.info() == Eigen::Success, Err::InvariantViolation,
          "Schur factorization failed");
  Eigen::MatrixXcd U = schur.matrixT();
  Eigen::MatrixXcd Q = schur.matrixU();

  // classify once, then permute flags together with the entries
  std::vector<bool> peripheral(static_cast<std::size_t>(d));
  AsymptoticDecomposition out;
  out.field = spec.field;
  out.peripheral_tol = tol;
  for (int i = 0; i < d; ++i) {
    const double mod = std::abs(U(i, i));
    peripheral[static_cast<std::size_t>(i)] = mod >= 1.0 - tol;
    if (mod > 1.0 - tol && mod < 1.0) {
      out.gap_warning = true;
      out.gap_eigenvalues.push_back(U(i, i));
    }
  }

  for (int pass = 0; pass < d; ++pass) {
    bool swapped = false;
    for (int k = 0; k + 1 < d; ++k) {
      if (!peripheral[static_cast<std::size_t>(k)] &&
          peripheral[static_cast<std::size_t>(k + 1)]) {
        schur_swap_adjacent(U, Q, k);
        std::swap(peripheral[static_cast<std::size_t>(k)],
                  peripheral[static_cast<std::size_t>(k + 1)]);
        swapped = true;
      }
    }
    if (!swapped) break;
  }

  int dim_l = 0;
  for (bool p : peripheral) dim_l += p ? 1 : 0;
  out.dim_L = dim_l;
  for (int i = 0; i < dim_l; ++i) out.peripheral_eigenvalues.push_back(U(i, i));

  Eigen::MatrixXcd proj_schur = Eigen::MatrixXcd::Zero(d, d);
  if (dim_l > 0) {
    proj_schur.topLeftCorner(dim_l, dim_l) =
        Eigen::MatrixXcd::Identity(dim_l, dim_l);
    if (dim_l < d) {
      const Eigen::MatrixXcd R = solve_triangular_sylvester(
          U.topLeftCorner(dim_l, dim_l),
          U.bottomRightCorner(d - dim_l, d - dim_l),
          U.topRightCorner(dim_l, d - dim_l));
      proj_schur.topRightCorner(dim_l, d - dim_l) = R;
    }
  }
  Eigen::MatrixXcd a = Q * proj_schur * Q.adjoint();
  if (spec.field == ScalarField::Real) {
    // spectrum symmetric under conjugation, so the projector is real
    a = a.real().cast<Complex>();
  }
  out.projector = a;
  out.projector_norm = spectral_norm(a);
  out.idempotency_defect = spectral_norm(a * a - a);
  out.commutation_defect = spectral_norm(m * a - a * m);
  const double defect_scale =
      (1.0 + out.projector_norm) * (1.0 + spectral_norm(m));
  require(out.idempotency_defect <= 1e-9 * defect_scale,
          Err::InvariantViolation, "projector failed the idempotency check");
  require(out.commutation_defect <= 1e-9 * defect_scale,
          Err::InvariantViolation, "projector does not commute with T");

  // orthonormal bases: range(A) from the singular directions with sigma >= 1
  // (nonzero singular values of an idempotent are >= 1), ker(A) from the
  // right singular directions at sigma = 0; the 0.5 threshold splits them
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 0.5) ++rank;
  require(rank == dim_l, Err::InvariantViolation,
          "projector rank disagrees with the peripheral eigenvalue count");
  auto col_to_sparse = [&](const Eigen::VectorXcd& col) {
    SparseVector v(spec.field);
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      Complex c = col(i);
      if (spec.field == ScalarField::Real) c = Complex(c.real(), 0.0);
      if (c != Complex(0.0, 0.0)) v.set(static_cast<std::int64_t>(i), c);
    }
    return v;
  };
  for (int i = 0; i < dim_l; ++i)
    out.L_basis.push_back(col_to_sparse(svd.matrixU().col(i)));
  for (int i = dim_l; i < d; ++i)
    out.X0_basis.push_back(col_to_sparse(svd.matrixV().col(i)));

  for (const auto& x0 : out.X0_basis)
    out.decay.push_back(fit_decay(spec, x0, spec.norm.base));

  // tie the construction back to the dynamical definition: each basis
  // vector of L must be returning under the rescaled norm
  out.returning_tol = 0.2;
  out.returning_horizon = 50000;
  bool verified = true;
  if (dim_l > 0) {
    const NormTag rtag = make_rescaled_tag(cert, spec.norm.base, 256);
    for (const auto& b : out.L_basis) {
      const auto r =
          is_returning(spec, b, out.returning_tol, out.returning_horizon,
                       &rtag, /*max_witnesses=*/3);
      if (!std::holds_alternative<ReturningCertificate>(r)) {
        verified = false;
        break;
      }
    }
  }
  out.returning_verified = verified;
  return out;
}

ProjectionReport asymptotic_project(const AsymptoticDecomposition& D,
                                    const OperatorSpec& spec,
                                    const SparseVector& x, int horizon) {
  const auto dim = dimension(spec);
  require(dim.has_value(), Err::NotFiniteDimensional,
          "projection needs a finite-dimensional operator");
  const int d = *dim;
  require(D.projector.rows() == d, Err::DimensionMismatch,
          "decomposition and operator dimensions disagree");
  require(x.field() == spec.field, Err::FieldMismatch,
          "vector field does not match operator field");
  for (const auto& [i, c] : x.support()) {
    require(i >= 0 && i < d, Err::DimensionMismatch,
            "vector support outside the operator's coordinate range");
  }

  Eigen::VectorXcd xd = Eigen::VectorXcd::Zero(d);
  for (const auto& [i, c] : x.support()) xd(static_cast<Eigen::Index>(i)) = c;
  Eigen::VectorXcd ad = D.projector * xd;

  ProjectionReport rep;
  {
    SparseVector a(spec.field);
    for (Eigen::Index i = 0; i < d; ++i) {
      Complex c = ad(i);
      if (spec.field == ScalarField::Real) c = Complex(c.real(), 0.0);
      if (c != Complex(0.0, 0.0)) a.set(static_cast<std::int64_t>(i), c);
    }
    rep.projection = a;
  }

  const BaseNorm base = spec.norm.base;
  auto sampled_rho = [&](const SparseVector& candidate) {
    // liminf surrogate: min over the tail window of ||T^n (x - candidate)||
    SparseVector diff = x - candidate;
    double best = std::numeric_limits<double>::infinity();
    for (int n = 0; n <= horizon; ++n) {
      if (n > 0) diff = apply(spec, diff);
      if (n >= horizon / 2) best = std::min(best, diff.norm(base));
    }
    return best;
  };

  {
    SparseVector diff = x - rep.projection;
    rep.tail_residual = apply_power(spec, diff, horizon).norm(base);
  }
  rep.rho_at_projection = sampled_rho(rep.projection);
  rep.perturbation = 1e-3;
  bool optimal = true;
  for (const auto& b : D.L_basis) {
    for (double sign : {+1.0, -1.0}) {
      const SparseVector cand =
          rep.projection + b.scaled(Complex(sign * rep.perturbation, 0.0));
      if (sampled_rho(cand) + 1e-12 < rep.rho_at_projection) {
        optimal = false;
        break;
      }
    }
    if (!optimal) break;
  }
  rep.locally_optimal = optimal;
  return rep;
}

RealQuadraticWitness real_quadratic_witness(const OperatorSpec& spec) {
  require(spec.field == ScalarField::Real, Err::InvariantViolation,
          "quadratic witness is defined for real operators");
  require(is_finite_dimensional(spec), Err::NotFiniteDimensional,
          "quadratic witness needs a finite-dimensional operator");

  const OperatorSpec complexified = complexify(spec);
  const Eigen::MatrixXcd mc = to_dense(complexified);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(mc, false);
  const auto& ev = es.eigenvalues();
  require(ev.size() >= 1, Err::InvariantViolation, "empty spectrum");

  // largest modulus; ties to the largest imaginary part, then lowest index
  const double scale = std::max(1.0, mc.cwiseAbs().maxCoeff());
  Eigen::Index pick = 0;
  for (Eigen::Index i = 1; i < ev.size(); ++i) {
    const double di = std::abs(ev(i)), dp = std::abs(ev(pick));
    if (di > dp + 1e-12 * scale) {
      pick = i;
    } else if (std::abs(di - dp) <= 1e-12 * scale &&
               ev(i).imag() > ev(pick).imag() + 1e-12 * scale) {
      pick = i;
    }
  }
  const Complex lambda = ev(pick);

  RealQuadraticWitness w;
  w.source_eigenvalue = lambda;
  w.r = -2.0 * lambda.real();
  w.s = std::norm(lambda);

  const Eigen::MatrixXd t = to_dense(spec).real();
  const int d = static_cast<int>(t.rows());
  const Eigen::MatrixXd s_mat =
      t * t + w.r * t + w.s * Eigen::MatrixXd::Identity(d, d);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(s_mat);
  w.singularity = svd.singularValues()(d - 1);
  return w;
}

}  // namespace opdyn
