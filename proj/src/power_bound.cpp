#include "opdyn/power_bound.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace opdyn {

namespace {

int rank_at_threshold(const Eigen::MatrixXcd& m, double threshold) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > threshold) ++r;
  }
  return r;
}

// sup_n ||S^n|| for a weighted shift: the largest product of |w| over a
// contiguous window. When the per-period product is <= 1, windows up to two
// periods realize the sup; otherwise the powers grow without bound.
struct ShiftGrowth {
  bool bounded = false;
  double sup = 1.0;
  double period_product = 1.0;
};

ShiftGrowth shift_growth(const WeightedShiftOp& sh) {
  const int p = static_cast<int>(sh.weights.size());
  std::vector<double> absw(p);
  double q = 1.0;
  for (int i = 0; i < p; ++i) {
    absw[i] = std::abs(sh.weights[i]);
    q *= absw[i];
  }
  ShiftGrowth g;
  g.period_product = q;
  if (q > 1.0 + 1e-15) {
    g.bounded = false;
    double sup = 1.0;
    for (int len = 1; len <= 2 * p; ++len) {
      for (int phase = 0; phase < p; ++phase) {
        double prod = 1.0;
        for (int j = 0; j < len; ++j) prod *= absw[(phase + j) % p];
        sup = std::max(sup, prod);
      }
    }
    g.sup = sup;  // horizon estimate only; true sup is infinite
    return g;
  }
  double sup = 1.0;
  for (int len = 1; len <= 2 * p; ++len) {
    for (int phase = 0; phase < p; ++phase) {
      double prod = 1.0;
      for (int j = 0; j < len; ++j) prod *= absw[(phase + j) % p];
      sup = std::max(sup, prod);
    }
  }
  g.bounded = true;
  g.sup = sup;
  return g;
}

}  // namespace

PowerBoundCertificate power_bounded_check(const OperatorSpec& spec,
                                          int horizon) {
  PowerBoundCertificate cert;

  if (const auto* sh = std::get_if<WeightedShiftOp>(&spec.op)) {
    ShiftGrowth g = shift_growth(*sh);
    cert.bounded = g.bounded;
    cert.sup_norm_estimate = std::max(1.0, g.sup);
    cert.spectral_radius =
        std::pow(g.period_product, 1.0 / static_cast<double>(sh->weights.size()));
    if (!g.bounded) {
      cert.witness = PowerBoundCertificate::Witness{
          Complex(cert.spectral_radius, 0.0), false};
    }
    return cert;
  }

  if (const auto* sum = std::get_if<DirectSumOp>(&spec.op)) {
    cert.bounded = true;
    cert.sup_norm_estimate = 1.0;
    cert.spectral_radius = 0.0;
    for (const auto& s : sum->summands) {
      PowerBoundCertificate part = power_bounded_check(s, horizon);
      cert.sup_norm_estimate =
          std::max(cert.sup_norm_estimate, part.sup_norm_estimate);
      cert.spectral_radius =
          std::max(cert.spectral_radius, part.spectral_radius);
      if (!part.bounded) {
        cert.bounded = false;
        if (!cert.witness) cert.witness = part.witness;
      }
    }
    return cert;
  }

  // finite-dimensional: exact spectral criterion, horizon sup as cross-check
  const Eigen::MatrixXcd m = to_dense(spec);
  const int d = static_cast<int>(m.rows());
  const double scale = m.cwiseAbs().maxCoeff();

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  const auto& ev = es.eigenvalues();

  double rho = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    rho = std::max(rho, std::abs(ev(i)));
  cert.spectral_radius = rho;

  bool bounded = rho <= 1.0 + kSpectralTol;
  std::optional<PowerBoundCertificate::Witness> witness;
  if (!bounded) {
    Eigen::Index worst = 0;
    for (Eigen::Index i = 1; i < ev.size(); ++i)
      if (std::abs(ev(i)) > std::abs(ev(worst))) worst = i;
    witness = PowerBoundCertificate::Witness{ev(worst), false};
  } else {
    // unimodular eigenvalues must be semisimple: geometric multiplicity
    // (kernel rank of T - lambda) equals algebraic multiplicity (cluster size)
    std::vector<bool> visited(static_cast<std::size_t>(ev.size()), false);
    const double cluster_tol = 1e-8 * std::max(1.0, scale);
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (visited[static_cast<std::size_t>(i)]) continue;
      if (std::abs(ev(i)) < 1.0 - kSpectralTol) continue;
      int algebraic = 0;
      for (Eigen::Index j = 0; j < ev.size(); ++j) {
        if (std::abs(ev(j) - ev(i)) <= cluster_tol) {
          algebraic++;
          visited[static_cast<std::size_t>(j)] = true;
        }
      }
      Eigen::MatrixXcd shifted =
          m - ev(i) * Eigen::MatrixXcd::Identity(d, d);
      const int r = rank_at_threshold(shifted, 1e-9 * std::max(1.0, scale));
      const int geometric = d - r;
      if (geometric < algebraic) {
        bounded = false;
        witness = PowerBoundCertificate::Witness{ev(i), true};
        break;
      }
    }
  }

  cert.bounded = bounded;
  cert.witness = witness;

  double sup = 1.0;
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(d, d);
  for (int n = 1; n <= horizon; ++n) {
    p = (m * p).eval();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(p);
    const double nn = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    sup = std::max(sup, nn);
    if (!std::isfinite(nn) || nn > 1e12) break;  // clearly unbounded growth
  }
  cert.sup_norm_estimate = sup;
  return cert;
}

NormTag make_rescaled_tag(const PowerBoundCertificate& cert, BaseNorm base,
                          int horizon) {
  require(cert.bounded, Err::NotPowerBounded,
          "rescaled norm requires a power-bounded operator");
  require(horizon >= 1, Err::InvariantViolation,
          "rescale horizon must be positive");
  NormTag t;
  t.base = base;
  t.rescaled = true;
  t.horizon = horizon;
  return t;
}

std::vector<double> orbit_base_norms(const OperatorSpec& spec,
                                     const SparseVector& x, int horizon,
                                     BaseNorm base) {
  std::vector<double> norms;
  norms.reserve(static_cast<std::size_t>(horizon) + 1);
  SparseVector y = x;
  norms.push_back(y.norm(base));
  for (int n = 1; n <= horizon; ++n) {
    y = apply(spec, y);
    norms.push_back(y.norm(base));
  }
  return norms;
}

std::vector<double> suffix_maxima(const std::vector<double>& s) {
  std::vector<double> out(s.size());
  double acc = 0.0;
  for (std::size_t i = s.size(); i-- > 0;) {
    acc = std::max(acc, s[i]);
    out[i] = acc;
  }
  return out;
}

RescaledNormResult rescaled_norm(const OperatorSpec& spec,
                                 const SparseVector& x, int horizon,
                                 const PowerBoundCertificate* cert) {
  PowerBoundCertificate local;
  if (!cert) {
    local = power_bounded_check(spec);
    cert = &local;
  }
  require(cert->bounded, Err::NotPowerBounded,
          "rescaled norm requires a power-bounded operator");

  const BaseNorm base = spec.norm.base;
  RescaledNormResult r;
  r.horizon = horizon;
  SparseVector y = x;
  double value = y.norm(base);
  double minv = value;
  std::int64_t argmax = 0;
  for (int n = 1; n <= horizon; ++n) {
    y = apply(spec, y);
    const double nn = y.norm(base);
    if (nn > value) {
      value = nn;
      argmax = n;
    }
    minv = std::min(minv, nn);
  }
  r.value = value;
  r.argmax = argmax;
  r.tail_bound = cert->sup_norm_estimate * minv;
  return r;
}

double norm_of(const SparseVector& x, const NormTag& tag,
               const OperatorSpec* spec) {
  if (!tag.rescaled) return x.norm(tag.base);
  require(spec != nullptr, Err::InvariantViolation,
          "rescaled norm evaluation needs the operator");
  return rescaled_norm(*spec, x, tag.horizon).value;
}

}  // namespace opdyn
