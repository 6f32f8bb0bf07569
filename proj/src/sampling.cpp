#include "opdyn/sampling.hpp"

#include <cmath>

namespace opdyn {

std::uint64_t DeterministicRng::next_u64() {
  // splitmix64
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double DeterministicRng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double DeterministicRng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

double DeterministicRng::normal() {
  // Box-Muller; guard against log(0)
  double u1 = uniform01();
  if (u1 < 1e-300) u1 = 1e-300;
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Complex DeterministicRng::normal_complex() {
  return Complex(normal(), normal());
}

SparseVector random_unit_vector(DeterministicRng& rng, std::int64_t lo,
                                std::int64_t hi, ScalarField field,
                                BaseNorm base) {
  SparseVector v(field);
  for (std::int64_t i = lo; i <= hi; ++i) {
    const Complex c = field == ScalarField::Real ? Complex(rng.normal(), 0.0)
                                                 : rng.normal_complex();
    v.set(i, c);
  }
  const double n = v.norm(base);
  if (n == 0.0) return random_unit_vector(rng, lo, hi, field, base);
  return v.scaled(Complex(1.0 / n, 0.0));
}

std::vector<SparseVector> default_unit_samples(const OperatorSpec& spec,
                                               int extra, std::uint64_t seed) {
  DeterministicRng rng(seed);
  std::vector<SparseVector> samples;
  const auto dim = dimension(spec);

  std::int64_t lo = 0, hi = 0;
  if (dim) {
    lo = 0;
    hi = *dim - 1;
  } else {
    bool bilateral = false;
    if (const auto* sh = std::get_if<WeightedShiftOp>(&spec.op)) {
      bilateral = sh->direction == ShiftDirection::Bilateral;
    }
    lo = bilateral ? -16 : 0;
    hi = bilateral ? 16 : 32;
  }

  for (std::int64_t i = lo; i <= hi; ++i) {
    samples.push_back(SparseVector::unit(i, spec.field));
  }
  for (int k = 0; k < extra; ++k) {
    samples.push_back(
        random_unit_vector(rng, lo, hi, spec.field, spec.norm.base));
  }
  return samples;
}

}  // namespace opdyn
