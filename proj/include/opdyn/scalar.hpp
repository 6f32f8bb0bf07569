#pragma once

#include <complex>

namespace opdyn {

using Complex = std::complex<double>;

// Scalar field tag. Coefficients are stored as complex doubles throughout;
// a Real tag constrains every stored imaginary part to be exactly zero.
enum class ScalarField { Real, Complex };

inline const char* field_name(ScalarField f) {
  return f == ScalarField::Real ? "real" : "complex";
}

inline bool is_real_value(const Complex& z) { return z.imag() == 0.0; }

}  // namespace opdyn
