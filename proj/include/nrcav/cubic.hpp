#pragma once

#include <array>
#include <vector>

namespace nrcav {

/// Real roots of c3 x^3 + c2 x^2 + c1 x + c0, ascending, with multiplicity.
///
/// Roots are eigenvalues of the companion matrix of the monic polynomial
/// after rescaling x so every scaled root is O(1). An eigenvalue counts as
/// real when its scaled imaginary part is below imag_tol; accepted roots are
/// polished by Newton on the unscaled polynomial. A vanishing leading
/// coefficient lowers the degree.
std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0,
                                     double imag_tol = 1e-10);

/// Horner evaluation of c[0] x^3 + c[1] x^2 + c[2] x + c[3].
double eval_cubic(const std::array<double, 4>& c, double x);

}  // namespace nrcav
