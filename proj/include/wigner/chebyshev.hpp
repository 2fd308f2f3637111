#pragma once

#include <cstddef>
#include <vector>

#include "wigner/test_function.hpp"

namespace wigner {

/// T_l(s) by the three-term recurrence; T_l(cos t) = cos(l t).
double chebyshev_t(int l, double s);

/// Chebyshev coefficients psi_0 .. psi_L of a test function, with a decay
/// diagnostic: tail_estimate is max |psi_l| over the last quarter of indices.
struct PsiCoefficients {
  std::vector<double> values;
  std::size_t truncation = 0;
  double tail_estimate = 0.0;

  double get(std::size_t l) const {
    return l < values.size() ? values[l] : 0.0;
  }
};

/// Coefficients through the angular form
///   psi_l(f) = (1/2pi) Int_{-pi}^{pi} f(2 cos t) e^{i l t} dt
/// by the composite trapezoid rule on N = max(4096, 8L) equispaced nodes
/// (spectrally accurate for periodic analytic integrands). The imaginary
/// part of the quadrature must vanish for f real on [-2, 2]; it is checked
/// against 1e-10 and discarded. Throws TailNotDecayed when the coefficient
/// tail exceeds 1e-8 (L too small for this f).
PsiCoefficients psi(const TestFunction& f, int lmax);

/// Same coefficients through the algebraic form
///   psi_l(f) = (1/pi) Int_{-1}^{1} f(2s) T_l(s) / sqrt(1 - s^2) ds
/// by Chebyshev-Gauss quadrature. Second, independent route used to
/// cross-check the angular form.
PsiCoefficients psi_chebgauss(const TestFunction& f, int lmax);

/// Exact conversion for polynomials (degree <= 64): expand f(2s) in the
/// T_j basis, then psi_0 = a_0 and psi_l = a_l / 2 for l >= 1.
PsiCoefficients psi_exact_poly(const TestFunction& f);

/// Dispatch: exact conversion for polynomials, angular quadrature otherwise.
PsiCoefficients compute_psi(const TestFunction& f, int lmax = 64);

}  // namespace wigner
