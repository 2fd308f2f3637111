#pragma once

#include <complex>

#include "wigner/linalg.hpp"
#include "wigner/test_function.hpp"

namespace wigner {

/// Density of the standard semicircle law: (1/2pi) sqrt(4 - x^2) on [-2, 2].
double semicircle_density(double x);

/// k-th moment of the semicircle law: 0 for odd k, Catalan(k/2) for even k,
/// computed exactly in integer arithmetic. Requires k <= 30.
double semicircle_moment(int k);

/// Int f dF through the identity Int f dF = psi_0(f) - psi_2(f)
/// (substitution x = 2 cos t).
double integral_f(const TestFunction& f);

/// Direct adaptive quadrature of f times the density on [-2, 2]
/// (tanh-sinh rule, which absorbs the square-root endpoints). Independent
/// cross-check of the psi route.
double integral_f_quadrature(const TestFunction& f, double tol = 1e-11);

/// Distance from z to the support [-2, 2] on the real axis.
double distance_to_support(cxd z);

/// Stieltjes transform of the semicircle law at z, with its derivative.
struct StieltjesValue {
  cxd z;
  cxd m;        // root of m^2 + z m + 1 = 0 vanishing at infinity
  cxd m_prime;  // m^2 / (1 - m^2)
};

/// m(z) = (-z + sqrt(z - 2) sqrt(z + 2)) / 2 with principal square roots;
/// this branch is continuous off [-2, 2], obeys m(z) -> 0 as |z| -> infinity
/// and Im m(z) > 0 for Im z > 0. Throws DomainError when z is within 1e-12
/// of the support.
StieltjesValue stieltjes_m(cxd z);

}  // namespace wigner
