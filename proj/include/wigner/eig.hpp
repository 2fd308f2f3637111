#pragma once

#include <cstddef>
#include <vector>

#include "wigner/quaternion.hpp"

namespace wigner {

/// Real symmetric tridiagonal form. Off-diagonal entries are nonnegative;
/// the phases of the complex reduction are absorbed into the similarity.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;  // length diag.size() - 1
};

/// Sorted eigenvalues together with a bound on the trace drift introduced
/// by the solver: sum(values) equals the input trace within residual_bound.
struct Spectrum {
  std::vector<double> values;  // ascending
  double residual_bound = 0.0;
};

/// Householder reduction of a complex Hermitian matrix to real symmetric
/// tridiagonal form, eigenvalues-only variant (no transform accumulation).
Tridiagonal tridiagonalize(const ComplexHermitian& m);

/// Implicit-shift QL with Wilkinson shifts. Deflation when
/// offdiag[j] <= eps_mach * (|diag[j]| + |diag[j+1]|). Throws NonConvergence
/// after 50 sweeps on a single eigenvalue.
Spectrum eigenvalues_ql(Tridiagonal t);

/// Convenience composition of the two reduction steps.
Spectrum eigenvalues(const ComplexHermitian& m);

struct QuaternionSpectrum {
  std::vector<double> values;  // n representatives, ascending
  double pairing_gap = 0.0;    // max split observed across Kramers pairs
};

/// Eigenvalues of the 2n x 2n embedding arrive in coincident pairs (Kramers
/// degeneracy); returns one representative per pair. Throws PairingViolation
/// when a pair splits by more than 1e-9 * max(1, ||A||_F) -- that indicates a
/// solver accuracy failure, never a property of the input.
QuaternionSpectrum quaternion_eigenvalues(const SelfDualMatrix& m);

}  // namespace wigner
