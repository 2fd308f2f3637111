#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wigner/eig.hpp"
#include "wigner/quaternion.hpp"
#include "wigner/rng.hpp"

namespace wigner {

enum class DistKind { Gaussian, DiscretePhase, Rademacher, TwoPointRadial };

/// Off-diagonal entry law, normalized to mean zero and unit second norm
/// moment. The fourth norm moment distinguishes the families:
///   gaussian        M = 3 / 2 / 3/2 for beta = 1 / 2 / 4
///   discrete-phase  quaternion coordinates uniform on {+-1/2}; |x| = 1, M = 1
///   rademacher      +-1 signs (beta = 1); M = 1
///   radial:M=v      x = r u with u a uniform direction and r two-point,
///                   E r^2 = 1, E r^4 = v
struct EntryDistribution {
  DistKind kind = DistKind::Gaussian;
  double m_target = 1.0;

  static EntryDistribution gaussian();
  static EntryDistribution discrete_phase();
  static EntryDistribution rademacher();
  static EntryDistribution two_point_radial(double m_target);
  static EntryDistribution parse(std::string_view spec);

  std::string label() const;
  double fourth_moment(int beta) const;
  bool bounded_support() const;
  void validate_for(int beta) const;
};

/// Everything needed to draw one Wigner matrix reproducibly.
struct EnsembleSpec {
  int beta = 2;
  std::size_t n = 1;
  double sigma2 = 1.0;
  EntryDistribution offdiag;
  std::uint64_t seed = 0;

  void validate() const;
};

/// beta = 4 sample: diagonal sigma-scaled reals, independent quaternion
/// upper entries, the whole matrix scaled by n^{-1/2}. Entries come from a
/// counter-based stream keyed on (seed, j, k), so identical (spec, seed)
/// give identical matrices under any generation order or thread count.
SelfDualMatrix sample_selfdual(const EnsembleSpec& spec);

/// beta = 1 (real symmetric) or beta = 2 (complex Hermitian) sample with the
/// same normalization and determinism contract.
ComplexHermitian sample_hermitian(const EnsembleSpec& spec);

/// The n eigenvalues of one sample (quaternion eigenvalues when beta = 4).
std::vector<double> sample_spectrum(const EnsembleSpec& spec);

struct MomentEstimate {
  double value = 0.0;
  double se = 0.0;
};

/// Empirical check of the moment conditions backing the limit theorems.
struct MomentReport {
  int beta = 0;
  std::size_t draws = 0;
  std::array<MomentEstimate, 4> mean_components;
  MomentEstimate norm2;
  MomentEstimate norm4;
  // magnitudes of E alpha^2, E beta^2, E|alpha|^2, E|beta|^2, E(alpha beta),
  // E(alpha conj(beta)) for the two complex coordinates of the quaternion
  MomentEstimate alpha_sq, beta_sq, alpha_abs2, beta_abs2, alpha_beta,
      alpha_beta_conj;
  struct Lindeberg {
    double n;
    double eta;
    double value;
  };
  std::vector<Lindeberg> lindeberg;
};

MomentReport validate_moments(const EntryDistribution& dist, int beta,
                              std::size_t draws, std::uint64_t seed);

/// Covariance identity for quadratic forms in a quaternion vector with
/// independent entries: for Type-I A and B,
///   E(tr X*AX - tr A)(tr X*BX - tr B)
///     = (M4 - 3/2) sum_j tr a_jj tr b_jj + tr AB.
/// Inputs must pass is_type_i; StructureError otherwise.
double qf_cov_formula(const ComplexHermitian& a, const ComplexHermitian& b,
                      double m4);

struct MonteCarloEstimate {
  double value = 0.0;
  double se = 0.0;
};

/// Monte Carlo estimate of the same covariance over `reps` draws of X.
MonteCarloEstimate qf_cov_empirical(const ComplexHermitian& a,
                                    const ComplexHermitian& b,
                                    const EntryDistribution& dist,
                                    std::size_t reps, std::uint64_t seed);

/// Exact expectation by enumerating all 16^n outcomes of the discrete-phase
/// vector; n <= 2.
double qf_cov_enumerate(const ComplexHermitian& a, const ComplexHermitian& b);

}  // namespace wigner
