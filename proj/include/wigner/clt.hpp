#pragma once

#include <string>
#include <vector>

#include "wigner/semicircle.hpp"
#include "wigner/test_function.hpp"

namespace wigner {

/// Ensemble parameters entering the limit laws: Dyson index, diagonal
/// second moment sigma^2, and fourth norm moment M of off-diagonal entries.
struct ModelParams {
  int beta;
  double sigma2;
  double m4;

  ModelParams(int beta_, double sigma2_, double m4_);

  double two_over_beta() const { return 2.0 / beta; }
};

/// Limiting mean of G(f) in the general-beta display:
///   (2/b - 1) ({f(2)+f(-2)}/4 - psi_0/2) + (s^2 - 2/b) psi_2
///   + (M - 1 - 2/b) psi_4.
double mean_general_form(const TestFunction& f, const ModelParams& p, int lmax = 64);

/// The quaternion-specialized display (beta = 4 only):
///   -{f(2)+f(-2)}/8 + psi_0/4 + (s^2 - 1/2) psi_2 + (M - 3/2) psi_4.
double mean_quaternion_form(const TestFunction& f, const ModelParams& p, int lmax = 64);

/// Limiting mean. Evaluates the general display; at beta = 4 also evaluates
/// the quaternion display and checks the two agree to 1e-12.
double mean_g(const TestFunction& f, const ModelParams& p, int lmax = 64);

double cov_series_general_form(const TestFunction& f, const TestFunction& g,
                               const ModelParams& p, int lmax = 64);
double cov_series_quaternion_form(const TestFunction& f, const TestFunction& g,
                                  const ModelParams& p, int lmax = 64);

/// Limiting covariance as the printed series
///   s^2 psi_1(f) psi_1(g) + 2 (M - 2/b) psi_2(f) psi_2(g)
///   + (2/b) sum_{l>=3} l psi_l(f) psi_l(g),
/// truncated at lmax. At beta = 4 the quaternion display is evaluated too
/// and checked against the general one to 1e-12.
double cov_series(const TestFunction& f, const TestFunction& g,
                  const ModelParams& p, int lmax = 64);

/// Covariance kernel
///   V(t,s) = (s^2 - 2/b + (M - 1 - 2/b) ts/2) sqrt((4-t^2)(4-s^2))
///          + (2/b) log((4 - ts + R) / (4 - ts - R)),  R = sqrt((4-t^2)(4-s^2)).
/// Requires |t|, |s| <= 2; throws SingularPoint within 1e-12 of t = s.
double kernel_v(double t, double s, const ModelParams& p);

struct QuadratureResult {
  double value;
  double error_estimate;
};

/// (1/4pi^2) IntInt f'(t) g'(s) V(t,s) dt ds under t = 2 cos a, s = 2 cos b
/// (the substitution regularizes the edge square roots). Tensor-product
/// Gauss-Legendre with interlaced orders per axis so no node pair lands on
/// the logarithmic diagonal; the error estimate is the difference between
/// the requested order and twice that order. Throws QuadratureNotConverged
/// when the two orders differ by more than 1e-6.
QuadratureResult cov_kernel_quadrature(const TestFunction& f, const TestFunction& g,
                                       const ModelParams& p, int order = 200);

/// z-domain limiting mean (beta = 4):
///   EM(z) = (1 + m'(z)) m^3(z) (s^2 - 1 - m'(z)/2 + (M - 3/2) m^2(z)).
cxd mean_m_z(cxd z, const ModelParams& p);

/// z-domain limiting covariance (beta = 4):
///   m'(z1) m'(z2) (s^2 - 1/2 + (2M - 3) m(z1) m(z2)
///                  + 1 / (2 (1 - m(z1) m(z2))^2)).
cxd cov_m_z(cxd z1, cxd z2, const ModelParams& p);

/// Cauchy bridge from the z-domain mean back to the f-domain (beta = 4):
///   -(1 / 2 pi i) Contour f(z) EM(z) dz
/// over the rectangle with vertices (+-a, +-v0), Gauss-Legendre with 256
/// nodes per edge. Requires a - 2 >= 0.1 (ContourTooClose otherwise) and
/// 0 < v0 <= 1. The imaginary residue must stay below 1e-9; it is discarded.
double contour_mean(const TestFunction& f, const ModelParams& p, double a, double v0);

/// Exact n -> infinity limits of Var G(x), Var G(x^2), Cov(G(x), G(x^2)),
/// derived from first principles by expanding the traces of W and W^2 in
/// entry moments: {sigma^2, 2(M - 1), 0} for every beta.
struct QuadraticCovOracle {
  double var_x;
  double var_x2;
  double cov_x_x2;
};
QuadraticCovOracle oracle_cov_quadratic(const ModelParams& p);

/// Tabulates, for f = g = x^2, the printed-series variance 2(M - 2/b)
/// against the moment-expansion value 2(M - 1), and flags any disagreement
/// beyond 1e-12. The disagreement is reported, never silently corrected.
struct ErrataReport {
  int beta;
  double m4;
  double printed_value;
  double oracle_value;
  double difference;
  bool flag;
};
ErrataReport errata_report(const ModelParams& p);

/// Bundled means and covariance matrix for a list of functions.
struct Prediction {
  std::vector<std::string> labels;
  std::vector<double> means;
  std::vector<std::vector<double>> covariance;
  std::string form;  // "series" or "kernel"
};
Prediction predict(const std::vector<TestFunction>& fs, const ModelParams& p,
                   const std::string& form = "series", int lmax = 64);

}  // namespace wigner
