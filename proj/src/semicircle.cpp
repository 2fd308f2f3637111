#include "wigner/semicircle.hpp"

#include <cmath>
#include <cstdint>

#include "wigner/chebyshev.hpp"
#include "wigner/errors.hpp"

namespace wigner {

double semicircle_density(double x) {
  if (std::fabs(x) >= 2.0) return 0.0;
  return std::sqrt(4.0 - x * x) / (2.0 * M_PI);
}

double semicircle_moment(int k) {
  if (k < 0 || k > 30) throw DomainError("semicircle_moment: need 0 <= k <= 30");
  if (k % 2 != 0) return 0.0;
  const std::uint64_t m = static_cast<std::uint64_t>(k) / 2;
  // Catalan(m) = binom(2m, m) / (m + 1), exact in 64-bit for m <= 15.
  std::uint64_t binom = 1;
  for (std::uint64_t i = 1; i <= m; ++i) binom = binom * (m + i) / i;
  return static_cast<double>(binom / (m + 1));
}

double integral_f(const TestFunction& f) {
  const PsiCoefficients c = compute_psi(f);
  return c.get(0) - c.get(2);
}

double integral_f_quadrature(const TestFunction& f, double tol) {
  // tanh-sinh on [-2, 2]: x = 2 tanh((pi/2) sinh(t)).
  const auto integrand = [&](double x) { return f(x) * semicircle_density(x); };
  const double t_max = 4.0;  // weights below ~1e-300 beyond this
  double prev = 0.0;
  double value = 0.0;
  for (int level = 2; level <= 12; ++level) {
    const double h = t_max / std::ldexp(1.0, level);
    const std::int64_t steps = static_cast<std::int64_t>(t_max / h);
    double sum = 0.0;
    for (std::int64_t k = -steps; k <= steps; ++k) {
      const double t = static_cast<double>(k) * h;
      const double u = 0.5 * M_PI * std::sinh(t);
      const double x = 2.0 * std::tanh(u);
      const double ch = std::cosh(u);
      const double weight = M_PI * std::cosh(t) / (ch * ch);
      sum += integrand(x) * weight;
    }
    prev = value;
    value = sum * h;
    if (level > 4 && std::fabs(value - prev) <= tol * std::max(1.0, std::fabs(value)))
      break;
  }
  return value;
}

double distance_to_support(cxd z) {
  if (std::fabs(z.real()) <= 2.0) return std::fabs(z.imag());
  return std::min(std::abs(z - cxd{2.0, 0.0}), std::abs(z + cxd{2.0, 0.0}));
}

StieltjesValue stieltjes_m(cxd z) {
  if (distance_to_support(z) < 1e-12)
    throw DomainError("stieltjes_m: z within 1e-12 of [-2, 2]");
  // Product of principal roots, not the principal root of z^2 - 4: this is
  // the branch that stays continuous off the cut on both real half-lines.
  const cxd root = std::sqrt(z - 2.0) * std::sqrt(z + 2.0);
  const cxd m = 0.5 * (root - z);
  const cxd m2 = m * m;
  return {z, m, m2 / (1.0 - m2)};
}

}  // namespace wigner
