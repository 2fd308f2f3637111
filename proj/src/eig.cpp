#include "wigner/eig.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <complex>

#include "wigner/errors.hpp"

namespace wigner {

namespace {

double pythag(double a, double b) {
  const double absa = std::fabs(a);
  const double absb = std::fabs(b);
  if (absa > absb) {
    const double r = absb / absa;
    return absa * std::sqrt(1.0 + r * r);
  }
  if (absb == 0.0) return 0.0;
  const double r = absa / absb;
  return absb * std::sqrt(1.0 + r * r);
}

}  // namespace

Tridiagonal tridiagonalize(const ComplexHermitian& input) {
  const std::size_t m = input.dim();
  std::vector<cxd> a(input.storage());
  auto at = [&](std::size_t i, std::size_t j) -> cxd& { return a[i * m + j]; };

  std::vector<cxd> offdiag_c(m > 0 ? m - 1 : 0);
  std::vector<cxd> v(m), u(m), w(m);

  for (std::size_t k = 0; k + 2 < m; ++k) {
    const std::size_t len = m - k - 1;  // rows k+1 .. m-1
    double xnorm2 = 0.0;
    for (std::size_t i = 0; i < len; ++i) xnorm2 += std::norm(at(k + 1 + i, k));
    const double xnorm = std::sqrt(xnorm2);
    if (xnorm == 0.0) {
      offdiag_c[k] = 0.0;
      continue;
    }

    // Reflector target alpha = -sign(x0) * |x|, with unimodular complex sign.
    const cxd x0 = at(k + 1, k);
    const cxd phase = (x0 == cxd{}) ? cxd{1.0, 0.0} : x0 / std::abs(x0);
    const cxd alpha = -phase * xnorm;

    double vnorm2 = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      v[i] = at(k + 1 + i, k);
      if (i == 0) v[i] -= alpha;
      vnorm2 += std::norm(v[i]);
    }
    offdiag_c[k] = alpha;
    if (vnorm2 == 0.0) continue;  // column already reduced
    const double beta = 2.0 / vnorm2;

    // u = A_sub * v using the lower triangle only.
    for (std::size_t i = 0; i < len; ++i) u[i] = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t row = k + 1 + i;
      const cxd vi = v[i];
      cxd acc = at(row, row).real() * vi;
      const cxd* arow = &a[row * m + (k + 1)];
      for (std::size_t j = 0; j < i; ++j) {
        acc += arow[j] * v[j];
        u[j] += std::conj(arow[j]) * vi;
      }
      u[i] += acc;
    }

    double gamma = 0.0;  // v^* A v, real for Hermitian A
    for (std::size_t i = 0; i < len; ++i)
      gamma += (std::conj(v[i]) * u[i]).real();
    const double kappa = 0.5 * beta * beta * gamma;
    for (std::size_t i = 0; i < len; ++i) w[i] = beta * u[i] - kappa * v[i];

    // A_sub -= v w^* + w v^*, lower triangle.
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t row = k + 1 + i;
      const cxd vi = v[i];
      const cxd wi = w[i];
      cxd* arow = &a[row * m + (k + 1)];
      for (std::size_t j = 0; j < i; ++j)
        arow[j] -= vi * std::conj(w[j]) + wi * std::conj(v[j]);
      arow[i] -= 2.0 * (vi * std::conj(wi)).real();
    }
  }
  if (m >= 2) offdiag_c[m - 2] = at(m - 1, m - 2);

  Tridiagonal t;
  t.diag.resize(m);
  for (std::size_t i = 0; i < m; ++i) t.diag[i] = at(i, i).real();
  t.offdiag.resize(m > 0 ? m - 1 : 0);
  for (std::size_t i = 0; i + 1 < m; ++i) t.offdiag[i] = std::abs(offdiag_c[i]);
  return t;
}

Spectrum eigenvalues_ql(Tridiagonal t) {
  const std::size_t m = t.diag.size();
  std::vector<double>& d = t.diag;
  std::vector<double> e(m, 0.0);
  double scale = 1.0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    e[i] = t.offdiag[i];
    scale += std::fabs(d[i]) + 2.0 * std::fabs(e[i]);
  }
  if (m > 0) scale += std::fabs(d[m - 1]);

  constexpr std::size_t kMaxSweeps = 50;
  for (std::size_t l = 0; l < m; ++l) {
    std::size_t sweeps = 0;
    std::size_t mm;
    do {
      for (mm = l; mm + 1 < m; ++mm) {
        if (std::fabs(e[mm]) <=
            DBL_EPSILON * (std::fabs(d[mm]) + std::fabs(d[mm + 1])))
          break;
      }
      if (mm != l) {
        if (sweeps++ == kMaxSweeps) throw NonConvergence(l, kMaxSweeps);
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);  // Wilkinson shift
        double r = pythag(g, 1.0);
        g = d[mm] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (std::size_t i = mm; i-- > l;) {
          double f = s * e[i];
          const double b = c * e[i];
          r = pythag(f, g);
          e[i + 1] = r;
          if (r == 0.0) {  // recover from underflow, skip transformation
            d[i + 1] -= p;
            e[mm] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[mm] = 0.0;
      }
    } while (mm != l);
  }

  Spectrum out;
  out.values = std::move(d);
  std::sort(out.values.begin(), out.values.end());
  out.residual_bound = 32.0 * DBL_EPSILON * static_cast<double>(m) * scale;
  return out;
}

Spectrum eigenvalues(const ComplexHermitian& m) {
  return eigenvalues_ql(tridiagonalize(m));
}

QuaternionSpectrum quaternion_eigenvalues(const SelfDualMatrix& m) {
  const ComplexHermitian h = embed_matrix(m);
  const Spectrum full = eigenvalues(h);
  const double tol = 1e-9 * std::max(1.0, h.frobenius_norm());

  QuaternionSpectrum out;
  out.values.reserve(m.n());
  for (std::size_t j = 0; j + 1 < full.values.size(); j += 2) {
    const double gap = full.values[j + 1] - full.values[j];
    out.pairing_gap = std::max(out.pairing_gap, gap);
    if (gap > tol) throw PairingViolation(gap, tol);
    out.values.push_back(0.5 * (full.values[j] + full.values[j + 1]));
  }
  return out;
}

}  // namespace wigner
