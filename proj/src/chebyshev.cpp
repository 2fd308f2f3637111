#include "wigner/chebyshev.hpp"

#include <cmath>
#include <cstdint>

#include "wigner/errors.hpp"

namespace wigner {

namespace {

// cos(pi q) and sin(pi q) with exact dyadic folding: the argument is reduced
// with exact arithmetic so |arg| <= pi/2 before calling libm. Keeps absolute
// error near eps even for large phase indices.
double cospi(double q) {
  q = std::fabs(q);
  q = std::fmod(q, 2.0);
  if (q > 1.0) q = 2.0 - q;
  double sign = 1.0;
  if (q > 0.5) {
    q = 1.0 - q;
    sign = -1.0;
  }
  return sign * std::cos(M_PI * q);
}

double sinpi(double q) {
  double sign = 1.0;
  if (q < 0.0) {
    q = -q;
    sign = -1.0;
  }
  q = std::fmod(q, 2.0);
  if (q > 1.0) {
    q = 2.0 - q;
    sign = -sign;
  }
  if (q > 0.5) q = 1.0 - q;
  return sign * std::sin(M_PI * q);
}

struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

double tail_of(const std::vector<double>& values) {
  const std::size_t quarter = (values.size() + 3) / 4;
  double tail = 0.0;
  for (std::size_t i = values.size() - quarter; i < values.size(); ++i)
    tail = std::max(tail, std::fabs(values[i]));
  return tail;
}

PsiCoefficients finish(std::vector<double> values, std::size_t truncation) {
  PsiCoefficients out;
  out.values = std::move(values);
  out.truncation = truncation;
  out.tail_estimate = tail_of(out.values);
  return out;
}

std::int64_t quadrature_nodes(int lmax) {
  return std::max<std::int64_t>(4096, 8 * static_cast<std::int64_t>(lmax));
}

}  // namespace

double chebyshev_t(int l, double s) {
  if (l < 0) throw DomainError("chebyshev_t: order must be nonnegative");
  if (l == 0) return 1.0;
  double prev = 1.0;
  double cur = s;
  for (int i = 1; i < l; ++i) {
    const double next = 2.0 * s * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

PsiCoefficients psi(const TestFunction& f, int lmax) {
  if (lmax < 0) throw DomainError("psi: truncation must be nonnegative");
  const std::int64_t n = quadrature_nodes(lmax);

  // Nodes t_j = -pi + 2 pi j / n, j = 0 .. n-1 (trapezoid on a periodic
  // integrand: the coincident endpoints fold into one node).
  std::vector<double> fx(static_cast<std::size_t>(n));
  for (std::int64_t j = 0; j < n; ++j) {
    const double q = static_cast<double>(2 * j - n) / static_cast<double>(n);
    fx[static_cast<std::size_t>(j)] = f(2.0 * cospi(q));
  }

  std::vector<double> values(static_cast<std::size_t>(lmax) + 1);
  for (int l = 0; l <= lmax; ++l) {
    Kahan re, im;
    for (std::int64_t j = 0; j < n; ++j) {
      // phase l * t_j / pi = l (2j - n) / n, reduced mod 2 in exact integers
      std::int64_t r = (static_cast<std::int64_t>(l) * (2 * j - n)) % (2 * n);
      if (r < 0) r += 2 * n;
      const double q = static_cast<double>(r) / static_cast<double>(n);
      const double fj = fx[static_cast<std::size_t>(j)];
      re.add(fj * cospi(q));
      im.add(fj * sinpi(q));
    }
    const double imag = im.sum / static_cast<double>(n);
    if (std::fabs(imag) > 1e-10)
      throw Error("psi: quadrature imaginary part " + std::to_string(imag) +
                  " did not vanish");
    values[static_cast<std::size_t>(l)] = re.sum / static_cast<double>(n);
  }

  auto out = finish(std::move(values), static_cast<std::size_t>(lmax));
  if (out.tail_estimate > 1e-8)
    throw TailNotDecayed(out.tail_estimate, static_cast<std::size_t>(lmax));
  return out;
}

PsiCoefficients psi_chebgauss(const TestFunction& f, int lmax) {
  if (lmax < 0) throw DomainError("psi_chebgauss: truncation must be nonnegative");
  const std::int64_t n = quadrature_nodes(lmax);

  // Chebyshev-Gauss nodes s_k = cos((2k - 1) pi / (2n)), weight pi / n.
  std::vector<double> fx(static_cast<std::size_t>(n));
  for (std::int64_t k = 1; k <= n; ++k) {
    const double q = static_cast<double>(2 * k - 1) / static_cast<double>(2 * n);
    fx[static_cast<std::size_t>(k - 1)] = f(2.0 * cospi(q));
  }

  std::vector<double> values(static_cast<std::size_t>(lmax) + 1);
  for (int l = 0; l <= lmax; ++l) {
    Kahan acc;
    for (std::int64_t k = 1; k <= n; ++k) {
      // T_l(s_k) = cos(l (2k - 1) pi / (2n))
      std::int64_t r = (static_cast<std::int64_t>(l) * (2 * k - 1)) % (4 * n);
      const double q = static_cast<double>(r) / static_cast<double>(2 * n);
      acc.add(fx[static_cast<std::size_t>(k - 1)] * cospi(q));
    }
    values[static_cast<std::size_t>(l)] = acc.sum / static_cast<double>(n);
  }
  return finish(std::move(values), static_cast<std::size_t>(lmax));
}

PsiCoefficients psi_exact_poly(const TestFunction& f) {
  if (!f.is_polynomial())
    throw DomainError("psi_exact_poly requires a polynomial test function");
  const int d = f.degree();
  if (d > 64) throw DomainError("psi_exact_poly: degree capped at 64");
  const auto& c = f.coefficients();

  // Accumulate the T-basis coefficients of f(2s). The T-coefficients of s^i
  // follow from s T_0 = T_1 and s T_j = (T_{j+1} + T_{j-1}) / 2; together
  // with the 2^i scaling every step is dyadic, so the conversion is exact
  // for coefficients representable in double.
  std::vector<double> acc(static_cast<std::size_t>(d) + 1, 0.0);
  std::vector<double> p{1.0};
  double two_pow = 1.0;
  for (int i = 0;; ++i) {
    for (std::size_t j = 0; j < p.size(); ++j)
      acc[j] += c[static_cast<std::size_t>(i)] * two_pow * p[j];
    if (i == d) break;
    std::vector<double> np(p.size() + 1, 0.0);
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p[j] == 0.0) continue;
      if (j == 0) {
        np[1] += p[0];
      } else {
        np[j + 1] += 0.5 * p[j];
        np[j - 1] += 0.5 * p[j];
      }
    }
    p = std::move(np);
    two_pow *= 2.0;
  }

  std::vector<double> values(acc.size());
  values[0] = acc[0];
  for (std::size_t l = 1; l < acc.size(); ++l) values[l] = 0.5 * acc[l];
  return finish(std::move(values), static_cast<std::size_t>(d));
}

PsiCoefficients compute_psi(const TestFunction& f, int lmax) {
  if (!f.is_polynomial()) return psi(f, lmax);
  PsiCoefficients out = psi_exact_poly(f);
  if (out.values.size() < static_cast<std::size_t>(lmax) + 1) {
    out.values.resize(static_cast<std::size_t>(lmax) + 1, 0.0);
    out.truncation = static_cast<std::size_t>(lmax);
    out.tail_estimate = tail_of(out.values);
  }
  return out;
}

}  // namespace wigner
