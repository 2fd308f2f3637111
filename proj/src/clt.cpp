#include "wigner/clt.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>

#include "wigner/chebyshev.hpp"
#include "wigner/errors.hpp"

namespace wigner {

namespace {

void check_forms_agree(double general, double quaternion, const char* what) {
  const double tol = 1e-12 * std::max(1.0, std::fabs(general));
  if (std::fabs(general - quaternion) > tol)
    throw Error(std::string(what) +
                ": general and quaternion displays disagree by " +
                std::to_string(general - quaternion));
}

// Gauss-Legendre nodes and weights on [-1, 1], cached per order.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussRule& gauss_legendre(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Newton from the Chebyshev-angle initial guess.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 64; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

double edge_sum(const TestFunction& f) { return f(2.0) + f(-2.0); }

}  // namespace

ModelParams::ModelParams(int beta_, double sigma2_, double m4_)
    : beta(beta_), sigma2(sigma2_), m4(m4_) {
  if (beta != 1 && beta != 2 && beta != 4)
    throw DomainError("ModelParams: beta must be 1, 2, or 4");
  if (!(sigma2 > 0.0)) throw DomainError("ModelParams: sigma2 must be positive");
  if (!(m4 >= 1.0))
    throw DomainError("ModelParams: fourth moment below its Cauchy-Schwarz floor 1");
}

double mean_general_form(const TestFunction& f, const ModelParams& p, int lmax) {
  const PsiCoefficients c = compute_psi(f, std::max(lmax, 4));
  const double b = p.two_over_beta();
  return (b - 1.0) * (edge_sum(f) / 4.0 - c.get(0) / 2.0) +
         (p.sigma2 - b) * c.get(2) + (p.m4 - 1.0 - b) * c.get(4);
}

double mean_quaternion_form(const TestFunction& f, const ModelParams& p, int lmax) {
  if (p.beta != 4)
    throw DomainError("mean_quaternion_form: defined for beta = 4 only");
  const PsiCoefficients c = compute_psi(f, std::max(lmax, 4));
  return -edge_sum(f) / 8.0 + c.get(0) / 4.0 + (p.sigma2 - 0.5) * c.get(2) +
         (p.m4 - 1.5) * c.get(4);
}

double mean_g(const TestFunction& f, const ModelParams& p, int lmax) {
  const double general = mean_general_form(f, p, lmax);
  if (p.beta == 4)
    check_forms_agree(general, mean_quaternion_form(f, p, lmax), "mean_g");
  return general;
}

double cov_series_general_form(const TestFunction& f, const TestFunction& g,
                               const ModelParams& p, int lmax) {
  const PsiCoefficients cf = compute_psi(f, lmax);
  const PsiCoefficients cg = compute_psi(g, lmax);
  const double b = p.two_over_beta();
  double tail = 0.0;
  for (int l = 3; l <= lmax; ++l)
    tail += static_cast<double>(l) * cf.get(static_cast<std::size_t>(l)) *
            cg.get(static_cast<std::size_t>(l));
  return p.sigma2 * cf.get(1) * cg.get(1) +
         2.0 * (p.m4 - b) * cf.get(2) * cg.get(2) + b * tail;
}

double cov_series_quaternion_form(const TestFunction& f, const TestFunction& g,
                                  const ModelParams& p, int lmax) {
  if (p.beta != 4)
    throw DomainError("cov_series_quaternion_form: defined for beta = 4 only");
  const PsiCoefficients cf = compute_psi(f, lmax);
  const PsiCoefficients cg = compute_psi(g, lmax);
  double tail = 0.0;
  for (int l = 3; l <= lmax; ++l)
    tail += static_cast<double>(l) * cf.get(static_cast<std::size_t>(l)) *
            cg.get(static_cast<std::size_t>(l));
  return p.sigma2 * cf.get(1) * cg.get(1) +
         (2.0 * p.m4 - 1.0) * cf.get(2) * cg.get(2) + 0.5 * tail;
}

double cov_series(const TestFunction& f, const TestFunction& g,
                  const ModelParams& p, int lmax) {
  const double general = cov_series_general_form(f, g, p, lmax);
  if (p.beta == 4)
    check_forms_agree(general, cov_series_quaternion_form(f, g, p, lmax),
                      "cov_series");
  return general;
}

double kernel_v(double t, double s, const ModelParams& p) {
  if (std::fabs(t) > 2.0 || std::fabs(s) > 2.0)
    throw DomainError("kernel_v: arguments must lie in [-2, 2]");
  if (std::fabs(t - s) < 1e-12)
    throw SingularPoint("kernel_v: logarithmic singularity at t = s");
  const double b = p.two_over_beta();
  const double root = std::sqrt((4.0 - t * t) * (4.0 - s * s));
  const double coeff = p.sigma2 - b + (p.m4 - 1.0 - b) * t * s / 2.0;
  double log_term = 0.0;
  if (root > 0.0)
    log_term = b * std::log((4.0 - t * s + root) / (4.0 - t * s - root));
  return coeff * root + log_term;
}

namespace {

// Pieces of the kernel under t = 2 cos(theta), s = 2 cos(phi). Exact trig
// identities split V into an entire part and two shifted copies of
// L(u) = log|2 sin(u/2)|:
//   sqrt((4-t^2)(4-s^2))                     = 4 sin(theta) sin(phi)
//   log((4 - ts + R) / (4 - ts - R))         = 2 [L(theta+phi) - L(theta-phi)]
// The L(theta-phi) factor is singular on the diagonal; it is integrated by
// subtracting a two-term Taylor model of the smooth factor and restoring it
// through the closed-form antiderivatives of L and u L, u^2 L.
double log_sin_half(double u) {
  return std::log(std::fabs(2.0 * std::sin(0.5 * u)));
}

// log(sin(u/2) / (u/2)), analytic on |u| < 2 pi.
double log_sinc_half(double u) {
  if (std::fabs(u) < 1e-8) return -u * u / 24.0;
  return std::log(std::sin(0.5 * u) / (0.5 * u));
}

// Int_0^x u^pow log_sinc_half(u) du by a fixed Gauss rule (analytic integrand).
double smooth_moment(double x, int pow) {
  const GaussRule& rule = gauss_legendre(64);
  const double mid = 0.5 * x;
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double u = mid + mid * rule.nodes[i];
    double v = log_sinc_half(u);
    for (int k = 0; k < pow; ++k) v *= u;
    acc += rule.weights[i] * v;
  }
  return acc * mid;
}

// Antiderivatives Int_0^x u^pow L(u) du for pow = 0, 1, 2.
double l_moment0(double x) {
  if (x == 0.0) return 0.0;
  return x * std::log(std::fabs(x)) - x + smooth_moment(x, 0);
}
double l_moment1(double x) {
  if (x == 0.0) return 0.0;
  return x * x * (0.5 * std::log(std::fabs(x)) - 0.25) + smooth_moment(x, 1);
}
double l_moment2(double x) {
  if (x == 0.0) return 0.0;
  return x * x * x * (std::log(std::fabs(x)) / 3.0 - 1.0 / 9.0) +
         smooth_moment(x, 2);
}

}  // namespace

QuadratureResult cov_kernel_quadrature(const TestFunction& f, const TestFunction& g,
                                       const ModelParams& p, int order) {
  if (order < 2) throw DomainError("cov_kernel_quadrature: order too small");
  const double b = p.two_over_beta();

  // Smooth axis factors: a(theta) = f'(2 cos theta) sin(theta) and the same
  // for g, with enough phi-derivatives for the diagonal Taylor model.
  const auto a_of = [&](double theta) {
    return f.derivative(2.0 * std::cos(theta)) * std::sin(theta);
  };
  const auto b_of = [&](double phi) {
    return g.derivative(2.0 * std::cos(phi)) * std::sin(phi);
  };
  const auto b_d1 = [&](double phi) {
    const double s = std::sin(phi), c = std::cos(phi), x = 2.0 * c;
    return -2.0 * s * s * g.derivative(x, 2) + c * g.derivative(x);
  };
  const auto b_d2 = [&](double phi) {
    const double s = std::sin(phi), c = std::cos(phi), x = 2.0 * c;
    return 4.0 * s * s * s * g.derivative(x, 3) -
           6.0 * s * c * g.derivative(x, 2) - s * g.derivative(x);
  };

  const auto level = [&](int n) {
    // Orders n and n+1 interlace, so no (theta, phi) node pair lands on the
    // diagonal of L(theta - phi).
    const GaussRule& ra = gauss_legendre(n);
    const GaussRule& rb = gauss_legendre(n + 1);
    const auto angle = [](double x) { return 0.5 * M_PI * (x + 1.0); };

    const std::size_t na = ra.nodes.size(), nb = rb.nodes.size();
    std::vector<double> phi(nb), wb(nb), bv(nb), sv(nb);
    for (std::size_t j = 0; j < nb; ++j) {
      phi[j] = angle(rb.nodes[j]);
      wb[j] = rb.weights[j] * 0.5 * M_PI;
      bv[j] = b_of(phi[j]);
      sv[j] = 2.0 * std::cos(phi[j]);
    }

    double total_alg = 0.0, total_plus = 0.0, total_minus = 0.0;
    for (std::size_t i = 0; i < na; ++i) {
      const double theta = angle(ra.nodes[i]);
      const double wa = ra.weights[i] * 0.5 * M_PI;
      const double t = 2.0 * std::cos(theta);
      const double ai = a_of(theta);
      const double bi = b_of(theta), bpi = b_d1(theta), bsi = b_d2(theta);

      double row_alg = 0.0, row_plus = 0.0, row_rem = 0.0;
      for (std::size_t j = 0; j < nb; ++j) {
        const double coeff = p.sigma2 - b + (p.m4 - 1.0 - b) * t * sv[j] / 2.0;
        row_alg += wb[j] * bv[j] * coeff * 4.0 * std::sin(theta) * std::sin(phi[j]);
        row_plus += wb[j] * bv[j] * log_sin_half(theta + phi[j]);
        const double d = phi[j] - theta;
        row_rem += wb[j] * (bv[j] - bi - d * bpi - 0.5 * d * d * bsi) *
                   log_sin_half(d);
      }
      // Compensation integrals over phi in [0, pi] for the Taylor model.
      const double c0 = l_moment0(theta) - l_moment0(theta - M_PI);
      const double c1 = l_moment1(theta - M_PI) - l_moment1(theta);
      const double c2 = 0.5 * (l_moment2(theta) - l_moment2(theta - M_PI));

      total_alg += wa * ai * row_alg;
      total_plus += wa * ai * row_plus;
      total_minus += wa * ai * (row_rem + bi * c0 + bpi * c1 + bsi * c2);
    }
    return (total_alg + 2.0 * b * (total_plus - total_minus)) / (M_PI * M_PI);
  };

  const double coarse = level(order);
  const double fine = level(2 * order);
  const double err = std::fabs(fine - coarse);
  if (err > 1e-6) throw QuadratureNotConverged(err);
  return {fine, err};
}

cxd mean_m_z(cxd z, const ModelParams& p) {
  if (p.beta != 4) throw DomainError("mean_m_z: defined for beta = 4 only");
  const StieltjesValue sv = stieltjes_m(z);
  const cxd m2 = sv.m * sv.m;
  return (1.0 + sv.m_prime) * m2 * sv.m *
         (p.sigma2 - 1.0 - 0.5 * sv.m_prime + (p.m4 - 1.5) * m2);
}

cxd cov_m_z(cxd z1, cxd z2, const ModelParams& p) {
  if (p.beta != 4) throw DomainError("cov_m_z: defined for beta = 4 only");
  const StieltjesValue s1 = stieltjes_m(z1);
  const StieltjesValue s2 = stieltjes_m(z2);
  const cxd prod = s1.m * s2.m;
  const cxd one_minus = 1.0 - prod;
  return s1.m_prime * s2.m_prime *
         (p.sigma2 - 0.5 + (2.0 * p.m4 - 3.0) * prod +
          1.0 / (2.0 * one_minus * one_minus));
}

double contour_mean(const TestFunction& f, const ModelParams& p, double a,
                    double v0) {
  if (p.beta != 4) throw DomainError("contour_mean: defined for beta = 4 only");
  if (!(v0 > 0.0 && v0 <= 1.0))
    throw DomainError("contour_mean: need 0 < v0 <= 1");
  if (a - 2.0 < 0.1)
    throw ContourTooClose("contour_mean: a - 2 < 0.1 spoils the quadrature");
  if (f.kind() == TestFunction::Kind::Resolvent) {
    const cxd w = f.pole();
    if (std::fabs(w.real()) < a && std::fabs(w.imag()) < v0)
      throw DomainError("contour_mean: resolvent pole inside the contour");
  }

  const GaussRule& rule = gauss_legendre(256);
  const auto integrand = [&](cxd z) { return f(z) * mean_m_z(z, p); };

  cxd total{};
  // Counterclockwise rectangle with vertices (+-a, +-v0).
  const std::array<std::array<cxd, 2>, 4> edges{{
      {cxd{-a, -v0}, cxd{a, -v0}},
      {cxd{a, -v0}, cxd{a, v0}},
      {cxd{a, v0}, cxd{-a, v0}},
      {cxd{-a, v0}, cxd{-a, -v0}},
  }};
  for (const auto& edge : edges) {
    const cxd mid = 0.5 * (edge[0] + edge[1]);
    const cxd half = 0.5 * (edge[1] - edge[0]);
    cxd sum{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      sum += rule.weights[i] * integrand(mid + half * rule.nodes[i]);
    total += sum * half;
  }

  const cxd result = total * cxd{0.0, 1.0} / (2.0 * M_PI);
  if (std::fabs(result.imag()) > 1e-9)
    throw Error("contour_mean: imaginary residue " +
                std::to_string(result.imag()) + " did not vanish");
  return result.real();
}

QuadraticCovOracle oracle_cov_quadratic(const ModelParams& p) {
  return {p.sigma2, 2.0 * (p.m4 - 1.0), 0.0};
}

ErrataReport errata_report(const ModelParams& p) {
  const double printed = 2.0 * (p.m4 - p.two_over_beta());
  const double oracle = 2.0 * (p.m4 - 1.0);
  const double diff = printed - oracle;
  return {p.beta, p.m4, printed, oracle, diff, std::fabs(diff) > 1e-12};
}

Prediction predict(const std::vector<TestFunction>& fs, const ModelParams& p,
                   const std::string& form, int lmax) {
  if (form != "series" && form != "kernel")
    throw DomainError("predict: form must be 'series' or 'kernel'");
  Prediction out;
  out.form = form;
  for (const auto& f : fs) {
    out.labels.push_back(f.label());
    out.means.push_back(mean_g(f, p, lmax));
  }
  const std::size_t n = fs.size();
  out.covariance.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double value =
          form == "series"
              ? cov_series(fs[i], fs[j], p, lmax)
              : cov_kernel_quadrature(fs[i], fs[j], p).value;
      out.covariance[i][j] = value;
      out.covariance[j][i] = value;
    }
  }
  return out;
}

}  // namespace wigner
