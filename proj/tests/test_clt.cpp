#include <doctest.h>

#include <cmath>

#include "wigner/chebyshev.hpp"
#include "wigner/clt.hpp"
#include "wigner/errors.hpp"
#include "wigner/rng.hpp"

using namespace wigner;

TEST_SUITE_BEGIN("clt");

TEST_CASE("model parameter validation") {
  CHECK_THROWS_AS(ModelParams(3, 1.0, 2.0), DomainError);
  CHECK_THROWS_AS(ModelParams(2, 0.0, 2.0), DomainError);
  CHECK_THROWS_AS(ModelParams(2, 1.0, 0.5), DomainError);  // below Cauchy-Schwarz
  CHECK_NOTHROW(ModelParams(4, 1.0, 1.0));
}

TEST_CASE("limiting mean: collapse to sigma^2 - 1 for x^2") {
  const TestFunction x2 = TestFunction::monomial(2);
  CHECK(mean_g(x2, ModelParams(2, 1.0, 2.0)) == doctest::Approx(0.0));
  CHECK(mean_g(x2, ModelParams(4, 1.0, 1.5)) == doctest::Approx(0.0));
  CHECK(mean_g(x2, ModelParams(4, 2.5, 1.5)) == doctest::Approx(1.5));
  CHECK(mean_g(x2, ModelParams(1, 2.0, 3.0)) == doctest::Approx(1.0));
  for (const int beta : {1, 2, 4}) {
    for (const double s2 : {0.5, 1.0, 2.0})
      CHECK(mean_g(x2, ModelParams(beta, s2, 2.0)) ==
            doctest::Approx(s2 - 1.0).epsilon(1e-14));
  }
}

TEST_CASE("truncation failures propagate out of the formulas") {
  // resolvent pole hugging the support: coefficients decay too slowly for
  // the default truncation
  const TestFunction tight = TestFunction::resolvent(cxd{2.02, 0.0});
  CHECK_THROWS_AS(mean_g(tight, ModelParams(4, 1.0, 1.5)), TailNotDecayed);
  CHECK_THROWS_AS(cov_series(tight, tight, ModelParams(2, 1.0, 2.0)),
                  TailNotDecayed);
}

TEST_CASE("limiting mean exercises psi_4 and the edge term") {
  // mean(x^4) = 4 sigma^2 + M - 6 at beta = 4
  CHECK(mean_g(TestFunction::monomial(4), ModelParams(4, 2.0, 3.0)) ==
        doctest::Approx(5.0).epsilon(1e-13));
  CHECK(mean_g(TestFunction::monomial(4), ModelParams(4, 1.0, 1.5)) ==
        doctest::Approx(-0.5).epsilon(1e-13));
  CHECK(mean_g(TestFunction::polynomial({7.0}), ModelParams(1, 2.0, 3.0)) ==
        doctest::Approx(0.0));
}

TEST_CASE("covariance series: pinned values") {
  const TestFunction x1 = TestFunction::monomial(1);
  const TestFunction x2 = TestFunction::monomial(2);
  for (const int beta : {1, 2, 4}) {
    const ModelParams p(beta, 1.7, 2.3);
    CHECK(cov_series(x1, x1, p) == doctest::Approx(1.7).epsilon(1e-15));
    CHECK(cov_series(x1, x2, p) == doctest::Approx(0.0));
  }
  CHECK(cov_series(x2, x2, ModelParams(2, 1.0, 2.0)) == doctest::Approx(2.0));
}

TEST_CASE("covariance kernel: pinned values and guards") {
  const ModelParams gue(2, 1.0, 2.0);
  const double root12 = std::sqrt(12.0);
  CHECK(kernel_v(0.0, 1.0, gue) ==
        doctest::Approx(std::log((4.0 + root12) / (4.0 - root12))).epsilon(1e-14));
  CHECK(kernel_v(0.0, 1.0, gue) == doctest::Approx(2.633916).epsilon(1e-6));
  CHECK(kernel_v(2.0, 0.7, gue) == doctest::Approx(0.0));
  rng::CounterRng gen(0xC17);
  for (std::uint32_t i = 0; i < 20; ++i) {
    const double t = 4.0 * gen.uniform(i, 0, 0) - 2.0;
    const double s = 4.0 * gen.uniform(i, 1, 0) - 2.0;
    if (std::fabs(t - s) < 1e-9) continue;
    CHECK(kernel_v(t, s, gue) == doctest::Approx(kernel_v(s, t, gue)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(kernel_v(0.3, 0.3, gue), SingularPoint);
  CHECK_THROWS_AS(kernel_v(2.1, 0.0, gue), DomainError);
}

TEST_CASE("kernel decomposition identity used by the quadrature") {
  // V(t, s) = coeff * 4 sin sin + (4/beta)[L(theta+phi) - L(theta-phi)]
  const auto L = [](double u) { return std::log(std::fabs(2.0 * std::sin(0.5 * u))); };
  rng::CounterRng gen(0xC18);
  for (const int beta : {1, 2, 4}) {
    const ModelParams p(beta, 1.3, 2.6);
    for (std::uint32_t i = 0; i < 30; ++i) {
      const double theta = M_PI * gen.uniform(i, 0, 0);
      const double phi = M_PI * gen.uniform(i, 1, 0);
      if (std::fabs(theta - phi) < 1e-6) continue;
      const double t = 2.0 * std::cos(theta), s = 2.0 * std::cos(phi);
      const double b = 2.0 / beta;
      const double alg =
          (p.sigma2 - b + (p.m4 - 1.0 - b) * t * s / 2.0) * 4.0 * std::sin(theta) *
          std::sin(phi);
      const double log_part = 2.0 * b * (L(theta + phi) - L(theta - phi));
      CHECK(kernel_v(t, s, p) ==
            doctest::Approx(alg + log_part).epsilon(1e-11));
    }
  }
}

TEST_CASE("series and kernel quadrature agree at beta = 2") {
  const ModelParams gue(2, 1.0, 2.0);
  const ModelParams other(2, 2.0, 3.0);
  for (const ModelParams* p : {&gue, &other}) {
    for (int df = 1; df <= 4; ++df) {
      for (int dg = df; dg <= 4; ++dg) {
        const TestFunction f = TestFunction::monomial(df);
        const TestFunction g = TestFunction::monomial(dg);
        const double series = cov_series(f, g, *p);
        const QuadratureResult quad = cov_kernel_quadrature(f, g, *p);
        CHECK(std::fabs(series - quad.value) <=
              std::max(1e-6, quad.error_estimate));
      }
    }
  }
  // analytic test functions through the same route
  const TestFunction e = TestFunction::exponential(0.5);
  const double series = cov_series(e, e, gue);
  const QuadratureResult quad = cov_kernel_quadrature(e, e, gue);
  CHECK(std::fabs(series - quad.value) <= 1e-6);
}

TEST_CASE("kernel route differs from the printed series exactly in the psi_2 term") {
  // The kernel display integrates to psi_2 coefficient 2(M-1); the printed
  // series carries 2(M - 2/beta). Their gap is (4/beta - 2) psi_2(f) psi_2(g),
  // zero only at beta = 2. The moment oracle sides with the kernel.
  for (const int beta : {1, 4}) {
    for (const auto& [s2, m4] :
         std::vector<std::pair<double, double>>{{1.0, 2.0}, {2.0, 3.0}}) {
      const ModelParams p(beta, s2, m4);
      for (int df = 1; df <= 4; ++df) {
        for (int dg = df; dg <= 4; ++dg) {
          const TestFunction f = TestFunction::monomial(df);
          const TestFunction g = TestFunction::monomial(dg);
          const double gap = (4.0 / beta - 2.0) * psi_exact_poly(f).get(2) *
                             psi_exact_poly(g).get(2);
          const double series = cov_series(f, g, p);
          const QuadratureResult quad = cov_kernel_quadrature(f, g, p);
          CHECK(std::fabs(series + gap - quad.value) <=
                std::max(1e-6, quad.error_estimate));
        }
      }
    }
  }
}

TEST_CASE("monotone truncation of the covariance series") {
  const TestFunction e = TestFunction::exponential(1.0);
  const ModelParams p(2, 1.0, 2.0);
  const double at32 = cov_series(e, e, p, 32);
  const double at64 = cov_series(e, e, p, 64);
  const double tail32 = psi(e, 32).tail_estimate;
  CHECK(std::fabs(at64 - at32) <= tail32 * 32.0);
}

TEST_CASE("z-domain mean: closed-form point, decay, symmetry") {
  const ModelParams p(4, 1.0, 1.5);
  // independent evaluation from the hardcoded m(3)
  const double m = 0.5 * (std::sqrt(5.0) - 3.0);
  const double mp = m * m / (1.0 - m * m);
  const double expected = (1.0 + mp) * m * m * m * (-0.5 * mp);
  const cxd got = mean_m_z(cxd{3.0, 0.0}, p);
  CHECK(got.real() == doctest::Approx(expected).epsilon(1e-14));
  CHECK(got.real() == doctest::Approx(5.573e-3).epsilon(1e-3));
  CHECK(std::fabs(got.imag()) < 1e-16);

  // O(z^-5) decay at sigma^2 = 1, M = 3/2
  const double ratio = std::abs(mean_m_z(cxd{10.0, 0.0}, p)) /
                       std::abs(mean_m_z(cxd{100.0, 0.0}, p));
  CHECK(ratio > 0.5e5);
  CHECK(ratio < 2.0e5);

  const cxd z{1.4, 0.8};
  CHECK(std::abs(mean_m_z(std::conj(z), p) - std::conj(mean_m_z(z, p))) < 1e-13);

  CHECK_THROWS_AS(mean_m_z(cxd{3.0, 0.0}, ModelParams(2, 1.0, 2.0)), DomainError);
}

TEST_CASE("z-domain covariance: substitution point, symmetry, decay") {
  const ModelParams p(4, 1.0, 1.5);
  const cxd z{0.0, 2.0};
  // direct substitution of m(2i) = i (sqrt(2) - 1)
  const cxd m{0.0, std::sqrt(2.0) - 1.0};
  const cxd mp = m * m / (1.0 - m * m);
  const cxd prod = m * m;
  const cxd expected = mp * mp * (0.5 + 1.0 / (2.0 * (1.0 - prod) * (1.0 - prod)));
  CHECK(std::abs(cov_m_z(z, z, p) - expected) < 1e-14);

  const cxd z1{2.7, 0.4}, z2{-0.3, 1.9};
  CHECK(std::abs(cov_m_z(z1, z2, p) - cov_m_z(z2, z1, p)) < 1e-15);
  CHECK(std::abs(cov_m_z(cxd{50.0, 0.0}, cxd{0.0, 60.0}, p)) < 1e-6);
}

TEST_CASE("contour bridge reproduces the series mean (beta = 4)") {
  const TestFunction x2 = TestFunction::monomial(2);
  const TestFunction x4 = TestFunction::monomial(4);
  const TestFunction one = TestFunction::polynomial({1.0});
  for (const auto& [s2, m4] :
       std::vector<std::pair<double, double>>{{1.0, 1.5}, {2.0, 3.0}}) {
    const ModelParams p(4, s2, m4);
    for (const TestFunction* f : {&one, &x2, &x4}) {
      const double series = mean_g(*f, p);
      const double c1 = contour_mean(*f, p, 2.5, 1.0);
      const double c2 = contour_mean(*f, p, 3.0, 0.5);
      CHECK(std::fabs(c1 - series) < 1e-8);
      CHECK(std::fabs(c1 - c2) < 1e-8);
    }
  }
  CHECK(contour_mean(one, ModelParams(4, 1.0, 1.5), 2.5, 1.0) ==
        doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("contour bridge handles analytic test functions") {
  const ModelParams p(4, 2.0, 3.0);
  const TestFunction e = TestFunction::exponential(0.5);
  CHECK(std::fabs(contour_mean(e, p, 2.5, 1.0) - mean_g(e, p)) < 1e-8);
  const TestFunction r = TestFunction::resolvent(cxd{4.0, 0.0});
  CHECK(std::fabs(contour_mean(r, p, 2.5, 1.0) - mean_g(r, p)) < 1e-8);
}

TEST_CASE("contour guards") {
  const ModelParams p(4, 1.0, 1.5);
  const TestFunction x2 = TestFunction::monomial(2);
  CHECK_THROWS_AS(contour_mean(x2, p, 2.05, 1.0), ContourTooClose);
  CHECK_THROWS_AS(contour_mean(x2, p, 2.5, 1.5), DomainError);
  CHECK_THROWS_AS(contour_mean(x2, ModelParams(2, 1.0, 2.0), 2.5, 1.0), DomainError);
  // resolvent pole inside the rectangle
  CHECK_THROWS_AS(
      contour_mean(TestFunction::resolvent(cxd{2.2, 0.0}), p, 2.5, 1.0), DomainError);
}

TEST_CASE("quadratic-trace oracle and errata tabulation") {
  const QuadraticCovOracle gue = oracle_cov_quadratic(ModelParams(2, 1.0, 2.0));
  CHECK(gue.var_x == 1.0);
  CHECK(gue.var_x2 == 2.0);
  CHECK(gue.cov_x_x2 == 0.0);
  const QuadraticCovOracle goe = oracle_cov_quadratic(ModelParams(1, 2.0, 3.0));
  CHECK(goe.var_x == 2.0);
  CHECK(goe.var_x2 == 4.0);
  const QuadraticCovOracle gse = oracle_cov_quadratic(ModelParams(4, 1.0, 1.5));
  CHECK(gse.var_x == 1.0);
  CHECK(gse.var_x2 == 1.0);

  const ErrataReport e2 = errata_report(ModelParams(2, 1.0, 2.0));
  CHECK(e2.printed_value == doctest::Approx(2.0));
  CHECK(e2.oracle_value == doctest::Approx(2.0));
  CHECK_FALSE(e2.flag);
  const ErrataReport e1 = errata_report(ModelParams(1, 2.0, 3.0));
  CHECK(e1.printed_value == doctest::Approx(2.0));
  CHECK(e1.oracle_value == doctest::Approx(4.0));
  CHECK(e1.flag);
  const ErrataReport e4 = errata_report(ModelParams(4, 1.0, 1.5));
  CHECK(e4.printed_value == doctest::Approx(2.0));
  CHECK(e4.oracle_value == doctest::Approx(1.0));
  CHECK(e4.flag);
}

TEST_CASE("bundled prediction is symmetric and labelled") {
  const std::vector<TestFunction> fs{TestFunction::monomial(1),
                                     TestFunction::monomial(2)};
  const Prediction pred = predict(fs, ModelParams(2, 1.0, 2.0), "series");
  CHECK(pred.labels[0] == "poly:0,1");
  CHECK(pred.means[1] == doctest::Approx(0.0));
  CHECK(pred.covariance[0][1] == pred.covariance[1][0]);
  CHECK(pred.covariance[0][0] == doctest::Approx(1.0));
  CHECK(pred.covariance[1][1] == doctest::Approx(2.0));
}

TEST_SUITE_END();
