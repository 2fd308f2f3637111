#include <doctest.h>

#include <cmath>

#include "wigner/chebyshev.hpp"
#include "wigner/errors.hpp"
#include "wigner/rng.hpp"
#include "wigner/semicircle.hpp"

using namespace wigner;

TEST_SUITE_BEGIN("semicircle");

TEST_CASE("density values and normalization") {
  CHECK(semicircle_density(0.0) == doctest::Approx(1.0 / M_PI).epsilon(1e-15));
  CHECK(semicircle_density(2.0) == 0.0);
  CHECK(semicircle_density(-2.0) == 0.0);
  CHECK(semicircle_density(2.5) == 0.0);
  CHECK(integral_f_quadrature(TestFunction::polynomial({1.0})) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("moments are Catalan numbers") {
  CHECK(semicircle_moment(0) == 1.0);
  CHECK(semicircle_moment(2) == 1.0);
  CHECK(semicircle_moment(4) == 2.0);
  CHECK(semicircle_moment(6) == 5.0);
  CHECK(semicircle_moment(3) == 0.0);
  CHECK(semicircle_moment(30) == 9694845.0);
  CHECK_THROWS_AS(semicircle_moment(31), DomainError);
}

TEST_CASE("integral_f equals psi0 - psi2 and the direct quadrature") {
  CHECK(integral_f(TestFunction::monomial(2)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(integral_f(TestFunction::monomial(4)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(integral_f(TestFunction::polynomial({1.0})) == doctest::Approx(1.0));

  // polynomial route: exact moment sums
  rng::CounterRng gen(0x5C1);
  for (std::uint32_t i = 0; i < 8; ++i) {
    std::vector<double> c(9);
    for (std::uint32_t k = 0; k < 9; ++k)
      c[k] = 2.0 * gen.uniform(i, k, 0) - 1.0;
    const TestFunction f = TestFunction::polynomial(c);
    double exact = 0.0;
    for (std::size_t k = 0; k < f.coefficients().size(); ++k)
      exact += f.coefficients()[k] * semicircle_moment(static_cast<int>(k));
    CHECK(integral_f(f) == doctest::Approx(exact).epsilon(1e-12));
    CHECK(integral_f_quadrature(f) == doctest::Approx(exact).epsilon(1e-10));
  }

  // analytic route: psi identity vs adaptive quadrature
  for (const double t : {0.5, 1.0, -0.7}) {
    const TestFunction f = TestFunction::exponential(t);
    CHECK(std::fabs(integral_f(f) - integral_f_quadrature(f)) < 1e-10);
  }
  const TestFunction c = TestFunction::cosine(1.3);
  CHECK(std::fabs(integral_f(c) - integral_f_quadrature(c)) < 1e-10);
}

TEST_CASE("Stieltjes transform: branch values") {
  const StieltjesValue at3 = stieltjes_m(cxd{3.0, 0.0});
  CHECK(at3.m.real() == doctest::Approx(0.5 * (std::sqrt(5.0) - 3.0)).epsilon(1e-15));
  CHECK(std::fabs(at3.m.imag()) < 1e-16);

  // branch continuity on the negative real axis
  const StieltjesValue atm3 = stieltjes_m(cxd{-3.0, 0.0});
  CHECK(atm3.m.real() == doctest::Approx(0.5 * (3.0 - std::sqrt(5.0))).epsilon(1e-15));

  const StieltjesValue at2i = stieltjes_m(cxd{0.0, 2.0});
  CHECK(std::fabs(at2i.m.real()) < 1e-15);
  CHECK(at2i.m.imag() == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-15));
}

TEST_CASE("Stieltjes transform: defining quadratic, symmetry, bound, derivative") {
  rng::CounterRng gen(0x5C2);
  int checked = 0;
  for (std::uint32_t i = 0; checked < 300; ++i) {
    const cxd z{8.0 * gen.uniform(i, 0, 0) - 4.0, 6.0 * gen.uniform(i, 1, 0) - 3.0};
    if (distance_to_support(z) < 1e-3) continue;
    ++checked;
    const StieltjesValue sv = stieltjes_m(z);
    CHECK(std::abs(sv.m * sv.m + z * sv.m + 1.0) < 1e-12);
    CHECK(std::abs(stieltjes_m(std::conj(z)).m - std::conj(sv.m)) < 1e-12);
    CHECK(std::abs(sv.m) < 1.0);
    if (z.imag() > 0.0) CHECK(sv.m.imag() > 0.0);
    if (distance_to_support(z) > 0.5) {
      const double h = 1e-6;
      const cxd fd = (stieltjes_m(z + h).m - stieltjes_m(z - h).m) / (2.0 * h);
      CHECK(std::abs(fd - sv.m_prime) <= 1e-7 * std::abs(sv.m_prime));
    }
  }
  CHECK(std::abs(stieltjes_m(cxd{100.0, 0.0}).m + 0.01) < 2e-6);  // m ~ -1/z
}

TEST_CASE("Stieltjes transform: domain guard") {
  CHECK_THROWS_AS(stieltjes_m(cxd{0.5, 0.0}), DomainError);
  CHECK_THROWS_AS(stieltjes_m(cxd{2.0, 1e-13}), DomainError);
  CHECK_NOTHROW(stieltjes_m(cxd{2.0, 1e-9}));
}

TEST_SUITE_END();
