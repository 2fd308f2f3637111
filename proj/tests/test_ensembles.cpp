#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "wigner/eig.hpp"
#include "wigner/ensembles.hpp"
#include "wigner/errors.hpp"

using namespace wigner;

TEST_SUITE_BEGIN("ensembles");

TEST_CASE("distribution parsing and validation") {
  CHECK(EntryDistribution::parse("gaussian").kind == DistKind::Gaussian);
  CHECK(EntryDistribution::parse("discrete-phase").kind == DistKind::DiscretePhase);
  CHECK(EntryDistribution::parse("rademacher").kind == DistKind::Rademacher);
  const EntryDistribution radial = EntryDistribution::parse("radial:M=2.5");
  CHECK(radial.kind == DistKind::TwoPointRadial);
  CHECK(radial.m_target == doctest::Approx(2.5));
  CHECK_THROWS_AS(EntryDistribution::parse("radial:M=0.5"), DomainError);
  CHECK_THROWS_AS(EntryDistribution::parse("cauchy"), DomainError);

  CHECK_THROWS_AS(EntryDistribution::discrete_phase().validate_for(2), DomainError);
  CHECK_THROWS_AS(EntryDistribution::rademacher().validate_for(4), DomainError);
  CHECK_NOTHROW(EntryDistribution::gaussian().validate_for(1));

  CHECK(EntryDistribution::gaussian().fourth_moment(1) == 3.0);
  CHECK(EntryDistribution::gaussian().fourth_moment(2) == 2.0);
  CHECK(EntryDistribution::gaussian().fourth_moment(4) == 1.5);
  CHECK(EntryDistribution::discrete_phase().fourth_moment(4) == 1.0);
}

TEST_CASE("sampling determinism: entries independent of assembly order") {
  EnsembleSpec spec;
  spec.beta = 4;
  spec.n = 12;
  spec.sigma2 = 1.0;
  spec.offdiag = EntryDistribution::gaussian();
  spec.seed = 0xD57;
  const SelfDualMatrix a = sample_selfdual(spec);
  const SelfDualMatrix b = sample_selfdual(spec);
  for (std::size_t j = 0; j < 12; ++j) {
    CHECK(a.diagonal(j) == b.diagonal(j));
    for (std::size_t k = j + 1; k < 12; ++k) {
      CHECK(a.upper(j, k).a == b.upper(j, k).a);
      CHECK(a.upper(j, k).d == b.upper(j, k).d);
    }
  }
  spec.seed = 0xD58;
  const SelfDualMatrix c = sample_selfdual(spec);
  CHECK(c.diagonal(0) != a.diagonal(0));
}

TEST_CASE("discrete-phase entries have unit norm exactly") {
  EnsembleSpec spec;
  spec.beta = 4;
  spec.n = 10;
  spec.sigma2 = 1.0;
  spec.offdiag = EntryDistribution::discrete_phase();
  spec.seed = 0xD59;
  const SelfDualMatrix m = sample_selfdual(spec);
  const double scale = std::sqrt(10.0);
  for (std::size_t j = 0; j < 10; ++j)
    for (std::size_t k = j + 1; k < 10; ++k) {
      const Quaternion q = m.upper(j, k) * scale;
      CHECK(q.norm2() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::fabs(q.a) == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("beta = 4 samples embed to Hermitian Type-I matrices") {
  EnsembleSpec spec;
  spec.beta = 4;
  spec.n = 8;
  spec.sigma2 = 1.0;
  spec.offdiag = EntryDistribution::two_point_radial(2.5);
  spec.seed = 0xD5A;
  const ComplexHermitian h = embed_matrix(sample_selfdual(spec));
  CHECK(is_type_i(h.to_matrix()));
}

TEST_CASE("beta = 2 and beta = 1 samples have the right symmetry") {
  EnsembleSpec spec;
  spec.beta = 2;
  spec.n = 16;
  spec.sigma2 = 1.0;
  spec.offdiag = EntryDistribution::gaussian();
  spec.seed = 0xD5B;
  const ComplexHermitian h2 = sample_hermitian(spec);
  CHECK(std::fabs(h2.entry(3, 3).imag()) == 0.0);
  CHECK(h2.entry(2, 5) == std::conj(h2.entry(5, 2)));

  spec.beta = 1;
  const ComplexHermitian h1 = sample_hermitian(spec);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t k = j; k < 4; ++k)
      CHECK(h1.entry(j, k).imag() == 0.0);
}

TEST_CASE("moment validation: gaussian quaternion entries") {
  const MomentReport report =
      validate_moments(EntryDistribution::gaussian(), 4, 50000, 0xD5C);
  for (const auto& c : report.mean_components)
    CHECK(std::fabs(c.value) <= 4.0 * c.se);
  CHECK(std::fabs(report.norm2.value - 1.0) <= 4.0 * report.norm2.se);
  CHECK(std::fabs(report.norm4.value - 1.5) <= 4.0 * report.norm4.se);
  CHECK(std::fabs(report.alpha_abs2.value - 0.5) <= 4.0 * report.alpha_abs2.se);
  CHECK(std::fabs(report.beta_abs2.value - 0.5) <= 4.0 * report.beta_abs2.se);
  CHECK(report.alpha_sq.value <= 4.0 * report.alpha_sq.se);
  CHECK(report.beta_sq.value <= 4.0 * report.beta_sq.se);
  CHECK(report.alpha_beta.value <= 4.0 * report.alpha_beta.se);
  CHECK(report.alpha_beta_conj.value <= 4.0 * report.alpha_beta_conj.se);
  // gaussian tails at eta sqrt(n) >= 10 are numerically zero
  for (const auto& lb : report.lindeberg) CHECK(lb.value == 0.0);
}

TEST_CASE("moment validation: bounded kinds") {
  const MomentReport dp =
      validate_moments(EntryDistribution::discrete_phase(), 4, 20000, 0xD5D);
  CHECK(dp.norm2.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dp.norm2.se == doctest::Approx(0.0));
  CHECK(dp.norm4.value == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& lb : dp.lindeberg) CHECK(lb.value == 0.0);

  const MomentReport radial =
      validate_moments(EntryDistribution::two_point_radial(2.5), 4, 200000, 0xD5E);
  CHECK(std::fabs(radial.norm2.value - 1.0) <= 4.0 * radial.norm2.se);
  CHECK(std::fabs(radial.norm4.value - 2.5) <= 4.0 * radial.norm4.se);
  CHECK(radial.alpha_sq.value <= 4.0 * radial.alpha_sq.se);

  const MomentReport rad1 =
      validate_moments(EntryDistribution::rademacher(), 1, 20000, 0xD5F);
  CHECK(rad1.norm2.value == doctest::Approx(1.0));
  CHECK(rad1.norm4.value == doctest::Approx(1.0));

  CHECK_THROWS_AS(validate_moments(EntryDistribution::gaussian(), 4, 100, 1),
                  DomainError);
}

TEST_CASE("diagonal variance targets sigma^2") {
  EnsembleSpec spec;
  spec.beta = 4;
  spec.n = 1;
  spec.sigma2 = 1.0;
  spec.offdiag = EntryDistribution::gaussian();
  double sum = 0.0, sumsq = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    spec.seed = static_cast<std::uint64_t>(i);
    const double t = sample_selfdual(spec).diagonal(0);  // n = 1: no rescale
    sum += t;
    sumsq += t * t;
  }
  const double mean = sum / draws;
  const double var = sumsq / draws - mean * mean;
  const double se = std::sqrt(2.0 / draws);  // Var of chi^2-based variance est
  CHECK(std::fabs(mean) <= 3.0 / std::sqrt(static_cast<double>(draws)));
  CHECK(std::fabs(var - 1.0) <= 3.0 * se);
}

TEST_CASE("quadratic-form covariance: identity inputs") {
  const ComplexHermitian id2 = ComplexHermitian::from_matrix(CMatrix::identity(2));
  const ComplexHermitian id8 = ComplexHermitian::from_matrix(CMatrix::identity(8));
  CHECK(qf_cov_formula(id2, id2, 1.0) == doctest::Approx(0.0));
  CHECK(qf_cov_formula(id8, id8, 1.0) == doctest::Approx(0.0));
  CHECK(qf_cov_formula(id8, id8, 1.5) == doctest::Approx(8.0));
  CHECK(qf_cov_enumerate(id2, id2) == doctest::Approx(0.0));

  // deterministic |x| = 1 makes tr X*X constant: empirical covariance 0
  const MonteCarloEstimate mc =
      qf_cov_empirical(id8, id8, EntryDistribution::discrete_phase(), 2000, 0xF1);
  CHECK(mc.value == doctest::Approx(0.0));
  CHECK(mc.se == doctest::Approx(0.0));
}

TEST_CASE("quadratic-form covariance: enumeration equals the formula") {
  for (std::size_t i = 0; i < 100; ++i) {
    const std::size_t n = 1 + (i % 2);
    const ComplexHermitian a =
        embed_matrix(oracles::random_selfdual(n, 0xF200 + i));
    const ComplexHermitian b =
        embed_matrix(oracles::random_selfdual(n, 0xF300 + i));
    CHECK(std::fabs(qf_cov_enumerate(a, b) - qf_cov_formula(a, b, 1.0)) < 1e-12);
  }
  // scaling: c * I stays deterministic, generic Type-I scales as c^2
  CMatrix scaled = CMatrix::identity(2);
  scaled *= 3.0;
  const ComplexHermitian ci = ComplexHermitian::from_matrix(scaled);
  CHECK(qf_cov_enumerate(ci, ci) == doctest::Approx(0.0));

  const SelfDualMatrix base = oracles::random_selfdual(2, 0xF777);
  SelfDualMatrix tripled = base;
  for (std::size_t j = 0; j < 2; ++j) {
    tripled.diagonal(j) *= 3.0;
    for (std::size_t k = j + 1; k < 2; ++k)
      tripled.upper(j, k) = tripled.upper(j, k) * 3.0;
  }
  const double small = qf_cov_enumerate(embed_matrix(base), embed_matrix(base));
  const double big = qf_cov_enumerate(embed_matrix(tripled), embed_matrix(tripled));
  CHECK(big == doctest::Approx(9.0 * small).epsilon(1e-12));
}

TEST_CASE("quadratic-form covariance: Monte Carlo agreement and symmetry") {
  const ComplexHermitian a = embed_matrix(oracles::random_selfdual(4, 0xF401));
  const ComplexHermitian b = embed_matrix(oracles::random_selfdual(4, 0xF402));
  const double target = qf_cov_formula(a, b, 1.5);
  const MonteCarloEstimate mc =
      qf_cov_empirical(a, b, EntryDistribution::gaussian(), 50000, 0xF403);
  CHECK(std::fabs(mc.value - target) <= 3.0 * mc.se);
  // same seed, swapped arguments: identical estimate (symmetric statistic)
  const MonteCarloEstimate swapped =
      qf_cov_empirical(b, a, EntryDistribution::gaussian(), 50000, 0xF403);
  CHECK(mc.value == swapped.value);
}

TEST_CASE("quadratic-form covariance: structure errors") {
  rng::CounterRng gen(0xF5);
  CMatrix generic(4, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    generic(i, i) = gen.normal_pair(static_cast<std::uint32_t>(i), 0, 0).first;
    for (std::size_t j = i + 1; j < 4; ++j) {
      const auto [re, im] = gen.normal_pair(static_cast<std::uint32_t>(i),
                                            static_cast<std::uint32_t>(j), 1);
      generic(i, j) = cxd{re, im};
      generic(j, i) = std::conj(generic(i, j));
    }
  }
  const ComplexHermitian h = ComplexHermitian::from_matrix(generic);
  const ComplexHermitian id4 = ComplexHermitian::from_matrix(CMatrix::identity(4));
  CHECK_THROWS_AS(qf_cov_formula(h, id4, 1.0), StructureError);
  CHECK_THROWS_AS(qf_cov_enumerate(embed_matrix(oracles::random_selfdual(3, 1)),
                                   embed_matrix(oracles::random_selfdual(3, 2))),
                  DomainError);
}

TEST_CASE("semicircle moment sanity at n = 256"
          * doctest::description("50 replicates, gaussian beta = 4")) {
  const std::size_t reps = 50;
  double m2_sum = 0.0, m4_sum = 0.0, m2_sq = 0.0, m4_sq = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    EnsembleSpec spec;
    spec.beta = 4;
    spec.n = 256;
    spec.sigma2 = 1.0;
    spec.offdiag = EntryDistribution::gaussian();
    spec.seed = 0xE5D0 + r;
    const std::vector<double> eigs = sample_spectrum(spec);
    double m2 = 0.0, m4 = 0.0;
    for (const double v : eigs) {
      m2 += v * v;
      m4 += v * v * v * v;
    }
    m2 /= static_cast<double>(eigs.size());
    m4 /= static_cast<double>(eigs.size());
    m2_sum += m2;
    m4_sum += m4;
    m2_sq += m2 * m2;
    m4_sq += m4 * m4;
  }
  const double rd = static_cast<double>(reps);
  const double m2_mean = m2_sum / rd, m4_mean = m4_sum / rd;
  const double m2_se = std::sqrt((m2_sq / rd - m2_mean * m2_mean) / (rd - 1.0));
  const double m4_se = std::sqrt((m4_sq / rd - m4_mean * m4_mean) / (rd - 1.0));
  CHECK(std::fabs(m2_mean - 1.0) <= 5.0 * m2_se);
  CHECK(std::fabs(m4_mean - 2.0) <= 5.0 * m4_se);
}

TEST_SUITE_END();
