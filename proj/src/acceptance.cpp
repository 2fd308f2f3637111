#include "wigner/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "wigner/chebyshev.hpp"
#include "wigner/clt.hpp"
#include "wigner/eig.hpp"
#include "wigner/ensembles.hpp"
#include "wigner/errors.hpp"
#include "wigner/experiment.hpp"
#include "wigner/semicircle.hpp"

namespace wigner {

namespace {

struct Check {
  bool ok = true;
  double worst = 0.0;
  std::string note;

  void require(bool condition, const std::string& why) {
    if (!condition && ok) {
      ok = false;
      note = why;
    }
  }
  void track(double err, double tol, const std::string& what) {
    worst = std::max(worst, err);
    if (err > tol && ok) {
      ok = false;
      std::ostringstream os;
      os << what << ": error " << err << " > " << tol;
      note = os.str();
    }
  }
};

std::string format_seconds(double s) {
  std::ostringstream os;
  os.precision(2);
  os << std::fixed << s << " s";
  return os.str();
}

double uniform_in(rng::CounterRng& gen, std::uint32_t i, std::uint32_t j,
                  std::uint32_t slot, double lo, double hi) {
  return lo + (hi - lo) * gen.uniform(i, j, slot);
}

TestFunction random_poly(rng::CounterRng& gen, std::uint32_t tag, int degree) {
  std::vector<double> c(static_cast<std::size_t>(degree) + 1);
  for (int i = 0; i <= degree; ++i)
    c[static_cast<std::size_t>(i)] =
        uniform_in(gen, tag, static_cast<std::uint32_t>(i), 7, -1.0, 1.0);
  return TestFunction::polynomial(std::move(c));
}

SelfDualMatrix random_selfdual(std::size_t n, std::uint64_t seed) {
  EnsembleSpec spec;
  spec.beta = 4;
  spec.n = n;
  spec.sigma2 = 1.0;
  spec.offdiag = EntryDistribution::gaussian();
  spec.seed = seed;
  return sample_selfdual(spec);
}

// Characteristic polynomial of the 2n x 2n embedding (Faddeev-LeVerrier),
// reduced to its exact polynomial square root r with char = r^2, then the
// roots of r by scan-and-bisect with Newton polish. Independent oracle for
// the quaternion eigenvalues at small n.
std::vector<double> charpoly_quaternion_roots(const SelfDualMatrix& m) {
  const ComplexHermitian h = embed_matrix(m);
  const std::size_t dim = h.dim();
  CMatrix a = h.to_matrix();

  std::vector<double> c(dim + 1, 0.0);  // char(x) = sum c_k x^k, monic
  c[dim] = 1.0;
  CMatrix b = a;
  for (std::size_t k = 1; k <= dim; ++k) {
    const double ck = -b.trace().real() / static_cast<double>(k);
    c[dim - k] = ck;
    for (std::size_t i = 0; i < dim; ++i) b(i, i) += ck;
    if (k < dim) b = a * b;
  }

  // char = r^2 with monic r of degree n: match coefficients downward.
  const std::size_t n = dim / 2;
  std::vector<double> r(n + 1, 0.0);
  r[n] = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    double cross = 0.0;
    for (std::size_t i = 1; i < k; ++i) cross += r[n - i] * r[n - (k - i)];
    r[n - k] = 0.5 * (c[dim - k] - cross);
  }

  const auto eval = [&](double x) {
    double v = 0.0;
    for (std::size_t i = n + 1; i-- > 0;) v = v * x + r[i];
    return v;
  };
  const auto deriv = [&](double x) {
    double v = 0.0;
    for (std::size_t i = n + 1; i-- > 1;)
      v = v * x + r[i] * static_cast<double>(i);
    return v;
  };

  const double bound = h.frobenius_norm() + 1.0;
  const int scan = 20000;
  std::vector<double> roots;
  double prev_x = -bound;
  double prev_v = eval(prev_x);
  for (int i = 1; i <= scan; ++i) {
    const double x = -bound + 2.0 * bound * i / scan;
    const double v = eval(x);
    if (prev_v == 0.0) roots.push_back(prev_x);
    if ((prev_v < 0.0) != (v < 0.0) && prev_v != 0.0 && v != 0.0) {
      double lo = prev_x, hi = x;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((eval(lo) < 0.0) != (eval(mid) < 0.0))
          hi = mid;
        else
          lo = mid;
      }
      double root = 0.5 * (lo + hi);
      for (int it = 0; it < 4; ++it) {
        const double d = deriv(root);
        if (d == 0.0) break;
        root -= eval(root) / d;
      }
      roots.push_back(root);
    }
    prev_x = x;
    prev_v = v;
  }
  return roots;
}

struct MonteCarloBundle {
  ExperimentConfig config;
  ExperimentReport report;
};

constexpr std::uint64_t kSeedGoe = 0x5EED0001;
constexpr std::uint64_t kSeedGue = 0x5EED0002;
constexpr std::uint64_t kSeedGse = 0x5EED0003;
constexpr std::uint64_t kSeedGueRetry = 0x5EED1002;
constexpr std::uint64_t kSeedDiscrete = 0x5EED0004;

ExperimentConfig campaign_config(int beta, double sigma2, EntryDistribution dist,
                                 std::uint64_t master_seed, bool quick) {
  ExperimentConfig config;
  config.ensemble.beta = beta;
  config.ensemble.n = quick ? 64 : 128;
  config.ensemble.sigma2 = sigma2;
  config.ensemble.offdiag = dist;
  config.replicates = quick ? 500 : 2000;
  config.master_seed = master_seed;
  config.functions = {TestFunction::monomial(1), TestFunction::monomial(2)};
  return config;
}

const FunctionStats& stats_of(const ExperimentReport& report,
                              const std::string& label) {
  for (const auto& fs : report.functions)
    if (fs.label == label) return fs;
  throw Error("no stats for label " + label);
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            std::ostream* progress) {
  std::vector<CriterionResult> results;
  // Campaign reports shared between criteria 9-13.
  std::optional<MonteCarloBundle> goe, gue, gse, discrete;

  const auto run_criterion = [&](int id, const std::string& name,
                                 double budget_seconds,
                                 const std::function<Check()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Check check;
    try {
      check = body();
    } catch (const std::exception& e) {
      check.ok = false;
      check.note = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (budget_seconds > 0.0 && seconds > budget_seconds && check.ok) {
      check.ok = false;
      check.note = "runtime " + format_seconds(seconds) + " over the budget " +
                   format_seconds(budget_seconds);
    }
    CriterionResult result{id, name, check.ok, check.note, seconds};
    if (result.detail.empty()) {
      std::ostringstream os;
      os << "max error " << check.worst;
      result.detail = os.str();
    }
    if (progress) {
      *progress << "[" << (id < 10 ? " " : "") << id << "/13] "
                << (result.passed ? "PASS" : "FAIL") << "  " << name << "  ("
                << format_seconds(seconds) << ")  " << result.detail << "\n";
      progress->flush();
    }
    results.push_back(std::move(result));
  };

  run_criterion(1, "psi exactness (quadrature vs exact conversion; both integral forms)", 1.0, [&] {
    Check check;
    for (int d = 0; d <= 16; ++d) {
      const TestFunction f = TestFunction::monomial(d);
      const PsiCoefficients exact = psi_exact_poly(f);
      const PsiCoefficients quad = psi(f, 24);  // truncation clear of the degree
      for (int l = 0; l <= 24; ++l)
        check.track(std::fabs(exact.get(static_cast<std::size_t>(l)) -
                              quad.get(static_cast<std::size_t>(l))),
                    1e-12, "psi(x^" + std::to_string(d) + ")");
    }
    const TestFunction e = TestFunction::exponential(0.5);
    const PsiCoefficients angular = psi(e, 64);
    const PsiCoefficients algebraic = psi_chebgauss(e, 64);
    for (int l = 0; l <= 64; ++l)
      check.track(std::fabs(angular.get(static_cast<std::size_t>(l)) -
                            algebraic.get(static_cast<std::size_t>(l))),
                  1e-10, "integral forms on exp(x/2)");
    return check;
  });

  run_criterion(2, "semicircle moments and the psi0 - psi2 identity", 1.0, [&] {
    Check check;
    for (int k = 0; k <= 6; ++k)
      check.track(std::fabs(integral_f(TestFunction::monomial(2 * k)) -
                            semicircle_moment(2 * k)),
                  1e-12, "Catalan moment k=" + std::to_string(k));
    rng::CounterRng gen(0xACCE9702);
    for (std::uint32_t i = 0; i < 10; ++i) {
      TestFunction f = random_poly(gen, i, 8);
      double exact = 0.0;
      for (std::size_t k = 0; k < f.coefficients().size(); ++k)
        exact += f.coefficients()[k] * semicircle_moment(static_cast<int>(k));
      check.track(std::fabs(integral_f(f) - exact), 1e-10, "random polynomial");
    }
    return check;
  });

  run_criterion(3, "Stieltjes transform branch, symmetry, derivative", 1.0, [&] {
    Check check;
    check.track(std::fabs(stieltjes_m(cxd{3.0, 0.0}).m.real() -
                          0.5 * (std::sqrt(5.0) - 3.0)),
                1e-14, "m(3)");
    check.track(std::fabs(stieltjes_m(cxd{3.0, 0.0}).m.imag()), 1e-14, "Im m(3)");
    rng::CounterRng gen(0xACCE9703);
    std::size_t kept = 0;
    for (std::uint32_t i = 0; kept < 1000; ++i) {
      const cxd z{uniform_in(gen, i, 0, 0, -4.0, 4.0),
                  uniform_in(gen, i, 1, 0, -3.0, 3.0)};
      if (distance_to_support(z) < 1e-3) continue;
      ++kept;
      const StieltjesValue sv = stieltjes_m(z);
      check.track(std::abs(sv.m * sv.m + z * sv.m + 1.0), 1e-12, "quadratic");
      check.track(std::abs(stieltjes_m(std::conj(z)).m - std::conj(sv.m)), 1e-12,
                  "conjugate symmetry");
      if (z.imag() > 0.0) check.require(sv.m.imag() > 0.0, "upper half-plane map");
      check.require(std::abs(sv.m) < 1.0, "|m| < 1 off the support");
      if (distance_to_support(z) > 0.5) {
        const double h = 1e-6;
        const cxd fd =
            (stieltjes_m(z + h).m - stieltjes_m(z - h).m) / (2.0 * h);
        check.track(std::abs(fd - sv.m_prime) / std::abs(sv.m_prime), 1e-7,
                    "derivative vs finite difference");
      }
    }
    return check;
  });

  run_criterion(4, "quaternion and general displays agree at beta = 4", 0.0, [&] {
    Check check;
    rng::CounterRng gen(0xACCE9704);
    for (std::uint32_t i = 0; i < 20; ++i) {
      const ModelParams p(4, uniform_in(gen, i, 0, 1, 0.5, 3.0),
                          uniform_in(gen, i, 1, 1, 1.0, 4.0));
      const TestFunction f = random_poly(gen, 100 + i, 6);
      const TestFunction g = random_poly(gen, 200 + i, 6);
      const double m_gen = mean_general_form(f, p);
      const double m_quat = mean_quaternion_form(f, p);
      check.track(std::fabs(m_gen - m_quat), 1e-12 * std::max(1.0, std::fabs(m_gen)),
                  "mean display");
      const double c_gen = cov_series_general_form(f, g, p);
      const double c_quat = cov_series_quaternion_form(f, g, p);
      check.track(std::fabs(c_gen - c_quat), 1e-12 * std::max(1.0, std::fabs(c_gen)),
                  "covariance display");
    }
    return check;
  });

  run_criterion(5, "series / kernel duality", 30.0, [&] {
    Check check;
    const std::vector<TestFunction> fs{
        TestFunction::monomial(1), TestFunction::monomial(2),
        TestFunction::monomial(3), TestFunction::monomial(4)};
    int disagreements = 0;
    double worst_gap_residual = 0.0;
    for (const int beta : {1, 2, 4}) {
      for (const auto& [s2, m4] : std::vector<std::pair<double, double>>{
               {1.0, 2.0}, {2.0, 3.0}}) {
        const ModelParams p(beta, s2, m4);
        for (std::size_t i = 0; i < fs.size(); ++i) {
          for (std::size_t j = i; j < fs.size(); ++j) {
            const double series = cov_series(fs[i], fs[j], p);
            const QuadratureResult quad = cov_kernel_quadrature(fs[i], fs[j], p);
            const double err = std::fabs(series - quad.value);
            check.track(err, 1e-6, "beta=" + std::to_string(beta));
            if (err > 1e-6) {
              // Diagnose: the two printed displays differ by exactly
              // (4/beta - 2) psi_2(f) psi_2(g); the kernel side carries the
              // moment-oracle coefficient 2(M - 1).
              ++disagreements;
              const double gap = (4.0 / beta - 2.0) *
                                 psi_exact_poly(fs[i]).get(2) *
                                 psi_exact_poly(fs[j]).get(2);
              worst_gap_residual = std::max(
                  worst_gap_residual, std::fabs(series + gap - quad.value));
            }
          }
        }
      }
    }
    if (!check.ok) {
      std::ostringstream os;
      os << check.note << "; " << disagreements
         << " combinations disagree, every one by the printed-coefficient gap "
            "(4/beta - 2) psi2(f) psi2(g) [kernel side = moment-oracle "
            "coefficient 2(M-1)]; residual after removing the gap "
         << worst_gap_residual;
      check.note = os.str();
    }
    return check;
  });

  run_criterion(6, "contour bridge to the series mean (beta = 4)", 0.0, [&] {
    Check check;
    for (const auto& [s2, m4] :
         std::vector<std::pair<double, double>>{{1.0, 1.5}, {2.0, 3.0}}) {
      const ModelParams p(4, s2, m4);
      for (int d = 0; d <= 6; ++d) {
        const TestFunction f = TestFunction::monomial(d);
        const double series = mean_g(f, p);
        const double c1 = contour_mean(f, p, 2.5, 1.0);
        const double c2 = contour_mean(f, p, 3.0, 0.5);
        check.track(std::fabs(c1 - series), 1e-8, "contour (2.5, 1)");
        check.track(std::fabs(c2 - series), 1e-8, "contour (3, 0.5)");
        check.track(std::fabs(c1 - c2), 1e-8, "contour invariance");
      }
    }
    return check;
  });

  run_criterion(7, "eigensolver: trace, Kramers pairing, char-poly roots", 30.0, [&] {
    Check check;
    const std::size_t cases = options.quick ? 40 : 100;
    for (std::size_t i = 0; i < cases; ++i) {
      const std::size_t n = 1 + (i % 64);
      const SelfDualMatrix m = random_selfdual(n, 0xE16E0000 + i);
      const ComplexHermitian h = embed_matrix(m);
      const Spectrum full = eigenvalues(h);
      double sum = 0.0;
      for (const double v : full.values) sum += v;
      const double scale = std::max(1.0, h.frobenius_norm());
      check.track(std::fabs(sum - h.trace()) / scale, 1e-9, "trace identity");

      const QuaternionSpectrum qs = quaternion_eigenvalues(m);  // throws on split
      check.track(qs.pairing_gap / scale, 1e-9, "pairing gap");

      if (n <= 3) {
        std::vector<double> roots = charpoly_quaternion_roots(m);
        check.require(roots.size() == qs.values.size(),
                      "char-poly root count at n=" + std::to_string(n));
        if (roots.size() == qs.values.size())
          for (std::size_t k = 0; k < roots.size(); ++k)
            check.track(std::fabs(roots[k] - qs.values[k]), 1e-9,
                        "char-poly agreement");
      }
    }
    return check;
  });

  run_criterion(8, "quadratic-form covariance identity", 60.0, [&] {
    Check check;
    for (std::size_t i = 0; i < 100; ++i) {
      const std::size_t n = 1 + (i % 2);
      const ComplexHermitian a = embed_matrix(random_selfdual(n, 0x4F460000 + i));
      const ComplexHermitian b = embed_matrix(random_selfdual(n, 0x4F468888 + i));
      check.track(std::fabs(qf_cov_enumerate(a, b) - qf_cov_formula(a, b, 1.0)),
                  1e-12, "enumeration vs formula");
    }
    const std::size_t reps = options.quick ? 20000 : 100000;
    const ComplexHermitian a = embed_matrix(random_selfdual(4, 0x4F46AAAA));
    const ComplexHermitian b = embed_matrix(random_selfdual(4, 0x4F46BBBB));
    const MonteCarloEstimate est =
        qf_cov_empirical(a, b, EntryDistribution::gaussian(), reps, 0x4F46CCCC);
    const double target = qf_cov_formula(a, b, 1.5);
    check.track(std::fabs(est.value - target), 3.0 * est.se,
                "gaussian Monte Carlo vs formula");
    return check;
  });

  run_criterion(9, "mean reproduction: E G(x^2) = sigma^2 - 1", 300.0, [&] {
    Check check;
    goe = MonteCarloBundle{campaign_config(1, 2.0, EntryDistribution::gaussian(),
                                           kSeedGoe, options.quick),
                           {}};
    goe->report = run(goe->config, 8);
    gue = MonteCarloBundle{campaign_config(2, 1.0, EntryDistribution::gaussian(),
                                           kSeedGue, options.quick),
                           {}};
    gue->report = run(gue->config, 8);
    gse = MonteCarloBundle{campaign_config(4, 1.0, EntryDistribution::gaussian(),
                                           kSeedGse, options.quick),
                           {}};
    gse->report = run(gse->config, 8);
    for (const auto* bundle : {&*goe, &*gue, &*gse}) {
      const auto& fs = stats_of(bundle->report, "poly:0,0,1");
      const double target = bundle->report.sigma2 - 1.0;
      check.track(std::fabs(fs.emp_mean - target), 3.0 * fs.se_mean,
                  "beta=" + std::to_string(bundle->report.beta));
    }
    return check;
  });

  run_criterion(10, "variance adjudication against the moment oracle", 0.0, [&] {
    Check check;
    check.require(goe && gue && gse, "criterion 9 campaigns unavailable");
    if (!check.ok) return check;
    for (const auto* bundle : {&*goe, &*gue, &*gse}) {
      const auto& x2 = stats_of(bundle->report, "poly:0,0,1");
      const auto& x1 = stats_of(bundle->report, "poly:0,1");
      const std::string tag = "beta=" + std::to_string(bundle->report.beta);
      check.track(std::fabs(x2.emp_var - x2.oracle_var), 3.0 * x2.se_var,
                  tag + " Var G(x^2) vs oracle");
      check.track(std::fabs(x1.emp_var - x1.oracle_var), 3.0 * x1.se_var,
                  tag + " Var G(x) vs sigma^2");
      const ErrataReport& errata = bundle->report.errata;
      if (bundle->report.beta == 2) {
        check.require(!errata.flag, "GUE printed coefficient must agree");
        check.track(std::fabs(x2.emp_var - errata.printed_value), 3.0 * x2.se_var,
                    "GUE printed value");
      } else {
        check.require(errata.flag,
                      tag + " errata must flag the printed coefficient");
      }
    }
    return check;
  });

  run_criterion(11, "Gaussianity of G(x^2) for the GUE campaign", 0.0, [&] {
    Check check;
    check.require(gue.has_value(), "criterion 9 campaigns unavailable");
    if (!check.ok) return check;
    const auto& fs = stats_of(gue->report, "poly:0,0,1");
    if (fs.ks_p > 0.01) {
      check.worst = fs.ks_p;
      return check;
    }
    ExperimentConfig retry = gue->config;
    retry.master_seed = kSeedGueRetry;
    const ExperimentReport second = run(retry, 8);
    const auto& fs2 = stats_of(second, "poly:0,0,1");
    check.worst = std::max(fs.ks_p, fs2.ks_p);
    check.require(fs2.ks_p > 0.01, "KS p <= 0.01 under both fixed seeds");
    return check;
  });

  run_criterion(12, "fourth-moment sensitivity of Var G(x^2)", 0.0, [&] {
    Check check;
    check.require(gse.has_value(), "criterion 9 campaigns unavailable");
    if (!check.ok) return check;
    discrete = MonteCarloBundle{
        campaign_config(4, 1.0, EntryDistribution::discrete_phase(),
                        kSeedDiscrete, options.quick),
        {}};
    discrete->report = run(discrete->config, 8);
    const auto& bounded = stats_of(discrete->report, "poly:0,0,1");
    const auto& gauss = stats_of(gse->report, "poly:0,0,1");
    const double diff = bounded.emp_var - gauss.emp_var;
    const double se = std::hypot(bounded.se_var, gauss.se_var);
    check.track(std::fabs(diff - (-1.0)), 3.0 * se, "variance difference vs -1");
    return check;
  });

  run_criterion(13, "thread-count determinism of emitted reports", 0.0, [&] {
    Check check;
    check.require(goe && gue && gse, "criterion 9 campaigns unavailable");
    if (!check.ok) return check;
    for (const auto* bundle : {&*goe, &*gue, &*gse}) {
      const ExperimentReport single = run(bundle->config, 1);
      check.require(to_json(single) == to_json(bundle->report),
                    "beta=" + std::to_string(bundle->report.beta) +
                        " 1-thread vs 8-thread JSON differ");
    }
    return check;
  });

  return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.passed) return false;
  return true;
}

}  // namespace wigner
