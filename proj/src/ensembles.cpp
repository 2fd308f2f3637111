#include "wigner/ensembles.hpp"

#include <cmath>
#include <string>
#include <tuple>

#include "wigner/errors.hpp"

namespace wigner {

namespace rng {

namespace {
constexpr std::uint32_t kPhiloxW32A = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW32B = 0xBB67AE85u;
constexpr std::uint32_t kPhiloxM4x32A = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM4x32B = 0xCD9E8D57u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo,
                      std::uint32_t& hi) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(product);
  hi = static_cast<std::uint32_t>(product >> 32);
}
}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t lo0, hi0, lo1, hi1;
    mul_hi_lo(kPhiloxM4x32A, counter[0], lo0, hi0);
    mul_hi_lo(kPhiloxM4x32B, counter[2], lo1, hi1);
    counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
    key[0] += kPhiloxW32A;
    key[1] += kPhiloxW32B;
  }
  return counter;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t replicate_seed(std::uint64_t master_seed, std::uint64_t r) {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(r + 0x51DE5EEDull));
}

CounterRng::CounterRng(std::uint64_t seed) {
  const std::uint64_t mixed = splitmix64(seed);
  key_ = {static_cast<std::uint32_t>(mixed),
          static_cast<std::uint32_t>(mixed >> 32)};
}

std::array<std::uint32_t, 4> CounterRng::block(std::uint32_t i, std::uint32_t j,
                                               std::uint32_t slot) const {
  return philox4x32({i, j, slot, 0x57433031u}, key_);
}

double CounterRng::uniform(std::uint32_t i, std::uint32_t j,
                           std::uint32_t slot) const {
  const auto b = block(i, j, slot);
  const std::uint64_t bits =
      (static_cast<std::uint64_t>(b[0]) << 32) | static_cast<std::uint64_t>(b[1]);
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::pair<double, double> CounterRng::normal_pair(std::uint32_t i, std::uint32_t j,
                                                  std::uint32_t slot) const {
  const auto b = block(i, j, slot);
  const std::uint64_t bits1 =
      (static_cast<std::uint64_t>(b[0]) << 32) | static_cast<std::uint64_t>(b[1]);
  const std::uint64_t bits2 =
      (static_cast<std::uint64_t>(b[2]) << 32) | static_cast<std::uint64_t>(b[3]);
  const double u1 = 1.0 - static_cast<double>(bits1 >> 11) * 0x1.0p-53;  // (0, 1]
  const double u2 = static_cast<double>(bits2 >> 11) * 0x1.0p-53;       // [0, 1)
  const double radius = std::sqrt(-2.0 * std::log(u1));
  return {radius * std::cos(2.0 * M_PI * u2), radius * std::sin(2.0 * M_PI * u2)};
}

}  // namespace rng

namespace {

using rng::CounterRng;

double radial_radius(const CounterRng& gen, std::uint32_t i, std::uint32_t j,
                     double m_target) {
  // Two-point law for r^2 with E r^2 = 1 and E r^4 = m_target.
  const double u = gen.uniform(i, j, 16);
  double r2;
  if (m_target <= 2.0) {
    const double delta = std::sqrt(m_target - 1.0);
    r2 = (u < 0.5) ? 1.0 - delta : 1.0 + delta;
  } else {
    r2 = (u < 1.0 / m_target) ? m_target : 0.0;
  }
  return std::sqrt(r2);
}

double sign_draw(const CounterRng& gen, std::uint32_t i, std::uint32_t j,
                 std::uint32_t slot) {
  return gen.uniform(i, j, slot) < 0.5 ? -1.0 : 1.0;
}

Quaternion draw_quaternion(const CounterRng& gen, std::uint32_t i, std::uint32_t j,
                           const EntryDistribution& dist) {
  switch (dist.kind) {
    case DistKind::Gaussian: {
      const auto [z0, z1] = gen.normal_pair(i, j, 0);
      const auto [z2, z3] = gen.normal_pair(i, j, 1);
      return {0.5 * z0, 0.5 * z1, 0.5 * z2, 0.5 * z3};
    }
    case DistKind::DiscretePhase: {
      const auto b = gen.block(i, j, 0);
      const auto pm = [&](unsigned bit) {
        return (b[0] >> bit) & 1u ? 0.5 : -0.5;
      };
      return {pm(0), pm(1), pm(2), pm(3)};
    }
    case DistKind::TwoPointRadial: {
      // Direction uniform on the unit sphere of the four real coordinates.
      double n0 = 0, n1 = 0, n2 = 0, n3 = 0, norm2 = 0;
      for (std::uint32_t attempt = 0; attempt < 8; ++attempt) {
        std::tie(n0, n1) = gen.normal_pair(i, j, 2 * attempt);
        std::tie(n2, n3) = gen.normal_pair(i, j, 2 * attempt + 1);
        norm2 = n0 * n0 + n1 * n1 + n2 * n2 + n3 * n3;
        if (norm2 > 1e-24) break;
      }
      const double scale =
          radial_radius(gen, i, j, dist.m_target) / std::sqrt(norm2);
      return {scale * n0, scale * n1, scale * n2, scale * n3};
    }
    case DistKind::Rademacher:
      break;
  }
  throw DomainError("entry distribution '" + dist.label() +
                    "' is not a quaternion (beta = 4) distribution");
}

cxd draw_complex(const CounterRng& gen, std::uint32_t i, std::uint32_t j,
                 const EntryDistribution& dist) {
  switch (dist.kind) {
    case DistKind::Gaussian: {
      const auto [z0, z1] = gen.normal_pair(i, j, 0);
      return cxd{z0, z1} / std::sqrt(2.0);
    }
    case DistKind::TwoPointRadial: {
      const double phase = 2.0 * M_PI * gen.uniform(i, j, 0);
      const double r = radial_radius(gen, i, j, dist.m_target);
      return cxd{r * std::cos(phase), r * std::sin(phase)};
    }
    default:
      break;
  }
  throw DomainError("entry distribution '" + dist.label() +
                    "' is not a complex (beta = 2) distribution");
}

double draw_real(const CounterRng& gen, std::uint32_t i, std::uint32_t j,
                 const EntryDistribution& dist) {
  switch (dist.kind) {
    case DistKind::Gaussian:
      return gen.normal_pair(i, j, 0).first;
    case DistKind::Rademacher:
      return sign_draw(gen, i, j, 0);
    case DistKind::TwoPointRadial:
      return sign_draw(gen, i, j, 0) * radial_radius(gen, i, j, dist.m_target);
    default:
      break;
  }
  throw DomainError("entry distribution '" + dist.label() +
                    "' is not a real (beta = 1) distribution");
}

// Unit-variance real diagonal draw; bounded-support entry laws get a
// bounded diagonal as well.
double draw_diagonal(const CounterRng& gen, std::uint32_t j,
                     const EntryDistribution& offdiag) {
  if (offdiag.kind == DistKind::Gaussian)
    return gen.normal_pair(j, j, 0).first;
  return sign_draw(gen, j, j, 0);
}

}  // namespace

EntryDistribution EntryDistribution::gaussian() { return {DistKind::Gaussian, 0.0}; }
EntryDistribution EntryDistribution::discrete_phase() {
  return {DistKind::DiscretePhase, 0.0};
}
EntryDistribution EntryDistribution::rademacher() {
  return {DistKind::Rademacher, 0.0};
}
EntryDistribution EntryDistribution::two_point_radial(double m_target) {
  if (!(m_target >= 1.0))
    throw DomainError("radial distribution requires M >= 1");
  return {DistKind::TwoPointRadial, m_target};
}

EntryDistribution EntryDistribution::parse(std::string_view spec) {
  if (spec == "gaussian") return gaussian();
  if (spec == "discrete-phase") return discrete_phase();
  if (spec == "rademacher") return rademacher();
  constexpr std::string_view prefix = "radial:M=";
  if (spec.substr(0, prefix.size()) == prefix) {
    try {
      return two_point_radial(std::stod(std::string(spec.substr(prefix.size()))));
    } catch (const DomainError&) {
      throw;
    } catch (const std::exception&) {
      throw DomainError("cannot parse radial spec '" + std::string(spec) + "'");
    }
  }
  throw DomainError("unknown distribution spec '" + std::string(spec) + "'");
}

std::string EntryDistribution::label() const {
  switch (kind) {
    case DistKind::Gaussian:
      return "gaussian";
    case DistKind::DiscretePhase:
      return "discrete-phase";
    case DistKind::Rademacher:
      return "rademacher";
    case DistKind::TwoPointRadial: {
      std::string out = "radial:M=" + std::to_string(m_target);
      return out;
    }
  }
  return "?";
}

double EntryDistribution::fourth_moment(int beta) const {
  switch (kind) {
    case DistKind::Gaussian:
      if (beta == 1) return 3.0;
      if (beta == 2) return 2.0;
      return 1.5;
    case DistKind::DiscretePhase:
    case DistKind::Rademacher:
      return 1.0;
    case DistKind::TwoPointRadial:
      return m_target;
  }
  return 1.0;
}

bool EntryDistribution::bounded_support() const {
  return kind != DistKind::Gaussian;
}

void EntryDistribution::validate_for(int beta) const {
  if (kind == DistKind::DiscretePhase && beta != 4)
    throw DomainError("discrete-phase entries are defined for beta = 4 only");
  if (kind == DistKind::Rademacher && beta != 1)
    throw DomainError("rademacher entries are defined for beta = 1 only");
  if (kind == DistKind::Gaussian || kind == DistKind::TwoPointRadial) return;
}

void EnsembleSpec::validate() const {
  if (beta != 1 && beta != 2 && beta != 4)
    throw DomainError("EnsembleSpec: beta must be 1, 2, or 4");
  if (n < 1) throw DomainError("EnsembleSpec: n must be positive");
  if (!(sigma2 > 0.0)) throw DomainError("EnsembleSpec: sigma2 must be positive");
  offdiag.validate_for(beta);
}

SelfDualMatrix sample_selfdual(const EnsembleSpec& spec) {
  spec.validate();
  if (spec.beta != 4)
    throw DomainError("sample_selfdual: spec has beta != 4");
  const CounterRng gen(spec.seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(spec.n));
  const double sigma = std::sqrt(spec.sigma2);

  SelfDualMatrix m(spec.n);
  for (std::uint32_t j = 0; j < spec.n; ++j) {
    m.diagonal(j) = sigma * draw_diagonal(gen, j, spec.offdiag) * scale;
    for (std::uint32_t k = j + 1; k < spec.n; ++k)
      m.upper(j, k) = draw_quaternion(gen, j, k, spec.offdiag) * scale;
  }
  return m;
}

ComplexHermitian sample_hermitian(const EnsembleSpec& spec) {
  spec.validate();
  if (spec.beta != 1 && spec.beta != 2)
    throw DomainError("sample_hermitian: spec has beta not in {1, 2}");
  const CounterRng gen(spec.seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(spec.n));
  const double sigma = std::sqrt(spec.sigma2);

  ComplexHermitian m(spec.n);
  for (std::uint32_t j = 0; j < spec.n; ++j) {
    m.set(j, j, sigma * draw_diagonal(gen, j, spec.offdiag) * scale);
    for (std::uint32_t k = j + 1; k < spec.n; ++k) {
      if (spec.beta == 2)
        m.set(j, k, draw_complex(gen, j, k, spec.offdiag) * scale);
      else
        m.set(j, k, draw_real(gen, j, k, spec.offdiag) * scale);
    }
  }
  return m;
}

std::vector<double> sample_spectrum(const EnsembleSpec& spec) {
  if (spec.beta == 4) return quaternion_eigenvalues(sample_selfdual(spec)).values;
  return eigenvalues(sample_hermitian(spec)).values;
}

namespace {

MomentEstimate estimate(const std::vector<double>& samples) {
  const double r = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= r;
  double var = 0.0;
  for (double v : samples) var += (v - mean) * (v - mean);
  var /= (r - 1.0);
  return {mean, std::sqrt(var / r)};
}

}  // namespace

MomentReport validate_moments(const EntryDistribution& dist, int beta,
                              std::size_t draws, std::uint64_t seed) {
  if (draws < 10000)
    throw DomainError("validate_moments: need at least 1e4 draws");
  dist.validate_for(beta);
  const CounterRng gen(seed);

  std::vector<std::array<double, 4>> comps(draws);
  for (std::uint32_t i = 0; i < draws; ++i) {
    if (beta == 4) {
      const Quaternion q = draw_quaternion(gen, i, 1, dist);
      comps[i] = {q.a, q.b, q.c, q.d};
    } else if (beta == 2) {
      const cxd x = draw_complex(gen, i, 1, dist);
      comps[i] = {x.real(), x.imag(), 0.0, 0.0};
    } else {
      comps[i] = {draw_real(gen, i, 1, dist), 0.0, 0.0, 0.0};
    }
  }

  MomentReport report;
  report.beta = beta;
  report.draws = draws;

  std::vector<double> tmp(draws);
  for (int c = 0; c < 4; ++c) {
    for (std::size_t i = 0; i < draws; ++i) tmp[i] = comps[i][static_cast<std::size_t>(c)];
    report.mean_components[static_cast<std::size_t>(c)] = estimate(tmp);
  }
  std::vector<double> n2(draws), n4(draws);
  for (std::size_t i = 0; i < draws; ++i) {
    const auto& q = comps[i];
    const double s = q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3];
    n2[i] = s;
    n4[i] = s * s;
  }
  report.norm2 = estimate(n2);
  report.norm4 = estimate(n4);

  // Condition-(b) identities on alpha = a + bi, beta = c + di (beta = 4;
  // for beta = 2 the same fields describe E|x|^2 and E x^2).
  std::vector<double> re(draws), im(draws);
  const auto complex_estimate = [&](auto re_f, auto im_f) {
    for (std::size_t i = 0; i < draws; ++i) {
      re[i] = re_f(comps[i]);
      im[i] = im_f(comps[i]);
    }
    const auto er = estimate(re);
    const auto ei = estimate(im);
    return MomentEstimate{std::hypot(er.value, ei.value),
                          std::hypot(er.se, ei.se)};
  };
  using A4 = std::array<double, 4>;
  report.alpha_abs2 = complex_estimate(
      [](const A4& q) { return q[0] * q[0] + q[1] * q[1]; },
      [](const A4&) { return 0.0; });
  report.beta_abs2 = complex_estimate(
      [](const A4& q) { return q[2] * q[2] + q[3] * q[3]; },
      [](const A4&) { return 0.0; });
  report.alpha_sq = complex_estimate(
      [](const A4& q) { return q[0] * q[0] - q[1] * q[1]; },
      [](const A4& q) { return 2.0 * q[0] * q[1]; });
  report.beta_sq = complex_estimate(
      [](const A4& q) { return q[2] * q[2] - q[3] * q[3]; },
      [](const A4& q) { return 2.0 * q[2] * q[3]; });
  report.alpha_beta = complex_estimate(
      [](const A4& q) { return q[0] * q[2] - q[1] * q[3]; },
      [](const A4& q) { return q[0] * q[3] + q[1] * q[2]; });
  report.alpha_beta_conj = complex_estimate(
      [](const A4& q) { return q[0] * q[2] + q[1] * q[3]; },
      [](const A4& q) { return q[1] * q[2] - q[0] * q[3]; });

  // Lindeberg-type tail statistic (1/eta^4) E[ |x|^4 1{|x| >= eta sqrt(n)} ]
  // at eta = 1; identically zero for bounded-support laws once sqrt(n)
  // exceeds the support bound.
  for (const double nn : {1e2, 1e4}) {
    const double threshold = std::sqrt(nn);
    double acc = 0.0;
    for (std::size_t i = 0; i < draws; ++i)
      if (std::sqrt(n2[i]) >= threshold) acc += n4[i];
    report.lindeberg.push_back({nn, 1.0, acc / static_cast<double>(draws)});
  }
  return report;
}

namespace {

using Block = std::array<cxd, 4>;

Block block_of(const ComplexHermitian& h, std::size_t j, std::size_t k) {
  return {h.entry(2 * j, 2 * k), h.entry(2 * j, 2 * k + 1),
          h.entry(2 * j + 1, 2 * k), h.entry(2 * j + 1, 2 * k + 1)};
}

// trace of (x^* P y) for 2x2 blocks: x, y quaternion embeddings, P a block.
cxd trace_sandwich(const Block& x, const Block& p, const Block& y) {
  // (x^* p) then trace((x^* p) y): only the diagonal of the product matters.
  const cxd q00 = std::conj(x[0]) * p[0] + std::conj(x[2]) * p[2];
  const cxd q01 = std::conj(x[0]) * p[1] + std::conj(x[2]) * p[3];
  const cxd q10 = std::conj(x[1]) * p[0] + std::conj(x[3]) * p[2];
  const cxd q11 = std::conj(x[1]) * p[1] + std::conj(x[3]) * p[3];
  return q00 * y[0] + q01 * y[2] + q10 * y[1] + q11 * y[3];
}

double quadratic_trace(const ComplexHermitian& h,
                       const std::vector<Quaternion>& xs) {
  const std::size_t n = xs.size();
  std::vector<Block> embeds(n);
  for (std::size_t j = 0; j < n; ++j) embeds[j] = embed(xs[j]);
  cxd total{};
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      total += trace_sandwich(embeds[j], block_of(h, j, k), embeds[k]);
  return total.real();
}

void check_qf_inputs(const ComplexHermitian& a, const ComplexHermitian& b) {
  if (a.dim() != b.dim())
    throw StructureError("quadratic-form covariance: dimension mismatch");
  if (a.dim() % 2 != 0)
    throw StructureError("quadratic-form covariance: dimension must be even");
  if (!is_type_i(a.to_matrix()) || !is_type_i(b.to_matrix()))
    throw StructureError(
        "quadratic-form covariance identity requires Type-I inputs");
}

}  // namespace

double qf_cov_formula(const ComplexHermitian& a, const ComplexHermitian& b,
                      double m4) {
  check_qf_inputs(a, b);
  const std::size_t n = a.dim() / 2;
  double diag_sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double tra = 2.0 * a.entry(2 * j, 2 * j).real();
    const double trb = 2.0 * b.entry(2 * j, 2 * j).real();
    diag_sum += tra * trb;
  }
  double trab = 0.0;
  for (std::size_t j = 0; j < a.dim(); ++j)
    for (std::size_t k = 0; k < a.dim(); ++k)
      trab += (a.entry(j, k) * b.entry(k, j)).real();
  return (m4 - 1.5) * diag_sum + trab;
}

MonteCarloEstimate qf_cov_empirical(const ComplexHermitian& a,
                                    const ComplexHermitian& b,
                                    const EntryDistribution& dist,
                                    std::size_t reps, std::uint64_t seed) {
  check_qf_inputs(a, b);
  dist.validate_for(4);
  const std::size_t n = a.dim() / 2;
  const double tra = a.trace();
  const double trb = b.trace();
  const CounterRng gen(seed);

  std::vector<double> samples(reps);
  std::vector<Quaternion> xs(n);
  for (std::uint32_t r = 0; r < reps; ++r) {
    for (std::uint32_t j = 0; j < n; ++j)
      xs[j] = draw_quaternion(gen, r, j + 1, dist);
    samples[r] = (quadratic_trace(a, xs) - tra) * (quadratic_trace(b, xs) - trb);
  }
  const MomentEstimate e = estimate(samples);
  return {e.value, e.se};
}

double qf_cov_enumerate(const ComplexHermitian& a, const ComplexHermitian& b) {
  check_qf_inputs(a, b);
  const std::size_t n = a.dim() / 2;
  if (n > 2) throw DomainError("qf_cov_enumerate: n <= 2 only (16^n outcomes)");
  const double tra = a.trace();
  const double trb = b.trace();

  std::vector<Quaternion> xs(n);
  const std::size_t outcomes = n == 1 ? 16 : 256;
  double acc = 0.0;
  for (std::size_t code = 0; code < outcomes; ++code) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t bits = (code >> (4 * j)) & 0xF;
      xs[j] = {(bits & 1) ? 0.5 : -0.5, (bits & 2) ? 0.5 : -0.5,
               (bits & 4) ? 0.5 : -0.5, (bits & 8) ? 0.5 : -0.5};
    }
    acc += (quadratic_trace(a, xs) - tra) * (quadratic_trace(b, xs) - trb);
  }
  return acc / static_cast<double>(outcomes);
}

}  // namespace wigner
