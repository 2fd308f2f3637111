#include "wigner/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <thread>

#include <json.hpp>

#include "wigner/errors.hpp"
#include "wigner/semicircle.hpp"

namespace wigner {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

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

double finite_ratio(double diff, double se) {
  if (se > 0.0) return diff / se;
  if (diff == 0.0) return 0.0;
  return std::copysign(std::numeric_limits<double>::max(), diff);
}

double normal_cdf(double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); }

/// Detects the monomials x and x^2, the two functions the quadratic-trace
/// oracle covers.
int monomial_degree_or_minus1(const TestFunction& f) {
  if (!f.is_polynomial()) return -1;
  const auto& c = f.coefficients();
  if (c.size() == 2 && c[0] == 0.0 && c[1] == 1.0) return 1;
  if (c.size() == 3 && c[0] == 0.0 && c[1] == 0.0 && c[2] == 1.0) return 2;
  return -1;
}

}  // namespace

void ExperimentConfig::validate() const {
  ensemble.validate();
  if (replicates < 2) throw DomainError("ExperimentConfig: need at least 2 replicates");
  if (functions.empty()) throw DomainError("ExperimentConfig: no test functions");
}

double lss(std::span<const double> eigenvalues, const TestFunction& f) {
  Kahan acc;
  for (const double lambda : eigenvalues) acc.add(f(lambda));
  return acc.sum - static_cast<double>(eigenvalues.size()) * integral_f(f);
}

KsResult ks_test(std::vector<double> samples, double mu, double var) {
  if (!(var > 0.0)) throw DomainError("ks_test: variance must be positive");
  if (samples.size() < 50) throw DomainError("ks_test: need at least 50 samples");
  std::sort(samples.begin(), samples.end());

  const double count = static_cast<double>(samples.size());
  const double sd = std::sqrt(var);
  double stat = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = normal_cdf((samples[i] - mu) / sd);
    stat = std::max(stat, (static_cast<double>(i) + 1.0) / count - cdf);
    stat = std::max(stat, cdf - static_cast<double>(i) / count);
  }

  const double x = std::sqrt(count) * stat;
  double p = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100000; ++k) {
    const double term = 2.0 * std::exp(-2.0 * x * x * k * k);
    if (term < 1e-10) break;
    p += sign * term;
    sign = -sign;
  }
  p = std::min(1.0, std::max(0.0, p));
  return {stat, p};
}

ExperimentReport run(const ExperimentConfig& config, unsigned threads) {
  config.validate();
  const std::size_t reps = config.replicates;
  const std::size_t nfun = config.functions.size();
  const ModelParams params(config.ensemble.beta, config.ensemble.sigma2,
                           config.ensemble.offdiag.fourth_moment(config.ensemble.beta));

  // Predictions are shared across replicates; compute them up front.
  std::vector<double> integrals(nfun), pred_mean(nfun), pred_var_series(nfun, kNaN),
      pred_var_kernel(nfun, kNaN), oracle_var(nfun, kNaN);
  const QuadraticCovOracle oracle = oracle_cov_quadratic(params);
  for (std::size_t fi = 0; fi < nfun; ++fi) {
    const TestFunction& f = config.functions[fi];
    integrals[fi] = integral_f(f);
    pred_mean[fi] = mean_g(f, params);
    if (config.attach_series) pred_var_series[fi] = cov_series(f, f, params);
    if (config.attach_kernel)
      pred_var_kernel[fi] = cov_kernel_quadrature(f, f, params).value;
    if (config.attach_oracle) {
      const int degree = monomial_degree_or_minus1(f);
      if (degree == 1) oracle_var[fi] = oracle.var_x;
      if (degree == 2) oracle_var[fi] = oracle.var_x2;
    }
  }

  // Replicate work: any thread may compute any replicate; the value only
  // depends on (master_seed, r).
  std::vector<double> values(reps * nfun);
  std::vector<std::string> failures(reps);
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= reps) return;
      try {
        EnsembleSpec spec = config.ensemble;
        spec.seed = rng::replicate_seed(config.master_seed, r);
        const std::vector<double> eigs = sample_spectrum(spec);
        for (std::size_t fi = 0; fi < nfun; ++fi) {
          Kahan acc;
          for (const double lambda : eigs) acc.add(config.functions[fi](lambda));
          values[r * nfun + fi] =
              acc.sum - static_cast<double>(eigs.size()) * integrals[fi];
        }
      } catch (const std::exception& e) {
        failures[r] = e.what();
      }
    }
  };

  unsigned nthreads = threads != 0 ? threads : std::thread::hardware_concurrency();
  nthreads = std::max(1u, std::min<unsigned>(nthreads, static_cast<unsigned>(reps)));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (std::size_t r = 0; r < reps; ++r)
    if (!failures[r].empty())
      throw Error("replicate " + std::to_string(r) + ": " + failures[r]);

  // Aggregation in replicate-index order, compensated.
  ExperimentReport report;
  report.beta = config.ensemble.beta;
  report.n = config.ensemble.n;
  report.replicates = reps;
  report.master_seed = config.master_seed;
  report.sigma2 = config.ensemble.sigma2;
  report.m4 = params.m4;
  report.dist = config.ensemble.offdiag.label();
  report.errata = errata_report(params);

  const double r_count = static_cast<double>(reps);
  std::vector<double> means(nfun), vars(nfun);
  for (std::size_t fi = 0; fi < nfun; ++fi) {
    Kahan sum;
    for (std::size_t r = 0; r < reps; ++r) sum.add(values[r * nfun + fi]);
    means[fi] = sum.sum / r_count;
    Kahan sq;
    for (std::size_t r = 0; r < reps; ++r) {
      const double d = values[r * nfun + fi] - means[fi];
      sq.add(d * d);
    }
    vars[fi] = sq.sum / (r_count - 1.0);
  }

  report.empirical_covariance.assign(nfun, std::vector<double>(nfun, 0.0));
  for (std::size_t fi = 0; fi < nfun; ++fi) {
    for (std::size_t fj = fi; fj < nfun; ++fj) {
      Kahan acc;
      for (std::size_t r = 0; r < reps; ++r)
        acc.add((values[r * nfun + fi] - means[fi]) *
                (values[r * nfun + fj] - means[fj]));
      const double cov = acc.sum / (r_count - 1.0);
      report.empirical_covariance[fi][fj] = cov;
      report.empirical_covariance[fj][fi] = cov;
    }
  }

  for (std::size_t fi = 0; fi < nfun; ++fi) {
    FunctionStats fs;
    fs.label = config.functions[fi].label();
    report.function_labels.push_back(fs.label);
    fs.emp_mean = means[fi];
    fs.emp_var = vars[fi];
    fs.se_mean = std::sqrt(vars[fi] / r_count);
    fs.se_var = vars[fi] * std::sqrt(2.0 / (r_count - 1.0));  // approximate
    fs.pred_mean = pred_mean[fi];
    fs.pred_var_series = pred_var_series[fi];
    fs.pred_var_kernel = pred_var_kernel[fi];
    fs.oracle_var = oracle_var[fi];
    fs.z_mean = finite_ratio(fs.emp_mean - fs.pred_mean, fs.se_mean);

    // Variance reference: the oracle adjudicates when it applies, the
    // printed series otherwise.
    double ref_var = kNaN;
    if (!std::isnan(fs.oracle_var))
      ref_var = fs.oracle_var;
    else if (!std::isnan(fs.pred_var_series))
      ref_var = fs.pred_var_series;
    fs.z_var = std::isnan(ref_var) ? 0.0
                                   : finite_ratio(fs.emp_var - ref_var, fs.se_var);

    fs.ks_stat = kNaN;
    fs.ks_p = kNaN;
    if (!std::isnan(ref_var) && ref_var > 0.0 && reps >= 50) {
      std::vector<double> column(reps);
      for (std::size_t r = 0; r < reps; ++r) column[r] = values[r * nfun + fi];
      const KsResult ks = ks_test(std::move(column), fs.pred_mean, ref_var);
      fs.ks_stat = ks.statistic;
      fs.ks_p = ks.p_value;
    }
    report.functions.push_back(std::move(fs));
  }
  return report;
}

namespace {

using json = nlohmann::ordered_json;

json number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

double from_number_or_null(const json& j) {
  if (j.is_null()) return kNaN;
  return j.get<double>();
}

}  // namespace

std::string to_json(const ExperimentReport& report) {
  json j;
  j["schema"] = report.schema;
  j["config"] = {{"beta", report.beta},
                 {"n", report.n},
                 {"replicates", report.replicates},
                 {"master_seed", report.master_seed},
                 {"sigma2", report.sigma2},
                 {"m4", report.m4},
                 {"dist", report.dist},
                 {"functions", report.function_labels}};
  j["functions"] = json::array();
  for (const auto& fs : report.functions) {
    j["functions"].push_back({{"label", fs.label},
                              {"emp_mean", fs.emp_mean},
                              {"se_mean", fs.se_mean},
                              {"emp_var", fs.emp_var},
                              {"se_var", fs.se_var},
                              {"pred_mean", number_or_null(fs.pred_mean)},
                              {"pred_var_series", number_or_null(fs.pred_var_series)},
                              {"pred_var_kernel", number_or_null(fs.pred_var_kernel)},
                              {"oracle_var", number_or_null(fs.oracle_var)},
                              {"z_mean", fs.z_mean},
                              {"z_var", fs.z_var},
                              {"ks_stat", number_or_null(fs.ks_stat)},
                              {"ks_p", number_or_null(fs.ks_p)}});
  }
  j["empirical_covariance"] = report.empirical_covariance;
  j["errata"] = {{"beta", report.errata.beta},
                 {"m4", report.errata.m4},
                 {"printed_value", report.errata.printed_value},
                 {"oracle_value", report.errata.oracle_value},
                 {"difference", report.errata.difference},
                 {"flag", report.errata.flag}};
  return j.dump(2) + "\n";
}

ExperimentReport report_from_json(const std::string& text) {
  const json j = json::parse(text);
  ExperimentReport report;
  report.schema = j.at("schema").get<std::string>();
  const json& cfg = j.at("config");
  report.beta = cfg.at("beta").get<int>();
  report.n = cfg.at("n").get<std::size_t>();
  report.replicates = cfg.at("replicates").get<std::size_t>();
  report.master_seed = cfg.at("master_seed").get<std::uint64_t>();
  report.sigma2 = cfg.at("sigma2").get<double>();
  report.m4 = cfg.at("m4").get<double>();
  report.dist = cfg.at("dist").get<std::string>();
  report.function_labels = cfg.at("functions").get<std::vector<std::string>>();
  for (const json& f : j.at("functions")) {
    FunctionStats fs;
    fs.label = f.at("label").get<std::string>();
    fs.emp_mean = f.at("emp_mean").get<double>();
    fs.se_mean = f.at("se_mean").get<double>();
    fs.emp_var = f.at("emp_var").get<double>();
    fs.se_var = f.at("se_var").get<double>();
    fs.pred_mean = from_number_or_null(f.at("pred_mean"));
    fs.pred_var_series = from_number_or_null(f.at("pred_var_series"));
    fs.pred_var_kernel = from_number_or_null(f.at("pred_var_kernel"));
    fs.oracle_var = from_number_or_null(f.at("oracle_var"));
    fs.z_mean = f.at("z_mean").get<double>();
    fs.z_var = f.at("z_var").get<double>();
    fs.ks_stat = from_number_or_null(f.at("ks_stat"));
    fs.ks_p = from_number_or_null(f.at("ks_p"));
    report.functions.push_back(std::move(fs));
  }
  report.empirical_covariance =
      j.at("empirical_covariance").get<std::vector<std::vector<double>>>();
  const json& err = j.at("errata");
  report.errata = {err.at("beta").get<int>(),          err.at("m4").get<double>(),
                   err.at("printed_value").get<double>(), err.at("oracle_value").get<double>(),
                   err.at("difference").get<double>(),  err.at("flag").get<bool>()};
  return report;
}

namespace {

std::string csv_field(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string to_csv(const ExperimentReport& report) {
  std::string out =
      "label,emp_mean,se_mean,emp_var,se_var,pred_mean,pred_var_series,"
      "pred_var_kernel,oracle_var,z_mean,z_var,ks_stat,ks_p\n";
  for (const auto& fs : report.functions) {
    out += fs.label + ',' + csv_field(fs.emp_mean) + ',' + csv_field(fs.se_mean) +
           ',' + csv_field(fs.emp_var) + ',' + csv_field(fs.se_var) + ',' +
           csv_field(fs.pred_mean) + ',' + csv_field(fs.pred_var_series) + ',' +
           csv_field(fs.pred_var_kernel) + ',' + csv_field(fs.oracle_var) + ',' +
           csv_field(fs.z_mean) + ',' + csv_field(fs.z_var) + ',' +
           csv_field(fs.ks_stat) + ',' + csv_field(fs.ks_p) + '\n';
  }
  return out;
}

void emit(const ExperimentReport& report, const std::string& format,
          const std::string& path) {
  std::string payload;
  if (format == "json")
    payload = to_json(report);
  else if (format == "csv")
    payload = to_csv(report);
  else
    throw DomainError("emit: format must be 'json' or 'csv'");

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("emit: cannot open '" + path + "' for writing");
  out << payload;
  out.flush();
  if (!out) throw Error("emit: write to '" + path + "' failed");
}

}  // namespace wigner
