#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wigner/clt.hpp"
#include "wigner/ensembles.hpp"
#include "wigner/test_function.hpp"

namespace wigner {

/// One Monte Carlo campaign: an ensemble, a list of test functions, a
/// replicate count, and a master seed. Replicate r draws its matrix from
/// replicate_seed(master_seed, r); the seed inside `ensemble` is ignored.
struct ExperimentConfig {
  EnsembleSpec ensemble;
  std::vector<TestFunction> functions;
  std::size_t replicates = 2000;
  std::uint64_t master_seed = 0;
  bool attach_series = true;
  bool attach_kernel = true;
  bool attach_oracle = true;

  void validate() const;
};

/// Centered linear spectral statistic sum_j f(lambda_j) - n Int f dF.
double lss(std::span<const double> eigenvalues, const TestFunction& f);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

/// One-sample Kolmogorov-Smirnov against Normal(mu, var); p-value from the
/// asymptotic Kolmogorov series 2 sum_k (-1)^{k-1} exp(-2 k^2 x^2) truncated
/// at 1e-10. Requires var > 0 and at least 50 samples.
KsResult ks_test(std::vector<double> samples, double mu, double var);

/// Per-function slice of a report. Absent predictions are NaN (emitted as
/// null / empty fields).
struct FunctionStats {
  std::string label;
  double emp_mean = 0.0;
  double se_mean = 0.0;
  double emp_var = 0.0;
  double se_var = 0.0;
  double pred_mean = 0.0;
  double pred_var_series = 0.0;
  double pred_var_kernel = 0.0;
  double oracle_var = 0.0;
  double z_mean = 0.0;
  double z_var = 0.0;
  double ks_stat = 0.0;
  double ks_p = 0.0;
};

/// Immutable result of run(). Contains only deterministic quantities (no
/// wall-clock metadata), so identical configs give byte-identical emissions
/// regardless of thread count; timing is reported on the side by the CLI.
struct ExperimentReport {
  std::string schema = "wigner-clt-report/1";
  // config echo
  int beta = 2;
  std::size_t n = 0;
  std::size_t replicates = 0;
  std::uint64_t master_seed = 0;
  double sigma2 = 1.0;
  double m4 = 1.0;
  std::string dist;
  std::vector<std::string> function_labels;

  std::vector<FunctionStats> functions;
  std::vector<std::vector<double>> empirical_covariance;
  ErrataReport errata{};
};

/// Runs `replicates` independent draws, evaluates every test function's LSS
/// per replicate, and aggregates in replicate-index order with compensated
/// sums. threads = 0 picks the hardware concurrency; the report does not
/// depend on the choice.
ExperimentReport run(const ExperimentConfig& config, unsigned threads = 0);

std::string to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const std::string& text);
std::string to_csv(const ExperimentReport& report);

/// Writes the report to `path` as "json" or "csv". I/O failures surface as
/// Error mentioning the path.
void emit(const ExperimentReport& report, const std::string& format,
          const std::string& path);

}  // namespace wigner
