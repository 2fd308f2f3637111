// Command-line front end: psi coefficients, closed-form predictions,
// Monte Carlo simulation, kernel tabulation, and the acceptance suite.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wigner/acceptance.hpp"
#include "wigner/chebyshev.hpp"
#include "wigner/clt.hpp"
#include "wigner/ensembles.hpp"
#include "wigner/errors.hpp"
#include "wigner/experiment.hpp"

namespace {

using nlohmann::ordered_json;

std::vector<wigner::TestFunction> parse_functions(const std::string& list) {
  std::vector<wigner::TestFunction> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    // Specs are comma separated, but "poly:..." carries commas itself, so
    // split only on commas that start a new "name:" token.
    std::size_t next = list.size();
    for (std::size_t i = pos; i < list.size(); ++i) {
      if (list[i] != ',') continue;
      const std::size_t colon = list.find(':', i + 1);
      const std::size_t comma = list.find(',', i + 1);
      if (colon != std::string::npos && (comma == std::string::npos || colon < comma)) {
        next = i;
        break;
      }
    }
    const std::string spec = list.substr(pos, next - pos);
    if (!spec.empty()) out.push_back(wigner::TestFunction::parse(spec));
    if (next >= list.size()) break;
    pos = next + 1;
  }
  if (out.empty()) throw wigner::DomainError("no test functions given");
  return out;
}

double default_sigma2(int beta) { return beta == 1 ? 2.0 : 1.0; }

int cmd_psi(const std::string& function, int lmax, bool as_json) {
  const auto f = wigner::TestFunction::parse(function);
  const auto coeffs = wigner::compute_psi(f, lmax);
  if (as_json) {
    ordered_json j;
    j["function"] = f.label();
    j["lmax"] = lmax;
    j["psi"] = coeffs.values;
    j["tail_estimate"] = coeffs.tail_estimate;
    std::cout << j.dump(2) << "\n";
  } else {
    for (std::size_t l = 0; l < coeffs.values.size(); ++l)
      std::printf("psi[%zu] = %.17g\n", l, coeffs.values[l]);
    std::printf("tail_estimate = %.3g\n", coeffs.tail_estimate);
  }
  return 0;
}

int cmd_predict(int beta, double sigma2, double m4, const std::string& functions,
                const std::string& form, bool as_json) {
  const wigner::ModelParams params(beta, sigma2, m4);
  const auto fs = parse_functions(functions);
  std::vector<wigner::Prediction> predictions;
  if (form == "series" || form == "both")
    predictions.push_back(wigner::predict(fs, params, "series"));
  if (form == "kernel" || form == "both")
    predictions.push_back(wigner::predict(fs, params, "kernel"));
  if (predictions.empty())
    throw wigner::DomainError("--form must be series, kernel, or both");
  const auto errata = wigner::errata_report(params);

  if (as_json) {
    ordered_json j;
    j["beta"] = beta;
    j["sigma2"] = sigma2;
    j["m4"] = m4;
    for (const auto& p : predictions) {
      ordered_json block;
      block["labels"] = p.labels;
      block["means"] = p.means;
      block["covariance"] = p.covariance;
      j[p.form] = block;
    }
    j["errata"] = {{"printed_value", errata.printed_value},
                   {"oracle_value", errata.oracle_value},
                   {"flag", errata.flag}};
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  for (const auto& p : predictions) {
    std::printf("form: %s\n", p.form.c_str());
    for (std::size_t i = 0; i < p.labels.size(); ++i)
      std::printf("  mean[%s] = %.12g\n", p.labels[i].c_str(), p.means[i]);
    std::printf("  covariance:\n");
    for (const auto& row : p.covariance) {
      std::printf("   ");
      for (const double v : row) std::printf(" %12.6g", v);
      std::printf("\n");
    }
  }
  std::printf(
      "errata (f = g = x^2): printed %.12g, moment oracle %.12g%s\n",
      errata.printed_value, errata.oracle_value,
      errata.flag ? "  [DISAGREE]" : "");
  return 0;
}

int cmd_simulate(int beta, std::size_t n, std::size_t reps, const std::string& dist,
                 double sigma2, std::uint64_t seed, const std::string& functions,
                 const std::string& out, const std::string& format,
                 unsigned threads) {
  wigner::ExperimentConfig config;
  config.ensemble.beta = beta;
  config.ensemble.n = n;
  config.ensemble.sigma2 = sigma2;
  config.ensemble.offdiag = wigner::EntryDistribution::parse(dist);
  config.replicates = reps;
  config.master_seed = seed;
  config.functions = parse_functions(functions);

  const auto start = std::chrono::steady_clock::now();
  const auto report = wigner::run(config, threads);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  wigner::emit(report, format, out);
  std::fprintf(stderr, "simulate: %zu replicates in %.1f s -> %s\n",
               reps, seconds, out.c_str());
  return 0;
}

int cmd_kernel(int beta, double sigma2, double m4, int grid,
               const std::string& out) {
  if (grid < 2) throw wigner::DomainError("kernel: grid must be at least 2");
  const wigner::ModelParams params(beta, sigma2, m4);
  std::ofstream file(out, std::ios::binary);
  if (!file) throw wigner::Error("kernel: cannot open '" + out + "' for writing");
  const auto node = [&](int i) {
    return -2.0 + 4.0 * static_cast<double>(i) / (grid - 1);
  };
  file << "t\\s";
  for (int j = 0; j < grid; ++j) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", node(j));
    file << ',' << buf;
  }
  file << '\n';
  for (int i = 0; i < grid; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", node(i));
    file << buf;
    for (int j = 0; j < grid; ++j) {
      file << ',';
      if (std::fabs(node(i) - node(j)) < 1e-12) continue;  // diagonal: empty
      std::snprintf(buf, sizeof(buf), "%.12g",
                    wigner::kernel_v(node(i), node(j), params));
      file << buf;
    }
    file << '\n';
  }
  if (!file) throw wigner::Error("kernel: write to '" + out + "' failed");
  return 0;
}

int cmd_verify(bool quick) {
  wigner::AcceptanceOptions options;
  options.quick = quick;
  const auto results = wigner::run_acceptance(options, &std::cout);
  return wigner::all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wigner beta-ensemble simulator and fluctuation predictions"};
  app.require_subcommand(1);

  std::string function, functions, dist = "gaussian", out, form = "series",
              format = "json";
  int beta = 2, lmax = 64, grid = 64;
  double sigma2 = -1.0, m4 = -1.0;
  std::size_t n = 128, reps = 2000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool as_json = false, quick = false;

  auto* psi = app.add_subcommand("psi", "print psi_0 .. psi_L of a test function");
  psi->add_option("--function", function, "test function spec")->required();
  psi->add_option("--lmax", lmax, "truncation order")->check(CLI::NonNegativeNumber);
  psi->add_flag("--json", as_json, "JSON output");

  auto* predict = app.add_subcommand("predict", "closed-form mean and covariance");
  predict->add_option("--beta", beta, "Dyson index")->required()->check(CLI::IsMember({1, 2, 4}));
  predict->add_option("--sigma2", sigma2, "diagonal second moment");
  predict->add_option("--m4", m4, "fourth norm moment of off-diagonal entries");
  predict->add_option("--functions", functions, "comma-separated function specs")->required();
  predict->add_option("--form", form, "series | kernel | both")
      ->check(CLI::IsMember({"series", "kernel", "both"}));
  predict->add_flag("--json", as_json, "JSON output");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo fluctuation study");
  simulate->add_option("--beta", beta, "Dyson index")->required()->check(CLI::IsMember({1, 2, 4}));
  simulate->add_option("--n", n, "matrix dimension")->check(CLI::PositiveNumber);
  simulate->add_option("--reps", reps, "replicates")->check(CLI::PositiveNumber);
  simulate->add_option("--dist", dist, "gaussian | discrete-phase | rademacher | radial:M=v");
  simulate->add_option("--sigma2", sigma2, "diagonal second moment");
  simulate->add_option("--seed", seed, "master seed");
  simulate->add_option("--functions", functions, "comma-separated function specs")->required();
  simulate->add_option("--out", out, "output path")->required();
  simulate->add_option("--format", format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  simulate->add_option("--threads", threads, "worker threads (0 = auto)");

  auto* kernel = app.add_subcommand("kernel", "tabulate the covariance kernel V(t, s)");
  kernel->add_option("--beta", beta, "Dyson index")->required()->check(CLI::IsMember({1, 2, 4}));
  kernel->add_option("--sigma2", sigma2, "diagonal second moment");
  kernel->add_option("--m4", m4, "fourth norm moment");
  kernel->add_option("--grid", grid, "grid points per axis")->check(CLI::PositiveNumber);
  kernel->add_option("--out", out, "output CSV path")->required();

  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_flag("--quick", quick, "reduced Monte Carlo sizes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sigma2 < 0.0) sigma2 = default_sigma2(beta);
    if (m4 < 0.0)
      m4 = wigner::EntryDistribution::parse(dist).fourth_moment(beta);
    if (psi->parsed()) return cmd_psi(function, lmax, as_json);
    if (predict->parsed())
      return cmd_predict(beta, sigma2, m4, functions, form, as_json);
    if (simulate->parsed())
      return cmd_simulate(beta, n, reps, dist, sigma2, seed, functions, out,
                          format, threads);
    if (kernel->parsed()) return cmd_kernel(beta, sigma2, m4, grid, out);
    if (verify->parsed()) return cmd_verify(quick);
  } catch (const wigner::DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
