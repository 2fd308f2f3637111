#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wigner {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  /// Quick mode shrinks the Monte Carlo sizes (n = 64, R = 500). The
  /// statistical gates stay valid because every tolerance is a multiple of
  /// the run's own standard error.
  bool quick = false;
};

/// Runs the full acceptance suite, one pass/fail line per criterion written
/// to `progress` as results arrive (pass nullptr to silence).
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            std::ostream* progress);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace wigner
