#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bergman {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // key=value pairs, 17 significant digits
};

struct AcceptanceReport {
  std::vector<CriterionResult> criteria;
  bool all_pass = false;
  std::string csv;  // summary table, byte-compared across runs
};

/// One full pass over criteria 1-13.
AcceptanceReport run_acceptance_once();

/// Runs the suite twice (the second pass feeds the determinism criterion),
/// prints one pass/fail line per criterion to `log`, writes
/// <out_dir>/acceptance.csv, and returns 0 iff everything passed.
int run_accept(const std::string& out_dir, bool deterministic, std::ostream& log);

}  // namespace bergman
