#pragma once

#include <string>
#include <vector>

namespace hml {

struct AcceptanceOptions {
  std::string cache_dir = "cache";
  long jobs = 1;
  std::string output;  // summary table destination; empty = stdout only
  int format = 0;      // 0 csv, 1 json
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

// Runs all acceptance criteria, printing one pass/fail line per criterion
// as it completes, and writes the summary table when output is set.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

}  // namespace hml
