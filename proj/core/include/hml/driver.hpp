#pragma once

#include "hml/real.hpp"

#include <string>
#include <vector>

namespace hml {

enum class Command {
  Eigen,
  Weights,
  TraceCheck,
  BesselCheck,
  VoronoiCheck,
  Moments,
  Discrepancy,
  OffdiagCheck,
  Accept,
};

enum class DeltaRule { X23K13, X12K35, Explicit };
enum class OutputFormat { Csv, Json };

struct RunConfig {
  Command command = Command::Moments;
  std::vector<long> k_list;
  long x_count = 3;
  DeltaRule delta_rule = DeltaRule::X12K35;
  double delta_explicit = 0.0;
  long prec_bits = 128;
  double epsilon = 0.001;
  std::string cache_dir;  // HML_CACHE_DIR fallback handled by the CLI layer
  std::string output;     // empty = stdout
  OutputFormat format = OutputFormat::Csv;
  long jobs = 1;
  long n_max = 10000;
  long series_cutoff = 100000;
  long c_max = -1;

  void validate() const;
};

// Exit status: 0 all asserted tolerances pass, 2 tolerance failure,
// 1 operational error (thrown as exceptions; the CLI maps them).
int run(const RunConfig& config);

// The default x grid: x_j = k^2/(8 pi^2) (1 + j/sqrt(2)), j = 0..count-1.
std::vector<double> default_x_grid(long k, long count);
double delta_for(DeltaRule rule, double x, long k, double epsilon, double explicit_value);

// Shortest round-trip decimal of a double.
std::string format_double(double v);
// Hex float of the double-rounded value.
std::string format_double_hex(double v);

// Rows are (already formatted) cells; writers are deterministic.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
std::string render_table(const Table& t, OutputFormat format);
void write_output(const std::string& path, const std::string& content);

}  // namespace hml
