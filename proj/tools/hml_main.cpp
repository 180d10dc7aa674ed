// hml - verification driver for moment asymptotics of sharp-cutoff Hecke
// eigenvalue sums in the large-weight regime. Subcommands cover eigenvalue
// tables, harmonic weights, trace/Bessel/Voronoi checks, moment and
// discrepancy sweeps, off-diagonal checks, and the acceptance suite.

#include "hml/driver.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"hml - moment asymptotics of sharp-cutoff Hecke eigenvalue sums"};
  app.require_subcommand(1);

  hml::RunConfig cfg;
  const char* env_cache = std::getenv("HML_CACHE_DIR");
  cfg.cache_dir = env_cache ? env_cache : "cache";

  std::vector<long> k_list;
  std::string delta_rule = "x12k35";
  std::string format = "csv";
  double delta_explicit = 0.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--k", k_list, "weights k (even, >= 12)")->delimiter(',');
    sub->add_option("--x-count", cfg.x_count, "points per weight on the default x grid");
    sub->add_option("--delta-rule", delta_rule, "x23k13 | x12k35 | explicit");
    sub->add_option("--delta", delta_explicit, "explicit Delta value");
    sub->add_option("--prec-bits", cfg.prec_bits, "working precision (>= 64)");
    sub->add_option("--epsilon", cfg.epsilon, "epsilon in all k^eps factors");
    sub->add_option("--cache-dir", cfg.cache_dir, "eigenvalue cache directory");
    sub->add_option("--out", cfg.output, "output file (default stdout)");
    sub->add_option("--format", format, "csv | json");
    sub->add_option("--jobs", cfg.jobs, "parallel jobs over (k,x) cells");
    sub->add_option("--nmax", cfg.n_max, "eigenvalue table length / discrepancy N");
    sub->add_option("--series-cutoff", cfg.series_cutoff, "Omega-series truncation");
    sub->add_option("--cmax", cfg.c_max, "trace-formula truncation (default: rule)");
  };

  struct SubCmd {
    const char* name;
    const char* help;
    hml::Command command;
  };
  const SubCmd subs[] = {
      {"eigen", "build/load eigenvalue tables", hml::Command::Eigen},
      {"weights", "solve harmonic weights", hml::Command::Weights},
      {"trace-check", "held-out Petersson identity residuals", hml::Command::TraceCheck},
      {"bessel-check", "series vs asymptotic across regimes", hml::Command::BesselCheck},
      {"voronoi-check", "sharp sum vs Voronoi transform residuals", hml::Command::VoronoiCheck},
      {"moments", "first/second moment sweep", hml::Command::Moments},
      {"discrepancy", "equidistribution report", hml::Command::Discrepancy},
      {"offdiag-check", "off-diagonal Poisson checks", hml::Command::OffdiagCheck},
      {"accept", "run the acceptance suite", hml::Command::Accept},
  };
  std::map<std::string, hml::Command> by_name;
  for (const auto& s : subs) {
    add_common(app.add_subcommand(s.name, s.help));
    by_name[s.name] = s.command;
  }

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.command = by_name.at(app.get_subcommands().at(0)->get_name());
    cfg.k_list = k_list;
    cfg.delta_explicit = delta_explicit;
    if (delta_rule == "x23k13") cfg.delta_rule = hml::DeltaRule::X23K13;
    else if (delta_rule == "x12k35") cfg.delta_rule = hml::DeltaRule::X12K35;
    else if (delta_rule == "explicit") cfg.delta_rule = hml::DeltaRule::Explicit;
    else throw std::invalid_argument("unknown delta rule " + delta_rule);
    if (format == "csv") cfg.format = hml::OutputFormat::Csv;
    else if (format == "json") cfg.format = hml::OutputFormat::Json;
    else throw std::invalid_argument("unknown format " + format);

    bool needs_k = cfg.command != hml::Command::Accept &&
                   cfg.command != hml::Command::BesselCheck;
    if (needs_k && cfg.k_list.empty()) {
      std::cerr << "usage: provide at least one weight via --k (even, >= 12)\n";
      return 1;
    }
    return hml::run(cfg);
  } catch (const std::exception& e) {
    std::cerr << "hml: " << e.what() << "\n";
    return 1;
  }
}
