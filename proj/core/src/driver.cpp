#include "hml/driver.hpp"

#include "hml/accept.hpp"
#include "hml/bessel.hpp"
#include "hml/cache.hpp"
#include "hml/equidist.hpp"
#include "hml/moments.hpp"
#include "hml/numeric.hpp"
#include "hml/offdiag.hpp"
#include "hml/voronoi.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <thread>

namespace hml {

using nlohmann::json;

void RunConfig::validate() const {
  for (long k : k_list)
    if (k < 12 || k % 2 != 0)
      throw std::invalid_argument("RunConfig: k_list entries must be even and >= 12");
  if (prec_bits < 64) throw std::invalid_argument("RunConfig: prec_bits >= 64");
  if (jobs < 1) throw std::invalid_argument("RunConfig: jobs >= 1");
  if (delta_rule == DeltaRule::Explicit && delta_explicit <= 0.0)
    throw std::invalid_argument("RunConfig: explicit delta rule needs a positive value");
}

std::vector<double> default_x_grid(long k, long count) {
  std::vector<double> xs;
  double base = (double)k * (double)k / (8.0 * M_PI * M_PI);
  for (long j = 0; j < count; ++j) xs.push_back(base * (1.0 + (double)j / std::sqrt(2.0)));
  return xs;
}

double delta_for(DeltaRule rule, double x, long k, double epsilon, double explicit_value) {
  switch (rule) {
    case DeltaRule::X23K13:
      return std::pow(x, 2.0 / 3.0) * std::pow((double)k, 1.0 / 3.0 - epsilon);
    case DeltaRule::X12K35:
      return std::sqrt(x) * std::pow((double)k, 3.0 / 5.0);
    case DeltaRule::Explicit:
      return explicit_value;
  }
  return explicit_value;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_double_hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return std::string(buf);
}

std::string render_table(const Table& t, OutputFormat format) {
  std::string out;
  if (format == OutputFormat::Csv) {
    for (size_t i = 0; i < t.header.size(); ++i) {
      if (i) out += ",";
      out += t.header[i];
    }
    out += "\n";
    for (const auto& row : t.rows) {
      for (size_t i = 0; i < row.size(); ++i) {
        if (i) out += ",";
        out += row[i];
      }
      out += "\n";
    }
  } else {
    json arr = json::array();
    for (const auto& row : t.rows) {
      json obj = json::object();
      for (size_t i = 0; i < row.size() && i < t.header.size(); ++i)
        obj[t.header[i]] = row[i];
      arr.push_back(obj);
    }
    out = arr.dump(2);
    out += "\n";
  }
  return out;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << content;
}

namespace {

int run_eigen(const RunConfig& cfg) {
  Table t;
  t.header = {"k", "dim", "n_max", "prec_bits", "c_max", "sum_weights"};
  for (long k : cfg.k_list) {
    HarmonicBasis b = cache_get_or_build(cfg.cache_dir, k, cfg.n_max, Precision(cfg.prec_bits),
                                         cfg.c_max);
    t.rows.push_back({std::to_string(k), std::to_string(b.dim()), std::to_string(cfg.n_max),
                      std::to_string(cfg.prec_bits), std::to_string(b.c_max),
                      format_double(harmonic_one(b).to_double())});
  }
  write_output(cfg.output, render_table(t, cfg.format));
  return 0;
}

int run_weights(const RunConfig& cfg) {
  Table t;
  t.header = {"k", "index", "lambda2", "omega", "omega_hex"};
  for (long k : cfg.k_list) {
    HarmonicBasis b = cache_get_or_build(cfg.cache_dir, k, std::max(cfg.n_max, 16L),
                                         Precision(cfg.prec_bits), cfg.c_max);
    for (long j = 0; j < b.dim(); ++j)
      t.rows.push_back({std::to_string(k), std::to_string(j),
                        format_double(b.forms[(size_t)j].lambda[2].to_double()),
                        format_double(b.weights[(size_t)j].to_double()),
                        b.weights[(size_t)j].hex()});
  }
  write_output(cfg.output, render_table(t, cfg.format));
  return 0;
}

int run_trace_check(const RunConfig& cfg) {
  Table t;
  t.header = {"k", "m", "n", "lhs", "rhs", "residual", "tolerance", "pass"};
  bool all_pass = true;
  const std::vector<std::pair<long, long>> pairs = {{2, 3}, {2, 5}, {3, 4}, {2, 2}, {3, 3}};
  for (long k : cfg.k_list) {
    HarmonicBasis b = cache_get_or_build(cfg.cache_dir, k, std::max(cfg.n_max, 16L),
                                         Precision(cfg.prec_bits), cfg.c_max);
    if (b.dim() == 0) continue;
    for (auto [m, n] : pairs) {
      std::vector<Real> vals;
      for (const auto& f : b.forms)
        vals.push_back(f.lambda[(size_t)m] * f.lambda[(size_t)n]);
      Real lhs = harmonic_average(b, vals);
      TraceEval rhs = trace_rhs(m, n, k, default_c_max(m, n, k), Precision(cfg.prec_bits));
      double residual = std::abs((lhs - rhs.value).to_double());
      double tol = 1e-6;
      bool pass = residual <= tol;
      all_pass = all_pass && pass;
      t.rows.push_back({std::to_string(k), std::to_string(m), std::to_string(n),
                        format_double(lhs.to_double()), format_double(rhs.value.to_double()),
                        format_double(residual), format_double(tol), pass ? "1" : "0"});
    }
  }
  write_output(cfg.output, render_table(t, cfg.format));
  return all_pass ? 0 : 2;
}

int run_bessel_check(const RunConfig& cfg) {
  Table t;
  t.header = {"nu", "z", "series", "asymptotic", "diff", "bound", "pass"};
  bool all_pass = true;
  Precision prec(cfg.prec_bits);
  for (double nu : {11.0, 49.0, 99.0, 199.0}) {
    double zlo = nu + std::pow(nu, 0.4), zhi = 3.0 * nu;
    for (int i = 0; i < 30; ++i) {
      double z = zlo + (zhi - zlo) * (double)i / 29.0;
      Real nuR(nu, prec.bits), zR(z, prec.bits);
      Real se = bessel_j_series(nuR, zR, prec);
      AsymptoticJ as = bessel_j_oscillatory(nuR, zR, prec);
      double diff = std::abs((se - as.value).to_double());
      bool pass = diff <= as.error_bound.to_double();
      all_pass = all_pass && pass;
      t.rows.push_back({format_double(nu), format_double(z), format_double(se.to_double()),
                        format_double(as.value.to_double()), format_double(diff),
                        format_double(as.error_bound.to_double()), pass ? "1" : "0"});
    }
  }
  write_output(cfg.output, render_table(t, cfg.format));
  return all_pass ? 0 : 2;
}

int run_voronoi_check(const RunConfig& cfg) {
  Table t;
  t.header = {"k", "x", "delta", "form", "sharp", "transform", "residual", "bound", "pass"};
  bool all_pass = true;
  Precision prec(cfg.prec_bits);
  for (long k : cfg.k_list) {
    for (double x : default_x_grid(k, cfg.x_count)) {
      double delta = delta_for(cfg.delta_rule, x, k, cfg.epsilon, cfg.delta_explicit);
      SmoothingParams p{k, Real(x, prec.bits), Real(delta, prec.bits)};
      long n_cutoff = default_n_cutoff(p);
      long need = (long)std::ceil(2.0 * x);
      HarmonicBasis b = cache_get_or_build(cfg.cache_dir, k,
                                           std::max({need, n_cutoff, cfg.n_max}), prec, cfg.c_max);
      auto table = w_tilde_table(p, n_cutoff, prec, -1.0, cfg.jobs);
      double bound = 10.0 * x * std::log(x) / delta;
      for (long j = 0; j < b.dim(); ++j) {
        Real sharp = sharp_sum(b.forms[(size_t)j], Real(x, prec.bits));
        Real tr = voronoi_transform_with_table(b.forms[(size_t)j], Real(x, prec.bits), table, prec);
        double residual = std::abs((sharp - tr).to_double());
        bool pass = residual <= bound;
        all_pass = all_pass && pass;
        t.rows.push_back({std::to_string(k), format_double(x), format_double(delta),
                          std::to_string(j), format_double(sharp.to_double()),
                          format_double(tr.to_double()), format_double(residual),
                          format_double(bound), pass ? "1" : "0"});
      }
    }
  }
  write_output(cfg.output, render_table(t, cfg.format));
  return all_pass ? 0 : 2;
}

int run_moments(const RunConfig& cfg) {
  if (cfg.k_list.empty()) throw std::invalid_argument("moments: empty k list");
  struct Cell {
    long k;
    double x;
  };
  std::vector<Cell> cells;
  for (long k : cfg.k_list)
    for (double x : default_x_grid(k, cfg.x_count)) cells.push_back({k, x});

  // Warm the caches serially (one heavy build per weight).
  for (long k : cfg.k_list) {
    double xmax = default_x_grid(k, cfg.x_count).back();
    cache_get_or_build(cfg.cache_dir, k, (long)std::ceil(2.0 * xmax) + 1,
                       Precision(cfg.prec_bits), cfg.c_max);
  }

  std::vector<MomentReport> reports(cells.size());
  parallel_for_deterministic((long)cells.size(), cfg.jobs, [&](long i) {
    const Cell& cell = cells[(size_t)i];
    HarmonicBasis b = cache_get_or_build(cfg.cache_dir, cell.k,
                                         (long)std::ceil(2.0 * cell.x) + 1,
                                         Precision(cfg.prec_bits), cfg.c_max);
    double delta = delta_for(cfg.delta_rule, cell.x, cell.k, cfg.epsilon, cfg.delta_explicit);
    reports[(size_t)i] = compute_moment_report(b, Real(cell.x, cfg.prec_bits),
                                               cfg.series_cutoff, delta,
                                               Precision(cfg.prec_bits));
  });

  Table t;
  t.header = {"k", "x", "dim", "first", "first_main", "first_err", "second", "second_main",
              "second_err", "variance", "variance_main", "ratio_x13", "delta_used", "prec_bits",
              "x_hex", "first_hex", "second_hex", "variance_hex"};
  for (const auto& r : reports) {
    t.rows.push_back({std::to_string(r.k), format_double(r.x), std::to_string(r.dim),
                      format_double(r.first), format_double(r.first_main),
                      format_double(r.first_err), format_double(r.second),
                      format_double(r.second_main), format_double(r.second_err),
                      format_double(r.variance), format_double(r.variance_main),
                      format_double(r.ratio_x13), format_double(r.delta_used),
                      std::to_string(r.prec_bits), format_double_hex(r.x),
                      format_double_hex(r.first), format_double_hex(r.second),
                      format_double_hex(r.variance)});
  }
  write_output(cfg.output, render_table(t, cfg.format));
  return 0;
}

int run_discrepancy(const RunConfig& cfg) {
  struct Cell {
    double x;
    double kappa;
  };
  std::vector<Cell> cells;
  for (long k : cfg.k_list)
    for (double x : default_x_grid(k, cfg.x_count)) cells.push_back({x, (double)(k - 1)});

  std::vector<EquidistReport> reports(cells.size());
  parallel_for_deterministic((long)cells.size(), cfg.jobs, [&](long i) {
    reports[(size_t)i] = compute_equidist_report(cfg.n_max, Real(cells[(size_t)i].x, cfg.prec_bits),
                                                 Real(cells[(size_t)i].kappa, cfg.prec_bits), 64,
                                                 Precision(cfg.prec_bits));
  });

  Table t;
  t.header = {"x", "kappa", "N", "z_count", "z_expected", "d_star", "et_bound", "et_R", "p",
              "N_choice", "R_choice", "x_hex", "d_star_hex", "et_bound_hex"};
  for (const auto& r : reports) {
    t.rows.push_back({format_double(r.x), format_double(r.kappa), std::to_string(r.N),
                      std::to_string(r.z_count), format_double(r.z_expected),
                      format_double(r.d_star), format_double(r.et_bound), std::to_string(r.et_R),
                      std::to_string(r.p), std::to_string(r.N_choice), std::to_string(r.R_choice),
                      format_double_hex(r.x), format_double_hex(r.d_star),
                      format_double_hex(r.et_bound)});
  }
  write_output(cfg.output, render_table(t, cfg.format));
  return 0;
}

int run_offdiag_check(const RunConfig& cfg) {
  json records = json::array();
  bool all_pass = true;
  Precision prec(cfg.prec_bits);
  for (long k : cfg.k_list) {
    double x = (double)k * (double)k / 4.0;
    double delta = delta_for(cfg.delta_rule == DeltaRule::Explicit ? DeltaRule::Explicit
                                                                   : DeltaRule::X12K35,
                             x, k, cfg.epsilon, cfg.delta_explicit);
    OffDiagParams p{k, Real(x, prec.bits), Real(delta, prec.bits), 1, 2,
                    Real(1.0, prec.bits), 1, cfg.epsilon};
    Real residual = poisson_check(p, 1, prec);
    bool pass = residual.to_double() <= 1e-6;
    all_pass = all_pass && pass;
    records.push_back(json{{"check", "poisson"},
                           {"params", {{"k", k}, {"x", x}, {"delta", delta}, {"m", 1}, {"c", 2}, {"a", 1}, {"t", 1.0}}},
                           {"lhs", 0.0},
                           {"rhs", 0.0},
                           {"residual", residual.to_double()},
                           {"tolerance", 1e-6},
                           {"pass", pass}});
  }
  write_output(cfg.output, records.dump(2) + "\n");
  return all_pass ? 0 : 2;
}

}  // namespace

int run(const RunConfig& cfg) {
  cfg.validate();
  switch (cfg.command) {
    case Command::Eigen: return run_eigen(cfg);
    case Command::Weights: return run_weights(cfg);
    case Command::TraceCheck: return run_trace_check(cfg);
    case Command::BesselCheck: return run_bessel_check(cfg);
    case Command::VoronoiCheck: return run_voronoi_check(cfg);
    case Command::Moments: return run_moments(cfg);
    case Command::Discrepancy: return run_discrepancy(cfg);
    case Command::OffdiagCheck: return run_offdiag_check(cfg);
    case Command::Accept: {
      AcceptanceOptions opts;
      opts.cache_dir = cfg.cache_dir;
      opts.jobs = cfg.jobs;
      opts.output = cfg.output;
      opts.format = cfg.format == OutputFormat::Csv ? 0 : 1;
      auto results = run_acceptance(opts);
      for (const auto& r : results)
        if (!r.pass) return 2;
      return 0;
    }
  }
  return 1;
}

}  // namespace hml
