#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "io.hpp"
#include "orbit_ring.hpp"
#include "recover.hpp"

namespace allroots {

/// @brief Full configuration of one benchmark run, CLI-shaped: negative
/// tolerance fields mean "tier default", a negative threshold means the
/// family default.
struct RunConfig {
  std::string family = "peri";  // mandelbrot | per2 | peri
  int period = 12;
  int n0 = 64;
  double threshold = -1;
  double radius_factor = 2.0;
  double phase = 0.0;
  int max_generation = -1;
  double eps_stop = -1;
  double eps_root = -1;
  double eps_cycle = -1;
  double high_precision_threshold = 1e-13;
  double max_iter_factor = 10.0;
  int threads = 1;
  std::string precision = "extended";  // double | extended
  int verify_m = 19;
  std::int64_t trace_every = 0;
  std::string trace_path;
  std::string out_csv;
  std::string roots_out;
  std::string report_csv;
};

inline PolyFamily family_by_name(const std::string& name, int period) {
  if (name == "mandelbrot") return PolyFamily::mandelbrot_centers(period);
  if (name == "per2") return PolyFamily::per2(period);
  if (name == "peri") return PolyFamily::peri(period);
  throw std::invalid_argument("unknown family '" + name +
                              "' (expected mandelbrot, per2, or peri)");
}

/// @brief Family default refinement threshold: the center family needs the
/// far tighter trigger.
inline double default_threshold(const std::string& family) {
  return family == "mandelbrot" ? 0.0005 : 0.05;
}

/// @brief One CSV row of the benchmark schema.
struct RunStats {
  int period{0};
  std::int64_t degree{0};
  double seconds{0};
  std::int64_t iterations{0};
  double iter_per_d{0};
  double iter_per_dlnd{0};
  double iter_per_dln2d{0};
  double us_per_dln2d{0};
  double us_per_dln3d{0};
  std::int64_t cycles{0};
  std::int64_t exhausted{0};
  std::int64_t distinct_roots{0};
  std::int64_t refinements{0};
};

inline constexpr const char* kStatsCsvHeader =
    "period,degree,seconds,iterations,iter_per_d,iter_per_dlnd,iter_per_dln2d,"
    "us_per_dln2d,us_per_dln3d,cycles,exhausted,distinct_roots,refinements";

inline RunStats make_stats(int period, std::int64_t degree, const RunStatsCore& core) {
  RunStats s;
  s.period = period;
  s.degree = degree;
  s.seconds = core.wall_seconds;
  s.iterations = core.total_iterations;
  const double d = double(degree);
  const double ln = std::log(d);
  s.iter_per_d = double(core.total_iterations) / d;
  s.iter_per_dlnd = double(core.total_iterations) / (d * ln);
  s.iter_per_dln2d = double(core.total_iterations) / (d * ln * ln);
  s.us_per_dln2d = core.wall_seconds * 1e6 / (d * ln * ln);
  s.us_per_dln3d = core.wall_seconds * 1e6 / (d * ln * ln * ln);
  s.cycles = core.cycle_trapped;
  s.exhausted = core.exhausted;
  s.distinct_roots = core.distinct_roots;
  s.refinements = core.refinements;
  return s;
}

namespace detail {

inline std::string format_stat(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace detail

inline std::string stats_csv_row(const RunStats& s) {
  std::string row;
  row += std::to_string(s.period);
  row += ',';
  row += std::to_string(s.degree);
  row += ',';
  row += detail::format_stat(s.seconds);
  row += ',';
  row += std::to_string(s.iterations);
  for (double v : {s.iter_per_d, s.iter_per_dlnd, s.iter_per_dln2d, s.us_per_dln2d,
                   s.us_per_dln3d}) {
    row += ',';
    row += detail::format_stat(v);
  }
  for (std::int64_t v : {s.cycles, s.exhausted, s.distinct_roots, s.refinements}) {
    row += ',';
    row += std::to_string(v);
  }
  return row;
}

/// @brief Append one row, writing the header first when the file is new or
/// empty.
inline void append_stats_csv(const std::string& path, const RunStats& s) {
  bool needHeader = true;
  {
    std::ifstream probe(path);
    if (probe) {
      std::string first;
      if (std::getline(probe, first) && !first.empty()) needHeader = false;
    }
  }
  std::ofstream os(path, std::ios::app);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  if (needHeader) os << kStatsCsvHeader << '\n';
  os << stats_csv_row(s) << '\n';
}

template <class Real>
struct ExperimentOutput {
  RunResult<Real> run;
  PowerSumReport<Real> report;
  CertifyResult certify;
  RunStats stats;
};

/// @brief Execute one run in memory: drive the ring, verify the roots
/// against the exact power sums, and certify disjoint inclusion disks. All
/// file output stays with the caller.
template <class Real>
inline ExperimentOutput<Real> execute_run(const RunConfig& cfg,
                                          typename OrbitRing<Real>::TraceFn trace = nullptr) {
  const PolyFamily fam = family_by_name(cfg.family, cfg.period);

  EngineConfig<Real> ecfg;
  if (cfg.eps_stop > 0) ecfg.eps_stop = Real(cfg.eps_stop);
  ecfg.eps_cycle = cfg.eps_cycle > 0 ? Real(cfg.eps_cycle) : Real(1000) * ecfg.eps_stop;
  ecfg.high_precision_threshold = Real(cfg.high_precision_threshold);
  ecfg.max_iter_factor = cfg.max_iter_factor;

  RingConfig<Real> rcfg;
  rcfg.n0 = cfg.n0;
  rcfg.refinement_threshold =
      Real(cfg.threshold > 0 ? cfg.threshold : default_threshold(cfg.family));
  rcfg.radius_factor = cfg.radius_factor;
  rcfg.phase = cfg.phase;
  rcfg.max_generation = cfg.max_generation;

  const Real epsRoot = cfg.eps_root > 0 ? Real(cfg.eps_root) : default_eps_root<Real>();

  ExperimentOutput<Real> out{
      run(fam, ecfg, rcfg, epsRoot, cfg.threads, std::move(trace), cfg.trace_every), {}, {}, {}};
  const std::vector<Cx<Real>> pts = out.run.roots.points();
  const int m = int(std::min<std::int64_t>(cfg.verify_m, fam.degree));
  out.report = verify_roots(fam, std::span<const Cx<Real>>(pts), m);
  out.certify = certify_disjoint(out.run.roots, fam.degree);
  out.stats = make_stats(cfg.period, fam.degree, out.run.stats);
  return out;
}

namespace detail {

template <class Real>
inline RunStats run_experiment_impl(const RunConfig& cfg) {
  std::shared_ptr<std::ofstream> traceFile;
  typename OrbitRing<Real>::TraceFn traceFn;
  if (!cfg.trace_path.empty() && cfg.trace_every > 0) {
    traceFile = std::make_shared<std::ofstream>(cfg.trace_path);
    if (!*traceFile) throw std::runtime_error("cannot open for writing: " + cfg.trace_path);
    traceFn = [traceFile](std::int64_t sweep, std::uint32_t id, const Cx<Real>& z) {
      *traceFile << sweep << ' ' << id << ' ' << format_real(z.real()) << ' '
                 << format_real(z.imag()) << '\n';
    };
  }
  ExperimentOutput<Real> out = execute_run<Real>(cfg, std::move(traceFn));
  if (!cfg.roots_out.empty()) write_roots_file(cfg.roots_out, out.run.roots);
  if (!cfg.report_csv.empty()) write_report_csv_file(cfg.report_csv, out.report);
  if (!cfg.out_csv.empty()) append_stats_csv(cfg.out_csv, out.stats);
  return out.stats;
}

}  // namespace detail

/// @brief Run one configured experiment with file outputs, dispatching on the
/// precision tier.
inline RunStats run_experiment(const RunConfig& cfg) {
  if (cfg.precision == "double") return detail::run_experiment_impl<double>(cfg);
  if (cfg.precision == "extended") return detail::run_experiment_impl<long double>(cfg);
  throw std::invalid_argument("unknown precision '" + cfg.precision +
                              "' (expected double or extended)");
}

/// @brief Substitute "{n}" in per-run output paths; otherwise tag the period
/// before the extension so series runs never clobber each other.
inline std::string per_period_path(const std::string& pattern, int period) {
  if (pattern.empty()) return pattern;
  const std::size_t at = pattern.find("{n}");
  if (at != std::string::npos)
    return pattern.substr(0, at) + std::to_string(period) + pattern.substr(at + 3);
  const std::size_t dot = pattern.rfind('.');
  const std::string tag = "-n" + std::to_string(period);
  if (dot == std::string::npos || dot == 0) return pattern + tag;
  return pattern.substr(0, dot) + tag + pattern.substr(dot);
}

/// @brief Run consecutive periods, appending one CSV row each. Stops early
/// when a period misses roots; the partial row set is returned either way.
inline std::vector<RunStats> run_series(RunConfig cfg, int from, int to) {
  if (from > to) throw std::invalid_argument("series: need from <= to");
  std::vector<RunStats> rows;
  const RunConfig base = cfg;
  for (int n = from; n <= to; ++n) {
    cfg = base;
    cfg.period = n;
    cfg.roots_out = per_period_path(base.roots_out, n);
    cfg.report_csv = per_period_path(base.report_csv, n);
    cfg.trace_path = per_period_path(base.trace_path, n);
    rows.push_back(run_experiment(cfg));
    if (rows.back().distinct_roots != rows.back().degree) break;
  }
  return rows;
}

}  // namespace allroots
