// Command-line front end: run one benchmark, sweep a period series, verify a
// root list against exact power sums, or recover missing roots.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <span>

#include "allroots/allroots.hpp"

namespace {

using namespace allroots;

void add_family_options(CLI::App* cmd, RunConfig& cfg, bool withPeriod = true) {
  cmd->add_option("--family", cfg.family, "Family: mandelbrot, per2, or peri")
      ->check(CLI::IsMember({"mandelbrot", "per2", "peri"}));
  if (withPeriod) cmd->add_option("--period", cfg.period, "Recursion depth n");
  cmd->add_option("--precision", cfg.precision, "Scalar tier: double or extended")
      ->check(CLI::IsMember({"double", "extended"}));
  cmd->add_option("--eps-stop", cfg.eps_stop, "Convergence displacement threshold");
  cmd->add_option("--eps-root", cfg.eps_root, "Root dedup distance");
  cmd->add_option("--eps-cycle", cfg.eps_cycle, "Cycle detection distance");
}

void add_run_options(CLI::App* cmd, RunConfig& cfg) {
  add_family_options(cmd, cfg);
  cmd->add_option("--n0", cfg.n0, "Seed orbit count");
  cmd->add_option("--threshold", cfg.threshold,
                  "Refinement deformation threshold (family default when unset)");
  cmd->add_option("--radius-factor", cfg.radius_factor, "Start radius / root bound");
  cmd->add_option("--phase", cfg.phase, "Seed angular offset in spacing units");
  cmd->add_option("--max-gen", cfg.max_generation,
                  "Refinement generation cap (derived when negative)");
  cmd->add_option("--max-iter-factor", cfg.max_iter_factor, "Per-orbit budget / degree");
  cmd->add_option("--threads", cfg.threads, "Worker threads for the advance phase");
  cmd->add_option("--verify-m", cfg.verify_m, "Power sums checked after the run");
  cmd->add_option("--out", cfg.out_csv, "Benchmark CSV to append to");
  cmd->add_option("--roots-out", cfg.roots_out, "Root list output path");
  cmd->add_option("--report", cfg.report_csv, "Verification report CSV path");
  cmd->add_option("--trace", cfg.trace_path, "Orbit trace output path");
  cmd->add_option("--trace-every", cfg.trace_every, "Trace sampling interval in sweeps");
}

int report_run(const RunStats& stats, const RunConfig& cfg) {
  std::printf("%s n=%d: degree %lld, %lld distinct roots, %lld iterations, %.3f s\n",
              cfg.family.c_str(), stats.period, (long long)stats.degree,
              (long long)stats.distinct_roots, (long long)stats.iterations, stats.seconds);
  std::printf("  iter/d %.2f  iter/(d ln d) %.3f  iter/(d ln^2 d) %.3f\n", stats.iter_per_d,
              stats.iter_per_dlnd, stats.iter_per_dln2d);
  std::printf("  cycles %lld  exhausted %lld  refinements %lld\n", (long long)stats.cycles,
              (long long)stats.exhausted, (long long)stats.refinements);
  return stats.distinct_roots == stats.degree ? 0 : 1;
}

template <class Real>
int do_verify(const RunConfig& cfg, const std::string& rootsPath, int m,
              const std::string& outCsv) {
  const PolyFamily fam = family_by_name(cfg.family, cfg.period);
  const auto records = read_roots_file<Real>(rootsPath);
  std::vector<Cx<Real>> pts;
  pts.reserve(records.size());
  for (const auto& r : records) pts.push_back(r.z);
  const int mm = int(std::min<std::int64_t>(m, fam.degree));
  const PowerSumReport<Real> rep = verify_roots(fam, std::span<const Cx<Real>>(pts), mm);
  std::printf("%s n=%d: %zu roots (deficit %lld), %d power sums\n", cfg.family.c_str(),
              cfg.period, pts.size(), (long long)rep.count_deficit, rep.m);
  for (int k = 1; k <= rep.m; ++k)
    std::printf("  k=%-2d residual %.3Le\n", k, (long double)rep.residuals[std::size_t(k - 1)]);
  std::printf("  max residual %.3Le  delta %.3Le\n", (long double)rep.max_residual(),
              (long double)rep.delta_estimate);
  if (rep.max_residual() > Real(1e-3))
    std::printf("  FLAGGED: residuals far above noise; wrong family/period or missing roots\n");
  if (!outCsv.empty()) write_report_csv_file(outCsv, rep);
  return 0;
}

RecoverMethod method_by_name(const std::string& name) {
  if (name == "deflate") return RecoverMethod::ImplicitDeflation;
  if (name == "aberth") return RecoverMethod::EhrlichAberth;
  if (name == "identities") return RecoverMethod::NewtonIdentities;
  throw CLI::ValidationError("--method", "expected deflate, aberth, or identities");
}

template <class Real>
int do_recover(const RunConfig& cfg, const std::string& rootsPath, const std::string& sumsPath,
               int m, const std::string& methodName, const std::string& outCsv,
               const std::string& recoveredOut, const std::string& sumsOut) {
  const PolyFamily fam = family_by_name(cfg.family, cfg.period);
  EngineConfig<Real> ecfg;
  if (cfg.eps_stop > 0) ecfg.eps_stop = Real(cfg.eps_stop);
  ecfg.eps_cycle = cfg.eps_cycle > 0 ? Real(cfg.eps_cycle) : Real(1000) * ecfg.eps_stop;
  const Real epsRoot = cfg.eps_root > 0 ? Real(cfg.eps_root) : default_eps_root<Real>();

  if (!sumsPath.empty()) {
    // Reconstruction from power sums alone: no root list, so no re-verify.
    if (methodName != "identities")
      throw CLI::ValidationError("--sums", "sum-only input requires --method identities");
    const std::vector<Cx<Real>> b = read_sums_file<Real>(sumsPath);
    if (m > 0 && m != int(b.size()))
      throw CLI::ValidationError("--m", "sum count does not match --m");
    const DensePoly<Real> q = coefficients_from_power_sums(std::span<const Cx<Real>>(b));
    DenseSolveResult<Real> sol = solve_dense(q, ecfg.eps_stop);
    for (Cx<Real>& z : sol.roots) z = polish_root(fam, z, ecfg);
    std::printf("recovered %zu roots from %zu sums%s\n", sol.roots.size(), b.size(),
                sol.converged ? "" : " (dense solve hit the sweep cap)");
    for (const Cx<Real>& z : sol.roots)
      std::printf("  %.16Le %.16Le\n", (long double)z.real(), (long double)z.imag());
    return sol.converged ? 0 : 1;
  }

  MissingRootJob<Real> job;
  job.fam = fam;
  job.m = m;
  job.method = method_by_name(methodName);
  const auto records = read_roots_file<Real>(rootsPath);
  job.found.reserve(records.size());
  for (const auto& r : records) job.found.push_back(r.z);

  const RecoverResult<Real> res = recover_missing(job, ecfg, epsRoot);
  std::printf("%s n=%d: recovered %zu of %d missing roots via %s%s\n", cfg.family.c_str(),
              cfg.period, res.roots.size(), m, to_string(job.method),
              res.complete ? "" : " (INCOMPLETE)");
  for (std::size_t i = 0; i < res.roots.size(); ++i)
    std::printf("  %.16Le %.16Le   nearest-other %.3Le\n", (long double)res.roots[i].real(),
                (long double)res.roots[i].imag(), (long double)res.condition[i]);
  std::printf("  re-verified over %d sums: max residual %.3Le  delta %.3Le\n", res.report.m,
              (long double)res.report.max_residual(), (long double)res.report.delta_estimate);
  if (!outCsv.empty()) write_report_csv_file(outCsv, res.report);
  if (!recoveredOut.empty()) {
    std::ofstream os(recoveredOut);
    if (!os) throw std::runtime_error("cannot open for writing: " + recoveredOut);
    for (const Cx<Real>& z : res.roots)
      os << detail::format_real(z.real()) << ' ' << detail::format_real(z.imag()) << " 0 1\n";
  }
  if (!sumsOut.empty()) {
    const std::vector<GaussianInt> c = top_coefficients(fam, std::max(1, 2 * m - 1));
    const std::vector<GaussianInt> a =
        power_sums_from_coefficients(std::span<const GaussianInt>(c).subspan(1));
    const std::vector<Cx<Real>> b =
        missing_power_sums<Real>(a, std::span<const Cx<Real>>(job.found));
    std::ofstream os(sumsOut);
    if (!os) throw std::runtime_error("cannot open for writing: " + sumsOut);
    write_sums(os, std::span<const Cx<Real>>(b));
  }
  return res.complete ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"All-roots engine for recursively defined polynomial families"};
  app.set_config("--config", "", "Read options from a key=value file");
  app.require_subcommand(1);

  RunConfig cfg;

  CLI::App* runCmd = app.add_subcommand("run", "Run one period and report");
  add_run_options(runCmd, cfg);

  int seriesFrom = 10, seriesTo = 14;
  CLI::App* seriesCmd = app.add_subcommand("series", "Run consecutive periods");
  add_run_options(seriesCmd, cfg);
  seriesCmd->add_option("--from", seriesFrom, "First period")->required();
  seriesCmd->add_option("--to", seriesTo, "Last period")->required();

  std::string rootsPath, sumsPath, outCsv, recoveredOut, sumsOut, methodName = "identities";
  int mMissing = 0, verifyM = 19;

  CLI::App* verifyCmd = app.add_subcommand("verify", "Verify a root list via power sums");
  add_family_options(verifyCmd, cfg);
  verifyCmd->add_option("--roots", rootsPath, "Root list file")->required();
  verifyCmd->add_option("--m", verifyM, "Number of power sums");
  verifyCmd->add_option("--out", outCsv, "Report CSV path");

  CLI::App* recoverCmd = app.add_subcommand("recover", "Recover missing roots");
  add_family_options(recoverCmd, cfg);
  recoverCmd->add_option("--roots", rootsPath, "Found-roots file");
  recoverCmd->add_option("--sums", sumsPath, "Missing power sums file (identities only)");
  recoverCmd->add_option("--m", mMissing, "Missing root count")->required();
  recoverCmd->add_option("--method", methodName, "deflate, aberth, or identities")
      ->check(CLI::IsMember({"deflate", "aberth", "identities"}));
  recoverCmd->add_option("--out", outCsv, "Re-verification report CSV path");
  recoverCmd->add_option("--recovered-out", recoveredOut, "Recovered roots output path");
  recoverCmd->add_option("--sums-out", sumsOut, "Write the missing power sums");

  CLI11_PARSE(app, argc, argv);

  try {
    if (runCmd->parsed()) {
      const RunStats stats = run_experiment(cfg);
      return report_run(stats, cfg);
    }
    if (seriesCmd->parsed()) {
      const std::vector<RunStats> rows = run_series(cfg, seriesFrom, seriesTo);
      for (const RunStats& s : rows)
        std::printf("n=%d: %lld/%lld roots, %lld iterations, %.3f s\n", s.period,
                    (long long)s.distinct_roots, (long long)s.degree, (long long)s.iterations,
                    s.seconds);
      const bool aborted = rows.empty() || rows.back().distinct_roots != rows.back().degree ||
                           rows.size() != std::size_t(seriesTo - seriesFrom + 1);
      if (aborted) std::printf("series aborted early; partial CSV kept\n");
      return aborted ? 1 : 0;
    }
    if (verifyCmd->parsed()) {
      return cfg.precision == "double"
                 ? do_verify<double>(cfg, rootsPath, verifyM, outCsv)
                 : do_verify<long double>(cfg, rootsPath, verifyM, outCsv);
    }
    if (recoverCmd->parsed()) {
      if (rootsPath.empty() && sumsPath.empty())
        throw CLI::ValidationError("recover", "need --roots or --sums");
      return cfg.precision == "double"
                 ? do_recover<double>(cfg, rootsPath, sumsPath, mMissing, methodName, outCsv,
                                      recoveredOut, sumsOut)
                 : do_recover<long double>(cfg, rootsPath, sumsPath, mMissing, methodName,
                                           outCsv, recoveredOut, sumsOut);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
