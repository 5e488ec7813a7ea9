#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "optisph/errors.hpp"
#include "optisph/experiments.hpp"
#include "optisph/file_formats.hpp"
#include "optisph/grid_io.hpp"
#include "optisph/oracle.hpp"
#include "optisph/pm_system.hpp"
#include "optisph/transform.hpp"

namespace optisph::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumeric = 1;
constexpr int kExitUsage = 2;

int exit_code(Errc code) {
  switch (code) {
    case Errc::Numeric:
    case Errc::IllConditionedGrid:
    case Errc::IllConditionedSolve:
    case Errc::SingularSystem:
      return kExitNumeric;
    default:
      return kExitUsage;
  }
}

std::string describe(const Error& e) { return std::string(to_string(e.code())) + ": " + e.what(); }

/// Status cell for a failed sweep entry, e.g. `ill-conditioned-solve(m=12)`.
std::string status_of(const Error& e) {
  std::string s = to_string(e.code());
  if (e.order() >= 0) s += "(m=" + std::to_string(e.order()) + ")";
  return s;
}

struct Common {
  std::string cache_dir;
  bool serial = false;
  std::string out_path;

  TransformOptions transform(PeelMode peel = PeelMode::Spatial) const {
    return {serial ? Execution::Serial : Execution::Parallel, peel};
  }
  OptimizeOptions optimize() const { return {serial ? Execution::Serial : Execution::Parallel, false}; }
  GridCache cache() const { return GridCache(cache_dir.empty() ? default_cache_directory() : std::filesystem::path(cache_dir)); }
};

struct GridChoice {
  std::string measure = "uniform";
  std::string ordering = "condmin";
};

void add_grid_choice(CLI::App* cmd, GridChoice& g) {
  cmd->add_option("--measure", g.measure, "Candidate measure")->check(CLI::IsMember({"uniform", "sine", "tan13"}));
  cmd->add_option("--ordering", g.ordering, "Ring ordering")->check(CLI::IsMember({"interleaved", "condmin"}));
}

void emit(const CsvReport& report, const Common& common, std::ostream& out) {
  if (common.out_path.empty()) {
    report.write(out);
  } else {
    write_text(report.str(), common.out_path);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal-dimensionality sphere sampling and spherical harmonic transforms", "optisph"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--cache", common.cache_dir, "Grid cache directory (default $OPTISPH_CACHE or ./.optisph-cache)");
  app.add_flag("--serial", common.serial, "Run the single-threaded kernels");

  // grid
  auto* grid_cmd = app.add_subcommand("grid", "Build (or load from cache) a sampling grid and report kappa");
  int grid_L = 0;
  GridChoice grid_choice;
  std::string grid_out;
  grid_cmd->add_option("-L,--band-limit", grid_L, "Band-limit")->required()->check(CLI::PositiveNumber);
  add_grid_choice(grid_cmd, grid_choice);
  grid_cmd->add_option("-o,--out", grid_out, "Write the grid file here as well");

  // forward / inverse
  auto* fwd_cmd = app.add_subcommand("forward", "Signal file -> coefficient file");
  auto* inv_cmd = app.add_subcommand("inverse", "Coefficient file -> signal file");
  std::string in_path, grid_path, io_out, peel_text = "spatial";
  bool use_oracle = false;
  for (auto* cmd : {fwd_cmd, inv_cmd}) {
    cmd->add_option("input", in_path, cmd == fwd_cmd ? "Signal file" : "Coefficient file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("-g,--grid", grid_path, "Grid file")->required()->check(CLI::ExistingFile);
    cmd->add_option("-o,--out", io_out, "Output file")->required();
    cmd->add_flag("--oracle", use_oracle, "Use the dense O(L^6)/O(L^4) reference instead of the fast transform");
  }
  fwd_cmd->add_option("--peel", peel_text, "Peeling mode")->check(CLI::IsMember({"spatial", "spectral"}));

  // experiments
  std::vector<int> band_limits;
  int trials = 10;
  std::uint64_t seed = 1;
  GridChoice exp_choice;
  bool use_mean = false;
  auto add_sweep = [&](CLI::App* cmd, bool many, int default_trials) {
    auto* opt = cmd->add_option("-L,--band-limit", band_limits, many ? "Band-limits" : "Band-limit")
                    ->required()
                    ->check(CLI::PositiveNumber);
    if (many) opt->delimiter(',');
    else opt->expected(1);
    cmd->add_option("-o,--out", common.out_path, "CSV destination (default stdout)");
    if (default_trials > 0) {
      cmd->add_option("--trials", trials, "Trials per band-limit")->default_val(default_trials);
      cmd->add_option("--seed", seed, "RNG seed")->default_val(1);
    }
  };
  auto* exp1_cmd = app.add_subcommand("exp1", "Experiment 1: coefficients -> samples -> coefficients");
  auto* exp2_cmd = app.add_subcommand("exp2", "Experiment 2: samples -> coefficients -> samples");
  auto* surf_cmd = app.add_subcommand("errsurface", "Per-coefficient error E_l^m of experiment 1");
  auto* cond_cmd = app.add_subcommand("cond", "Condition numbers kappa_m of the order blocks");
  auto* bench_cmd = app.add_subcommand("bench", "Timings tau_I, tau_F, tau_F1");
  add_sweep(exp1_cmd, true, 10);
  add_sweep(exp2_cmd, true, 10);
  add_sweep(surf_cmd, false, 10);
  add_sweep(cond_cmd, true, 0);
  add_sweep(bench_cmd, true, 3);
  for (auto* cmd : {exp1_cmd, exp2_cmd, surf_cmd, cond_cmd, bench_cmd}) add_grid_choice(cmd, exp_choice);
  bench_cmd->add_flag("--mean", use_mean, "Average the trials instead of taking the median");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    auto grid_for = [&](int L, const GridChoice& c) {
      return common.cache().get(L, parse_measure(c.measure), parse_ordering(c.ordering), common.optimize());
    };

    if (grid_cmd->parsed()) {
      auto cache = common.cache();
      const auto grid = cache.get(grid_L, parse_measure(grid_choice.measure), parse_ordering(grid_choice.ordering),
                                  common.optimize());
      if (!grid_out.empty()) save_grid(grid, grid_out);
      const auto kappa = condition_profile(grid);
      const auto it = std::max_element(kappa.begin(), kappa.end());
      out << "L=" << grid_L << " measure=" << grid_choice.measure << " ordering=" << grid_choice.ordering
          << " samples=" << grid.sample_count() << " max_kappa=" << format_double(*it)
          << " argmax_m=" << (it - kappa.begin()) << "\n";
      out << "grid file: " << (grid_out.empty() ? cache.path_for(grid_L, grid.measure(), grid.ordering()).string()
                                                : grid_out)
          << "\n";
      return kExitOk;
    }

    if (fwd_cmd->parsed() || inv_cmd->parsed()) {
      const auto grid = load_grid(grid_path);
      if (fwd_cmd->parsed()) {
        const auto samples = read_samples(in_path);
        if (samples.band_limit() != grid.band_limit())
          throw Error(Errc::BandLimitMismatch, "signal file has L=" + std::to_string(samples.band_limit()) +
                                                   " but grid file has L=" + std::to_string(grid.band_limit()));
        const PeelMode peel = peel_text == "spectral" ? PeelMode::Spectral : PeelMode::Spatial;
        const auto coeffs =
            use_oracle ? oracle::dense_lsq_analysis(samples, grid) : forward_sht(samples, grid, common.transform(peel));
        write_coefficients(coeffs, io_out);
      } else {
        const auto coeffs = read_coefficients(in_path);
        if (coeffs.band_limit() != grid.band_limit())
          throw Error(Errc::BandLimitMismatch, "coefficient file has L=" + std::to_string(coeffs.band_limit()) +
                                                   " but grid file has L=" + std::to_string(grid.band_limit()));
        const auto samples =
            use_oracle ? oracle::direct_synthesis(coeffs, grid) : inverse_sht(coeffs, grid, common.transform());
        write_samples(samples, io_out);
      }
      return kExitOk;
    }

    bool any_failed = false;
    if (exp1_cmd->parsed() || exp2_cmd->parsed()) {
      const bool first = exp1_cmd->parsed();
      CsvReport report(first ? "exp1" : "exp2", seed, {"L", "trials", "E_max", "E_mean", "rel_l2", "status"});
      for (int L : band_limits) {
        ErrorRecord rec{L, trials};
        try {
          const auto grid = grid_for(L, exp_choice);
          rec = first ? run_exp1(grid, trials, seed, common.transform())
                      : run_exp2(grid, trials, seed, common.transform());
        } catch (const Error& e) {
          if (exit_code(e.code()) != kExitNumeric) throw;
          rec.e_max = rec.e_mean = rec.rel_l2 = std::nan("");
          rec.status = status_of(e);
          any_failed = true;
        }
        report.add({std::to_string(L), std::to_string(trials), format_double(rec.e_max), format_double(rec.e_mean),
                    format_double(rec.rel_l2), rec.status});
      }
      emit(report, common, out);
    } else if (surf_cmd->parsed()) {
      const int L = band_limits.front();
      CsvReport report("errsurface", seed, {"L", "ell", "m", "E"});
      const auto surface = run_errsurface(grid_for(L, exp_choice), trials, seed, common.transform());
      for (int ell = 0; ell < L; ++ell)
        for (int m = -ell; m <= ell; ++m)
          report.add({std::to_string(L), std::to_string(ell), std::to_string(m),
                      format_double(surface[HarmonicCoefficients::index(ell, m)])});
      emit(report, common, out);
    } else if (cond_cmd->parsed()) {
      CsvReport report("cond", seed, {"L", "measure", "ordering", "m", "kappa", "max_kappa"});
      for (int L : band_limits) {
        const auto grid = grid_for(L, exp_choice);
        const auto kappa = condition_profile(grid);
        const double worst = *std::max_element(kappa.begin(), kappa.end());
        for (int m = 0; m < L; ++m)
          report.add({std::to_string(L), exp_choice.measure, exp_choice.ordering, std::to_string(m),
                      format_double(kappa[static_cast<std::size_t>(m)]), format_double(worst)});
      }
      emit(report, common, out);
    } else if (bench_cmd->parsed()) {
      CsvReport report("bench", seed, {"L", "trials", "tau_I", "tau_F", "tau_F1", "stat"});
      for (int L : band_limits) {
        const auto rec = run_bench(grid_for(L, exp_choice), trials, seed, use_mean, common.transform());
        report.add({std::to_string(L), std::to_string(trials), format_double(rec.tau_inverse),
                    format_double(rec.tau_forward), format_double(rec.tau_solve), rec.stat});
      }
      emit(report, common, out);
    }
    return any_failed ? kExitNumeric : kExitOk;
  } catch (const Error& e) {
    err << "error: " << describe(e) << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace optisph::cli
