// Command-line front end: solve, count, table1, fig1, rates, mc.
//
// Exit status: 0 success, 2 usage error, 3 numerical failure, 1 anything else.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chaos/analysis.hpp"
#include "chaos/error.hpp"
#include "chaos/experiments.hpp"
#include "chaos/io.hpp"
#include "chaos/multiindex.hpp"
#include "chaos/oracle.hpp"
#include "chaos/propagator.hpp"

namespace {

using namespace chaos;

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct ModelFlags {
  std::string sde = "gbm";
  double mu = 1.0;
  double b = 1.0;
  double sigma = 1.0;
  double x0 = 1.0;

  void add(CLI::App* app) {
    app->add_option("--sde", sde, "Model preset")->check(CLI::IsMember({"gbm", "bm"}));
    app->add_option("--mu", mu, "GBM drift rate");
    app->add_option("--b", b, "Drift of Brownian motion with drift");
    app->add_option("--sigma", sigma, "Diffusion coefficient");
    app->add_option("--x0", x0, "Initial value");
  }
  SdeModel model() const {
    return sde == "gbm" ? SdeModel::gbm(mu, sigma, x0) : SdeModel::brownian_drift(b, sigma, x0);
  }
};

struct TruncationFlags {
  int p = 2;
  int k = 4;
  std::string trunc = "full";
  std::string sparse;

  void add(CLI::App* app) {
    app->add_option("--p", p, "Maximal chaos order")->check(CLI::NonNegativeNumber);
    app->add_option("--k", k, "Number of basis functions")->check(CLI::PositiveNumber);
    app->add_option("--trunc", trunc, "Truncation type")
        ->check(CLI::IsMember({"full", "sp1", "sp2"}));
    app->add_option("--sparse", sparse,
                    "Sparse index: preset sp1..sp18, \"3,2,2,1,1\" or \"1,1;2,0\"");
  }
  TruncationSpec spec() const {
    if (trunc == "full") {
      if (!sparse.empty()) throw CLI::ValidationError("--sparse", "only valid with --trunc sp1|sp2");
      return FullTruncation{p, k};
    }
    if (sparse.empty()) throw CLI::ValidationError("--sparse", "required with --trunc " + trunc);
    auto spec = resolve_sparse(sparse);
    if (truncation_token(spec) != trunc) {
      throw CLI::ValidationError("--sparse", "index is " + truncation_token(spec) +
                                                 " but --trunc is " + trunc);
    }
    return spec;
  }
};

struct ToleranceFlags {
  ToleranceSpec tol;
  void add(CLI::App* app, const ToleranceSpec& defaults) {
    tol = defaults;
    app->add_option("--rtol", tol.rtol, "Relative tolerance")->check(CLI::PositiveNumber);
    app->add_option("--atol", tol.atol, "Absolute tolerance")->check(CLI::PositiveNumber);
    app->add_option("--max-steps", tol.max_steps, "Integrator step budget")
        ->check(CLI::PositiveNumber);
  }
};

// Writes to `path`, or stdout for "" / "-".
void emit(const std::string& path, const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path + " for writing");
  write(file);
  if (!file) throw std::runtime_error("write to " + path + " failed");
}

std::vector<BasisKind> parse_bases(const std::vector<std::string>& tokens) {
  std::vector<BasisKind> out;
  for (const auto& t : tokens) out.push_back(parse_basis_kind(t));
  return out;
}

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated Wiener chaos expansions of scalar SDEs"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", std::string(kToolVersion));

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Solve the propagator system and write x_alpha(t)");
  ModelFlags solve_model;
  TruncationFlags solve_trunc;
  ToleranceFlags solve_tol;
  std::string solve_basis = "trig", solve_out, solve_format = "csv";
  double t_end = 1.0;
  std::size_t grid_points = 101;
  solve_model.add(solve_cmd);
  solve_trunc.add(solve_cmd);
  solve_tol.add(solve_cmd, ToleranceSpec{});
  solve_cmd->add_option("--basis", solve_basis, "Basis family")->check(CLI::IsMember({"trig", "cos", "haar"}));
  solve_cmd->add_option("--t-end", t_end, "Horizon T")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--grid", grid_points, "Number of output times on [0, T]")
      ->check(CLI::Range(std::size_t{2}, std::size_t{10'000'000}));
  solve_cmd->add_option("--out", solve_out, "Output path (default stdout)");
  solve_cmd->add_option("--format", solve_format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  // count
  auto* count_cmd = app.add_subcommand("count", "Size of a truncated index set");
  TruncationFlags count_trunc;
  bool count_list = false;
  count_trunc.add(count_cmd);
  count_cmd->add_flag("--list", count_list, "Also print the index labels in canonical order");

  // table1
  auto* table_cmd = app.add_subcommand("table1", "Variance errors of GBM(1,1,1) per table row");
  std::string rows = "desk", table_out, table_format = "csv";
  std::vector<std::string> table_bases{"cos", "haar"};
  std::size_t table_grid = 1001;
  ToleranceFlags table_tol;
  table_tol.add(table_cmd, experiment_tolerances());
  table_cmd->add_option("--rows", rows, "all | desk | 1-based rows and ranges, e.g. 1-6,9");
  table_cmd->add_option("--bases", table_bases, "Bases to run")
      ->delimiter(',')
      ->check(CLI::IsMember({"trig", "cos", "haar"}));
  table_cmd->add_option("--grid", table_grid, "Evaluation points on [0, 1]")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1'000'000}));
  table_cmd->add_option("--out", table_out, "Output path (default stdout)");
  table_cmd->add_option("--format", table_format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  // fig1
  auto* fig_cmd = app.add_subcommand("fig1", "Variance error over time for full truncations");
  std::vector<std::string> fig_bases{"cos", "haar"};
  std::vector<int> fig_ps{1, 2, 3, 4}, fig_ks{2, 4, 8};
  std::string fig_dir = "fig1";
  std::size_t fig_grid = 1001;
  ToleranceFlags fig_tol;
  fig_tol.add(fig_cmd, experiment_tolerances());
  fig_cmd->add_option("--bases", fig_bases, "Bases to run")->delimiter(',')->check(CLI::IsMember({"trig", "cos", "haar"}));
  fig_cmd->add_option("--ps", fig_ps, "Chaos orders p")->delimiter(',')->check(CLI::PositiveNumber);
  fig_cmd->add_option("--ks", fig_ks, "Basis sizes k")->delimiter(',')->check(CLI::PositiveNumber);
  fig_cmd->add_option("--grid", fig_grid, "Evaluation points on [0, 1]")->check(CLI::Range(std::size_t{2}, std::size_t{1'000'000}));
  fig_cmd->add_option("--out-dir", fig_dir, "Directory for the per-configuration CSVs");

  // rates
  auto* rates_cmd = app.add_subcommand("rates", "Log-log slopes of basis tails and variance errors");
  std::vector<std::size_t> trig_ks{8, 16, 32, 64, 128}, measured_ks{4, 8, 16, 32};
  std::vector<int> haar_levels{3, 4, 5, 6, 7, 8, 9};
  int measured_p = 2, sweep_pmax = 5;
  std::size_t sweep_k = 8;
  ToleranceFlags rates_tol;
  rates_tol.add(rates_cmd, experiment_tolerances());
  rates_cmd->add_option("--trig-ks", trig_ks, "k values for the Fourier tail fit")->delimiter(',');
  rates_cmd->add_option("--haar-levels", haar_levels, "Haar levels n (k = 2^n)")->delimiter(',');
  rates_cmd->add_option("--measured-p", measured_p, "Order p of the measured error series")->check(CLI::PositiveNumber);
  rates_cmd->add_option("--measured-ks", measured_ks, "k values of the measured error series")->delimiter(',');
  rates_cmd->add_option("--sweep-k", sweep_k, "Fixed k of the p sweep")->check(CLI::PositiveNumber);
  rates_cmd->add_option("--sweep-pmax", sweep_pmax, "Largest p of the sweep")->check(CLI::PositiveNumber);

  // mc
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo checks: expansion sampling and Euler-Maruyama");
  ModelFlags mc_model;
  TruncationFlags mc_trunc;
  ToleranceFlags mc_tol;
  std::string mc_basis = "haar";
  std::size_t paths = 100'000, steps = 1024;
  std::uint64_t seed = 20240101;
  mc_model.add(mc_cmd);
  mc_trunc.add(mc_cmd);
  mc_tol.add(mc_cmd, experiment_tolerances());
  mc_cmd->add_option("--basis", mc_basis, "Basis family")->check(CLI::IsMember({"trig", "cos", "haar"}));
  mc_cmd->add_option("--paths", paths, "Monte Carlo paths")->check(CLI::Range(std::size_t{2}, std::size_t{0xFFFFFFFF}));
  mc_cmd->add_option("--steps", steps, "Euler-Maruyama steps")->check(CLI::PositiveNumber);
  mc_cmd->add_option("--seed", seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) {
      const BasisSpec basis{parse_basis_kind(solve_basis), t_end};
      const auto grid = uniform_grid(t_end, grid_points);
      const auto sol = solve(solve_model.model(), solve_trunc.spec(), basis, grid, solve_tol.tol);
      emit(solve_out, [&](std::ostream& os) {
        if (solve_format == "csv") {
          write_solution_csv(os, sol);
        } else {
          write_solution_json(os, sol, {"solve", solve_tol.tol.rtol, solve_tol.tol.atol, {}});
        }
      });
    } else if (count_cmd->parsed()) {
      const auto spec = count_trunc.spec();
      if (count_list) {
        for (const auto& alpha : enumerate(spec)) std::cout << alpha.label() << '\n';
      }
      std::cout << count(spec) << '\n';
    } else if (table_cmd->parsed()) {
      const auto selected = select_rows(rows);
      const auto bases = parse_bases(table_bases);
      const auto reports = run_table(selected, bases, table_tol.tol, table_grid);
      emit(table_out, [&](std::ostream& os) {
        if (table_format == "csv") {
          write_reports_csv(os, reports);
        } else {
          write_reports_json(os, reports, {"table1", table_tol.tol.rtol, table_tol.tol.atol, {}});
        }
      });
    } else if (fig_cmd->parsed()) {
      std::filesystem::create_directories(fig_dir);
      std::ostringstream summary;
      summary << "basis,p,k,error_at_T,error_max,argmax_t,dyadic_max_error,dyadic_order_error\n";
      for (const auto& token : fig_bases) {
        const auto kind = parse_basis_kind(token);
        for (int p : fig_ps) {
          for (int k : fig_ks) {
            const auto fc = run_figure_curve(kind, p, k, fig_tol.tol, fig_grid);
            const auto name = token + "_p" + std::to_string(p) + "_k" + std::to_string(k) + ".csv";
            emit((std::filesystem::path(fig_dir) / name).string(),
                 [&](std::ostream& os) { write_error_curve_csv(os, fc.curve); });
            summary << token << ',' << p << ',' << k << ',' << format_real(fc.curve.error_at_T)
                    << ',' << format_real(fc.curve.error_max) << ',' << format_real(fc.argmax_t)
                    << ',' << format_real(fc.dyadic_max_error) << ','
                    << format_real(fc.dyadic_order_error) << '\n';
          }
        }
      }
      emit((std::filesystem::path(fig_dir) / "summary.csv").string(),
           [&](std::ostream& os) { os << summary.str(); });
      std::cout << summary.str();
    } else if (rates_cmd->parsed()) {
      const auto st = run_rates(trig_ks, haar_levels, measured_p, measured_ks, sweep_k,
                                sweep_pmax, rates_tol.tol);
      std::cout << "series,x,value\n";
      for (std::size_t i = 0; i < st.trig_ks.size(); ++i) {
        std::cout << "trig_tail," << st.trig_ks[i] << ',' << format_real(st.trig_tail[i]) << '\n';
      }
      for (std::size_t i = 0; i < st.haar_levels.size(); ++i) {
        std::cout << "haar_tail," << (std::size_t{1} << st.haar_levels[i]) << ','
                  << format_real(st.haar_tail[i]) << '\n';
      }
      for (std::size_t i = 0; i < st.measured_ks.size(); ++i) {
        std::cout << "cos_excess_error_p" << st.measured_p << ',' << st.measured_ks[i] << ','
                  << format_real(st.measured_excess[i]) << '\n';
      }
      for (std::size_t i = 0; i < st.p_sweep.size(); ++i) {
        std::cout << "cos_error_k" << st.sweep_k << ",p=" << i + 1 << ','
                  << format_real(st.p_sweep[i]) << '\n';
      }
      std::cerr << "trig tail slope " << fixed(st.trig_fit.slope) << " (R^2 "
                << fixed(st.trig_fit.r_squared) << ")\n";
      std::cerr << "haar tail slope " << fixed(st.haar_fit.slope) << " (R^2 "
                << fixed(st.haar_fit.r_squared) << "), level ratios";
      for (double r : st.haar_ratios) std::cerr << ' ' << fixed(r);
      std::cerr << '\n';
      if (st.measured_fit) {
        std::cerr << "cos excess-error slope " << fixed(st.measured_fit->slope) << " (R^2 "
                  << fixed(st.measured_fit->r_squared) << ")\n";
      }
      bool monotone = true;
      for (std::size_t i = 1; i < st.p_sweep.size(); ++i) {
        monotone = monotone && st.p_sweep[i] < st.p_sweep[i - 1];
      }
      std::cerr << "error decreasing in p: " << (monotone ? "yes" : "no") << '\n';
    } else if (mc_cmd->parsed()) {
      const auto model = mc_model.model();
      const BasisSpec basis{parse_basis_kind(mc_basis), 1.0};
      const std::vector<double> grid{0.0, 1.0};
      const auto sol = solve(model, mc_trunc.spec(), basis, grid, mc_tol.tol);
      const auto m = moments(sol, 1.0);
      const auto sample = sample_expansion(sol, 1.0, paths, {seed, 0});
      const auto euler = euler_maruyama(model, 1.0, steps, paths, {seed, 1});
      std::cout << "quantity,coefficients,expansion_mc,expansion_se,euler_mc,euler_se\n";
      std::cout << "mean," << format_real(m.mean) << ',' << format_real(sample.mean) << ','
                << format_real(sample.mean_se) << ',' << format_real(euler.mean) << ','
                << format_real(euler.mean_se) << '\n';
      std::cout << "variance," << format_real(m.variance) << ',' << format_real(sample.variance)
                << ',' << format_real(sample.variance_se) << ',' << format_real(euler.variance)
                << ',' << format_real(euler.variance_se) << '\n';
      std::cout << "third_moment," << format_real(third_moment(sol, 1.0)) << ','
                << format_real(sample.third_moment) << ',' << format_real(sample.third_moment_se)
                << ',' << format_real(euler.third_moment) << ','
                << format_real(euler.third_moment_se) << '\n';
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.is_numerical() ? kExitNumerical : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
