// colmodel: command-line driver for the qubit collision-model simulator.
//
//   colmodel run          single trajectory (n, D, dD, C_S, C_R, pop_S)
//   colmodel sweep        N over a 1-D or 2-D parameter grid
//   colmodel threshold    activation threshold of a strength at each T
//   colmodel oracle-check iterative model vs full-chain evolution
//
// Exit codes: 0 success, 2 configuration error, 3 integrity error, 4 I/O error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "colmodel/colmodel.hpp"

namespace {

constexpr int exit_config = 2;
constexpr int exit_integrity = 3;
constexpr int exit_io = 4;

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path;
  std::size_t jobs = 1;
};

colmodel::SweepSpec load_spec(const Options& opt, bool require_axis1) {
  colmodel::ConfigEntries entries;
  if (!opt.config_path.empty()) {
    std::ifstream is(opt.config_path);
    if (!is) throw colmodel::io_error("cannot read config '" + opt.config_path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    entries = colmodel::parse_entries(ss.str());
  }
  for (const auto& o : opt.overrides) colmodel::apply_override(entries, o);
  return colmodel::build_spec(entries, require_axis1);
}

template <typename Writer>
void emit(const Options& opt, Writer&& writer) {
  if (opt.out_path.empty()) {
    writer(std::cout);
    std::cout.flush();
  } else {
    colmodel::write_file_atomic(opt.out_path, writer);
  }
}

int cmd_run(const Options& opt) {
  const auto spec = load_spec(opt, false);
  const auto traj = colmodel::run_model(spec.base);
  const auto nm = colmodel::blp_measure(traj);
  emit(opt, [&](std::ostream& os) { colmodel::write_trajectory_csv(os, traj); });
  std::cerr << "N = " << colmodel::format_double(nm.N) << "  steps = " << traj.steps_run
            << "  converged = " << (traj.converged ? "true" : "false") << '\n';
  return 0;
}

int cmd_sweep(const Options& opt) {
  const auto spec = load_spec(opt, true);
  const auto result = colmodel::run_sweep(spec, opt.jobs);
  emit(opt, [&](std::ostream& os) { colmodel::write_sweep_csv(os, result); });
  std::size_t flagged = 0;
  for (const auto& r : result.rows)
    if (r.status != colmodel::RowStatus::ok) ++flagged;
  if (flagged > 0)
    std::cerr << flagged << " of " << result.rows.size()
              << " grid points flagged (unconverged or integrity error)\n";
  return 0;
}

int cmd_threshold(const Options& opt) {
  const auto spec = load_spec(opt, true);
  const auto rows = colmodel::trace_threshold_curve(spec, opt.jobs);
  emit(opt, [&](std::ostream& os) { colmodel::write_threshold_csv(os, spec, rows); });
  return 0;
}

int cmd_oracle_check(const Options& opt) {
  const auto spec = load_spec(opt, false);
  auto cfg = spec.base;
  std::visit([&](auto& c) { c.stop.n_max = std::max(c.stop.n_max, spec.oracle_steps); }, cfg);
  const auto oracle = colmodel::full_chain_oracle(cfg, spec.oracle_steps);
  const auto iter = colmodel::run_model(cfg);

  constexpr double tol = 1e-10;
  double worst = 0.0;
  std::ostringstream table;
  table << "n,D_iter,D_oracle,max_abs_dev\n";
  const std::size_t steps = std::min(oracle.records.size(), iter.records.size());
  for (std::size_t i = 0; i < steps; ++i) {
    const auto& a = iter.records[i];
    const auto& b = oracle.records[i];
    const double dev = std::max({std::abs(a.D - b.D), std::abs(a.dD - b.dD),
                                 std::abs(a.C_S - b.C_S), std::abs(a.C_R - b.C_R),
                                 std::abs(a.pop_S - b.pop_S)});
    worst = std::max(worst, dev);
    table << a.n << ',' << colmodel::format_double(a.D) << ',' << colmodel::format_double(b.D)
          << ',' << colmodel::format_double(dev) << '\n';
  }
  emit(opt, [&](std::ostream& os) { os << table.str(); });
  const bool pass = worst <= tol && steps == spec.oracle_steps + 1;
  std::cerr << (pass ? "PASS" : "FAIL") << ": max deviation " << worst << " over "
            << spec.oracle_steps << " collisions (tolerance " << tol << ")\n";
  return pass ? 0 : exit_integrity;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Qubit collision-model simulator: trajectories, BLP non-Markovianity sweeps, "
               "threshold curves"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(colmodel::tool_version));

  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Configuration file (key = value lines)");
    sub->add_option("--set", opt.overrides, "Override a config key: key=value (repeatable)")
        ->take_all()
        ->allow_extra_args(false);
    sub->add_option("--out", opt.out_path, "Output CSV path (default: stdout)");
    sub->add_option("--jobs", opt.jobs, "Worker threads for grid evaluation")
        ->check(CLI::PositiveNumber);
  };

  auto* run = app.add_subcommand("run", "Evolve one configuration and write its trajectory");
  auto* sweep = app.add_subcommand("sweep", "Non-Markovianity over a 1-D or 2-D grid");
  auto* threshold = app.add_subcommand("threshold", "Trace the activation threshold versus T");
  auto* oracle = app.add_subcommand("oracle-check", "Compare against full-chain evolution");
  for (auto* sub : {run, sweep, threshold, oracle}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }

  try {
    if (run->parsed()) return cmd_run(opt);
    if (sweep->parsed()) return cmd_sweep(opt);
    if (threshold->parsed()) return cmd_threshold(opt);
    if (oracle->parsed()) return cmd_oracle_check(opt);
  } catch (const colmodel::config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const colmodel::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const colmodel::integrity_error& e) {
    std::cerr << "integrity error: " << e.what() << '\n';
    return exit_integrity;
  } catch (const colmodel::io_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return exit_io;
  } catch (const colmodel::error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_config;
  }
  return 0;
}
