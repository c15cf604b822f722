#include "cmbeam/cli.hpp"

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cmbeam/config_io.hpp"
#include "cmbeam/errors.hpp"
#include "cmbeam/experiments.hpp"
#include "cmbeam/metrics.hpp"
#include "cmbeam/solver.hpp"

namespace cmbeam {

namespace {

struct CommonArgs {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 0;
  bool quiet = false;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* out_opt = nullptr;

  bool seed_given() const { return seed_opt && seed_opt->count() > 0; }
  bool out_given() const { return out_opt && out_opt->count() > 0; }
};

void add_common(CLI::App* sub, CommonArgs& args, const char* config_help) {
  sub->add_option("--config", args.config, config_help)->required();
  args.seed_opt =
      sub->add_option("--seed", args.seed, "override the scenario seed");
  args.out_opt = sub->add_option("--out", args.out, "output directory");
  sub->add_flag("--quiet", args.quiet, "suppress progress output");
}

std::filesystem::path ensure_out_dir(const std::string& out) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec)
    throw IoError("cannot create output directory: " + out + " (" +
                  ec.message() + ")");
  return std::filesystem::path(out);
}

void note(const CommonArgs& args, const std::string& msg) {
  if (!args.quiet) std::cout << msg << "\n";
}

int run_simulate(const CommonArgs& args) {
  SolveConfig cfg = load_solve_config(args.config);
  if (args.seed_given()) cfg.scenario.seed = args.seed;
  const SnapshotSet set = generate_snapshots(cfg.scenario);
  const auto dir = ensure_out_dir(args.out);
  const std::string path = (dir / "snapshots.csv").string();
  write_text_file(path, snapshots_to_csv(set.snapshots));
  note(args, "wrote " + path);
  return 0;
}

int run_solve(const CommonArgs& args) {
  SolveConfig cfg = load_solve_config(args.config);
  if (args.seed_given()) cfg.scenario.seed = args.seed;
  const SnapshotSet set = generate_snapshots(cfg.scenario);
  const auto lifted =
      build_constraints(cfg.constraints, cfg.scenario.geometry, set.snapshots);
  const LiftedSolution sol =
      lifted.empty() ? solve_cma(set.snapshots, cfg.solver)
                     : solve_lccma(set.snapshots, lifted, cfg.solver);
  if (!sol.converged)
    std::cerr << "warning: solver stopped before tolerance "
              << "(fixed_point_residual=" << sol.fixed_point_residual
              << ", constraint_residual=" << sol.constraint_residual << ")\n";
  const auto dir = ensure_out_dir(args.out);
  const std::string solution_path = (dir / "solution.json").string();
  write_text_file(solution_path,
                  solution_to_json(sol, cfg.scenario.geometry));
  write_text_file((dir / "beampattern.csv").string(),
                  beampattern_to_csv(
                      beampattern(sol.w_hat, cfg.scenario.geometry)));
  write_text_file((dir / "w_matrix.csv").string(),
                  matrix_to_csv(sol.w_matrix.matrix()));
  note(args, "wrote " + solution_path);
  return 0;
}

int run_experiment_cmd(const CommonArgs& args) {
  ExperimentConfig cfg = load_experiment_config(args.config);
  if (args.seed_given()) cfg.scenario.seed = args.seed;
  if (args.out_given()) cfg.output_dir = args.out;
  const ExperimentReport report = run_experiment(cfg);
  write_report(report, cfg.output_dir);
  note(args, "wrote " + cfg.output_dir + "/report.csv (" +
                 std::to_string(report.records.size()) + " records)");
  return 0;
}

int run_pattern(const CommonArgs& args) {
  const StoredSolution sol = parse_solution_json(read_text_file(args.config));
  const auto dir = ensure_out_dir(args.out);
  const std::string path = (dir / "beampattern.csv").string();
  write_text_file(path,
                  beampattern_to_csv(beampattern(sol.w_hat, sol.geometry)));
  note(args, "wrote " + path);
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"constant-modulus beamforming: simulator, convex solver, "
               "experiment harness"};
  app.require_subcommand(1);

  CommonArgs sim_args, solve_args, exp_args, pat_args;
  CLI::App* sim = app.add_subcommand(
      "simulate", "generate array snapshots and write snapshots.csv");
  add_common(sim, sim_args, "scenario JSON path");
  CLI::App* solve = app.add_subcommand(
      "solve",
      "solve one scenario; writes solution.json, beampattern.csv, "
      "w_matrix.csv");
  add_common(solve, solve_args, "scenario JSON path");
  CLI::App* exp = app.add_subcommand(
      "experiment", "run a multi-trial study; writes report/summary/pattern "
                    "CSVs");
  add_common(exp, exp_args, "experiment JSON path");
  CLI::App* pat = app.add_subcommand(
      "pattern", "re-evaluate the beampattern of a stored solution.json");
  add_common(pat, pat_args, "solution JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) return run_simulate(sim_args);
    if (solve->parsed()) return run_solve(solve_args);
    if (exp->parsed()) return run_experiment_cmd(exp_args);
    if (pat->parsed()) return run_pattern(pat_args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const DivergedError& e) {
    std::cerr << "diverged: " << e.what() << "\n";
    return 3;
  } catch (const DegenerateSolution& e) {
    std::cerr << "degenerate solution: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace cmbeam
