#include "gasnet/cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "gasnet/output.hpp"
#include "gasnet/scenario.hpp"

namespace gasnet {

namespace {

struct RunArgs {
  std::string file;
  std::string preset;
  std::string out_dir;
  std::vector<double> snapshots;
  std::optional<double> tau, h, rho_floor, t_end, fixpoint_tol;
  std::optional<int> sweeps;
};

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int do_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  Scenario scenario;
  try {
    if (!args.file.empty() && !args.preset.empty()) {
      err << "error: give either a scenario file or --preset, not both\n";
      return kExitSchema;
    }
    if (!args.preset.empty()) {
      scenario = preset(args.preset);
    } else if (!args.file.empty()) {
      const auto text = read_file(args.file);
      if (!text) {
        err << "error: cannot read scenario file " << args.file << '\n';
        return kExitSchema;
      }
      scenario = parse_scenario(*text);
    } else {
      err << "error: a scenario file or --preset is required\n";
      return kExitSchema;
    }

    if (args.tau) scenario.tau = *args.tau;
    if (args.h) scenario.mesh_h = *args.h;
    if (args.sweeps) scenario.sweeps = *args.sweeps;
    if (args.rho_floor) scenario.rho_floor = *args.rho_floor;
    if (args.t_end) scenario.t_end = *args.t_end;
    if (args.fixpoint_tol) scenario.fixpoint_tol = *args.fixpoint_tol;
    if (!args.snapshots.empty()) scenario.snapshots = args.snapshots;
    if (!args.out_dir.empty()) scenario.out_dir = args.out_dir;
    if (args.t_end && args.snapshots.empty())
      std::erase_if(scenario.snapshots, [&](double t) { return t > scenario.t_end; });
    // overrides go through the same validation as file input
    scenario = parse_scenario(serialize_scenario(scenario));
  } catch (const SchemaError& ex) {
    err << ex.what() << '\n';
    return kExitSchema;
  } catch (const std::out_of_range& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitSchema;
  }

  std::optional<Simulation> sim;
  try {
    sim.emplace(make_simulation(scenario));
  } catch (const InvalidInput& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitSchema;
  }

  const Trajectory traj = run(sim->dofs, sim->law, sim->initial, sim->config);
  try {
    write_outputs(traj, scenario, *sim, scenario.out_dir);
  } catch (const OutputError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitIo;
  }

  if (traj.failure) {
    err << "solver failure (" << traj.failure->kind << ") at step " << traj.failure->step
        << ", t = " << traj.failure->t << ": " << traj.failure->message << '\n'
        << "partial outputs written to " << scenario.out_dir << '\n';
    return kExitSolver;
  }
  const auto& last = traj.records.back();
  const auto& first = traj.records.front();
  out << scenario.name << ": " << last.step << " steps to t = " << last.t
      << (traj.steady_reached ? " (steady)" : "") << ", E/E0 = " << last.energy / first.energy
      << ", outputs in " << scenario.out_dir << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Isentropic gas flow on pipe networks: mixed finite elements, implicit time stepping."};
  app.require_subcommand(1);

  RunArgs args;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario file or a preset and write CSV/JSON outputs");
  // "-h" would clash with --h
  run_cmd->set_help_flag("--help", "Print this help message and exit");
  run_cmd->add_option("scenario", args.file, "Scenario JSON file");
  run_cmd->add_option("--preset", args.preset, "Built-in scenario: shock_tube, friction_pipe, junction");
  run_cmd->add_option("--out-dir", args.out_dir,
                      "Output directory (snapshots.csv, diagnostics.csv, summary.json, oracle.csv)");
  run_cmd->add_option("--snapshots", args.snapshots, "Snapshot times, comma separated")->delimiter(',');
  run_cmd->add_option("--tau", args.tau, "Time step");
  run_cmd->add_option("--h", args.h, "Target mesh size");
  run_cmd->add_option("--sweeps", args.sweeps, "Fixed-point sweeps per step");
  run_cmd->add_option("--rho-floor", args.rho_floor, "Density floor in the linearization (0 = off)");
  run_cmd->add_option("--t-end", args.t_end, "Final time");
  run_cmd->add_option("--fixpoint-tol", args.fixpoint_tol,
                      "Sweep until this relative residual instead of a fixed count");

  std::string preset_name;
  auto* preset_cmd = app.add_subcommand("preset", "Print a preset scenario as JSON");
  preset_cmd->add_option("name", preset_name, "Preset name")->required();

  app.add_subcommand("presets", "List preset names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& ex) {
    if (ex.get_exit_code() == 0) return kExitOk;
    err << "error: " << ex.what() << '\n' << "run with --help for usage\n";
    return kExitSchema;
  }

  if (run_cmd->parsed()) return do_run(args, out, err);
  if (preset_cmd->parsed()) {
    try {
      out << serialize_scenario(preset(preset_name)) << '\n';
    } catch (const std::out_of_range& ex) {
      err << "error: " << ex.what() << '\n';
      return kExitSchema;
    }
    return kExitOk;
  }
  for (const auto& name : preset_names()) out << name << '\n';
  return kExitOk;
}

}  // namespace gasnet
