// skewmor: structure-preserving model reduction for skew-gradient systems.
//
// Subcommands mirror the pipeline stages; each one reads the experiment
// config and exchanges data with the others through the files under the
// output directory, so stages can be rerun independently.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <string>

#include "skewmor/pipeline.hpp"

namespace {

using namespace skewmor;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;          // overrides the config when given
  std::uint64_t seed = 0;       // reserved for randomized tooling; the
                                // pipeline itself is deterministic
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Experiment config (JSON)")
      ->required();
  cmd->add_option("--out", args.out_dir, "Output directory (overrides config)");
  cmd->add_option("--seed", args.seed,
                  "Seed for randomized tests; ignored by the pipeline");
}

ExperimentConfig load(const CommonArgs& args) {
  ExperimentConfig cfg = load_config(args.config_path);
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  return cfg;
}

void print_report(const ComparisonReport& report) {
  std::printf("rows: %zu\n", report.rows.size());
  std::printf("max_energy_error: %.6e\n", report.max_energy_error);
  std::printf("final_l2_error: %.6e\n", report.final_l2_error);
  if (report.offline_seconds > 0.0 || report.online_seconds > 0.0) {
    std::printf("offline_seconds: %.3f\nonline_seconds: %.3f\n",
                report.offline_seconds, report.online_seconds);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure-preserving model order reduction for skew-gradient systems"};
  app.require_subcommand(1);

  CommonArgs args;
  CLI::App* simulate = app.add_subcommand("simulate", "Integrate the full-order model");
  CLI::App* pod = app.add_subcommand("pod", "Extract the POD basis from snapshots");
  CLI::App* reduce_cmd = app.add_subcommand("reduce", "Build the reduced-order model");
  CLI::App* rom_run = app.add_subcommand("rom-run", "Integrate the reduced-order model");
  CLI::App* compare = app.add_subcommand("compare", "Compare ROM against the reference");
  CLI::App* pipeline = app.add_subcommand("pipeline", "Run every stage in order");
  for (CLI::App* cmd : {simulate, pod, reduce_cmd, rom_run, compare, pipeline}) {
    add_common(cmd, args);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const ExperimentConfig cfg = load(args);
    if (simulate->parsed()) {
      const Trajectory traj = stage_simulate(cfg);
      std::printf("recorded %lld states into %s\n",
                  static_cast<long long>(traj.size()), cfg.out_dir.c_str());
    } else if (pod->parsed()) {
      const PodBasis basis = stage_pod(cfg);
      std::printf("basis rank %lld, discarded energy %.3e\n",
                  static_cast<long long>(basis.rank()), basis.discarded_energy);
    } else if (reduce_cmd->parsed()) {
      stage_reduce(cfg);
      std::printf("reduced model written to %s/rom\n", cfg.out_dir.c_str());
    } else if (rom_run->parsed()) {
      const Trajectory traj = stage_rom_run(cfg);
      std::printf("recorded %lld reduced states into %s\n",
                  static_cast<long long>(traj.size()), cfg.out_dir.c_str());
    } else if (compare->parsed()) {
      print_report(stage_compare(cfg));
    } else {
      print_report(run_pipeline(cfg));
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 1;
  } catch (const FileIoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 1;
  } catch (const FileFormatError& e) {
    std::fprintf(stderr, "file format error: %s\n", e.what());
    return 1;
  } catch (const FileTruncatedError& e) {
    std::fprintf(stderr, "file format error: %s\n", e.what());
    return 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  }
  return 0;
}
