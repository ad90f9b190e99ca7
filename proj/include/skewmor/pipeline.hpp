#ifndef SKEWMOR_PIPELINE_HPP
#define SKEWMOR_PIPELINE_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "skewmor/integrators.hpp"
#include "skewmor/pod.hpp"
#include "skewmor/problems.hpp"
#include "skewmor/rom.hpp"
#include "skewmor/types.hpp"

namespace skewmor {

/// Flat experiment description; loadable from a flat JSON object.  Defaults
/// reproduce the KdV benchmark (L=20, n=500, T=3, 600 steps, r=20).
struct ExperimentConfig {
  Problem problem = Problem::kdv;
  double length = 20.0;
  Index n = 500;
  double t_end = 3.0;
  long steps = 600;
  D2Scaling d2_scaling = D2Scaling::standard;
  std::optional<double> grid_offset;  // default -L/2

  std::optional<Index> r;        // fixed-rank truncation (default 20)
  std::optional<double> epsilon; // energy truncation; exclusive with r

  RomVariant variant = RomVariant::linear_s_fast;
  std::optional<Index> deim_m;   // skew_deim sample count, default r

  double newton_tol = 1e-12;     // reduced-order Newton threshold
  double fom_newton_tol = 1e-10; // full-order Newton threshold
  int newton_max_iter = 50;

  bool augment_snapshots = false;
  double mu = 1.0;
  long record_every = 1;
  std::string out_dir = "out";

  double dt() const { return t_end / static_cast<double>(steps); }
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

GridConfig grid_of(const ExperimentConfig& cfg);
SkewGradientSystem system_of(const ExperimentConfig& cfg);

/// Discrete L^2 distance sqrt(dx sum_i (y_i - (Vz)_i)^2).
double l2_error(const ColumnVector& y_full, const ColumnVector& z,
                const PodBasis& v, double dx);

/// |H(V z_k) - H(V z_0)| for every recorded reduced state.
std::vector<double> energy_error(const ReducedSystem& rs,
                                 const std::vector<ColumnVector>& z_states);

struct ComparisonRow {
  double t = 0.0;
  double energy_error = 0.0;
  double l2_error = 0.0;
  double energy_full = 0.0;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  double max_energy_error = 0.0;
  double final_l2_error = 0.0;
  double offline_seconds = 0.0;  // informational, not asserted anywhere
  double online_seconds = 0.0;
};

/// Pipeline stages.  Each stage persists its products under cfg.out_dir and
/// reloads upstream products from there when the in-memory argument is
/// null, so the CLI subcommands can run independently.
Trajectory stage_simulate(const ExperimentConfig& cfg);
PodBasis stage_pod(const ExperimentConfig& cfg, const Trajectory* traj = nullptr);
ReducedSystem stage_reduce(const ExperimentConfig& cfg,
                           const PodBasis* basis = nullptr,
                           const Trajectory* traj = nullptr);
Trajectory stage_rom_run(const ExperimentConfig& cfg,
                         const ReducedSystem* rs = nullptr,
                         const Trajectory* traj = nullptr);
ComparisonReport stage_compare(const ExperimentConfig& cfg,
                               const Trajectory* full_traj = nullptr,
                               const ReducedSystem* rs = nullptr,
                               const Trajectory* rom_traj = nullptr);

/// simulate -> pod -> reduce -> rom-run -> compare, reusing the in-memory
/// products; emits the same files as the individual stages.
ComparisonReport run_pipeline(const ExperimentConfig& cfg);

/// Reduced-model persistence (directory with manifest.json + SKM1/CSV
/// files); the manifest carries problem, grid and variant so the evaluators
/// can be rebuilt on load.
void save_reduced_system(const std::filesystem::path& dir, const ReducedSystem& rs,
                         const ExperimentConfig& cfg);
ReducedSystem load_reduced_system(const std::filesystem::path& dir);

/// Trajectory persistence: SKM1 state matrix (n x K) plus a `t,H` CSV.
void save_trajectory(const std::filesystem::path& states_path,
                     const std::filesystem::path& energy_csv_path,
                     const Trajectory& traj);

/// Concurrency cap from SKEWMOR_THREADS (default 1: serial).
int thread_cap();

}  // namespace skewmor

#endif
