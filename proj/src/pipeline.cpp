#include "skewmor/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "skewmor/la_core.hpp"

namespace skewmor {

namespace {

using nlohmann::json;

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

Problem problem_from_string(const std::string& s) {
  if (s == "kdv") return Problem::kdv;
  if (s == "mkdv") return Problem::mkdv;
  throw ConfigError("config: unknown problem '" + s + "'");
}

std::string to_string(Problem p) { return p == Problem::kdv ? "kdv" : "mkdv"; }

D2Scaling d2_scaling_from_string(const std::string& s) {
  if (s == "standard") return D2Scaling::standard;
  if (s == "paper_literal") return D2Scaling::paper_literal;
  throw ConfigError("config: unknown d2_scaling '" + s + "'");
}

std::string to_string(D2Scaling s) {
  return s == D2Scaling::standard ? "standard" : "paper_literal";
}

RomVariant variant_from_string(const std::string& s) {
  if (s == "galerkin_generic") return RomVariant::galerkin_generic;
  if (s == "skew_generic") return RomVariant::skew_generic;
  if (s == "linear_s_fast") return RomVariant::linear_s_fast;
  if (s == "skew_deim") return RomVariant::skew_deim;
  throw ConfigError("config: unknown variant '" + s + "'");
}

std::string to_string(RomVariant v) {
  switch (v) {
    case RomVariant::galerkin_generic: return "galerkin_generic";
    case RomVariant::skew_generic: return "skew_generic";
    case RomVariant::linear_s_fast: return "linear_s_fast";
    case RomVariant::skew_deim: return "skew_deim";
  }
  return "?";
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.length <= 0.0) throw ConfigError("config: length must be positive");
  if (cfg.n < 5) throw ConfigError("config: n must be at least 5");
  if (cfg.t_end <= 0.0) throw ConfigError("config: t_end must be positive");
  if (cfg.steps < 1) throw ConfigError("config: steps must be >= 1");
  if (cfg.record_every < 1) throw ConfigError("config: record_every must be >= 1");
  if (cfg.newton_tol <= 0.0 || cfg.fom_newton_tol <= 0.0) {
    throw ConfigError("config: Newton tolerances must be positive");
  }
  if (cfg.newton_max_iter < 1) throw ConfigError("config: newton_max_iter must be >= 1");
  if (cfg.r && cfg.epsilon) {
    throw ConfigError("config: r and epsilon are mutually exclusive");
  }
  if (cfg.epsilon && !(*cfg.epsilon > 0.0 && *cfg.epsilon < 1.0)) {
    throw ConfigError("config: epsilon must lie in (0, 1)");
  }
  if (cfg.r && *cfg.r < 1) throw ConfigError("config: r must be >= 1");
  if (cfg.deim_m && *cfg.deim_m < 1) throw ConfigError("config: deim_m must be >= 1");
  if (cfg.mu <= 0.0) throw ConfigError("config: mu must be positive");
  if (cfg.variant == RomVariant::linear_s_fast && cfg.problem == Problem::mkdv) {
    throw ConfigError(
        "config: linear_s_fast requires an affine S(y); use skew_deim for mkdv");
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("config: top level must be a JSON object");
  }

  ExperimentConfig cfg;
  bool have_length = false;
  bool have_steps = false;
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "problem") {
        cfg.problem = problem_from_string(value.get<std::string>());
      } else if (key == "length") {
        cfg.length = value.get<double>();
        have_length = true;
      } else if (key == "n") {
        cfg.n = value.get<Index>();
      } else if (key == "t_end") {
        cfg.t_end = value.get<double>();
      } else if (key == "steps") {
        cfg.steps = value.get<long>();
        have_steps = true;
      } else if (key == "d2_scaling") {
        cfg.d2_scaling = d2_scaling_from_string(value.get<std::string>());
      } else if (key == "grid_offset") {
        cfg.grid_offset = value.get<double>();
      } else if (key == "r") {
        cfg.r = value.get<Index>();
      } else if (key == "epsilon") {
        cfg.epsilon = value.get<double>();
      } else if (key == "variant") {
        cfg.variant = variant_from_string(value.get<std::string>());
      } else if (key == "deim_m") {
        cfg.deim_m = value.get<Index>();
      } else if (key == "newton_tol") {
        cfg.newton_tol = value.get<double>();
      } else if (key == "fom_newton_tol") {
        cfg.fom_newton_tol = value.get<double>();
      } else if (key == "newton_max_iter") {
        cfg.newton_max_iter = value.get<int>();
      } else if (key == "augment_snapshots") {
        cfg.augment_snapshots = value.get<bool>();
      } else if (key == "mu") {
        cfg.mu = value.get<double>();
      } else if (key == "record_every") {
        cfg.record_every = value.get<long>();
      } else if (key == "out_dir") {
        cfg.out_dir = value.get<std::string>();
      } else {
        throw ConfigError("config: unknown key '" + key + "'");
      }
    } catch (const json::exception& e) {
      throw ConfigError("config: bad value for '" + key + "': " + e.what());
    }
  }

  // Problem-specific defaults for the keys the experiments differ in.
  if (!have_length && cfg.problem == Problem::mkdv) cfg.length = 10.0;
  if (!have_steps && cfg.problem == Problem::mkdv) cfg.steps = 750;
  if (!cfg.r && !cfg.epsilon) {
    cfg.r = cfg.problem == Problem::kdv ? 20 : 50;
  }

  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) {
    throw FileIoError("load_config: cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << is.rdbuf();
  return parse_config(buffer.str());
}

GridConfig grid_of(const ExperimentConfig& cfg) {
  return GridConfig::make(cfg.length, cfg.n, cfg.grid_offset);
}

SkewGradientSystem system_of(const ExperimentConfig& cfg) {
  const GridConfig grid = grid_of(cfg);
  const DifferenceOperators ops = central_diff_ops(grid, cfg.d2_scaling);
  return cfg.problem == Problem::kdv ? kdv_system(grid, ops)
                                     : mkdv_system(grid, ops);
}

double l2_error(const ColumnVector& y_full, const ColumnVector& z,
                const PodBasis& v, double dx) {
  if (y_full.size() != v.v.rows() || z.size() != v.rank()) {
    throw ShapeError("l2_error: incompatible shapes");
  }
  return std::sqrt(dx * (y_full - v.v * z).squaredNorm());
}

std::vector<double> energy_error(const ReducedSystem& rs,
                                 const std::vector<ColumnVector>& z_states) {
  std::vector<double> out;
  out.reserve(z_states.size());
  if (z_states.empty()) return out;
  const double h0 = rs.reduced_energy(z_states.front());
  for (const ColumnVector& z : z_states) {
    out.push_back(std::abs(rs.reduced_energy(z) - h0));
  }
  return out;
}

int thread_cap() {
  const char* env = std::getenv("SKEWMOR_THREADS");
  if (!env) return 1;
  const long v = std::strtol(env, nullptr, 10);
  if (v < 1) return 1;
  return static_cast<int>(std::min<long>(v, 64));
}

namespace {

// Chunked worker pool; results must be written to disjoint slots so the
// output is identical to the serial run.
void parallel_for(Index count, const std::function<void(Index)>& fn) {
  const int threads = std::min<Index>(thread_cap(), count);
  if (threads <= 1) {
    for (Index i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      for (Index i = t; i < count; i += threads) fn(i);
    });
  }
  for (std::thread& th : pool) th.join();
}

std::filesystem::path out_path(const ExperimentConfig& cfg, const char* name) {
  return std::filesystem::path(cfg.out_dir) / name;
}

void ensure_out_dir(const ExperimentConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) {
    throw FileIoError("cannot create output directory " + cfg.out_dir);
  }
}

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::string>& rows) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw FileIoError("cannot open " + path.string());
  os << header << "\n";
  for (const std::string& row : rows) os << row << "\n";
  os.flush();
  if (!os) throw FileIoError("write failed for " + path.string());
}

void write_energy_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::vector<std::string> rows;
  rows.reserve(traj.times.size());
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    rows.push_back(format_double(traj.times[k]) + "," + format_double(traj.energies[k]));
  }
  write_csv(path, "t,H", rows);
}

void write_sigma_csv(const std::filesystem::path& path, const ColumnVector& sigma) {
  std::vector<std::string> rows;
  rows.reserve(static_cast<std::size_t>(sigma.size()));
  for (Index j = 0; j < sigma.size(); ++j) {
    rows.push_back(std::to_string(j + 1) + "," + format_double(sigma[j]));
  }
  write_csv(path, "index,sigma", rows);
}

DenseMatrix states_matrix(const Trajectory& traj) {
  const Index n = traj.states.front().size();
  DenseMatrix m(n, traj.size());
  for (Index j = 0; j < traj.size(); ++j) {
    m.col(j) = traj.states[static_cast<std::size_t>(j)];
  }
  return m;
}

Trajectory trajectory_from_states(const DenseMatrix& states,
                                  const ExperimentConfig& cfg,
                                  const std::function<double(const ColumnVector&)>& energy) {
  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(states.cols()));
  traj.states.reserve(static_cast<std::size_t>(states.cols()));
  traj.energies.reserve(static_cast<std::size_t>(states.cols()));
  for (Index j = 0; j < states.cols(); ++j) {
    const long step = static_cast<long>(j) * cfg.record_every;
    traj.times.push_back(static_cast<double>(step) * cfg.dt());
    traj.states.push_back(states.col(j));
    traj.energies.push_back(energy ? energy(states.col(j)) : 0.0);
  }
  return traj;
}

MidpointConfig fom_midpoint_config(const ExperimentConfig& cfg,
                                   const SkewGradientSystem& sys) {
  MidpointConfig mc;
  mc.dt = cfg.dt();
  mc.newton_tol = cfg.fom_newton_tol;
  mc.newton_max_iter = cfg.newton_max_iter;
  mc.jacobian = sys.rhs_jacobian ? JacobianMode::user_supplied
                                 : JacobianMode::finite_difference;
  return mc;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void save_trajectory(const std::filesystem::path& states_path,
                     const std::filesystem::path& energy_csv_path,
                     const Trajectory& traj) {
  if (traj.states.empty()) throw ConfigError("save_trajectory: empty trajectory");
  write_matrix(states_path, states_matrix(traj));
  write_energy_csv(energy_csv_path, traj);
}

Trajectory stage_simulate(const ExperimentConfig& cfg) {
  ensure_out_dir(cfg);
  const SkewGradientSystem sys = system_of(cfg);
  const GridConfig grid = grid_of(cfg);
  const ColumnVector y0 = initial_profile(cfg.problem, grid);
  Trajectory traj;
  try {
    traj = integrate(sys, y0, fom_midpoint_config(cfg, sys), cfg.steps,
                     cfg.record_every);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(std::string("simulate: ") + e.what(), e.last_residual,
                           e.iterations);
  }
  save_trajectory(out_path(cfg, "full_states.skm"), out_path(cfg, "full_energy.csv"),
                  traj);
  return traj;
}

PodBasis stage_pod(const ExperimentConfig& cfg, const Trajectory* traj) {
  ensure_out_dir(cfg);
  const SkewGradientSystem sys = system_of(cfg);
  Trajectory loaded;
  if (!traj) {
    loaded = trajectory_from_states(read_matrix(out_path(cfg, "full_states.skm")), cfg,
                                    sys.energy);
    traj = &loaded;
  }
  const SnapshotSet snapshots =
      assemble_snapshots(*traj, sys, cfg.augment_snapshots, cfg.mu);
  const PodTruncation truncation = cfg.epsilon
                                       ? PodTruncation::energy(*cfg.epsilon)
                                       : PodTruncation::fixed_rank(cfg.r.value_or(20));
  const PodBasis basis = pod_basis(snapshots, truncation);
  write_matrix(out_path(cfg, "pod_v.skm"), basis.v);
  write_sigma_csv(out_path(cfg, "pod_sigma.csv"), basis.spectrum);
  return basis;
}

namespace {

PodBasis load_basis(const ExperimentConfig& cfg) {
  PodBasis basis;
  basis.v = read_matrix(out_path(cfg, "pod_v.skm"));
  // Orthonormality is the only property downstream stages rely on; the
  // retained spectrum is reporting-only and not persisted in the .skm.
  basis.retained_singular_values = ColumnVector::Zero(basis.v.cols());
  basis.spectrum = basis.retained_singular_values;
  return basis;
}

}  // namespace

ReducedSystem stage_reduce(const ExperimentConfig& cfg, const PodBasis* basis,
                           const Trajectory* traj) {
  ensure_out_dir(cfg);
  PodBasis loaded_basis;
  if (!basis) {
    loaded_basis = load_basis(cfg);
    basis = &loaded_basis;
  }
  const SkewGradientSystem sys = system_of(cfg);

  Trajectory loaded_traj;
  const std::vector<ColumnVector>* snapshot_states = nullptr;
  if (cfg.variant == RomVariant::skew_deim) {
    if (!traj) {
      loaded_traj = trajectory_from_states(
          read_matrix(out_path(cfg, "full_states.skm")), cfg, sys.energy);
      traj = &loaded_traj;
    }
    snapshot_states = &traj->states;
  }

  RomBuildOptions options;
  options.deim_m = cfg.deim_m;
  const ReducedSystem rs = reduce(sys, *basis, cfg.variant, options, snapshot_states);
  save_reduced_system(out_path(cfg, "rom"), rs, cfg);
  return rs;
}

Trajectory stage_rom_run(const ExperimentConfig& cfg, const ReducedSystem* rs,
                         const Trajectory* traj) {
  ensure_out_dir(cfg);
  ReducedSystem loaded_rs;
  if (!rs) {
    loaded_rs = load_reduced_system(out_path(cfg, "rom"));
    rs = &loaded_rs;
  }
  ColumnVector y0;
  if (traj) {
    y0 = traj->states.front();
  } else {
    y0 = read_matrix(out_path(cfg, "full_states.skm")).col(0);
  }
  const ColumnVector z0 = rs->initial_condition(y0);

  MidpointConfig mc;
  mc.dt = cfg.dt();
  mc.newton_tol = cfg.newton_tol;
  mc.newton_max_iter = cfg.newton_max_iter;

  Trajectory rom_traj;
  try {
    if (rs->variant == RomVariant::galerkin_generic) {
      const auto energy = [rs](const ColumnVector& z) { return rs->reduced_energy(z); };
      rom_traj = integrate(rs->rhs_fn(), z0, mc, cfg.steps, cfg.record_every, energy);
    } else {
      const SkewGradientSystem reduced = rs->as_skew_system();
      mc.jacobian = reduced.rhs_jacobian ? JacobianMode::user_supplied
                                         : JacobianMode::finite_difference;
      rom_traj = integrate(reduced, z0, mc, cfg.steps, cfg.record_every);
    }
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(std::string("rom-run: ") + e.what(), e.last_residual,
                           e.iterations);
  }
  save_trajectory(out_path(cfg, "rom_states.skm"), out_path(cfg, "rom_energy.csv"),
                  rom_traj);
  return rom_traj;
}

ComparisonReport stage_compare(const ExperimentConfig& cfg,
                               const Trajectory* full_traj, const ReducedSystem* rs,
                               const Trajectory* rom_traj) {
  ensure_out_dir(cfg);
  const SkewGradientSystem sys = system_of(cfg);
  Trajectory loaded_full;
  if (!full_traj) {
    loaded_full = trajectory_from_states(read_matrix(out_path(cfg, "full_states.skm")),
                                         cfg, sys.energy);
    full_traj = &loaded_full;
  }
  ReducedSystem loaded_rs;
  if (!rs) {
    loaded_rs = load_reduced_system(out_path(cfg, "rom"));
    rs = &loaded_rs;
  }
  Trajectory loaded_rom;
  if (!rom_traj) {
    const auto energy = [rs](const ColumnVector& z) { return rs->reduced_energy(z); };
    loaded_rom = trajectory_from_states(read_matrix(out_path(cfg, "rom_states.skm")),
                                        cfg, energy);
    rom_traj = &loaded_rom;
  }
  if (full_traj->size() != rom_traj->size()) {
    throw ShapeError("compare: trajectory lengths differ");
  }

  const double dx = grid_of(cfg).dx;
  const Index count = rom_traj->size();
  const double h0 = rs->reduced_energy(rom_traj->states.front());

  ComparisonReport report;
  report.rows.resize(static_cast<std::size_t>(count));
  parallel_for(count, [&](Index k) {
    const auto ku = static_cast<std::size_t>(k);
    ComparisonRow row;
    row.t = rom_traj->times[ku];
    row.energy_error = std::abs(rs->reduced_energy(rom_traj->states[ku]) - h0);
    row.l2_error = l2_error(full_traj->states[ku], rom_traj->states[ku], rs->v, dx);
    row.energy_full = full_traj->energies[ku];
    report.rows[ku] = row;
  });

  for (const ComparisonRow& row : report.rows) {
    report.max_energy_error = std::max(report.max_energy_error, row.energy_error);
  }
  report.final_l2_error = report.rows.back().l2_error;

  std::vector<std::string> rows;
  rows.reserve(report.rows.size());
  for (const ComparisonRow& row : report.rows) {
    rows.push_back(format_double(row.t) + "," + format_double(row.energy_error) + "," +
                   format_double(row.l2_error) + "," + format_double(row.energy_full));
  }
  write_csv(out_path(cfg, "comparison.csv"), "t,energy_error,l2_error,energy_full",
            rows);
  return report;
}

namespace {

void write_summary(const ExperimentConfig& cfg, const ComparisonReport& report) {
  json summary;
  summary["problem"] = to_string(cfg.problem);
  summary["variant"] = to_string(cfg.variant);
  summary["n"] = cfg.n;
  summary["r"] = cfg.r ? json(*cfg.r) : json();
  summary["epsilon"] = cfg.epsilon ? json(*cfg.epsilon) : json();
  summary["deim_m"] = cfg.deim_m ? json(*cfg.deim_m) : json();
  summary["steps"] = cfg.steps;
  summary["dt"] = cfg.dt();
  summary["max_energy_error"] = report.max_energy_error;
  summary["final_l2_error"] = report.final_l2_error;
  summary["offline_seconds"] = report.offline_seconds;
  summary["online_seconds"] = report.online_seconds;
  std::ofstream os(out_path(cfg, "summary.json"), std::ios::trunc);
  if (!os) throw FileIoError("cannot open summary.json");
  os << summary.dump(2) << "\n";
}

}  // namespace

ComparisonReport run_pipeline(const ExperimentConfig& cfg) {
  const auto offline_start = std::chrono::steady_clock::now();
  const Trajectory full_traj = stage_simulate(cfg);
  const PodBasis basis = stage_pod(cfg, &full_traj);
  const ReducedSystem rs = stage_reduce(cfg, &basis, &full_traj);
  const double offline_seconds = seconds_since(offline_start);

  const auto online_start = std::chrono::steady_clock::now();
  const Trajectory rom_traj = stage_rom_run(cfg, &rs, &full_traj);
  const double online_seconds = seconds_since(online_start);

  ComparisonReport report = stage_compare(cfg, &full_traj, &rs, &rom_traj);
  report.offline_seconds = offline_seconds;
  report.online_seconds = online_seconds;
  write_summary(cfg, report);
  return report;
}

void save_reduced_system(const std::filesystem::path& dir, const ReducedSystem& rs,
                         const ExperimentConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw FileIoError("cannot create " + dir.string());

  write_matrix(dir / "v.skm", rs.v.v);

  json manifest;
  manifest["schema"] = "skewmor-rom-1";
  manifest["problem"] = to_string(cfg.problem);
  manifest["variant"] = to_string(rs.variant);
  manifest["length"] = cfg.length;
  manifest["n"] = rs.full.n;
  manifest["grid_offset"] = grid_of(cfg).offset;
  manifest["d2_scaling"] = to_string(cfg.d2_scaling);
  manifest["dt"] = cfg.dt();
  manifest["r"] = rs.r;

  if (rs.variant == RomVariant::linear_s_fast) {
    write_matrix(dir / "mlin.skm", *rs.m_lin);
    write_matrix(dir / "sconst.skm", *rs.s_const_r);
  }
  if (rs.variant == RomVariant::skew_deim) {
    const SkewDeimOperator& op = *rs.deim_op;
    manifest["m"] = op.sample_count();

    write_matrix(dir / "ubar.skm", op.compressed_basis);
    write_matrix(dir / "w.skm", op.online_tensor_w);
    write_sigma_csv(dir / "sdeim_sigma.csv", op.s_singular_values);

    // Pattern and sampled positions as 1-based CSV rows.
    std::vector<std::string> pattern_rows;
    pattern_rows.reserve(op.pattern.size());
    for (const PatternEntry& e : op.pattern) {
      pattern_rows.push_back(std::to_string(e.row + 1) + "," + std::to_string(e.col + 1));
    }
    write_csv(dir / "pattern.csv", "i,j", pattern_rows);

    std::vector<std::string> index_rows;
    index_rows.reserve(op.indices.size());
    for (const Index q : op.indices) {
      index_rows.push_back(std::to_string(q + 1));
    }
    write_csv(dir / "indices.csv", "pattern_position", index_rows);
  }

  std::ofstream os(dir / "manifest.json", std::ios::trunc);
  if (!os) throw FileIoError("cannot open " + (dir / "manifest.json").string());
  os << manifest.dump(2) << "\n";
}

ReducedSystem load_reduced_system(const std::filesystem::path& dir) {
  std::ifstream is(dir / "manifest.json");
  if (!is) throw FileIoError("load_reduced_system: cannot open manifest in " +
                             dir.string());
  json manifest;
  try {
    manifest = json::parse(is);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("load_reduced_system: bad manifest: ") + e.what());
  }
  if (manifest.value("schema", "") != "skewmor-rom-1") {
    throw ConfigError("load_reduced_system: unknown manifest schema");
  }

  ExperimentConfig cfg;
  cfg.problem = problem_from_string(manifest.at("problem").get<std::string>());
  cfg.length = manifest.at("length").get<double>();
  cfg.n = manifest.at("n").get<Index>();
  cfg.grid_offset = manifest.at("grid_offset").get<double>();
  cfg.d2_scaling = d2_scaling_from_string(manifest.at("d2_scaling").get<std::string>());
  const RomVariant variant = variant_from_string(manifest.at("variant").get<std::string>());

  const SkewGradientSystem sys = system_of(cfg);

  PodBasis basis;
  basis.v = read_matrix(dir / "v.skm");
  basis.retained_singular_values = ColumnVector::Zero(basis.v.cols());
  basis.spectrum = basis.retained_singular_values;
  if (basis.v.rows() != sys.n) {
    throw ShapeError("load_reduced_system: basis does not match the manifest grid");
  }

  ReducedSystem rs;
  rs.variant = variant;
  rs.r = basis.rank();
  rs.v = basis;
  rs.full = sys;

  if (variant == RomVariant::linear_s_fast) {
    rs.m_lin = read_matrix(dir / "mlin.skm");
    rs.s_const_r = read_matrix(dir / "sconst.skm");
    if (rs.m_lin->rows() != rs.r * rs.r || rs.m_lin->cols() != rs.r) {
      throw ShapeError("load_reduced_system: mlin.skm has wrong shape");
    }
  } else if (variant == RomVariant::skew_deim) {
    SkewDeimOperator op;
    op.n = sys.n;
    op.r = rs.r;
    op.compressed_basis = read_matrix(dir / "ubar.skm");
    op.online_tensor_w = read_matrix(dir / "w.skm");

    std::ifstream pattern_is(dir / "pattern.csv");
    if (!pattern_is) throw FileIoError("load_reduced_system: missing pattern.csv");
    std::string line;
    std::getline(pattern_is, line);  // header
    while (std::getline(pattern_is, line)) {
      if (line.empty()) continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) {
        throw ConfigError("load_reduced_system: malformed pattern.csv row");
      }
      PatternEntry e;
      e.row = std::stoll(line.substr(0, comma)) - 1;
      e.col = std::stoll(line.substr(comma + 1)) - 1;
      op.pattern.push_back(e);
    }

    std::ifstream idx_is(dir / "indices.csv");
    if (!idx_is) throw FileIoError("load_reduced_system: missing indices.csv");
    std::getline(idx_is, line);  // header
    while (std::getline(idx_is, line)) {
      if (!line.empty()) op.indices.push_back(std::stoll(line) - 1);
    }

    if (op.online_tensor_w.rows() != rs.r * rs.r ||
        op.online_tensor_w.cols() != static_cast<Index>(op.indices.size())) {
      throw ShapeError("load_reduced_system: w.skm has wrong shape");
    }
    op.entry_dependencies.resize(op.indices.size());
    if (sys.s_entry) {
      for (Index k = 0; k < op.sample_count(); ++k) {
        const PatternEntry e = op.selected_position(k);
        op.entry_dependencies[static_cast<std::size_t>(k)] =
            sys.s_entry->stencil(e.row, e.col);
      }
    }
    rs.deim_op = std::move(op);
  }
  return rs;
}

}  // namespace skewmor
