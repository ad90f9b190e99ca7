#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "skewmor/deim.hpp"
#include "skewmor/integrators.hpp"
#include "skewmor/la_core.hpp"
#include "skewmor/pipeline.hpp"
#include "skewmor/pod.hpp"
#include "skewmor/problems.hpp"
#include "skewmor/rom.hpp"

namespace py = pybind11;
using namespace skewmor;

namespace {

Problem problem_from(const std::string& name) {
  if (name == "kdv") return Problem::kdv;
  if (name == "mkdv") return Problem::mkdv;
  throw ConfigError("unknown problem '" + name + "'");
}

D2Scaling scaling_from(const std::string& name) {
  if (name == "standard") return D2Scaling::standard;
  if (name == "paper_literal") return D2Scaling::paper_literal;
  throw ConfigError("unknown d2_scaling '" + name + "'");
}

RomVariant variant_from(const std::string& name) {
  if (name == "galerkin_generic") return RomVariant::galerkin_generic;
  if (name == "skew_generic") return RomVariant::skew_generic;
  if (name == "linear_s_fast") return RomVariant::linear_s_fast;
  if (name == "skew_deim") return RomVariant::skew_deim;
  throw ConfigError("unknown variant '" + name + "'");
}

struct PySystem {
  Problem problem;
  GridConfig grid;
  SkewGradientSystem sys;
};

PySystem make_system(const std::string& problem, double length, Index n,
                     const std::string& d2_scaling) {
  PySystem out;
  out.problem = problem_from(problem);
  out.grid = GridConfig::make(length, n);
  const DifferenceOperators ops = central_diff_ops(out.grid, scaling_from(d2_scaling));
  out.sys = out.problem == Problem::kdv ? kdv_system(out.grid, ops)
                                        : mkdv_system(out.grid, ops);
  return out;
}

py::tuple trajectory_tuple(const Trajectory& traj) {
  const Index n = traj.states.front().size();
  DenseMatrix states(n, traj.size());
  ColumnVector times(traj.size());
  ColumnVector energies(traj.size());
  for (Index j = 0; j < traj.size(); ++j) {
    states.col(j) = traj.states[static_cast<std::size_t>(j)];
    times[j] = traj.times[static_cast<std::size_t>(j)];
    energies[j] = traj.energies[static_cast<std::size_t>(j)];
  }
  return py::make_tuple(times, states, energies);
}

MidpointConfig midpoint_config(double dt, double newton_tol, int max_iter,
                               bool user_jacobian) {
  MidpointConfig cfg;
  cfg.dt = dt;
  cfg.newton_tol = newton_tol;
  cfg.newton_max_iter = max_iter;
  cfg.jacobian =
      user_jacobian ? JacobianMode::user_supplied : JacobianMode::finite_difference;
  return cfg;
}

PodBasis basis_from_matrix(const DenseMatrix& v) {
  PodBasis basis;
  basis.v = v;
  basis.retained_singular_values = ColumnVector::Ones(v.cols());
  basis.spectrum = basis.retained_singular_values;
  return basis;
}

struct PyReducedModel {
  ReducedSystem rs;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Structure-preserving model order reduction for skew-gradient systems";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  m.def("vec", &vec, py::arg("a"), "Column-stack a matrix into a vector");
  m.def("unvec", &unvec, py::arg("v"), py::arg("rows"), py::arg("cols"));
  m.def("apply_kron_transpose", &apply_kron_transpose, py::arg("v"), py::arg("w"),
        py::arg("x"), "(V (x) W)^T x without forming the Kronecker product");
  m.def(
      "svd_thin",
      [](const DenseMatrix& a) {
        const SvdResult s = svd_thin(a);
        return py::make_tuple(s.left, s.singular_values, s.right_t);
      },
      py::arg("a"), "Thin SVD: (U, sigma, V^T) with deterministic signs");

  m.def(
      "write_matrix",
      [](const std::string& path, const DenseMatrix& a) { write_matrix(path, a); },
      py::arg("path"), py::arg("a"), "Write a matrix as an SKM1 file");
  m.def(
      "read_matrix", [](const std::string& path) { return read_matrix(path); },
      py::arg("path"));

  m.def(
      "central_difference_operators",
      [](double length, Index n, const std::string& d2_scaling) {
        const DifferenceOperators ops =
            central_diff_ops(GridConfig::make(length, n), scaling_from(d2_scaling));
        return py::make_tuple(ops.d1, ops.d2, ops.d3);
      },
      py::arg("length"), py::arg("n"), py::arg("d2_scaling") = "standard");

  m.def(
      "initial_profile",
      [](const std::string& problem, double length, Index n) {
        return initial_profile(problem_from(problem), GridConfig::make(length, n));
      },
      py::arg("problem"), py::arg("length"), py::arg("n"));

  py::class_<PySystem>(m, "System")
      .def_static("make", &make_system, py::arg("problem"), py::arg("length"),
                  py::arg("n"), py::arg("d2_scaling") = "standard")
      .def_property_readonly("n", [](const PySystem& s) { return s.sys.n; })
      .def_property_readonly("dx", [](const PySystem& s) { return s.grid.dx; })
      .def("rhs", [](const PySystem& s, const ColumnVector& y) { return rhs(s.sys, y); })
      .def("s_matrix",
           [](const PySystem& s, const ColumnVector& y) { return s.sys.s_matrix(y); })
      .def("energy",
           [](const PySystem& s, const ColumnVector& y) { return energy_of(s.sys, y); })
      .def("check_skew",
           [](const PySystem& s, const ColumnVector& y) { return check_skew(s.sys, y); })
      .def("initial_profile",
           [](const PySystem& s) { return initial_profile(s.problem, s.grid); })
      .def(
          "integrate",
          [](const PySystem& s, const ColumnVector& y0, double dt, long steps,
             long record_every, double newton_tol) {
            return trajectory_tuple(
                integrate(s.sys, y0,
                          midpoint_config(dt, newton_tol, 50,
                                          static_cast<bool>(s.sys.rhs_jacobian)),
                          steps, record_every));
          },
          py::arg("y0"), py::arg("dt"), py::arg("steps"), py::arg("record_every") = 1,
          py::arg("newton_tol") = 1e-10,
          "Implicit-midpoint trajectory: (times, states, energies)");

  m.def(
      "pod_basis",
      [](const DenseMatrix& snapshots, std::optional<Index> r,
         std::optional<double> epsilon) {
        if (r.has_value() == epsilon.has_value()) {
          throw ConfigError("pod_basis: pass exactly one of r, epsilon");
        }
        const PodBasis basis =
            pod_basis(snapshots, r ? PodTruncation::fixed_rank(*r)
                                   : PodTruncation::energy(*epsilon));
        return py::make_tuple(basis.v, basis.spectrum);
      },
      py::arg("snapshots"), py::arg("r") = std::nullopt,
      py::arg("epsilon") = std::nullopt,
      "POD basis of a snapshot matrix: (V, all_singular_values)");

  m.def("projection_residual", &projection_residual, py::arg("y"), py::arg("v"));

  m.def(
      "deim_select",
      [](const DenseMatrix& basis) { return deim_select(basis).indices; },
      py::arg("basis"), "Greedy interpolation indices (0-based)");

  m.def(
      "quadratic_invariant_condition",
      [](const DenseMatrix& a, const ColumnVector& b) {
        ButcherTableau tableau;
        tableau.a = a;
        tableau.b = b;
        tableau.c = a.rowwise().sum();
        const auto result = satisfies_quadratic_invariant_condition(tableau);
        return py::make_tuple(result.satisfied, result.max_violation);
      },
      py::arg("a"), py::arg("b"),
      "Checks b_i a_ij + b_j a_ji = b_i b_j; (satisfied, max_violation)");

  py::class_<PyReducedModel>(m, "ReducedModel")
      .def_property_readonly("r", [](const PyReducedModel& rm) { return rm.rs.r; })
      .def_property_readonly("basis", [](const PyReducedModel& rm) { return rm.rs.v.v; })
      .def("rhs",
           [](const PyReducedModel& rm, const ColumnVector& z) { return rm.rs.rhs(z); })
      .def("s_reduced", [](const PyReducedModel& rm,
                           const ColumnVector& z) { return rm.rs.s_reduced(z); })
      .def("energy", [](const PyReducedModel& rm,
                        const ColumnVector& z) { return rm.rs.reduced_energy(z); })
      .def("initial_condition", [](const PyReducedModel& rm, const ColumnVector& y0) {
        return rm.rs.initial_condition(y0);
      })
      .def(
          "integrate",
          [](const PyReducedModel& rm, const ColumnVector& z0, double dt, long steps,
             long record_every, double newton_tol) {
            if (rm.rs.variant == RomVariant::galerkin_generic) {
              const auto energy = [&rm](const ColumnVector& z) {
                return rm.rs.reduced_energy(z);
              };
              return trajectory_tuple(integrate(
                  rm.rs.rhs_fn(), z0, midpoint_config(dt, newton_tol, 50, false), steps,
                  record_every, energy));
            }
            const SkewGradientSystem reduced = rm.rs.as_skew_system();
            return trajectory_tuple(
                integrate(reduced, z0,
                          midpoint_config(dt, newton_tol, 50,
                                          static_cast<bool>(reduced.rhs_jacobian)),
                          steps, record_every));
          },
          py::arg("z0"), py::arg("dt"), py::arg("steps"), py::arg("record_every") = 1,
          py::arg("newton_tol") = 1e-12);

  m.def(
      "reduce",
      [](const PySystem& system, const DenseMatrix& v, const std::string& variant,
         std::optional<Index> deim_m, std::optional<DenseMatrix> snapshot_states) {
        RomBuildOptions options;
        options.deim_m = deim_m;
        std::vector<ColumnVector> states;
        if (snapshot_states) {
          for (Index j = 0; j < snapshot_states->cols(); ++j) {
            states.push_back(snapshot_states->col(j));
          }
        }
        PyReducedModel rm;
        rm.rs = reduce(system.sys, basis_from_matrix(v), variant_from(variant), options,
                       states.empty() ? nullptr : &states);
        return rm;
      },
      py::arg("system"), py::arg("v"), py::arg("variant"),
      py::arg("deim_m") = std::nullopt, py::arg("snapshot_states") = std::nullopt);

  m.def(
      "l2_error",
      [](const ColumnVector& y_full, const ColumnVector& z, const DenseMatrix& v,
         double dx) { return l2_error(y_full, z, basis_from_matrix(v), dx); },
      py::arg("y_full"), py::arg("z"), py::arg("v"), py::arg("dx"));

  m.def(
      "run_pipeline",
      [](const std::string& config_json, const std::string& out_dir) {
        ExperimentConfig cfg = parse_config(config_json);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        const ComparisonReport report = run_pipeline(cfg);
        py::dict out;
        out["rows"] = report.rows.size();
        out["max_energy_error"] = report.max_energy_error;
        out["final_l2_error"] = report.final_l2_error;
        out["offline_seconds"] = report.offline_seconds;
        out["online_seconds"] = report.online_seconds;
        return out;
      },
      py::arg("config_json"), py::arg("out_dir") = "",
      "Full simulate/pod/reduce/rom-run/compare pipeline from a JSON config");
}
