#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cmbeam/array_sim.hpp"
#include "cmbeam/constraints.hpp"
#include "cmbeam/metrics.hpp"
#include "cmbeam/solver.hpp"

namespace cmbeam {

enum class ConstraintKind { Look, Null, Subspace };

// One entry of the "constraints" config list. Look/null carry an angle;
// subspace carries Q, the number of sources spanning the signal subspace.
struct ConstraintSpec {
  ConstraintKind kind = ConstraintKind::Look;
  double angle_deg = 0.0;
  std::size_t q = 0;
};

struct BaselineParams {
  double sgd_step = 1e-3;
  double rls_forgetting = 0.985;
  double rls_delta = 0.001;
};

// A single-solve configuration: scenario plus optional solver, constraint,
// and baseline sections.
struct SolveConfig {
  ScenarioConfig scenario;
  SolverOptions solver;
  std::vector<ConstraintSpec> constraints;
  BaselineParams baselines;
};

enum class Method { TraceNorm, Lccma, SgdCma, RlsCma };

// "trace_norm", "lccma", "sgd_cma", "rls_cma" — the spelling used in configs
// and report CSVs.
std::string method_name(Method m);
Method method_from_name(const std::string& name);

enum class SweepKind { None, NumSnapshots, SnrDb, InterfererCount };

struct SweepSpec {
  SweepKind kind = SweepKind::None;
  std::vector<double> values;  // empty iff kind == None
};

struct ExperimentConfig {
  std::string name;
  ScenarioConfig scenario;  // scenario.seed is the base seed; trial t adds t
  SolverOptions solver;
  std::vector<ConstraintSpec> constraints;
  BaselineParams baselines;
  SweepSpec sweep;
  std::size_t trials = 50;
  std::vector<Method> methods;
  std::string output_dir = ".";
};

// Parsers reject unknown keys and invalid values with a ConfigError naming
// the offending location; load_* variants read the file first (IoError on
// filesystem failure).
SolveConfig parse_solve_config(const std::string& json_text);
SolveConfig load_solve_config(const std::string& path);
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

// Solution diagnostics as pretty-printed JSON (keys sorted, trailing
// newline, no timing fields so identical solves serialize byte-identically).
// Non-finite values are encoded as the strings "inf"/"-inf"/"nan".
std::string solution_to_json(const LiftedSolution& solution,
                             const ArrayGeometry& geometry);

// The subset of a stored solution needed to re-evaluate its beampattern.
struct StoredSolution {
  ComplexVector w_hat;
  ArrayGeometry geometry;
};
StoredSolution parse_solution_json(const std::string& json_text);

// All CSV emitters format doubles with %.17g (round-trip exact,
// deterministic) and spell non-finite values inf/-inf/nan.
std::string format_double(double v);

// Header re_x1,im_x1,...,re_xP,im_xP; one row per snapshot.
std::string snapshots_to_csv(const ComplexMatrix& snapshots);

// Header angle_deg,gain_db; one row per grid point.
std::string beampattern_to_csv(const std::vector<BeampatternSample>& samples);

// No header; row i holds re/im interleaved entries of matrix row i.
std::string matrix_to_csv(const ComplexMatrix& m);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Materializes config constraint specs: look/null from the geometry,
// subspace from the sample covariance of the given snapshots.
std::vector<LiftedConstraint> build_constraints(
    const std::vector<ConstraintSpec>& specs, const ArrayGeometry& geometry,
    const ComplexMatrix& snapshots);

}  // namespace cmbeam
