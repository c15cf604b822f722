#include "cmbeam/config_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cmbeam/errors.hpp"

namespace cmbeam {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* a : allowed)
      if (it.key() == a) {
        known = true;
        break;
      }
    if (!known) bad(where, "unknown key \"" + it.key() + "\"");
  }
}

const json& require(const json& j, const char* key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) bad(where, std::string("missing \"") + key + "\"");
  return *it;
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) bad(where, "expected a number");
  return j.get<double>();
}

double as_finite(const json& j, const std::string& where) {
  const double v = as_number(j, where);
  if (!std::isfinite(v)) bad(where, "expected a finite number");
  return v;
}

std::uint64_t as_u64(const json& j, const std::string& where) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  bad(where, "expected a nonnegative integer");
}

std::size_t as_positive_size(const json& j, const std::string& where) {
  const std::uint64_t v = as_u64(j, where);
  if (v == 0) bad(where, "expected a positive integer");
  return static_cast<std::size_t>(v);
}

bool as_bool(const json& j, const std::string& where) {
  if (!j.is_boolean()) bad(where, "expected true or false");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) bad(where, "expected a string");
  return j.get<std::string>();
}

json parse_text(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ConfigError("config is not valid JSON");
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  return j;
}

ArrayGeometry parse_geometry(const json& j) {
  if (!j.is_object()) bad("geometry", "expected an object");
  check_keys(j, {"ula", "element_positions"}, "geometry");
  if (j.contains("ula") == j.contains("element_positions"))
    bad("geometry", "give exactly one of \"ula\" or \"element_positions\"");
  if (j.contains("ula")) {
    const json& u = j.at("ula");
    if (!u.is_object()) bad("geometry.ula", "expected an object");
    check_keys(u, {"elements", "spacing"}, "geometry.ula");
    const std::size_t elements =
        as_positive_size(require(u, "elements", "geometry.ula"),
                         "geometry.ula.elements");
    double spacing = 0.5;
    if (u.contains("spacing"))
      spacing = as_finite(u.at("spacing"), "geometry.ula.spacing");
    if (!(spacing > 0.0)) bad("geometry.ula.spacing", "must be positive");
    return ArrayGeometry::ula(elements, spacing);
  }
  const json& pos = j.at("element_positions");
  if (!pos.is_array() || pos.empty())
    bad("geometry.element_positions", "expected a nonempty array");
  ArrayGeometry g;
  for (const auto& e : pos)
    g.element_positions.push_back(
        as_finite(e, "geometry.element_positions"));
  return g;
}

SourceKind parse_kind(const json& j) {
  const std::string s = as_string(j, "sources[].kind");
  if (s == "constant_modulus_qpsk") return SourceKind::ConstantModulusQpsk;
  if (s == "gaussian_interferer") return SourceKind::GaussianInterferer;
  bad("sources[].kind", "unknown kind \"" + s + "\"");
}

ScenarioConfig parse_scenario(const json& j) {
  if (!j.is_object()) bad("scenario", "expected an object");
  check_keys(j,
             {"geometry", "sources", "noise_variance", "num_snapshots",
              "seed"},
             "scenario");
  ScenarioConfig sc;
  sc.geometry = parse_geometry(require(j, "geometry", "scenario"));
  if (j.contains("sources")) {
    const json& arr = j.at("sources");
    if (!arr.is_array()) bad("scenario.sources", "expected an array");
    for (const auto& s : arr) {
      if (!s.is_object()) bad("scenario.sources[]", "expected an object");
      check_keys(s, {"angle_deg", "kind", "power"}, "scenario.sources[]");
      SourceSpec spec;
      spec.angle_deg = as_finite(require(s, "angle_deg", "scenario.sources[]"),
                                 "sources[].angle_deg");
      if (s.contains("kind")) spec.kind = parse_kind(s.at("kind"));
      if (s.contains("power"))
        spec.power = as_finite(s.at("power"), "sources[].power");
      sc.sources.push_back(spec);
    }
  }
  if (j.contains("noise_variance"))
    sc.noise_variance =
        as_finite(j.at("noise_variance"), "scenario.noise_variance");
  sc.num_snapshots = as_positive_size(
      require(j, "num_snapshots", "scenario"), "scenario.num_snapshots");
  if (j.contains("seed")) sc.seed = as_u64(j.at("seed"), "scenario.seed");
  validate_scenario(sc);
  return sc;
}

SolverOptions parse_solver(const json& j) {
  if (!j.is_object()) bad("solver", "expected an object");
  check_keys(j,
             {"max_iterations", "fixed_point_tolerance", "objective_tolerance",
              "penalty_parameter", "acceleration"},
             "solver");
  SolverOptions o;
  if (j.contains("max_iterations"))
    o.max_iterations = as_positive_size(j.at("max_iterations"),
                                        "solver.max_iterations");
  if (j.contains("fixed_point_tolerance"))
    o.fixed_point_tolerance =
        as_finite(j.at("fixed_point_tolerance"), "solver.fixed_point_tolerance");
  if (j.contains("objective_tolerance"))
    o.objective_tolerance =
        as_finite(j.at("objective_tolerance"), "solver.objective_tolerance");
  if (j.contains("penalty_parameter"))
    o.penalty_parameter =
        as_finite(j.at("penalty_parameter"), "solver.penalty_parameter");
  if (j.contains("acceleration"))
    o.acceleration = as_bool(j.at("acceleration"), "solver.acceleration");
  if (!(o.fixed_point_tolerance > 0.0))
    bad("solver.fixed_point_tolerance", "must be positive");
  if (!(o.objective_tolerance > 0.0))
    bad("solver.objective_tolerance", "must be positive");
  if (!(o.penalty_parameter > 0.0))
    bad("solver.penalty_parameter", "must be positive");
  return o;
}

std::vector<ConstraintSpec> parse_constraint_specs(const json& j) {
  if (!j.is_array()) bad("constraints", "expected an array");
  std::vector<ConstraintSpec> out;
  for (const auto& c : j) {
    if (!c.is_object()) bad("constraints[]", "expected an object");
    check_keys(c, {"type", "angle_deg", "Q"}, "constraints[]");
    const std::string type =
        as_string(require(c, "type", "constraints[]"), "constraints[].type");
    ConstraintSpec spec;
    if (type == "look" || type == "null") {
      spec.kind = type == "look" ? ConstraintKind::Look : ConstraintKind::Null;
      spec.angle_deg = as_finite(require(c, "angle_deg", "constraints[]"),
                                 "constraints[].angle_deg");
      if (c.contains("Q")) bad("constraints[]", "\"Q\" is for subspace only");
    } else if (type == "subspace") {
      spec.kind = ConstraintKind::Subspace;
      spec.q = as_positive_size(require(c, "Q", "constraints[]"),
                                "constraints[].Q");
      if (c.contains("angle_deg"))
        bad("constraints[]", "\"angle_deg\" is for look/null only");
    } else {
      bad("constraints[].type", "unknown type \"" + type + "\"");
    }
    out.push_back(spec);
  }
  return out;
}

BaselineParams parse_baselines(const json& j) {
  if (!j.is_object()) bad("baselines", "expected an object");
  check_keys(j, {"sgd_step", "rls_forgetting", "rls_delta"}, "baselines");
  BaselineParams b;
  if (j.contains("sgd_step"))
    b.sgd_step = as_finite(j.at("sgd_step"), "baselines.sgd_step");
  if (j.contains("rls_forgetting"))
    b.rls_forgetting =
        as_finite(j.at("rls_forgetting"), "baselines.rls_forgetting");
  if (j.contains("rls_delta"))
    b.rls_delta = as_finite(j.at("rls_delta"), "baselines.rls_delta");
  if (!(b.sgd_step > 0.0)) bad("baselines.sgd_step", "must be positive");
  if (!(b.rls_forgetting > 0.0 && b.rls_forgetting <= 1.0))
    bad("baselines.rls_forgetting", "must lie in (0, 1]");
  if (!(b.rls_delta > 0.0)) bad("baselines.rls_delta", "must be positive");
  return b;
}

SweepSpec parse_sweep(const json& j, const ScenarioConfig& scenario) {
  if (!j.is_object()) bad("sweep", "expected an object");
  check_keys(j, {"parameter", "values"}, "sweep");
  const std::string param =
      as_string(require(j, "parameter", "sweep"), "sweep.parameter");
  SweepSpec sweep;
  if (param == "num_snapshots")
    sweep.kind = SweepKind::NumSnapshots;
  else if (param == "snr_db")
    sweep.kind = SweepKind::SnrDb;
  else if (param == "interferer_count")
    sweep.kind = SweepKind::InterfererCount;
  else
    bad("sweep.parameter", "unknown parameter \"" + param + "\"");
  const json& vals = require(j, "values", "sweep");
  if (!vals.is_array() || vals.empty())
    bad("sweep.values", "expected a nonempty array");
  for (const auto& v : vals)
    sweep.values.push_back(as_finite(v, "sweep.values"));

  if (sweep.kind == SweepKind::NumSnapshots) {
    for (double v : sweep.values)
      if (v < 1.0 || v != std::floor(v))
        bad("sweep.values", "snapshot counts must be positive integers");
  } else if (sweep.kind == SweepKind::InterfererCount) {
    std::size_t pool = 0;
    for (const auto& s : scenario.sources)
      if (s.kind == SourceKind::GaussianInterferer) ++pool;
    for (double v : sweep.values)
      if (v < 0.0 || v != std::floor(v) ||
          v > static_cast<double>(pool))
        bad("sweep.values",
            "interferer counts must be integers within the configured pool");
  } else if (sweep.kind == SweepKind::SnrDb) {
    if (desired_source_index(scenario) < 0)
      bad("sweep", "snr_db sweep needs a constant-modulus source");
  }
  return sweep;
}

json number_or_sentinel(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_from(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  bad(where, "expected a number or inf/-inf/nan");
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::TraceNorm:
      return "trace_norm";
    case Method::Lccma:
      return "lccma";
    case Method::SgdCma:
      return "sgd_cma";
    case Method::RlsCma:
      return "rls_cma";
  }
  throw InvalidArgument("unknown method");
}

Method method_from_name(const std::string& name) {
  if (name == "trace_norm") return Method::TraceNorm;
  if (name == "lccma") return Method::Lccma;
  if (name == "sgd_cma") return Method::SgdCma;
  if (name == "rls_cma") return Method::RlsCma;
  throw ConfigError("methods: unknown method \"" + name + "\"");
}

SolveConfig parse_solve_config(const std::string& json_text) {
  const json j = parse_text(json_text);
  check_keys(j, {"scenario", "solver", "constraints", "baselines"}, "config");
  SolveConfig cfg;
  cfg.scenario = parse_scenario(require(j, "scenario", "config"));
  if (j.contains("solver")) cfg.solver = parse_solver(j.at("solver"));
  if (j.contains("constraints"))
    cfg.constraints = parse_constraint_specs(j.at("constraints"));
  if (j.contains("baselines"))
    cfg.baselines = parse_baselines(j.at("baselines"));
  return cfg;
}

SolveConfig load_solve_config(const std::string& path) {
  return parse_solve_config(read_text_file(path));
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  const json j = parse_text(json_text);
  check_keys(j,
             {"name", "scenario", "solver", "constraints", "baselines",
              "sweep", "trials", "methods", "output_dir"},
             "config");
  ExperimentConfig cfg;
  cfg.name = as_string(require(j, "name", "config"), "config.name");
  cfg.scenario = parse_scenario(require(j, "scenario", "config"));
  if (j.contains("solver")) cfg.solver = parse_solver(j.at("solver"));
  if (j.contains("constraints"))
    cfg.constraints = parse_constraint_specs(j.at("constraints"));
  if (j.contains("baselines"))
    cfg.baselines = parse_baselines(j.at("baselines"));
  if (j.contains("sweep")) cfg.sweep = parse_sweep(j.at("sweep"), cfg.scenario);
  if (j.contains("trials"))
    cfg.trials = as_positive_size(j.at("trials"), "config.trials");
  const json& methods = require(j, "methods", "config");
  if (!methods.is_array() || methods.empty())
    bad("config.methods", "expected a nonempty array");
  for (const auto& m : methods) {
    const Method method =
        method_from_name(as_string(m, "config.methods[]"));
    for (Method seen : cfg.methods)
      if (seen == method) bad("config.methods", "duplicate method");
    cfg.methods.push_back(method);
  }
  if (j.contains("output_dir"))
    cfg.output_dir = as_string(j.at("output_dir"), "config.output_dir");
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return parse_experiment_config(read_text_file(path));
}

std::string solution_to_json(const LiftedSolution& solution,
                             const ArrayGeometry& geometry) {
  json j;
  j["objective"] = number_or_sentinel(solution.objective);
  j["iterations"] = solution.iterations;
  j["fixed_point_residual"] = number_or_sentinel(solution.fixed_point_residual);
  j["constraint_residual"] = number_or_sentinel(solution.constraint_residual);
  j["converged"] = solution.converged;
  j["eigen_ratio"] = number_or_sentinel(solution.eigen_ratio);
  j["eigenvalues"] = json::array();
  for (Eigen::Index i = 0; i < solution.eig.eigenvalues.size(); ++i)
    j["eigenvalues"].push_back(number_or_sentinel(solution.eig.eigenvalues[i]));
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < solution.w_hat.size(); ++i) {
    re.push_back(number_or_sentinel(solution.w_hat[i].real()));
    im.push_back(number_or_sentinel(solution.w_hat[i].imag()));
  }
  j["w_hat"] = {{"re", re}, {"im", im}};
  j["geometry"] = {{"element_positions", geometry.element_positions}};
  return j.dump(2) + "\n";
}

StoredSolution parse_solution_json(const std::string& json_text) {
  const json j = parse_text(json_text);
  const json& w = require(j, "w_hat", "solution");
  const json& re = require(w, "re", "solution.w_hat");
  const json& im = require(w, "im", "solution.w_hat");
  if (!re.is_array() || !im.is_array() || re.size() != im.size() ||
      re.empty())
    bad("solution.w_hat", "re/im must be equal-length nonempty arrays");
  StoredSolution out;
  out.w_hat.resize(static_cast<Eigen::Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i)
    out.w_hat[static_cast<Eigen::Index>(i)] = {
        number_from(re[i], "solution.w_hat.re"),
        number_from(im[i], "solution.w_hat.im")};
  const json& g = require(j, "geometry", "solution");
  const json& pos = require(g, "element_positions", "solution.geometry");
  if (!pos.is_array() || pos.size() != re.size())
    bad("solution.geometry.element_positions",
        "must match the weight vector length");
  for (const auto& p : pos)
    out.geometry.element_positions.push_back(
        as_finite(p, "solution.geometry.element_positions"));
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

std::string snapshots_to_csv(const ComplexMatrix& snapshots) {
  std::string out;
  for (Eigen::Index p = 0; p < snapshots.rows(); ++p) {
    if (p > 0) out += ',';
    const std::string idx = std::to_string(p + 1);
    out += "re_x" + idx + ",im_x" + idx;
  }
  out += '\n';
  for (Eigen::Index n = 0; n < snapshots.cols(); ++n) {
    for (Eigen::Index p = 0; p < snapshots.rows(); ++p) {
      if (p > 0) out += ',';
      out += format_double(snapshots(p, n).real());
      out += ',';
      out += format_double(snapshots(p, n).imag());
    }
    out += '\n';
  }
  return out;
}

std::string beampattern_to_csv(
    const std::vector<BeampatternSample>& samples) {
  std::string out = "angle_deg,gain_db\n";
  for (const auto& s : samples) {
    out += format_double(s.angle_deg);
    out += ',';
    out += format_double(s.gain_db);
    out += '\n';
  }
  return out;
}

std::string matrix_to_csv(const ComplexMatrix& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      if (k > 0) out += ',';
      out += format_double(m(i, k).real());
      out += ',';
      out += format_double(m(i, k).imag());
    }
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path);
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(content.data(),
            static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

std::vector<LiftedConstraint> build_constraints(
    const std::vector<ConstraintSpec>& specs, const ArrayGeometry& geometry,
    const ComplexMatrix& snapshots) {
  std::vector<LinearConstraint> linear;
  for (const auto& spec : specs) {
    switch (spec.kind) {
      case ConstraintKind::Look:
        linear.push_back(look_direction(geometry, spec.angle_deg));
        break;
      case ConstraintKind::Null:
        linear.push_back(null_direction(geometry, spec.angle_deg));
        break;
      case ConstraintKind::Subspace: {
        auto subs =
            signal_subspace_constraints(sample_covariance(snapshots), spec.q);
        linear.insert(linear.end(), subs.begin(), subs.end());
        break;
      }
    }
  }
  return lift_constraints(linear);
}

}  // namespace cmbeam
