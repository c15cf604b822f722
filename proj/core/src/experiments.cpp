#include "cmbeam/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <utility>

#include "cmbeam/baselines.hpp"
#include "cmbeam/errors.hpp"
#include "cmbeam/metrics.hpp"
#include "cmbeam/rng.hpp"
#include "cmbeam/solver.hpp"

namespace cmbeam {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Decorrelates the interferer-pool shuffle from the snapshot stream, which
// reuses the trial seed directly.
constexpr std::uint64_t kShuffleSalt = 0x9e3779b97f4a7c15ull;

struct MethodOutcome {
  TrialRecord record;
  ComplexVector weights;  // empty when the method failed
};

MethodOutcome run_method(Method method, const SnapshotSet& set,
                         const ExperimentConfig& cfg, std::size_t trial,
                         std::uint64_t seed, double sweep_value) {
  MethodOutcome out;
  out.record = TrialRecord{trial,   seed, method, sweep_value, kNan,
                           kNan,    0,    0.0,    false};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    switch (method) {
      case Method::TraceNorm: {
        const LiftedSolution sol = solve_cma(set.snapshots, cfg.solver);
        out.record.sinr_db = sinr_db(sol.w_hat, set);
        out.record.eigen_ratio = sol.eigen_ratio;
        out.record.iterations = sol.iterations;
        out.record.converged = sol.converged;
        out.weights = sol.w_hat;
        break;
      }
      case Method::Lccma: {
        const auto lifted = build_constraints(
            cfg.constraints, set.truth.geometry, set.snapshots);
        const LiftedSolution sol =
            solve_lccma(set.snapshots, lifted, cfg.solver);
        out.record.sinr_db = sinr_db(sol.w_hat, set);
        out.record.eigen_ratio = sol.eigen_ratio;
        out.record.iterations = sol.iterations;
        out.record.converged = sol.converged;
        out.weights = sol.w_hat;
        break;
      }
      case Method::SgdCma: {
        const AdaptiveTrajectory traj =
            sgd_cma(set.snapshots, cfg.baselines.sgd_step);
        out.record.sinr_db = sinr_db(traj.final, set);
        out.record.iterations =
            static_cast<std::size_t>(set.snapshots.cols());
        out.record.converged = true;
        out.weights = traj.final;
        break;
      }
      case Method::RlsCma: {
        const AdaptiveTrajectory traj =
            rls_cma(set.snapshots, cfg.baselines.rls_forgetting,
                    cfg.baselines.rls_delta);
        out.record.sinr_db = sinr_db(traj.final, set);
        out.record.iterations =
            static_cast<std::size_t>(set.snapshots.cols());
        out.record.converged = true;
        out.weights = traj.final;
        break;
      }
    }
  } catch (const DivergedError& e) {
    out.record.iterations = e.sample_index();
    out.weights.resize(0);
  } catch (const DegenerateSolution&) {
    out.weights.resize(0);
  }
  const auto t1 = std::chrono::steady_clock::now();
  out.record.wall_ms =
      std::chrono::duration<double, std::milli>(t1 - t0).count();
  return out;
}

// Per-trial data for every sweep cell, in config value order.
std::vector<std::pair<double, SnapshotSet>> trial_cells(
    const ExperimentConfig& cfg, std::uint64_t seed) {
  std::vector<std::pair<double, SnapshotSet>> cells;
  ScenarioConfig base = cfg.scenario;
  base.seed = seed;
  switch (cfg.sweep.kind) {
    case SweepKind::None: {
      cells.emplace_back(0.0, generate_snapshots(base));
      break;
    }
    case SweepKind::NumSnapshots: {
      const double max_n =
          *std::max_element(cfg.sweep.values.begin(), cfg.sweep.values.end());
      ScenarioConfig full = base;
      full.num_snapshots = static_cast<std::size_t>(max_n);
      const SnapshotSet whole = generate_snapshots(full);
      for (double v : cfg.sweep.values)
        cells.emplace_back(v, prefix(whole, static_cast<std::size_t>(v)));
      break;
    }
    case SweepKind::SnrDb: {
      const int desired = desired_source_index(base);
      const double p0 =
          base.sources[static_cast<std::size_t>(desired)].power;
      for (double v : cfg.sweep.values) {
        ScenarioConfig scen = base;
        scen.noise_variance = p0 * std::pow(10.0, -v / 10.0);
        cells.emplace_back(v, generate_snapshots(scen));
      }
      break;
    }
    case SweepKind::InterfererCount: {
      std::vector<std::size_t> pool;
      for (std::size_t i = 0; i < base.sources.size(); ++i)
        if (base.sources[i].kind == SourceKind::GaussianInterferer)
          pool.push_back(i);
      SeededRng shuffle_rng(seed ^ kShuffleSalt);
      for (std::size_t i = pool.size(); i > 1; --i)
        std::swap(pool[i - 1], pool[shuffle_rng.raw() % i]);
      for (double v : cfg.sweep.values) {
        ScenarioConfig scen = base;
        scen.sources.clear();
        for (const auto& s : base.sources)
          if (s.kind != SourceKind::GaussianInterferer)
            scen.sources.push_back(s);
        for (std::size_t k = 0; k < static_cast<std::size_t>(v); ++k)
          scen.sources.push_back(base.sources[pool[k]]);
        cells.emplace_back(v, generate_snapshots(scen));
      }
      break;
    }
  }
  return cells;
}

struct PatternAccumulator {
  RealVector power_sum;  // per grid point, peak-normalized linear power
  std::size_t count = 0;
  RealVector angles;
};

std::string value_label(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
    return buf;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  if (config.trials < 1) throw ConfigError("experiment needs trials >= 1");
  if (config.methods.empty())
    throw ConfigError("experiment needs at least one method");
  validate_scenario(config.scenario);

  ExperimentReport report;
  report.config = config;

  const std::size_t num_values =
      config.sweep.kind == SweepKind::None ? 1 : config.sweep.values.size();
  report.records.reserve(config.trials * num_values *
                         config.methods.size());

  // cell key = value index * methods + method index; accumulation orders are
  // fixed by the config, so serial and any parallel schedule agree.
  std::vector<PatternAccumulator> accumulators(num_values *
                                               config.methods.size());

  for (std::size_t t = 0; t < config.trials; ++t) {
    const std::uint64_t seed =
        config.scenario.seed + static_cast<std::uint64_t>(t);
    const auto cells = trial_cells(config, seed);
    for (std::size_t vi = 0; vi < cells.size(); ++vi) {
      for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
        MethodOutcome outcome =
            run_method(config.methods[mi], cells[vi].second, config, t, seed,
                       cells[vi].first);
        report.records.push_back(outcome.record);
        if (outcome.weights.size() > 0) {
          const auto pattern =
              beampattern(outcome.weights, cells[vi].second.truth.geometry);
          auto& acc = accumulators[vi * config.methods.size() + mi];
          if (acc.count == 0) {
            acc.power_sum = RealVector::Zero(
                static_cast<Eigen::Index>(pattern.size()));
            acc.angles.resize(static_cast<Eigen::Index>(pattern.size()));
            for (std::size_t i = 0; i < pattern.size(); ++i)
              acc.angles[static_cast<Eigen::Index>(i)] =
                  pattern[i].angle_deg;
          }
          for (std::size_t i = 0; i < pattern.size(); ++i)
            acc.power_sum[static_cast<Eigen::Index>(i)] +=
                std::pow(10.0, pattern[i].gain_db / 10.0);
          ++acc.count;
        }
      }
    }
  }

  // aggregates, value-major then method, matching the summary layout
  for (std::size_t vi = 0; vi < num_values; ++vi) {
    const double value =
        config.sweep.kind == SweepKind::None ? 0.0 : config.sweep.values[vi];
    for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
      const Method method = config.methods[mi];
      CellAggregate cell{method, value, 0, 0, 0, kNan, kNan, 0.0, kNan};
      double sinr_sum = 0.0;
      double iter_sum = 0.0;
      std::vector<double> sinrs;
      for (const auto& r : report.records) {
        if (r.method != method || r.sweep_value != value) continue;
        ++cell.trials;
        iter_sum += static_cast<double>(r.iterations);
        if (r.converged) ++cell.converged;
        if (std::isfinite(r.sinr_db)) {
          ++cell.valid;
          sinr_sum += r.sinr_db;
          sinrs.push_back(r.sinr_db);
        }
        if (!std::isnan(r.eigen_ratio))
          cell.min_eigen_ratio = std::isnan(cell.min_eigen_ratio)
                                     ? r.eigen_ratio
                                     : std::min(cell.min_eigen_ratio,
                                                r.eigen_ratio);
      }
      if (cell.trials > 0)
        cell.mean_iterations = iter_sum / static_cast<double>(cell.trials);
      if (cell.valid > 0) {
        cell.mean_sinr_db = sinr_sum / static_cast<double>(cell.valid);
        double sq = 0.0;
        for (double s : sinrs) {
          const double d = s - cell.mean_sinr_db;
          sq += d * d;
        }
        cell.std_sinr_db =
            cell.valid > 1
                ? std::sqrt(sq / static_cast<double>(cell.valid - 1))
                : 0.0;
      }
      report.aggregates.push_back(cell);

      const auto& acc = accumulators[vi * config.methods.size() + mi];
      if (acc.count > 0) {
        AveragedPattern avg{method, value, {}};
        RealVector mean = acc.power_sum / static_cast<double>(acc.count);
        const double peak = mean.maxCoeff();
        avg.samples.resize(static_cast<std::size_t>(mean.size()));
        for (Eigen::Index i = 0; i < mean.size(); ++i) {
          const double g = mean[i] > 0.0
                               ? 10.0 * std::log10(mean[i] / peak)
                               : -std::numeric_limits<double>::infinity();
          avg.samples[static_cast<std::size_t>(i)] = {acc.angles[i], g};
        }
        report.patterns.push_back(std::move(avg));
      }
    }
  }
  return report;
}

std::string report_to_csv(const std::vector<TrialRecord>& records) {
  std::string out =
      "trial,seed,method,sweep_value,sinr_db,eigen_ratio,iterations,wall_ms\n";
  for (const auto& r : records) {
    out += std::to_string(r.trial);
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += method_name(r.method);
    out += ',';
    out += format_double(r.sweep_value);
    out += ',';
    out += format_double(r.sinr_db);
    out += ',';
    out += format_double(r.eigen_ratio);
    out += ',';
    out += std::to_string(r.iterations);
    out += ',';
    out += format_double(r.wall_ms);
    out += '\n';
  }
  return out;
}

std::string summary_to_csv(const std::vector<CellAggregate>& cells) {
  std::string out =
      "method,sweep_value,trials,valid,converged,mean_sinr_db,std_sinr_db,"
      "mean_iterations,min_eigen_ratio\n";
  for (const auto& c : cells) {
    out += method_name(c.method);
    out += ',';
    out += format_double(c.sweep_value);
    out += ',';
    out += std::to_string(c.trials);
    out += ',';
    out += std::to_string(c.valid);
    out += ',';
    out += std::to_string(c.converged);
    out += ',';
    out += format_double(c.mean_sinr_db);
    out += ',';
    out += format_double(c.std_sinr_db);
    out += ',';
    out += format_double(c.mean_iterations);
    out += ',';
    out += format_double(c.min_eigen_ratio);
    out += '\n';
  }
  return out;
}

void write_report(const ExperimentReport& report,
                  const std::string& output_dir) {
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec)
    throw IoError("cannot create output directory: " + output_dir + " (" +
                  ec.message() + ")");
  const std::filesystem::path dir(output_dir);
  write_text_file((dir / "report.csv").string(),
                  report_to_csv(report.records));
  write_text_file((dir / "summary.csv").string(),
                  summary_to_csv(report.aggregates));
  for (const auto& p : report.patterns) {
    std::string name = "pattern_" + method_name(p.method);
    if (report.config.sweep.kind != SweepKind::None)
      name += "_" + value_label(p.sweep_value);
    name += ".csv";
    write_text_file((dir / name).string(), beampattern_to_csv(p.samples));
  }
}

}  // namespace cmbeam
