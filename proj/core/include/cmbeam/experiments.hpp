#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cmbeam/config_io.hpp"

namespace cmbeam {

// One (trial, sweep value, method) measurement. Failed trials (baseline
// divergence, degenerate extraction) keep their row with NaN metrics; for a
// diverged baseline `iterations` holds the offending sample index.
struct TrialRecord {
  std::size_t trial;
  std::uint64_t seed;
  Method method;
  double sweep_value;  // 0 when the experiment has no sweep
  double sinr_db;
  double eigen_ratio;  // NaN for the on-line baselines
  std::size_t iterations;
  double wall_ms;
  bool converged;  // diagnostics only; not a report.csv column
};

// Per-(method, sweep value) summary. Means and the standard deviation
// (sample, n-1; 0 for a single point) run over records with finite SINR;
// `valid` counts those records. min_eigen_ratio is NaN when no record in the
// cell has one (on-line baselines).
struct CellAggregate {
  Method method;
  double sweep_value;
  std::size_t trials;
  std::size_t valid;
  std::size_t converged;
  double mean_sinr_db;
  double std_sinr_db;
  double mean_iterations;
  double min_eigen_ratio;
};

// Trial-averaged beampattern of one cell: per-trial peak-normalized powers
// averaged linearly, re-normalized, and expressed in dB.
struct AveragedPattern {
  Method method;
  double sweep_value;
  std::vector<BeampatternSample> samples;
};

struct ExperimentReport {
  ExperimentConfig config;  // as run (after any CLI overrides)
  std::vector<TrialRecord> records;
  std::vector<CellAggregate> aggregates;
  std::vector<AveragedPattern> patterns;
};

// Runs trials x sweep values x methods. Trial t uses seed base+t; a
// num_snapshots sweep generates each trial once at the largest N and takes
// prefixes, so batch and on-line methods see identical data; an snr_db sweep
// rescales the noise variance to desired_power/10^(v/10) at a fixed seed; an
// interferer_count sweep draws value-many interferers from the configured
// pool in per-trial shuffled order. Pure compute — no filesystem output.
ExperimentReport run_experiment(const ExperimentConfig& config);

// report.csv / summary.csv bodies.
std::string report_to_csv(const std::vector<TrialRecord>& records);
std::string summary_to_csv(const std::vector<CellAggregate>& cells);

// Writes report.csv, summary.csv, and pattern_<method>[_<value>].csv under
// output_dir (created if needed). Throws IoError with the path on failure.
void write_report(const ExperimentReport& report,
                  const std::string& output_dir);

}  // namespace cmbeam
