#include "cmbeam/array_sim.hpp"

#include <cmath>
#include <complex>

#include "cmbeam/errors.hpp"
#include "cmbeam/rng.hpp"

namespace cmbeam {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

ArrayGeometry ArrayGeometry::ula(std::size_t elements, double spacing) {
  ArrayGeometry g;
  g.element_positions.resize(elements);
  for (std::size_t p = 0; p < elements; ++p) {
    g.element_positions[p] = static_cast<double>(p) * spacing;
  }
  return g;
}

ComplexVector steering_vector(const ArrayGeometry& geometry, double angle_deg) {
  if (!std::isfinite(angle_deg)) {
    throw InvalidArgument("steering_vector: non-finite angle");
  }
  if (geometry.size() == 0) {
    throw InvalidArgument("steering_vector: empty geometry");
  }
  const double s = std::sin(angle_deg * kPi / 180.0);
  ComplexVector a(geometry.size());
  for (std::size_t p = 0; p < geometry.size(); ++p) {
    const double phase = 2.0 * kPi * geometry.element_positions[p] * s;
    a[static_cast<Eigen::Index>(p)] = {std::cos(phase), std::sin(phase)};
  }
  return a;
}

int desired_source_index(const ScenarioConfig& config) {
  int best = -1;
  double best_power = -1.0;
  for (std::size_t i = 0; i < config.sources.size(); ++i) {
    const SourceSpec& s = config.sources[i];
    if (s.kind == SourceKind::ConstantModulusQpsk && s.power > best_power) {
      best = static_cast<int>(i);
      best_power = s.power;
    }
  }
  return best;
}

void validate_scenario(const ScenarioConfig& config) {
  const std::size_t p = config.geometry.size();
  if (p == 0) {
    throw ConfigError("scenario: geometry needs at least one element");
  }
  for (double pos : config.geometry.element_positions) {
    if (!std::isfinite(pos)) {
      throw ConfigError("scenario: non-finite element position");
    }
  }
  for (const SourceSpec& s : config.sources) {
    if (!(s.angle_deg > -90.0 && s.angle_deg < 90.0)) {
      throw ConfigError("scenario: source angle must lie in (-90, 90)");
    }
    if (!(s.power >= 0.0) || !std::isfinite(s.power)) {
      throw ConfigError("scenario: source power must be finite and >= 0");
    }
  }
  if (!(config.noise_variance >= 0.0) ||
      !std::isfinite(config.noise_variance)) {
    throw ConfigError("scenario: noise variance must be finite and >= 0");
  }
  if (config.sources.size() > p) {
    throw ConfigError("scenario: more sources than array elements");
  }
  if (!config.sources.empty()) {
    ComplexMatrix steerings(p, config.sources.size());
    for (std::size_t q = 0; q < config.sources.size(); ++q) {
      steerings.col(static_cast<Eigen::Index>(q)) =
          steering_vector(config.geometry, config.sources[q].angle_deg);
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(steerings);
    const auto& sv = svd.singularValues();
    if (sv[sv.size() - 1] <= 1e-9 * sv[0]) {
      throw ConfigError("scenario: source steering vectors are numerically "
                        "linearly dependent");
    }
  }
}

SnapshotSet generate_snapshots(const ScenarioConfig& config) {
  if (config.num_snapshots == 0) {
    throw InvalidArgument("generate_snapshots: num_snapshots must be >= 1");
  }
  validate_scenario(config);

  const auto p = static_cast<Eigen::Index>(config.geometry.size());
  const auto n = static_cast<Eigen::Index>(config.num_snapshots);

  SnapshotSet out;
  out.truth = config;
  out.desired_index = desired_source_index(config);
  out.snapshots = ComplexMatrix::Zero(p, n);

  SeededRng rng(config.seed);
  for (std::size_t q = 0; q < config.sources.size(); ++q) {
    const SourceSpec& src = config.sources[q];
    const ComplexVector a = steering_vector(config.geometry, src.angle_deg);
    const double amp = std::sqrt(src.power);
    ComplexVector samples(n);
    for (Eigen::Index t = 0; t < n; ++t) {
      samples[t] = (src.kind == SourceKind::ConstantModulusQpsk)
                       ? rng.qpsk()
                       : rng.complex_gaussian();
    }
    out.snapshots += a * (amp * samples).transpose();
    if (static_cast<int>(q) == out.desired_index) {
      out.desired_steering = a;
      out.desired_symbols = samples;
    } else {
      out.interferer_steerings.push_back(a);
      out.interferer_powers.push_back(src.power);
    }
  }
  const double noise_amp = std::sqrt(config.noise_variance);
  for (Eigen::Index t = 0; t < n; ++t) {
    for (Eigen::Index e = 0; e < p; ++e) {
      out.snapshots(e, t) += noise_amp * rng.complex_gaussian();
    }
  }
  return out;
}

SnapshotSet prefix(const SnapshotSet& set, std::size_t n) {
  const auto total = static_cast<std::size_t>(set.snapshots.cols());
  if (n == 0 || n > total) {
    throw InvalidArgument("prefix: length out of range");
  }
  SnapshotSet out = set;
  out.snapshots = set.snapshots.leftCols(static_cast<Eigen::Index>(n));
  out.truth.num_snapshots = n;
  if (out.desired_symbols.size() > 0) {
    out.desired_symbols =
        set.desired_symbols.head(static_cast<Eigen::Index>(n));
  }
  return out;
}

}  // namespace cmbeam
