#pragma once

#include <cstdint>
#include <vector>

#include "cmbeam/linalg.hpp"

namespace cmbeam {

// Element positions along a line, in units of the carrier wavelength.
struct ArrayGeometry {
  std::vector<double> element_positions;

  // Uniform linear array: element p at p * spacing wavelengths.
  static ArrayGeometry ula(std::size_t elements, double spacing = 0.5);

  std::size_t size() const { return element_positions.size(); }
};

enum class SourceKind { ConstantModulusQpsk, GaussianInterferer };

struct SourceSpec {
  double angle_deg = 0.0;  // direction of arrival, in (-90, 90)
  SourceKind kind = SourceKind::ConstantModulusQpsk;
  double power = 1.0;  // linear scale
};

struct ScenarioConfig {
  ArrayGeometry geometry;
  std::vector<SourceSpec> sources;
  double noise_variance = 0.1;  // per-element sigma_n^2
  std::size_t num_snapshots = 0;
  std::uint64_t seed = 0;
};

// Generated snapshots plus the ground truth that produced them.
struct SnapshotSet {
  ComplexMatrix snapshots;  // P x N, column n = x(t_n)
  ScenarioConfig truth;
  int desired_index = -1;          // into truth.sources; -1 when no CM source
  ComplexVector desired_steering;  // empty when no desired source
  ComplexVector desired_symbols;   // length N, unit modulus
  std::vector<ComplexVector> interferer_steerings;  // non-desired sources
  std::vector<double> interferer_powers;
};

// Array response toward angle_deg: a_p = exp(i 2 pi pos_p sin(theta)).
// Unit-modulus entries, squared norm exactly P. Throws InvalidArgument for a
// non-finite angle or empty geometry; any finite angle is accepted (pattern
// grids evaluate +-90).
ComplexVector steering_vector(const ArrayGeometry& geometry, double angle_deg);

// The source the beamformer is meant to recover: the highest-power
// constant-modulus source (ties to the first listed); -1 if none.
int desired_source_index(const ScenarioConfig& config);

// Throws ConfigError when an invariant fails: empty geometry or non-finite
// positions, source angles outside (-90, 90) or negative powers, negative
// noise variance, more sources than elements, or a numerically
// rank-deficient steering matrix.
void validate_scenario(const ScenarioConfig& config);

// Draws X = sum_q a(theta_q) sqrt(power_q) s_q + noise. Sample path (fixing
// determinism): sources in listed order, each drawing its N samples
// sequentially (QPSK symbols for constant-modulus sources, circular complex
// Gaussians otherwise), then the noise matrix snapshot by snapshot.
// Identical config and seed give a bit-identical SnapshotSet.
SnapshotSet generate_snapshots(const ScenarioConfig& config);

// First n snapshots of a set, with truth metadata adjusted to match.
SnapshotSet prefix(const SnapshotSet& set, std::size_t n);

}  // namespace cmbeam
