#pragma once

#include <vector>

#include "cmbeam/array_sim.hpp"
#include "cmbeam/linalg.hpp"

namespace cmbeam {

struct BeampatternSample {
  double angle_deg;
  double gain_db;  // 20 log10 |w^H a(theta)|, peak-normalized to 0 dB
};

// Output SINR in dB against the scenario truth:
//   p0 |w^H a0|^2 / (sigma^2 ||w||^2 + sum_j p_j |w^H a_j|^2),
// with true steering vectors and configured powers, not sample estimates.
// Exactly invariant to scaling and global phase of w. Zero numerator gives
// the -infinity sentinel.
double sinr_db(const ComplexVector& w, const SnapshotSet& scenario);

// Best achievable sinr_db over all w: p0 a0^H D^{-1} a0 with
// D = sigma^2 I + sum_j p_j a_j a_j^H, via the top eigenvalue of
// D^{-1/2} a0 a0^H D^{-1/2}. Singular D (sigma^2 = 0 with too few
// interferers) gives the +infinity sentinel.
double optimal_sinr_db(const SnapshotSet& scenario);

// Peak-normalized beampattern on the given angle grid (degrees); the default
// grid is -90..90 in 0.5-degree steps.
std::vector<BeampatternSample> beampattern(const ComplexVector& w,
                                           const ArrayGeometry& geometry,
                                           const RealVector& angles_deg);
std::vector<BeampatternSample> beampattern(const ComplexVector& w,
                                           const ArrayGeometry& geometry);

// lambda1/lambda2 of a lifted solution, +inf sentinel for (numerically)
// rank-one input; errors as extract_beamformer.
double eigen_ratio(const HermitianMatrix& w);

}  // namespace cmbeam
