#include "cmbeam/metrics.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "cmbeam/errors.hpp"
#include "cmbeam/solver.hpp"

namespace cmbeam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_weights(const ComplexVector& w) {
  if (w.size() == 0 || !w.allFinite() || w.squaredNorm() == 0.0)
    throw InvalidArgument("beamformer weights must be finite and nonzero");
}

}  // namespace

double sinr_db(const ComplexVector& w, const SnapshotSet& scenario) {
  check_weights(w);
  if (scenario.desired_index < 0)
    throw InvalidArgument("scenario has no constant-modulus source");
  if (w.size() != scenario.desired_steering.size())
    throw InvalidArgument("weights do not match the array size");
  const double p0 =
      scenario.truth.sources[static_cast<std::size_t>(scenario.desired_index)]
          .power;
  const double signal = p0 * std::norm(w.dot(scenario.desired_steering));
  double noise = scenario.truth.noise_variance * w.squaredNorm();
  for (std::size_t j = 0; j < scenario.interferer_steerings.size(); ++j)
    noise += scenario.interferer_powers[j] *
             std::norm(w.dot(scenario.interferer_steerings[j]));
  if (signal == 0.0) return -kInf;
  if (noise == 0.0) return kInf;
  return 10.0 * std::log10(signal / noise);
}

double optimal_sinr_db(const SnapshotSet& scenario) {
  if (scenario.desired_index < 0)
    throw InvalidArgument("scenario has no constant-modulus source");
  const Eigen::Index p = scenario.desired_steering.size();
  const double p0 =
      scenario.truth.sources[static_cast<std::size_t>(scenario.desired_index)]
          .power;
  ComplexMatrix d =
      scenario.truth.noise_variance * ComplexMatrix::Identity(p, p);
  for (std::size_t j = 0; j < scenario.interferer_steerings.size(); ++j)
    d += scenario.interferer_powers[j] * scenario.interferer_steerings[j] *
         scenario.interferer_steerings[j].adjoint();
  const EigenDecomposition ed = hermitian_eig(HermitianMatrix(d));
  if (ed.eigenvalues[p - 1] <= 1e-12 * std::max(ed.eigenvalues[0], 0.0))
    return kInf;  // singular interference-plus-noise: unbounded SINR
  // p0 a0^H D^{-1} a0 = p0 ||D^{-1/2} a0||^2, the top (only) eigenvalue of
  // the whitened rank-one signal matrix.
  const ComplexVector s = ed.eigenvectors.adjoint() * scenario.desired_steering;
  double value = 0.0;
  for (Eigen::Index i = 0; i < p; ++i)
    value += std::norm(s[i]) / ed.eigenvalues[i];
  return 10.0 * std::log10(p0 * value);
}

std::vector<BeampatternSample> beampattern(const ComplexVector& w,
                                           const ArrayGeometry& geometry,
                                           const RealVector& angles_deg) {
  check_weights(w);
  if (w.size() != static_cast<Eigen::Index>(geometry.size()))
    throw InvalidArgument("weights do not match the array size");
  if (angles_deg.size() == 0)
    throw InvalidArgument("beampattern needs a nonempty angle grid");
  RealVector mag(angles_deg.size());
  for (Eigen::Index i = 0; i < angles_deg.size(); ++i)
    mag[i] = std::abs(w.dot(steering_vector(geometry, angles_deg[i])));
  const double peak = mag.maxCoeff();
  if (!(peak > 0.0))
    throw InvalidArgument("beampattern is identically zero on the grid");
  std::vector<BeampatternSample> out(static_cast<std::size_t>(mag.size()));
  for (Eigen::Index i = 0; i < mag.size(); ++i) {
    out[static_cast<std::size_t>(i)] = {
        angles_deg[i],
        mag[i] > 0.0 ? 20.0 * std::log10(mag[i] / peak) : -kInf};
  }
  return out;
}

std::vector<BeampatternSample> beampattern(const ComplexVector& w,
                                           const ArrayGeometry& geometry) {
  return beampattern(w, geometry, RealVector::LinSpaced(361, -90.0, 90.0));
}

double eigen_ratio(const HermitianMatrix& w) {
  return extract_beamformer(w).second;
}

}  // namespace cmbeam
