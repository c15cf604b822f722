#include "cmbeam/baselines.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "cmbeam/errors.hpp"

namespace cmbeam {

namespace {

ComplexVector initial_weights(const ComplexMatrix& x, const ComplexVector& w0) {
  if (x.rows() < 1 || x.cols() < 1)
    throw InvalidArgument("snapshot matrix must be nonempty");
  if (!x.allFinite())
    throw InvalidArgument("snapshot matrix contains non-finite entries");
  if (w0.size() == 0) {
    ComplexVector e1 = ComplexVector::Zero(x.rows());
    e1[0] = 1.0;
    return e1;
  }
  if (w0.size() != x.rows())
    throw InvalidArgument("initial weights do not match the array size");
  if (!w0.allFinite() || w0.norm() == 0.0)
    throw InvalidArgument("initial weights must be finite and nonzero");
  return w0;
}

[[noreturn]] void diverged(const char* which, Eigen::Index n) {
  // n is 0-based here; report the 1-based sample number.
  const std::size_t sample = static_cast<std::size_t>(n) + 1;
  throw DivergedError(std::string(which) +
                          " produced non-finite state at sample " +
                          std::to_string(sample),
                      sample);
}

}  // namespace

AdaptiveTrajectory sgd_cma(const ComplexMatrix& snapshots, double step,
                           const ComplexVector& w0) {
  if (!(step > 0.0) || !std::isfinite(step))
    throw InvalidArgument("sgd step must be positive and finite");
  ComplexVector w = initial_weights(snapshots, w0);
  AdaptiveTrajectory traj;
  traj.weights_per_sample.reserve(static_cast<std::size_t>(snapshots.cols()));
  for (Eigen::Index n = 0; n < snapshots.cols(); ++n) {
    const ComplexVector x = snapshots.col(n);
    const std::complex<double> y = w.dot(x);  // w^H x
    w -= step * x * std::conj(y * (std::norm(y) - 1.0));
    if (!w.allFinite()) diverged("sgd_cma", n);
    traj.weights_per_sample.push_back(w);
  }
  traj.final = w;
  return traj;
}

AdaptiveTrajectory rls_cma(const ComplexMatrix& snapshots, double forgetting,
                           double delta, const ComplexVector& w0) {
  if (!(forgetting > 0.0) || !(forgetting <= 1.0))
    throw InvalidArgument("forgetting factor must lie in (0, 1]");
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw InvalidArgument("delta must be positive and finite");
  ComplexVector w = initial_weights(snapshots, w0);
  const Eigen::Index p = snapshots.rows();
  ComplexMatrix pinv = ComplexMatrix::Identity(p, p) / delta;
  AdaptiveTrajectory traj;
  traj.weights_per_sample.reserve(static_cast<std::size_t>(snapshots.cols()));
  for (Eigen::Index n = 0; n < snapshots.cols(); ++n) {
    const ComplexVector x = snapshots.col(n);
    const ComplexVector u = x * x.dot(w);  // x x^H w
    const ComplexVector pu = pinv * u;
    const ComplexVector k = pu / (forgetting + u.dot(pu));
    pinv = (pinv - k * (u.adjoint() * pinv)) / forgetting;
    const std::complex<double> e = 1.0 - w.dot(u);
    w += k * std::conj(e);
    if (!w.allFinite() || !pinv.allFinite()) diverged("rls_cma", n);
    traj.weights_per_sample.push_back(w);
  }
  traj.final = w;
  return traj;
}

}  // namespace cmbeam
