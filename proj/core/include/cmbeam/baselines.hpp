#pragma once

#include <vector>

#include "cmbeam/array_sim.hpp"
#include "cmbeam/linalg.hpp"

namespace cmbeam {

// Weight history of an on-line algorithm: entry n holds w after processing
// snapshots 1..n+1, so the sequence has one vector per snapshot and `final`
// equals the last entry.
struct AdaptiveTrajectory {
  std::vector<ComplexVector> weights_per_sample;
  ComplexVector final;
};

// Stochastic-gradient CMA (Godard 2-2): per sample, y = w^H x and
// w <- w - step * x * conj(y (|y|^2 - 1)). An empty w0 means e_1.
// Throws DivergedError naming the first sample (1-based) that produces a
// non-finite weight.
AdaptiveTrajectory sgd_cma(const ComplexMatrix& snapshots, double step = 1e-3,
                           const ComplexVector& w0 = ComplexVector());
inline AdaptiveTrajectory sgd_cma(const SnapshotSet& set, double step = 1e-3,
                                  const ComplexVector& w0 = ComplexVector()) {
  return sgd_cma(set.snapshots, step, w0);
}

// Recursive-least-squares CMA via rank-one linearization: with
// u = x x^H w, gain k = P u / (forgetting + u^H P u), inverse-covariance
// update P <- (P - k u^H P) / forgetting, error e = 1 - w^H u, and
// w <- w + k conj(e); P starts at I / delta. Same divergence behavior as
// sgd_cma, also watching the P recursion.
AdaptiveTrajectory rls_cma(const ComplexMatrix& snapshots,
                           double forgetting = 0.985, double delta = 0.001,
                           const ComplexVector& w0 = ComplexVector());
inline AdaptiveTrajectory rls_cma(const SnapshotSet& set,
                                  double forgetting = 0.985,
                                  double delta = 0.001,
                                  const ComplexVector& w0 = ComplexVector()) {
  return rls_cma(set.snapshots, forgetting, delta, w0);
}

}  // namespace cmbeam
