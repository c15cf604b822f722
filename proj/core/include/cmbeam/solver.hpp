#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "cmbeam/array_sim.hpp"
#include "cmbeam/constraints.hpp"
#include "cmbeam/linalg.hpp"

namespace cmbeam {

// Convergence controls for the first-order solver. These are not model
// parameters: the defaults are meant to hold across scenarios untouched.
struct SolverOptions {
  // Cap on projected-gradient steps; for constrained solves this is the
  // total budget summed over all augmented-Lagrangian subproblems.
  std::size_t max_iterations = 10000;
  // Exit threshold on ||W - proj(W - t grad)||_F / (1 + ||W||_F).
  double fixed_point_tolerance = 1e-7;
  // Relative objective change considered stagnant; ten consecutive
  // stagnant steps end an unconstrained solve.
  double objective_tolerance = 1e-10;
  // Initial augmented-Lagrangian penalty weight (constrained solves only).
  double penalty_parameter = 1.0;
  // Momentum with restart on objective increase.
  bool acceleration = true;
};

// Result of a lifted solve: the matrix optimizer, its eigen-data, the
// extracted beamformer, and solver diagnostics.
struct LiftedSolution {
  HermitianMatrix w_matrix;  // optimizer of the lifted program
  double objective;          // modulus-deviation average plus trace penalty
  EigenDecomposition eig;    // of w_matrix, eigenvalues descending
  ComplexVector w_hat;       // unit-norm top eigenvector (phase-canonical)
  double eigen_ratio;        // lambda1/lambda2; +inf when lambda2 <= 1e-12*lambda1
  std::size_t iterations;
  double fixed_point_residual;
  double constraint_residual;  // max_k |tr(W c c^H) - |v|^2| / (1 + |v|^2); 0 unconstrained
  bool converged;
};

// Objective value (1/N) sum_n (tr(W x_n x_n^H) - 1)^2 + tr(W).
double cma_objective(const HermitianMatrix& w, const ComplexMatrix& snapshots);

// Analytic gradient (2/N) sum_n (tr(W x_n x_n^H) - 1) x_n x_n^H + I.
HermitianMatrix cma_gradient(const HermitianMatrix& w,
                             const ComplexMatrix& snapshots);

// Minimizes cma_objective over the PSD cone by projected gradient descent
// (optionally accelerated), step 1/(1.01 L) with L estimated by 50 power
// iterations on the quadratic-term operator, backtracking halving as a
// safety net, W0 = I/P. Non-convergence within max_iterations returns
// converged = false rather than throwing.
LiftedSolution solve_cma(const ComplexMatrix& snapshots,
                         const SolverOptions& opts = {});
inline LiftedSolution solve_cma(const SnapshotSet& set,
                                const SolverOptions& opts = {}) {
  return solve_cma(set.snapshots, opts);
}

// Same objective subject to tr(W c_k c_k^H) = |v_k|^2 for each constraint.
// Zero-target constraints pin W to a face of the PSD cone (c^H W c = 0 with
// W PSD forces W c = 0) and are eliminated exactly by an orthonormal change
// of basis; the remaining constraints are enforced by an augmented-
// Lagrangian outer loop (mu_k += rho * residual_k) around the projected-
// gradient inner solve. An empty constraint list reproduces solve_cma
// bit-for-bit.
LiftedSolution solve_lccma(const ComplexMatrix& snapshots,
                           const std::vector<LiftedConstraint>& constraints,
                           const SolverOptions& opts = {});
inline LiftedSolution solve_lccma(const SnapshotSet& set,
                                  const std::vector<LiftedConstraint>& cs,
                                  const SolverOptions& opts = {}) {
  return solve_lccma(set.snapshots, cs, opts);
}

// Rank-1 extraction: unit-norm top eigenvector (global phase fixed by making
// the largest-magnitude entry real nonnegative) and the eigenvalue ratio
// lambda1/lambda2 (+inf sentinel when lambda2 <= 1e-12 * lambda1 or P = 1).
// Throws DegenerateSolution when the top eigenvalue is not positive.
std::pair<ComplexVector, double> extract_beamformer(const HermitianMatrix& w);

}  // namespace cmbeam
