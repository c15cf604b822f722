#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "cmbeam/array_sim.hpp"
#include "cmbeam/linalg.hpp"

namespace cmbeam {

// One linear restriction w^H c = v on the beamformer.
struct LinearConstraint {
  ComplexVector c;
  std::complex<double> v;
};

// The same restriction in lifted form: tr(W c c^H) = |v|^2.
struct LiftedConstraint {
  HermitianMatrix outer;  // c c^H, rank one
  double target;          // |v|^2
};

// Throws InvalidArgument when c is zero (constrains nothing).
LiftedConstraint lift_constraint(const LinearConstraint& lc);

std::vector<LiftedConstraint> lift_constraints(
    const std::vector<LinearConstraint>& lcs);

// Unity gain toward angle_deg: c = a(theta), v = 1.
LinearConstraint look_direction(const ArrayGeometry& geometry,
                                double angle_deg);

// Forced null toward angle_deg: c = a(theta), v = 0.
LinearConstraint null_direction(const ArrayGeometry& geometry,
                                double angle_deg);

// Confines w to the span of the top-Q eigenvectors of R_hat by constraining
// it orthogonal to each of the P-Q trailing ("noise") eigenvectors:
// one constraint (c = v_i, v = 0) per i = Q+1..P in descending eigenvalue
// order. Q >= P gives an empty list; Q < 1 throws InvalidArgument.
std::vector<LinearConstraint> signal_subspace_constraints(
    const HermitianMatrix& r_hat, std::size_t q);

}  // namespace cmbeam
