#include "cmbeam/constraints.hpp"

#include "cmbeam/errors.hpp"

namespace cmbeam {

LiftedConstraint lift_constraint(const LinearConstraint& lc) {
  if (lc.c.size() == 0 || lc.c.norm() == 0.0) {
    throw InvalidArgument("lift_constraint: zero constraint vector");
  }
  ComplexMatrix outer = lc.c * lc.c.adjoint();
  return {HermitianMatrix(outer), std::norm(lc.v)};
}

std::vector<LiftedConstraint> lift_constraints(
    const std::vector<LinearConstraint>& lcs) {
  std::vector<LiftedConstraint> out;
  out.reserve(lcs.size());
  for (const LinearConstraint& lc : lcs) {
    out.push_back(lift_constraint(lc));
  }
  return out;
}

LinearConstraint look_direction(const ArrayGeometry& geometry,
                                double angle_deg) {
  return {steering_vector(geometry, angle_deg), {1.0, 0.0}};
}

LinearConstraint null_direction(const ArrayGeometry& geometry,
                                double angle_deg) {
  return {steering_vector(geometry, angle_deg), {0.0, 0.0}};
}

std::vector<LinearConstraint> signal_subspace_constraints(
    const HermitianMatrix& r_hat, std::size_t q) {
  if (q < 1) {
    throw InvalidArgument("signal_subspace_constraints: Q must be >= 1");
  }
  const auto p = static_cast<std::size_t>(r_hat.dim());
  std::vector<LinearConstraint> out;
  if (q >= p) {
    return out;  // no noise subspace to exclude
  }
  const EigenDecomposition ed = hermitian_eig(r_hat);
  out.reserve(p - q);
  for (std::size_t i = q; i < p; ++i) {
    out.push_back(
        {ed.eigenvectors.col(static_cast<Eigen::Index>(i)), {0.0, 0.0}});
  }
  return out;
}

}  // namespace cmbeam
