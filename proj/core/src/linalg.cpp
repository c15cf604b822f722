#include "cmbeam/linalg.hpp"

#include <algorithm>

#include "cmbeam/errors.hpp"

namespace cmbeam {

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw InvalidArgument("HermitianMatrix requires a nonempty square matrix");
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index p) {
  return HermitianMatrix(ComplexMatrix::Identity(p, p));
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index p) {
  return HermitianMatrix(ComplexMatrix::Zero(p, p));
}

EigenDecomposition hermitian_eig(const HermitianMatrix& m) {
  if (!m.matrix().allFinite()) {
    throw InvalidArgument("hermitian_eig: matrix has non-finite entries");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.matrix());
  if (es.info() != Eigen::Success) {
    throw InvalidArgument("hermitian_eig: eigendecomposition failed");
  }
  // Eigen sorts ascending; flip to descending, keeping value/vector pairing.
  const Eigen::Index p = m.dim();
  EigenDecomposition out;
  out.eigenvalues = es.eigenvalues().reverse();
  out.eigenvectors.resize(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    out.eigenvectors.col(i) = es.eigenvectors().col(p - 1 - i);
  }
  return out;
}

HermitianMatrix psd_project(const HermitianMatrix& m) {
  const EigenDecomposition ed = hermitian_eig(m);
  RealVector clipped = ed.eigenvalues.cwiseMax(0.0);
  ComplexMatrix rebuilt =
      ed.eigenvectors * clipped.asDiagonal() * ed.eigenvectors.adjoint();
  return HermitianMatrix(rebuilt);
}

HermitianMatrix sample_covariance(const ComplexMatrix& snapshots) {
  if (snapshots.cols() < 1) {
    throw InvalidArgument("sample_covariance: need at least one snapshot");
  }
  ComplexMatrix sum = snapshots * snapshots.adjoint();
  return HermitianMatrix(sum);
}

}  // namespace cmbeam
