#pragma once

#include <Eigen/Dense>

namespace cmbeam {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Square complex matrix kept exactly Hermitian: construction replaces the
// entries by (M + M^H)/2, so entry(i,j) == conj(entry(j,i)) bit-for-bit.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const ComplexMatrix& m);

  static HermitianMatrix identity(Eigen::Index p);
  static HermitianMatrix zero(Eigen::Index p);

  Eigen::Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  ComplexMatrix m_;
};

// Eigen-data of a Hermitian matrix; eigenvalues sorted descending, column i
// of `eigenvectors` pairs with eigenvalues[i].
struct EigenDecomposition {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

// Full eigendecomposition. Throws InvalidArgument on non-finite entries.
EigenDecomposition hermitian_eig(const HermitianMatrix& m);

// Frobenius-nearest positive semidefinite matrix: clips negative eigenvalues
// to zero and recomposes.
HermitianMatrix psd_project(const HermitianMatrix& m);

// Unnormalized sample covariance sum_n x_n x_n^H of the columns of X.
// Throws InvalidArgument when X has no columns.
HermitianMatrix sample_covariance(const ComplexMatrix& snapshots);

}  // namespace cmbeam
