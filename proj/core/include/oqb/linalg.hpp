#pragma once

#include <Eigen/Dense>

namespace oqb {

struct EigenDecomposition {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // columns
};

/// Dense Hermitian eigensolver (LAPACK zheevr). Only the upper triangle is
/// read. Throws NumericalGuardError if LAPACK reports failure or the
/// result fails a unitarity/residual probe.
EigenDecomposition eigh(const Eigen::MatrixXcd& hermitian);

Eigen::VectorXd eigvalsh(const Eigen::MatrixXcd& hermitian);

}  // namespace oqb
