#include "oqb/linalg.hpp"

#include <complex>
#include <random>
#include <string>
#include <vector>

#include <lapacke.h>

#include "oqb/error.hpp"

namespace oqb {

namespace {

// zheevr (MRRR). The zheevd shipped with some OpenBLAS builds returns
// non-orthogonal vectors with info = 0 on clustered spectra, so results
// are also probed below.
Eigen::VectorXd solve(Eigen::MatrixXcd& a, Eigen::MatrixXcd* vectors) {
  const auto n = static_cast<lapack_int>(a.rows());
  if (a.cols() != a.rows()) throw NumericalGuardError("eigh: matrix is not square");
  Eigen::VectorXd w(n);
  if (n == 0) return w;
  lapack_int found = 0;
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_complex_double dummy{};
  if (vectors) vectors->resize(n, n);
  const lapack_int info = LAPACKE_zheevr(
      LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'A', 'U', n,
      reinterpret_cast<lapack_complex_double*>(a.data()), n, 0.0, 0.0, 0, 0, 0.0, &found,
      w.data(),
      vectors ? reinterpret_cast<lapack_complex_double*>(vectors->data()) : &dummy, n,
      support.data());
  if (info != 0) throw NumericalGuardError("zheevr failed, info = " + std::to_string(info));
  if (found != n) throw NumericalGuardError("zheevr returned " + std::to_string(found) + " of " +
                                            std::to_string(n) + " eigenvalues");
  return w;
}

// O(n^2) probe with a fixed random vector x: |U^+ x| = |x| and
// H U y = U D y for y = U^+ x.
void probe(const Eigen::MatrixXcd& h, const EigenDecomposition& eig) {
  const Eigen::Index n = h.rows();
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  Eigen::VectorXcd x(n);
  for (auto& v : x) v = {normal(rng), normal(rng)};
  x.normalize();
  const Eigen::VectorXcd y = eig.vectors.adjoint() * x;
  const Eigen::VectorXcd uy = eig.vectors * y;
  const Eigen::VectorXcd hu = h.selfadjointView<Eigen::Upper>() * uy;
  const Eigen::VectorXcd ud = eig.vectors * eig.values.cwiseProduct(y);
  const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  const double unitarity = std::abs(y.norm() - 1.0) + (uy - x).norm();
  const double residual = (hu - ud).norm() / scale;
  const double tol = 1e-10 * std::sqrt(static_cast<double>(n));
  if (unitarity > tol || residual > tol) {
    throw NumericalGuardError("eigh: decomposition check failed (unitarity " +
                              std::to_string(unitarity) + ", residual " +
                              std::to_string(residual) + ", dim " + std::to_string(n) + ")");
  }
}

}  // namespace

EigenDecomposition eigh(const Eigen::MatrixXcd& hermitian) {
  EigenDecomposition out;
  Eigen::MatrixXcd work = hermitian;
  out.values = solve(work, &out.vectors);
  probe(hermitian, out);
  return out;
}

Eigen::VectorXd eigvalsh(const Eigen::MatrixXcd& hermitian) {
  Eigen::MatrixXcd work = hermitian;
  return solve(work, nullptr);
}

}  // namespace oqb
