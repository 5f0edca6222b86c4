#include <algorithm>

#include <Eigen/Dense>

#include "ssflab/eigencount.hpp"
#include "ssflab/error.hpp"

namespace ssflab::eigencount {

std::vector<double> dense_spectrum(const SparseMatrix& A, std::size_t cap) {
  const auto n = static_cast<std::size_t>(A.rows());
  if (n > cap) throw OracleCapExceeded(n, cap);
  const Eigen::MatrixXd dense = Eigen::MatrixXd(A);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("dense_spectrum: eigensolver failed");
  std::vector<double> values(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(values.begin(), values.end());
  return values;
}

std::vector<double> dense_spectrum(const DirichletOperator& op, std::size_t cap) {
  return dense_spectrum(op.matrix(), cap);
}

std::size_t count_in_spectrum(const std::vector<double>& sorted_spectrum, double E) {
  return static_cast<std::size_t>(
      std::upper_bound(sorted_spectrum.begin(), sorted_spectrum.end(), E) -
      sorted_spectrum.begin());
}

}  // namespace ssflab::eigencount
