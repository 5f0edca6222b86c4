#pragma once

// Exact eigenvalue counting by Sylvester inertia, and a dense-spectrum oracle.

#include <cstddef>
#include <vector>

#include "ssflab/lattice.hpp"

namespace ssflab::eigencount {

using lattice::DirichletOperator;
using lattice::SparseMatrix;

inline constexpr std::size_t kDefaultOracleCap = 4096;

struct InertiaResult {
  std::size_t n_neg = 0;
  std::size_t n_zero = 0;
  std::size_t n_pos = 0;
  double zero_tol = 0.0;
  /// Energy actually factorized (differs from the request after a retry).
  double energy = 0.0;
  int retries = 0;

  std::size_t dimension() const { return n_neg + n_zero + n_pos; }
};

struct InertiaOptions {
  /// Pivots of the last block with |pivot| <= zero_tol count as zero.
  /// Negative selects 1e-10 * ||A||_inf.
  double zero_tol = -1.0;
  /// Lower bound on the block size of the block-tridiagonal recursion.
  std::size_t min_block = 64;
  int max_retries = 3;
};

/// Inertia of (A - E I) for a sparse symmetric A.
///
/// A is viewed as block tridiagonal with blocks no smaller than its
/// half-bandwidth. Each Schur complement S_k = A_kk - E - C_k S_{k-1}^{-1} C_k^T
/// is factorized with Bunch-Kaufman pivoting and the inertias add up
/// (Haynsworth). An exactly singular block before the last one is a
/// breakdown: the energy is nudged to E(1 + 1e-12) + 1e-14 and retried.
InertiaResult inertia(const SparseMatrix& A, double E, const InertiaOptions& options = {});
InertiaResult inertia(const DirichletOperator& op, double E, double zero_tol = -1.0);

struct Count {
  std::size_t value = 0;
  /// Set when E is within zero_tol of an eigenvalue or a retry was needed.
  bool coincident = false;
  double energy = 0.0;
};

/// #{eigenvalues <= E} = n_neg + n_zero.
Count count_leq(const DirichletOperator& op, double E);
Count count_leq(const SparseMatrix& A, double E);

/// All eigenvalues ascending, with multiplicity.
std::vector<double> dense_spectrum(const DirichletOperator& op,
                                   std::size_t cap = kDefaultOracleCap);
std::vector<double> dense_spectrum(const SparseMatrix& A,
                                   std::size_t cap = kDefaultOracleCap);

/// #{lambda <= E} from a sorted spectrum.
std::size_t count_in_spectrum(const std::vector<double>& sorted_spectrum, double E);

struct RelativeCount {
  long value = 0;
  bool coincident = false;
};

/// xi_L(E) = N_0(E) - N_1(E) for operators on the same grid.
RelativeCount relative_count(const DirichletOperator& op1, const DirichletOperator& op0,
                             double E);

/// Number of grid points where the two operators' diagonals differ, i.e. the
/// rank of the diagonal perturbation.
std::size_t perturbation_rank(const DirichletOperator& op1, const DirichletOperator& op0);

/// Half-bandwidth max |i - j| over stored entries.
std::size_t half_bandwidth(const SparseMatrix& A);

}  // namespace ssflab::eigencount
