#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <lapacke.h>

#include "ssflab/eigencount.hpp"
#include "ssflab/error.hpp"

namespace ssflab::eigencount {

namespace {

using Dense = Eigen::MatrixXd;

struct BlockInertia {
  std::size_t neg = 0, zero = 0, pos = 0;
};

// Bunch-Kaufman factorization of one symmetric block (lower triangle used).
struct BlockFactor {
  Dense lu;
  std::vector<lapack_int> ipiv;
  lapack_int info = 0;
};

BlockFactor factorize(Dense S) {
  BlockFactor f;
  const auto n = static_cast<lapack_int>(S.rows());
  f.ipiv.assign(static_cast<std::size_t>(n), 0);
  f.info = LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', n, S.data(), n, f.ipiv.data());
  if (f.info < 0) throw Error("dsytrf: illegal argument " + std::to_string(-f.info));
  f.lu = std::move(S);
  return f;
}

// Classifies the 1x1 and 2x2 pivots of D. In the last block pivots within
// zero_tol count as zero; earlier blocks are classified by sign only, since a
// tiny pivot there reflects a near-singular leading submatrix, not A - E.
BlockInertia classify(const BlockFactor& f, bool last, double zero_tol) {
  BlockInertia out;
  auto add = [&](double pivot) {
    if (last && std::abs(pivot) <= zero_tol)
      ++out.zero;
    else if (pivot < 0.0)
      ++out.neg;
    else if (pivot > 0.0)
      ++out.pos;
    else
      ++out.zero;
  };
  const auto n = static_cast<std::size_t>(f.lu.rows());
  for (std::size_t k = 0; k < n;) {
    const auto ki = static_cast<Eigen::Index>(k);
    if (f.ipiv[k] > 0 || k + 1 == n) {
      add(f.lu(ki, ki));
      k += 1;
    } else {
      const double a = f.lu(ki, ki);
      const double b = f.lu(ki + 1, ki);
      const double c = f.lu(ki + 1, ki + 1);
      const double mean = 0.5 * (a + c);
      const double radius = std::hypot(0.5 * (a - c), b);
      add(mean - radius);
      add(mean + radius);
      k += 2;
    }
  }
  return out;
}

double inf_norm(const SparseMatrix& A) {
  double norm = 0.0;
  for (Eigen::Index r = 0; r < A.outerSize(); ++r) {
    double row = 0.0;
    for (SparseMatrix::InnerIterator it(A, r); it; ++it) row += std::abs(it.value());
    norm = std::max(norm, row);
  }
  return norm;
}

// Dense copy of rows [r0, r1) x cols [c0, c1).
Dense extract(const SparseMatrix& A, Eigen::Index r0, Eigen::Index r1, Eigen::Index c0,
              Eigen::Index c1) {
  Dense out = Dense::Zero(r1 - r0, c1 - c0);
  for (Eigen::Index r = r0; r < r1; ++r)
    for (SparseMatrix::InnerIterator it(A, r); it; ++it)
      if (it.col() >= c0 && it.col() < c1) out(r - r0, it.col() - c0) = it.value();
  return out;
}

struct Attempt {
  bool ok = false;
  std::size_t breakdown_pivot = 0;
  BlockInertia inertia;
};

Attempt attempt(const SparseMatrix& A, double E, std::size_t block, double zero_tol) {
  const auto N = static_cast<Eigen::Index>(A.rows());
  const auto B = static_cast<Eigen::Index>(block);
  Attempt result;
  BlockFactor previous;
  Eigen::Index prev_start = 0;
  for (Eigen::Index start = 0; start < N; start += B) {
    const Eigen::Index stop = std::min(N, start + B);
    const bool last = stop == N;
    Dense S = extract(A, start, stop, start, stop);
    S.diagonal().array() -= E;
    if (start > 0) {
      // S -= C * S_prev^{-1} * C^T with C the coupling to the previous block.
      const Dense C = extract(A, start, stop, prev_start, start);
      Dense Y = C.transpose();
      const auto m = static_cast<lapack_int>(previous.lu.rows());
      const lapack_int info =
          LAPACKE_dsytrs(LAPACK_COL_MAJOR, 'L', m, static_cast<lapack_int>(Y.cols()),
                         previous.lu.data(), m, previous.ipiv.data(), Y.data(), m);
      if (info != 0) throw Error("dsytrs failed with info " + std::to_string(info));
      S.noalias() -= C * Y;
      S = 0.5 * (S + S.transpose()).eval();
    }
    if (!S.allFinite()) {
      result.breakdown_pivot = static_cast<std::size_t>(start);
      return result;
    }
    BlockFactor f = factorize(std::move(S));
    if (f.info > 0 && !last) {
      result.breakdown_pivot = static_cast<std::size_t>(start + f.info - 1);
      return result;
    }
    const BlockInertia bi = classify(f, last, zero_tol);
    result.inertia.neg += bi.neg;
    result.inertia.zero += bi.zero;
    result.inertia.pos += bi.pos;
    previous = std::move(f);
    prev_start = start;
  }
  result.ok = true;
  return result;
}

}  // namespace

std::size_t half_bandwidth(const SparseMatrix& A) {
  std::size_t band = 0;
  for (Eigen::Index r = 0; r < A.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(A, r); it; ++it)
      band = std::max(band, static_cast<std::size_t>(std::abs(it.col() - r)));
  return band;
}

InertiaResult inertia(const SparseMatrix& A, double E, const InertiaOptions& options) {
  if (A.rows() != A.cols()) throw InvalidArgument("inertia: matrix must be square");
  if (!std::isfinite(E)) throw InvalidArgument("inertia: energy must be finite");
  InertiaResult out;
  out.zero_tol = options.zero_tol >= 0.0 ? options.zero_tol : 1e-10 * inf_norm(A);
  if (A.rows() == 0) {
    out.energy = E;
    return out;
  }
  const std::size_t block = std::max<std::size_t>(
      {half_bandwidth(A), options.min_block, std::size_t{1}});
  double energy = E;
  for (int retry = 0;; ++retry) {
    const Attempt a = attempt(A, energy, block, out.zero_tol);
    if (a.ok) {
      out.n_neg = a.inertia.neg;
      out.n_zero = a.inertia.zero;
      out.n_pos = a.inertia.pos;
      out.energy = energy;
      out.retries = retry;
      return out;
    }
    if (retry >= options.max_retries) throw FactorizationBreakdown(a.breakdown_pivot, energy);
    energy = energy * (1.0 + 1e-12) + 1e-14;
  }
}

InertiaResult inertia(const DirichletOperator& op, double E, double zero_tol) {
  InertiaOptions options;
  options.zero_tol = zero_tol;
  return inertia(op.matrix(), E, options);
}

Count count_leq(const SparseMatrix& A, double E) {
  const InertiaResult r = inertia(A, E);
  return {r.n_neg + r.n_zero, r.n_zero > 0 || r.retries > 0, r.energy};
}

Count count_leq(const DirichletOperator& op, double E) { return count_leq(op.matrix(), E); }

RelativeCount relative_count(const DirichletOperator& op1, const DirichletOperator& op0,
                             double E) {
  const auto& g1 = op1.grid();
  const auto& g0 = op0.grid();
  if (g1.d != g0.d || g1.n_per_axis != g0.n_per_axis || g1.L != g0.L || g1.h != g0.h)
    throw InvalidArgument("relative_count: operators live on different grids");
  const Count c0 = count_leq(op0, E);
  const Count c1 = count_leq(op1, E);
  return {static_cast<long>(c0.value) - static_cast<long>(c1.value),
          c0.coincident || c1.coincident};
}

std::size_t perturbation_rank(const DirichletOperator& op1, const DirichletOperator& op0) {
  const auto d1 = op1.diagonal();
  const auto d0 = op0.diagonal();
  if (d1.size() != d0.size()) throw InvalidArgument("perturbation_rank: size mismatch");
  std::size_t rank = 0;
  for (std::size_t i = 0; i < d1.size(); ++i) rank += d1[i] != d0[i];
  return rank;
}

}  // namespace ssflab::eigencount
