#include <cmath>
#include <vector>

#include "ssflab/error.hpp"
#include "ssflab/lattice.hpp"

namespace ssflab::lattice {

DirichletOperator::DirichletOperator(GridSpec grid, SparseMatrix matrix,
                                     std::string tag)
    : grid_(grid), matrix_(std::move(matrix)), tag_(std::move(tag)) {
  matrix_.makeCompressed();
}

double DirichletOperator::entry(std::size_t i, std::size_t j) const {
  return matrix_.coeff(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

std::vector<double> DirichletOperator::diagonal() const {
  std::vector<double> diag(dimension());
  for (std::size_t i = 0; i < diag.size(); ++i) diag[i] = entry(i, i);
  return diag;
}

std::pair<double, double> DirichletOperator::gershgorin_bounds() const {
  double lo = INFINITY;
  double hi = -INFINITY;
  for (Eigen::Index r = 0; r < matrix_.outerSize(); ++r) {
    double center = 0.0;
    double radius = 0.0;
    for (SparseMatrix::InnerIterator it(matrix_, r); it; ++it) {
      if (it.col() == r)
        center = it.value();
      else
        radius += std::abs(it.value());
    }
    lo = std::min(lo, center - radius);
    hi = std::max(hi, center + radius);
  }
  return {lo, hi};
}

DirichletOperator assemble_operator(const GridSpec& grid, const PotentialField* U,
                                    const PotentialField* V) {
  for (const PotentialField* f : {U, V})
    if (f && f->dimension() != grid.d)
      throw InvalidArgument("assemble_operator: potential dimension does not match grid");

  const std::size_t N = grid.size();
  const auto n = static_cast<std::size_t>(grid.n_per_axis);
  const double inv_h2 = 1.0 / (grid.h * grid.h);
  const double coupling = -0.5 * inv_h2;

  // Stride of axis j in the lexicographic (first axis slowest) ordering.
  std::vector<std::size_t> stride(static_cast<std::size_t>(grid.d));
  {
    std::size_t s = 1;
    for (int j = grid.d - 1; j >= 0; --j) {
      stride[static_cast<std::size_t>(j)] = s;
      s *= n;
    }
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(N * (1 + 2 * static_cast<std::size_t>(grid.d)));
  std::vector<double> x(static_cast<std::size_t>(grid.d));
  for (std::size_t i = 0; i < N; ++i) {
    grid.point(i, x);
    double diag = grid.d * inv_h2;
    if (U) diag += (*U)(x);
    if (V) diag += (*V)(x);
    if (!std::isfinite(diag))
      throw InvalidArgument("assemble_operator: non-finite potential value at grid point " +
                            std::to_string(i));
    for (int j = 0; j < grid.d; ++j) {
      const std::size_t sj = stride[static_cast<std::size_t>(j)];
      const std::size_t axis_index = (i / sj) % n;
      if (axis_index > 0) triplets.emplace_back(i, i - sj, coupling);
    }
    triplets.emplace_back(i, i, diag);
    for (int j = grid.d - 1; j >= 0; --j) {
      const std::size_t sj = stride[static_cast<std::size_t>(j)];
      const std::size_t axis_index = (i / sj) % n;
      if (axis_index + 1 < n) triplets.emplace_back(i, i + sj, coupling);
    }
  }
  SparseMatrix matrix(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  matrix.setFromTriplets(triplets.begin(), triplets.end());

  std::string tag = "U=" + (U ? U->tag() : std::string("none")) +
                    ";V=" + (V ? V->tag() : std::string("none"));
  if (V) {
    tag += ";shift=";
    for (std::size_t j = 0; j < V->shift().size(); ++j)
      tag += (j ? "," : "") + std::to_string(V->shift()[j]);
  }
  return DirichletOperator(grid, std::move(matrix), std::move(tag));
}

}  // namespace ssflab::lattice
