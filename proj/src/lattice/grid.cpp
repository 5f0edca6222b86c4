#include "ssflab/lattice.hpp"

#include <cmath>

#include "ssflab/error.hpp"

namespace ssflab::lattice {

std::size_t GridSpec::size() const {
  std::size_t total = 1;
  for (int j = 0; j < d; ++j) total *= static_cast<std::size_t>(n_per_axis);
  return total;
}

void GridSpec::point(std::size_t index, std::span<double> out) const {
  const auto n = static_cast<std::size_t>(n_per_axis);
  for (int j = d - 1; j >= 0; --j) {
    out[static_cast<std::size_t>(j)] = coordinate(static_cast<int>(index % n));
    index /= n;
  }
}

std::vector<double> GridSpec::point(std::size_t index) const {
  std::vector<double> x(static_cast<std::size_t>(d));
  point(index, x);
  return x;
}

GridSpec build_grid(int d, double L, double h) {
  if (d < 1) throw InvalidArgument("build_grid: dimension must be >= 1");
  if (!(L > 0.0) || !std::isfinite(L))
    throw InvalidArgument("build_grid: edge length must be positive");
  if (!(h > 0.0) || !(h < 0.5 * L))
    throw InvalidArgument("build_grid: need 0 < h < L/2 (box too small for the mesh)");
  const long n = std::lround(L / h) - 1;
  if (n < 1) throw InvalidArgument("build_grid: no interior point fits");
  return GridSpec{d, L, h, static_cast<int>(n)};
}

}  // namespace ssflab::lattice
