#include <algorithm>
#include <cmath>
#include <limits>

#include "ssflab/error.hpp"
#include "ssflab/lattice.hpp"

namespace ssflab::lattice {

SecurityDistance SecurityDistance::log_half(double ell) {
  return {[ell](double L) { return 0.5 * std::log(L - ell + 1.0); },
          "log-half(ell=" + std::to_string(ell) + ")"};
}

SecurityDistance SecurityDistance::linear_fraction(double ell, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw InvalidArgument("linear_fraction: fraction must lie in [0, 1]");
  return {[ell, fraction](double L) { return fraction * 0.5 * (L - ell); },
          "linear-fraction(ell=" + std::to_string(ell) +
              ",f=" + std::to_string(fraction) + ")"};
}

double boundary_distance(std::span<const double> y, double ell, double L) {
  double dist = std::numeric_limits<double>::infinity();
  for (double yj : y) dist = std::min(dist, 0.5 * L - 0.5 * ell - std::abs(yj));
  return dist;
}

ShiftSet allowed_shifts(std::span<const double> x0, double L,
                        std::span<const double> period, double ell,
                        const SecurityDistance& D) {
  const std::size_t d = x0.size();
  if (d == 0 || period.size() != d)
    throw InvalidArgument("allowed_shifts: x0 and period must have the same positive size");
  if (!(ell > 0.0)) throw InvalidArgument("allowed_shifts: ell must be positive");
  for (std::size_t j = 0; j < d; ++j) {
    if (!(period[j] > 0.0)) throw InvalidArgument("allowed_shifts: periods must be positive");
    if (!(x0[j] >= 0.0 && x0[j] < period[j]))
      throw InvalidArgument("allowed_shifts: x0 must lie in the periodicity cell");
  }
  const double dist = D(L);
  if (!std::isfinite(dist) || dist < 0.0 || dist > 0.5 * (L - ell))
    throw InvalidArgument("allowed_shifts: invalid security distance D(L) = " +
                          std::to_string(dist) + " (need 0 <= D(L) <= (L - ell)/2)");

  ShiftSet set;
  set.x0.assign(x0.begin(), x0.end());
  set.L = L;
  set.D_of_L = dist;

  // Per axis: integers k with |x0_j + p_j k| + ell/2 < L/2 - D(L).
  const double reach = 0.5 * L - dist - 0.5 * ell;
  std::vector<std::vector<long>> axis_indices(d);
  for (std::size_t j = 0; j < d; ++j) {
    const long k_lo = static_cast<long>(std::floor((-reach - x0[j]) / period[j])) - 1;
    const long k_hi = static_cast<long>(std::ceil((reach - x0[j]) / period[j])) + 1;
    for (long k = k_lo; k <= k_hi; ++k)
      if (std::abs(x0[j] + period[j] * static_cast<double>(k)) < reach)
        axis_indices[j].push_back(k);
    if (axis_indices[j].empty()) return set;
  }

  // Lexicographic product, first axis slowest.
  std::vector<std::size_t> cursor(d, 0);
  for (;;) {
    std::vector<long> k(d);
    std::vector<double> y(d);
    for (std::size_t j = 0; j < d; ++j) {
      k[j] = axis_indices[j][cursor[j]];
      y[j] = x0[j] + period[j] * static_cast<double>(k[j]);
    }
    set.multi_indices.push_back(std::move(k));
    set.shifts.push_back(std::move(y));
    std::size_t j = d;
    while (j > 0) {
      --j;
      if (++cursor[j] < axis_indices[j].size()) break;
      cursor[j] = 0;
      if (j == 0) return set;
    }
  }
}

}  // namespace ssflab::lattice
