#include <algorithm>
#include <cmath>
#include <limits>

#include "ssflab/error.hpp"
#include "ssflab/parallel.hpp"
#include "ssflab/ssf.hpp"

namespace ssflab::ssf {

SsfCurve SsfCurve::exact(std::vector<double> breakpoints, std::vector<long> values, double L,
                         std::string meta) {
  if (breakpoints.size() != values.size())
    throw InvalidArgument("SsfCurve: breakpoints and values differ in length");
  if (!std::is_sorted(breakpoints.begin(), breakpoints.end()))
    throw InvalidArgument("SsfCurve: breakpoints must be ascending");
  SsfCurve c;
  c.mode_ = CurveMode::Exact;
  c.energies_ = std::move(breakpoints);
  c.values_ = std::move(values);
  c.L_ = L;
  c.meta_ = std::move(meta);
  return c;
}

SsfCurve SsfCurve::sampled(std::vector<double> energies, std::vector<long> values,
                           std::vector<bool> coincident, double L, std::string meta) {
  if (energies.size() != values.size() || energies.size() != coincident.size())
    throw InvalidArgument("SsfCurve: sample arrays differ in length");
  if (energies.empty()) throw InvalidArgument("SsfCurve: no samples");
  if (!std::is_sorted(energies.begin(), energies.end()))
    throw InvalidArgument("SsfCurve: probe energies must be ascending");
  SsfCurve c;
  c.mode_ = CurveMode::Sampled;
  c.energies_ = std::move(energies);
  c.values_ = std::move(values);
  c.coincident_ = std::move(coincident);
  c.L_ = L;
  c.meta_ = std::move(meta);
  return c;
}

long SsfCurve::value_at(double E) const {
  if (mode_ == CurveMode::Exact) {
    const auto it = std::upper_bound(energies_.begin(), energies_.end(), E);
    if (it == energies_.begin()) return 0;
    return values_[static_cast<std::size_t>(it - energies_.begin()) - 1];
  }
  const auto it = std::lower_bound(energies_.begin(), energies_.end(), E);
  if (it == energies_.end() || *it != E)
    throw InvalidArgument("SsfCurve::value_at: energy is not a probe point of a sampled curve");
  return values_[static_cast<std::size_t>(it - energies_.begin())];
}

std::pair<double, double> SsfCurve::range() const {
  if (mode_ == CurveMode::Exact)
    return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  return {energies_.front(), energies_.back()};
}

long SsfCurve::min_value() const {
  long v = mode_ == CurveMode::Exact ? 0 : values_.front();
  for (long x : values_) v = std::min(v, x);
  return v;
}

long SsfCurve::max_value() const {
  long v = mode_ == CurveMode::Exact ? 0 : values_.front();
  for (long x : values_) v = std::max(v, x);
  return v;
}

SsfCurve ssf_curve_from_spectra(const std::vector<double>& spectrum0,
                                const std::vector<double>& spectrum1, double L,
                                std::string meta) {
  // Merge the two sorted spectra: +1 at each H_0 eigenvalue, -1 at each H_1
  // eigenvalue; coincident energies collapse into one breakpoint.
  std::vector<double> breakpoints;
  std::vector<long> values;
  breakpoints.reserve(spectrum0.size() + spectrum1.size());
  values.reserve(spectrum0.size() + spectrum1.size());
  std::size_t i = 0, j = 0;
  long level = 0;
  while (i < spectrum0.size() || j < spectrum1.size()) {
    const double e0 = i < spectrum0.size() ? spectrum0[i] : INFINITY;
    const double e1 = j < spectrum1.size() ? spectrum1[j] : INFINITY;
    const double e = std::min(e0, e1);
    while (i < spectrum0.size() && spectrum0[i] == e) {
      ++level;
      ++i;
    }
    while (j < spectrum1.size() && spectrum1[j] == e) {
      --level;
      ++j;
    }
    if (!values.empty() && values.back() == level) continue;
    breakpoints.push_back(e);
    values.push_back(level);
  }
  return SsfCurve::exact(std::move(breakpoints), std::move(values), L, std::move(meta));
}

SsfCurve ssf_curve_exact(const DirichletOperator& op1, const DirichletOperator& op0,
                         std::size_t oracle_cap) {
  if (op1.dimension() != op0.dimension())
    throw InvalidArgument("ssf_curve_exact: operators live on different grids");
  const auto s0 = eigencount::dense_spectrum(op0, oracle_cap);
  const auto s1 = eigencount::dense_spectrum(op1, oracle_cap);
  return ssf_curve_from_spectra(s0, s1, op0.grid().L, op1.potential_tag());
}

SsfCurve ssf_curve_sampled(const DirichletOperator& op1, const DirichletOperator& op0,
                           std::span<const double> probe_energies, int threads) {
  std::vector<long> values(probe_energies.size());
  std::vector<char> flags(probe_energies.size());
  parallel_for(probe_energies.size(), threads, [&](std::size_t k) {
    const auto r = eigencount::relative_count(op1, op0, probe_energies[k]);
    values[k] = r.value;
    flags[k] = r.coincident;
  });
  return SsfCurve::sampled({probe_energies.begin(), probe_energies.end()}, std::move(values),
                           {flags.begin(), flags.end()}, op0.grid().L, op1.potential_tag());
}

std::vector<double> energy_grid(double lo, double hi, std::size_t points) {
  if (points < 2 || !(lo < hi)) throw InvalidArgument("energy_grid: need lo < hi and >= 2 points");
  std::vector<double> grid(points);
  for (std::size_t k = 0; k < points; ++k)
    grid[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
  grid.back() = hi;
  return grid;
}

}  // namespace ssflab::ssf
