#include <algorithm>
#include <cmath>

#include "ssflab/error.hpp"
#include "ssflab/quadrature.hpp"
#include "ssflab/ssf.hpp"

namespace ssflab::ssf {

namespace {

constexpr double kQuadratureTolerance = 1e-10;

// Calls fn(a, b, value) for each constancy interval of an exact curve clipped
// to [lo, hi] on which the curve is nonzero.
template <class Fn>
void for_each_piece(const SsfCurve& curve, double lo, double hi, Fn&& fn) {
  const auto& e = curve.energies();
  const auto& v = curve.values();
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (v[i] == 0) continue;
    const double a = std::max(lo, e[i]);
    const double b = std::min(hi, i + 1 < e.size() ? e[i + 1] : INFINITY);
    if (a < b) fn(a, b, v[i]);
  }
}

AveragedValue averaged_exact(const SsfCurve& curve, const WeightFunction& f) {
  double total = 0.0;
  for_each_piece(curve, f.lo, f.hi, [&](double a, double b, long value) {
    total += static_cast<double>(value) * adaptive_simpson(f.g, a, b, kQuadratureTolerance);
  });
  return {total, 0.0};
}

AveragedValue averaged_sampled(const SsfCurve& curve, const WeightFunction& f) {
  const auto [first, last] = curve.range();
  if (f.lo < first || f.hi > last)
    throw InvalidArgument("averaged_ssf: weight interval lies outside the probed energy range");
  const auto& e = curve.energies();
  const auto& v = curve.values();
  auto xi_linear = [&](std::size_t k, double E) {
    const double w = (E - e[k]) / (e[k + 1] - e[k]);
    return (1.0 - w) * static_cast<double>(v[k]) + w * static_cast<double>(v[k + 1]);
  };
  AveragedValue out;
  for (std::size_t k = 0; k + 1 < e.size(); ++k) {
    const double a = std::max(f.lo, e[k]);
    const double b = std::min(f.hi, e[k + 1]);
    if (!(a < b)) continue;
    const double qa = xi_linear(k, a) * f.g(a);
    const double qb = xi_linear(k, b) * f.g(b);
    out.value += 0.5 * (b - a) * (qa + qb);
    if (v[k] != v[k + 1]) {
      // The jump sits somewhere in the cell; the trapezoid splits it evenly.
      const double gmax = std::max(std::abs(f.g(a)), std::abs(f.g(b)));
      out.error_bound += 0.5 * std::abs(static_cast<double>(v[k + 1] - v[k])) * (b - a) * gmax;
    }
  }
  return out;
}

}  // namespace

AveragedValue averaged_ssf(const SsfCurve& curve, const WeightFunction& f) {
  if (!f.g) throw InvalidArgument("averaged_ssf: weight has no evaluator");
  return curve.mode() == CurveMode::Exact ? averaged_exact(curve, f)
                                          : averaged_sampled(curve, f);
}

double delta_average(const SsfCurve& curve, double E, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("delta_average: delta must be positive");
  if (curve.mode() == CurveMode::Sampled)
    return averaged_ssf(curve, WeightFunction::constant(E, E + delta)).value / delta;
  double area = 0.0;
  for_each_piece(curve, E, E + delta,
                 [&](double a, double b, long value) { area += static_cast<double>(value) * (b - a); });
  return area / delta;
}

std::vector<double> cesaro_mean(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("cesaro_mean: empty sequence");
  std::vector<double> means(values.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    sum += values[k];
    means[k] = sum / static_cast<double>(k + 1);
  }
  return means;
}

double laplace_transform(const SsfCurve& curve, double t) {
  if (curve.mode() != CurveMode::Exact)
    throw InvalidArgument("laplace_transform: needs an exact curve");
  if (!(t > 0.0)) throw InvalidArgument("laplace_transform: t must be positive");
  const auto& e = curve.energies();
  const auto& v = curve.values();
  double total = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (v[i] == 0) continue;
    const double upper = i + 1 < e.size() ? std::exp(-t * e[i + 1]) : 0.0;
    total += static_cast<double>(v[i]) * (std::exp(-t * e[i]) - upper);
  }
  return total / t;
}

}  // namespace ssflab::ssf
