#include <algorithm>
#include <memory>
#include <cmath>
#include <numbers>
#include <utility>

#include "ssflab/error.hpp"
#include "ssflab/lattice.hpp"

namespace ssflab::lattice {

namespace {

void check_dimension(int d) {
  if (d < 1) throw InvalidArgument("potential: dimension must be >= 1");
}

// Range of a product of interval-valued factors.
std::pair<double, double> interval_product(std::pair<double, double> a,
                                           std::pair<double, double> b) {
  const double c[] = {a.first * b.first, a.first * b.second,
                      a.second * b.first, a.second * b.second};
  return {*std::min_element(std::begin(c), std::end(c)),
          *std::max_element(std::begin(c), std::end(c))};
}

}  // namespace

PotentialField PotentialField::background(int d, Evaluator base,
                                          std::vector<double> period,
                                          double lower, double upper,
                                          std::string tag) {
  check_dimension(d);
  if (period.size() != static_cast<std::size_t>(d))
    throw InvalidArgument("background: period must have one entry per axis");
  for (double p : period)
    if (!(p > 0.0)) throw InvalidArgument("background: periods must be positive");
  if (!(lower <= upper) || !std::isfinite(lower) || !std::isfinite(upper))
    throw InvalidArgument("background: invalid value range");
  PotentialField f;
  f.kind_ = PotentialKind::PeriodicBackground;
  f.d_ = d;
  f.base_ = std::move(base);
  f.period_ = std::move(period);
  f.shift_.assign(static_cast<std::size_t>(d), 0.0);
  f.lower_ = lower;
  f.upper_ = upper;
  f.tag_ = std::move(tag);
  return f;
}

PotentialField PotentialField::perturbation(int d, Evaluator base,
                                            double support_half_width,
                                            double lower, double upper,
                                            std::string tag) {
  check_dimension(d);
  if (!(support_half_width > 0.0))
    throw InvalidArgument("perturbation: support half-width must be positive");
  if (!(lower <= upper) || !std::isfinite(lower) || !std::isfinite(upper))
    throw InvalidArgument("perturbation: invalid value range");
  PotentialField f;
  f.kind_ = PotentialKind::CompactPerturbation;
  f.d_ = d;
  f.base_ = std::move(base);
  f.support_half_width_ = support_half_width;
  f.shift_.assign(static_cast<std::size_t>(d), 0.0);
  f.lower_ = lower;
  f.upper_ = upper;
  f.tag_ = std::move(tag);
  return f;
}

double PotentialField::operator()(std::span<const double> x) const {
  if (is_zero()) return 0.0;
  if (kind_ == PotentialKind::PeriodicBackground) return base_(x);
  double local[8];
  std::vector<double> heap;
  std::span<double> y;
  if (x.size() <= 8) {
    y = std::span<double>(local, x.size());
  } else {
    heap.resize(x.size());
    y = heap;
  }
  for (std::size_t j = 0; j < x.size(); ++j) y[j] = x[j] - shift_[j];
  // Outside the support cube the value is zero by construction.
  for (std::size_t j = 0; j < x.size(); ++j)
    if (std::abs(y[j]) >= support_half_width_) return 0.0;
  return base_(y);
}

double PotentialField::bound() const {
  return std::max(std::abs(lower_), std::abs(upper_));
}

bool PotentialField::in_support_box(std::span<const double> x) const {
  if (kind_ != PotentialKind::CompactPerturbation) return true;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (std::abs(x[j] - shift_[j]) > support_half_width_) return false;
  return true;
}

PotentialField PotentialField::sampled_on_lattice(double h) const {
  if (!(h > 0.0)) throw InvalidArgument("sampled_on_lattice: mesh must be positive");
  PotentialField f = *this;
  if (is_zero() || translation_invariant_) return f;
  auto field = std::make_shared<const PotentialField>(*this);
  const std::vector<double> offset =
      kind_ == PotentialKind::CompactPerturbation ? shift_
                                                  : std::vector<double>(shift_.size(), 0.0);
  // base'(y) = field(snap(y + shift)), so that f(x) = field(snap(x)).
  f.base_ = [field, offset, h](std::span<const double> y) {
    double snapped[8];
    std::vector<double> heap;
    std::span<double> s;
    if (y.size() <= 8) {
      s = std::span<double>(snapped, y.size());
    } else {
      heap.resize(y.size());
      s = heap;
    }
    for (std::size_t j = 0; j < y.size(); ++j) s[j] = h * std::round((y[j] + offset[j]) / h);
    return (*field)(s);
  };
  // Snapping can pull points up to h/2 into the support cube.
  if (kind_ == PotentialKind::CompactPerturbation)
    f.support_half_width_ = support_half_width_ + 0.5 * h;
  f.tag_ = tag_ + "@lattice(" + std::to_string(h) + ")";
  return f;
}

PotentialField shift_potential(const PotentialField& V,
                               std::span<const double> y) {
  if (V.kind() != PotentialKind::CompactPerturbation)
    throw InvalidArgument("shift_potential: only compact perturbations can be shifted");
  if (y.size() != static_cast<std::size_t>(V.dimension()))
    throw InvalidArgument("shift_potential: shift dimension mismatch");
  PotentialField out = V;
  for (std::size_t j = 0; j < y.size(); ++j) out.shift_[j] += y[j];
  return out;
}

PotentialField zero_background(int d) {
  auto f = PotentialField::background(
      d, [](std::span<const double>) { return 0.0; },
      std::vector<double>(static_cast<std::size_t>(d), 1.0), 0.0, 0.0, "zero");
  f.translation_invariant_ = true;
  return f;
}

PotentialField constant_background(int d, double value) {
  if (!std::isfinite(value)) throw InvalidArgument("constant_background: non-finite value");
  auto f = PotentialField::background(
      d, [value](std::span<const double>) { return value; },
      std::vector<double>(static_cast<std::size_t>(d), 1.0), value, value,
      "constant(" + std::to_string(value) + ")");
  f.translation_invariant_ = true;
  return f;
}

PotentialField cosine_background(int d, double amplitude,
                                 std::vector<double> coefficients,
                                 std::vector<double> period) {
  if (coefficients.empty())
    throw InvalidArgument("cosine_background: need at least one coefficient");
  if (period.size() != static_cast<std::size_t>(d))
    throw InvalidArgument("cosine_background: period must have one entry per axis");
  // Per-axis factor range: c0 +- sum_{k>=1} |c_k|.
  double spread = 0.0;
  for (std::size_t k = 1; k < coefficients.size(); ++k) spread += std::abs(coefficients[k]);
  const std::pair<double, double> factor{coefficients[0] - spread, coefficients[0] + spread};
  std::pair<double, double> range{1.0, 1.0};
  for (int j = 0; j < d; ++j) range = interval_product(range, factor);
  range = interval_product(range, {amplitude, amplitude});

  auto eval = [amplitude, coefficients, period](std::span<const double> x) {
    double value = amplitude;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double phase = 2.0 * std::numbers::pi * x[j] / period[j];
      double factor_value = coefficients[0];
      for (std::size_t k = 1; k < coefficients.size(); ++k)
        factor_value += coefficients[k] * std::cos(static_cast<double>(k) * phase);
      value *= factor_value;
    }
    return value;
  };
  std::string tag = "cosine(a=" + std::to_string(amplitude) + ")";
  return PotentialField::background(d, std::move(eval), std::move(period),
                                    range.first, range.second, std::move(tag));
}

PotentialField box_indicator(int d, double amplitude, double ell) {
  if (!(ell > 0.0)) throw InvalidArgument("box_indicator: ell must be positive");
  // Points outside the open cube are rejected by the support test.
  auto f = PotentialField::perturbation(
      d, [amplitude](std::span<const double>) { return amplitude; }, 0.5 * ell,
      std::min(0.0, amplitude), std::max(0.0, amplitude),
      "box(a=" + std::to_string(amplitude) + ",ell=" + std::to_string(ell) + ")");
  return f;
}

PotentialField smooth_bump(int d, double amplitude, double ell) {
  if (!(ell > 0.0)) throw InvalidArgument("smooth_bump: ell must be positive");
  const double half = 0.5 * ell;
  auto eval = [amplitude, half](std::span<const double> x) {
    double value = amplitude;
    for (double xj : x) {
      const double u = xj / half;
      value *= std::exp(1.0 - 1.0 / (1.0 - u * u));
    }
    return value;
  };
  return PotentialField::perturbation(
      d, std::move(eval), half, std::min(0.0, amplitude), std::max(0.0, amplitude),
      "bump(a=" + std::to_string(amplitude) + ",ell=" + std::to_string(ell) + ")");
}

}  // namespace ssflab::lattice
