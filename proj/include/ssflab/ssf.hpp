#pragma once

// Finite-volume spectral shift functions xi_L(E) = N_0(E) - N_1(E) and their
// energy averages.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ssflab/eigencount.hpp"
#include "ssflab/lattice.hpp"

namespace ssflab::ssf {

using lattice::DirichletOperator;

/// f = chi_I * g with g continuous on I = [lo, hi].
struct WeightFunction {
  double lo = 0.0;
  double hi = 1.0;
  std::function<double(double)> g;
  std::string description;

  double operator()(double E) const { return (E >= lo && E <= hi) ? g(E) : 0.0; }

  static WeightFunction constant(double lo, double hi, double value = 1.0);
  /// g(E) = sum_k coefficients[k] E^k.
  static WeightFunction polynomial(double lo, double hi, std::vector<double> coefficients);
  /// g(E) = scale * exp(rate * E).
  static WeightFunction exponential(double lo, double hi, double scale, double rate);
};

enum class CurveMode { Exact, Sampled };

/// The step function E -> xi_L(E).
///
/// Exact mode stores breakpoints e_0 < e_1 < ... and values v_i on
/// [e_i, e_{i+1}); the curve is 0 below e_0 and right-continuous, matching the
/// "<= E" counting convention. Sampled mode stores (E, xi) pairs.
class SsfCurve {
 public:
  static SsfCurve exact(std::vector<double> breakpoints, std::vector<long> values, double L,
                        std::string meta);
  static SsfCurve sampled(std::vector<double> energies, std::vector<long> values,
                          std::vector<bool> coincident, double L, std::string meta);

  CurveMode mode() const { return mode_; }
  double L() const { return L_; }
  const std::string& meta() const { return meta_; }

  /// Exact mode: breakpoints and the value on [e_i, e_{i+1}).
  /// Sampled mode: probe energies and the value at each.
  const std::vector<double>& energies() const { return energies_; }
  const std::vector<long>& values() const { return values_; }
  const std::vector<bool>& coincident() const { return coincident_; }

  /// Exact mode: value anywhere. Sampled mode: value at a probe energy
  /// (throws if E is not on the probe grid).
  long value_at(double E) const;
  /// Probed range [min, max]; exact curves cover the real line.
  std::pair<double, double> range() const;
  long min_value() const;
  long max_value() const;

 private:
  CurveMode mode_ = CurveMode::Exact;
  std::vector<double> energies_;
  std::vector<long> values_;
  std::vector<bool> coincident_;
  double L_ = 0.0;
  std::string meta_;
};

/// Exact curve from the merged dense spectra of both operators.
SsfCurve ssf_curve_exact(const DirichletOperator& op1, const DirichletOperator& op0,
                         std::size_t oracle_cap = eigencount::kDefaultOracleCap);
/// Exact curve from two precomputed sorted spectra (H_0 and H_1).
SsfCurve ssf_curve_from_spectra(const std::vector<double>& spectrum0,
                                const std::vector<double>& spectrum1, double L,
                                std::string meta);
/// Sampled curve: relative_count at every probe energy.
SsfCurve ssf_curve_sampled(const DirichletOperator& op1, const DirichletOperator& op0,
                           std::span<const double> probe_energies, int threads = 1);

/// Uniform probe grid of `points` energies on [lo, hi].
std::vector<double> energy_grid(double lo, double hi, std::size_t points = 400);

struct AveragedValue {
  double value = 0.0;
  /// Zero for exact curves (up to the quadrature tolerance); for sampled
  /// curves a bound on the error from unresolved jumps between probes.
  double error_bound = 0.0;
};

/// int dE xi_L(E) f(E).
AveragedValue averaged_ssf(const SsfCurve& curve, const WeightFunction& f);

/// (1/delta) int_E^{E+delta} xi_L. Evaluated by exact overlap lengths on
/// exact curves, independently of the quadrature used by averaged_ssf.
double delta_average(const SsfCurve& curve, double E, double delta);

/// Running means M_K = (1/K) sum_{k <= K} values[k].
std::vector<double> cesaro_mean(std::span<const double> values);

/// int dE e^{-tE} xi_L(E), summed interval by interval from the jumps.
double laplace_transform(const SsfCurve& curve, double t);

/// An (H_1, H_0) pair at one box size.
struct OperatorPair {
  DirichletOperator op1;
  DirichletOperator op0;
};
using ScenarioBuilder = std::function<OperatorPair(double L)>;

struct SupScanRow {
  double L = 0.0;
  long value = 0;
  long running_max = 0;
  bool coincident = false;
  std::size_t dimension = 0;
};

/// xi_L(E) at one energy for each L (two inertia calls per L) with the
/// running maximum.
std::vector<SupScanRow> sup_scan(double E, std::span<const double> Ls,
                                 const ScenarioBuilder& builder, int threads = 1);

}  // namespace ssflab::ssf
