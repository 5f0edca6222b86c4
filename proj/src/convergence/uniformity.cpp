#include <algorithm>
#include <cmath>

#include "ssflab/error.hpp"
#include "ssflab/laplace_convergence.hpp"

namespace ssflab::convergence {

void IndexedFamily::validate() const {
  if (n_values.empty()) throw InvalidArgument("indexed family: no lengths");
  if (values.size() != n_values.size())
    throw InvalidArgument("indexed family: one value row per length required");
  for (std::size_t i = 1; i < n_values.size(); ++i)
    if (!(n_values[i] > n_values[i - 1]))
      throw InvalidArgument("indexed family: lengths must be strictly increasing");
  for (const auto& row : values)
    if (row.empty()) throw InvalidArgument("indexed family: empty choice set");
}

std::vector<ProfileRow> uniformity_profile(const IndexedFamily& family, double reference) {
  family.validate();
  std::vector<ProfileRow> profile;
  profile.reserve(family.n_values.size());
  for (std::size_t i = 0; i < family.n_values.size(); ++i) {
    ProfileRow row{family.n_values[i], 0.0, 0};
    for (std::size_t c = 0; c < family.values[i].size(); ++c) {
      const double dev = std::abs(family.values[i][c] - reference);
      if (dev > row.sup_deviation) {
        row.sup_deviation = dev;
        row.worst_choice = c;
      }
    }
    profile.push_back(row);
  }
  return profile;
}

std::vector<double> default_t_grid() { return {0.25, 0.5, 1.0, 2.0}; }

const char* to_string(Verdict verdict) { return verdict == Verdict::Pass ? "pass" : "flag"; }

ConsistencyReport laplace_vs_weighted_consistency(const ConsistencyInput& input) {
  if (input.t_grid.empty()) throw InvalidArgument("consistency: empty t grid");
  if (input.laplace.size() != input.t_grid.size() ||
      input.reference_laplace.size() != input.t_grid.size())
    throw InvalidArgument("consistency: t grid mismatch");
  input.weighted.validate();
  for (const auto& family : input.laplace)
    if (family.n_values != input.weighted.n_values)
      throw InvalidArgument("consistency: length grid mismatch");

  ConsistencyReport report;
  report.laplace_converged = true;
  for (std::size_t k = 0; k < input.t_grid.size(); ++k) {
    report.laplace_profiles.push_back(
        uniformity_profile(input.laplace[k], input.reference_laplace[k]));
    if (!(report.laplace_profiles.back().back().sup_deviation <= input.laplace_tol))
      report.laplace_converged = false;
  }
  report.weighted_profile = uniformity_profile(input.weighted, input.reference_weighted);
  report.weighted_converged =
      report.weighted_profile.back().sup_deviation <= input.weighted_tol;
  if (report.laplace_converged && !report.weighted_converged) {
    report.verdict = Verdict::Flag;
    report.note = "Laplace profiles converged but the weighted profile did not";
  } else if (!report.laplace_converged) {
    report.note = "Laplace profiles above tolerance; no implication tested";
  } else {
    report.note = "both profiles within tolerance";
  }
  return report;
}

std::vector<double> curve_jumps(const ssf::SsfCurve& curve) {
  const auto& e = curve.energies();
  const auto& v = curve.values();
  std::vector<double> jumps;
  if (curve.mode() == ssf::CurveMode::Exact) {
    long previous = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (v[i] != previous) jumps.push_back(e[i]);
      previous = v[i];
    }
  } else {
    // A jump is somewhere between two probes with different values.
    for (std::size_t i = 1; i < e.size(); ++i)
      if (v[i] != v[i - 1]) {
        jumps.push_back(e[i - 1]);
        jumps.push_back(e[i]);
      }
  }
  return jumps;
}

AdjustedInterval uncharged_endpoints(const ssf::SsfCurve& curve, double lo, double hi,
                                     double cell, int min_cells, int max_steps) {
  if (!(cell > 0.0)) throw InvalidArgument("uncharged_endpoints: cell must be positive");
  if (!(lo < hi)) throw InvalidArgument("uncharged_endpoints: need lo < hi");
  const auto jumps = curve_jumps(curve);
  const double clearance = min_cells * cell;
  auto clear = [&](double x) {
    return std::none_of(jumps.begin(), jumps.end(),
                        [&](double j) { return std::abs(j - x) < clearance; });
  };
  AdjustedInterval out{lo, hi, false, false};
  for (int s = 0; s <= max_steps && !out.lo_clear; ++s) {
    const double x = lo - s * cell;
    if (clear(x)) out = {x, out.hi, true, out.hi_clear};
  }
  for (int s = 0; s <= max_steps && !out.hi_clear; ++s) {
    const double x = hi + s * cell;
    if (clear(x)) out = {out.lo, x, out.lo_clear, true};
  }
  return out;
}

}  // namespace ssflab::convergence
