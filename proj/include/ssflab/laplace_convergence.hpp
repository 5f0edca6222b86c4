#pragma once

// Sup-deviation profiles over indexed families and the forward consistency
// check between Laplace-space and weighted-SSF convergence.

#include <cstddef>
#include <string>
#include <vector>

#include "ssflab/ssf.hpp"

namespace ssflab::convergence {

/// values[n][choice]: one real per (length index, choice). Choice sets may
/// differ in size between lengths but must be nonempty.
struct IndexedFamily {
  std::vector<double> n_values;
  std::vector<std::vector<double>> values;

  void validate() const;
};

struct ProfileRow {
  double n = 0.0;
  double sup_deviation = 0.0;
  std::size_t worst_choice = 0;
};

/// For each n: max over choices of |value - reference|.
std::vector<ProfileRow> uniformity_profile(const IndexedFamily& family, double reference);

std::vector<double> default_t_grid();

enum class Verdict { Pass, Flag };
const char* to_string(Verdict verdict);

struct ConsistencyInput {
  std::vector<double> t_grid;
  /// One family per t, sharing n_values with `weighted`.
  std::vector<IndexedFamily> laplace;
  std::vector<double> reference_laplace;
  IndexedFamily weighted;
  double reference_weighted = 0.0;
  double laplace_tol = 0.0;
  double weighted_tol = 0.0;
};

struct ConsistencyReport {
  std::vector<std::vector<ProfileRow>> laplace_profiles;
  std::vector<ProfileRow> weighted_profile;
  /// Laplace sup-deviation below tol at every t, at the largest n.
  bool laplace_converged = false;
  bool weighted_converged = false;
  /// Flag only when the Laplace side converged but the weighted side did not;
  /// the converse implication is never asserted.
  Verdict verdict = Verdict::Pass;
  std::string note;
};

ConsistencyReport laplace_vs_weighted_consistency(const ConsistencyInput& input);

/// Interval endpoints moved outward (lo down, hi up) in steps of `cell` until
/// each lies at least min_cells cells from every jump of the curve. clear_*
/// is false when no such position exists within the search window.
struct AdjustedInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_clear = false;
  bool hi_clear = false;
};

std::vector<double> curve_jumps(const ssf::SsfCurve& curve);
AdjustedInterval uncharged_endpoints(const ssf::SsfCurve& curve, double lo, double hi,
                                     double cell, int min_cells = 10, int max_steps = 1000);

}  // namespace ssflab::convergence
