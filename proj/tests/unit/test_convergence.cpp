#include <algorithm>

#include "doctest.h"
#include "ssflab/error.hpp"
#include "ssflab/laplace_convergence.hpp"

using namespace ssflab;
using namespace ssflab::convergence;

namespace {

IndexedFamily family(std::vector<double> ns, std::vector<std::vector<double>> values) {
  return {std::move(ns), std::move(values)};
}

}  // namespace

TEST_CASE("uniformity profile examples") {
  const auto flat = uniformity_profile(family({1, 2, 3}, {{5, 5}, {5}, {5, 5, 5}}), 5.0);
  for (const auto& row : flat) CHECK(row.sup_deviation == 0.0);

  const auto decay = uniformity_profile(family({1, 2, 4}, {{3, 3}, {2.5, 2.5}, {2.25}}), 2.0);
  CHECK(decay[0].sup_deviation == 1.0);
  CHECK(decay[1].sup_deviation == 0.5);
  CHECK(decay[2].sup_deviation == 0.25);

  // One bad choice per n at a fixed gap: the profile does not decay.
  const auto bad = uniformity_profile(
      family({1, 2, 3}, {{0.0, 0.3}, {0.0, 0.0, 0.3}, {0.3, 0.0, 0.0, 0.0}}), 0.0);
  for (const auto& row : bad) CHECK(row.sup_deviation == doctest::Approx(0.3));
  CHECK(bad[2].worst_choice == 0);
}

TEST_CASE("profile is permutation invariant and monotone under adding choices") {
  std::vector<double> row{0.1, -0.4, 0.25, 0.05};
  const double base = uniformity_profile(family({1}, {row}), 0.0)[0].sup_deviation;
  std::sort(row.begin(), row.end());
  do {
    CHECK(uniformity_profile(family({1}, {row}), 0.0)[0].sup_deviation == base);
  } while (std::next_permutation(row.begin(), row.end()));
  row.push_back(0.01);
  CHECK(uniformity_profile(family({1}, {row}), 0.0)[0].sup_deviation >= base);
  row.push_back(-0.9);
  CHECK(uniformity_profile(family({1}, {row}), 0.0)[0].sup_deviation == 0.9);
}

TEST_CASE("family validation") {
  CHECK_THROWS_AS(uniformity_profile(family({}, {}), 0.0), InvalidArgument);
  CHECK_THROWS_AS(uniformity_profile(family({1, 2}, {{1}}), 0.0), InvalidArgument);
  CHECK_THROWS_AS(uniformity_profile(family({2, 1}, {{1}, {1}}), 0.0), InvalidArgument);
  CHECK_THROWS_AS(uniformity_profile(family({1}, {{}}), 0.0), InvalidArgument);
}

TEST_CASE("consistency verdicts") {
  ConsistencyInput in;
  in.t_grid = default_t_grid();
  for (std::size_t k = 0; k < in.t_grid.size(); ++k) {
    in.laplace.push_back(family({12, 16}, {{0.0, 0.0}, {0.0}}));
    in.reference_laplace.push_back(0.0);
  }
  in.weighted = family({12, 16}, {{0.0, 0.0}, {0.0}});
  in.laplace_tol = 1e-3;
  in.weighted_tol = 1e-3;
  auto report = laplace_vs_weighted_consistency(in);
  CHECK(report.verdict == Verdict::Pass);
  CHECK(report.laplace_converged);
  CHECK(report.weighted_converged);

  in.weighted = family({12, 16}, {{0.0, 0.0}, {0.5}});
  report = laplace_vs_weighted_consistency(in);
  CHECK(report.verdict == Verdict::Flag);

  // Laplace side not converged: no implication, never a flag.
  in.laplace[1] = family({12, 16}, {{0.0}, {1.0}});
  report = laplace_vs_weighted_consistency(in);
  CHECK(!report.laplace_converged);
  CHECK(report.verdict == Verdict::Pass);

  in.reference_laplace.pop_back();
  CHECK_THROWS_AS(laplace_vs_weighted_consistency(in), InvalidArgument);
}

TEST_CASE("endpoints are moved off charged energies") {
  const auto curve = ssf::SsfCurve::exact({1.0, 3.0}, {1, 0}, 10.0, "box");
  const auto jumps = curve_jumps(curve);
  CHECK(jumps == std::vector<double>{1.0, 3.0});
  const auto clear = uncharged_endpoints(curve, 0.0, 2.0, 0.01);
  CHECK(clear.lo == 0.0);
  CHECK(clear.hi == 2.0);
  const auto moved = uncharged_endpoints(curve, 0.95, 2.98, 0.01);
  CHECK(moved.lo_clear);
  CHECK(moved.hi_clear);
  CHECK(moved.lo <= 0.9 + 1e-12);
  CHECK(moved.hi >= 3.1 - 1e-12);
}
