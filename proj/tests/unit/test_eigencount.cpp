#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "ssflab/eigencount.hpp"
#include "ssflab/error.hpp"
#include "ssflab/lattice.hpp"
#include "ssflab/rng.hpp"

using namespace ssflab;
using namespace ssflab::lattice;
using namespace ssflab::eigencount;

namespace {

DirichletOperator free_op(int d, int n, double h) {
  return assemble_operator(build_grid(d, (n + 1) * h, h), nullptr, nullptr);
}

}  // namespace

TEST_CASE("closed-form counts for the free d=1 operator") {
  const auto op = free_op(1, 3, 1.0);
  CHECK(count_leq(op, 0.5).value == 1);
  CHECK(count_leq(op, 100.0).value == 3);
  CHECK(count_leq(op, -1.0).value == 0);
  const auto at = count_leq(op, 1.0);
  CHECK(at.value == 2);
  CHECK(at.coincident);
  const auto r = inertia(op, 1.0);
  CHECK(r.n_neg + r.n_zero + r.n_pos == 3);
}

TEST_CASE("dense spectrum matches closed forms") {
  const auto s = dense_spectrum(free_op(1, 3, 1.0));
  CHECK(s[0] == doctest::Approx(1 - std::sqrt(2.0) / 2).epsilon(1e-12));
  CHECK(s[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s[2] == doctest::Approx(1 + std::sqrt(2.0) / 2).epsilon(1e-12));

  auto expected = oracle::free_2d(6, 0.5);
  std::sort(expected.begin(), expected.end());
  const auto s2 = dense_spectrum(free_op(2, 6, 0.5));
  REQUIRE(s2.size() == expected.size());
  for (std::size_t k = 0; k < s2.size(); ++k) CHECK(s2[k] == doctest::Approx(expected[k]).epsilon(1e-12));

  const auto c = constant_background(2, 0.75);
  const auto shifted = dense_spectrum(assemble_operator(build_grid(2, 3.5, 0.5), &c, nullptr));
  for (std::size_t k = 0; k < s2.size(); ++k)
    CHECK(shifted[k] == doctest::Approx(expected[k] + 0.75).epsilon(1e-12));
}

TEST_CASE("oracle cap is enforced") {
  CHECK_THROWS_AS(dense_spectrum(free_op(1, 50, 0.1), 10), OracleCapExceeded);
}

TEST_CASE("closed-form counts at many energies, d=1 and d=2") {
  CounterStream rng(StreamId{11, 0, 0, 0});
  for (int n : {3, 10, 100, 400}) {
    const auto op = free_op(1, n, 1.0);
    const auto ev = oracle::free_1d(n, 1.0);
    for (int k = 0; k < 50; ++k) {
      const double E = -0.2 + 2.4 * rng.uniform();
      CHECK(count_leq(op, E).value == oracle::count_leq(ev, E));
    }
  }
  const auto op2 = free_op(2, 30, 0.2);
  const auto ev2 = oracle::free_2d(30, 0.2);
  for (int k = 0; k < 40; ++k) {
    const double E = 100.0 * rng.uniform();
    CHECK(count_leq(op2, E).value == oracle::count_leq(ev2, E));
  }
}

TEST_CASE("random sparse symmetric 50x50: inertia matches the dense count") {
  CounterStream rng(StreamId{12, 0, 0, 0});
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < 50; ++i) {
    t.emplace_back(i, i, 4.0 * rng.uniform() - 2.0);
    for (int j = i + 1; j < std::min(50, i + 8); ++j)
      if (rng.uniform() < 0.4) {
        const double v = rng.uniform() - 0.5;
        t.emplace_back(i, j, v);
        t.emplace_back(j, i, v);
      }
  }
  SparseMatrix A(50, 50);
  A.setFromTriplets(t.begin(), t.end());
  const auto spectrum = dense_spectrum(A);
  for (int k = 0; k < 100; ++k) {
    const double E = -4.0 + 8.0 * rng.uniform();
    CHECK(count_leq(A, E).value == count_in_spectrum(spectrum, E));
  }
}

TEST_CASE("singular intermediate pivot triggers a retry and still counts correctly") {
  // 1x1 blocks: the leading block is A_00 - E = 0 at E = 1.
  SparseMatrix A(3, 3);
  std::vector<Eigen::Triplet<double>> t{{0, 0, 1.0}, {1, 1, 2.0}, {2, 2, 3.0},
                                        {0, 1, 0.5}, {1, 0, 0.5}, {1, 2, 0.5}, {2, 1, 0.5}};
  A.setFromTriplets(t.begin(), t.end());
  InertiaOptions options;
  options.min_block = 1;
  const auto r = inertia(A, 1.0, options);
  CHECK(r.retries >= 1);
  CHECK(r.n_neg + r.n_zero == count_in_spectrum(dense_spectrum(A), r.energy));
}

TEST_CASE("count is monotone in E") {
  const auto U = cosine_background(2, 0.5, {1.0, 1.0}, {1.0, 1.0});
  const auto V = box_indicator(2, -3.0, 1.0);
  const auto op = assemble_operator(build_grid(2, 6.0, 0.25), &U, &V);
  std::size_t previous = 0;
  for (double E = -3.0; E <= 40.0; E += 0.37) {
    const auto c = count_leq(op, E).value;
    CHECK(c >= previous);
    previous = c;
  }
}

TEST_CASE("relative count: zero, sign, rank and dense agreement") {
  const auto grid = build_grid(1, 20.0, 0.25);
  const auto V = box_indicator(1, 5.0, 1.0);
  const auto op0 = assemble_operator(grid, nullptr, nullptr);
  const auto op1 = assemble_operator(grid, nullptr, &V);
  const auto rank = perturbation_rank(op1, op0);
  CHECK(rank == 3);
  const auto s0 = dense_spectrum(op0), s1 = dense_spectrum(op1);
  CHECK(relative_count(op1, op0, 1.0).value ==
        static_cast<long>(count_in_spectrum(s0, 1.0)) -
            static_cast<long>(count_in_spectrum(s1, 1.0)));
  for (double E = -1.0; E < 40.0; E += 0.5) {
    const long xi = relative_count(op1, op0, E).value;
    CHECK(xi >= 0);
    CHECK(xi <= static_cast<long>(rank));
    CHECK(relative_count(op0, op0, E).value == 0);
  }
  CHECK_THROWS_AS(relative_count(op1, free_op(1, 5, 1.0), 1.0), InvalidArgument);
}

TEST_CASE("relative count beyond the dense cap agrees with Birman-Schwinger") {
  const int n = 5000;
  const double h = 0.01;
  const auto grid = build_grid(1, (n + 1) * h, h);
  const auto V = box_indicator(1, 2.0, 2.0);
  const auto op0 = assemble_operator(grid, nullptr, nullptr);
  const auto op1 = assemble_operator(grid, nullptr, &V);
  REQUIRE(op0.dimension() > kDefaultOracleCap);
  std::vector<int> support;
  std::vector<double> values;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (std::abs(grid.point(i)[0]) < 1.0) {
      support.push_back(static_cast<int>(i));
      values.push_back(2.0);
    }
  for (double E : {0.013, 0.71, 3.3, 12.9}) {
    const auto r = relative_count(op1, op0, E);
    CHECK(!r.coincident);
    CHECK(r.value == oracle::birman_schwinger_1d(n, h, support, values, E));
  }
}
