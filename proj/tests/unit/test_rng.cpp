#include <cmath>
#include <set>

#include "doctest.h"
#include "ssflab/parallel.hpp"
#include "ssflab/rng.hpp"

using ssflab::CounterStream;
using ssflab::Philox4x32;
using ssflab::StreamId;

TEST_CASE("philox known-answer vectors") {
  using C = Philox4x32::Counter;
  CHECK(Philox4x32::block({0, 0, 0, 0}, {0, 0}) ==
        C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                          {0xffffffffu, 0xffffffffu}) ==
        C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          {0xa4093822u, 0x299f31d0u}) ==
        C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are pure functions of their id") {
  CounterStream a(StreamId{7, 1, 2, 3}), b(StreamId{7, 1, 2, 3}), c(StreamId{7, 1, 2, 4});
  bool all_equal = true, any_differ = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal(), y = b.normal(), z = c.normal();
    all_equal = all_equal && x == y;
    any_differ = any_differ || x != z;
  }
  CHECK(all_equal);
  CHECK(any_differ);
}

TEST_CASE("uniform lies in the open unit interval with the right moments") {
  CounterStream s(StreamId{42, 0, 0, 0});
  const int n = 200000;
  double sum = 0, sq = 0, lo = 1, hi = 0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    sum += u;
    sq += u * u;
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
  CHECK(std::abs(sum / n - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(sq / n - 1.0 / 3.0) < 0.005);
}

TEST_CASE("normal draws have unit variance and no skew") {
  CounterStream s(StreamId{43, 0, 0, 0});
  const int n = 200000;
  double m1 = 0, m2 = 0, m3 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    m1 += z;
    m2 += z * z;
    m3 += z * z * z;
  }
  CHECK(std::abs(m1 / n) < 5.0 / std::sqrt(n));
  CHECK(std::abs(m2 / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(m3 / n) < 5.0 * std::sqrt(15.0 / n));
}

TEST_CASE("compensated sum recovers small terms lost by naive summation") {
  ssflab::CompensatedSum s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i) s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1000.0);
}

TEST_CASE("parallel_for covers every index once and rethrows") {
  std::vector<int> hits(1000, 0);
  ssflab::parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::set<int>(hits.begin(), hits.end()) == std::set<int>{1});
  CHECK_THROWS_AS(ssflab::parallel_for(10, 3,
                                       [](std::size_t i) {
                                         if (i == 5) throw std::runtime_error("boom");
                                       }),
                  std::runtime_error);
}
