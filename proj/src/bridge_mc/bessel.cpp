#include <algorithm>
#include <cmath>
#include <numbers>

#include "ssflab/bridge_mc.hpp"
#include "ssflab/error.hpp"
#include "ssflab/parallel.hpp"

namespace ssflab::bridge {

namespace {

constexpr std::uint32_t kBesselTag = 0x62657373u;
constexpr std::size_t kBlock = 1024;

}  // namespace

int default_slices(double t) {
  if (!(t > 0.0)) throw InvalidArgument("default_slices: t must be positive");
  return 64 * static_cast<int>(std::ceil(t));
}

double kolmogorov_tail(double r, double t) {
  if (!(t > 0.0)) throw InvalidArgument("kolmogorov_tail: t must be positive");
  if (r <= 0.0) return 1.0;
  const double z = r / std::sqrt(t);
  if (z < 1.0) {
    // Theta-dual form of the same distribution, fast for small z.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double stay = 0.0;
    for (int k = 1; k < 50; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * pi2 / (8.0 * z * z));
      stay += term;
      if (term < 1e-18 * stay) break;
    }
    stay *= std::sqrt(2.0 * std::numbers::pi) / z;
    return std::clamp(1.0 - stay, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k < 50; ++k) {
    const double term = std::exp(-2.0 * k * k * z * z);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double default_trunc_radius(double t) {
  if (!(t > 0.0)) throw InvalidArgument("default_trunc_radius: t must be positive");
  double r = std::sqrt(t);
  while (kolmogorov_tail(r, t) >= 1e-6) r *= 1.01;
  return std::max(3.0 * std::sqrt(t), r);
}

double strip_survival(double a, double b, double dt, double lo, double hi) {
  if (!(a > lo && a < hi && b > lo && b < hi)) return 0.0;
  const double w = hi - lo;
  const double ap = a - lo;
  const double bp = b - lo;
  // Both single-barrier crossing probabilities negligible: skip the series.
  const double to_lo = 2.0 * ap * bp / dt;
  const double to_hi = 2.0 * (w - ap) * (w - bp) / dt;
  if (to_lo > 60.0 && to_hi > 60.0) return 1.0;
  double stay = 0.0;
  for (int k = -3; k <= 3; ++k) {
    const double kw = k * w;
    stay += std::exp(-2.0 * kw * (kw + bp - ap) / dt) - std::exp(-2.0 * (ap + kw) * (bp + kw) / dt);
  }
  return std::clamp(stay, 0.0, 1.0);
}

McEstimate bessel_tail(double r, double t, int d, const BesselParams& params) {
  if (!(t > 0.0)) throw InvalidArgument("bessel_tail: t must be positive");
  if (d < 1) throw InvalidArgument("bessel_tail: dimension must be >= 1");
  if (params.n_samples < 2) throw InvalidArgument("bessel_tail: need at least 2 samples");
  McEstimate est;
  est.n_samples = params.n_samples;
  est.m_slices = params.m;
  est.t = t;
  est.shift.assign(static_cast<std::size_t>(d), 0.0);
  est.seed = params.seed;
  if (r <= 0.0) {
    est.mean = 1.0;
    return est;
  }
  const int m = params.m;
  const auto schedule = bridge_schedule(m);
  const std::size_t n = params.n_samples;
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> sums(blocks, 0.0), squares(blocks, 0.0);
  const bool corrected = params.crossing_correction && d == 1;
  const double dt = t / m;
  parallel_for(blocks, params.threads, [&](std::size_t block) {
    std::vector<double> shape(static_cast<std::size_t>(m + 1) * static_cast<std::size_t>(d));
    CompensatedSum sum, square;
    const std::size_t end = std::min(n, (block + 1) * kBlock);
    for (std::size_t s = block * kBlock; s < end; ++s) {
      CounterStream rng(StreamId{params.seed, static_cast<std::uint32_t>(s), 0, kBesselTag});
      fill_bridge_shape(rng, d, t, m, schedule, shape);
      double value = 0.0;
      if (corrected) {
        double stay = 1.0;
        for (int k = 0; k < m && stay > 0.0; ++k)
          stay *= strip_survival(shape[k], shape[k + 1], dt, -r, r);
        value = 1.0 - stay;
      } else {
        for (int k = 0; k <= m; ++k) {
          double norm2 = 0.0;
          for (int j = 0; j < d; ++j) {
            const double c = shape[static_cast<std::size_t>(k * d + j)];
            norm2 += c * c;
          }
          if (norm2 > r * r) {
            value = 1.0;
            break;
          }
        }
      }
      sum.add(value);
      square.add(value * value);
    }
    sums[block] = sum.value();
    squares[block] = square.value();
  });
  CompensatedSum total, total_sq;
  for (std::size_t b = 0; b < blocks; ++b) {
    total.add(sums[b]);
    total_sq.add(squares[b]);
  }
  const double nn = static_cast<double>(n);
  est.mean = total.value() / nn;
  const double var = std::max(0.0, (total_sq.value() - nn * est.mean * est.mean) / (nn - 1.0));
  est.std_error = std::sqrt(var / nn);
  return est;
}

}  // namespace ssflab::bridge
