#include <cmath>
#include <deque>

#include "ssflab/bridge_mc.hpp"
#include "ssflab/error.hpp"

namespace ssflab::bridge {

std::vector<std::array<int, 3>> bridge_schedule(int m) {
  if (m < 2) throw InvalidArgument("bridge: need at least 2 time slices");
  std::vector<std::array<int, 3>> schedule;
  schedule.reserve(static_cast<std::size_t>(m - 1));
  std::deque<std::pair<int, int>> pending{{0, m}};
  while (!pending.empty()) {
    const auto [left, right] = pending.front();
    pending.pop_front();
    if (right - left < 2) continue;
    const int mid = left + (right - left) / 2;
    schedule.push_back({left, mid, right});
    pending.emplace_back(left, mid);
    pending.emplace_back(mid, right);
  }
  return schedule;
}

void fill_bridge_shape(CounterStream& stream, int d, double t, int m,
                       const std::vector<std::array<int, 3>>& schedule, std::span<double> shape) {
  const auto du = static_cast<std::size_t>(d);
  for (std::size_t j = 0; j < du; ++j) {
    shape[j] = 0.0;
    shape[static_cast<std::size_t>(m) * du + j] = 0.0;
  }
  const double dm = static_cast<double>(m);
  for (const auto& [left, mid, right] : schedule) {
    const double s_left = t * left / dm;
    const double s_mid = t * mid / dm;
    const double s_right = t * right / dm;
    const double weight = (s_mid - s_left) / (s_right - s_left);
    const double sd = std::sqrt((s_mid - s_left) * (s_right - s_mid) / (s_right - s_left));
    const double* a = shape.data() + static_cast<std::size_t>(left) * du;
    const double* b = shape.data() + static_cast<std::size_t>(right) * du;
    double* out = shape.data() + static_cast<std::size_t>(mid) * du;
    for (std::size_t j = 0; j < du; ++j)
      out[j] = a[j] + weight * (b[j] - a[j]) + sd * stream.normal();
  }
}

BridgePath sample_bridge(std::span<const double> x, double t, int m, std::uint64_t seed,
                         std::uint32_t stream) {
  if (x.empty()) throw InvalidArgument("sample_bridge: empty start point");
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("sample_bridge: t must be positive");
  BridgePath path;
  path.d = static_cast<int>(x.size());
  path.t = t;
  path.m = m;
  path.seed = seed;
  path.stream = stream;
  path.start_end.assign(x.begin(), x.end());
  path.positions.assign(static_cast<std::size_t>(m + 1) * x.size(), 0.0);
  CounterStream rng(StreamId{seed, stream, 0, 0});
  fill_bridge_shape(rng, path.d, t, m, bridge_schedule(m), path.positions);
  for (int k = 0; k <= m; ++k)
    for (std::size_t j = 0; j < x.size(); ++j)
      path.positions[static_cast<std::size_t>(k) * x.size() + j] += x[j];
  return path;
}

double path_integral(const BridgePath& path, const PotentialField& W) {
  if (W.dimension() != path.d) throw InvalidArgument("path_integral: dimension mismatch");
  if (W.is_zero()) return 0.0;
  double sum = 0.0;
  for (int k = 0; k <= path.m; ++k) {
    const double w = W(path.at(k));
    if (!std::isfinite(w)) throw Error("path_integral: potential returned a non-finite value");
    sum += (k == 0 || k == path.m) ? 0.5 * w : w;
  }
  return sum * path.t / path.m;
}

double functional_U(const BridgePath& path, const PotentialField& U) {
  return std::exp(-path_integral(path, U));
}

double functional_V(const BridgePath& path, const PotentialField& V) {
  return -std::expm1(-path_integral(path, V));
}

bool Box::contains(std::span<const double> x) const {
  for (std::size_t j = 0; j < x.size(); ++j)
    if (!(std::abs(x[j] - center[j]) < 0.5 * edge)) return false;
  return true;
}

int cutoff(const BridgePath& path, const Box& box) {
  if (box.center.size() != static_cast<std::size_t>(path.d))
    throw InvalidArgument("cutoff: box dimension mismatch");
  for (int k = 0; k <= path.m; ++k)
    if (!box.contains(path.at(k))) return 0;
  return 1;
}

}  // namespace ssflab::bridge
