#include <algorithm>
#include <cmath>
#include <numbers>

#include "ssflab/bridge_mc.hpp"
#include "ssflab/error.hpp"
#include "ssflab/parallel.hpp"
#include "ssflab/quadrature.hpp"

namespace ssflab::bridge {

namespace {

constexpr std::uint32_t kProbeTag = 0x62686cu;

// Tensor-product midpoint grid covering supp V dilated by the truncation
// radius; cell edges sit on multiples of the step relative to the centre.
struct SpatialGrid {
  std::vector<double> lo;
  double step = 0.0;
  int per_axis = 0;
  std::size_t nodes = 0;
  double cell_volume = 0.0;
  double radius = 0.0;

  void node(std::size_t index, std::span<double> out) const {
    for (std::size_t j = out.size(); j-- > 0;) {
      const auto i = index % static_cast<std::size_t>(per_axis);
      index /= static_cast<std::size_t>(per_axis);
      out[j] = lo[j] + (static_cast<double>(i) + 0.5) * step;
    }
  }
};

SpatialGrid build_spatial_grid(const PotentialField& V, double t, const McParams& params) {
  const int d = V.dimension();
  const double radius = params.trunc_radius > 0.0 ? params.trunc_radius : default_trunc_radius(t);
  double step = params.spatial_step;
  if (!(step > 0.0)) {
    if (params.lattice_h > 0.0) {
      step = 0.5 * params.lattice_h;
      while (step > 0.25 * std::sqrt(t)) step *= 0.5;
    } else {
      step = 0.125 * std::sqrt(t);
    }
  }
  const double half = V.support_half_width();
  int per_axis = static_cast<int>(std::ceil(2.0 * (half + radius) / step - 1e-9));
  if (per_axis % 2 == 1) ++per_axis;
  SpatialGrid grid;
  grid.step = step;
  grid.per_axis = per_axis;
  grid.nodes = 1;
  for (int j = 0; j < d; ++j) {
    grid.lo.push_back(V.shift()[static_cast<std::size_t>(j)] - 0.5 * per_axis * step);
    grid.nodes *= static_cast<std::size_t>(per_axis);
  }
  grid.cell_volume = std::pow(step, d);
  grid.radius = 0.5 * per_axis * step - half;
  return grid;
}

double normalization(double t, int d) {
  return t * std::pow(2.0 * std::numbers::pi * t, 0.5 * d);
}

// Bound on the discarded spatial region, in units of xi~.
double truncation_tail(const PotentialField& U, const PotentialField& V, double t,
                       double radius) {
  const int d = V.dimension();
  const double cu = std::exp(t * std::max(0.0, -U.lower()));
  const double cv = std::max(1.0, std::exp(t * std::max(0.0, -V.lower())) - 1.0);
  const double ell = 2.0 * V.support_half_width();
  // A path from sup-distance r must move one coordinate by at least r.
  auto shell = [&](double r) {
    return 2.0 * d * std::pow(ell + 2.0 * r, d - 1) * kolmogorov_tail(r, t);
  };
  const double integral = adaptive_simpson(shell, radius, radius + 10.0 * std::sqrt(t), 1e-6);
  return cu * cv * integral / normalization(t, d);
}

void check_common(const PotentialField& U, const PotentialField& V, std::span<const double> x0,
                  double t, const McParams& params) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("laplace_mc: t must be positive");
  if (U.kind() != lattice::PotentialKind::PeriodicBackground)
    throw InvalidArgument("laplace_mc: U must be a periodic background");
  if (V.kind() != lattice::PotentialKind::CompactPerturbation)
    throw InvalidArgument("laplace_mc: V must be a compact perturbation");
  if (U.dimension() != V.dimension() || x0.size() != static_cast<std::size_t>(V.dimension()))
    throw InvalidArgument("laplace_mc: dimension mismatch");
  if (params.n_samples < 2) throw InvalidArgument("laplace_mc: need at least 2 samples");
  if (params.m != 0 && params.m < 2) throw InvalidArgument("laplace_mc: need at least 2 slices");
}

void check_frame(const PotentialField& U, const PotentialField& V, std::span<const double> x0,
                 const VolumeFrame& frame) {
  if (frame.is_infinite()) return;
  const auto d = static_cast<std::size_t>(V.dimension());
  if (!(frame.L > 0.0) || !std::isfinite(frame.L))
    throw InvalidArgument("laplace_mc: box size must be positive");
  if (frame.shift.size() != d) throw InvalidArgument("laplace_mc: shift dimension mismatch");
  if (!U.is_translation_invariant()) {
    for (std::size_t j = 0; j < d; ++j) {
      const double q = (frame.shift[j] - x0[j]) / U.period()[j];
      if (std::abs(q - std::round(q)) > 1e-9 * std::max(1.0, std::abs(q)))
        throw InvalidArgument("laplace_mc: shift is not a period translate of x0");
    }
  }
  std::vector<double> centre(d);
  for (std::size_t j = 0; j < d; ++j) centre[j] = frame.shift[j] + V.shift()[j];
  if (!(lattice::boundary_distance(centre, 2.0 * V.support_half_width(), frame.L) > 0.0))
    throw InvalidArgument("laplace_mc: shifted support does not fit strictly inside the box");
}

}  // namespace

const char* to_string(LaplaceSource source) {
  switch (source) {
    case LaplaceSource::McFinite: return "mc-finite";
    case LaplaceSource::McInfinite: return "mc-infinite";
    case LaplaceSource::TraceOracle: return "trace-oracle";
  }
  return "unknown";
}

std::vector<LaplaceMcResult> laplace_mc_frames(const PotentialField& U_in,
                                               const PotentialField& V_in,
                                               std::span<const double> x0, double t,
                                               std::span<const VolumeFrame> frames,
                                               const McParams& params) {
  check_common(U_in, V_in, x0, t, params);
  for (const auto& frame : frames) check_frame(U_in, V_in, x0, frame);

  const int d = V_in.dimension();
  const auto du = static_cast<std::size_t>(d);
  const int m = params.m > 0 ? params.m : default_slices(t);
  const PotentialField U = params.lattice_h > 0.0 ? U_in.sampled_on_lattice(params.lattice_h) : U_in;
  const PotentialField V = params.lattice_h > 0.0 ? V_in.sampled_on_lattice(params.lattice_h) : V_in;
  const SpatialGrid grid = build_spatial_grid(V, t, params);
  const std::size_t per_node =
      std::max<std::size_t>(2, (params.n_samples + grid.nodes - 1) / grid.nodes);
  const std::size_t n_frames = frames.size();
  const double tail = V.is_zero() ? 0.0 : truncation_tail(U, V, t, grid.radius);

  // Per (node, frame): sums of the integrand inside the frame, and of its
  // square on paths the frame cuts off (the paired difference to infinity).
  std::vector<double> sums(grid.nodes * n_frames, 0.0), squares(grid.nodes * n_frames, 0.0),
      cut_sums(grid.nodes * n_frames, 0.0), cut_squares(grid.nodes * n_frames, 0.0);
  if (!V.is_zero() && n_frames > 0) {
    const auto schedule = bridge_schedule(m);
    const double dt = t / m;
    const bool u_zero = U.is_zero();
    const bool u_constant = U.is_translation_invariant();
    parallel_for(grid.nodes, params.threads, [&](std::size_t node) {
      std::vector<double> x(du), shape(static_cast<std::size_t>(m + 1) * du), pos(du),
          shifted(du), lo(du), hi(du);
      std::vector<CompensatedSum> sum(n_frames), square(n_frames), cut(n_frames),
          cut_square(n_frames);
      grid.node(node, x);
      for (std::size_t s = 0; s < per_node; ++s) {
        CounterStream rng(StreamId{params.seed, static_cast<std::uint32_t>(node),
                                   static_cast<std::uint32_t>(s), 0});
        fill_bridge_shape(rng, d, t, m, schedule, shape);
        double iu = 0.0, iv = 0.0;
        std::copy(x.begin(), x.end(), lo.begin());
        std::copy(x.begin(), x.end(), hi.begin());
        for (int k = 0; k <= m; ++k) {
          const double w = (k == 0 || k == m) ? 0.5 : 1.0;
          for (std::size_t j = 0; j < du; ++j) {
            pos[j] = x[j] + shape[static_cast<std::size_t>(k) * du + j];
            lo[j] = std::min(lo[j], pos[j]);
            hi[j] = std::max(hi[j], pos[j]);
          }
          iv += w * V(pos);
          if (!u_zero && !u_constant) {
            for (std::size_t j = 0; j < du; ++j) shifted[j] = pos[j] + x0[j];
            iu += w * U(shifted);
          }
        }
        iv *= dt;
        iu = u_zero ? 0.0 : (u_constant ? U.lower() * t : iu * dt);
        const double value = std::exp(-iu) * -std::expm1(-iv);
        if (value == 0.0) continue;
        for (std::size_t f = 0; f < n_frames; ++f) {
          const auto& frame = frames[f];
          bool inside = true;
          if (!frame.is_infinite()) {
            const double edge = 0.5 * frame.L;
            for (std::size_t j = 0; j < du && inside; ++j)
              inside = lo[j] + frame.shift[j] > -edge && hi[j] + frame.shift[j] < edge;
          }
          if (!inside) {
            cut[f].add(value);
            cut_square[f].add(value * value);
            continue;
          }
          sum[f].add(value);
          square[f].add(value * value);
        }
      }
      for (std::size_t f = 0; f < n_frames; ++f) {
        sums[node * n_frames + f] = sum[f].value();
        squares[node * n_frames + f] = square[f].value();
        cut_sums[node * n_frames + f] = cut[f].value();
        cut_squares[node * n_frames + f] = cut_square[f].value();
      }
    });
  }

  const double norm = normalization(t, d);
  const double n = static_cast<double>(per_node);
  const bool has_infinite = std::any_of(frames.begin(), frames.end(),
                                        [](const VolumeFrame& fr) { return fr.is_infinite(); });
  std::vector<LaplaceMcResult> results;
  results.reserve(n_frames);
  for (std::size_t f = 0; f < n_frames; ++f) {
    CompensatedSum phi, variance, paired_variance;
    for (std::size_t node = 0; node < grid.nodes; ++node) {
      const std::size_t slot = node * n_frames + f;
      const double mean = sums[slot] / n;
      const double var = std::max(0.0, (squares[slot] - n * mean * mean) / (n - 1.0));
      phi.add(mean);
      variance.add(var / n);
      const double cut_mean = cut_sums[slot] / n;
      paired_variance.add(
          std::max(0.0, (cut_squares[slot] - n * cut_mean * cut_mean) / (n - 1.0)) / n);
    }
    LaplaceMcResult r;
    r.estimate.mean = grid.cell_volume * phi.value() / norm;
    r.estimate.std_error = grid.cell_volume * std::sqrt(variance.value()) / norm;
    r.estimate.n_samples = per_node * grid.nodes;
    r.estimate.m_slices = m;
    r.estimate.t = t;
    r.estimate.L = frames[f].L;
    r.estimate.shift = frames[f].is_infinite() ? std::vector<double>(x0.begin(), x0.end())
                                               : frames[f].shift;
    r.estimate.seed = params.seed;
    r.estimate.trunc_tail_bound = tail;
    r.estimate.tail_warning = tail > params.tail_tol;
    if (has_infinite)
      r.paired_std_error = grid.cell_volume * std::sqrt(paired_variance.value()) / norm;
    r.point.t = t;
    r.point.xi_tilde = r.estimate.mean;
    r.point.source =
        frames[f].is_infinite() ? LaplaceSource::McInfinite : LaplaceSource::McFinite;
    results.push_back(std::move(r));
  }
  return results;
}

LaplaceMcResult finite_volume_laplace_mc(const PotentialField& U, const PotentialField& V,
                                         double L, std::span<const double> shift,
                                         std::span<const double> x0, double t,
                                         const McParams& params) {
  const VolumeFrame frame{L, std::vector<double>(shift.begin(), shift.end())};
  return laplace_mc_frames(U, V, x0, t, std::span(&frame, 1), params).front();
}

LaplaceMcResult infinite_volume_laplace_mc(const PotentialField& U, const PotentialField& V,
                                           std::span<const double> x0, double t,
                                           const McParams& params) {
  const VolumeFrame frame{};
  return laplace_mc_frames(U, V, x0, t, std::span(&frame, 1), params).front();
}

BhlProbe bhl_bound_probe(const PotentialField& U_in, double t,
                         std::span<const std::vector<double>> xs, const McParams& params) {
  if (!(t > 0.0)) throw InvalidArgument("bhl_bound_probe: t must be positive");
  if (params.n_samples < 2) throw InvalidArgument("bhl_bound_probe: need at least 2 samples");
  const int d = U_in.dimension();
  const auto du = static_cast<std::size_t>(d);
  for (const auto& x : xs)
    if (x.size() != du) throw InvalidArgument("bhl_bound_probe: point dimension mismatch");
  const int m = params.m > 0 ? params.m : default_slices(t);
  const PotentialField U = params.lattice_h > 0.0 ? U_in.sampled_on_lattice(params.lattice_h) : U_in;
  const auto schedule = bridge_schedule(m);
  const double dt = t / m;
  const std::size_t n = params.n_samples;

  BhlProbe probe;
  probe.analytic_bound = std::exp(t * std::max(0.0, -U.lower()));
  probe.estimates.resize(xs.size());
  parallel_for(xs.size(), params.threads, [&](std::size_t i) {
    std::vector<double> shape(static_cast<std::size_t>(m + 1) * du), pos(du);
    CompensatedSum sum, square;
    for (std::size_t s = 0; s < n; ++s) {
      // Same stream for every probe point: estimates are coupled.
      CounterStream rng(StreamId{params.seed, 0, static_cast<std::uint32_t>(s), kProbeTag});
      fill_bridge_shape(rng, d, t, m, schedule, shape);
      double integral = 0.0;
      for (int k = 0; k <= m; ++k) {
        for (std::size_t j = 0; j < du; ++j)
          pos[j] = xs[i][j] + shape[static_cast<std::size_t>(k) * du + j];
        integral += ((k == 0 || k == m) ? 0.5 : 1.0) * U(pos);
      }
      const double value = std::exp(-integral * dt);
      sum.add(value);
      square.add(value * value);
    }
    McEstimate& est = probe.estimates[i];
    const double nn = static_cast<double>(n);
    est.mean = sum.value() / nn;
    est.std_error =
        std::sqrt(std::max(0.0, (square.value() - nn * est.mean * est.mean) / (nn - 1.0)) / nn);
    est.n_samples = n;
    est.m_slices = m;
    est.t = t;
    est.shift = xs[i];
    est.seed = params.seed;
  });
  for (const auto& est : probe.estimates) {
    probe.max_estimate = std::max(probe.max_estimate, est.mean);
    if (est.mean - 3.0 * est.std_error > probe.analytic_bound) probe.dominated = false;
  }
  return probe;
}

}  // namespace ssflab::bridge
