#pragma once

// Brownian-bridge Monte Carlo for Laplace transforms of spectral shift
// functions via the Feynman-Kac representation of heat-trace differences.

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ssflab/eigencount.hpp"
#include "ssflab/lattice.hpp"
#include "ssflab/rng.hpp"

namespace ssflab::bridge {

using lattice::PotentialField;

/// Discrete Brownian bridge on the uniform time grid s_k = k t / m, pinned at
/// start_end for k = 0 and k = m. Per-coordinate covariance s (t - s) / t.
struct BridgePath {
  int d = 1;
  double t = 1.0;
  int m = 2;
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;
  std::vector<double> start_end;
  /// (m + 1) * d values, time-major.
  std::vector<double> positions;

  std::span<const double> at(int k) const {
    return {positions.data() + static_cast<std::size_t>(k) * static_cast<std::size_t>(d),
            static_cast<std::size_t>(d)};
  }
  double time(int k) const { return t * static_cast<double>(k) / static_cast<double>(m); }
};

/// Level-order (midpoint refinement) schedule for an m-slice bridge: each
/// entry (left, mid, right) fills index mid from its two neighbours. For m a
/// power of two, the first m'-1 entries of the schedule for m are exactly the
/// schedule for m' < m, so bridges with the same stream refine each other.
std::vector<std::array<int, 3>> bridge_schedule(int m);

/// Fills `shape` ((m + 1) * d values) with a bridge pinned at 0 at both ends.
void fill_bridge_shape(CounterStream& stream, int d, double t, int m,
                       const std::vector<std::array<int, 3>>& schedule, std::span<double> shape);

/// Samples a bridge pinned at x; identical (x, t, m, seed, stream) give
/// identical paths and sample_bridge(x + v) == sample_bridge(x) + v.
BridgePath sample_bridge(std::span<const double> x, double t, int m, std::uint64_t seed,
                         std::uint32_t stream = 0);

/// Trapezoid rule for int_0^t W(b(s)) ds over the sampled positions.
double path_integral(const BridgePath& path, const PotentialField& W);
/// exp(-int U).
double functional_U(const BridgePath& path, const PotentialField& U);
/// 1 - exp(-int V).
double functional_V(const BridgePath& path, const PotentialField& V);

/// Open cube centred at `center` with edge length `edge`.
struct Box {
  std::vector<double> center;
  double edge = 0.0;
  bool contains(std::span<const double> x) const;
};

/// 1 iff every sampled position lies in the box. Excursions between time
/// slices are not detected.
int cutoff(const BridgePath& path, const Box& box);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  int m_slices = 0;
  double t = 0.0;
  /// Box size; infinity for infinite-volume estimates.
  double L = std::numeric_limits<double>::infinity();
  std::vector<double> shift;
  std::uint64_t seed = 0;
  /// Bound on the contribution of the discarded spatial region.
  double trunc_tail_bound = 0.0;
  bool tail_warning = false;
};

enum class LaplaceSource { McFinite, McInfinite, TraceOracle };
const char* to_string(LaplaceSource source);

/// A value of the two-sided Laplace transform of an SSF at t.
struct LaplacePoint {
  double t = 0.0;
  double xi_tilde = 0.0;
  LaplaceSource source = LaplaceSource::TraceOracle;
};

struct LaplaceMcResult {
  LaplacePoint point;
  McEstimate estimate;
  /// Standard error of (this frame - first infinite frame) over the shared
  /// paths; NaN when no infinite frame was requested.
  double paired_std_error = std::numeric_limits<double>::quiet_NaN();
};

struct McParams {
  std::size_t n_samples = 100000;
  /// Time slices; 0 selects 64 * ceil(t).
  int m = 0;
  std::uint64_t seed = 20100917;
  /// Dilation of supp V for the spatial integral; 0 selects
  /// default_trunc_radius(t).
  double trunc_radius = 0.0;
  /// Spatial node spacing; 0 selects a default tied to t and lattice_h.
  double spatial_step = 0.0;
  /// When positive, U and V are evaluated on the lattice h Z^d (the
  /// potential a grid operator with this mesh actually sees).
  double lattice_h = 0.0;
  /// A truncation-tail bound above this raises tail_warning.
  double tail_tol = 1e-4;
  int threads = 1;
};

int default_slices(double t);
/// max(3 sqrt(t), r) with 2 sum_k (-1)^{k+1} exp(-2 k^2 r^2 / t) < 1e-6.
double default_trunc_radius(double t);

/// P[max_{s in [0,t]} |b(s)| > r] for a one-dimensional bridge pinned at 0:
/// 2 sum_{k>=1} (-1)^{k+1} exp(-2 k^2 r^2 / t), clipped to [0, 1].
double kolmogorov_tail(double r, double t);

/// Probability that a Brownian bridge from a to b over time dt stays inside
/// the open strip (lo, hi) (method of images).
double strip_survival(double a, double b, double dt, double lo, double hi);

/// Finite box L with the perturbation translated by `shift`, or the whole
/// space when L is infinite.
struct VolumeFrame {
  double L = std::numeric_limits<double>::infinity();
  std::vector<double> shift;
  bool is_infinite() const { return L == std::numeric_limits<double>::infinity(); }
};

/// Estimates xi~(t) for many frames from one set of bridge paths.
///
/// Integration runs in the perturbation's frame: for a node x and a bridge b
/// from x, the integrand is chi_box(x) chi_box(b) U_t(b + x0) V_t(b), with the
/// box Lambda_L(-shift). All frames share the same paths (common random
/// numbers), so differences between frames come only from the cut-offs.
std::vector<LaplaceMcResult> laplace_mc_frames(const PotentialField& U, const PotentialField& V,
                                               std::span<const double> x0, double t,
                                               std::span<const VolumeFrame> frames,
                                               const McParams& params);

/// Requires shift - x0 in p Z^d (p = period of U) and Lambda_ell(shift)
/// strictly inside Lambda_L.
LaplaceMcResult finite_volume_laplace_mc(const PotentialField& U, const PotentialField& V,
                                         double L, std::span<const double> shift,
                                         std::span<const double> x0, double t,
                                         const McParams& params);

LaplaceMcResult infinite_volume_laplace_mc(const PotentialField& U, const PotentialField& V,
                                           std::span<const double> x0, double t,
                                           const McParams& params);

/// (1/t) sum_k [exp(-t lambda0_k) - exp(-t lambda1_k)] from dense spectra.
LaplacePoint trace_laplace_oracle(const lattice::DirichletOperator& op1,
                                  const lattice::DirichletOperator& op0, double t,
                                  std::size_t cap = eigencount::kDefaultOracleCap);
LaplacePoint trace_laplace_from_spectra(const std::vector<double>& spectrum1,
                                        const std::vector<double>& spectrum0, double t);

struct BesselParams {
  std::size_t n_samples = 100000;
  int m = 512;
  std::uint64_t seed = 20100917;
  /// d = 1 only: weight each path by its exact probability of leaving the
  /// strip between slices instead of monitoring the sampled maximum.
  bool crossing_correction = true;
  int threads = 1;
};

/// P[max_{s in [0,t]} |b(s)| > r] for the d-dimensional bridge pinned at 0.
/// For d >= 2 only the sampled maximum is monitored (biased low).
McEstimate bessel_tail(double r, double t, int d, const BesselParams& params);

struct BhlProbe {
  std::vector<McEstimate> estimates;
  double max_estimate = 0.0;
  /// exp(t max(0, -inf U)).
  double analytic_bound = 0.0;
  /// Every estimate minus 3 sigma is below the analytic bound.
  bool dominated = true;
};

/// E_{x,x}[exp(-int_0^t U(b))] at each probe point, with common random numbers
/// across points.
BhlProbe bhl_bound_probe(const PotentialField& U, double t,
                         std::span<const std::vector<double>> xs, const McParams& params);

}  // namespace ssflab::bridge
