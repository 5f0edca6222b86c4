#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>

#include "ssflab/bridge_mc.hpp"
#include "ssflab/eigencount.hpp"
#include "ssflab/parallel.hpp"
#include "ssflab/rng.hpp"
#include "ssflab/ssf.hpp"
#include "ssflab/validation.hpp"

namespace ssflab::validation {

namespace {

using cli::CsvWriter;
using cli::ScenarioConfig;
using lattice::PotentialField;

constexpr double kKirschEnergy = 3.5;
constexpr double kKirschMesh = 0.25;
constexpr double kTrendMesh = 0.125;

struct Context {
  ScenarioConfig config;
  int threads = 1;
  std::filesystem::path out_dir;
  std::uint64_t seed() const { return config.mc.seed; }
  std::filesystem::path table(int id) const {
    char name[64];
    std::snprintf(name, sizeof name, "criterion_%02d_%s.csv", id, criterion_name(id).c_str());
    return out_dir / name;
  }
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

// Random operator for the oracle criteria: signed potentials of all kinds,
// dimension at most max_dim.
struct RandomInstance {
  lattice::DirichletOperator op1;
  lattice::DirichletOperator op0;
  int d;
};

RandomInstance random_instance(CounterStream& rng, int d, std::size_t max_dim) {
  const int n = d == 1 ? 20 + static_cast<int>(rng.uniform() * static_cast<double>(max_dim - 20))
                       : 4 + static_cast<int>(rng.uniform() * (std::sqrt(double(max_dim)) - 4.0));
  const double h = 0.05 + 0.45 * rng.uniform();
  const double L = (n + 1) * h;
  const auto grid = lattice::build_grid(d, L, h);
  PotentialField U = lattice::zero_background(d);
  const double pick = rng.uniform();
  if (pick < 0.3) {
    U = lattice::constant_background(d, 4.0 * rng.uniform() - 2.0);
  } else if (pick < 0.8) {
    std::vector<double> period(static_cast<std::size_t>(d), 0.5 + rng.uniform());
    U = lattice::cosine_background(d, 2.0 * rng.uniform(), {1.0, rng.uniform() - 0.5, 0.3},
                                   period);
  }
  const double amplitude = 6.0 * rng.uniform() - 2.0;
  const double ell = std::min(0.9 * L, 0.3 + 0.3 * L * rng.uniform());
  const PotentialField V = rng.uniform() < 0.5 ? lattice::box_indicator(d, amplitude, ell)
                                               : lattice::smooth_bump(d, amplitude, ell);
  return {lattice::assemble_operator(grid, &U, &V), lattice::assemble_operator(grid, &U, nullptr),
          d};
}

ScenarioConfig kirsch_config(const ScenarioConfig& base, int d) {
  ScenarioConfig c = base;
  c.d = d;
  c.h = kKirschMesh;
  c.U = cli::BackgroundSpec{};
  c.U.kind = "zero";
  c.U.period.assign(static_cast<std::size_t>(d), 1.0);
  c.x0.assign(static_cast<std::size_t>(d), 0.0);
  c.V = cli::PerturbationSpec{"box-indicator", 2.0, 1.0, 1};
  return c;
}

CriterionResult inertia_oracle(const Context& ctx) {
  CsvWriter table(ctx.table(1), {"instance", "d", "dimension", "E", "count_inertia",
                                 "count_dense", "compared"});
  CounterStream rng(StreamId{ctx.seed(), 1, 0, 0});
  std::size_t compared = 0, mismatches = 0, skipped = 0;
  for (int instance = 0; instance < 60; ++instance) {
    const int d = instance % 2 == 0 ? 1 : 2;
    const auto inst = random_instance(rng, d, 400);
    const auto spectrum = eigencount::dense_spectrum(inst.op1, ctx.config.oracle_cap);
    const auto [lo, hi] = inst.op1.gershgorin_bounds();
    double norm_inf = 0.0;
    for (Eigen::Index r = 0; r < inst.op1.matrix().outerSize(); ++r) {
      double row = 0.0;
      for (lattice::SparseMatrix::InnerIterator it(inst.op1.matrix(), r); it; ++it)
        row += std::abs(it.value());
      norm_inf = std::max(norm_inf, row);
    }
    const double zero_tol = 1e-10 * norm_inf;
    for (int k = 0; k < 6; ++k) {
      const double E = lo + (hi - lo) * rng.uniform();
      const bool near = std::any_of(spectrum.begin(), spectrum.end(),
                                    [&](double l) { return std::abs(l - E) <= zero_tol; });
      const auto count = eigencount::count_leq(inst.op1, E);
      const auto dense = eigencount::count_in_spectrum(spectrum, E);
      if (near) {
        ++skipped;
      } else {
        ++compared;
        if (count.value != dense) ++mismatches;
      }
      table.row({instance, d, inst.op1.dimension(), E, count.value, dense, !near});
    }
  }
  CriterionResult r;
  r.passed = compared >= 200 && mismatches == 0;
  r.summary = std::to_string(compared) + " pairs compared, " + std::to_string(mismatches) +
              " mismatches, " + std::to_string(skipped) + " skipped near an eigenvalue";
  return r;
}

CriterionResult closed_form_counts(const Context& ctx) {
  CsvWriter table(ctx.table(2), {"n", "E", "count_inertia", "count_closed_form"});
  CounterStream rng(StreamId{ctx.seed(), 2, 0, 0});
  std::size_t mismatches = 0, total = 0;
  for (int n : {3, 10, 100}) {
    const auto grid = lattice::build_grid(1, n + 1.0, 1.0);
    const auto op = lattice::assemble_operator(grid, nullptr, nullptr);
    for (int k = 0; k < 50; ++k) {
      const double E = -0.2 + 2.4 * rng.uniform();
      std::size_t expected = 0;
      for (int j = 1; j <= n; ++j)
        if (1.0 - std::cos(j * std::numbers::pi / (n + 1)) <= E) ++expected;
      const auto count = eigencount::count_leq(op, E);
      ++total;
      if (count.value != expected) ++mismatches;
      table.row({n, E, count.value, expected});
    }
  }
  CriterionResult r;
  r.passed = mismatches == 0;
  r.summary = std::to_string(total) + " energies, " + std::to_string(mismatches) + " mismatches";
  return r;
}

CriterionResult sign_and_rank(const Context& ctx) {
  CsvWriter table(ctx.table(3), {"scenario", "d", "L", "E", "xi", "rank"});
  struct Scenario {
    std::string name;
    ScenarioConfig config;
    std::vector<double> Ls;
  };
  std::vector<Scenario> scenarios;
  {
    ScenarioConfig c = ctx.config;
    c.h = kTrendMesh;
    scenarios.push_back({"d1-default", c, {8, 12, 16, 24}});
    c.V.kind = "bump";
    scenarios.push_back({"d1-bump", c, {8, 16}});
    scenarios.push_back({"d2-free", kirsch_config(ctx.config, 2), {6, 8, 10}});
    ScenarioConfig p = kirsch_config(ctx.config, 2);
    p.U = ctx.config.U;
    p.U.period.assign(2, ctx.config.U.period.front());
    scenarios.push_back({"d2-periodic", p, {6, 8}});
  }
  std::size_t violations = 0, probes = 0;
  for (const auto& s : scenarios) {
    for (double L : s.Ls) {
      const auto pair = cli::build_pair(s.config, L);
      const auto rank = eigencount::perturbation_rank(pair.op1, pair.op0);
      const auto energies = ssf::energy_grid(-0.5, 20.0, 60);
      const auto curve = ssf::ssf_curve_sampled(pair.op1, pair.op0, energies, ctx.threads);
      for (std::size_t k = 0; k < energies.size(); ++k) {
        const long xi = curve.values()[k];
        ++probes;
        if (xi < 0 || xi > static_cast<long>(rank)) ++violations;
        table.row({s.name, s.config.d, L, energies[k], static_cast<long long>(xi), rank});
      }
    }
  }
  CriterionResult r;
  r.passed = violations == 0;
  r.summary = std::to_string(probes) + " probes, " + std::to_string(violations) + " violations";
  return r;
}

CriterionResult kirsch_mechanism(const Context& ctx) {
  CsvWriter table(ctx.table(4), {"d", "L", "E", "xi", "running_max", "coincident"});
  std::vector<double> Ls;
  for (int L = 8; L <= 40; ++L) Ls.push_back(L);
  std::vector<std::vector<ssf::SupScanRow>> scans;
  for (int d : {2, 1}) {
    const ScenarioConfig c = kirsch_config(ctx.config, d);
    scans.push_back(ssf::sup_scan(kKirschEnergy, Ls,
                                  [&c](double L) { return cli::build_pair(c, L); }, ctx.threads));
    for (const auto& row : scans.back())
      table.row({d, row.L, kKirschEnergy, static_cast<long long>(row.value),
                 static_cast<long long>(row.running_max), row.coincident});
  }
  std::vector<long> distinct;
  for (const auto& row : scans[0])
    if (distinct.empty() || row.running_max > distinct.back()) distinct.push_back(row.running_max);
  const auto& d1 = scans[1];
  const auto at = [&](double L) {
    return std::find_if(d1.begin(), d1.end(), [L](const auto& row) { return row.L == L; })
        ->running_max;
  };
  const bool plateau = at(24.0) == at(40.0);
  CriterionResult r;
  r.passed = distinct.size() >= 3 && plateau;
  r.summary = "d=2 running max takes " + std::to_string(distinct.size()) +
              " values (final " + std::to_string(distinct.back()) + "); d=1 running max " +
              std::to_string(at(24.0)) + " at L=24, " + std::to_string(at(40.0)) + " at L=40";
  return r;
}

CriterionResult weighted_trend(const Context& ctx) {
  CsvWriter table(ctx.table(5), {"L", "h", "A", "gap_to_next"});
  ScenarioConfig c = ctx.config;
  c.h = kTrendMesh;
  const std::vector<double> Ls{12, 16, 24, 32, 48};
  const auto f = ssf::WeightFunction::constant(0.0, 4.0, 1.0);
  std::vector<double> A(Ls.size());
  parallel_for(Ls.size(), ctx.threads, [&](std::size_t i) {
    const auto pair = cli::build_pair(c, Ls[i]);
    A[i] = ssf::averaged_ssf(ssf::ssf_curve_exact(pair.op1, pair.op0, c.oracle_cap), f).value;
  });
  std::vector<double> gaps;
  for (std::size_t i = 0; i + 1 < A.size(); ++i) gaps.push_back(std::abs(A[i + 1] - A[i]));
  for (std::size_t i = 0; i < Ls.size(); ++i)
    table.row({Ls[i], c.h, A[i], i < gaps.size() ? gaps[i] : 0.0});
  const double half_first = 0.5 * gaps.front();
  CriterionResult r;
  r.passed = gaps[gaps.size() - 2] <= half_first && gaps.back() <= half_first;
  r.summary = fmt("first gap %.6g, last two gaps %.6g and %.6g", gaps.front(),
                  gaps[gaps.size() - 2], gaps.back());
  return r;
}

CriterionResult delta_identity(const Context& ctx) {
  CsvWriter table(ctx.table(6), {"E", "delta", "delta_average", "averaged_over_delta", "diff"});
  ScenarioConfig c = ctx.config;
  c.h = kTrendMesh;
  const auto pair = cli::build_pair(c, 16.0);
  const auto curve = ssf::ssf_curve_exact(pair.op1, pair.op0, c.oracle_cap);
  CounterStream rng(StreamId{ctx.seed(), 6, 0, 0});
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double E = -1.0 + 9.0 * rng.uniform();
    const double delta = 1e-3 + 3.0 * rng.uniform();
    const double direct = ssf::delta_average(curve, E, delta);
    const double via =
        ssf::averaged_ssf(curve, ssf::WeightFunction::constant(E, E + delta, 1.0)).value / delta;
    worst = std::max(worst, std::abs(direct - via));
    table.row({E, delta, direct, via, direct - via});
  }
  CriterionResult r;
  r.passed = worst <= 1e-12;
  r.summary = fmt("max |difference| %.3g over 100 pairs", worst);
  return r;
}

CriterionResult mc_trace_agreement(const Context& ctx) {
  CsvWriter table(ctx.table(7), {"t", "L", "h", "m", "n_samples", "mc_mean", "mc_std_error",
                                 "oracle", "abs_diff", "refinement_bias", "trunc_tail_bound"});
  ScenarioConfig c = ctx.config;
  c.h = kTrendMesh;
  const double L = 16.0;
  const auto pair = cli::build_pair(c, L);
  const auto s0 = eigencount::dense_spectrum(pair.op0, c.oracle_cap);
  const auto s1 = eigencount::dense_spectrum(pair.op1, c.oracle_cap);
  const auto U = cli::make_background(c);
  const auto V = cli::make_perturbation(c);
  bool ok = true;
  std::string summary;
  for (double t : {0.5, 1.0}) {
    const double oracle = bridge::trace_laplace_from_spectra(s1, s0, t).xi_tilde;
    bridge::McParams params;
    params.n_samples = 100000;
    params.seed = ctx.seed();
    params.lattice_h = c.h;
    params.threads = ctx.threads;
    params.m = 128;
    const auto coarse = bridge::finite_volume_laplace_mc(U, V, L, c.x0, c.x0, t, params);
    params.m = 256;
    const auto fine = bridge::finite_volume_laplace_mc(U, V, L, c.x0, c.x0, t, params);
    // Trapezoid and slice-monitoring bias ~ 1/m: bias(m) ~ 2 (est(m) - est(2m)).
    const double bias = 2.0 * std::abs(coarse.estimate.mean - fine.estimate.mean);
    const double sigma = coarse.estimate.std_error;
    const double diff = std::abs(coarse.estimate.mean - oracle);
    ok = ok && diff <= 3.0 * sigma && bias < sigma;
    for (const auto* e : {&coarse.estimate, &fine.estimate})
      table.row({t, L, c.h, e->m_slices, e->n_samples, e->mean, e->std_error, oracle,
                 std::abs(e->mean - oracle), bias, e->trunc_tail_bound});
    summary += fmt("t=%g: |mc-oracle|=%.3g vs 3sigma=%.3g", t, diff, 3.0 * sigma) +
               fmt(", bias %.3g; ", bias);
  }
  CriterionResult r;
  r.passed = ok;
  r.summary = summary.substr(0, summary.size() - 2);
  return r;
}

CriterionResult trace_curve_identity(const Context& ctx) {
  CsvWriter table(ctx.table(8), {"instance", "d", "dimension", "t", "trace", "jump_sum", "diff"});
  CounterStream rng(StreamId{ctx.seed(), 8, 0, 0});
  double worst = 0.0;
  for (int instance = 0; instance < 10; ++instance) {
    const int d = instance % 2 == 0 ? 1 : 2;
    const auto inst = random_instance(rng, d, 200);
    const double t = 0.2 + 2.8 * rng.uniform();
    const auto curve = ssf::ssf_curve_exact(inst.op1, inst.op0, ctx.config.oracle_cap);
    const double trace =
        bridge::trace_laplace_oracle(inst.op1, inst.op0, t, ctx.config.oracle_cap).xi_tilde;
    const double jumps = ssf::laplace_transform(curve, t);
    const double rel = std::abs(trace - jumps) / std::max(1.0, std::abs(trace));
    worst = std::max(worst, rel);
    table.row({instance, d, inst.op1.dimension(), t, trace, jumps, trace - jumps});
  }
  CriterionResult r;
  r.passed = worst <= 1e-10;
  r.summary = fmt("max scaled difference %.3g over 10 instances", worst);
  return r;
}

CriterionResult bessel_bridge_tail(const Context& ctx) {
  CsvWriter table(ctx.table(9), {"r", "t", "m", "n_samples", "mc_mean", "mc_std_error", "series",
                                 "abs_diff", "discrete_max_mean", "discrete_max_std_error"});
  bool ok = true;
  std::string summary;
  for (double r : {0.5, 1.0, 1.5}) {
    bridge::BesselParams params;
    params.n_samples = 100000;
    params.m = 512;
    params.seed = ctx.seed();
    params.threads = ctx.threads;
    const auto est = bridge::bessel_tail(r, 1.0, 1, params);
    params.crossing_correction = false;
    const auto raw = bridge::bessel_tail(r, 1.0, 1, params);
    const double series = bridge::kolmogorov_tail(r, 1.0);
    const double diff = std::abs(est.mean - series);
    ok = ok && diff <= 3.0 * est.std_error;
    table.row({r, 1.0, params.m, est.n_samples, est.mean, est.std_error, series, diff, raw.mean,
               raw.std_error});
    summary += fmt("r=%g: %.3g sigma; ", r, diff / est.std_error);
  }
  CriterionResult res;
  res.passed = ok;
  res.summary = summary.substr(0, summary.size() - 2);
  return res;
}

CriterionResult shift_uniformity(const Context& ctx) {
  CsvWriter table(ctx.table(10), {"L", "D", "shift", "xi_tilde", "std_error", "diff_to_infinite",
                                  "paired_std_error"});
  const ScenarioConfig& c = ctx.config;
  const auto U = cli::make_background(c);
  const auto V = cli::make_perturbation(c);
  const auto D = cli::make_distance(c);
  const std::vector<double> Ls{16, 24, 32, 48};
  std::vector<bridge::VolumeFrame> frames{bridge::VolumeFrame{}};
  std::vector<std::size_t> first(Ls.size()), count(Ls.size());
  std::vector<double> D_values(Ls.size());
  for (std::size_t i = 0; i < Ls.size(); ++i) {
    const auto set = lattice::allowed_shifts(c.x0, Ls[i], c.U.period, c.V.ell, D);
    first[i] = frames.size();
    count[i] = set.size();
    D_values[i] = set.D_of_L;
    for (const auto& s : set.shifts) frames.push_back({Ls[i], s});
  }
  bridge::McParams params;
  params.n_samples = 100000;
  params.seed = ctx.seed();
  params.threads = ctx.threads;
  const auto results = bridge::laplace_mc_frames(U, V, c.x0, 1.0, frames, params);
  const double infinite = results[0].estimate.mean;

  std::vector<double> dev(Ls.size()), dev_sigma(Ls.size()), spread(Ls.size());
  for (std::size_t i = 0; i < Ls.size(); ++i) {
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t f = first[i]; f < first[i] + count[i]; ++f) {
      const auto& r = results[f];
      const double diff = r.estimate.mean - infinite;
      if (std::abs(diff) >= dev[i]) {
        dev[i] = std::abs(diff);
        dev_sigma[i] = r.paired_std_error;
      }
      lo = std::min(lo, r.estimate.mean);
      hi = std::max(hi, r.estimate.mean);
      table.row({Ls[i], D_values[i], CsvWriter::join(frames[f].shift), r.estimate.mean,
                 r.estimate.std_error, diff, r.paired_std_error});
    }
    spread[i] = hi - lo;
  }
  table.row({INFINITY, 0.0, CsvWriter::join(c.x0), infinite, results[0].estimate.std_error, 0.0,
             0.0});
  bool monotone = true;
  for (std::size_t i = 0; i + 1 < Ls.size(); ++i)
    monotone = monotone && dev[i + 1] <= dev[i] + 3.0 * std::hypot(dev_sigma[i], dev_sigma[i + 1]);
  const bool narrower = spread.back() <= spread.front();
  CriterionResult r;
  r.passed = monotone && narrower;
  std::ostringstream s;
  s << "sup deviations";
  for (double v : dev) s << ' ' << fmt("%.3g", v);
  s << "; spread " << fmt("%.3g at L=16, %.3g at L=48", spread.front(), spread.back());
  r.summary = s.str();
  return r;
}

using Check = CriterionResult (*)(const Context&);

const std::vector<std::pair<std::string, Check>>& registry() {
  static const std::vector<std::pair<std::string, Check>> checks{
      {"inertia-oracle", inertia_oracle},
      {"closed-form-counts", closed_form_counts},
      {"sign-and-rank", sign_and_rank},
      {"kirsch-mechanism", kirsch_mechanism},
      {"weighted-trend", weighted_trend},
      {"delta-identity", delta_identity},
      {"mc-trace-agreement", mc_trace_agreement},
      {"trace-curve-identity", trace_curve_identity},
      {"bessel-bridge-tail", bessel_bridge_tail},
      {"shift-uniformity", shift_uniformity},
  };
  return checks;
}

std::vector<int> selected(const SuiteOptions& options) {
  std::vector<int> ids;
  for (int id = 1; id <= 10; ++id)
    if (options.only.empty() ||
        std::find(options.only.begin(), options.only.end(), id) != options.only.end())
      ids.push_back(id);
  return ids;
}

std::vector<CriterionResult> run_checks(const Context& ctx, const std::vector<int>& ids,
                                        const ResultCallback& on_result) {
  std::vector<CriterionResult> results;
  for (int id : ids) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = registry()[static_cast<std::size_t>(id - 1)].second(ctx);
    } catch (const std::exception& e) {
      r.passed = false;
      r.summary = std::string("error: ") + e.what();
    }
    r.id = id;
    r.name = criterion_name(id);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  }
  return results;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::string criterion_name(int id) {
  if (id == 11) return "determinism";
  if (id < 1 || id > 10) return "unknown";
  return registry()[static_cast<std::size_t>(id - 1)].first;
}

bool SuiteReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

std::string format_result(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%s %2d %-22s", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str());
  char tail[32];
  std::snprintf(tail, sizeof tail, " (%.1f s)", r.seconds);
  return std::string(head) + " " + r.summary + tail;
}

SuiteReport run_suite(const SuiteOptions& options, const ResultCallback& on_result) {
  cli::validate(options.config);
  const std::filesystem::path out =
      options.out_dir.empty() ? std::filesystem::temp_directory_path() / "ssflab-validate"
                              : options.out_dir;
  std::filesystem::create_directories(out);
  const Context ctx{options.config, std::max(1, options.threads), out};
  const auto ids = selected(options);
  SuiteReport report;
  report.results = run_checks(ctx, ids, on_result);

  if (options.determinism) {
    const auto start = std::chrono::steady_clock::now();
    Context rerun = ctx;
    rerun.threads = ctx.threads == 1 ? 3 : 1;
    rerun.out_dir = out / "rerun";
    std::filesystem::create_directories(rerun.out_dir);
    run_checks(rerun, ids, {});
    std::size_t identical = 0;
    std::string differing;
    for (int id : ids) {
      const auto a = read_file(ctx.table(id));
      const auto b = read_file(rerun.table(id));
      if (!a.empty() && a == b)
        ++identical;
      else
        differing += " " + std::to_string(id);
    }
    CriterionResult r;
    r.id = 11;
    r.name = criterion_name(11);
    r.passed = identical == ids.size();
    r.summary = std::to_string(identical) + "/" + std::to_string(ids.size()) +
                " tables byte-identical with threads " + std::to_string(ctx.threads) + " vs " +
                std::to_string(rerun.threads) + (differing.empty() ? "" : "; differ:" + differing);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (on_result) on_result(r);
    report.results.push_back(std::move(r));
  }
  return report;
}

}  // namespace ssflab::validation
