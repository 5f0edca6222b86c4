#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>

#include <Eigen/Core>

#include "json.hpp"
#include "ssflab/bridge_mc.hpp"
#include "ssflab/cli.hpp"
#include "ssflab/eigencount.hpp"
#include "ssflab/laplace_convergence.hpp"
#include "ssflab/rng.hpp"
#include "ssflab/validation.hpp"

namespace ssflab::cli {

namespace {

constexpr double kLaplaceTol = 1e-2;
constexpr double kWeightedTol = 5e-2;
constexpr int kCesaroEnergies = 20;

// Collects what a run produced for the manifest.
struct Run {
  const ScenarioConfig& config;
  const RunOptions& options;
  std::vector<std::string> files;
  std::vector<std::string> notes;
  bool partial = false;

  CsvWriter table(const std::string& name, std::vector<std::string> header) {
    files.push_back(name);
    return CsvWriter(options.out_dir / name, std::move(header));
  }
  void skip(const std::string& what) {
    partial = true;
    notes.push_back(what);
  }
};

bool fits_oracle(const ScenarioConfig& c, double L) {
  return lattice::build_grid(c.d, L, c.h).size() <= c.oracle_cap;
}

// Exact curve when the dense oracle fits, otherwise sampled on the weight
// interval widened by the largest delta.
ssf::SsfCurve curve_for(const ScenarioConfig& c, const ssf::OperatorPair& pair, double L,
                        int threads) {
  if (fits_oracle(c, L)) return ssf::ssf_curve_exact(pair.op1, pair.op0, c.oracle_cap);
  const double widen = *std::max_element(c.delta.begin(), c.delta.end());
  const auto probes = ssf::energy_grid(c.I[0], c.I[1] + widen, c.probe_points);
  return ssf::ssf_curve_sampled(pair.op1, pair.op0, probes, threads);
}

const char* mode_name(const ssf::SsfCurve& curve) {
  return curve.mode() == ssf::CurveMode::Exact ? "exact" : "sampled";
}

bridge::McParams mc_params(const ScenarioConfig& c, int threads) {
  bridge::McParams p;
  p.n_samples = c.mc.n_samples;
  p.m = c.mc.m;
  p.seed = c.mc.seed;
  p.trunc_radius = c.mc.trunc_radius;
  p.lattice_h = c.h;
  p.threads = threads;
  return p;
}

int cmd_spectrum(Run& run) {
  const auto& c = run.config;
  auto table = run.table("spectrum.csv", {"L", "operator", "index", "eigenvalue"});
  for (double L : c.L) {
    if (!fits_oracle(c, L)) {
      run.skip("spectrum: L=" + CsvWriter::format(L) + " exceeds the oracle cap");
      continue;
    }
    const auto pair = build_pair(c, L);
    for (const auto& [name, op] : {std::pair{"H0", &pair.op0}, std::pair{"H1", &pair.op1}}) {
      const auto spectrum = eigencount::dense_spectrum(*op, c.oracle_cap);
      for (std::size_t k = 0; k < spectrum.size(); ++k)
        table.row({L, std::string(name), k, spectrum[k]});
    }
  }
  return 0;
}

int cmd_count(Run& run) {
  const auto& c = run.config;
  auto table = run.table("count.csv", {"L", "E", "count_H0", "count_H1", "xi", "coincident"});
  const auto energies = ssf::energy_grid(c.I[0], c.I[1], c.probe_points);
  for (double L : c.L) {
    const auto pair = build_pair(c, L);
    for (double E : energies) {
      const auto n0 = eigencount::count_leq(pair.op0, E);
      const auto n1 = eigencount::count_leq(pair.op1, E);
      table.row({L, E, n0.value, n1.value,
                 static_cast<long long>(n0.value) - static_cast<long long>(n1.value),
                 n0.coincident || n1.coincident});
    }
  }
  return 0;
}

int cmd_ssf(Run& run) {
  const auto& c = run.config;
  auto table = run.table("ssf.csv", {"L", "mode", "E", "xi"});
  for (double L : c.L) {
    const auto pair = build_pair(c, L);
    const auto curve = curve_for(c, pair, L, run.options.threads);
    for (std::size_t k = 0; k < curve.energies().size(); ++k)
      table.row({L, std::string(mode_name(curve)), curve.energies()[k],
                 static_cast<long long>(curve.values()[k])});
  }
  return 0;
}

int cmd_sweep(Run& run) {
  const auto& c = run.config;
  auto table = run.table("sweep_L.csv", {"L", "h", "mode", "A", "error_bound", "gap_to_previous"});
  const auto f = make_weight(c);
  double previous = NAN;
  for (double L : c.L) {
    const auto pair = build_pair(c, L);
    const auto curve = curve_for(c, pair, L, run.options.threads);
    const auto A = ssf::averaged_ssf(curve, f);
    table.row({L, c.h, std::string(mode_name(curve)), A.value, A.error_bound,
               std::isnan(previous) ? 0.0 : std::abs(A.value - previous)});
    previous = A.value;
  }
  return 0;
}

int cmd_delta(Run& run) {
  const auto& c = run.config;
  auto table = run.table("delta_avg.csv", {"L", "E", "delta", "delta_average", "mode"});
  const auto energies = ssf::energy_grid(c.I[0], c.I[1], 41);
  for (double L : c.L) {
    const auto pair = build_pair(c, L);
    const auto curve = curve_for(c, pair, L, run.options.threads);
    for (double delta : c.delta)
      for (double E : energies)
        table.row({L, E, delta, ssf::delta_average(curve, E, delta),
                   std::string(mode_name(curve))});
  }
  return 0;
}

int cmd_kirsch(Run& run) {
  const auto& c = run.config;
  auto table = run.table("kirsch.csv", {"L", "E", "xi", "running_max", "coincident", "dimension"});
  const auto rows = ssf::sup_scan(
      c.kirsch_E, c.L, [&c](double L) { return build_pair(c, L); }, run.options.threads);
  for (const auto& r : rows)
    table.row({r.L, c.kirsch_E, static_cast<long long>(r.value),
               static_cast<long long>(r.running_max), r.coincident, r.dimension});
  if (c.d == 1) run.notes.push_back("kirsch: d=1 scenario, a bounded running max is expected");
  return 0;
}

int cmd_cesaro(Run& run) {
  const auto& c = run.config;
  auto table = run.table("cesaro.csv", {"E", "K", "L", "xi", "running_mean", "reference",
                                        "flagged"});
  CounterStream rng(StreamId{c.mc.seed, 0, 0, 0x63657361u});
  std::vector<double> energies(kCesaroEnergies);
  for (double& E : energies) E = c.I[0] + (c.I[1] - c.I[0]) * rng.uniform();
  std::vector<ssf::OperatorPair> pairs;
  for (double L : c.L) pairs.push_back(build_pair(c, L));
  // Reference: delta-average of the largest-L curve over the narrowest delta.
  const auto reference_curve = curve_for(c, pairs.back(), c.L.back(), run.options.threads);
  const double delta = *std::min_element(c.delta.begin(), c.delta.end());
  std::size_t flagged = 0;
  for (double E : energies) {
    std::vector<double> values;
    for (const auto& pair : pairs)
      values.push_back(static_cast<double>(eigencount::relative_count(pair.op1, pair.op0, E).value));
    const auto means = ssf::cesaro_mean(values);
    const double reference = ssf::delta_average(reference_curve, E, delta);
    // Pointwise blow-ups at exceptional energies are flagged, not failed.
    const bool flag = means.back() > std::abs(reference) + 1.0;
    flagged += flag;
    for (std::size_t k = 0; k < values.size(); ++k)
      table.row({E, k + 1, c.L[k], values[k], means[k], reference, flag});
  }
  run.notes.push_back("cesaro: " + std::to_string(flagged) + " of " +
                      std::to_string(energies.size()) + " energies flagged");
  return 0;
}

int cmd_shift_uniformity(Run& run) {
  const auto& c = run.config;
  const auto U = make_background(c);
  const auto V = make_perturbation(c);
  const auto D = make_distance(c);
  const auto f = make_weight(c);

  std::vector<lattice::ShiftSet> sets;
  for (double L : c.L) sets.push_back(lattice::allowed_shifts(c.x0, L, c.U.period, c.V.ell, D));

  // Counting space: weighted averages per shift against the largest-L value at x0.
  convergence::IndexedFamily weighted;
  weighted.n_values = c.L;
  auto counting = run.table("shift_uniformity_counting.csv",
                            {"L", "D", "shift", "A", "error_bound", "mode"});
  for (std::size_t i = 0; i < c.L.size(); ++i) {
    weighted.values.emplace_back();
    for (const auto& s : sets[i].shifts) {
      const auto pair = build_pair(c, c.L[i], s);
      const auto curve = curve_for(c, pair, c.L[i], run.options.threads);
      const auto A = ssf::averaged_ssf(curve, f);
      weighted.values.back().push_back(A.value);
      counting.row({c.L[i], sets[i].D_of_L, CsvWriter::join(s), A.value, A.error_bound,
                    std::string(mode_name(curve))});
    }
    if (sets[i].empty()) {
      run.skip("shift-uniformity: no allowed shift at L=" + CsvWriter::format(c.L[i]));
      return 0;
    }
  }
  const auto reference_pair = build_pair(c, c.L.back());
  const double reference_weighted =
      ssf::averaged_ssf(curve_for(c, reference_pair, c.L.back(), run.options.threads), f).value;

  // Laplace space: all frames share paths; infinite volume is the reference.
  std::vector<bridge::VolumeFrame> frames{bridge::VolumeFrame{}};
  for (std::size_t i = 0; i < c.L.size(); ++i)
    for (const auto& s : sets[i].shifts) frames.push_back({c.L[i], s});
  auto laplace = run.table("shift_uniformity_laplace.csv",
                           {"t", "L", "shift", "n_samples", "m", "mean", "std_error",
                            "trunc_tail_bound", "seed", "diff_to_infinite", "paired_std_error"});
  convergence::ConsistencyInput input;
  input.t_grid = c.t;
  input.weighted = weighted;
  input.reference_weighted = reference_weighted;
  input.laplace_tol = kLaplaceTol;
  input.weighted_tol = kWeightedTol;
  auto params = mc_params(c, run.options.threads);
  params.lattice_h = 0.0;
  for (double t : c.t) {
    const auto results = bridge::laplace_mc_frames(U, V, c.x0, t, frames, params);
    const double infinite = results[0].estimate.mean;
    convergence::IndexedFamily family;
    family.n_values = c.L;
    std::size_t f_index = 1;
    for (std::size_t i = 0; i < c.L.size(); ++i) {
      family.values.emplace_back();
      for (std::size_t k = 0; k < sets[i].size(); ++k, ++f_index) {
        const auto& e = results[f_index].estimate;
        family.values.back().push_back(e.mean);
        laplace.row({t, e.L, CsvWriter::join(e.shift), e.n_samples, e.m_slices, e.mean,
                     e.std_error, e.trunc_tail_bound, static_cast<long long>(e.seed),
                     e.mean - infinite, results[f_index].paired_std_error});
      }
    }
    const auto& e = results[0].estimate;
    laplace.row({t, e.L, CsvWriter::join(e.shift), e.n_samples, e.m_slices, e.mean, e.std_error,
                 e.trunc_tail_bound, static_cast<long long>(e.seed), 0.0, 0.0});
    if (e.tail_warning) run.notes.push_back("shift-uniformity: truncation tail above tolerance");
    input.laplace.push_back(std::move(family));
    input.reference_laplace.push_back(infinite);
  }

  const auto report = convergence::laplace_vs_weighted_consistency(input);
  auto profile = run.table("shift_uniformity_profile.csv",
                           {"space", "t", "L", "sup_deviation", "worst_shift"});
  for (std::size_t k = 0; k < c.t.size(); ++k)
    for (std::size_t i = 0; i < c.L.size(); ++i) {
      const auto& row = report.laplace_profiles[k][i];
      profile.row({std::string("laplace"), c.t[k], row.n, row.sup_deviation,
                   CsvWriter::join(sets[i].shifts[row.worst_choice])});
    }
  for (std::size_t i = 0; i < c.L.size(); ++i) {
    const auto& row = report.weighted_profile[i];
    profile.row({std::string("weighted"), 0.0, row.n, row.sup_deviation,
                 CsvWriter::join(sets[i].shifts[row.worst_choice])});
  }
  auto verdict = run.table("consistency.csv", {"laplace_tol", "weighted_tol", "laplace_converged",
                                               "weighted_converged", "verdict", "note"});
  verdict.row({kLaplaceTol, kWeightedTol, report.laplace_converged, report.weighted_converged,
               std::string(convergence::to_string(report.verdict)), report.note});
  return 0;
}

int cmd_mc_laplace(Run& run) {
  const auto& c = run.config;
  const auto U = make_background(c);
  const auto V = make_perturbation(c);
  auto table = run.table("mc_laplace.csv",
                         {"source", "t", "L", "shift", "n_samples", "m", "mean", "std_error",
                          "trunc_tail_bound", "seed", "oracle"});
  std::vector<bridge::VolumeFrame> frames{bridge::VolumeFrame{}};
  for (double L : c.L) frames.push_back({L, c.x0});
  std::map<double, std::pair<std::vector<double>, std::vector<double>>> spectra;
  for (double L : c.L)
    if (fits_oracle(c, L)) {
      const auto pair = build_pair(c, L);
      spectra[L] = {eigencount::dense_spectrum(pair.op1, c.oracle_cap),
                    eigencount::dense_spectrum(pair.op0, c.oracle_cap)};
    } else {
      run.notes.push_back("mc-laplace: no trace oracle at L=" + CsvWriter::format(L));
    }
  for (double t : c.t) {
    const auto results = bridge::laplace_mc_frames(U, V, c.x0, t, frames, mc_params(c, run.options.threads));
    for (const auto& r : results) {
      const auto& e = r.estimate;
      double oracle = NAN;
      if (const auto it = spectra.find(e.L); it != spectra.end())
        oracle = bridge::trace_laplace_from_spectra(it->second.first, it->second.second, t).xi_tilde;
      table.row({std::string(bridge::to_string(r.point.source)), t, e.L, CsvWriter::join(e.shift),
                 e.n_samples, e.m_slices, e.mean, e.std_error, e.trunc_tail_bound,
                 static_cast<long long>(e.seed), oracle});
      if (e.tail_warning)
        run.notes.push_back("mc-laplace: truncation tail above tolerance at t=" +
                            CsvWriter::format(t));
    }
  }
  return 0;
}

int cmd_validate(Run& run) {
  validation::SuiteOptions options;
  options.config = run.config;
  options.threads = run.options.threads;
  options.out_dir = run.options.out_dir;
  const auto report = validation::run_suite(options, [](const validation::CriterionResult& r) {
    std::cout << validation::format_result(r) << std::endl;
  });
  auto table = run.table("validation.csv", {"criterion", "name", "passed"});
  for (const auto& r : report.results) {
    table.row({r.id, r.name, r.passed});
    if (r.id <= 10) run.files.push_back(
        "criterion_" + std::string(r.id < 10 ? "0" : "") + std::to_string(r.id) + "_" + r.name +
        ".csv");
  }
  return report.passed() ? 0 : 1;
}

using Command = int (*)(Run&);

const std::vector<std::pair<std::string, Command>>& commands() {
  static const std::vector<std::pair<std::string, Command>> table{
      {"spectrum", cmd_spectrum},
      {"count", cmd_count},
      {"ssf", cmd_ssf},
      {"sweep-L", cmd_sweep},
      {"delta-avg", cmd_delta},
      {"kirsch", cmd_kirsch},
      {"cesaro", cmd_cesaro},
      {"shift-uniformity", cmd_shift_uniformity},
      {"mc-laplace", cmd_mc_laplace},
      {"validate", cmd_validate},
  };
  return table;
}

void write_manifest(const Run& run, const std::string& name, int status) {
  nlohmann::json m;
  m["command"] = name;
  m["status"] = status;
  m["config_hash"] = config_hash(run.config);
  m["config_source"] = run.options.config_source;
  m["seed"] = run.config.mc.seed;
  m["versions"] = {{"ssflab", SSFLAB_VERSION},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                 std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"compiler", __VERSION__}};
  m["files"] = run.files;
  m["partial"] = run.partial;
  m["notes"] = run.notes;
  m["config"] = nlohmann::json::parse(serialize_config(run.config));
  std::ofstream out(run.options.out_dir / "manifest.json", std::ios::binary);
  out << m.dump(2) << '\n';
  if (!out) throw Error("cannot write manifest.json");
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : commands()) out.push_back(name);
    return out;
  }();
  return names;
}

int run_subcommand(const std::string& name, const ScenarioConfig& config,
                   const RunOptions& options) {
  const auto it = std::find_if(commands().begin(), commands().end(),
                               [&](const auto& entry) { return entry.first == name; });
  if (it == commands().end()) throw InvalidArgument("unknown subcommand: " + name);
  validate(config);
  std::filesystem::create_directories(options.out_dir);
  Run run{config, options, {}, {}, false};
  int status = 0;
  try {
    status = it->second(run);
  } catch (...) {
    run.partial = true;
    write_manifest(run, name, 1);
    throw;
  }
  write_manifest(run, name, status);
  return status;
}

}  // namespace ssflab::cli
