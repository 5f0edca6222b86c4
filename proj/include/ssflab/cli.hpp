#pragma once

// Scenario configuration, result tables and the subcommands of the ssflab
// command-line tool.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ssflab/bridge_mc.hpp"
#include "ssflab/error.hpp"
#include "ssflab/lattice.hpp"
#include "ssflab/ssf.hpp"

namespace ssflab::cli {

/// Malformed or inconsistent configuration; `field` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct BackgroundSpec {
  /// "zero" | "constant" | "cosine-series".
  std::string kind = "cosine-series";
  /// Constant value (kind "constant").
  double value = 0.0;
  /// amplitude * prod_j sum_k coefficients[k] cos(2 pi k x_j / period[j]).
  double amplitude = 0.5;
  std::vector<double> period{1.0};
  std::vector<double> coefficients{1.0, 1.0};
  bool operator==(const BackgroundSpec&) const = default;
};

struct PerturbationSpec {
  /// "box-indicator" | "bump".
  std::string kind = "box-indicator";
  double amplitude = 2.0;
  double ell = 1.0;
  /// +1 or -1, multiplies the amplitude.
  int sign = 1;
  bool operator==(const PerturbationSpec&) const = default;
};

struct DistanceSpec {
  /// "log-half": (1/2) log(L - ell + 1); "linear-fraction": fraction (L - ell) / 2.
  std::string kind = "log-half";
  double fraction = 0.5;
  bool operator==(const DistanceSpec&) const = default;
};

struct WeightSpec {
  /// "constant" | "polynomial" | "exponential".
  std::string kind = "constant";
  double value = 1.0;
  std::vector<double> coefficients;
  double scale = 1.0;
  double rate = 0.0;
  bool operator==(const WeightSpec&) const = default;
};

struct McSpec {
  std::size_t n_samples = 100000;
  int m = 0;
  std::uint64_t seed = 20100917;
  double trunc_radius = 0.0;
  bool operator==(const McSpec&) const = default;
};

struct ScenarioConfig {
  int d = 1;
  double h = 0.125;
  BackgroundSpec U;
  PerturbationSpec V;
  std::vector<double> x0{0.0};
  DistanceSpec D;
  std::vector<double> L{12.0, 16.0, 24.0, 32.0, 48.0};
  std::array<double, 2> I{0.0, 4.0};
  WeightSpec g;
  std::vector<double> delta{0.05, 0.1, 0.25, 0.5, 1.0};
  std::vector<double> t{0.25, 0.5, 1.0, 2.0};
  McSpec mc;
  std::size_t oracle_cap = eigencount::kDefaultOracleCap;
  /// Probe energies per curve in sampled mode.
  std::size_t probe_points = 400;
  /// Energy for the sup-scan.
  double kirsch_E = 3.5;
  bool operator==(const ScenarioConfig&) const = default;
};

/// Checks every module precondition that can be checked without running.
void validate(const ScenarioConfig& config);

ScenarioConfig parse_config(std::string_view json_text);
ScenarioConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ScenarioConfig& config);
/// FNV-1a (64 bit) of the serialized config, as 16 hex digits.
std::string config_hash(const ScenarioConfig& config);

lattice::PotentialField make_background(const ScenarioConfig& config);
lattice::PotentialField make_perturbation(const ScenarioConfig& config);
lattice::SecurityDistance make_distance(const ScenarioConfig& config);
ssf::WeightFunction make_weight(const ScenarioConfig& config);
/// H_0 = -Delta/2 + U and H_1 = H_0 + V(. - shift) on the box of size L.
ssf::OperatorPair build_pair(const ScenarioConfig& config, double L,
                             std::span<const double> shift);
ssf::OperatorPair build_pair(const ScenarioConfig& config, double L);

/// One CSV table; doubles are written with 17 significant digits.
class CsvWriter {
 public:
  using Cell = std::variant<double, long long, std::size_t, int, bool, std::string>;

  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);
  void row(const std::vector<Cell>& cells);
  const std::filesystem::path& path() const { return path_; }

  static std::string format(const Cell& cell);
  /// Vector of doubles joined with ';' (for shifts and points).
  static std::string join(std::span<const double> values);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

struct RunOptions {
  std::filesystem::path out_dir = ".";
  int threads = 1;
  std::string config_source;
};

/// Runs one subcommand, writes its CSV files plus manifest.json, and returns
/// the process exit status (0 ok, 1 validation failure).
int run_subcommand(const std::string& name, const ScenarioConfig& config,
                   const RunOptions& options);

const std::vector<std::string>& subcommand_names();

}  // namespace ssflab::cli
