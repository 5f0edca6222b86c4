#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "json.hpp"

#include "ssflab/cli.hpp"
#include "ssflab/error.hpp"

namespace ssflab::cli {

using nlohmann::json;

namespace {

// Reads obj[key] into out when present; unknown keys are rejected by the
// caller so typos never pass silently.
template <class T>
void read(const json& obj, const char* key, T& out, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->template get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(path + key, std::string("wrong type (") + e.what() + ")");
  }
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ConfigError(path + key, "unknown key");
}

const json& child(const json& obj, const char* key) {
  static const json empty = json::object();
  const auto it = obj.find(key);
  return it == obj.end() ? empty : *it;
}

void require(bool ok, const char* field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

bool finite_all(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

void validate(const ScenarioConfig& c) {
  require(c.d >= 1 && c.d <= 3, "d", "must be 1, 2 or 3");
  require(c.h > 0.0 && std::isfinite(c.h), "h", "must be positive");
  const auto du = static_cast<std::size_t>(c.d);

  require(c.U.kind == "zero" || c.U.kind == "constant" || c.U.kind == "cosine-series", "U.kind",
          "must be zero, constant or cosine-series");
  require(std::isfinite(c.U.value) && std::isfinite(c.U.amplitude), "U", "non-finite value");
  require(c.U.period.size() == du, "U.period", "needs one entry per axis");
  for (double p : c.U.period) require(p > 0.0 && std::isfinite(p), "U.period", "must be positive");
  if (c.U.kind == "cosine-series")
    require(!c.U.coefficients.empty() && finite_all(c.U.coefficients), "U.coefficients",
            "needs at least one finite coefficient");

  require(c.V.kind == "box-indicator" || c.V.kind == "bump", "V.kind",
          "must be box-indicator or bump");
  require(std::isfinite(c.V.amplitude), "V.amplitude", "must be finite");
  require(c.V.ell > 0.0 && std::isfinite(c.V.ell), "V.ell", "must be positive");
  require(c.V.sign == 1 || c.V.sign == -1, "V.sign", "must be +1 or -1");

  require(c.x0.size() == du, "x0", "needs one entry per axis");
  for (std::size_t j = 0; j < du; ++j)
    require(c.x0[j] >= 0.0 && c.x0[j] < c.U.period[j], "x0",
            "must lie in the periodicity cell [0, p)");

  require(c.D.kind == "log-half" || c.D.kind == "linear-fraction", "D.kind",
          "must be log-half or linear-fraction");
  require(c.D.fraction >= 0.0 && c.D.fraction <= 1.0, "D.fraction", "must lie in [0, 1]");

  require(!c.L.empty(), "L", "needs at least one length");
  for (std::size_t i = 0; i < c.L.size(); ++i) {
    require(std::isfinite(c.L[i]) && c.L[i] > c.V.ell, "L", "every length must exceed V.ell");
    require(c.h < 0.5 * c.L[i], "L", "every length must exceed 2 h");
    require(i == 0 || c.L[i] > c.L[i - 1], "L", "lengths must be strictly increasing");
  }

  require(std::isfinite(c.I[0]) && std::isfinite(c.I[1]) && c.I[0] < c.I[1], "I",
          "needs finite lo < hi");
  require(c.g.kind == "constant" || c.g.kind == "polynomial" || c.g.kind == "exponential",
          "g.kind", "must be constant, polynomial or exponential");
  if (c.g.kind == "polynomial")
    require(!c.g.coefficients.empty() && finite_all(c.g.coefficients), "g.coefficients",
            "needs at least one finite coefficient");
  require(std::isfinite(c.g.value) && std::isfinite(c.g.scale) && std::isfinite(c.g.rate), "g",
          "non-finite parameter");

  require(!c.delta.empty(), "delta", "needs at least one width");
  for (double v : c.delta) require(v > 0.0 && std::isfinite(v), "delta", "must be positive");
  require(!c.t.empty(), "t", "needs at least one time");
  for (double v : c.t) require(v > 0.0 && std::isfinite(v), "t", "must be positive");

  require(c.mc.n_samples >= 2, "mc.n_samples", "must be at least 2");
  require(c.mc.m == 0 || c.mc.m >= 2, "mc.m", "must be 0 (auto) or at least 2");
  require(c.mc.trunc_radius >= 0.0 && std::isfinite(c.mc.trunc_radius), "mc.trunc_radius",
          "must be >= 0 (0 = auto)");
  require(c.oracle_cap >= 1, "oracle_cap", "must be positive");
  require(c.probe_points >= 2, "probe_points", "must be at least 2");
  require(std::isfinite(c.kirsch_E), "kirsch_E", "must be finite");
}

ScenarioConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // The parser message carries the line and column.
    throw ConfigError("", std::string("parse error: ") + e.what());
  }
  reject_unknown(root,
                 {"d", "h", "U", "V", "x0", "D", "L", "I", "g", "delta", "t", "mc", "oracle_cap",
                  "probe_points", "kirsch_E"},
                 "");
  ScenarioConfig c;
  read(root, "d", c.d, "");
  read(root, "h", c.h, "");
  read(root, "x0", c.x0, "");
  read(root, "L", c.L, "");
  read(root, "I", c.I, "");
  read(root, "delta", c.delta, "");
  read(root, "t", c.t, "");
  read(root, "oracle_cap", c.oracle_cap, "");
  read(root, "probe_points", c.probe_points, "");
  read(root, "kirsch_E", c.kirsch_E, "");
  // Per-axis defaults follow d unless given explicitly.
  c.U.period.assign(static_cast<std::size_t>(std::max(c.d, 1)), 1.0);
  c.x0.resize(root.contains("x0") ? c.x0.size() : static_cast<std::size_t>(std::max(c.d, 1)),
              0.0);

  const json& u = child(root, "U");
  reject_unknown(u, {"kind", "value", "amplitude", "period", "coefficients"}, "U.");
  read(u, "kind", c.U.kind, "U.");
  read(u, "value", c.U.value, "U.");
  read(u, "amplitude", c.U.amplitude, "U.");
  read(u, "period", c.U.period, "U.");
  read(u, "coefficients", c.U.coefficients, "U.");

  const json& v = child(root, "V");
  reject_unknown(v, {"kind", "amplitude", "ell", "sign"}, "V.");
  read(v, "kind", c.V.kind, "V.");
  read(v, "amplitude", c.V.amplitude, "V.");
  read(v, "ell", c.V.ell, "V.");
  read(v, "sign", c.V.sign, "V.");

  const json& dist = child(root, "D");
  reject_unknown(dist, {"kind", "fraction"}, "D.");
  read(dist, "kind", c.D.kind, "D.");
  read(dist, "fraction", c.D.fraction, "D.");

  const json& g = child(root, "g");
  reject_unknown(g, {"kind", "value", "coefficients", "scale", "rate"}, "g.");
  read(g, "kind", c.g.kind, "g.");
  read(g, "value", c.g.value, "g.");
  read(g, "coefficients", c.g.coefficients, "g.");
  read(g, "scale", c.g.scale, "g.");
  read(g, "rate", c.g.rate, "g.");

  const json& mc = child(root, "mc");
  reject_unknown(mc, {"n_samples", "m", "seed", "trunc_radius"}, "mc.");
  read(mc, "n_samples", c.mc.n_samples, "mc.");
  read(mc, "m", c.mc.m, "mc.");
  read(mc, "seed", c.mc.seed, "mc.");
  read(mc, "trunc_radius", c.mc.trunc_radius, "mc.");

  validate(c);
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const ScenarioConfig& c) {
  json root;
  root["d"] = c.d;
  root["h"] = c.h;
  root["U"] = {{"kind", c.U.kind},
               {"value", c.U.value},
               {"amplitude", c.U.amplitude},
               {"period", c.U.period},
               {"coefficients", c.U.coefficients}};
  root["V"] = {{"kind", c.V.kind}, {"amplitude", c.V.amplitude}, {"ell", c.V.ell},
               {"sign", c.V.sign}};
  root["x0"] = c.x0;
  root["D"] = {{"kind", c.D.kind}, {"fraction", c.D.fraction}};
  root["L"] = c.L;
  root["I"] = c.I;
  root["g"] = {{"kind", c.g.kind},
               {"value", c.g.value},
               {"coefficients", c.g.coefficients},
               {"scale", c.g.scale},
               {"rate", c.g.rate}};
  root["delta"] = c.delta;
  root["t"] = c.t;
  root["mc"] = {{"n_samples", c.mc.n_samples},
                {"m", c.mc.m},
                {"seed", c.mc.seed},
                {"trunc_radius", c.mc.trunc_radius}};
  root["oracle_cap"] = c.oracle_cap;
  root["probe_points"] = c.probe_points;
  root["kirsch_E"] = c.kirsch_E;
  return root.dump(2);
}

std::string config_hash(const ScenarioConfig& config) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char ch : serialize_config(config)) {
    hash ^= ch;
    hash *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

lattice::PotentialField make_background(const ScenarioConfig& c) {
  if (c.U.kind == "zero") return lattice::zero_background(c.d);
  if (c.U.kind == "constant") return lattice::constant_background(c.d, c.U.value);
  return lattice::cosine_background(c.d, c.U.amplitude, c.U.coefficients, c.U.period);
}

lattice::PotentialField make_perturbation(const ScenarioConfig& c) {
  const double amplitude = c.V.sign * c.V.amplitude;
  if (c.V.kind == "bump") return lattice::smooth_bump(c.d, amplitude, c.V.ell);
  return lattice::box_indicator(c.d, amplitude, c.V.ell);
}

lattice::SecurityDistance make_distance(const ScenarioConfig& c) {
  if (c.D.kind == "linear-fraction")
    return lattice::SecurityDistance::linear_fraction(c.V.ell, c.D.fraction);
  return lattice::SecurityDistance::log_half(c.V.ell);
}

ssf::WeightFunction make_weight(const ScenarioConfig& c) {
  if (c.g.kind == "polynomial")
    return ssf::WeightFunction::polynomial(c.I[0], c.I[1], c.g.coefficients);
  if (c.g.kind == "exponential")
    return ssf::WeightFunction::exponential(c.I[0], c.I[1], c.g.scale, c.g.rate);
  return ssf::WeightFunction::constant(c.I[0], c.I[1], c.g.value);
}

ssf::OperatorPair build_pair(const ScenarioConfig& c, double L, std::span<const double> shift) {
  const auto grid = lattice::build_grid(c.d, L, c.h);
  const auto U = make_background(c);
  const auto V = lattice::shift_potential(make_perturbation(c), shift);
  return {lattice::assemble_operator(grid, &U, &V), lattice::assemble_operator(grid, &U, nullptr)};
}

ssf::OperatorPair build_pair(const ScenarioConfig& c, double L) {
  return build_pair(c, L, c.x0);
}

}  // namespace ssflab::cli
