// Thin bindings: scenarios cross the boundary as JSON config text and results
// come back as plain lists and dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ssflab/bridge_mc.hpp"
#include "ssflab/cli.hpp"
#include "ssflab/eigencount.hpp"
#include "ssflab/ssf.hpp"
#include "ssflab/validation.hpp"

namespace py = pybind11;
using namespace ssflab;

namespace {

std::vector<double> shift_or_x0(const cli::ScenarioConfig& c, const std::optional<std::vector<double>>& shift) {
  return shift ? *shift : c.x0;
}

py::dict spectra(const std::string& config_json, double L) {
  const auto c = cli::parse_config(config_json);
  const auto pair = cli::build_pair(c, L);
  py::dict out;
  out["H0"] = eigencount::dense_spectrum(pair.op0, c.oracle_cap);
  out["H1"] = eigencount::dense_spectrum(pair.op1, c.oracle_cap);
  return out;
}

py::dict count(const std::string& config_json, double L, double E) {
  const auto c = cli::parse_config(config_json);
  const auto pair = cli::build_pair(c, L);
  const auto rel = eigencount::relative_count(pair.op1, pair.op0, E);
  const auto n0 = eigencount::count_leq(pair.op0, E);
  const auto n1 = eigencount::count_leq(pair.op1, E);
  py::dict out;
  out["count_H0"] = n0.value;
  out["count_H1"] = n1.value;
  out["xi"] = rel.value;
  out["coincident"] = rel.coincident;
  out["dimension"] = pair.op0.dimension();
  return out;
}

py::dict ssf_curve(const std::string& config_json, double L,
                   const std::optional<std::vector<double>>& shift) {
  const auto c = cli::parse_config(config_json);
  const auto pair = cli::build_pair(c, L, shift_or_x0(c, shift));
  const auto curve = ssf::ssf_curve_exact(pair.op1, pair.op0, c.oracle_cap);
  py::dict out;
  out["breakpoints"] = curve.energies();
  out["values"] = curve.values();
  return out;
}

py::dict estimate_dict(const bridge::LaplaceMcResult& r) {
  const auto& e = r.estimate;
  py::dict out;
  out["source"] = std::string(bridge::to_string(r.point.source));
  out["mean"] = e.mean;
  out["std_error"] = e.std_error;
  out["n_samples"] = e.n_samples;
  out["m"] = e.m_slices;
  out["t"] = e.t;
  out["L"] = e.L;
  out["shift"] = e.shift;
  out["trunc_tail_bound"] = e.trunc_tail_bound;
  out["paired_std_error"] = r.paired_std_error;
  return out;
}

py::dict laplace_mc(const std::string& config_json, double t, std::optional<double> L,
                    const std::optional<std::vector<double>>& shift, int threads) {
  const auto c = cli::parse_config(config_json);
  bridge::McParams p;
  p.n_samples = c.mc.n_samples;
  p.m = c.mc.m;
  p.seed = c.mc.seed;
  p.trunc_radius = c.mc.trunc_radius;
  p.lattice_h = c.h;
  p.threads = threads;
  const auto U = cli::make_background(c);
  const auto V = cli::make_perturbation(c);
  const auto offset = shift_or_x0(c, shift);
  bridge::LaplaceMcResult r;
  {
    py::gil_scoped_release release;
    r = L ? bridge::finite_volume_laplace_mc(U, V, *L, offset, c.x0, t, p)
          : bridge::infinite_volume_laplace_mc(U, V, c.x0, t, p);
  }
  return estimate_dict(r);
}

double trace_laplace(const std::string& config_json, double L, double t) {
  const auto c = cli::parse_config(config_json);
  const auto pair = cli::build_pair(c, L);
  return bridge::trace_laplace_oracle(pair.op1, pair.op0, t, c.oracle_cap).xi_tilde;
}

int run(const std::string& command, const std::string& config_json,
        const std::filesystem::path& out_dir, int threads) {
  cli::RunOptions o;
  o.out_dir = out_dir;
  o.threads = threads;
  o.config_source = "<python>";
  const auto c = cli::parse_config(config_json);
  py::gil_scoped_release release;
  return cli::run_subcommand(command, c, o);
}

py::list validate(const std::string& config_json, const std::filesystem::path& out_dir,
                  std::vector<int> only, int threads) {
  validation::SuiteOptions o;
  o.config = cli::parse_config(config_json);
  o.out_dir = out_dir;
  o.only = std::move(only);
  o.threads = threads;
  o.determinism = o.only.empty();
  validation::SuiteReport report;
  {
    py::gil_scoped_release release;
    report = validation::run_suite(o);
  }
  py::list out;
  for (const auto& r : report.results) {
    py::dict row;
    row["id"] = r.id;
    row["name"] = r.name;
    row["passed"] = r.passed;
    row["summary"] = r.summary;
    out.append(row);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_ssflab, m) {
  // Translators are tried newest first, so the base class goes in first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<OracleCapExceeded>(m, "OracleCapExceeded", PyExc_RuntimeError);
  py::register_exception<cli::ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.attr("__version__") = SSFLAB_VERSION;
  m.def("default_config", [] { return cli::serialize_config({}); });
  m.def("normalize_config", [](const std::string& s) { return cli::serialize_config(cli::parse_config(s)); });
  m.def("config_hash", [](const std::string& s) { return cli::config_hash(cli::parse_config(s)); });
  m.def("spectra", &spectra, py::arg("config"), py::arg("L"));
  m.def("count", &count, py::arg("config"), py::arg("L"), py::arg("E"));
  m.def("ssf_curve", &ssf_curve, py::arg("config"), py::arg("L"), py::arg("shift") = py::none());
  m.def("laplace_mc", &laplace_mc, py::arg("config"), py::arg("t"), py::arg("L") = py::none(),
        py::arg("shift") = py::none(), py::arg("threads") = 1);
  m.def("trace_laplace", &trace_laplace, py::arg("config"), py::arg("L"), py::arg("t"));
  m.def("kolmogorov_tail", &bridge::kolmogorov_tail, py::arg("r"), py::arg("t"));
  m.def("run", &run, py::arg("command"), py::arg("config"), py::arg("out_dir"),
        py::arg("threads") = 1);
  m.def("validate", &validate, py::arg("config"), py::arg("out_dir"),
        py::arg("only") = std::vector<int>{}, py::arg("threads") = 1);
  m.def("subcommands", &cli::subcommand_names);
}
