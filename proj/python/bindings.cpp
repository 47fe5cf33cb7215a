// Python bindings. High-level calls take the same keys as configuration files.
#include "mellinsurv/adaptive.hpp"
#include "mellinsurv/config.hpp"
#include "mellinsurv/errors.hpp"
#include "mellinsurv/estimator.hpp"
#include "mellinsurv/mellin.hpp"
#include "mellinsurv/models.hpp"
#include "mellinsurv/risk.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>

namespace py = pybind11;
using namespace mellinsurv;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array& a)
{
  return {a.data(), a.data() + a.size()};
}

Array to_array(const std::vector<double>& v)
{
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::string as_config_value(const py::handle& v)
{
  if (py::isinstance<py::bool_>(v))
    return v.cast<bool>() ? "true" : "false";
  if (py::isinstance<py::float_>(v))
    return format_double(v.cast<double>());
  return py::str(v).cast<std::string>();
}

RunConfig from_kwargs(const py::kwargs& kw)
{
  RunConfig cfg;
  for (const auto& [key, value] : kw)
    set_config_key(cfg, key.cast<std::string>(), as_config_value(value));
  return cfg;
}

py::dict result_dict(const ExperimentSpec& spec, const MiseResult& r)
{
  py::dict d;
  d["target"] = spec.target_key();
  d["n"] = spec.n;
  d["mean_ise"] = r.mean_ise;
  d["se"] = r.se;
  d["mise_x100"] = 100.0 * r.mean_ise;
  d["mean_k_hat"] = r.mean_k_hat;
  d["excluded"] = r.excluded;
  d["failures"] = r.failures;
  d["ise"] = to_array(r.ise);
  d["k_hat"] = to_array(r.k_hat);
  d["csv_row"] = mise_csv_row(spec, r);
  return d;
}

Array simulate(const py::kwargs& kw)
{
  ExperimentSpec s = from_kwargs(kw).spec;
  s.validate();
  const ErrorModel error = error_by_key(s.error);
  Rng rng(s.seed);
  std::vector<double> x = s.dependence == Dependence::iid ? target_by_key(s.target).sample(rng, s.n)
                                                           : sample_ar1_gamma(s.n, s.ar1, rng);
  return to_array(contaminate(std::move(x), error, rng));
}

py::dict estimate(const Array& data, bool heuristic, const py::kwargs& kw)
{
  const ExperimentSpec s = from_kwargs(kw).spec;
  s.estimator.validate();
  s.penalty.validate();
  const ErrorModel error = error_by_key(s.error);
  const std::vector<double> y = to_vector(data);
  check_sample(y);
  EstimatorConfig ecfg = s.estimator;
  if (ecfg.x.x_max == 0.0)
    ecfg.x.x_max = 2.0 * *std::max_element(y.begin(), y.end());

  py::dict d;
  double k = s.k_fixed;
  d["k_hat"] = py::none();
  if (s.k_mode == KMode::adaptive) {
    const SelectionResult sel = select_k(y, error, s.penalty, ecfg);
    k = sel.k_hat;
    d["k_hat"] = sel.k_hat;
  } else if (s.k_mode == KMode::oracle_grid) {
    throw ConfigError("k = oracle needs a known target and is only available for mise");
  }
  const SurvivalEstimate raw = spectral_cutoff(y, error, k, ecfg);
  d["k"] = k;
  d["x"] = to_array(raw.x);
  d["survival_raw"] = to_array(raw.values);
  d["survival_clipped"] = to_array(clip(raw).values);
  if (heuristic || s.variant == Variant::heuristic)
    d["survival_heuristic"] = to_array(heuristic_survival(y, error, k, ecfg).values);
  d["sigma_y_hat"] = sigma_y_hat(y);
  return d;
}

py::dict select_cutoff(const Array& data, const py::kwargs& kw)
{
  const ExperimentSpec s = from_kwargs(kw).spec;
  const SelectionResult sel = select_k(to_vector(data), error_by_key(s.error), s.penalty, s.estimator);
  py::list contrast;
  for (const auto& c : sel.contrast)
    contrast.append(py::make_tuple(c.k, c.neg_norm2, c.penalty, c.total));
  py::dict d;
  d["k_hat"] = sel.k_hat;
  d["sigma_y_hat"] = sel.sigma_y_hat;
  d["contrast"] = contrast;
  return d;
}

py::dict mise(const py::kwargs& kw)
{
  const ExperimentSpec s = from_kwargs(kw).spec;
  return result_dict(s, run_experiment(s));
}

py::list tables(int which, const py::kwargs& kw)
{
  py::list out;
  for (const auto& s : table_specs(which, from_kwargs(kw).spec))
    out.append(result_dict(s, run_experiment(s)));
  return out;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Survival function estimation under multiplicative measurement error";

  // translators are tried newest first, so the subclass goes last
  py::register_exception<Error>(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("target_keys", &target_keys);
  m.def("error_keys", &error_keys);
  m.def("config_keys", &config_keys);
  m.def(
    "survival",
    [](const std::string& target, const Array& x) {
      const TargetModel t = target_by_key(target);
      std::vector<double> v = to_vector(x);
      for (double& xi : v)
        xi = t.survival(xi);
      return to_array(v);
    },
    py::arg("target"), py::arg("x"));
  m.def(
    "density",
    [](const std::string& target, const Array& x) {
      const TargetModel t = target_by_key(target);
      std::vector<double> v = to_vector(x);
      for (double& xi : v)
        xi = t.density(xi);
      return to_array(v);
    },
    py::arg("target"), py::arg("x"));
  m.def(
    "empirical_mellin", [](const Array& y, double t) { return empirical_mellin(to_vector(y), t); }, py::arg("sample"),
    py::arg("t"));
  m.def(
    "delta_g", [](double k, const std::string& error, double t_step) { return delta_g(k, error_by_key(error), t_step); },
    py::arg("k"), py::arg("error") = "unif_0_1", py::arg("t_step") = 1.0 / 128.0);
  m.def("complex_gamma", &complex_gamma, py::arg("z"));
  m.def("complex_log_gamma", &complex_log_gamma, py::arg("z"));
  m.def(
    "rate_fit",
    [](const std::vector<double>& n, const std::vector<double>& mise, double s, double gamma) {
      const RateFit f = rate_fit(n, mise, s, gamma);
      return py::make_tuple(f.slope, f.reference_slope);
    },
    py::arg("n"), py::arg("mise"), py::arg("s"), py::arg("gamma"));

  m.def("simulate", &simulate, "Contaminated sample; keyword arguments are configuration keys.");
  m.def("estimate", &estimate, py::arg("sample"), py::arg("heuristic") = false,
        "Survival estimate on the x-grid; k defaults to the adaptive choice.");
  m.def("select_k", &select_cutoff, py::arg("sample"), "Penalised contrast over the admissible cut-offs.");
  m.def("mise", &mise, "Monte Carlo MISE of one configuration.");
  m.def("tables", &tables, py::arg("which"), "Every cell of simulation table 1 or 2.");
}
