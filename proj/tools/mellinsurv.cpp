// Command-line front end: estimate, simulate, mise, tables.
#include "mellinsurv/adaptive.hpp"
#include "mellinsurv/config.hpp"
#include "mellinsurv/errors.hpp"
#include "mellinsurv/estimator.hpp"
#include "mellinsurv/models.hpp"
#include "mellinsurv/risk.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#ifndef MELLINSURV_VERSION
#define MELLINSURV_VERSION "0.0.0"
#endif

using namespace mellinsurv;
using nlohmann::ordered_json;

namespace {

struct Overrides
{
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> chi;
  std::string k;
  std::string variant;
  std::string error;
  std::string target;
  std::string out;
  std::optional<unsigned> threads;
  std::optional<std::size_t> reps;
  std::vector<std::string> set;
};

std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw ConfigError("cannot write '" + path + "'");
  out << text;
  if (!out)
    throw ConfigError("failed writing '" + path + "'");
}

RunConfig load(const Overrides& o, const std::string& default_out)
{
  RunConfig cfg = o.config.empty() ? RunConfig{} : parse_run_config(read_file(o.config));
  for (const auto& kv : o.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--set expects key=value, got '" + kv + "'");
    set_config_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.seed)
    cfg.spec.seed = *o.seed;
  if (o.chi)
    set_config_key(cfg, "chi", format_double(*o.chi));
  if (!o.k.empty())
    set_config_key(cfg, "k", o.k);
  if (!o.variant.empty())
    set_config_key(cfg, "variant", o.variant);
  if (!o.error.empty())
    cfg.spec.error = o.error;
  if (!o.target.empty())
    cfg.spec.target = o.target;
  if (o.threads)
    cfg.spec.threads = *o.threads;
  if (o.reps)
    cfg.spec.reps = *o.reps;
  if (!o.out.empty())
    cfg.out = o.out;
  if (cfg.out.empty())
    cfg.out = default_out;
  return cfg;
}

ordered_json config_echo(const RunConfig& cfg)
{
  ordered_json j = ordered_json::object();
  std::istringstream lines(to_config_text(cfg));
  for (std::string line; std::getline(lines, line);) {
    const auto eq = line.find(" = ");
    j[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return j;
}

ordered_json mise_json(const ExperimentSpec& spec, const MiseResult& r)
{
  ordered_json j;
  j["target"] = spec.target_key();
  j["n"] = spec.n;
  j["mean_ise"] = r.mean_ise;
  j["se"] = r.se;
  j["mise_x100"] = 100.0 * r.mean_ise;
  j["mean_k_hat"] = r.mean_k_hat;
  j["excluded"] = r.excluded;
  j["failures"] = r.failures;
  return j;
}

int cmd_estimate(const Overrides& o, const std::string& data, bool with_heuristic)
{
  RunConfig cfg = load(o, "estimate.csv");
  ExperimentSpec& s = cfg.spec;
  s.estimator.validate();
  s.penalty.validate();
  const ErrorModel error = error_by_key(s.error);
  const std::vector<double> y = parse_observations(read_file(data));

  EstimatorConfig ecfg = s.estimator;
  if (ecfg.x.x_max == 0.0)
    ecfg.x.x_max = 2.0 * *std::max_element(y.begin(), y.end());

  ordered_json meta;
  meta["n"] = y.size();
  double k = 0.0;
  switch (s.k_mode) {
    case KMode::fixed:
      k = s.k_fixed;
      meta["k_hat"] = nullptr;
      break;
    case KMode::adaptive: {
      const SelectionResult sel = select_k(y, error, s.penalty, ecfg);
      k = sel.k_hat;
      meta["k_hat"] = sel.k_hat;
      break;
    }
    case KMode::oracle_grid:
      throw ConfigError("k = oracle needs a known target and is only available for mise");
  }
  const SurvivalEstimate raw = spectral_cutoff(y, error, k, ecfg);
  const SurvivalEstimate clipped = clip(raw);
  std::optional<SurvivalEstimate> heur;
  if (with_heuristic)
    heur = heuristic_survival(y, error, k, ecfg);

  std::string csv = with_heuristic ? "x,survival_raw,survival_clipped,survival_heuristic\n"
                                   : "x,survival_raw,survival_clipped\n";
  for (std::size_t i = 0; i < raw.x.size(); ++i) {
    csv += format_double(raw.x[i]) + ',' + format_double(raw.values[i]) + ',' + format_double(clipped.values[i]);
    if (heur)
      csv += ',' + format_double(heur->values[i]);
    csv += '\n';
  }
  write_file(cfg.out, csv);

  meta["k"] = k;
  meta["chi"] = s.penalty.effective_chi();
  meta["sigma_y_hat"] = sigma_y_hat(y);
  meta["x_max"] = ecfg.x.x_max;
  meta["data"] = data;
  meta["config"] = config_echo(cfg);
  meta["version"] = MELLINSURV_VERSION;
  write_file(cfg.out + ".json", meta.dump(2) + "\n");
  return 0;
}

int cmd_simulate(const Overrides& o)
{
  RunConfig cfg = load(o, "sample.txt");
  ExperimentSpec& s = cfg.spec;
  s.validate();
  const ErrorModel error = error_by_key(s.error);
  Rng rng(s.seed);
  std::vector<double> x = s.dependence == Dependence::iid ? target_by_key(s.target).sample(rng, s.n)
                                                           : sample_ar1_gamma(s.n, s.ar1, rng);
  const std::vector<double> y = contaminate(std::move(x), error, rng);
  write_file(cfg.out, format_observations(y));

  ordered_json meta;
  meta["n"] = y.size();
  meta["seed"] = s.seed;
  meta["target"] = s.target_key();
  meta["config"] = config_echo(cfg);
  meta["version"] = MELLINSURV_VERSION;
  write_file(cfg.out + ".json", meta.dump(2) + "\n");
  return 0;
}

int write_mise(const RunConfig& cfg, const std::vector<ExperimentSpec>& specs, ordered_json meta)
{
  std::string csv = mise_csv_header() + "\n";
  ordered_json rows = ordered_json::array();
  for (const ExperimentSpec& s : specs) {
    const MiseResult r = run_experiment(s);
    std::cerr << s.target_key() << " n=" << s.n << ": 100*MISE = " << format_double(100.0 * r.mean_ise) << " ("
              << r.runtime_seconds << " s)\n";
    csv += mise_csv_row(s, r) + "\n";
    ordered_json row = mise_json(s, r);
    row["seed"] = s.seed;
    rows.push_back(std::move(row));
  }
  write_file(cfg.out, csv);
  meta["results"] = std::move(rows);
  meta["config"] = config_echo(cfg);
  meta["version"] = MELLINSURV_VERSION;
  write_file(cfg.out + ".json", meta.dump(2) + "\n");
  return 0;
}

int cmd_mise(const Overrides& o, bool progress)
{
  RunConfig cfg = load(o, "mise.csv");
  cfg.spec.progress = progress;
  return write_mise(cfg, {cfg.spec}, ordered_json::object());
}

int cmd_tables(const Overrides& o, int which, bool progress)
{
  RunConfig cfg = load(o, "table" + std::to_string(which) + ".csv");
  cfg.spec.progress = progress;
  ordered_json meta;
  meta["table"] = which;
  return write_mise(cfg, table_specs(which, cfg.spec), std::move(meta));
}

void add_common(CLI::App* sub, Overrides& o)
{
  sub->add_option("--config", o.config, "flat key = value configuration file");
  sub->add_option("--seed", o.seed, "master seed");
  sub->add_option("--chi", o.chi, "penalty constant");
  sub->add_option("--k", o.k, "cut-off: a positive number, adaptive, or oracle");
  sub->add_option("--variant", o.variant, "raw, clipped or heuristic");
  sub->add_option("--error", o.error, "error law key");
  sub->add_option("--target", o.target, "target law key");
  sub->add_option("--out", o.out, "output path (a .json sidecar is written next to it)");
  sub->add_option("--threads", o.threads, "worker threads (0: all cores)");
  sub->add_option("--reps", o.reps, "Monte Carlo replications");
  sub->add_option("--set", o.set, "extra key=value overrides")->take_all();
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Survival function estimation under multiplicative measurement error"};
  app.set_version_flag("--version", MELLINSURV_VERSION);
  app.require_subcommand(1);
  Overrides o;
  std::string data;
  bool heuristic = false;
  bool progress = false;
  int which = 1;

  auto* est = app.add_subcommand("estimate", "estimate the survival function from an observation file");
  est->add_option("data", data, "one positive observation per line")->required();
  est->add_flag("--heuristic", heuristic, "also write the monotone heuristic estimate");
  add_common(est, o);
  auto* sim = app.add_subcommand("simulate", "draw a contaminated sample");
  add_common(sim, o);
  auto* mise = app.add_subcommand("mise", "Monte Carlo MISE of one configuration");
  mise->add_flag("--progress", progress, "per-replication counter on stderr");
  add_common(mise, o);
  auto* tab = app.add_subcommand("tables", "run every cell of simulation table 1 or 2");
  tab->add_option("which", which, "1 or 2")->required()->check(CLI::IsMember({1, 2}));
  tab->add_flag("--progress", progress, "per-replication counter on stderr");
  add_common(tab, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*est)
      return cmd_estimate(o, data, heuristic || o.variant == "heuristic");
    if (*sim)
      return cmd_simulate(o);
    if (*mise)
      return cmd_mise(o, progress);
    return cmd_tables(o, which, progress);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
