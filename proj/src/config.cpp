#include "mellinsurv/config.hpp"

#include "mellinsurv/errors.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace mellinsurv {

namespace {

std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_number(std::string_view s, double& out)
{
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

template <class Int>
bool parse_integer(std::string_view s, Int& out)
{
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value)
{
  throw ConfigError("invalid value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

double get_double(std::string_view key, std::string_view value)
{
  double v = 0.0;
  if (!parse_number(value, v) || !std::isfinite(v))
    bad_value(key, value);
  return v;
}

template <class Int>
Int get_integer(std::string_view key, std::string_view value)
{
  Int v{};
  if (!parse_integer(value, v))
    bad_value(key, value);
  return v;
}

bool get_bool(std::string_view key, std::string_view value)
{
  if (value == "true" || value == "1")
    return true;
  if (value == "false" || value == "0")
    return false;
  bad_value(key, value);
}

std::string k_text(const ExperimentSpec& s)
{
  switch (s.k_mode) {
    case KMode::adaptive: return "adaptive";
    case KMode::oracle_grid: return "oracle";
    case KMode::fixed: return format_double(s.k_fixed);
  }
  return "adaptive";
}

} // namespace

std::string format_double(double v)
{
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

const std::vector<std::string>& config_keys()
{
  static const std::vector<std::string> keys = {
    "target", "error", "dependence", "m",     "lambda", "rho", "n",   "reps",    "seed",    "chi",     "theoretical_chi",
    "grid_rule", "variant", "k",     "t_step", "x_min", "x_max", "n_x", "k_max", "threads", "out"};
  return keys;
}

void set_config_key(RunConfig& cfg, std::string_view key, std::string_view value)
{
  ExperimentSpec& s = cfg.spec;
  if (key == "target") {
    s.target = value;
  } else if (key == "error") {
    s.error = value;
  } else if (key == "dependence") {
    if (value == "iid")
      s.dependence = Dependence::iid;
    else if (value == "ar1_gamma")
      s.dependence = Dependence::ar1_gamma;
    else
      bad_value(key, value);
  } else if (key == "m") {
    s.ar1.m = get_integer<int>(key, value);
  } else if (key == "lambda") {
    s.ar1.lambda = get_double(key, value);
  } else if (key == "rho") {
    s.ar1.rho = get_double(key, value);
  } else if (key == "n") {
    s.n = get_integer<std::size_t>(key, value);
  } else if (key == "reps") {
    s.reps = get_integer<std::size_t>(key, value);
  } else if (key == "seed") {
    s.seed = get_integer<std::uint64_t>(key, value);
  } else if (key == "chi") {
    s.penalty.chi = get_double(key, value);
  } else if (key == "theoretical_chi") {
    s.penalty.use_theoretical = get_bool(key, value);
  } else if (key == "grid_rule") {
    try {
      s.penalty.rule = grid_rule_from_string(value);
    } catch (const Error&) {
      bad_value(key, value);
    }
  } else if (key == "variant") {
    try {
      s.variant = variant_from_string(value);
    } catch (const Error&) {
      bad_value(key, value);
    }
  } else if (key == "k") {
    if (value == "adaptive") {
      s.k_mode = KMode::adaptive;
    } else if (value == "oracle") {
      s.k_mode = KMode::oracle_grid;
    } else {
      const double k = get_double(key, value);
      if (!(k > 0.0))
        bad_value(key, value);
      s.k_mode = KMode::fixed;
      s.k_fixed = k;
    }
  } else if (key == "t_step") {
    s.estimator.t_step = get_double(key, value);
  } else if (key == "x_min") {
    s.estimator.x.x_min = get_double(key, value);
  } else if (key == "x_max") {
    s.estimator.x.x_max = get_double(key, value);
  } else if (key == "n_x") {
    s.estimator.x.n_x = get_integer<std::size_t>(key, value);
  } else if (key == "k_max") {
    s.estimator.k_max = get_double(key, value);
  } else if (key == "threads") {
    s.threads = get_integer<unsigned>(key, value);
  } else if (key == "out") {
    cfg.out = value;
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

RunConfig parse_run_config(std::string_view text)
{
  RunConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    set_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

std::string to_config_text(const RunConfig& cfg)
{
  const ExperimentSpec& s = cfg.spec;
  std::ostringstream os;
  os << "target = " << s.target << "\n"
     << "error = " << s.error << "\n"
     << "dependence = " << to_string(s.dependence) << "\n"
     << "m = " << s.ar1.m << "\n"
     << "lambda = " << format_double(s.ar1.lambda) << "\n"
     << "rho = " << format_double(s.ar1.rho) << "\n"
     << "n = " << s.n << "\n"
     << "reps = " << s.reps << "\n"
     << "seed = " << s.seed << "\n"
     << "chi = " << format_double(s.penalty.chi) << "\n"
     << "theoretical_chi = " << (s.penalty.use_theoretical ? "true" : "false") << "\n"
     << "grid_rule = " << to_string(s.penalty.rule) << "\n"
     << "variant = " << to_string(s.variant) << "\n"
     << "k = " << k_text(s) << "\n"
     << "t_step = " << format_double(s.estimator.t_step) << "\n"
     << "x_min = " << format_double(s.estimator.x.x_min) << "\n"
     << "x_max = " << format_double(s.estimator.x.x_max) << "\n"
     << "n_x = " << s.estimator.x.n_x << "\n"
     << "k_max = " << format_double(s.estimator.k_max) << "\n";
  if (!cfg.out.empty())
    os << "out = " << cfg.out << "\n";
  return os.str();
}

std::vector<double> parse_observations(std::string_view text)
{
  std::vector<double> y;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty())
      continue;
    double v = 0.0;
    if (!parse_number(line, v) || !std::isfinite(v))
      throw ConfigError("line " + std::to_string(line_no) + ": not a number: '" + std::string(line) + "'");
    if (!(v > 0.0))
      throw ConfigError("line " + std::to_string(line_no) + ": observation must be positive, got " +
                        std::string(line));
    y.push_back(v);
  }
  if (y.empty())
    throw ConfigError("empty sample");
  return y;
}

std::string format_observations(const std::vector<double>& y)
{
  std::string out;
  out.reserve(y.size() * 20);
  for (double v : y) {
    out += format_double(v);
    out += '\n';
  }
  return out;
}

std::string mise_csv_header()
{
  return "target,error,dependence,n,m,rho,chi,variant,reps,mise_x100,se_x100,mean_k_hat,excluded";
}

std::string mise_csv_row(const ExperimentSpec& spec, const MiseResult& res)
{
  const bool ar = spec.dependence == Dependence::ar1_gamma;
  std::ostringstream os;
  os << spec.target_key() << ',' << spec.error << ',' << to_string(spec.dependence) << ',' << spec.n << ','
     << (ar ? std::to_string(spec.ar1.m) : std::string()) << ',' << (ar ? format_double(spec.ar1.rho) : std::string())
     << ',' << format_double(spec.penalty.effective_chi()) << ',' << to_string(spec.variant) << ',' << spec.reps
     << ',' << format_double(100.0 * res.mean_ise) << ',' << format_double(100.0 * res.se) << ','
     << format_double(res.mean_k_hat) << ',' << res.excluded;
  return os.str();
}

} // namespace mellinsurv
