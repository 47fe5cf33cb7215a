#pragma once

#include "mellinsurv/risk.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace mellinsurv {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// An ExperimentSpec plus output location, read from flat `key = value` text.
struct RunConfig
{
  ExperimentSpec spec;
  std::string out;
};

/// Keys accepted by set_config_key, in echo order.
const std::vector<std::string>& config_keys();

/// Applies one key. Throws ConfigError naming the key when it is unknown or
/// its value does not parse.
void set_config_key(RunConfig& cfg, std::string_view key, std::string_view value);

/// Parses `key = value` lines; `#` starts a comment, blank lines are ignored.
/// Missing keys keep their defaults.
RunConfig parse_run_config(std::string_view text);

/// Every key with its effective value, one per line; parse_run_config of the
/// result reproduces `cfg` (threads is omitted, it never affects results).
std::string to_config_text(const RunConfig& cfg);

/// One positive decimal per line (LF or CRLF, blank lines skipped). Throws
/// ConfigError("empty sample") or an error naming the 1-based offending line.
std::vector<double> parse_observations(std::string_view text);

/// Observations, one per line, shortest round-trip formatting.
std::string format_observations(const std::vector<double>& y);

std::string mise_csv_header();
std::string mise_csv_row(const ExperimentSpec& spec, const MiseResult& res);

} // namespace mellinsurv
