#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lambda_pt/lambda_pt.hpp"

namespace lambda_pt::cli {

// Malformed file, unknown key, wrong type or inconsistent parameters.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { Csv, Json };

struct RunConfig {
  // Physical input. Either the full lab-frame parameter set (default: the
  // fig2a decays and couplings, all optical frequencies zero) or just
  // the PT pair gamma_pt / v.
  SystemParams system;
  bool pt_only = false;
  double gamma_pt = 0.0;
  double v = 0.0;

  // Time grid for evolve.
  double t_end = 1500.0;
  std::size_t samples = 4096;
  std::string method = "analytic";  // analytic | rk4
  std::optional<double> dt;          // rk4 step; recommended_dt() when unset
  std::size_t record_stride = 1;

  CVec3 b0 = CVec3::unit(0);
  std::string initial = "ground";  // ground | custom

  std::string sweep_param = "v";  // v | gamma_pt
  double sweep_min = 0.0;
  double sweep_max = 0.05;
  std::size_t sweep_points = 101;

  bool metric = true;
  std::string inject_fault = "none";  // none | metric_scale

  std::string out;
  OutputFormat format = OutputFormat::Csv;

  // PT parameters: the explicit pair, or derived from `system`.
  PtParams pt() const;
  // Lab-frame parameters are only available in full-system mode.
  bool has_system() const { return !pt_only; }
};

/// Builds a RunConfig from an optional JSON document (file contents) and
/// key=value overrides applied on top. Throws ConfigError.
RunConfig load_config(const std::optional<std::string>& json_text, const std::vector<std::string>& overrides);

RunConfig load_config_file(const std::optional<std::string>& path, const std::vector<std::string>& overrides);

OutputFormat parse_format(const std::string& s);

}  // namespace lambda_pt::cli
