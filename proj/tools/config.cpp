#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace lambda_pt::cli {

namespace {

using nlohmann::json;

const std::set<std::string> kSystemKeys = {"gamma1", "gamma2", "gamma3", "omega1", "omega2",
                                           "omega3", "omega_p", "omega_c", "v_p", "v_c"};

double get_number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("field '" + key + "': expected a number, got " + j.dump());
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ConfigError("field '" + key + "': must be finite");
  return x;
}

std::size_t get_count(const json& j, const std::string& key) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) {
    throw ConfigError("field '" + key + "': expected a non-negative integer, got " + j.dump());
  }
  const auto x = j.get<long long>();
  if (x < 0) throw ConfigError("field '" + key + "': expected a non-negative integer");
  return static_cast<std::size_t>(x);
}

std::string get_string(const json& j, const std::string& key) {
  if (!j.is_string()) throw ConfigError("field '" + key + "': expected a string, got " + j.dump());
  return j.get<std::string>();
}

bool get_bool(const json& j, const std::string& key) {
  if (!j.is_boolean()) throw ConfigError("field '" + key + "': expected true or false, got " + j.dump());
  return j.get<bool>();
}

CVec3 get_vector(const json& j, const std::string& key) {
  const std::string msg = "field '" + key + "': expected three [re, im] pairs";
  if (!j.is_array() || j.size() != 3) throw ConfigError(msg);
  CVec3 out;
  for (std::size_t i = 0; i < 3; ++i) {
    const json& pair = j[i];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw ConfigError(msg);
    }
    out[i] = Complex{pair[0].get<double>(), pair[1].get<double>()};
  }
  if (!out.finite()) throw ConfigError(msg + " with finite values");
  return out;
}

double* system_field(SystemParams& p, const std::string& key) {
  if (key == "gamma1") return &p.gamma1;
  if (key == "gamma2") return &p.gamma2;
  if (key == "gamma3") return &p.gamma3;
  if (key == "omega1") return &p.omega1;
  if (key == "omega2") return &p.omega2;
  if (key == "omega3") return &p.omega3;
  if (key == "omega_p") return &p.omega_p;
  if (key == "omega_c") return &p.omega_c;
  if (key == "v_p") return &p.v_p;
  if (key == "v_c") return &p.v_c;
  return nullptr;
}

json parse_override_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return json(text);
  }
}

}  // namespace

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw ConfigError("format must be 'csv' or 'json', got '" + s + "'");
}

PtParams RunConfig::pt() const {
  try {
    return pt_only ? PtParams(gamma_pt, v, system.hbar) : PtParams::from(system);
  } catch (const InvalidParams& e) {
    throw ConfigError(std::string("invalid parameters: ") + e.what());
  }
}

RunConfig load_config(const std::optional<std::string>& json_text, const std::vector<std::string>& overrides) {
  json doc = json::object();
  if (json_text) {
    try {
      doc = json::parse(*json_text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  }
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + item + "'");
    doc[item.substr(0, eq)] = parse_override_value(item.substr(eq + 1));
  }

  RunConfig cfg;
  cfg.system.gamma1 = 0.002;
  cfg.system.gamma2 = 0.0015;
  cfg.system.gamma3 = 0.001;
  cfg.system.v_p = cfg.system.v_c = 0.025;
  cfg.gamma_pt = 0.0005;
  cfg.v = 0.025;

  bool saw_system = false;
  bool saw_pt = false;
  bool saw_initial = false;
  bool saw_b0 = false;
  for (const auto& [key, value] : doc.items()) {
    if (kSystemKeys.count(key)) {
      *system_field(cfg.system, key) = get_number(value, key);
      saw_system = true;
    } else if (key == "gamma_pt") {
      cfg.gamma_pt = get_number(value, key);
      saw_pt = true;
    } else if (key == "v") {
      cfg.v = get_number(value, key);
      saw_pt = true;
    } else if (key == "hbar") {
      cfg.system.hbar = get_number(value, key);
    } else if (key == "t_end") {
      cfg.t_end = get_number(value, key);
    } else if (key == "samples") {
      cfg.samples = get_count(value, key);
    } else if (key == "method") {
      cfg.method = get_string(value, key);
    } else if (key == "dt") {
      cfg.dt = get_number(value, key);
    } else if (key == "record_stride") {
      cfg.record_stride = get_count(value, key);
    } else if (key == "initial") {
      cfg.initial = get_string(value, key);
      saw_initial = true;
    } else if (key == "b0") {
      cfg.b0 = get_vector(value, key);
      saw_b0 = true;
    } else if (key == "sweep_param") {
      cfg.sweep_param = get_string(value, key);
    } else if (key == "sweep_min") {
      cfg.sweep_min = get_number(value, key);
    } else if (key == "sweep_max") {
      cfg.sweep_max = get_number(value, key);
    } else if (key == "sweep_points") {
      cfg.sweep_points = get_count(value, key);
    } else if (key == "metric") {
      cfg.metric = get_bool(value, key);
    } else if (key == "inject_fault") {
      cfg.inject_fault = get_string(value, key);
    } else if (key == "out") {
      cfg.out = get_string(value, key);
    } else if (key == "format") {
      cfg.format = parse_format(get_string(value, key));
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }

  if (saw_system && saw_pt) {
    throw ConfigError("give either lab-frame parameters (gamma1..v_c) or the PT pair (gamma_pt, v), not both");
  }
  cfg.pt_only = saw_pt;

  if (saw_b0 && !saw_initial) cfg.initial = "custom";
  if (cfg.initial == "ground") {
    if (saw_b0) throw ConfigError("field 'b0' conflicts with initial = \"ground\"");
    cfg.b0 = CVec3::unit(0);
  } else if (cfg.initial == "custom") {
    if (!saw_b0) throw ConfigError("initial = \"custom\" requires field 'b0'");
  } else {
    throw ConfigError("field 'initial': expected \"ground\" or \"custom\"");
  }

  try {
    cfg.system.validate();
  } catch (const InvalidParams& e) {
    throw ConfigError(e.what());
  }
  if (!(cfg.t_end > 0.0)) throw ConfigError("field 't_end': must be positive");
  if (cfg.samples < 2) throw ConfigError("field 'samples': need at least 2");
  if (cfg.method != "analytic" && cfg.method != "rk4") {
    throw ConfigError("field 'method': expected \"analytic\" or \"rk4\"");
  }
  if (cfg.dt && !(*cfg.dt > 0.0)) throw ConfigError("field 'dt': must be positive");
  if (cfg.record_stride < 1) throw ConfigError("field 'record_stride': must be at least 1");
  if (cfg.sweep_param != "v" && cfg.sweep_param != "gamma_pt") {
    throw ConfigError("field 'sweep_param': expected \"v\" or \"gamma_pt\"");
  }
  if (cfg.sweep_points < 2) throw ConfigError("field 'sweep_points': need at least 2");
  if (!(cfg.sweep_max > cfg.sweep_min)) throw ConfigError("sweep range: sweep_max must exceed sweep_min");
  if (cfg.sweep_param == "v" && cfg.sweep_min < 0.0) throw ConfigError("sweep range: v must be non-negative");
  if (cfg.inject_fault != "none" && cfg.inject_fault != "metric_scale") {
    throw ConfigError("field 'inject_fault': expected \"none\" or \"metric_scale\"");
  }
  return cfg;
}

RunConfig load_config_file(const std::optional<std::string>& path, const std::vector<std::string>& overrides) {
  std::optional<std::string> text;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("cannot read config file '" + *path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return load_config(text, overrides);
}

}  // namespace lambda_pt::cli
