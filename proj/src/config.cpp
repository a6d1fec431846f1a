#include "vpfp/config.hpp"

#include "vpfp/artifacts.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace vpfp {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string normalise_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return key;
}

double to_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw ConfigError("config", "key '" + key + "' expects a number, got '" + value + "'");
  }
  return out;
}

long long to_integer(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long long out = 0;
  try {
    out = std::stoll(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw ConfigError("config", "key '" + key + "' expects an integer, got '" + value + "'");
  }
  return out;
}

int to_int(const std::string& key, const std::string& value) {
  const long long v = to_integer(key, value);
  if (v < -2147483647LL || v > 2147483647LL) {
    throw ConfigError("config", "key '" + key + "' is out of range");
  }
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& value) {
  std::string v = value;
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("config", "key '" + key + "' expects a boolean, got '" + value + "'");
}

}  // namespace

ConfigMap parse_config_text(const std::string& text, const std::string& origin) {
  ConfigMap out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config", origin + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = normalise_key(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config", origin + ":" + std::to_string(lineno) + ": empty key");
    }
    out[key] = value;
  }
  return out;
}

ConfigMap load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{') return parse_config_text(text, path);

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config", "invalid JSON in '" + path + "': " + e.what());
  }
  const nlohmann::json& obj = doc.contains("config") ? doc.at("config") : doc;
  if (!obj.is_object()) throw ConfigError("config", "JSON config must be an object");
  ConfigMap out;
  for (const auto& [key, value] : obj.items()) {
    if (value.is_string()) {
      out[normalise_key(key)] = value.get<std::string>();
    } else if (value.is_number_float()) {
      out[normalise_key(key)] = format_double(value.get<double>());
    } else if (value.is_number() || value.is_boolean()) {
      out[normalise_key(key)] = value.dump();
    } else {
      throw ConfigError("config", "JSON config value for '" + key + "' must be a scalar");
    }
  }
  return out;
}

void apply_config(const ConfigMap& map, ScenarioConfig& cfg) {
  for (const auto& [raw, value] : map) {
    const std::string key = normalise_key(raw);
    if (key == "scenario") cfg.kind = parse_scenario(value);
    else if (key == "nx") cfg.nx = to_int(key, value);
    else if (key == "nv") cfg.nv = to_int(key, value);
    else if (key == "v-min") cfg.v_min = to_double(key, value);
    else if (key == "v-max") cfg.v_max = to_double(key, value);
    else if (key == "rank") cfg.rank = to_int(key, value);
    else if (key == "dt") cfg.dt = to_double(key, value);
    else if (key == "levels") cfg.levels = to_int(key, value);
    else if (key == "t-final") cfg.t_final = to_double(key, value);
    else if (key == "eps") cfg.eps = to_double(key, value);
    else if (key == "order") cfg.order = to_int(key, value);
    else if (key == "solver") cfg.solver = parse_solver(value);
    else if (key == "zero-field") cfg.zero_field = to_bool(key, value);
    else if (key == "transport") cfg.transport = to_bool(key, value);
    else if (key == "out") cfg.out_dir = value;
    else if (key == "seed") {
      const long long s = to_integer(key, value);
      if (s < 0) throw ConfigError("config", "seed must be non-negative");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else {
      throw ConfigError("config", "unknown key '" + raw + "'");
    }
  }
}

ConfigMap to_config_map(const ScenarioConfig& cfg) {
  ConfigMap m;
  m["scenario"] = scenario_name(cfg.kind);
  m["nx"] = std::to_string(cfg.nx);
  m["nv"] = std::to_string(cfg.nv);
  m["v-min"] = format_double(cfg.v_min);
  m["v-max"] = format_double(cfg.v_max);
  m["rank"] = std::to_string(cfg.rank);
  m["dt"] = format_double(cfg.dt);
  m["levels"] = std::to_string(cfg.levels);
  m["t-final"] = format_double(cfg.t_final);
  m["eps"] = format_double(cfg.eps);
  m["order"] = std::to_string(cfg.order);
  m["solver"] = solver_name(cfg.solver);
  m["zero-field"] = cfg.zero_field ? "true" : "false";
  m["transport"] = cfg.transport ? "true" : "false";
  m["out"] = cfg.out_dir;
  m["seed"] = std::to_string(cfg.seed);
  return m;
}

}  // namespace vpfp
