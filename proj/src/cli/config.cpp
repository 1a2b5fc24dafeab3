#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "qpg/cli.hpp"
#include "qpg/errors.hpp"

namespace qpg::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const KeySpec* find_key(const std::vector<KeySpec>& keys, const std::string& name) {
  for (const KeySpec& k : keys)
    if (k.name == name) return &k;
  return nullptr;
}

// Shared blocks of keys.
std::vector<KeySpec> ion_keys(bool omega_required) {
  return {
      {"eta", ValueKind::real, true, ""},
      {"omega", ValueKind::real, omega_required, ""},
      {"delta", ValueKind::real, true, ""},
      {"phi", ValueKind::real, false, "0"},
      {"g0", ValueKind::real, false, "1"},
      {"n_max", ValueKind::integer, false, "6"},
      {"n_sel", ValueKind::integer, false, "0"},
  };
}

std::vector<KeySpec> build_ion_validate() {
  auto keys = ion_keys(false);
  keys.erase(keys.begin() + 1);  // omega follows from omega_ratio
  keys.push_back({"omega_ratio", ValueKind::real, false, ""});
  keys.push_back({"dt", ValueKind::real, false, "0.06283185307179587"});
  keys.push_back({"t_final", ValueKind::real, false, "1"});
  keys.push_back({"tol_conv", ValueKind::real, false, "1e-06"});
  keys.push_back({"pad", ValueKind::integer, false, "10"});
  keys.push_back({"max_halvings", ValueKind::integer, false, "3"});
  keys.push_back({"calibrate", ValueKind::boolean, false, "true"});
  return keys;
}

std::vector<KeySpec> cavity_keys() {
  return {
      {"omega_ei", ValueKind::real, false, "1"},
      {"omega_ig", ValueKind::real, false, "1"},
      {"delta_big", ValueKind::real, false, "30"},
      {"n_max", ValueKind::integer, false, "2"},
      {"compensate_stark", ValueKind::boolean, false, "true"},
  };
}

std::string canonical(const KeySpec& spec, const std::string& raw) {
  const std::string v = trim(raw);
  switch (spec.kind) {
    case ValueKind::real: {
      errno = 0;
      char* end = nullptr;
      const double x = std::strtod(v.c_str(), &end);
      if (v.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(x)) {
        throw InvalidParameter(spec.name, "expected a finite number, got '" + raw + "'");
      }
      return format_number(x);
    }
    case ValueKind::integer: {
      errno = 0;
      char* end = nullptr;
      const long x = std::strtol(v.c_str(), &end, 10);
      if (v.empty() || *end != '\0' || errno == ERANGE || x < -1000000 || x > 1000000) {
        throw InvalidParameter(spec.name, "expected an integer, got '" + raw + "'");
      }
      return std::to_string(x);
    }
    case ValueKind::boolean:
      if (v == "true" || v == "1" || v == "yes" || v == "on") return "true";
      if (v == "false" || v == "0" || v == "no" || v == "off") return "false";
      throw InvalidParameter(spec.name, "expected true or false, got '" + raw + "'");
  }
  return v;
}

}  // namespace

KeyValues parse_config_text(const std::string& text, const std::string& origin) {
  KeyValues out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(number);
    if (eq == std::string::npos) throw InvalidParameter(where, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw InvalidParameter(where, "empty key");
    if (!out.emplace(key, value).second) throw InvalidParameter(key, "given twice in " + origin);
  }
  return out;
}

KeyValues load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("config", "cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

const std::vector<KeySpec>& keys_for(const std::string& command) {
  static const std::map<std::string, std::vector<KeySpec>> table = {
      {"ion run", ion_keys(true)},
      {"ion validate", build_ion_validate()},
      {"cavity run", cavity_keys()},
      {"cavity validate", cavity_keys()},
      {"gates truth-table", {}},
  };
  const auto it = table.find(command);
  if (it == table.end()) throw InvalidParameter("command", "unknown command '" + command + "'");
  return it->second;
}

Sweep parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw InvalidParameter("sweep", "expected KEY=v1,v2,...");
  Sweep s;
  s.key = trim(text.substr(0, eq));
  std::stringstream list(text.substr(eq + 1));
  std::string item;
  while (std::getline(list, item, ',')) {
    item = trim(item);
    if (item.empty()) throw InvalidParameter(s.key, "empty value in sweep list");
    s.values.push_back(item);
  }
  if (s.key.empty() || s.values.empty()) throw InvalidParameter("sweep", "expected KEY=v1,v2,...");
  return s;
}

KeyValues resolve(const std::string& command, const KeyValues& file, const KeyValues& overrides) {
  const auto& keys = keys_for(command);
  KeyValues merged = file;
  for (const auto& [k, v] : overrides) merged[k] = v;

  KeyValues out;
  for (const auto& [k, v] : merged) {
    const KeySpec* spec = find_key(keys, k);
    if (!spec) throw InvalidParameter(k, "unknown key for '" + command + "'");
    out[k] = canonical(*spec, v);
  }
  for (const KeySpec& spec : keys) {
    if (out.count(spec.name)) continue;
    if (spec.required) throw InvalidParameter(spec.name, "required key is missing");
    if (!spec.fallback.empty()) out[spec.name] = canonical(spec, spec.fallback);
  }
  return out;
}

double get_real(const KeyValues& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw InvalidParameter(key, "missing");
  return std::strtod(it->second.c_str(), nullptr);
}

int get_int(const KeyValues& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw InvalidParameter(key, "missing");
  return static_cast<int>(std::strtol(it->second.c_str(), nullptr, 10));
}

bool get_bool(const KeyValues& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw InvalidParameter(key, "missing");
  return it->second == "true";
}

}  // namespace qpg::cli
