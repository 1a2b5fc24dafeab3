#include <cmath>
#include <cstdio>
#include <sstream>

#include "qpg/cli.hpp"
#include "qpg/errors.hpp"

namespace qpg::cli {

namespace {

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

std::string json_value(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return format_number(*d);
  if (const auto* i = std::get_if<long long>(&v)) return std::to_string(*i);
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  if (const auto* p = std::get_if<Precise>(&v)) return format_precise(p->value);
  return json_string(std::get<std::string>(v));
}

std::string csv_value(const Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) {
    if (s->find_first_of(",\"\n") == std::string::npos) return *s;
    std::string out = "\"";
    for (const char c : *s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
  }
  return json_value(v);
}

void json_object(std::ostringstream& os, const Fields& f, const std::string& indent) {
  if (f.empty()) {
    os << "{}";
    return;
  }
  os << "{\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    os << indent << "  " << json_string(f[i].first) << ": " << json_value(f[i].second);
    os << (i + 1 < f.size() ? ",\n" : "\n");
  }
  os << indent << "}";
}

}  // namespace

std::string format_number(double x) {
  if (!std::isfinite(x)) throw Error("report: non-finite number");
  if (x == 0.0) return "0";  // also folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_precise(double x) {
  if (!std::isfinite(x)) throw Error("report: non-finite number");
  if (x == 0.0) x = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::string to_json(const Report& r) {
  std::ostringstream os;
  os << "{\n  \"command\": " << json_string(r.command) << ",\n  \"parameters\": ";
  json_object(os, r.parameters, "  ");
  os << ",\n  \"rows\": [";
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    Fields all = r.rows[i].columns;
    all.insert(all.end(), r.rows[i].extras.begin(), r.rows[i].extras.end());
    os << (i ? ",\n    " : "\n    ");
    json_object(os, all, "    ");
  }
  os << (r.rows.empty() ? "],\n" : "\n  ],\n");
  os << "  \"summary\": ";
  json_object(os, r.summary, "  ");
  os << ",\n  \"warnings\": [";
  for (std::size_t i = 0; i < r.warnings.size(); ++i) {
    os << (i ? ", " : "") << json_string(r.warnings[i]);
  }
  os << "]\n}\n";
  return os.str();
}

std::string to_csv(const Report& r) {
  std::ostringstream os;
  if (!r.rows.empty()) {
    const Fields& head = r.rows.front().columns;
    for (std::size_t i = 0; i < head.size(); ++i) os << (i ? "," : "") << head[i].first;
    os << "\n";
    for (const Row& row : r.rows) {
      if (row.columns.size() != head.size()) throw Error("report: ragged rows");
      for (std::size_t i = 0; i < row.columns.size(); ++i) {
        os << (i ? "," : "") << csv_value(row.columns[i].second);
      }
      os << "\n";
    }
  }
  os << "# command=" << r.command << "\n";
  for (const auto& [k, v] : r.parameters) os << "# " << k << "=" << csv_value(v) << "\n";
  for (const auto& [k, v] : r.summary) os << "# " << k << "=" << csv_value(v) << "\n";
  for (const auto& w : r.warnings) os << "# warning: " << w << "\n";
  return os.str();
}

}  // namespace qpg::cli
