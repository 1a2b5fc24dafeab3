#pragma once

// Command-line front end: configs, sweeps and reports.

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qpg::cli {

enum ExitCode : int {
  kExitPass = 0,
  kExitPhysics = 1,
  kExitConfig = 2,
  kExitConvergence = 3,
};

// ---------------------------------------------------------------------------
// Configuration

using KeyValues = std::map<std::string, std::string>;

/// Flat "key = value" lines; '#' starts a comment. Duplicate keys are errors.
KeyValues parse_config_text(const std::string& text, const std::string& origin = "config");
KeyValues load_config_file(const std::string& path);

enum class ValueKind { real, integer, boolean };

struct KeySpec {
  std::string name;
  ValueKind kind = ValueKind::real;
  bool required = false;
  std::string fallback;  // default when not required
};

/// Keys accepted by a command ("ion run", "ion validate", ...).
const std::vector<KeySpec>& keys_for(const std::string& command);

struct Sweep {
  std::string key;
  std::vector<std::string> values;
};

/// Parses "key=v1,v2,...".
Sweep parse_sweep(const std::string& text);

/// Merges file values and overrides (overrides win), rejects unknown keys,
/// fills defaults, checks required keys and canonicalises numbers. Throws
/// InvalidParameter naming the offending key.
KeyValues resolve(const std::string& command, const KeyValues& file, const KeyValues& overrides);

double get_real(const KeyValues& kv, const std::string& key);
int get_int(const KeyValues& kv, const std::string& key);
bool get_bool(const KeyValues& kv, const std::string& key);

// ---------------------------------------------------------------------------
// Reports

/// A number always printed with 17 significant digits, even when it is round.
struct Precise {
  double value = 0.0;
};

using Value = std::variant<double, long long, bool, std::string, Precise>;
using Fields = std::vector<std::pair<std::string, Value>>;

struct Row {
  Fields columns;  // shared header, in order
  Fields extras;   // JSON only
};

struct Report {
  std::string command;
  Fields parameters;  // fully resolved inputs
  std::vector<Row> rows;
  Fields summary;
  std::vector<std::string> warnings;
};

enum class Format { json, csv };

/// 17 significant digits; throws Error on non-finite numbers.
std::string format_number(double x);
/// Like format_number but in exponent form, so round values keep 17 digits.
std::string format_precise(double x);
std::string to_json(const Report& r);
/// Header plus rows; parameters, summary and warnings follow as '#' lines.
std::string to_csv(const Report& r);

// ---------------------------------------------------------------------------
// Commands

struct Outcome {
  Report report;
  int exit_code = kExitPass;
};

struct Invocation {
  std::string command;            // e.g. "ion run"
  std::vector<KeyValues> points;  // resolved parameters, one per sweep point
  std::vector<Sweep> sweeps;      // first sweep varies slowest
};

/// Expands the sweeps (cartesian product) over file values and overrides and
/// resolves every point. Adds the command's default sweep when none is given.
Invocation make_invocation(const std::string& command, const KeyValues& file,
                           const KeyValues& overrides, std::vector<Sweep> sweeps);

Outcome cmd_ion_run(const Invocation& inv);
Outcome cmd_ion_validate(const Invocation& inv);
Outcome cmd_cavity_run(const Invocation& inv);
Outcome cmd_cavity_validate(const Invocation& inv);
Outcome cmd_gates_truth_table(const Invocation& inv);

/// Full CLI: parses argv-style arguments (without the program name), runs
/// the command and writes the report. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qpg::cli
