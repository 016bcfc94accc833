#pragma once

// Run configuration for the `asym` tool.
//
// The file format is a flat, typed key-value text with sections:
//
//   # comment
//   [metric]
//   kind = schwarzschild
//   n = 3
//   m = 1
//   center = 1, 0.5, 0
//
//   [charge.mass]
//   kind = mass_classical
//
// Keys are `name = value` and values run to the end of the line. Lines
// starting with `#` or `;` are comments. Every command-line flag is an
// override of one of these keys.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "asym/charges.hpp"
#include "asym/limits.hpp"
#include "asym/metric.hpp"
#include "asym/verify.hpp"

namespace asym::app {

// Malformed configuration. line and column are 1-based; 0 when the error is
// not tied to a position (e.g. a command-line override).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, std::size_t line = 0, std::size_t column = 0);
  const std::string& message() const { return message_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

// Untyped key-value content of a configuration, in file order.
struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
  std::size_t column = 0;  // column of the first character of the value
};

struct ConfigSection {
  std::string name;
  std::size_t line = 0;
  std::vector<ConfigEntry> entries;

  const ConfigEntry* find(const std::string& key) const;
};

struct ConfigTable {
  std::vector<ConfigSection> sections;

  const ConfigSection* find(const std::string& name) const;
  // Sets section.key = value, creating either if missing.
  void set(const std::string& section, const std::string& key, const std::string& value);
};

ConfigTable parse_table(const std::string& text);

// Applies an override of the form `section.key=value`. The section name may
// itself contain dots (`charge.mass.kind=mass_ricci`); the last dot splits.
void apply_override(ConfigTable& table, const std::string& assignment);

enum class Command { mass, center, ah_mass, verify, sweep };
enum class VerifyCheck { pohozaev, kernel, equivalence };

std::string to_string(Command c);
std::string to_string(VerifyCheck c);
std::optional<Command> command_from_string(const std::string& s);
std::optional<VerifyCheck> verify_check_from_string(const std::string& s);

struct NamedCharge {
  std::string name;
  ChargeSpec spec;
};

struct RadiiSchedule {
  double start = 8.0;
  double ratio = 2.0;
  int count = 5;

  std::vector<double> radii() const;
};

struct RunConfig {
  Command command = Command::mass;
  VerifyCheck check = VerifyCheck::equivalence;

  MetricSpec metric;
  // Source text of the user components, keyed like the config (`g11`, `h23`).
  std::map<std::string, std::string> component_text;

  // Explicit [charge.<name>] sections; empty means the command's defaults.
  std::vector<NamedCharge> charges;
  std::string kernel;  // ah-mass: "V0".."Vn", empty for all
  std::string field;   // verify pohozaev / kernel: field name, empty for all

  RadiiSchedule radii;
  int degree = 20;           // flux quadrature
  int identity_degree = 30;  // Pohozaev annulus quadrature
  int threads = 0;

  FitOptions fit{.sigma = std::nullopt, .two_term = true};
  bool hint_decay = true;
  Tolerances tol;

  std::uint64_t seed = 1;
  int points = 50;
  double sample_rmin = 1.0;
  double sample_rmax = 5.0;
  double annulus_r0 = 0.0;  // 0: radii.start
  double annulus_r1 = 0.0;  // 0: twice the inner radius

  std::string out_dir;  // empty: nothing written to disk
  bool timings = true;

  ChargeOptions charge_options() const;
};

// Typed view of a table. Throws ConfigError with the position of the
// offending key or value.
RunConfig load_config(const ConfigTable& table);
RunConfig parse_config(const std::string& text);

// Canonical table and text of a configuration; `parse_config(to_text(c))`
// reproduces c.
ConfigTable to_table(const RunConfig& config);
std::string to_text(const ConfigTable& table);
std::string to_text(const RunConfig& config);

// Charges a command computes: the explicit list, or the command's defaults.
std::vector<NamedCharge> requested_charges(const RunConfig& config);

// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

}  // namespace asym::app
