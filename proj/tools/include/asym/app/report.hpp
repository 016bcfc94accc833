#pragma once

// Execution of a RunConfig and its JSON / CSV output.
//
// JSON report (schema_version 1):
//   schema_version  1
//   command         "mass", "center", "ah-mass", "verify", "sweep"
//   config          the canonical configuration, section -> key -> text
//   charges[]       one entry per requested charge, with samples and limit,
//                   or status "error" and a message
//   diagnostics     decay, parity, equivalence, identity and kernel reports
//   verdicts[]      {name, pass, detail}
//   timings         seconds per charge and in total (omitted if disabled)

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "asym/app/config.hpp"
#include "json.hpp"

namespace asym::app {

inline constexpr int kSchemaVersion = 1;

struct ChargeResult {
  NamedCharge charge;
  double normalization = 0.0;
  bool ok = false;
  std::string error;
  RadialSeries series;
  // Centers of mass divided by the classical mass.
  std::optional<double> normalized_limit;
  std::optional<double> normalized_error;
  double seconds = 0.0;
};

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunReport {
  RunConfig config;
  std::vector<ChargeResult> charges;
  nlohmann::ordered_json diagnostics = nlohmann::ordered_json::object();
  std::vector<Verdict> verdicts;
  std::vector<std::string> errors;  // computation errors outside charges
  double seconds = 0.0;

  bool failed() const;
  // 0 success, 1 computation error (or a failed check for `verify`).
  int exit_code() const;
};

// Runs the configured command. Progress lines go to `log` when given.
RunReport run(const RunConfig& config, std::ostream* log = nullptr);

nlohmann::ordered_json to_json(const RunReport& report);
std::string report_text(const RunReport& report);

// Config echo in the report and its inverse.
nlohmann::ordered_json config_json(const ConfigTable& table);
ConfigTable config_from_json(const nlohmann::ordered_json& j);

// `r,raw_flux,normalized,quad_error`, 17 significant digits.
std::string series_csv(const RadialSeries& series);
// Same columns prefixed with the charge name, all successful charges.
std::string sweep_csv(const RunReport& report);

// Writes report.json and <charge>.csv into `dir`, creating it if needed.
void write_outputs(const RunReport& report, const std::string& dir);

}  // namespace asym::app
