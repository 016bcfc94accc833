// asym: asymptotic charges of asymptotically flat and hyperbolic metrics.
//
//   asym mass --metric schwarzschild --n 3 --m 1
//   asym center --metric schwarzschild --n 3 --m 1 --center 1,0.5,0
//   asym ah-mass --metric kottler --n 3 --m 1 --kernel V0
//   asym verify pohozaev --metric hyperbolic --n 3 --r0 1
//   asym sweep --config run.cfg --out results
//
// Exit codes: 0 success, 1 computation error or failed check, 2 bad
// configuration or command line.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "asym/app/config.hpp"
#include "asym/app/report.hpp"
#include "asym/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCompute = 1;
constexpr int kExitConfig = 2;

struct Flag {
  const char* name;
  const char* section;
  const char* key;
  const char* help;
};

// Every flag is an override of a config key.
const Flag kFlags[] = {
    {"--metric", "metric", "kind", "Metric kind (euclidean, hyperbolic, schwarzschild, kottler, ...)"},
    {"--n", "metric", "n", "Dimension"},
    {"--m", "metric", "m", "Mass parameter"},
    {"--center", "metric", "center", "Center of a Schwarzschild metric, comma-separated"},
    {"--kernel", "run", "kernel", "Kernel function for ah-mass (V0..Vn)"},
    {"--field", "run", "field", "Conformal Killing field for verify (dilation, X0..Xn)"},
    {"--degree", "quadrature", "degree", "Quadrature degree of the flux integrals"},
    {"--r0", "radii", "start", "First radius of the schedule"},
    {"--ratio", "radii", "ratio", "Ratio between successive radii"},
    {"--count", "radii", "count", "Number of radii"},
    {"--out", "output", "dir", "Directory for report.json and per-charge CSV files"},
    {"--threads", "quadrature", "threads", "Worker threads (0: ASYM_THREADS or hardware)"},
    {"--seed", "run", "seed", "Seed for sampled checks"},
    {"--points", "run", "points", "Number of sample points for kernel checks"},
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw asym::app::ConfigError("cannot read config file '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace asym::app;

  CLI::App app{"Asymptotic mass and center-of-mass charges"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> sets;
  bool no_timings = false;
  bool quiet = false;
  app.add_option("--config", config_path, "Configuration file");
  app.add_option("--set", sets, "Override a config key: section.key=value")->take_all();
  app.add_flag("--no-timings", no_timings, "Leave wall-clock timings out of the report");
  app.add_flag("-q,--quiet", quiet, "No progress or summary on stderr");

  std::vector<std::string> values(std::size(kFlags));
  std::vector<CLI::Option*> opts;
  for (std::size_t i = 0; i < std::size(kFlags); ++i)
    opts.push_back(app.add_option(kFlags[i].name, values[i], kFlags[i].help));

  std::string check;
  auto* mass = app.add_subcommand("mass", "Classical and Ricci mass");
  auto* center = app.add_subcommand("center", "Classical and Ricci center of mass");
  auto* ah = app.add_subcommand("ah-mass", "Asymptotically hyperbolic mass charges");
  auto* verify = app.add_subcommand("verify", "Check an identity: pohozaev, kernel, equivalence");
  verify->add_option("check", check, "pohozaev, kernel or equivalence")
      ->check(CLI::IsMember({"pohozaev", "kernel", "equivalence"}));
  auto* sweep = app.add_subcommand("sweep", "Flux against radius as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    ConfigTable table;
    if (!config_path.empty()) {
      try {
        table = parse_table(read_file(config_path));
      } catch (const ConfigError& e) {
        throw ConfigError(config_path + ":" + e.what());
      }
    }
    if (mass->parsed()) table.set("run", "command", "mass");
    if (center->parsed()) table.set("run", "command", "center");
    if (ah->parsed()) table.set("run", "command", "ah-mass");
    if (sweep->parsed()) table.set("run", "command", "sweep");
    if (verify->parsed()) {
      table.set("run", "command", "verify");
      if (!check.empty()) table.set("run", "check", check);
    }
    if (!table.find("run") || !table.find("run")->find("command"))
      throw ConfigError("no command given (mass, center, ah-mass, verify, sweep)");
    for (std::size_t i = 0; i < std::size(kFlags); ++i)
      if (opts[i]->count() > 0) table.set(kFlags[i].section, kFlags[i].key, values[i]);
    if (no_timings) table.set("output", "timings", "false");
    for (const std::string& s : sets) apply_override(table, s);

    RunConfig config;
    try {
      config = load_config(table);
    } catch (const ConfigError& e) {
      if (!config_path.empty() && e.line() > 0) throw ConfigError(config_path + ":" + e.what());
      throw;
    }

    const RunReport report = run(config, quiet ? nullptr : &std::cerr);
    if (config.command == Command::sweep)
      std::cout << sweep_csv(report);
    else
      std::cout << to_json(report).dump(2) << '\n';
    if (!config.out_dir.empty()) write_outputs(report, config.out_dir);
    if (!quiet) std::cerr << report_text(report);
    return report.exit_code();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const asym::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCompute;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCompute;
  }
}
