#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "asym/app/config.hpp"
#include "asym/app/report.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace asym;
using namespace asym::app;
using Json = nlohmann::ordered_json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the tool with `args`, capturing stdout; stderr is discarded.
Run run_tool(const std::string& args) {
  const std::string cmd = std::string(ASYM_BINARY) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("asym_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

std::size_t error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return 0;
}

const char* kSample = R"(# Schwarzschild center of mass
[run]
command = center

[metric]
kind = schwarzschild
n = 3
m = 1
center = 1, 0.5, 0

[radii]
start = 8
ratio = 2
count = 4

; quadrature settings
[quadrature]
degree = 12

[charge.cx]
kind = com_classical
index = 1
)";

}  // namespace

TEST_CASE("config parsing") {
  const RunConfig c = parse_config(kSample);
  CHECK(c.command == Command::center);
  CHECK(c.metric.kind == MetricKind::schwarzschild_conformal);
  CHECK(c.metric.center[1] == 0.5);
  CHECK(c.radii.count == 4);
  CHECK(c.radii.radii() == std::vector<double>{8, 16, 32, 64});
  CHECK(c.degree == 12);
  REQUIRE(c.charges.size() == 1);
  CHECK(c.charges[0].name == "cx");
  CHECK(c.charges[0].spec.kind == ChargeKind::com_classical);
  CHECK(c.charges[0].spec.index == 0);

  const RunConfig k = parse_config("[run]\ncommand = ah-mass\n[metric]\nkind = kottler\nn = 4\nm = 2\n");
  CHECK(k.command == Command::ah_mass);
  CHECK(k.radii.start == 3.0);
  CHECK(requested_charges(k).size() == 10);

  const RunConfig e = parse_config(
      "[run]\ncommand = mass\n[metric]\nkind = expression\nn = 3\nparams = a=0.5\n"
      "g11 = (1 + a/r)^4\ng22 = (1 + a/r)^4\ng33 = (1 + a/r)^4\n");
  CHECK(e.metric.kind == MetricKind::expression);
  CHECK(e.metric.components.size() == 6);
  CHECK(e.metric.param_values == std::vector<double>{0.5});
  CHECK(requested_charges(e).size() == 2);
}

TEST_CASE("config errors carry positions") {
  CHECK(error_line("[run]\ncommand = mass\n[metric]\nkind = nope\n") == 4);
  CHECK(error_line("[run]\ncommand = mass\n[metric]\nkind = euclidean\nn = three\n") == 5);
  CHECK(error_line("[run]\ncommand = mass\n[bogus]\n") == 3);
  CHECK(error_line("[run]\ncommand = mass\n[metric]\nkind = euclidean\ncolour = red\n") == 5);
  CHECK(error_line("[run]\ncommand = mass\n[radii]\ncount = 2\n") == 4);
  CHECK(error_line("[run\n") == 1);
  CHECK(error_line("key without section = 1\n") == 1);
  CHECK(error_line("[run]\njust text\n") == 2);
  try {
    parse_config("[run]\ncommand = mass\n[metric]\nkind = expression\nn = 3\n"
                 "g11 = sinh(r\ng22 = 1\ng33 = 1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 6);
    CHECK(e.column() == 13);
    CHECK(std::string(e.what()).rfind("6:13:", 0) == 0);
  }
}

TEST_CASE("overrides") {
  ConfigTable t = parse_table(kSample);
  apply_override(t, "metric.m=2.5");
  apply_override(t, "charge.cx.index=2");
  apply_override(t, "fit.two_term=false");
  const RunConfig c = load_config(t);
  CHECK(c.metric.m == 2.5);
  CHECK(c.charges[0].spec.index == 1);
  CHECK_FALSE(c.fit.two_term);
  CHECK_THROWS_AS(apply_override(t, "nodot=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(t, "metric.m"), ConfigError);
}

TEST_CASE("config round trip") {
  const RunConfig c = parse_config(kSample);
  const std::string text = to_text(c);
  const RunConfig d = parse_config(text);
  CHECK(to_text(d) == text);
  // Through the JSON echo as well.
  const ConfigTable back = config_from_json(config_json(to_table(c)));
  CHECK(to_text(load_config(back)) == text);
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-20) == "1e-20");
  CHECK(std::stod(format_double(1.0 / 3)) == 1.0 / 3);
}

TEST_CASE("in-process report") {
  RunConfig c = parse_config("[run]\ncommand = mass\n[metric]\nkind = schwarzschild\nn = 3\nm = 1\n"
                             "[quadrature]\ndegree = 8\n");
  c.timings = false;
  const RunReport r = run(c);
  CHECK_FALSE(r.failed());
  CHECK(r.exit_code() == 0);
  REQUIRE(r.charges.size() == 2);
  CHECK(r.charges[0].series.limit == doctest::Approx(1.0).epsilon(1e-3));
  const Json j = to_json(r);
  for (const char* key : {"schema_version", "config", "charges", "diagnostics", "verdicts"})
    CHECK(j.contains(key));
  CHECK_FALSE(j.contains("timings"));
  CHECK(j["schema_version"] == 1);
  const std::string csv = series_csv(r.charges[0].series);
  CHECK(csv.rfind("r,raw_flux,normalized,quad_error\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
}

TEST_CASE("tool: mass commands") {
  const Run r = run_tool("mass --metric schwarzschild --n 3 --m 1 --degree 10 --no-timings");
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["schema_version"] == 1);
  CHECK(j["command"] == "mass");
  REQUIRE(j["charges"].size() == 2);
  for (const Json& c : j["charges"]) CHECK(c["limit"].get<double>() == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(j["config"].contains("metric"));
  CHECK_FALSE(j.contains("timings"));

  const Run e = run_tool("mass --metric euclidean --n 3 --degree 6");
  CHECK(e.code == 0);
  const Json je = Json::parse(e.out);
  for (const Json& c : je["charges"]) CHECK(c["limit"].get<double>() == 0.0);
  CHECK(je.contains("timings"));

  const Run ah = run_tool("ah-mass --metric kottler --n 3 --m 1 --kernel V0 --degree 10");
  CHECK(ah.code == 0);
  const Json ja = Json::parse(ah.out);
  REQUIRE(ja["charges"].size() == 2);
  CHECK(ja["charges"][0]["limit"].get<double>() == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("tool: config echo reparses") {
  const std::string path = temp_file("echo.cfg", kSample);
  const Run r = run_tool("--config " + path + " --no-timings");
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  const RunConfig again = load_config(config_from_json(j["config"]));
  RunConfig want = parse_config(kSample);
  want.timings = false;
  CHECK(to_text(again) == to_text(want));
}

TEST_CASE("tool: byte-identical reports across thread counts") {
  const std::string base = "center --metric schwarzschild --n 3 --m 1 --center 1,0.5,0 --degree 10 "
                           "--count 4 --no-timings --threads ";
  const Run a = run_tool(base + "1");
  const Run b = run_tool(base + "4");
  CHECK(a.code == 0);
  CHECK(b.code == 0);
  // The thread count is part of the config echo; compare everything else.
  Json ja = Json::parse(a.out);
  Json jb = Json::parse(b.out);
  ja["config"]["quadrature"].erase("threads");
  jb["config"]["quadrature"].erase("threads");
  CHECK(ja.dump() == jb.dump());
  const Run c = run_tool(base + "1");
  CHECK(c.out == a.out);
}

TEST_CASE("tool: sweep and outputs") {
  const auto dir = std::filesystem::temp_directory_path() / "asym_test_out";
  std::filesystem::remove_all(dir);
  const Run s = run_tool("sweep --metric euclidean --n 3 --degree 6 --count 3 --out " + dir.string());
  CHECK(s.code == 0);
  CHECK(s.out.rfind("charge,r,raw_flux,normalized,quad_error\n", 0) == 0);
  std::istringstream lines(s.out);
  std::string line;
  std::getline(lines, line);
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(line.find(",0,0,") != std::string::npos);
  }
  CHECK(rows == 6);
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK(std::filesystem::exists(dir / "mass_classical.csv"));

  const Run k = run_tool("sweep --metric kottler --n 3 --m 1 --degree 10");
  CHECK(k.code == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("tool: exit codes") {
  CHECK(run_tool("mass --metric nope").code == 2);
  CHECK(run_tool("mass --n").code == 2);
  CHECK(run_tool("--no-such-flag").code == 2);
  CHECK(run_tool("").code == 2);
  CHECK(run_tool("mass --metric euclidean --set radii.count=2").code == 2);
  const std::string bad = temp_file("bad.cfg", "[metric]\nkind = expression\nn = 3\ng11 = sinh(r\n");
  CHECK(run_tool("mass --config " + bad).code == 2);
  CHECK(run_tool("mass --config /nonexistent/asym.cfg").code == 2);
  // Flat charges on a hyperbolic metric fail at charge level.
  const Run h = run_tool("mass --metric kottler --n 3 --m 1 --degree 6");
  CHECK(h.code == 1);
  const Json j = Json::parse(h.out);
  CHECK(j["charges"][0]["status"] == "error");
  CHECK(run_tool("verify kernel --metric kottler --n 3 --m 1 --points 5").code == 1);
  CHECK(run_tool("verify kernel --metric euclidean --n 3 --field X1 --points 20").code == 0);
  CHECK(run_tool("verify pohozaev --metric hyperbolic_polar --n 3 --r0 1 --field X0 --degree 20").code ==
        0);
  CHECK(run_tool("verify equivalence --metric schwarzschild --n 3 --m 1 --degree 12").code == 0);
}
