#include "asym/app/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "asym/errors.hpp"
#include "asym/kernels.hpp"
#include "asym/quadrature.hpp"

namespace asym::app {
namespace {

std::string position_prefix(std::size_t line, std::size_t column) {
  if (line == 0) return {};
  return std::to_string(line) + ":" + std::to_string(column) + ": ";
}

std::string trim(const std::string& s, std::size_t* lead = nullptr) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  if (lead) *lead = b;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  return std::all_of(k.begin(), k.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

[[noreturn]] void fail_at(const ConfigEntry& e, const std::string& message) {
  throw ConfigError(e.key + ": " + message, e.line, e.column);
}

double to_double(const ConfigEntry& e) {
  const std::string& s = e.value;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    fail_at(e, "expected a number, got '" + s + "'");
  if (!std::isfinite(v)) fail_at(e, "value must be finite");
  return v;
}

template <typename Int>
Int to_integer(const ConfigEntry& e) {
  const std::string& s = e.value;
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    fail_at(e, "expected an integer, got '" + s + "'");
  return v;
}

bool to_bool(const ConfigEntry& e) {
  if (e.value == "true" || e.value == "yes" || e.value == "on" || e.value == "1") return true;
  if (e.value == "false" || e.value == "no" || e.value == "off" || e.value == "0") return false;
  fail_at(e, "expected true or false, got '" + e.value + "'");
}

// Key dispatch for one section; unknown keys are errors.
class SectionReader {
 public:
  SectionReader(const ConfigSection& s) : section_(s) {}

  void on(const std::string& key, std::function<void(const ConfigEntry&)> f) {
    handlers_[key] = std::move(f);
  }
  // Keys matching `accept` go to `f` when no exact handler exists.
  void on_pattern(std::function<bool(const std::string&)> accept,
                  std::function<void(const ConfigEntry&)> f) {
    patterns_.emplace_back(std::move(accept), std::move(f));
  }

  void run() const {
    for (const ConfigEntry& e : section_.entries) {
      if (auto it = handlers_.find(e.key); it != handlers_.end()) {
        it->second(e);
        continue;
      }
      bool done = false;
      for (const auto& [accept, f] : patterns_) {
        if (accept(e.key)) {
          f(e);
          done = true;
          break;
        }
      }
      if (!done)
        throw ConfigError("unknown key '" + e.key + "' in section [" + section_.name + "]", e.line,
                          1);
    }
  }

 private:
  const ConfigSection& section_;
  std::map<std::string, std::function<void(const ConfigEntry&)>> handlers_;
  std::vector<std::pair<std::function<bool(const std::string&)>,
                        std::function<void(const ConfigEntry&)>>>
      patterns_;
};

// "g12" / "h33" with 1-based indices i <= j <= n.
bool component_key(const std::string& key, char prefix, int n, int* i, int* j) {
  if (key.size() != 3 || key[0] != prefix) return false;
  if (!std::isdigit(static_cast<unsigned char>(key[1])) ||
      !std::isdigit(static_cast<unsigned char>(key[2])))
    return false;
  *i = key[1] - '0';
  *j = key[2] - '0';
  return *i >= 1 && *j >= 1 && *i <= n && *j <= n;
}

void load_metric(const ConfigSection& s, RunConfig& c) {
  MetricSpec& m = c.metric;
  // Dimension and kind first: components and centers depend on them.
  if (const ConfigEntry* e = s.find("kind")) {
    try {
      m.kind = metric_kind_from_string(e->value);
    } catch (const Error&) {
      fail_at(*e, "unknown metric kind '" + e->value + "'");
    }
  }
  if (const ConfigEntry* e = s.find("n")) {
    m.n = to_integer<int>(*e);
    if (m.n < 3 || m.n > kMaxDim)
      fail_at(*e, "dimension must be between 3 and " + std::to_string(kMaxDim));
  }
  if (const ConfigEntry* e = s.find("base")) {
    try {
      m.base = metric_kind_from_string(e->value);
    } catch (const Error&) {
      fail_at(*e, "unknown metric kind '" + e->value + "'");
    }
  }
  if (const ConfigEntry* e = s.find("chart")) {
    try {
      m.expr_chart = chart_kind_from_string(e->value);
    } catch (const Error&) {
      fail_at(*e, "unknown chart '" + e->value + "'");
    }
  }
  // Catalog decay rates unless overridden below.
  if (m.kind == MetricKind::schwarzschild_conformal) m.decay = m.n - 2;
  if (m.kind == MetricKind::kottler) m.decay = m.n;

  const bool user = m.kind == MetricKind::perturbation || m.kind == MetricKind::expression;
  const char prefix = m.kind == MetricKind::expression ? 'g' : 'h';
  std::vector<const ConfigEntry*> comps(static_cast<std::size_t>(m.n * (m.n + 1) / 2), nullptr);

  SectionReader r(s);
  for (const char* k : {"kind", "n", "base", "chart"}) r.on(k, [](const ConfigEntry&) {});
  r.on("m", [&](const ConfigEntry& e) { m.m = to_double(e); });
  r.on("decay", [&](const ConfigEntry& e) {
    m.decay = to_double(e);
    if (m.decay < 0.0) fail_at(e, "decay rate must be non-negative");
  });
  r.on("center", [&](const ConfigEntry& e) {
    const auto parts = split(e.value, ',');
    if (static_cast<int>(parts.size()) != m.n)
      fail_at(e, "expected " + std::to_string(m.n) + " comma-separated numbers");
    for (int i = 0; i < m.n; ++i) {
      ConfigEntry part = e;
      part.value = parts[static_cast<std::size_t>(i)];
      m.center[static_cast<std::size_t>(i)] = to_double(part);
    }
  });
  r.on("params", [&](const ConfigEntry& e) {
    m.param_names.clear();
    m.param_values.clear();
    if (trim(e.value).empty()) return;
    for (const std::string& item : split(e.value, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) fail_at(e, "expected name=value, got '" + item + "'");
      ConfigEntry v = e;
      v.value = trim(item.substr(eq + 1));
      const std::string name = trim(item.substr(0, eq));
      if (name.empty()) fail_at(e, "empty parameter name");
      if (std::find(m.param_names.begin(), m.param_names.end(), name) != m.param_names.end())
        fail_at(e, "duplicate parameter '" + name + "'");
      m.param_names.push_back(name);
      m.param_values.push_back(to_double(v));
    }
  });
  r.on_pattern(
      [&](const std::string& key) {
        int i = 0, j = 0;
        return user && component_key(key, prefix, m.n, &i, &j);
      },
      [&](const ConfigEntry& e) {
        int i = 0, j = 0;
        component_key(e.key, prefix, m.n, &i, &j);
        if (i > j) fail_at(e, "give the upper triangle only (i <= j)");
        comps[static_cast<std::size_t>(component_index(i - 1, j - 1, m.n))] = &e;
      });
  r.run();

  if (!user) return;
  if (m.kind == MetricKind::perturbation &&
      (m.base == MetricKind::perturbation || m.base == MetricKind::expression))
    throw ConfigError("perturbation base must be a catalog metric", s.line, 1);
  const ChartKind chart = chart_of(m);
  m.components.clear();
  for (int i = 0; i < m.n; ++i) {
    for (int j = i; j < m.n; ++j) {
      const std::string key = std::string(1, prefix) + std::to_string(i + 1) + std::to_string(j + 1);
      const ConfigEntry* e = comps[static_cast<std::size_t>(component_index(i, j, m.n))];
      std::string text = e ? e->value : std::string();
      if (!e) {
        if (m.kind == MetricKind::expression && i == j)
          throw ConfigError("missing diagonal component '" + key + "'", s.line, 1);
        text = "0";
      }
      try {
        m.components.push_back(parse(text, m.n, chart, m.param_names));
      } catch (const ParseError& err) {
        const std::size_t col = e ? e->column + err.offset() - 1 : 1;
        throw ConfigError(key + ": " + err.message(), e ? e->line : s.line, col);
      } catch (const Error& err) {
        throw ConfigError(key + ": " + err.what(), e ? e->line : s.line, e ? e->column : 1);
      }
      if (e) c.component_text[key] = text;
    }
  }
}

void load_charge(const ConfigSection& s, RunConfig& c) {
  NamedCharge nc;
  nc.name = s.name.substr(std::string("charge.").size());
  if (nc.name.empty() || !valid_key(nc.name))
    throw ConfigError("invalid charge section name [" + s.name + "]", s.line, 1);
  bool have_kind = false;
  std::optional<int> index;
  const ConfigEntry* index_entry = nullptr;
  SectionReader r(s);
  r.on("kind", [&](const ConfigEntry& e) {
    try {
      nc.spec.kind = charge_kind_from_string(e.value);
    } catch (const Error&) {
      fail_at(e, "unknown charge kind '" + e.value + "'");
    }
    have_kind = true;
  });
  r.on("index", [&](const ConfigEntry& e) {
    index = to_integer<int>(e);
    index_entry = &e;
  });
  r.on("measure", [&](const ConfigEntry& e) {
    if (e.value == "background")
      nc.spec.measure = NormalMeasure::background;
    else if (e.value == "metric")
      nc.spec.measure = NormalMeasure::metric;
    else
      fail_at(e, "expected background or metric, got '" + e.value + "'");
  });
  r.run();
  if (!have_kind) throw ConfigError("charge section [" + s.name + "] needs a kind", s.line, 1);
  const ChargeKind k = nc.spec.kind;
  const bool com = k == ChargeKind::com_classical || k == ChargeKind::com_ricci;
  const bool ah = k == ChargeKind::ah_mass || k == ChargeKind::ah_ricci;
  if (index && !com && !ah) fail_at(*index_entry, "this charge kind takes no index");
  if (com) {
    // The config names coordinates x1..xn.
    const int a = index.value_or(1);
    if (a < 1 || a > c.metric.n)
      throw ConfigError("coordinate index must be between 1 and " + std::to_string(c.metric.n),
                        index_entry ? index_entry->line : s.line,
                        index_entry ? index_entry->column : 1);
    nc.spec.index = a - 1;
  }
  if (ah) {
    const int i = index.value_or(0);
    if (i < 0 || i > c.metric.n)
      throw ConfigError("kernel index must be between 0 and " + std::to_string(c.metric.n),
                        index_entry ? index_entry->line : s.line,
                        index_entry ? index_entry->column : 1);
    nc.spec.index = i;
  }
  for (const NamedCharge& other : c.charges)
    if (other.name == nc.name)
      throw ConfigError("duplicate charge '" + nc.name + "'", s.line, 1);
  c.charges.push_back(std::move(nc));
}

void check_degree(const ConfigEntry& e, int d) {
  if (d < 2 || d > kMaxDegree)
    fail_at(e, "quadrature degree must be between 2 and " + std::to_string(kMaxDegree));
}

}  // namespace

ConfigError::ConfigError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(position_prefix(line, column) + message),
      message_(message),
      line_(line),
      column_(column) {}

const ConfigEntry* ConfigSection::find(const std::string& key) const {
  for (const ConfigEntry& e : entries)
    if (e.key == key) return &e;
  return nullptr;
}

const ConfigSection* ConfigTable::find(const std::string& name) const {
  for (const ConfigSection& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

void ConfigTable::set(const std::string& section, const std::string& key,
                      const std::string& value) {
  auto it = std::find_if(sections.begin(), sections.end(),
                         [&](const ConfigSection& s) { return s.name == section; });
  if (it == sections.end()) {
    sections.push_back({section, 0, {}});
    it = sections.end() - 1;
  }
  for (ConfigEntry& e : it->entries) {
    if (e.key == key) {
      e.value = value;
      e.line = 0;
      e.column = 0;
      return;
    }
  }
  it->entries.push_back({key, value, 0, 0});
}

ConfigTable parse_table(const std::string& text) {
  ConfigTable table;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  ConfigSection* current = nullptr;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::size_t lead = 0;
    const std::string s = trim(raw, &lead);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s[0] == '[') {
      if (s.back() != ']') throw ConfigError("unterminated section header", line, lead + s.size());
      const std::string name = trim(s.substr(1, s.size() - 2));
      if (!valid_key(name)) throw ConfigError("invalid section name", line, lead + 2);
      if (table.find(name)) throw ConfigError("duplicate section [" + name + "]", line, lead + 1);
      table.sections.push_back({name, line, {}});
      current = &table.sections.back();
      continue;
    }
    const auto eq = raw.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line, lead + 1);
    if (!current) throw ConfigError("key outside of a section", line, lead + 1);
    const std::string key = trim(raw.substr(0, eq));
    if (!valid_key(key)) throw ConfigError("invalid key '" + key + "'", line, lead + 1);
    if (current->find(key))
      throw ConfigError("duplicate key '" + key + "' in [" + current->name + "]", line, lead + 1);
    std::size_t vlead = 0;
    const std::string value = trim(raw.substr(eq + 1), &vlead);
    current->entries.push_back({key, value, line, eq + 2 + vlead});
  }
  return table;
}

void apply_override(ConfigTable& table, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override '" + assignment + "' is not of the form section.key=value");
  const std::string path = trim(assignment.substr(0, eq));
  const auto dot = path.rfind('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == path.size())
    throw ConfigError("override '" + assignment + "' is not of the form section.key=value");
  const std::string section = path.substr(0, dot), key = path.substr(dot + 1);
  if (!valid_key(section) || !valid_key(key))
    throw ConfigError("override '" + assignment + "' has an invalid section or key");
  table.set(section, key, trim(assignment.substr(eq + 1)));
}

std::string to_string(Command c) {
  switch (c) {
    case Command::mass:
      return "mass";
    case Command::center:
      return "center";
    case Command::ah_mass:
      return "ah-mass";
    case Command::verify:
      return "verify";
    case Command::sweep:
      return "sweep";
  }
  return "?";
}

std::string to_string(VerifyCheck c) {
  switch (c) {
    case VerifyCheck::pohozaev:
      return "pohozaev";
    case VerifyCheck::kernel:
      return "kernel";
    case VerifyCheck::equivalence:
      return "equivalence";
  }
  return "?";
}

std::optional<Command> command_from_string(const std::string& s) {
  for (Command c : {Command::mass, Command::center, Command::ah_mass, Command::verify,
                    Command::sweep})
    if (s == to_string(c)) return c;
  return std::nullopt;
}

std::optional<VerifyCheck> verify_check_from_string(const std::string& s) {
  for (VerifyCheck c : {VerifyCheck::pohozaev, VerifyCheck::kernel, VerifyCheck::equivalence})
    if (s == to_string(c)) return c;
  return std::nullopt;
}

std::vector<double> RadiiSchedule::radii() const { return geometric_radii(start, ratio, count); }

ChargeOptions RunConfig::charge_options() const {
  ChargeOptions o;
  o.degree = degree;
  o.quad.threads = threads;
  o.fit = fit;
  o.hint_decay = hint_decay;
  return o;
}

RunConfig load_config(const ConfigTable& table) {
  RunConfig c;
  static const std::set<std::string> known = {"run",        "metric", "radii",  "quadrature",
                                              "fit",        "tolerances", "output"};
  for (const ConfigSection& s : table.sections)
    if (!known.count(s.name) && s.name.rfind("charge.", 0) != 0)
      throw ConfigError("unknown section [" + s.name + "]", s.line, 1);

  static const ConfigSection empty;
  auto section = [&](const std::string& name) -> const ConfigSection& {
    const ConfigSection* s = table.find(name);
    return s ? *s : empty;
  };

  load_metric(section("metric"), c);
  {
    const ConfigSection& ms = section("metric");
    try {
      validate(c.metric);
    } catch (const Error& e) {
      throw ConfigError(std::string("invalid metric: ") + e.what(), ms.line, ms.line ? 1 : 0);
    }
  }
  c.radii.start = is_hyperbolic(c.metric) ? 3.0 : 8.0;

  {
    SectionReader r(section("run"));
    r.on("command", [&](const ConfigEntry& e) {
      const auto cmd = command_from_string(e.value);
      if (!cmd) fail_at(e, "unknown command '" + e.value + "'");
      c.command = *cmd;
    });
    r.on("check", [&](const ConfigEntry& e) {
      const auto chk = verify_check_from_string(e.value);
      if (!chk) fail_at(e, "unknown check '" + e.value + "' (pohozaev, kernel, equivalence)");
      c.check = *chk;
    });
    r.on("kernel", [&](const ConfigEntry& e) {
      if (e.value.empty()) return;
      try {
        kernel_from_name(e.value, c.metric);
      } catch (const Error& err) {
        fail_at(e, err.what());
      }
      c.kernel = e.value;
    });
    r.on("field", [&](const ConfigEntry& e) {
      if (e.value.empty()) return;
      try {
        field_from_name(e.value, c.metric);
      } catch (const Error& err) {
        fail_at(e, err.what());
      }
      c.field = e.value;
    });
    r.on("seed", [&](const ConfigEntry& e) { c.seed = to_integer<std::uint64_t>(e); });
    r.on("points", [&](const ConfigEntry& e) {
      c.points = to_integer<int>(e);
      if (c.points < 1) fail_at(e, "need at least one sample point");
    });
    r.on("sample_rmin", [&](const ConfigEntry& e) { c.sample_rmin = to_double(e); });
    r.on("sample_rmax", [&](const ConfigEntry& e) { c.sample_rmax = to_double(e); });
    r.on("annulus_r0", [&](const ConfigEntry& e) { c.annulus_r0 = to_double(e); });
    r.on("annulus_r1", [&](const ConfigEntry& e) { c.annulus_r1 = to_double(e); });
    r.run();
    const ConfigSection& rs = section("run");
    if (!(c.sample_rmin > 0.0 && c.sample_rmax >= c.sample_rmin))
      throw ConfigError("sample radii must satisfy 0 < sample_rmin <= sample_rmax", rs.line, 1);
    if (c.annulus_r0 < 0.0 || c.annulus_r1 < 0.0)
      throw ConfigError("annulus radii must be non-negative", rs.line, 1);
  }
  {
    SectionReader r(section("radii"));
    r.on("start", [&](const ConfigEntry& e) {
      c.radii.start = to_double(e);
      if (!(c.radii.start > 0.0)) fail_at(e, "start radius must be positive");
    });
    r.on("ratio", [&](const ConfigEntry& e) {
      c.radii.ratio = to_double(e);
      if (!(c.radii.ratio > 1.0)) fail_at(e, "ratio must exceed 1");
    });
    r.on("count", [&](const ConfigEntry& e) {
      c.radii.count = to_integer<int>(e);
      if (c.radii.count < 3) fail_at(e, "the schedule needs at least 3 radii");
    });
    r.run();
    const double top = c.radii.start * std::pow(c.radii.ratio, c.radii.count - 1);
    const double limit = is_hyperbolic(c.metric) ? 300.0 : 1e12;
    if (!(top <= limit)) {
      const ConfigSection& rs = section("radii");
      throw ConfigError("largest radius " + format_double(top) + " exceeds " +
                            format_double(limit),
                        rs.line, rs.line ? 1 : 0);
    }
  }
  {
    SectionReader r(section("quadrature"));
    r.on("degree", [&](const ConfigEntry& e) {
      c.degree = to_integer<int>(e);
      check_degree(e, c.degree);
    });
    r.on("identity_degree", [&](const ConfigEntry& e) {
      c.identity_degree = to_integer<int>(e);
      check_degree(e, c.identity_degree);
    });
    r.on("threads", [&](const ConfigEntry& e) {
      c.threads = to_integer<int>(e);
      if (c.threads < 0) fail_at(e, "thread count must be non-negative");
    });
    r.run();
  }
  {
    SectionReader r(section("fit"));
    r.on("sigma", [&](const ConfigEntry& e) {
      if (e.value == "auto") {
        c.fit.sigma.reset();
        return;
      }
      const double s = to_double(e);
      if (!(s > 0.0)) fail_at(e, "decay exponent must be positive");
      c.fit.sigma = s;
    });
    r.on("two_term", [&](const ConfigEntry& e) { c.fit.two_term = to_bool(e); });
    r.on("hint_decay", [&](const ConfigEntry& e) { c.hint_decay = to_bool(e); });
    r.run();
  }
  {
    SectionReader r(section("tolerances"));
    r.on("abs", [&](const ConfigEntry& e) {
      c.tol.abs_tol = to_double(e);
      if (c.tol.abs_tol < 0.0) fail_at(e, "tolerance must be non-negative");
    });
    r.on("rel", [&](const ConfigEntry& e) {
      c.tol.rel_tol = to_double(e);
      if (c.tol.rel_tol < 0.0) fail_at(e, "tolerance must be non-negative");
    });
    r.run();
  }
  {
    SectionReader r(section("output"));
    r.on("dir", [&](const ConfigEntry& e) { c.out_dir = e.value; });
    r.on("timings", [&](const ConfigEntry& e) { c.timings = to_bool(e); });
    r.run();
  }
  for (const ConfigSection& s : table.sections)
    if (s.name.rfind("charge.", 0) == 0) load_charge(s, c);
  return c;
}

RunConfig parse_config(const std::string& text) { return load_config(parse_table(text)); }

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

ConfigTable to_table(const RunConfig& c) {
  ConfigTable t;
  auto put = [&](const std::string& s, const std::string& k, const std::string& v) {
    t.set(s, k, v);
  };
  const MetricSpec& m = c.metric;

  put("run", "command", to_string(c.command));
  put("run", "check", to_string(c.check));
  put("run", "kernel", c.kernel);
  put("run", "field", c.field);
  put("run", "seed", std::to_string(c.seed));
  put("run", "points", std::to_string(c.points));
  put("run", "sample_rmin", format_double(c.sample_rmin));
  put("run", "sample_rmax", format_double(c.sample_rmax));
  put("run", "annulus_r0", format_double(c.annulus_r0));
  put("run", "annulus_r1", format_double(c.annulus_r1));

  put("metric", "kind", std::string(to_string(m.kind)));
  put("metric", "n", std::to_string(m.n));
  put("metric", "m", format_double(m.m));
  std::string center;
  for (int i = 0; i < m.n; ++i)
    center += (i ? ", " : "") + format_double(m.center[static_cast<std::size_t>(i)]);
  put("metric", "center", center);
  put("metric", "decay", format_double(m.decay));
  if (m.kind == MetricKind::perturbation) put("metric", "base", std::string(to_string(m.base)));
  if (m.kind == MetricKind::expression)
    put("metric", "chart", std::string(to_string(m.expr_chart)));
  if (!m.param_names.empty()) {
    std::string params;
    for (std::size_t i = 0; i < m.param_names.size(); ++i)
      params += (i ? ", " : "") + m.param_names[i] + "=" + format_double(m.param_values[i]);
    put("metric", "params", params);
  }
  for (const auto& [key, text] : c.component_text) put("metric", key, text);

  put("radii", "start", format_double(c.radii.start));
  put("radii", "ratio", format_double(c.radii.ratio));
  put("radii", "count", std::to_string(c.radii.count));

  put("quadrature", "degree", std::to_string(c.degree));
  put("quadrature", "identity_degree", std::to_string(c.identity_degree));
  put("quadrature", "threads", std::to_string(c.threads));

  put("fit", "sigma", c.fit.sigma ? format_double(*c.fit.sigma) : "auto");
  put("fit", "two_term", c.fit.two_term ? "true" : "false");
  put("fit", "hint_decay", c.hint_decay ? "true" : "false");

  put("tolerances", "abs", format_double(c.tol.abs_tol));
  put("tolerances", "rel", format_double(c.tol.rel_tol));

  put("output", "dir", c.out_dir);
  put("output", "timings", c.timings ? "true" : "false");

  for (const NamedCharge& nc : c.charges) {
    const std::string s = "charge." + nc.name;
    put(s, "kind", std::string(to_string(nc.spec.kind)));
    const ChargeKind k = nc.spec.kind;
    if (k == ChargeKind::com_classical || k == ChargeKind::com_ricci)
      put(s, "index", std::to_string(nc.spec.index + 1));
    if (k == ChargeKind::ah_mass || k == ChargeKind::ah_ricci)
      put(s, "index", std::to_string(nc.spec.index));
    if (nc.spec.measure) put(s, "measure", std::string(to_string(*nc.spec.measure)));
  }
  return t;
}

std::string to_text(const ConfigTable& table) {
  std::string out;
  for (const ConfigSection& s : table.sections) {
    if (!out.empty()) out += "\n";
    out += "[" + s.name + "]\n";
    for (const ConfigEntry& e : s.entries) out += e.key + " = " + e.value + "\n";
  }
  return out;
}

std::string to_text(const RunConfig& config) { return to_text(to_table(config)); }

std::vector<NamedCharge> requested_charges(const RunConfig& c) {
  if (!c.charges.empty()) return c.charges;
  std::vector<NamedCharge> out;
  auto add = [&](ChargeKind k, int index) {
    ChargeSpec s{k, index, std::nullopt};
    out.push_back({s.name(), s});
  };
  const int n = c.metric.n;
  const bool hyp = is_hyperbolic(c.metric);
  switch (c.command) {
    case Command::mass:
      add(ChargeKind::mass_classical, 0);
      add(ChargeKind::mass_ricci, 0);
      break;
    case Command::center:
      add(ChargeKind::mass_classical, 0);
      for (int a = 0; a < n; ++a) add(ChargeKind::com_classical, a);
      for (int a = 0; a < n; ++a) add(ChargeKind::com_ricci, a);
      break;
    case Command::ah_mass:
      if (!c.kernel.empty()) {
        const KernelFunction k = kernel_from_name(c.kernel, c.metric);
        const int i = k.id == KernelId::ah_valpha || k.id == KernelId::coordinate ? k.alpha + 1 : 0;
        add(ChargeKind::ah_mass, i);
        add(ChargeKind::ah_ricci, i);
      } else {
        for (int i = 0; i <= n; ++i) add(ChargeKind::ah_mass, i);
        for (int i = 0; i <= n; ++i) add(ChargeKind::ah_ricci, i);
      }
      break;
    case Command::sweep:
      if (hyp) {
        add(ChargeKind::ah_mass, 0);
        add(ChargeKind::ah_ricci, 0);
      } else {
        add(ChargeKind::mass_classical, 0);
        add(ChargeKind::mass_ricci, 0);
      }
      break;
    case Command::verify:
      break;
  }
  return out;
}

}  // namespace asym::app
