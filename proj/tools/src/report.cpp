#include "asym/app/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "asym/errors.hpp"
#include "asym/kernels.hpp"

namespace asym::app {
namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Json vec_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

Json strings_json(const std::vector<std::string>& v) {
  Json a = Json::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

Json fit_json(const FitResult& f) {
  Json j;
  j["model"] = std::string(to_string(f.model));
  j["limit"] = f.limit;
  j["error"] = f.error;
  j["sigma"] = f.sigma;
  j["sigma_fitted"] = f.sigma_fitted;
  j["coefficients"] = vec_json(f.coefficients);
  j["residuals"] = vec_json(f.residuals);
  j["residual_error"] = f.residual_error;
  j["drop_error"] = f.drop_error;
  j["quadrature_error"] = f.quadrature_error;
  return j;
}

Json series_json(const RadialSeries& s) {
  Json j;
  j["limit"] = s.limit;
  j["limit_error"] = s.limit_error;
  j["fit"] = fit_json(s.fit);
  Json samples = Json::array();
  for (const FluxSample& x : s.samples)
    samples.push_back(
        {{"r", x.r}, {"raw_flux", x.raw_flux}, {"normalized", x.normalized}, {"quad_error", x.quad_error}});
  j["samples"] = samples;
  return j;
}

Json decay_json(const DecayReport& d) {
  return {{"radii", vec_json(d.radii)},
          {"sup_deviation", vec_json(d.sup_deviation)},
          {"vanishing", d.vanishing},
          {"tau", d.tau},
          {"threshold", d.threshold},
          {"above_threshold", d.above_threshold}};
}

Json rt_json(const RtReport& r) {
  return {{"radii", vec_json(r.radii)}, {"odd_sup", vec_json(r.odd_sup)},
          {"vanishing", r.vanishing},   {"exponent", r.exponent},
          {"required", r.required},     {"tau", r.tau},
          {"pass", r.pass}};
}

Json row_json(const EquivalenceRow& r) {
  return {{"name", r.name},
          {"classical", r.classical.limit},
          {"classical_error", r.classical.limit_error},
          {"ricci", r.ricci.limit},
          {"ricci_error", r.ricci.limit_error},
          {"difference", r.difference},
          {"combined_error", r.combined_error},
          {"pass", r.pass},
          {"warnings", strings_json(r.warnings)}};
}

Json identity_json(const IdentityReport& r) {
  return {{"name", r.name},
          {"lhs", r.lhs},
          {"rhs", r.rhs},
          {"residual", r.residual},
          {"scale", r.scale},
          {"relative_residual", r.relative_residual},
          {"lhs_error", r.lhs_error},
          {"rhs_error", r.rhs_error},
          {"killing_defect", r.killing_defect},
          {"pass", r.pass},
          {"warnings", strings_json(r.warnings)}};
}

Json kernel_json(const KernelReport& r) {
  return {{"name", r.name},
          {"lambda", r.lambda},
          {"einstein_defect", r.einstein_defect},
          {"max_residual", r.max_residual},
          {"max_trace_residual", r.max_trace_residual},
          {"samples", r.samples},
          {"pass", r.pass}};
}

Json pairing_json(const PairingReport& r) {
  return {{"name", r.name},
          {"max_dscal_adjoint", r.max_dscal_adjoint},
          {"max_pairing", r.max_pairing},
          {"max_killing", r.max_killing},
          {"samples", r.samples},
          {"pass", r.pass}};
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void note(std::ostream* log, const std::string& line) {
  if (log) *log << line << '\n';
}

// Name of the classical/Ricci pair a charge belongs to, and whether it is
// the classical member.
std::optional<std::pair<std::string, bool>> pair_of(const ChargeSpec& c) {
  switch (c.kind) {
    case ChargeKind::mass_classical:
      return std::pair{std::string("mass"), true};
    case ChargeKind::mass_ricci:
      return std::pair{std::string("mass"), false};
    case ChargeKind::com_classical:
      return std::pair{"center.x" + std::to_string(c.index + 1), true};
    case ChargeKind::com_ricci:
      return std::pair{"center.x" + std::to_string(c.index + 1), false};
    case ChargeKind::ah_mass:
      return std::pair{"M[V" + std::to_string(c.index) + "]", true};
    case ChargeKind::ah_ricci:
      return std::pair{"M[V" + std::to_string(c.index) + "]", false};
  }
  return std::nullopt;
}

void run_charges(const RunConfig& cfg, RunReport& rep, std::ostream* log) {
  const std::vector<double> radii = cfg.radii.radii();
  const ChargeOptions opts = cfg.charge_options();
  for (const NamedCharge& nc : requested_charges(cfg)) {
    ChargeResult res;
    res.charge = nc;
    res.normalization = normalization(nc.spec, cfg.metric.n);
    const auto t0 = Clock::now();
    try {
      check_applicable(cfg.metric, nc.spec);
      res.series = charge_series(cfg.metric, nc.spec, radii, opts);
      res.ok = true;
      note(log, nc.name + " = " + format_double(res.series.limit) + " +- " +
                    sci(res.series.limit_error));
    } catch (const Error& e) {
      res.error = e.what();
      note(log, nc.name + ": error: " + res.error);
    }
    res.seconds = since(t0);
    rep.charges.push_back(std::move(res));
  }

  // Centers divided by the classical mass, when it was computed.
  const ChargeResult* mass = nullptr;
  for (const ChargeResult& r : rep.charges)
    if (r.ok && r.charge.spec.kind == ChargeKind::mass_classical) mass = &r;
  std::vector<std::string> warnings;
  for (ChargeResult& r : rep.charges) {
    const ChargeKind k = r.charge.spec.kind;
    if (!r.ok || (k != ChargeKind::com_classical && k != ChargeKind::com_ricci)) continue;
    if (!mass) {
      warnings.push_back(r.charge.name + ": no classical mass to normalize by");
      continue;
    }
    const double m = mass->series.limit, em = mass->series.limit_error;
    if (std::fabs(m) <= std::max(em, kEquivalenceFloor)) {
      warnings.push_back(r.charge.name + ": mass is zero within its error; not normalized");
      continue;
    }
    r.normalized_limit = r.series.limit / m;
    r.normalized_error =
        r.series.limit_error / std::fabs(m) + std::fabs(r.series.limit) * em / (m * m);
  }

  // Classical against Ricci for every complete pair.
  Json rows = Json::array();
  std::vector<std::string> seen;
  for (const ChargeResult& a : rep.charges) {
    const auto pa = pair_of(a.charge.spec);
    if (!a.ok || !pa || !pa->second) continue;
    if (std::find(seen.begin(), seen.end(), pa->first) != seen.end()) continue;
    for (const ChargeResult& b : rep.charges) {
      const auto pb = pair_of(b.charge.spec);
      if (!b.ok || !pb || pb->second || pb->first != pa->first) continue;
      const EquivalenceRow row = compare_charges(pa->first, a.series, b.series);
      rows.push_back(row_json(row));
      rep.verdicts.push_back({"equivalence:" + row.name, row.pass,
                              "difference " + sci(row.difference) + ", combined error " +
                                  sci(row.combined_error)});
      seen.push_back(pa->first);
      break;
    }
  }
  rep.diagnostics["equivalence"] = rows;

  try {
    const DecayReport d = decay_rate(cfg.metric, radii);
    rep.diagnostics["decay"] = decay_json(d);
    if (!d.vanishing && !d.above_threshold)
      warnings.push_back("measured decay rate " + format_double(d.tau) + " does not exceed " +
                         format_double(d.threshold));
  } catch (const Error& e) {
    warnings.push_back(std::string("decay rate: ") + e.what());
  }
  if (cfg.command == Command::center && !is_hyperbolic(cfg.metric)) {
    try {
      const RtReport rt = rt_diagnostics(cfg.metric, radii);
      rep.diagnostics["rt"] = rt_json(rt);
      rep.verdicts.push_back({"rt", rt.pass,
                              "exponent " + format_double(rt.exponent) + ", required " +
                                  format_double(rt.required)});
    } catch (const Error& e) {
      warnings.push_back(std::string("parity check: ") + e.what());
    }
  }
  rep.diagnostics["warnings"] = strings_json(warnings);
}

void run_pohozaev(const RunConfig& cfg, RunReport& rep, std::ostream* log) {
  const double r0 = cfg.annulus_r0 > 0.0 ? cfg.annulus_r0 : cfg.radii.start;
  const double r1 = cfg.annulus_r1 > 0.0 ? cfg.annulus_r1 : 2.0 * r0;
  std::vector<ConformalKilling> fields;
  if (cfg.field.empty())
    fields = conformal_basis(cfg.metric);
  else
    fields.push_back(field_from_name(cfg.field, cfg.metric));
  Json out = Json::array();
  for (const ConformalKilling& x : fields) {
    const std::string name = "pohozaev[" + x.name() + "]";
    try {
      const IdentityReport r =
          pohozaev_check(cfg.metric, x, r0, r1, cfg.identity_degree, cfg.tol, {cfg.threads});
      out.push_back(identity_json(r));
      rep.verdicts.push_back(
          {name, r.pass, "relative residual " + sci(r.relative_residual)});
      note(log, name + ": lhs " + format_double(r.lhs) + ", rhs " + format_double(r.rhs));
    } catch (const Error& e) {
      rep.errors.push_back(name + ": " + e.what());
      rep.verdicts.push_back({name, false, e.what()});
    }
  }
  rep.diagnostics["annulus"] = {r0, r1};
  rep.diagnostics["identities"] = out;
}

void run_kernel(const RunConfig& cfg, RunReport& rep, std::ostream* log) {
  std::vector<ConformalKilling> fields;
  if (cfg.field.empty())
    fields = conformal_basis(cfg.metric);
  else
    fields.push_back(field_from_name(cfg.field, cfg.metric));
  const std::vector<ChartPoint> pts =
      sample_points(cfg.metric, cfg.points, cfg.seed, cfg.sample_rmin, cfg.sample_rmax);
  Json identities = Json::array();
  for (const ConformalKilling& x : fields) {
    const std::string name = "kernel[" + x.name() + "]";
    try {
      const KernelReport r = kernel_identity_check(cfg.metric, x, pts, cfg.tol);
      identities.push_back(kernel_json(r));
      rep.verdicts.push_back({name, r.pass,
                              "max residual " + sci(r.max_residual) + ", trace residual " +
                                  sci(r.max_trace_residual)});
      note(log, name + ": max residual " + sci(r.max_residual));
    } catch (const Error& e) {
      rep.errors.push_back(name + ": " + e.what());
      rep.verdicts.push_back({name, false, e.what()});
    }
  }
  rep.diagnostics["kernel"] = identities;
  Json pairing = Json::array();
  try {
    for (const PairingReport& r : kernel_pairing_check(cfg.metric, pts, cfg.tol)) {
      pairing.push_back(pairing_json(r));
      rep.verdicts.push_back({"pairing[" + r.name + "]", r.pass,
                              "adjoint " + sci(r.max_dscal_adjoint) + ", pairing " +
                                  sci(r.max_pairing)});
    }
  } catch (const Error& e) {
    rep.errors.push_back(std::string("pairing: ") + e.what());
    rep.verdicts.push_back({"pairing", false, e.what()});
  }
  rep.diagnostics["pairing"] = pairing;
}

void run_equivalence(const RunConfig& cfg, RunReport& rep, std::ostream* log) {
  const std::vector<double> radii = cfg.radii.radii();
  try {
    const EquivalenceReport e = equivalence_report(cfg.metric, radii, cfg.charge_options());
    Json rows = Json::array();
    for (const EquivalenceRow& r : e.rows) {
      rows.push_back(row_json(r));
      rep.verdicts.push_back({"equivalence:" + r.name, r.pass,
                              "difference " + sci(r.difference) + ", combined error " +
                                  sci(r.combined_error)});
      note(log, r.name + ": classical " + format_double(r.classical.limit) + ", ricci " +
                    format_double(r.ricci.limit));
      for (int side = 0; side < 2; ++side) {
        ChargeResult c;
        c.charge.name = r.name + (side ? ".ricci" : ".classical");
        c.ok = true;
        c.series = side ? r.ricci : r.classical;
        rep.charges.push_back(std::move(c));
      }
    }
    rep.diagnostics["equivalence"] = rows;
    rep.diagnostics["decay"] = decay_json(e.decay);
    if (e.rt) rep.diagnostics["rt"] = rt_json(*e.rt);
    rep.diagnostics["scal_proxy"] = vec_json(e.scal_proxy);
    rep.diagnostics["scal_integrable"] = e.scal_integrable;
    rep.diagnostics["warnings"] = strings_json(e.warnings);
  } catch (const Error& e) {
    rep.errors.push_back(std::string("equivalence: ") + e.what());
    rep.verdicts.push_back({"equivalence", false, e.what()});
  }
}

std::string csv_line(const FluxSample& s) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g", s.r, s.raw_flux, s.normalized,
                s.quad_error);
  return buf;
}

}  // namespace

bool RunReport::failed() const {
  if (!errors.empty()) return true;
  for (const ChargeResult& c : charges)
    if (!c.ok) return true;
  if (config.command == Command::verify)
    for (const Verdict& v : verdicts)
      if (!v.pass) return true;
  return false;
}

int RunReport::exit_code() const { return failed() ? 1 : 0; }

RunReport run(const RunConfig& config, std::ostream* log) {
  RunReport rep;
  rep.config = config;
  const auto t0 = Clock::now();
  if (config.command == Command::verify) {
    switch (config.check) {
      case VerifyCheck::pohozaev:
        run_pohozaev(config, rep, log);
        break;
      case VerifyCheck::kernel:
        run_kernel(config, rep, log);
        break;
      case VerifyCheck::equivalence:
        run_equivalence(config, rep, log);
        break;
    }
  } else {
    run_charges(config, rep, log);
  }
  rep.seconds = since(t0);
  return rep;
}

Json config_json(const ConfigTable& table) {
  Json j = Json::object();
  for (const ConfigSection& s : table.sections) {
    Json sec = Json::object();
    for (const ConfigEntry& e : s.entries) sec[e.key] = e.value;
    j[s.name] = sec;
  }
  return j;
}

ConfigTable config_from_json(const Json& j) {
  ConfigTable t;
  if (!j.is_object()) throw ConfigError("config echo must be an object");
  for (const auto& [section, keys] : j.items()) {
    if (!keys.is_object()) throw ConfigError("config section '" + section + "' must be an object");
    for (const auto& [key, value] : keys.items()) {
      if (!value.is_string())
        throw ConfigError("config value " + section + "." + key + " must be a string");
      t.set(section, key, value.get<std::string>());
    }
  }
  return t;
}

Json to_json(const RunReport& rep) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = to_string(rep.config.command);
  if (rep.config.command == Command::verify) j["check"] = to_string(rep.config.check);
  j["config"] = config_json(to_table(rep.config));
  Json charges = Json::array();
  for (const ChargeResult& c : rep.charges) {
    Json e;
    e["name"] = c.charge.name;
    if (c.normalization != 0.0) {
      e["kind"] = std::string(to_string(c.charge.spec.kind));
      e["index"] = c.charge.spec.index;
      e["measure"] = std::string(to_string(c.charge.spec.effective_measure()));
      e["normalization"] = c.normalization;
    }
    e["status"] = c.ok ? "ok" : "error";
    if (!c.ok) {
      e["error"] = c.error;
    } else {
      const Json series = series_json(c.series);
      for (const auto& [k, v] : series.items()) e[k] = v;
      if (c.normalized_limit) {
        e["normalized_limit"] = *c.normalized_limit;
        e["normalized_error"] = *c.normalized_error;
      }
    }
    charges.push_back(e);
  }
  j["charges"] = charges;
  Json diag = rep.diagnostics;
  diag["errors"] = strings_json(rep.errors);
  j["diagnostics"] = diag;
  Json verdicts = Json::array();
  for (const Verdict& v : rep.verdicts)
    verdicts.push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
  j["verdicts"] = verdicts;
  if (rep.config.timings) {
    Json t;
    t["total_seconds"] = rep.seconds;
    Json per = Json::object();
    for (const ChargeResult& c : rep.charges) per[c.charge.name] = c.seconds;
    t["charges"] = per;
    j["timings"] = t;
  }
  return j;
}

std::string report_text(const RunReport& rep) {
  std::ostringstream out;
  for (const ChargeResult& c : rep.charges) {
    out << c.charge.name << ": ";
    if (!c.ok) {
      out << "error: " << c.error << '\n';
      continue;
    }
    out << format_double(c.series.limit) << " +- " << sci(c.series.limit_error);
    if (c.normalized_limit)
      out << " (normalized " << format_double(*c.normalized_limit) << " +- "
          << sci(*c.normalized_error) << ")";
    out << '\n';
  }
  for (const Verdict& v : rep.verdicts)
    out << (v.pass ? "PASS " : "FAIL ") << v.name << ": " << v.detail << '\n';
  for (const std::string& e : rep.errors) out << "error: " << e << '\n';
  return out.str();
}

std::string series_csv(const RadialSeries& series) {
  std::string out = "r,raw_flux,normalized,quad_error\n";
  for (const FluxSample& s : series.samples) out += csv_line(s) + "\n";
  return out;
}

std::string sweep_csv(const RunReport& rep) {
  std::string out = "charge,r,raw_flux,normalized,quad_error\n";
  for (const ChargeResult& c : rep.charges)
    if (c.ok)
      for (const FluxSample& s : c.series.samples) out += c.charge.name + "," + csv_line(s) + "\n";
  return out;
}

void write_outputs(const RunReport& rep, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto write = [](const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << content;
    if (!f) throw std::runtime_error("cannot write " + path.string());
  };
  write(fs::path(dir) / "report.json", to_json(rep).dump(2) + "\n");
  for (const ChargeResult& c : rep.charges)
    if (c.ok) write(fs::path(dir) / (c.charge.name + ".csv"), series_csv(c.series));
}

}  // namespace asym::app
