// Copyright 2026 The uowcsec Authors
// SPDX-License-Identifier: Apache-2.0

//! \file experiment.hpp
//! Experiment configuration: schema, parsing, validation and echo.
//!
//! A configuration is UTF-8 text with sections and `key = value` lines.
//! dB-valued keys end in `_db`. Every key is optional; defaults are listed in
//! README.md. A sweep names its parameter as `section.key`, e.g. `rd.phi_db`.

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "uowcsec/channels.hpp"
#include "uowcsec/cli/registry.hpp"
#include "uowcsec/errors.hpp"
#include "uowcsec/mcsim.hpp"
#include "uowcsec/secrecy.hpp"

namespace uowcsec::cli {

using secrecy::Scenario;

enum class Engine { Analytic, MC, Both };
enum class Metric { SOP, SPSC, EST };

inline const char* to_string(Engine e) {
  switch (e) {
    case Engine::Analytic: return "analytic";
    case Engine::MC: return "mc";
    case Engine::Both: return "both";
  }
  return "?";
}

inline const char* to_string(Metric m) {
  switch (m) {
    case Metric::SOP: return "sop";
    case Metric::SPSC: return "spsc";
    case Metric::EST: return "est";
  }
  return "?";
}

inline Engine parse_engine(const std::string& s) {
  if (s == "analytic") return Engine::Analytic;
  if (s == "mc") return Engine::MC;
  if (s == "both") return Engine::Both;
  throw ConfigError("engine must be analytic, mc or both (got '" + s + "')");
}

inline Metric parse_metric(const std::string& s) {
  if (s == "sop") return Metric::SOP;
  if (s == "spsc") return Metric::SPSC;
  if (s == "est") return Metric::EST;
  throw ConfigError("metric must be sop, spsc or est (got '" + s + "')");
}

/// "auto" picks the mode matching the scenario.
inline std::string check_mode_name(const std::string& s) {
  if (s == "auto" || s == "mrc" || s == "paper" || s == "max") return s;
  throw ConfigError("mode must be auto, mrc, paper or max (got '" + s + "')");
}

inline mcsim::Mode resolve_mode(const std::string& s, Scenario scenario) {
  if (s == "mrc") return mcsim::Mode::MRCSum;
  if (s == "paper") return mcsim::Mode::PaperSubstitution;
  if (s == "max") return mcsim::Mode::MaxSelect;
  return mcsim::default_mode(scenario);
}

struct LinkParams {
  double kappa = 1.0;
  double mu = 1.0;
  double m = 2.0;
  int g = 2;
  double phi_db = 0.0;

  friend bool operator==(const LinkParams&, const LinkParams&) = default;
};

struct SweepAxis {
  std::string parameter;  // empty: single point
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  [[nodiscard]] bool active() const { return !parameter.empty(); }

  [[nodiscard]] std::vector<double> values() const {
    if (!active()) return {};
    const double span = (stop - start) / step;
    const auto count = static_cast<long>(std::floor(span + 1e-9)) + 1;
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) xs.push_back(start + static_cast<double>(i) * step);
    return xs;
  }

  friend bool operator==(const SweepAxis&, const SweepAxis&) = default;
};

struct ExperimentConfig {
  // [system]
  Scenario scenario = Scenario::Colluding;
  int n_eav = 1;
  double eta_r = 0.7;
  double p_b_db = 20.0;
  double n_d = 1.0;
  double n_e = 1.0;
  double r_s = 0.05;
  // [sr]: registry lookup by (water, h, l) unless water = "none"
  std::string water = "fresh";
  double h = 2.4;
  double l = 0.05;
  double omega = 0.0;
  double lambda = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double xi = 0.8;
  int epsilon = 1;
  double phi_sr_db = 15.0;
  // [rd], [re], [br]
  LinkParams rd{1.0, 1.0, 2.0, 2, 15.0};
  LinkParams re{1.0, 1.0, 2.0, 2, 0.0};
  LinkParams br{1.0, 1.0, 2.0, 2, 1.0};
  // [sweep]
  SweepAxis sweep;
  // [run]
  Metric metric = Metric::SOP;
  Engine engine = Engine::Analytic;
  double tol = 1e-12;
  // [mc]
  std::int64_t n = 1'000'000;
  std::uint64_t seed = 1;
  std::string mode = "auto";
  int jobs = 1;
  // [output]
  std::string csv;
  std::string svg;
  std::string registry;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

namespace detail {

inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& v, const std::string& field) {
  double x = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(x)) {
    throw ConfigError(field + ": expected a number, got '" + v + "'");
  }
  return x;
}

inline long long parse_integer(const std::string& v, const std::string& field) {
  long long x = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigError(field + ": expected an integer, got '" + v + "'");
  }
  return x;
}

inline int integral_value(double x, const std::string& field) {
  if (std::abs(x - std::round(x)) > 1e-9 || std::abs(x) > 1e9) {
    throw ConfigError(field + ": expected an integer, got " + format_number(x));
  }
  return static_cast<int>(std::lround(x));
}

}  // namespace detail

/// One configuration key.
struct Field {
  std::string section;
  std::string key;
  bool numeric = false;  // may be swept
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<void(ExperimentConfig&, double)> set_number;  // numeric fields only

  [[nodiscard]] std::string name() const { return section + "." + key; }
};

namespace detail {

inline Field real_field(std::string section, std::string key, double ExperimentConfig::*member) {
  Field f{section, key, true, nullptr, nullptr, nullptr};
  const std::string name = "[" + section + "] " + key;
  f.get = [member](const ExperimentConfig& c) { return format_number(c.*member); };
  f.set = [member, name](ExperimentConfig& c, const std::string& v) { c.*member = parse_double(v, name); };
  f.set_number = [member](ExperimentConfig& c, double x) { c.*member = x; };
  return f;
}

inline Field int_field(std::string section, std::string key, int ExperimentConfig::*member) {
  Field f{section, key, true, nullptr, nullptr, nullptr};
  const std::string name = "[" + section + "] " + key;
  f.get = [member](const ExperimentConfig& c) { return std::to_string(c.*member); };
  f.set = [member, name](ExperimentConfig& c, const std::string& v) {
    const long long x = parse_integer(v, name);
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
      throw ConfigError(name + ": value out of range");
    }
    c.*member = static_cast<int>(x);
  };
  f.set_number = [member, name](ExperimentConfig& c, double x) { c.*member = integral_value(x, name); };
  return f;
}

inline Field string_field(std::string section, std::string key, std::string ExperimentConfig::*member,
                          std::function<std::string(const std::string&)> check = nullptr) {
  Field f{section, key, false, nullptr, nullptr, nullptr};
  f.get = [member](const ExperimentConfig& c) { return c.*member; };
  f.set = [member, check](ExperimentConfig& c, const std::string& v) { c.*member = check ? check(v) : v; };
  return f;
}

inline Field link_field(const std::string& section, const std::string& key, LinkParams ExperimentConfig::*link,
                        double LinkParams::*member) {
  Field f{section, key, true, nullptr, nullptr, nullptr};
  const std::string name = "[" + section + "] " + key;
  f.get = [link, member](const ExperimentConfig& c) { return format_number(c.*link.*member); };
  f.set = [link, member, name](ExperimentConfig& c, const std::string& v) { c.*link.*member = parse_double(v, name); };
  f.set_number = [link, member](ExperimentConfig& c, double x) { c.*link.*member = x; };
  return f;
}

inline Field antenna_field(const std::string& section, LinkParams ExperimentConfig::*link) {
  Field f{section, "g", true, nullptr, nullptr, nullptr};
  const std::string name = "[" + section + "] g";
  f.get = [link](const ExperimentConfig& c) { return std::to_string((c.*link).g); };
  f.set = [link, name](ExperimentConfig& c, const std::string& v) {
    (c.*link).g = integral_value(static_cast<double>(parse_integer(v, name)), name);
  };
  f.set_number = [link, name](ExperimentConfig& c, double x) { (c.*link).g = integral_value(x, name); };
  return f;
}

inline Field sweep_bound(const char* key, double SweepAxis::*member) {
  Field f{"sweep", key, false, nullptr, nullptr, nullptr};
  const std::string name = std::string("[sweep] ") + key;
  f.get = [member](const ExperimentConfig& c) { return format_number(c.sweep.*member); };
  f.set = [member, name](ExperimentConfig& c, const std::string& v) { c.sweep.*member = parse_double(v, name); };
  return f;
}

}  // namespace detail

/// The configuration schema in echo order.
inline const std::vector<Field>& schema() {
  static const std::vector<Field> fields = [] {
    using detail::int_field;
    using detail::link_field;
    using detail::real_field;
    using detail::string_field;
    std::vector<Field> f;
    Field scenario{"system", "scenario", false, nullptr, nullptr, nullptr};
    scenario.get = [](const ExperimentConfig& c) { return std::string(secrecy::to_string(c.scenario)); };
    scenario.set = [](ExperimentConfig& c, const std::string& v) {
      if (v == "colluding") c.scenario = Scenario::Colluding;
      else if (v == "noncolluding") c.scenario = Scenario::NonColluding;
      else throw ConfigError("[system] scenario: must be colluding or noncolluding, got '" + v + "'");
    };
    f.push_back(scenario);
    f.push_back(int_field("system", "n_eav", &ExperimentConfig::n_eav));
    f.push_back(real_field("system", "eta_r", &ExperimentConfig::eta_r));
    f.push_back(real_field("system", "p_b_db", &ExperimentConfig::p_b_db));
    f.push_back(real_field("system", "n_d", &ExperimentConfig::n_d));
    f.push_back(real_field("system", "n_e", &ExperimentConfig::n_e));
    f.push_back(real_field("system", "r_s", &ExperimentConfig::r_s));

    f.push_back(string_field("sr", "water", &ExperimentConfig::water, [](const std::string& v) {
      if (v != "fresh" && v != "salty" && v != "none") {
        throw ConfigError("[sr] water: must be fresh, salty or none, got '" + v + "'");
      }
      return v;
    }));
    f.push_back(real_field("sr", "h", &ExperimentConfig::h));
    f.push_back(real_field("sr", "l", &ExperimentConfig::l));
    f.push_back(real_field("sr", "omega", &ExperimentConfig::omega));
    f.push_back(real_field("sr", "lambda", &ExperimentConfig::lambda));
    f.push_back(real_field("sr", "a", &ExperimentConfig::a));
    f.push_back(real_field("sr", "b", &ExperimentConfig::b));
    f.push_back(real_field("sr", "c", &ExperimentConfig::c));
    f.push_back(real_field("sr", "xi", &ExperimentConfig::xi));
    f.push_back(int_field("sr", "epsilon", &ExperimentConfig::epsilon));
    f.push_back(real_field("sr", "phi_sr_db", &ExperimentConfig::phi_sr_db));

    for (auto [section, link] : {std::pair{"rd", &ExperimentConfig::rd}, {"re", &ExperimentConfig::re},
                                 {"br", &ExperimentConfig::br}}) {
      f.push_back(link_field(section, "kappa", link, &LinkParams::kappa));
      f.push_back(link_field(section, "mu", link, &LinkParams::mu));
      f.push_back(link_field(section, "m", link, &LinkParams::m));
      f.push_back(detail::antenna_field(section, link));
      f.push_back(link_field(section, "phi_db", link, &LinkParams::phi_db));
    }

    Field parameter{"sweep", "parameter", false, nullptr, nullptr, nullptr};
    parameter.get = [](const ExperimentConfig& c) { return c.sweep.parameter; };
    parameter.set = [](ExperimentConfig& c, const std::string& v) { c.sweep.parameter = v; };
    f.push_back(parameter);
    f.push_back(detail::sweep_bound("start", &SweepAxis::start));
    f.push_back(detail::sweep_bound("stop", &SweepAxis::stop));
    f.push_back(detail::sweep_bound("step", &SweepAxis::step));

    Field metric{"run", "metric", false, nullptr, nullptr, nullptr};
    metric.get = [](const ExperimentConfig& c) { return std::string(to_string(c.metric)); };
    metric.set = [](ExperimentConfig& c, const std::string& v) { c.metric = parse_metric(v); };
    f.push_back(metric);
    Field engine{"run", "engine", false, nullptr, nullptr, nullptr};
    engine.get = [](const ExperimentConfig& c) { return std::string(to_string(c.engine)); };
    engine.set = [](ExperimentConfig& c, const std::string& v) { c.engine = parse_engine(v); };
    f.push_back(engine);
    f.push_back(real_field("run", "tol", &ExperimentConfig::tol));

    Field n{"mc", "n", false, nullptr, nullptr, nullptr};
    n.get = [](const ExperimentConfig& c) { return std::to_string(c.n); };
    n.set = [](ExperimentConfig& c, const std::string& v) { c.n = detail::parse_integer(v, "[mc] n"); };
    f.push_back(n);
    Field seed{"mc", "seed", false, nullptr, nullptr, nullptr};
    seed.get = [](const ExperimentConfig& c) { return std::to_string(c.seed); };
    seed.set = [](ExperimentConfig& c, const std::string& v) {
      const long long s = detail::parse_integer(v, "[mc] seed");
      if (s < 0) throw ConfigError("[mc] seed: must be >= 0");
      c.seed = static_cast<std::uint64_t>(s);
    };
    f.push_back(seed);
    f.push_back(string_field("mc", "mode", &ExperimentConfig::mode, [](const std::string& v) {
      try {
        return check_mode_name(v);
      } catch (const ConfigError& e) {
        throw ConfigError(std::string("[mc] ") + e.what());
      }
    }));
    Field jobs = detail::int_field("mc", "jobs", &ExperimentConfig::jobs);
    jobs.numeric = false;
    f.push_back(jobs);

    f.push_back(string_field("output", "csv", &ExperimentConfig::csv));
    f.push_back(string_field("output", "svg", &ExperimentConfig::svg));
    f.push_back(string_field("output", "registry", &ExperimentConfig::registry));
    return f;
  }();
  return fields;
}

inline const Field* find_field(const std::string& section, const std::string& key) {
  for (const auto& f : schema()) {
    if (f.section == section && f.key == key) return &f;
  }
  return nullptr;
}

/// `section.key`, or a bare key when exactly one section has it.
inline const Field* find_field(const std::string& name) {
  const auto dot = name.find('.');
  if (dot != std::string::npos) return find_field(name.substr(0, dot), name.substr(dot + 1));
  const Field* hit = nullptr;
  for (const auto& f : schema()) {
    if (f.key != name) continue;
    if (hit != nullptr) return nullptr;
    hit = &f;
  }
  return hit;
}

/// Looks up a sweepable parameter by name (see find_field).
inline const Field& sweep_field(const std::string& name) {
  const Field* f = find_field(name);
  if (f == nullptr || !f->numeric) {
    std::string known;
    for (const auto& g : schema()) {
      if (g.numeric) known += (known.empty() ? "" : ", ") + g.name();
    }
    throw ConfigError("[sweep] parameter: '" + name + "' is not a numeric parameter (choose one of " + known + ")");
  }
  return *f;
}

/// Sets `name` (e.g. "rd.phi_db") to `value` given as text.
inline void set_parameter(ExperimentConfig& cfg, const std::string& name, const std::string& value) {
  const Field* f = find_field(name);
  if (f == nullptr) throw ConfigError("unknown or ambiguous parameter '" + name + "'");
  f->set(cfg, value);
}

inline void set_parameter(ExperimentConfig& cfg, const std::string& name, double value) {
  sweep_field(name).set_number(cfg, value);
}

/// Field-level validation; throws ConfigError naming the offending key.
inline void validate(const ExperimentConfig& c) {
  auto positive = [](double v, const std::string& name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(name + " = " + detail::format_number(v) + " must be positive");
  };
  if (c.n_eav < 1) throw ConfigError("[system] n_eav = " + std::to_string(c.n_eav) + " must be >= 1");
  if (!(c.eta_r > 0.0 && c.eta_r <= 1.0)) {
    throw ConfigError("[system] eta_r = " + detail::format_number(c.eta_r) + " must lie in (0, 1]");
  }
  positive(c.n_d, "[system] n_d");
  positive(c.n_e, "[system] n_e");
  positive(c.r_s, "[system] r_s");
  if (c.water == "none") {
    if (!(c.omega > 0.0 && c.omega < 1.0)) {
      throw ConfigError("[sr] omega = " + detail::format_number(c.omega) + " must lie in (0, 1)");
    }
    positive(c.lambda, "[sr] lambda");
    positive(c.a, "[sr] a");
    positive(c.b, "[sr] b");
    positive(c.c, "[sr] c");
  } else {
    if (c.h < 0.0) throw ConfigError("[sr] h must be >= 0");
    if (c.l < 0.0) throw ConfigError("[sr] l must be >= 0");
    if (c.omega != 0.0 && !(c.omega > 0.0 && c.omega < 1.0)) {
      throw ConfigError("[sr] omega = " + detail::format_number(c.omega) + " must lie in (0, 1)");
    }
    for (auto [v, key] : {std::pair{c.omega, "omega"}, {c.lambda, "lambda"}, {c.a, "a"}, {c.b, "b"}, {c.c, "c"}}) {
      if (v != 0.0) {
        throw ConfigError(std::string("[sr] ") + key + " is set but water = " + c.water +
                          " takes the turbulence parameters from the registry; set water = none");
      }
    }
  }
  positive(c.xi, "[sr] xi");
  if (c.epsilon != 1 && c.epsilon != 2) {
    throw ConfigError("[sr] epsilon = " + std::to_string(c.epsilon) + " must be 1 or 2");
  }
  for (auto [p, s] : {std::pair{&c.rd, "rd"}, {&c.re, "re"}, {&c.br, "br"}}) {
    const std::string sec = std::string("[") + s + "] ";
    if (!(p->kappa >= 0.0) || !std::isfinite(p->kappa)) throw ConfigError(sec + "kappa must be >= 0");
    positive(p->mu, sec + "mu");
    positive(p->m, sec + "m");
    if (p->g < 1) throw ConfigError(sec + "g = " + std::to_string(p->g) + " must be >= 1");
  }
  if (c.sweep.active()) {
    sweep_field(c.sweep.parameter);
    if (!(c.sweep.step != 0.0)) throw ConfigError("[sweep] step must be nonzero");
    if ((c.sweep.stop - c.sweep.start) / c.sweep.step < -1e-9) {
      throw ConfigError("[sweep] range is empty: step has the wrong sign for start -> stop");
    }
    if (c.sweep.values().size() > 100'000) throw ConfigError("[sweep] more than 100000 points");
  }
  if (!(c.tol > 0.0 && c.tol < 1.0)) throw ConfigError("[run] tol must lie in (0, 1)");
  if (c.engine != Engine::Analytic && c.n < mcsim::kMinTrials) {
    throw ConfigError("[mc] n = " + std::to_string(c.n) + " must be >= 10000");
  }
  if (c.jobs < 1) throw ConfigError("[mc] jobs must be >= 1");
  if (c.n_eav > 1 && c.engine != Engine::Analytic && c.mode != "auto") {
    const bool colluding = c.scenario == Scenario::Colluding;
    if (colluding == (c.mode == "max")) {
      throw ConfigError("[mc] mode = " + c.mode + " does not match [system] scenario = " +
                        secrecy::to_string(c.scenario));
    }
  }
}

/// Parses configuration text. Unknown sections or keys are errors.
inline ExperimentConfig parse_experiment(const std::string& text, const std::string& origin = "config") {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(origin + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  ExperimentConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError(origin + ": key '" + section + "' appears outside any section");
    }
    for (const auto& [key, value] : body) {
      const Field* f = find_field(section, key);
      if (f == nullptr) throw ConfigError(origin + ": unknown key [" + section + "] " + key);
      f->set(cfg, value.data());
    }
  }
  validate(cfg);
  return cfg;
}

inline ExperimentConfig load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment(buf.str(), path);
}

/// Echoes every key; parse_experiment(to_ini(c)) == c.
inline std::string to_ini(const ExperimentConfig& c) {
  std::string out;
  std::string section;
  for (const auto& f : schema()) {
    if (f.section != section) {
      if (!section.empty()) out += '\n';
      section = f.section;
      out += "[" + section + "]\n";
    }
    out += f.key + " = " + f.get(c) + "\n";
  }
  return out;
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Model objects built from a configuration.
struct Model {
  secrecy::SystemConfig system;
  secrecy::Links links;
  const TurbulenceRegistryEntry* registry_entry = nullptr;  // null for explicit parameters
};

inline channels::KMSChannel to_channel(const LinkParams& p) {
  return channels::KMSChannel{p.kappa, p.mu, p.m, p.g, db_to_linear(p.phi_db)};
}

inline Model build_model(const ExperimentConfig& c, const Registry& registry) {
  validate(c);
  Model m;
  m.system.eta_r = c.eta_r;
  m.system.p_b = db_to_linear(c.p_b_db);
  m.system.n_d = c.n_d;
  m.system.n_e = c.n_e;
  m.system.r_s = c.r_s;
  m.system.scenario = c.scenario;
  m.system.n_eav = c.n_eav;

  channels::EGGChannel sr;
  if (c.water == "none") {
    sr.omega = c.omega;
    sr.lambda_exp = c.lambda;
    sr.a = c.a;
    sr.b = c.b;
    sr.c = c.c;
  } else {
    const auto& e = registry.lookup(TurbulenceKey{c.water, c.h, c.l});
    m.registry_entry = &e;
    sr.omega = e.omega;
    sr.lambda_exp = e.lambda;
    sr.a = e.a;
    sr.b = e.b;
    sr.c = e.c;
  }
  sr.xi = c.xi;
  sr.epsilon = c.epsilon;
  sr.phi_sr = db_to_linear(c.phi_sr_db);
  m.links = {sr, to_channel(c.rd), to_channel(c.re), to_channel(c.br)};
  return m;
}

}  // namespace uowcsec::cli
