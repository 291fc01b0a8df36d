// Copyright 2026 The uowcsec Authors
// SPDX-License-Identifier: Apache-2.0

// uowcsec: secrecy metrics of a wireless-powered mixed optical/RF relay link.
//
//   uowcsec eval     --config exp.ini [--engine both]
//   uowcsec sweep    --config exp.ini --out sweep.csv --svg sweep.svg
//   uowcsec mc       --config exp.ini --n 1000000 --seed 7 --jobs 8
//   uowcsec validate --level quick
//   uowcsec figure   fig4 --out fig4.csv --svg fig4.svg
//
// Exit codes: 0 success, 1 numerical failure, 2 configuration failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "uowcsec/cli/experiment.hpp"
#include "uowcsec/cli/output.hpp"
#include "uowcsec/cli/recipes.hpp"
#include "uowcsec/cli/registry.hpp"
#include "uowcsec/cli/runner.hpp"
#include "uowcsec/cli/validate.hpp"

#ifndef UOWCSEC_DEFAULT_REGISTRY
#define UOWCSEC_DEFAULT_REGISTRY "data/registry.ini"
#endif

namespace {

using namespace uowcsec;
using namespace uowcsec::cli;

struct Overrides {
  std::string config;
  std::string registry;
  std::optional<std::string> engine;
  std::optional<std::int64_t> n;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<int> jobs;
  std::optional<std::string> out;
  std::optional<std::string> svg;
  std::optional<double> tol;
};

void add_common(CLI::App* cmd, Overrides& o, bool needs_config) {
  auto* c = cmd->add_option("--config", o.config, "Experiment configuration file");
  if (needs_config) c->required();
  cmd->add_option("--registry", o.registry, "Turbulence parameter registry (default: " UOWCSEC_DEFAULT_REGISTRY ")");
  cmd->add_option("--engine", o.engine, "analytic, mc or both");
  cmd->add_option("--n", o.n, "Monte-Carlo trials");
  cmd->add_option("--seed", o.seed, "Monte-Carlo master seed");
  cmd->add_option("--mode", o.mode, "Eavesdropper combining in MC: mrc, paper or max");
  cmd->add_option("--jobs", o.jobs, "Worker threads");
  cmd->add_option("--out", o.out, "CSV output path");
  cmd->add_option("--svg", o.svg, "SVG chart path");
  cmd->add_option("--tol", o.tol, "Series relative tolerance");
}

ExperimentConfig load_with_overrides(const Overrides& o) {
  ExperimentConfig cfg = load_experiment(o.config);
  if (o.engine) cfg.engine = parse_engine(*o.engine);
  if (o.n) cfg.n = *o.n;
  if (o.seed) cfg.seed = *o.seed;
  if (o.mode) cfg.mode = check_mode_name(*o.mode);
  if (o.jobs) cfg.jobs = *o.jobs;
  if (o.out) cfg.csv = *o.out;
  if (o.svg) cfg.svg = *o.svg;
  if (o.tol) cfg.tol = *o.tol;
  validate(cfg);
  return cfg;
}

Registry load_registry(const Overrides& o, const ExperimentConfig* cfg) {
  std::string path = o.registry;
  if (path.empty() && cfg != nullptr) path = cfg->registry;
  if (path.empty()) path = UOWCSEC_DEFAULT_REGISTRY;
  return Registry::load(path);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  return out;
}

void print_point(const PointResult& p, Metric metric) {
  if (p.analytic) {
    std::printf("%s (analytic) = %.10g\n", to_string(metric), p.analytic->value);
    std::printf("  terms used: %s\n", format_terms(p.analytic->terms_used).c_str());
    std::printf("  tail estimate: %.3g\n", p.analytic->tail_estimate);
    for (const auto& w : p.analytic->warnings) std::printf("  warning: %s\n", w.c_str());
  }
  if (p.mc) {
    std::printf("%s (mc, %s) = %.10g  95%% CI [%.10g, %.10g]  n = %lld%s\n", to_string(metric),
                mcsim::to_string(p.mc->mode), p.mc->mean, p.mc->ci_low(), p.mc->ci_high(),
                static_cast<long long>(p.mc->n), p.mc->low_confidence ? "  (low confidence)" : "");
  }
  if (p.analytic && p.mc) {
    std::printf("analytic %s the MC 3-sigma interval\n", within_sigma(p) ? "inside" : "OUTSIDE");
  }
}

void note_registry(const ExperimentConfig& cfg, const Registry& registry) {
  const Model model = build_model(cfg, registry);
  if (model.registry_entry != nullptr && model.registry_entry->is_placeholder()) {
    std::fprintf(stderr, "note: registry entry %s is a placeholder; values are not comparable with published results\n",
                model.registry_entry->key.address().c_str());
  }
}

int cmd_eval(const Overrides& o, bool echo) {
  const ExperimentConfig cfg = load_with_overrides(o);
  if (echo) {
    std::fputs(to_ini(cfg).c_str(), stdout);
    return 0;
  }
  const Registry registry = load_registry(o, &cfg);
  ExperimentConfig point = cfg;
  point.sweep = {};
  note_registry(point, registry);
  std::optional<std::ofstream> file;
  std::optional<CsvWriter> csv;
  if (!cfg.csv.empty()) {
    file.emplace(open_output(cfg.csv));
    csv.emplace(*file, "");
  }
  const auto points = run_sweep(point, registry, "eval", csv ? &*csv : nullptr);
  print_point(points.front(), cfg.metric);
  return 0;
}

int cmd_sweep(const Overrides& o) {
  const ExperimentConfig cfg = load_with_overrides(o);
  if (!cfg.sweep.active()) throw ConfigError("[sweep] parameter: the sweep command needs a sweep axis");
  const Registry registry = load_registry(o, &cfg);
  note_registry(cfg, registry);
  std::optional<std::ofstream> file;
  std::ostream* out = &std::cout;
  if (!cfg.csv.empty()) {
    file.emplace(open_output(cfg.csv));
    out = &*file;
  }
  CsvWriter csv(*out, cfg.sweep.parameter);
  const auto points = run_sweep(cfg, registry, "sweep", &csv);
  if (!cfg.svg.empty()) {
    PlotSeries line{"analytic", {}, {}, false};
    PlotSeries marks{"Monte Carlo", {}, {}, true};
    for (const auto& p : points) {
      if (p.analytic) line.x.push_back(p.x), line.y.push_back(p.analytic->value);
      if (p.mc) marks.x.push_back(p.x), marks.y.push_back(p.mc->mean);
    }
    std::vector<PlotSeries> plot;
    if (!line.x.empty()) plot.push_back(line);
    if (!marks.x.empty()) plot.push_back(marks);
    open_output(cfg.svg) << render_svg(std::string(to_string(cfg.metric)) + " sweep", cfg.sweep.parameter,
                                       to_string(cfg.metric), plot, cfg.metric == Metric::SOP);
  }
  int outside = 0;
  for (const auto& p : points) outside += within_sigma(p) ? 0 : 1;
  if (cfg.engine == Engine::Both) {
    std::fprintf(stderr, "%d of %zu points outside the MC 3-sigma interval\n", outside, points.size());
  }
  return 0;
}

int cmd_validate(const Overrides& o, const std::string& level) {
  ValidateLevel lv;
  if (level == "quick") lv = ValidateLevel::Quick;
  else if (level == "full") lv = ValidateLevel::Full;
  else throw ConfigError("--level must be quick or full");
  const Registry registry = load_registry(o, nullptr);
  const ValidateReport rep = run_validation(lv, registry);
  for (const auto& w : rep.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  for (const auto& p : rep.properties) {
    std::fprintf(stderr, "[%s] %s\n", p.passed ? "pass" : "FAIL", p.name.c_str());
  }
  const std::string json = rep.to_json().dump(2) + "\n";
  if (o.out) {
    open_output(*o.out) << json;
  } else {
    std::fputs(json.c_str(), stdout);
  }
  return rep.passed() ? 0 : 1;
}

int cmd_figure(const Overrides& o, const std::string& id) {
  const Recipe& recipe = find_recipe(id);
  const Registry registry = load_registry(o, nullptr);
  FigureOptions opts;
  if (o.engine) opts.engine = parse_engine(*o.engine);
  if (o.n) opts.n = *o.n;
  if (o.seed) opts.seed = *o.seed;
  if (o.mode) opts.mode = check_mode_name(*o.mode);
  if (o.jobs) opts.jobs = *o.jobs;
  if (o.tol) opts.tol = *o.tol;
  std::optional<std::ofstream> file;
  std::ostream* out = &std::cout;
  if (o.out) {
    file.emplace(open_output(*o.out));
    out = &*file;
  }
  const FigureResult fig = run_figure(recipe, registry, opts, out);
  if (o.svg) open_output(*o.svg) << figure_svg(fig);
  for (const auto& n : fig.notes) std::fprintf(stderr, "note: %s\n", n.c_str());
  if (recipe.shape != Shape::None && opts.engine != Engine::MC) {
    for (const auto& s : fig.series) {
      std::fprintf(stderr, "shape %s [%s]: %s\n", to_string(recipe.shape), s.label.c_str(), s.shape_ok ? "ok" : "VIOLATED");
    }
  }
  if (id == "table1" && opts.engine != Engine::MC) {
    const auto* entry = registry.find({"fresh", 2.4, 0.05});
    if (entry == nullptr || entry->is_placeholder()) {
      std::fprintf(stderr, "published-table comparison skipped: registry entry fresh/2.4/0.05 is a placeholder\n");
    } else {
      double worst = 0.0;
      for (std::size_t k = 0; k < fig.series.size(); ++k) {
        for (std::size_t i = 0; i < fig.series[k].points.size(); ++i) {
          worst = std::max(worst, std::abs(fig.series[k].points[i].analytic->value - TableReference::est[k][i]));
        }
      }
      std::fprintf(stderr, "largest deviation from the published table: %.5f (registry: %s)\n", worst,
                   entry->provenance.c_str());
    }
  }
  if (opts.engine == Engine::Both) {
    int outside = 0, total = 0;
    for (const auto& s : fig.series) {
      for (const auto& p : s.points) outside += within_sigma(p) ? 0 : 1, ++total;
    }
    std::fprintf(stderr, "%d of %d points outside the MC 3-sigma interval\n", outside, total);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secrecy metrics of a wireless-powered mixed underwater-optical/RF relay network"};
  app.require_subcommand(1);
  Overrides o;
  bool echo = false;
  std::string level = "quick";
  std::string figure_id;

  auto* eval = app.add_subcommand("eval", "Evaluate the configured metric at one point");
  add_common(eval, o, true);
  eval->add_flag("--echo", echo, "Print the fully resolved configuration and exit");
  auto* sweep = app.add_subcommand("sweep", "Evaluate the metric along the configured sweep axis");
  add_common(sweep, o, true);
  auto* mc = app.add_subcommand("mc", "Monte-Carlo estimate at one point");
  add_common(mc, o, true);
  auto* val = app.add_subcommand("validate", "Run the self-check suite");
  add_common(val, o, false);
  val->add_option("--level", level, "quick or full");
  auto* fig = app.add_subcommand("figure", "Run a built-in figure or table recipe");
  add_common(fig, o, false);
  fig->add_option("id", figure_id, "fig1 .. fig13 or table1")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*eval) return cmd_eval(o, echo);
    if (*sweep) return cmd_sweep(o);
    if (*mc) {
      Overrides m = o;
      m.engine = "mc";
      return cmd_eval(m, false);
    }
    if (*val) return cmd_validate(o, level);
    if (*fig) return cmd_figure(o, figure_id);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const uowcsec::Error& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
