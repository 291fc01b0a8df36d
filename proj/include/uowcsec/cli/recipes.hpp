// Copyright 2026 The uowcsec Authors
// SPDX-License-Identifier: Apache-2.0

//! \file recipes.hpp
//! Built-in figure and table recipes: a base configuration, a sweep axis and
//! a list of curve variants, each a set of parameter overrides.
//!
//! Curve variants whose exact values are not pinned down by the base
//! configuration use illustrative values.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "uowcsec/cli/experiment.hpp"
#include "uowcsec/cli/output.hpp"
#include "uowcsec/cli/runner.hpp"

namespace uowcsec::cli {

enum class Shape { None, NonIncreasing, NonDecreasing, Unimodal };

inline const char* to_string(Shape s) {
  switch (s) {
    case Shape::None: return "none";
    case Shape::NonIncreasing: return "nonincreasing";
    case Shape::NonDecreasing: return "nondecreasing";
    case Shape::Unimodal: return "unimodal";
  }
  return "?";
}

struct RecipeSeries {
  std::string label;
  std::vector<std::pair<std::string, std::string>> overrides;
};

struct Recipe {
  std::string id;
  std::string title;
  std::string x_label;
  std::string base;  // configuration text
  std::vector<RecipeSeries> series;
  Shape shape = Shape::None;
  bool log_y = false;
};

/// Published EST values of the R_s grid recipe, for R_s = 1.1, 1.15, ..., 1.7.
struct TableReference {
  static constexpr std::array<double, 13> rates{1.1, 1.15, 1.2, 1.25, 1.3, 1.35, 1.4,
                                                1.45, 1.5, 1.55, 1.6, 1.65, 1.7};
  static constexpr std::array<int, 4> eavesdroppers{3, 7, 9, 11};
  static constexpr std::array<std::array<double, 13>, 4> est{{
      {0.74785, 0.76471, 0.77969, 0.79272, 0.80373, 0.81264, 0.81937, 0.82383, 0.82593, 0.82558, 0.82268, 0.81710,
       0.80876},
      {0.67581, 0.68993, 0.70215, 0.71239, 0.72057, 0.72660, 0.73038, 0.73183, 0.73083, 0.72730, 0.72114, 0.71224,
       0.70051},
      {0.51565, 0.52592, 0.53466, 0.54181, 0.54728, 0.55100, 0.55291, 0.55291, 0.55094, 0.54692, 0.54076, 0.53242,
       0.52181},
      {0.30500, 0.31078, 0.31561, 0.31945, 0.32224, 0.32394, 0.32451, 0.32389, 0.32204, 0.31891, 0.31447, 0.30868,
       0.30151},
  }};
};

namespace detail {

// Links shared by most recipes: G = 2, kappa = 1, mu = 1, m = 2 everywhere.
inline std::string links_text(double rd_db, double re_db, double br_db) {
  const auto f = [](double v) { return format_number(v); };
  return "[rd]\nkappa = 1\nmu = 1\nm = 2\ng = 2\nphi_db = " + f(rd_db) +
         "\n[re]\nkappa = 1\nmu = 1\nm = 2\ng = 2\nphi_db = " + f(re_db) +
         "\n[br]\nkappa = 1\nmu = 1\nm = 2\ng = 2\nphi_db = " + f(br_db) + "\n";
}

inline std::string sweep_text(const std::string& parameter, double start, double stop, double step) {
  return "[sweep]\nparameter = " + parameter + "\nstart = " + format_number(start) + "\nstop = " +
         format_number(stop) + "\nstep = " + format_number(step) + "\n";
}

inline std::vector<RecipeSeries> product(const std::vector<RecipeSeries>& a, const std::vector<RecipeSeries>& b) {
  std::vector<RecipeSeries> out;
  for (const auto& x : a) {
    for (const auto& y : b) {
      RecipeSeries s{x.label + ", " + y.label, x.overrides};
      s.overrides.insert(s.overrides.end(), y.overrides.begin(), y.overrides.end());
      out.push_back(s);
    }
  }
  return out;
}

inline std::vector<Recipe> build_recipes() {
  std::vector<Recipe> r;
  const std::string system_i = "[system]\nscenario = colluding\neta_r = 0.7\nr_s = 0.05\n";
  const std::string system_ii = "[system]\nscenario = noncolluding\neta_r = 0.7\nr_s = 0.05\n";

  r.push_back({"fig1", "SOP (colluding) vs source-relay SNR", "sr.phi_sr_db",
               system_i + "n_eav = 1\np_b_db = 20\n[sr]\nwater = fresh\nxi = 0.8\n" + links_text(15, 0, 1) +
                   sweep_text("sr.phi_sr_db", 0, 40, 2) + "[run]\nmetric = sop\n",
               product({{"h=2.4, l=0.05", {{"sr.h", "2.4"}, {"sr.l", "0.05"}}},
                        {"h=2.4, l=0.2", {{"sr.h", "2.4"}, {"sr.l", "0.2"}}},
                        {"h=4.7, l=0.1", {{"sr.h", "4.7"}, {"sr.l", "0.1"}}}},
                       {{"heterodyne", {{"sr.epsilon", "1"}}}, {"IM/DD", {{"sr.epsilon", "2"}}}}),
               Shape::NonIncreasing, true});

  r.push_back({"fig2", "SOP (colluding) vs beacon-relay SNR, thermally uniform water", "br.phi_db",
               system_i + "n_eav = 1\np_b_db = 20\n[sr]\nl = 0\nxi = 0.8\nepsilon = 1\nphi_sr_db = 20\n" +
                   links_text(10, -10, 1) + sweep_text("br.phi_db", -10, 30, 2) + "[run]\nmetric = sop\n",
               {{"fresh, h=2.4", {{"sr.water", "fresh"}, {"sr.h", "2.4"}}},
                {"fresh, h=4.7", {{"sr.water", "fresh"}, {"sr.h", "4.7"}}},
                {"fresh, h=7.1", {{"sr.water", "fresh"}, {"sr.h", "7.1"}}},
                {"fresh, h=16.5", {{"sr.water", "fresh"}, {"sr.h", "16.5"}}},
                {"salty, h=2.4", {{"sr.water", "salty"}, {"sr.h", "2.4"}}},
                {"salty, h=4.7", {{"sr.water", "salty"}, {"sr.h", "4.7"}}},
                {"salty, h=7.1", {{"sr.water", "salty"}, {"sr.h", "7.1"}}}},
               Shape::NonIncreasing, true});

  r.push_back({"fig3", "SOP (colluding) vs beacon power", "system.p_b_db",
               system_i + "n_eav = 1\n[sr]\nwater = fresh\nh = 2.4\nl = 0.05\nepsilon = 1\nphi_sr_db = 20\n" +
                   links_text(30, -10, 1) + sweep_text("system.p_b_db", -20, 30, 2.5) + "[run]\nmetric = sop\n",
               product({{"xi=0.8", {{"sr.xi", "0.8"}}}, {"xi=6.7", {{"sr.xi", "6.7"}}}},
                       {{"Rs=0.05", {{"system.r_s", "0.05"}}}, {"Rs=0.5", {{"system.r_s", "0.5"}}}}),
               Shape::NonIncreasing, true});

  r.push_back({"fig4", "SOP (colluding) vs relay-destination SNR", "rd.phi_db",
               system_i + "n_eav = 1\n[sr]\nwater = fresh\nh = 2.4\nl = 0.05\nepsilon = 1\nxi = 0.8\nphi_sr_db = 15\n" +
                   links_text(15, 0, 1) + "[rd]\nmu = 3\n[br]\nmu = 3\n[re]\nm = 1\n" +
                   sweep_text("rd.phi_db", 0, 40, 2) + "[run]\nmetric = sop\n",
               product({{"Pb=-5 dB", {{"system.p_b_db", "-5"}}}, {"Pb=20 dB", {{"system.p_b_db", "20"}}}},
                       {{"md=mb=1", {{"rd.m", "1"}, {"br.m", "1"}}}, {"md=mb=4", {{"rd.m", "4"}, {"br.m", "4"}}}}),
               Shape::NonIncreasing, true});

  r.push_back({"fig5", "SPSC (non-colluding) vs relay-destination SNR", "rd.phi_db",
               system_ii + "n_eav = 2\n" + links_text(15, 0, 1) + sweep_text("rd.phi_db", -10, 30, 2) +
                   "[run]\nmetric = spsc\n",
               product({{"Phi_re=0 dB", {{"re.phi_db", "0"}}}, {"Phi_re=5 dB", {{"re.phi_db", "5"}}}},
                       {{"me=1", {{"re.m", "1"}}}, {"me=4", {{"re.m", "4"}}}}),
               Shape::NonDecreasing, false});

  r.push_back({"fig6", "EST (colluding) vs target secrecy rate", "system.r_s",
               system_i + "p_b_db = 20\n[sr]\nwater = fresh\nh = 2.4\nl = 0.05\nepsilon = 1\nxi = 0.8\nphi_sr_db = 15\n" +
                   links_text(25, 0, 1) + sweep_text("system.r_s", 0.1, 3, 0.1) + "[run]\nmetric = est\n",
               {{"E=1", {{"system.n_eav", "1"}}}, {"E=2", {{"system.n_eav", "2"}}}, {"E=3", {{"system.n_eav", "3"}}}},
               Shape::Unimodal, false});

  r.push_back({"fig7", "SOP (colluding) vs beacon power", "system.p_b_db",
               system_i + "n_eav = 1\n[sr]\nwater = fresh\nh = 2.4\nl = 0.05\nepsilon = 2\nxi = 0.8\nphi_sr_db = 15\n" +
                   links_text(25, 0, 1) + sweep_text("system.p_b_db", -30, 30, 3) + "[run]\nmetric = sop\n",
               product({{"Gd=1", {{"rd.g", "1"}}}, {"Gd=2", {{"rd.g", "2"}}}, {"Gd=4", {{"rd.g", "4"}}}},
                       {{"Phi_re=0 dB", {{"re.phi_db", "0"}}}, {"Phi_re=5 dB", {{"re.phi_db", "5"}}}}),
               Shape::NonIncreasing, true});

  r.push_back({"fig8", "EST (colluding) vs beacon power", "system.p_b_db",
               system_i + "n_eav = 2\n[sr]\nwater = fresh\nh = 2.4\nl = 0.05\nepsilon = 2\nxi = 0.8\nphi_sr_db = 15\n" +
                   links_text(25, 0, 1) + "[br]\nm = 15\n" + sweep_text("system.p_b_db", -30, 30, 3) +
                   "[run]\nmetric = est\n",
               {{"Gb=1", {{"br.g", "1"}}}, {"Gb=2", {{"br.g", "2"}}}, {"Gb=4", {{"br.g", "4"}}}},
               Shape::NonDecreasing, false});

  r.push_back({"fig9", "SOP (colluding) vs beacon-relay SNR", "br.phi_db",
               system_i + "n_eav = 2\n[sr]\nwater = fresh\nh = 2.4\nl = 0.05\nepsilon = 2\nxi = 0.8\nphi_sr_db = 20\n" +
                   links_text(10, -10, 1) + sweep_text("br.phi_db", -10, 30, 2) + "[run]\nmetric = sop\n",
               product({{"Pb=0 dB", {{"system.p_b_db", "0"}}}, {"Pb=20 dB", {{"system.p_b_db", "20"}}}},
                       {{"Ge=1", {{"re.g", "1"}}}, {"Ge=2", {{"re.g", "2"}}}, {"Ge=4", {{"re.g", "4"}}}}),
               Shape::NonIncreasing, true});

  r.push_back({"fig10", "SPSC (colluding) vs relay-destination SNR", "rd.phi_db",
               system_i + "n_eav = 1\n" + links_text(15, 0, 1) + sweep_text("rd.phi_db", -10, 30, 2) +
                   "[run]\nmetric = spsc\n",
               product({{"Phi_re=0 dB", {{"re.phi_db", "0"}}}, {"Phi_re=5 dB", {{"re.phi_db", "5"}}}},
                       {{"kd=ke=1", {{"rd.kappa", "1"}, {"re.kappa", "1"}}},
                        {"kd=ke=5", {{"rd.kappa", "5"}, {"re.kappa", "5"}}}}),
               Shape::NonDecreasing, false});

  r.push_back({"fig11", "SPSC (non-colluding) vs relay-destination SNR", "rd.phi_db",
               system_ii + "n_eav = 2\n" + links_text(15, 0, 1) + "[rd]\nm = 4\n[re]\nm = 4\n" +
                   sweep_text("rd.phi_db", -10, 30, 2) + "[run]\nmetric = spsc\n",
               product({{"Phi_re=0 dB", {{"re.phi_db", "0"}}}, {"Phi_re=5 dB", {{"re.phi_db", "5"}}}},
                       {{"mud=mue=1", {{"rd.mu", "1"}, {"re.mu", "1"}}}, {"mud=mue=2", {{"rd.mu", "2"}, {"re.mu", "2"}}}}),
               Shape::NonDecreasing, false});

  r.push_back({"fig12", "EST vs relay-destination SNR, thermally uniform fresh water", "rd.phi_db",
               "[system]\nn_eav = 2\neta_r = 0.7\np_b_db = 20\nr_s = 0.05\n[sr]\nwater = fresh\nl = 0\nepsilon = 2\n"
               "xi = 0.8\nphi_sr_db = 15\n" +
                   links_text(15, 0, 1) + sweep_text("rd.phi_db", 0, 40, 2) + "[run]\nmetric = est\n",
               product({{"h=2.4", {{"sr.h", "2.4"}}}, {"h=4.7", {{"sr.h", "4.7"}}}, {"h=7.1", {{"sr.h", "7.1"}}}},
                       {{"colluding", {{"system.scenario", "colluding"}}},
                        {"non-colluding", {{"system.scenario", "noncolluding"}}}}),
               Shape::NonDecreasing, false});

  r.push_back({"fig13", "SOP vs relay-destination SNR", "rd.phi_db",
               "[system]\nn_eav = 2\np_b_db = 20\nr_s = 0.05\n[sr]\nwater = fresh\nh = 2.4\nl = 0.05\nepsilon = 1\n"
               "xi = 0.8\nphi_sr_db = 15\n" +
                   links_text(15, 0, 1) + sweep_text("rd.phi_db", 0, 40, 2) + "[run]\nmetric = sop\n",
               product({{"eta=0.35", {{"system.eta_r", "0.35"}}}, {"eta=0.7", {{"system.eta_r", "0.7"}}}},
                       {{"colluding", {{"system.scenario", "colluding"}}},
                        {"non-colluding", {{"system.scenario", "noncolluding"}}}}),
               Shape::NonIncreasing, true});

  std::vector<RecipeSeries> table_series;
  for (int e : TableReference::eavesdroppers) {
    table_series.push_back({"E=" + std::to_string(e), {{"system.n_eav", std::to_string(e)}}});
  }
  r.push_back({"table1", "EST (colluding) on the R_s grid", "system.r_s",
               system_i + "p_b_db = 20\n[sr]\nwater = fresh\nh = 2.4\nl = 0.05\nepsilon = 1\nxi = 0.8\nphi_sr_db = 15\n" +
                   links_text(25, 0, 1) + sweep_text("system.r_s", 1.1, 1.7, 0.05) + "[run]\nmetric = est\n",
               table_series, Shape::None, false});
  return r;
}

}  // namespace detail

inline const std::vector<Recipe>& recipes() {
  static const std::vector<Recipe> all = detail::build_recipes();
  return all;
}

inline const Recipe& find_recipe(const std::string& id) {
  for (const auto& r : recipes()) {
    if (r.id == id) return r;
  }
  std::string known;
  for (const auto& r : recipes()) known += (known.empty() ? "" : ", ") + r.id;
  throw ConfigError("unknown figure '" + id + "' (choose one of " + known + ")");
}

/// Parses the base text section by section so later sections may refine earlier ones.
inline ExperimentConfig recipe_config(const Recipe& r, const RecipeSeries& s) {
  ExperimentConfig cfg;
  std::string section;
  std::istringstream in(r.base);
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    if (line.front() == '[') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const auto eq = line.find(" = ");
    set_parameter(cfg, section + "." + line.substr(0, eq), line.substr(eq + 3));
  }
  for (const auto& [name, value] : s.overrides) set_parameter(cfg, name, value);
  validate(cfg);
  return cfg;
}

/// Checks `ys` against `shape` with an absolute slack for roundoff.
inline bool check_shape(Shape shape, const std::vector<double>& ys, double slack = 1e-12) {
  if (ys.size() < 2) return true;
  switch (shape) {
    case Shape::None: return true;
    case Shape::NonIncreasing:
      for (std::size_t i = 1; i < ys.size(); ++i) {
        if (ys[i] > ys[i - 1] + slack) return false;
      }
      return true;
    case Shape::NonDecreasing:
      for (std::size_t i = 1; i < ys.size(); ++i) {
        if (ys[i] < ys[i - 1] - slack) return false;
      }
      return true;
    case Shape::Unimodal: {
      const auto peak = static_cast<std::size_t>(std::max_element(ys.begin(), ys.end()) - ys.begin());
      if (peak == 0 || peak + 1 == ys.size()) return false;
      for (std::size_t i = 1; i <= peak; ++i) {
        if (ys[i] < ys[i - 1] - slack) return false;
      }
      for (std::size_t i = peak + 1; i < ys.size(); ++i) {
        if (ys[i] > ys[i - 1] + slack) return false;
      }
      return true;
    }
  }
  return false;
}

struct FigureSeriesResult {
  std::string label;
  std::vector<PointResult> points;
  bool shape_ok = true;
};

struct FigureResult {
  const Recipe* recipe = nullptr;
  std::vector<FigureSeriesResult> series;
  std::vector<std::string> notes;

  [[nodiscard]] bool shapes_ok() const {
    return std::all_of(series.begin(), series.end(), [](const auto& s) { return s.shape_ok; });
  }
};

struct FigureOptions {
  Engine engine = Engine::Analytic;
  std::int64_t n = 1'000'000;
  std::uint64_t seed = 1;
  std::string mode = "auto";
  int jobs = 1;
  double tol = 1e-12;
};

/// Runs every curve of a recipe, streaming rows to `csv` when given.
inline FigureResult run_figure(const Recipe& recipe, const Registry& registry, const FigureOptions& opts,
                               std::ostream* csv) {
  FigureResult out;
  out.recipe = &recipe;
  std::optional<CsvWriter> writer;
  if (csv != nullptr) writer.emplace(*csv, recipe.x_label);
  bool placeholder = false;
  for (const auto& s : recipe.series) {
    ExperimentConfig cfg = recipe_config(recipe, s);
    cfg.engine = opts.engine;
    cfg.n = opts.n;
    cfg.seed = opts.seed;
    cfg.mode = opts.mode;
    cfg.jobs = opts.jobs;
    cfg.tol = opts.tol;
    validate(cfg);
    const Model model = build_model(cfg, registry);
    if (model.registry_entry != nullptr && model.registry_entry->is_placeholder()) placeholder = true;
    FigureSeriesResult fs;
    fs.label = s.label;
    fs.points = run_sweep(cfg, registry, s.label, writer ? &*writer : nullptr);
    if (opts.engine != Engine::MC) {
      std::vector<double> ys;
      for (const auto& p : fs.points) ys.push_back(p.analytic->value);
      fs.shape_ok = check_shape(recipe.shape, ys);
    }
    out.series.push_back(std::move(fs));
  }
  if (placeholder) {
    out.notes.push_back("turbulence parameters are registry placeholders; absolute values are not comparable "
                        "with published curves");
  }
  return out;
}

inline std::string figure_svg(const FigureResult& f) {
  std::vector<PlotSeries> plot;
  for (const auto& s : f.series) {
    PlotSeries line{s.label, {}, {}, false};
    PlotSeries marks{s.label + " (MC)", {}, {}, true};
    for (const auto& p : s.points) {
      if (p.analytic) {
        line.x.push_back(p.x);
        line.y.push_back(p.analytic->value);
      }
      if (p.mc) {
        marks.x.push_back(p.x);
        marks.y.push_back(p.mc->mean);
      }
    }
    if (!line.x.empty()) plot.push_back(line);
    if (!marks.x.empty()) plot.push_back(marks);
  }
  const Recipe& r = *f.recipe;
  const std::string metric = r.base.find("metric = spsc") != std::string::npos ? "SPSC"
                             : r.base.find("metric = est") != std::string::npos ? "EST (bit/s/Hz)"
                                                                                : "SOP";
  return render_svg(r.id + ": " + r.title, r.x_label, metric, plot, r.log_y);
}

}  // namespace uowcsec::cli
