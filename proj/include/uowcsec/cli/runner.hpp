// Copyright 2026 The uowcsec Authors
// SPDX-License-Identifier: Apache-2.0

//! \file runner.hpp
//! Point evaluation and parameter sweeps shared by the CLI subcommands.

#pragma once

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "uowcsec/cli/experiment.hpp"
#include "uowcsec/cli/output.hpp"
#include "uowcsec/mcsim.hpp"
#include "uowcsec/secrecy.hpp"

namespace uowcsec::cli {

struct PointResult {
  double x = NAN;  // swept value; NaN for a single point
  std::optional<secrecy::MetricResult> analytic;
  std::optional<mcsim::MCEstimate> mc;
};

inline secrecy::MetricResult analytic_metric(Metric metric, const Model& model, double tol) {
  specfun::SeriesControl ctl;
  ctl.rel_tol = tol;
  switch (metric) {
    case Metric::SOP: return secrecy::sop(model.system, model.links, ctl);
    case Metric::SPSC: return secrecy::spsc(model.system, model.links, ctl);
    case Metric::EST: return secrecy::est_metric(model.system, model.links, ctl);
  }
  throw ConfigError("unknown metric");
}

inline mcsim::MCEstimate mc_metric(Metric metric, const Model& model, const ExperimentConfig& cfg) {
  const mcsim::Mode mode = resolve_mode(cfg.mode, cfg.scenario);
  mcsim::MCOptions opts;
  opts.jobs = cfg.jobs;
  const mcsim::Counts counts = mcsim::simulate(model.system, model.links, cfg.n, cfg.seed, mode, opts);
  switch (metric) {
    case Metric::SOP: return mcsim::sop_estimate(counts, cfg.seed, mode);
    case Metric::SPSC: return mcsim::spsc_estimate(counts, cfg.seed, mode);
    case Metric::EST: return mcsim::est_estimate(model.system, counts, cfg.seed, mode);
  }
  throw ConfigError("unknown metric");
}

inline PointResult evaluate_point(const ExperimentConfig& cfg, const Registry& registry) {
  const Model model = build_model(cfg, registry);
  PointResult r;
  if (cfg.engine != Engine::MC) r.analytic = analytic_metric(cfg.metric, model, cfg.tol);
  if (cfg.engine != Engine::Analytic) r.mc = mc_metric(cfg.metric, model, cfg);
  return r;
}

/// CSV rows of one point: one per engine that ran.
inline std::vector<CsvRow> to_rows(const PointResult& p, const std::string& series, Metric metric) {
  std::vector<CsvRow> rows;
  if (p.analytic) {
    CsvRow r;
    r.series = series;
    r.x = p.x;
    r.metric = to_string(metric);
    r.engine = "analytic";
    r.value = p.analytic->value;
    r.terms_used = format_terms(p.analytic->terms_used);
    r.warnings = join(p.analytic->warnings, "|");
    rows.push_back(r);
  }
  if (p.mc) {
    CsvRow r;
    r.series = series;
    r.x = p.x;
    r.metric = to_string(metric);
    r.engine = std::string("mc-") + mcsim::to_string(p.mc->mode);
    r.value = p.mc->mean;
    r.ci_low = p.mc->ci_low();
    r.ci_high = p.mc->ci_high();
    r.n = p.mc->n;
    if (p.mc->low_confidence) r.warnings = "low confidence: fewer than 10 events or non-events";
    rows.push_back(r);
  }
  return rows;
}

/// True when the analytic value lies within `k` binomial standard deviations of the MC estimate.
inline bool within_sigma(const PointResult& p, double k = 3.0) {
  if (!p.analytic || !p.mc) return true;
  const double scale = p.mc->sigma() > 0.0 ? p.mc->sigma() : 1.0 / static_cast<double>(p.mc->n);
  return std::abs(p.analytic->value - p.mc->mean) <= k * scale;
}

/// Evaluates every sweep point (or the single point), writing rows in sweep order.
///
/// Analytic-only sweeps run up to `cfg.jobs` points concurrently; with MC the
/// parallelism goes to the trial chunks instead.
inline std::vector<PointResult> run_sweep(const ExperimentConfig& cfg, const Registry& registry,
                                          const std::string& series, CsvWriter* csv) {
  validate(cfg);
  std::vector<double> xs = cfg.sweep.values();
  const bool single = xs.empty();
  if (single) xs.push_back(NAN);
  std::vector<ExperimentConfig> configs;
  configs.reserve(xs.size());
  for (double x : xs) {
    ExperimentConfig c = cfg;
    if (!single) {
      set_parameter(c, cfg.sweep.parameter, x);
      validate(c);
    }
    configs.push_back(c);
  }

  std::vector<PointResult> out(xs.size());
  const std::size_t width =
      cfg.engine == Engine::Analytic ? static_cast<std::size_t>(std::max(1, cfg.jobs)) : std::size_t{1};
  for (std::size_t begin = 0; begin < xs.size(); begin += width) {
    const std::size_t end = std::min(xs.size(), begin + width);
    if (end - begin == 1) {
      out[begin] = evaluate_point(configs[begin], registry);
    } else {
      std::vector<std::exception_ptr> errors(end - begin);
      std::vector<std::thread> pool;
      for (std::size_t i = begin; i < end; ++i) {
        pool.emplace_back([&, i] {
          try {
            out[i] = evaluate_point(configs[i], registry);
          } catch (...) {
            errors[i - begin] = std::current_exception();
          }
        });
      }
      for (auto& t : pool) t.join();
      for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }
    for (std::size_t i = begin; i < end; ++i) {
      out[i].x = xs[i];
      if (csv != nullptr) {
        for (const auto& row : to_rows(out[i], series, cfg.metric)) csv->write(row);
      }
    }
  }
  return out;
}

}  // namespace uowcsec::cli
