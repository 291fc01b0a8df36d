// Copyright 2026 The uowcsec Authors
// SPDX-License-Identifier: Apache-2.0

//! \file validate.hpp
//! Self-check suites behind `uowcsec validate`.
//!
//! `quick` covers kernel identities and normalizations at coarse tolerance;
//! `full` adds Kolmogorov-Smirnov tests at 10^6 draws and analytic-vs-MC
//! agreement. The report is JSON.

#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <nlohmann/json.hpp>

#include "uowcsec/channels.hpp"
#include "uowcsec/cli/experiment.hpp"
#include "uowcsec/cli/registry.hpp"
#include "uowcsec/cli/stats.hpp"
#include "uowcsec/mcsim.hpp"
#include "uowcsec/meijer_g.hpp"
#include "uowcsec/secrecy.hpp"
#include "uowcsec/specfun.hpp"

namespace uowcsec::cli {

enum class ValidateLevel { Quick, Full };

struct PropertyResult {
  std::string name;
  bool passed = false;
  nlohmann::json stats = nlohmann::json::object();
};

struct ValidateReport {
  ValidateLevel level = ValidateLevel::Quick;
  std::vector<PropertyResult> properties;
  std::vector<std::string> warnings;

  [[nodiscard]] bool passed() const {
    for (const auto& p : properties) {
      if (!p.passed) return false;
    }
    return true;
  }

  [[nodiscard]] nlohmann::json to_json() const {
    nlohmann::json j;
    j["level"] = level == ValidateLevel::Quick ? "quick" : "full";
    j["passed"] = passed();
    j["warnings"] = warnings;
    j["properties"] = nlohmann::json::array();
    for (const auto& p : properties) {
      j["properties"].push_back({{"name", p.name}, {"passed", p.passed}, {"stats", p.stats}});
    }
    return j;
  }
};

namespace detail {

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// Unit-mean optical channel from a registry entry.
inline channels::EGGChannel registry_channel(const TurbulenceRegistryEntry& e, int epsilon, double phi) {
  channels::EGGChannel ch;
  ch.omega = e.omega;
  ch.lambda_exp = e.lambda;
  ch.a = e.a;
  ch.b = e.b;
  ch.c = e.c;
  ch.xi = 0.8;
  ch.epsilon = epsilon;
  ch.phi_sr = phi;
  return ch;
}

inline double integrate(const std::function<double(double)>& f, double lo, double hi) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  return GK::integrate(f, lo, hi, 12, 1e-11);
}

/// ∫ of the optical PDF over (0, ∞); exp-sinh copes with the integrable
/// singularity at 0 and the algebraic tail.
inline double uowc_mass(const channels::EGGChannel& ch) {
  boost::math::quadrature::exp_sinh<double> es;
  return es.integrate([&](double g) { return g > 0.0 ? channels::uowc_pdf(g, ch) : 0.0; }, 1e-12);
}

}  // namespace detail

/// Runs the suite. `registry` supplies the optical parameters for the
/// normalization and KS checks (first entry, or a built-in set when empty).
inline ValidateReport run_validation(ValidateLevel level, const Registry& registry) {
  ValidateReport rep;
  rep.level = level;
  rep.warnings = registry.provenance_warnings();

  auto add = [&](const std::string& name, auto&& body) {
    PropertyResult p;
    p.name = name;
    try {
      p.passed = body(p.stats);
    } catch (const std::exception& e) {
      p.passed = false;
      p.stats["error"] = e.what();
    }
    rep.properties.push_back(std::move(p));
  };

  TurbulenceRegistryEntry entry;
  if (!registry.entries().empty()) {
    entry = registry.entries().front();
  } else {
    entry = {{"fresh", 2.4, 0.05}, 0.2, 0.3, 1.5, 1.0413, 2.0, "built-in"};
    rep.warnings.push_back("empty registry; using built-in optical parameters");
  }
  rep.warnings.push_back("optical checks use registry entry " + entry.key.address());

  add("special functions match reference values", [](nlohmann::json& s) {
    const double e1 = detail::rel_err(specfun::ln_gamma(7.3), 7.14789252302224903277705715443);
    const double e2 = detail::rel_err(specfun::reg_lower_gamma(3.5, 2.0), 0.220222591524284079071761600081);
    const double e3 = detail::rel_err(specfun::bessel_k(3.0, 1.7), 1.1783157298719842964993341698);
    const double e4 = detail::rel_err(specfun::hyp1f1(2.0, 3.0, 1.5).value, 2.88075069792802881004535798228);
    s["ln_gamma"] = e1;
    s["reg_lower_gamma"] = e2;
    s["bessel_k"] = e3;
    s["hyp1f1"] = e4;
    return std::max({e1, e2, e3, e4}) < 1e-12;
  });

  add("Meijer G residue series matches the incomplete-gamma identity", [](nlohmann::json& s) {
    // G^{2,0}_{1,2}(z | k+1 ; s, k) = z^k Γ(s − k, z)
    double worst = 0.0;
    for (double z : {0.01, 0.3, 1.0, 4.0, 20.0}) {
      const double g = specfun::meijer_g(specfun::meijer_g_2012(1.64, 1.0, 0.64), z).value;
      const double ref = std::pow(z, 0.64) * boost::math::tgamma(0.36, z);
      worst = std::max(worst, detail::rel_err(g, ref));
    }
    s["max_rel_err"] = worst;
    return worst < 1e-10;
  });

  add("Meijer G residue series matches the contour-integral oracle", [](nlohmann::json& s) {
    double worst = 0.0;
    for (double z : {0.05, 0.7, 3.0}) {
      const auto spec = specfun::meijer_g_2123(1.32, 1.5, 0.32);
      worst = std::max(worst, detail::rel_err(specfun::meijer_g(spec, z).value, specfun::mellin_barnes_oracle(spec, z)));
    }
    s["max_rel_err"] = worst;
    return worst < 1e-8;
  });

  for (int eps : {1, 2}) {
    add("optical PDF integrates to one (epsilon = " + std::to_string(eps) + ")", [&](nlohmann::json& s) {
      const double mass = detail::uowc_mass(detail::registry_channel(entry, eps, 31.6));
      s["mass"] = mass;
      return std::abs(mass - 1.0) < 1e-6;
    });
  }

  add("kappa-mu shadowed PDF integrates to one with mean Phi", [](nlohmann::json& s) {
    const channels::KMSChannel ch{1.0, 1.0, 2.0, 2, 31.6};
    const double q = 40.0 * ch.phi;
    const double mass = detail::integrate([&](double g) { return g > 0.0 ? channels::kms_pdf(g, ch) : 0.0; }, 0.0, q);
    const double mean =
        detail::integrate([&](double g) { return g > 0.0 ? g * channels::kms_pdf(g, ch) : 0.0; }, 0.0, q);
    s["mass"] = mass;
    s["mean_rel_err"] = detail::rel_err(mean, ch.phi);
    return std::abs(mass - 1.0) < 1e-6 && detail::rel_err(mean, ch.phi) < 1e-4;
  });

  add("hypergeometric and series forms of the kappa-mu shadowed PDF agree", [](nlohmann::json& s) {
    const channels::KMSChannel ch{1.0, 1.0, 2.0, 2, 31.6};
    double worst = 0.0;
    for (double g : {0.1, 3.0, 30.0, 150.0}) {
      worst = std::max(worst, detail::rel_err(channels::kms_pdf_series(g, ch).value, channels::kms_pdf(g, ch)));
    }
    s["max_rel_err"] = worst;
    return worst < 1e-11;
  });

  add("single eavesdropper: colluding and non-colluding metrics coincide", [&](nlohmann::json& s) {
    secrecy::SystemConfig cfg;
    cfg.n_eav = 1;
    const secrecy::Links links{detail::registry_channel(entry, 1, 31.6), {1, 1, 2, 2, 31.6}, {1, 1, 2, 2, 1.0},
                               {1, 1, 2, 2, 1.26}};
    cfg.scenario = secrecy::Scenario::Colluding;
    const double a = secrecy::sop(cfg, links).value;
    const double c = secrecy::spsc(cfg, links).value;
    cfg.scenario = secrecy::Scenario::NonColluding;
    const double b = secrecy::sop(cfg, links).value;
    const double d = secrecy::spsc(cfg, links).value;
    s["sop_diff"] = std::abs(a - b);
    s["spsc_diff"] = std::abs(c - d);
    return std::abs(a - b) < 1e-6 && std::abs(c - d) < 1e-6;
  });

  add("SPSC is one half for exchangeable links", [](nlohmann::json& s) {
    secrecy::SystemConfig cfg;
    const channels::KMSChannel ch{1.0, 1.0, 2.0, 2, 10.0};
    const double v = secrecy::spsc(cfg, {{}, ch, ch, ch}).value;
    s["spsc"] = v;
    return std::abs(v - 0.5) < 1e-9;
  });

  if (level == ValidateLevel::Quick) return rep;

  const int n_ks = 1'000'000;
  for (int eps : {1, 2}) {
    add("optical sampler passes KS at alpha = 0.01 (epsilon = " + std::to_string(eps) + ")", [&](nlohmann::json& s) {
      const auto ch = detail::registry_channel(entry, eps, 31.6);
      RandomStream rng(20260101, static_cast<std::uint64_t>(eps));
      std::vector<double> xs(n_ks);
      for (auto& x : xs) x = channels::sample_uowc(ch, rng);
      const auto ks = ks_test(xs, [&](double g) { return channels::uowc_cdf(g, ch); });
      s["D"] = ks.statistic;
      s["p_value"] = ks.p_value;
      s["n"] = ks.n;
      return ks.p_value > 0.01;
    });
  }

  add("kappa-mu shadowed sampler passes KS at alpha = 0.01", [&](nlohmann::json& s) {
    const channels::KMSChannel ch{1.0, 1.0, 2.0, 2, 31.6};
    const channels::KMSSampler sampler(ch);
    RandomStream rng(20260102, 0);
    std::vector<double> xs(n_ks);
    for (auto& x : xs) x = sampler(rng);
    const auto ks = ks_test(xs, [&](double g) { return channels::kms_cdf(g, ch); });
    s["D"] = ks.statistic;
    s["p_value"] = ks.p_value;
    s["n"] = ks.n;
    return ks.p_value > 0.01;
  });

  add("non-colluding mixture expansion matches n F^(n-1) f", [](nlohmann::json& s) {
    const channels::KMSChannel ch{1.0, 1.0, 2.0, 2, 1.0};
    channels::NonCollidingOptions opts;
    opts.max_f1 = 100;
    double worst = 0.0;
    for (int n : {2, 3}) {
      for (double g : {0.05, 1.0, 5.0}) {
        worst = std::max(worst, channels::noncolluding_pdf_check(g, ch, n, {}, opts).discrepancy());
      }
    }
    s["max_discrepancy"] = worst;
    return worst < 1e-9;
  });

  for (auto scenario : {secrecy::Scenario::Colluding, secrecy::Scenario::NonColluding}) {
    add(std::string("analytic SOP and SPSC inside the MC 3-sigma interval (") + secrecy::to_string(scenario) + ")",
        [&](nlohmann::json& s) {
          secrecy::SystemConfig cfg;
          cfg.scenario = scenario;
          cfg.n_eav = 2;
          const secrecy::Links links{detail::registry_channel(entry, 1, 31.6), {1, 1, 2, 2, 31.6},
                                     {1, 1, 2, 2, 1.0}, {1, 1, 2, 2, 1.26}};
          const auto mode = mcsim::default_mode(scenario);
          const auto counts = mcsim::simulate(cfg, links, 1'000'000, 99, mode);
          const double sop = secrecy::sop(cfg, links).value;
          const double spsc = secrecy::spsc(cfg, links).value;
          const auto ms = mcsim::sop_estimate(counts, 99, mode);
          const auto mp = mcsim::spsc_estimate(counts, 99, mode);
          s["sop"] = {sop, ms.mean, ms.sigma()};
          s["spsc"] = {spsc, mp.mean, mp.sigma()};
          return std::abs(sop - ms.mean) <= 3.0 * ms.sigma() && std::abs(spsc - mp.mean) <= 3.0 * mp.sigma();
        });
  }
  return rep;
}

}  // namespace uowcsec::cli
