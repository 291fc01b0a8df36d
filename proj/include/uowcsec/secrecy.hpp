// Copyright 2026 The uowcsec Authors
// SPDX-License-Identifier: Apache-2.0

//! \file secrecy.hpp
//! Secrecy outage probability (SOP), probability of strictly positive secrecy
//! capacity (SPSC) and effective secrecy throughput (EST) of the
//! optical-to-RF decode-and-forward relay with a wireless-powered relay.
//!
//! Notation used below. With B the beacon-to-relay gain, X the relay-to-
//! destination gain and Y the (combined or strongest) eavesdropper gain scaled
//! by N_d/N_e, the second hop is secure at rate R_s iff B (X − θY) ≥ D₀, where
//! θ = 2^{2R_s} and D₀ = (θ − 1) N_d / (η_r P_b). All three gains are gamma
//! mixtures. X and B have integer shapes, which makes the closed form finite in
//! the inner indices:
//!
//!   Pr{secure} = Σ_e w_e Σ_{t₁ ≤ j_e} M(t₁) R(j_e − t₁)
//!
//! M(t₁) is the probability that θY is exhausted after exactly t₁ stages of the
//! Erlang variate X (a negative binomial per Y component) and R(j) is
//! Pr{B · Gamma(j + 1, Ξ₂) ≥ D₀}, a finite sum of Bessel-K terms.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "uowcsec/channels.hpp"
#include "uowcsec/errors.hpp"
#include "uowcsec/specfun.hpp"

namespace uowcsec::secrecy {

using channels::EGGChannel;
using channels::GammaMixture;
using channels::KMSChannel;
using channels::NonCollidingOptions;
using specfun::SeriesControl;

enum class Scenario { Colluding, NonColluding };

inline const char* to_string(Scenario s) { return s == Scenario::Colluding ? "colluding" : "noncolluding"; }

struct SystemConfig {
  double eta_r = 0.7;  // energy conversion efficiency
  double p_b = 100.0;  // beacon power, linear
  double n_d = 1.0;    // destination noise power
  double n_e = 1.0;    // eavesdropper noise power
  double r_s = 0.05;   // target secrecy rate, bit/s/Hz
  Scenario scenario = Scenario::Colluding;
  int n_eav = 1;

  void validate() const {
    if (!(eta_r > 0.0 && eta_r <= 1.0)) throw ConfigError("SystemConfig.eta_r must lie in (0, 1]");
    if (!(p_b > 0.0) || !std::isfinite(p_b)) throw ConfigError("SystemConfig.p_b must be positive");
    if (!(n_d > 0.0) || !std::isfinite(n_d)) throw ConfigError("SystemConfig.n_d must be positive");
    if (!(n_e > 0.0) || !std::isfinite(n_e)) throw ConfigError("SystemConfig.n_e must be positive");
    if (!(r_s > 0.0) || !std::isfinite(r_s)) throw ConfigError("SystemConfig.r_s must be positive");
    if (n_eav < 1) throw ConfigError("SystemConfig.n_eav must be >= 1");
  }
};

/// The four links of the network.
struct Links {
  EGGChannel sr;
  KMSChannel rd;
  KMSChannel re;
  KMSChannel br;
};

/// Rate threshold and the SNR offset of the secure-hop event.
struct SOPDerived {
  double theta = 1.0;         // 2^{2 R_s}
  double theta_minus_1 = 0.0; // θ − 1, computed without cancellation
  double d0 = 0.0;            // (θ − 1) N_d / (η_r P_b)
};

/// Smallest target rate used by the closed forms; below it D₀ underflows the
/// Bessel kernel. SPSC is the R_s → 0 object.
inline constexpr double kMinRate = 1e-9;

inline SOPDerived sop_derived(const SystemConfig& cfg) {
  const double rs = std::max(cfg.r_s, kMinRate);
  SOPDerived d;
  d.theta_minus_1 = std::expm1(2.0 * rs * std::numbers::ln2);
  d.theta = 1.0 + d.theta_minus_1;
  d.d0 = d.theta_minus_1 * cfg.n_d / (cfg.eta_r * cfg.p_b);
  return d;
}

struct MetricResult {
  double value = 0.0;
  std::map<std::string, int> terms_used;
  double tail_estimate = 0.0;
  std::vector<std::string> warnings;
};

/// Pr{C_sr ≥ R_s} = 1 − F_sr(θ − 1).
inline double prob_csr_exceeds(double rs, const EGGChannel& ch_sr, const SeriesControl& ctl = {}) {
  if (!(rs > 0.0)) throw DomainError("prob_csr_exceeds: rate must be positive");
  const double threshold = std::expm1(2.0 * rs * std::numbers::ln2);
  return 1.0 - channels::uowc_cdf(threshold, ch_sr, ctl);
}

/// R_s (1 − SOP).
inline double est(const SystemConfig& cfg, double sop_value) {
  if (!(sop_value >= 0.0 && sop_value <= 1.0)) throw DomainError("est: SOP must lie in [0, 1]");
  return cfg.r_s * (1.0 - sop_value);
}

namespace detail {

inline constexpr double kClampLimit = 1e-9;

inline void require_integral(const KMSChannel& ch, const char* link) {
  if (!ch.has_integral_shape()) {
    throw ConfigError(std::string("the closed forms need an integer G*mu on the ") + link +
                      " link (got " + std::to_string(ch.shape()) + ")");
  }
}

/// Eavesdropper link as seen against the destination noise level.
inline KMSChannel scaled_eavesdropper(const SystemConfig& cfg, const KMSChannel& ch_re) {
  KMSChannel out = ch_re;
  out.phi = ch_re.phi * cfg.n_d / cfg.n_e;
  return out;
}

/// Law of Y for the scenario.
inline GammaMixture eavesdropper_mixture(const SystemConfig& cfg, const KMSChannel& ch_re, const SeriesControl& ctl,
                                         const NonCollidingOptions& nc, MetricResult& out) {
  const KMSChannel eff = scaled_eavesdropper(cfg, ch_re);
  const double tol = std::min(ctl.rel_tol, 1e-13);
  if (cfg.scenario == Scenario::Colluding || cfg.n_eav == 1) {
    GammaMixture mix = channels::kms_mixture(channels::colluding_channel(eff, cfg.n_eav), tol, ctl.max_terms);
    out.terms_used["f"] = static_cast<int>(mix.components.size());
    return mix;
  }
  require_integral(eff, "relay-eavesdropper");
  channels::NonCollidingLaw law(eff, cfg.n_eav, ctl, nc);
  for (const auto& w : law.warnings()) out.warnings.push_back(w);
  out.terms_used["f1"] = law.f1_count();
  out.terms_used["compositions"] = static_cast<int>(law.compositions_used());
  out.terms_used["components"] = static_cast<int>(law.mixture().components.size());
  return law.mixture();
}

/// Normalized mixture weights of a link with integer shape (index = j − j₀).
struct IntegerMixture {
  std::vector<double> weights;
  int base_shape = 1;  // shape of component 0
  double rate = 1.0;
  double tail = 0.0;

  [[nodiscard]] int max_order() const { return base_shape - 1 + static_cast<int>(weights.size()) - 1; }
};

inline IntegerMixture integer_mixture(const KMSChannel& ch, const SeriesControl& ctl) {
  const auto k = channels::kms_coeffs(ch);
  const auto table = channels::kms_weight_table(k, std::min(ctl.rel_tol, 1e-13), ctl.max_terms);
  IntegerMixture m;
  m.weights = table.weights;
  m.base_shape = static_cast<int>(std::lround(k.g_mu));
  m.rate = k.xi2;
  m.tail = table.tail_mass;
  return m;
}

/// M(t) = Σ_f v_f NB(t; shape_f, ρ_f), ρ_f = (b_f/θ) / (Ξ₂ + b_f/θ), for t = 0..t_max.
inline std::vector<double> stage_law(const GammaMixture& y, double rate_x, double theta, int t_max) {
  std::vector<double> m(static_cast<std::size_t>(t_max + 1), 0.0);
  for (const auto& c : y.components) {
    if (c.weight == 0.0) continue;
    const double beta = c.rate / theta;
    const double rho = beta / (rate_x + beta);
    const double log_q = std::log1p(-rho);
    const double sign = c.weight < 0.0 ? -1.0 : 1.0;
    double log_nb = std::log(std::abs(c.weight)) + c.shape * std::log(rho);
    for (int t = 0; t <= t_max; ++t) {
      m[static_cast<std::size_t>(t)] += sign * std::exp(log_nb);
      log_nb += std::log((c.shape + t) / (t + 1.0)) + log_q;
    }
  }
  return m;
}

/// R(j) = Pr{B · Gamma(j + 1, rate_x) ≥ d0}, j = 0..j_max, via Bessel-K terms.
inline std::vector<double> beacon_law(const IntegerMixture& b, double rate_x, double d0, int j_max, int& bessel_terms) {
  // U(t) = total weight of beacon components with J_g ≥ t.
  const int t_max = b.max_order();
  std::vector<double> u(static_cast<std::size_t>(t_max + 1), 0.0);
  {
    double acc = 0.0;
    for (int t = t_max; t >= 0; --t) {
      const int g = t - (b.base_shape - 1);
      if (g >= 0) acc += b.weights[static_cast<std::size_t>(g)];
      u[static_cast<std::size_t>(t)] = acc;
    }
  }
  const double arg = 2.0 * std::sqrt(rate_x * b.rate * d0);
  const double log_d0b = std::log(d0 * b.rate);
  const double log_ratio = std::log(b.rate * d0 / rate_x);
  const double log_rate_x = std::log(rate_x);
  std::vector<double> r(static_cast<std::size_t>(j_max + 1), 0.0);
  bessel_terms = 0;
  for (int j = 0; j <= j_max; ++j) {
    const double base = std::numbers::ln2 + (j + 1.0) * log_rate_x - specfun::ln_gamma(j + 1.0);
    double sum = 0.0;
    for (int t = 0; t <= t_max; ++t) {
      if (u[static_cast<std::size_t>(t)] <= 0.0) continue;
      const double nu = j - t + 1.0;
      const double log_q = base + t * log_d0b - specfun::ln_gamma(t + 1.0) + 0.5 * nu * log_ratio +
                           specfun::log_bessel_k(nu, arg);
      sum += std::exp(log_q) * u[static_cast<std::size_t>(t)];
      ++bessel_terms;
    }
    r[static_cast<std::size_t>(j)] = sum;
  }
  return r;
}

inline double clamp_probability(double v, const char* what, MetricResult& out) {
  if (v < -kClampLimit || v > 1.0 + kClampLimit) {
    throw NumericalError(std::string(what) + " evaluated to " + std::to_string(v) +
                         ", outside [0, 1] beyond roundoff; the series did not converge");
  }
  if (v < 0.0 || v > 1.0) {
    out.warnings.push_back(std::string(what) + " clamped from " + std::to_string(v));
    return std::clamp(v, 0.0, 1.0);
  }
  return v;
}

/// Pr{B (X − θY) ≥ D₀, X > θY}; with `with_beacon == false`, Pr{X > θY}.
inline double secure_hop(const IntegerMixture& x, const GammaMixture& y, const IntegerMixture* beacon, double theta,
                         double d0, MetricResult& out) {
  const int j_max = x.max_order();
  const std::vector<double> m = stage_law(y, x.rate, theta, j_max);
  std::vector<double> r(static_cast<std::size_t>(j_max + 1), 1.0);
  if (beacon != nullptr) {
    int bessel_terms = 0;
    r = beacon_law(*beacon, x.rate, d0, j_max, bessel_terms);
    out.terms_used["g1"] = static_cast<int>(beacon->weights.size());
    out.terms_used["bessel"] = bessel_terms;
  }
  double total = 0.0;
  for (std::size_t e = 0; e < x.weights.size(); ++e) {
    const int j = x.base_shape - 1 + static_cast<int>(e);
    double inner = 0.0;
    for (int t = 0; t <= j; ++t) inner += m[static_cast<std::size_t>(t)] * r[static_cast<std::size_t>(j - t)];
    total += x.weights[e] * inner;
  }
  out.terms_used["e1"] = static_cast<int>(x.weights.size());
  out.terms_used["t1"] = j_max + 1;
  out.tail_estimate += x.tail + y.tail_mass + (beacon ? beacon->tail : 0.0);
  return total;
}

inline MetricResult sop_impl(const SystemConfig& cfg, const Links& links, const SeriesControl& ctl,
                             const NonCollidingOptions& nc) {
  cfg.validate();
  ctl.validate();
  require_integral(links.rd, "relay-destination");
  require_integral(links.br, "beacon-relay");
  MetricResult out;
  if (cfg.r_s < kMinRate) out.warnings.push_back("target rate floored at 1e-9");
  const SOPDerived d = sop_derived(cfg);
  const IntegerMixture x = integer_mixture(links.rd, ctl);
  const IntegerMixture b = integer_mixture(links.br, ctl);
  const GammaMixture y = eavesdropper_mixture(cfg, links.re, ctl, nc, out);
  const double secure = clamp_probability(secure_hop(x, y, &b, d.theta, d.d0, out), "second-hop non-outage", out);
  const double first = 1.0 - channels::uowc_cdf(d.theta_minus_1, links.sr, ctl);
  out.value = clamp_probability(1.0 - first * secure, "SOP", out);
  return out;
}

inline MetricResult spsc_impl(const SystemConfig& cfg, const KMSChannel& ch_rd, const KMSChannel& ch_re,
                              const SeriesControl& ctl, const NonCollidingOptions& nc) {
  cfg.validate();
  ctl.validate();
  require_integral(ch_rd, "relay-destination");
  MetricResult out;
  const IntegerMixture x = integer_mixture(ch_rd, ctl);
  const GammaMixture y = eavesdropper_mixture(cfg, ch_re, ctl, nc, out);
  out.value = clamp_probability(secure_hop(x, y, nullptr, 1.0, 0.0, out), "SPSC", out);
  return out;
}

}  // namespace detail

/// SOP with colluding eavesdroppers (MRC of all n_eav receptions).
inline MetricResult sop_colluding(const SystemConfig& cfg, const EGGChannel& ch_sr, const KMSChannel& ch_rd,
                                  const KMSChannel& ch_re, const KMSChannel& ch_br, const SeriesControl& ctl = {}) {
  SystemConfig c = cfg;
  c.scenario = Scenario::Colluding;
  return detail::sop_impl(c, {ch_sr, ch_rd, ch_re, ch_br}, ctl, {});
}

/// SOP against the strongest of n_eav non-colluding eavesdroppers.
inline MetricResult sop_noncolluding(const SystemConfig& cfg, const EGGChannel& ch_sr, const KMSChannel& ch_rd,
                                     const KMSChannel& ch_re, const KMSChannel& ch_br, const SeriesControl& ctl = {},
                                     const NonCollidingOptions& nc = {}) {
  SystemConfig c = cfg;
  c.scenario = Scenario::NonColluding;
  return detail::sop_impl(c, {ch_sr, ch_rd, ch_re, ch_br}, ctl, nc);
}

inline MetricResult spsc_colluding(const SystemConfig& cfg, const KMSChannel& ch_rd, const KMSChannel& ch_re,
                                   const SeriesControl& ctl = {}) {
  SystemConfig c = cfg;
  c.scenario = Scenario::Colluding;
  return detail::spsc_impl(c, ch_rd, ch_re, ctl, {});
}

inline MetricResult spsc_noncolluding(const SystemConfig& cfg, const KMSChannel& ch_rd, const KMSChannel& ch_re,
                                      const SeriesControl& ctl = {}, const NonCollidingOptions& nc = {}) {
  SystemConfig c = cfg;
  c.scenario = Scenario::NonColluding;
  return detail::spsc_impl(c, ch_rd, ch_re, ctl, nc);
}

/// SOP for the scenario selected in `cfg`.
inline MetricResult sop(const SystemConfig& cfg, const Links& links, const SeriesControl& ctl = {},
                        const NonCollidingOptions& nc = {}) {
  return detail::sop_impl(cfg, links, ctl, nc);
}

/// SPSC for the scenario selected in `cfg`.
inline MetricResult spsc(const SystemConfig& cfg, const Links& links, const SeriesControl& ctl = {},
                         const NonCollidingOptions& nc = {}) {
  return detail::spsc_impl(cfg, links.rd, links.re, ctl, nc);
}

/// EST for the scenario selected in `cfg`, with the SOP diagnostics.
inline MetricResult est_metric(const SystemConfig& cfg, const Links& links, const SeriesControl& ctl = {},
                               const NonCollidingOptions& nc = {}) {
  MetricResult r = sop(cfg, links, ctl, nc);
  r.value = est(cfg, r.value);
  return r;
}

}  // namespace uowcsec::secrecy
