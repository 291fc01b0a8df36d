// Copyright 2026 The uowcsec Authors
// SPDX-License-Identifier: Apache-2.0

//! \file channels.hpp
//! SNR laws of the three link families:
//!  - the mixture exponential / generalized-Gamma optical link with pointing
//!    error (EGGChannel),
//!  - κ-μ shadowed RF links with G-antenna MRC (KMSChannel),
//!  - the two multi-eavesdropper laws built on the latter (colluding MRC and
//!    the best of several non-colluding eavesdroppers).
//!
//! The κ-μ shadowed SNR is an infinite gamma mixture: component e has shape
//! Gμ + e, rate Ξ₂ = Gμ(1+κ)/Φ and a negative-binomial weight with size Gm and
//! success ratio μκ/(μκ + m). Most evaluators below work from that mixture.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "uowcsec/compositions.hpp"
#include "uowcsec/errors.hpp"
#include "uowcsec/meijer_g.hpp"
#include "uowcsec/random.hpp"
#include "uowcsec/specfun.hpp"

namespace uowcsec::channels {

using specfun::SeriesControl;

// ===========================================================================
// Optical link
// ===========================================================================

/// Mixture exponential-generalized-Gamma turbulence with pointing error.
struct EGGChannel {
  double omega = 0.5;       // weight of the exponential branch
  double lambda_exp = 1.0;  // mean of the exponential branch
  double a = 1.0;           // generalized-Gamma shape
  double b = 1.0;           // generalized-Gamma scale
  double c = 1.0;           // generalized-Gamma power
  double xi = 1.0;          // pointing-error severity
  int epsilon = 1;          // 1: heterodyne, 2: intensity modulation / direct detection
  double phi_sr = 1.0;      // average electrical SNR, linear

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string("EGGChannel.") + name + " must be positive");
    };
    if (!(omega > 0.0 && omega < 1.0)) throw DomainError("EGGChannel.omega must lie in (0, 1)");
    positive(lambda_exp, "lambda");
    positive(a, "a");
    positive(b, "b");
    positive(c, "c");
    positive(xi, "xi");
    positive(phi_sr, "phi_sr");
    if (epsilon != 1 && epsilon != 2) throw DomainError("EGGChannel.epsilon must be 1 or 2");
  }
};

/// Coefficients of the optical SNR law; index 0 is the exponential branch,
/// index 1 the generalized-Gamma branch.
struct EGGCoeffs {
  double B[2]{};  // PDF weights
  double Z[2]{};  // argument scales
  double V[2]{};  // argument powers
  double W[2]{};  // upper parameter
  double S[2]{};  // first lower parameter
  double K[2]{};  // second lower parameter
  double Y[2]{};  // CDF weights
  double psi1 = 0.0;
  double psi2 = 0.0;
  double psi = 0.0;  // electrical SNR of the selected detector
};

/// E[I] of the turbulence mixture.
inline double egg_mean_irradiance(double omega, double lambda_exp, double a, double b, double c) {
  return omega * lambda_exp +
         (1.0 - omega) * b * std::exp(specfun::ln_gamma(a + 1.0 / c) - specfun::ln_gamma(a));
}

/// E[I^2] of the turbulence mixture.
inline double egg_second_moment(double omega, double lambda_exp, double a, double b, double c) {
  return 2.0 * omega * lambda_exp * lambda_exp +
         (1.0 - omega) * b * b * std::exp(specfun::ln_gamma(a + 2.0 / c) - specfun::ln_gamma(a));
}

inline EGGCoeffs egg_coeffs(const EGGChannel& ch) {
  ch.validate();
  EGGCoeffs k;
  const double eps = ch.epsilon;
  const double xi2 = ch.xi * ch.xi;
  k.psi1 = ch.phi_sr;
  k.psi2 = ch.phi_sr / egg_second_moment(ch.omega, ch.lambda_exp, ch.a, ch.b, ch.c);
  k.psi = ch.epsilon == 1 ? k.psi1 : k.psi2;
  const double gamma_a = std::tgamma(ch.a);

  k.B[0] = ch.omega * xi2 / eps;
  k.B[1] = xi2 * (1.0 - ch.omega) / (eps * gamma_a);
  k.Z[0] = 1.0 / (ch.lambda_exp * std::pow(k.psi, 1.0 / eps));
  k.Z[1] = 1.0 / (std::pow(ch.b, ch.c) * std::pow(k.psi, ch.c / eps));
  k.V[0] = 1.0 / eps;
  k.V[1] = ch.c / eps;
  k.W[0] = xi2 + 1.0;
  k.W[1] = xi2 / ch.c + 1.0;
  k.S[0] = 1.0;
  k.S[1] = ch.a;
  k.K[0] = xi2;
  k.K[1] = xi2 / ch.c;
  k.Y[0] = ch.omega * xi2;
  k.Y[1] = xi2 * (1.0 - ch.omega) / (ch.c * gamma_a);
  return k;
}

namespace detail {
inline constexpr double kFarArgument = 1000.0;
}  // namespace detail

/// PDF of the optical SNR.
inline double uowc_pdf(double gamma, const EGGChannel& ch, const SeriesControl& ctl = {}) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("uowc_pdf: gamma must be positive");
  const EGGCoeffs k = egg_coeffs(ch);
  double total = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double z = k.Z[i] * std::pow(gamma, k.V[i]);
    // Beyond kFarArgument the term is below e^{-z} and vanishes in double.
    if (z == 0.0 || z > detail::kFarArgument) continue;
    const auto g = specfun::meijer_g(specfun::meijer_g_2012(k.W[i], k.S[i], k.K[i]), z, ctl);
    total += k.B[i] * g.value / gamma;
  }
  return std::max(total, 0.0);
}

/// CDF of the optical SNR.
inline double uowc_cdf(double gamma, const EGGChannel& ch, const SeriesControl& ctl = {}) {
  if (!(gamma >= 0.0)) throw DomainError("uowc_cdf: gamma must be non-negative");
  if (gamma == 0.0) return 0.0;
  if (std::isinf(gamma)) return 1.0;
  const EGGCoeffs k = egg_coeffs(ch);
  double total = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double z = k.Z[i] * std::pow(gamma, k.V[i]);
    if (z == 0.0) continue;
    if (z > detail::kFarArgument) {
      // Limit Γ(S)Γ(K)/Γ(W); the remainder is O(e^{-z}).
      total += k.Y[i] * std::exp(specfun::ln_gamma(k.S[i]) + specfun::ln_gamma(k.K[i]) - specfun::ln_gamma(k.W[i]));
      continue;
    }
    const auto g = specfun::meijer_g(specfun::meijer_g_2123(k.W[i], k.S[i], k.K[i]), z, ctl);
    total += k.Y[i] * g.value;
  }
  return std::clamp(total, 0.0, 1.0);
}

/// One draw of the turbulence irradiance (without pointing error).
inline double sample_irradiance(const EGGChannel& ch, RandomStream& rng) {
  if (rng.uniform_open() < ch.omega) return -ch.lambda_exp * std::log(rng.uniform_open());
  return ch.b * std::pow(rng.gamma(ch.a), 1.0 / ch.c);
}

/// One draw of the pointing-error attenuation, U^{1/ξ²}.
inline double sample_pointing(const EGGChannel& ch, RandomStream& rng) {
  return std::pow(rng.uniform_open(), 1.0 / (ch.xi * ch.xi));
}

/// Maps an irradiance sample (turbulence times pointing loss) to SNR.
inline double irradiance_to_snr(double irradiance, const EGGChannel& ch, const EGGCoeffs& k) {
  return k.psi * std::pow(irradiance, static_cast<double>(ch.epsilon));
}

/// One draw of the optical SNR, built from the physical components.
inline double sample_uowc(const EGGChannel& ch, RandomStream& rng) {
  const EGGCoeffs k = egg_coeffs(ch);
  const double i_a = sample_irradiance(ch, rng);
  const double h = sample_pointing(ch, rng);
  return irradiance_to_snr(i_a * h, ch, k);
}

// ===========================================================================
// κ-μ shadowed links
// ===========================================================================

struct KMSChannel {
  double kappa = 0.0;  // dominant-to-scattered power ratio
  double mu = 1.0;     // number of clusters
  double m = 1.0;      // shadowing severity
  int g = 1;           // receive antennas (MRC)
  double phi = 1.0;    // average SNR, linear

  void validate() const {
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw DomainError("KMSChannel.kappa must be >= 0");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("KMSChannel.mu must be positive");
    if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("KMSChannel.m must be positive");
    if (g < 1) throw DomainError("KMSChannel.g must be >= 1");
    if (!(phi > 0.0) || !std::isfinite(phi)) throw DomainError("KMSChannel.phi must be positive");
  }

  [[nodiscard]] double shape() const { return g * mu; }
  [[nodiscard]] bool has_integral_shape() const {
    return std::abs(shape() - std::round(shape())) < 1e-12 * std::max(1.0, shape());
  }

  friend bool operator==(const KMSChannel&, const KMSChannel&) = default;
};

/// Derived coefficients of a κ-μ shadowed link.
struct KMSCoeffs {
  double g_mu = 0.0;         // Gμ
  double g_m = 0.0;          // Gm
  double alpha1 = 0.0;
  double log_alpha1 = 0.0;
  double alpha2 = 0.0;
  double xi2 = 0.0;          // rate of every mixture component
  double shadow_ratio = 0.0; // α₂/Ξ₂ = μκ/(μκ + m)

  /// ln Ξ₁(e): PDF series coefficient.
  [[nodiscard]] double log_xi1(int e) const {
    if (e > 0 && alpha2 == 0.0) return -std::numeric_limits<double>::infinity();
    using specfun::ln_gamma;
    const double log_alpha3 = ln_gamma(g_mu) - ln_gamma(g_m) + ln_gamma(g_m + e) +
                              (e > 0 ? e * std::log(alpha2) : 0.0) - ln_gamma(g_mu + e) -
                              ln_gamma(e + 1.0);
    return log_alpha1 + log_alpha3;
  }
  [[nodiscard]] double xi1(int e) const { return std::exp(log_xi1(e)); }

  /// Ξ₃(e) = Gμ − 1 + e: power of γ in component e.
  [[nodiscard]] double xi3(int e) const { return g_mu - 1.0 + e; }

  /// ln of the normalized mixture weight of component e.
  [[nodiscard]] double log_weight(int e) const {
    if (shadow_ratio == 0.0) return e == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    using specfun::ln_gamma;
    return ln_gamma(g_m + e) - ln_gamma(g_m) - ln_gamma(e + 1.0) + e * std::log(shadow_ratio) +
           g_m * std::log1p(-shadow_ratio);
  }
  [[nodiscard]] double weight(int e) const { return std::exp(log_weight(e)); }
};

inline KMSCoeffs kms_coeffs(const KMSChannel& ch) {
  ch.validate();
  KMSCoeffs k;
  k.g_mu = ch.g * ch.mu;
  k.g_m = ch.g * ch.m;
  const double denom = k.g_mu * ch.kappa + k.g_m;
  k.log_alpha1 = k.g_mu * std::log(k.g_mu) + k.g_m * std::log(k.g_m) + k.g_mu * std::log1p(ch.kappa) -
                 specfun::ln_gamma(k.g_mu) - k.g_mu * std::log(ch.phi) - k.g_m * std::log(denom);
  k.alpha1 = std::exp(k.log_alpha1);
  k.xi2 = k.g_mu * (1.0 + ch.kappa) / ch.phi;
  k.alpha2 = static_cast<double>(ch.g) * ch.g * ch.mu * ch.mu * ch.kappa * (1.0 + ch.kappa) / (denom * ch.phi);
  k.shadow_ratio = ch.mu * ch.kappa / (ch.mu * ch.kappa + ch.m);
  return k;
}

/// Truncated table of normalized mixture weights.
struct WeightTable {
  std::vector<double> weights;
  double tail_mass = 0.0;  // upper bound on the weight beyond the table

  [[nodiscard]] int size() const { return static_cast<int>(weights.size()); }
  [[nodiscard]] double sum() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }
};

/// Mixture weights until the remaining mass is provably below `tail_tol`.
/// The bound uses the geometric decay of the weight ratio past its mode.
inline WeightTable kms_weight_table(const KMSCoeffs& k, double tail_tol = 1e-13, int max_terms = 10'000) {
  WeightTable t;
  if (k.shadow_ratio == 0.0) {
    t.weights.push_back(1.0);
    return t;
  }
  const double r = k.shadow_ratio;
  for (int e = 0; e < max_terms; ++e) {
    const double w = k.weight(e);
    t.weights.push_back(w);
    // Successive ratios r(Gm + e)/(e + 1) move monotonically toward r, so every
    // later ratio is at most max(next ratio, r).
    const double ratio = r * (k.g_m + e) / (e + 1.0);
    const double later = std::max(r * (k.g_m + e + 1.0) / (e + 2.0), r);
    if (later < 1.0) {
      const double bound = w * ratio / (1.0 - later);
      if (bound < tail_tol) {
        t.tail_mass = bound;
        return t;
      }
    }
  }
  throw ConvergenceError("kms_weight_table: mixture tail above " + std::to_string(tail_tol) +
                         " after max_terms components");
}

/// A (possibly signed) mixture of gamma laws, Σ weight · Gamma(shape, rate).
struct GammaComponent {
  double weight = 0.0;
  double shape = 1.0;
  double rate = 1.0;
};

struct GammaMixture {
  std::vector<GammaComponent> components;
  double tail_mass = 0.0;

  [[nodiscard]] double pdf(double x) const {
    if (!(x > 0.0)) return 0.0;
    const double lx = std::log(x);
    double total = 0.0;
    for (const auto& c : components) {
      total += c.weight * std::exp(c.shape * std::log(c.rate) + (c.shape - 1.0) * lx - c.rate * x -
                                   specfun::ln_gamma(c.shape));
    }
    return total;
  }

  [[nodiscard]] double cdf(double x) const {
    if (!(x > 0.0)) return 0.0;
    double total = 0.0;
    for (const auto& c : components) total += c.weight * specfun::reg_lower_gamma(c.shape, c.rate * x);
    return total;
  }

  [[nodiscard]] double total_weight() const {
    double s = 0.0;
    for (const auto& c : components) s += c.weight;
    return s;
  }

  [[nodiscard]] double mean() const {
    double s = 0.0;
    for (const auto& c : components) s += c.weight * c.shape / c.rate;
    return s;
  }
};

/// The κ-μ shadowed law as a truncated gamma mixture.
inline GammaMixture kms_mixture(const KMSChannel& ch, double tail_tol = 1e-13, int max_terms = 10'000) {
  const KMSCoeffs k = kms_coeffs(ch);
  const WeightTable t = kms_weight_table(k, tail_tol, max_terms);
  GammaMixture mix;
  mix.tail_mass = t.tail_mass;
  for (int e = 0; e < t.size(); ++e) {
    mix.components.push_back({t.weights[static_cast<std::size_t>(e)], k.g_mu + e, k.xi2});
  }
  return mix;
}

/// PDF from the closed form α₁ e^{−Ξ₂γ} γ^{Gμ−1} ₁F₁(Gm; Gμ; α₂γ).
inline double kms_pdf(double gamma, const KMSChannel& ch, const SeriesControl& ctl = {}) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("kms_pdf: gamma must be positive");
  const KMSCoeffs k = kms_coeffs(ch);
  double log_f = k.log_alpha1 - k.xi2 * gamma + (k.g_mu - 1.0) * std::log(gamma);
  if (k.alpha2 > 0.0) log_f += specfun::log_hyp1f1(k.g_m, k.g_mu, k.alpha2 * gamma, ctl).log_value;
  return std::exp(log_f);
}

/// PDF from the expanded series Σ_e Ξ₁(e) e^{−Ξ₂γ} γ^{Ξ₃(e)}.
inline specfun::SeriesValue kms_pdf_series(double gamma, const KMSChannel& ch, const SeriesControl& ctl = {}) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("kms_pdf_series: gamma must be positive");
  ctl.validate();
  const KMSCoeffs k = kms_coeffs(ch);
  const double lg = std::log(gamma);
  specfun::SeriesValue out;
  specfun::SeriesStopper stop(ctl);
  // Terms are summed relative to exp(log_ref) so deep tails do not underflow.
  const double log_base = -k.xi2 * gamma;
  double log_ref = k.log_xi1(0) + k.xi3(0) * lg;
  double sum = 0.0;
  for (int e = 0; e < ctl.max_terms; ++e) {
    const double log_term = k.log_xi1(e) + k.xi3(e) * lg;
    if (log_term - log_ref > 600.0) {
      sum *= std::exp(log_ref - log_term);
      log_ref = log_term;
    }
    const double term = std::exp(log_term - log_ref);
    sum += term;
    out.terms = e + 1;
    if (stop.update(term, sum)) {
      out.value = sum * std::exp(log_ref + log_base);
      out.tail_estimate = term * std::exp(log_ref + log_base);
      return out;
    }
  }
  throw ConvergenceError("kms_pdf_series: no convergence within max_terms at gamma = " + std::to_string(gamma));
}

namespace detail {

// Σ_{p=0}^{n} x^p / p! · e^{−x}, the survival of an integer-shape gamma law.
inline double poisson_survival(int n, double x) {
  if (x == 0.0) return 1.0;
  double term = std::exp(-x);
  double sum = term;
  for (int p = 1; p <= n; ++p) {
    term *= x / p;
    sum += term;
  }
  return std::min(sum, 1.0);
}

inline int weight_count(const KMSCoeffs& k, const SeriesControl& ctl) {
  return kms_weight_table(k, std::min(ctl.rel_tol, 1e-13), ctl.max_terms).size();
}

}  // namespace detail

/// CDF as Σ_e Ξ₁(e)·[Γ(Ξ₃+1)/Ξ₂^{Ξ₃+1} − Σ_{k≤Ξ₃} Γ(Ξ₃+1)/(k! Ξ₂^{Ξ₃−k+1}) e^{−Ξ₂γ}γ^k].
/// Non-integer Ξ₃ uses the regularized incomplete gamma in place of the
/// finite inner sum.
inline double kms_cdf(double gamma, const KMSChannel& ch, const SeriesControl& ctl = {}) {
  if (!(gamma >= 0.0)) throw DomainError("kms_cdf: gamma must be non-negative");
  if (gamma == 0.0) return 0.0;
  if (std::isinf(gamma)) return 1.0;
  const KMSCoeffs k = kms_coeffs(ch);
  const int count = detail::weight_count(k, ctl);
  const bool integral = ch.has_integral_shape();
  const double x = k.xi2 * gamma;
  double total = 0.0;
  for (int e = 0; e < count; ++e) {
    const double j = k.xi3(e);
    const double scale = std::exp(k.log_xi1(e) + specfun::ln_gamma(j + 1.0) - (j + 1.0) * std::log(k.xi2));
    const double lower = integral ? 1.0 - detail::poisson_survival(static_cast<int>(std::lround(j)), x)
                                  : specfun::reg_lower_gamma(j + 1.0, x);
    total += scale * lower;
  }
  return std::clamp(total, 0.0, 1.0);
}

/// Eavesdropper-link CDF in survival form, 1 − Σ_f Σ_{p≤Ξ₆} Ξ₆!/(p! Ξ₅^{Ξ₆−p+1}) Ξ₄ e^{−Ξ₅γ} γ^p.
inline double eav_cdf(double gamma, const KMSChannel& ch_e, const SeriesControl& ctl = {}) {
  if (!(gamma >= 0.0)) throw DomainError("eav_cdf: gamma must be non-negative");
  if (gamma == 0.0) return 0.0;
  if (std::isinf(gamma)) return 1.0;
  const KMSCoeffs k = kms_coeffs(ch_e);
  const int count = detail::weight_count(k, ctl);
  const bool integral = ch_e.has_integral_shape();
  const double lg = std::log(gamma);
  const double log_rate = std::log(k.xi2);
  double survival = 0.0;
  for (int f = 0; f < count; ++f) {
    const double j = k.xi3(f);
    const double log_xi4 = k.log_xi1(f);
    if (!std::isfinite(log_xi4)) continue;
    if (integral) {
      const int n = static_cast<int>(std::lround(j));
      const double log_jfact = specfun::ln_gamma(j + 1.0);
      for (int p = 0; p <= n; ++p) {
        survival += std::exp(log_jfact - specfun::ln_gamma(p + 1.0) - (j - p + 1.0) * log_rate + log_xi4 -
                             k.xi2 * gamma + p * lg);
      }
    } else {
      survival += std::exp(log_xi4 + specfun::ln_gamma(j + 1.0) - (j + 1.0) * log_rate) *
                  specfun::reg_upper_gamma(j + 1.0, k.xi2 * gamma);
    }
  }
  return std::clamp(1.0 - survival, 0.0, 1.0);
}

/// Law of the MRC-combined SNR of `n_eav` colluding eavesdroppers: antenna
/// count and average SNR both scale by n_eav (so the product Gμ does too).
inline KMSChannel colluding_channel(const KMSChannel& ch_e, int n_eav) {
  ch_e.validate();
  if (n_eav < 1) throw DomainError("colluding_channel: n_eav must be >= 1");
  KMSChannel out = ch_e;
  out.g = ch_e.g * n_eav;
  out.phi = ch_e.phi * n_eav;
  return out;
}

// ---------------------------------------------------------------------------
// Best of several non-colluding eavesdroppers
// ---------------------------------------------------------------------------

struct NonCollidingOptions {
  int max_f1 = 30;                          // cap on mixture components per eavesdropper
  double warn_tail = 1e-10;                 // report truncation when the neglected weight exceeds this
  std::size_t composition_budget = 2'000'000;
};

/// Law of max_j γ_re,j over n iid κ-μ shadowed eavesdropper links, expanded
/// as a signed gamma mixture.
///
/// With S(γ) = e^{−Ξ₅γ} Σ_p A_p γ^p the survival of one link (A_p collects
/// every component whose shape exceeds p), the PDF n f F^{n−1} expands through
/// the binomial theorem in S and the multinomial theorem in S^h. Compositions
/// q_0 + ... + q_P = h are enumerated explicitly under a budget.
/// Requires integral Gμ.
class NonCollidingLaw {
 public:
  NonCollidingLaw(const KMSChannel& ch_e, int n_eav, const SeriesControl& ctl = {},
                  const NonCollidingOptions& opts = {})
      : channel_(ch_e), n_eav_(n_eav) {
    ch_e.validate();
    ctl.validate();
    if (n_eav < 1) throw DomainError("NonCollidingLaw: n_eav must be >= 1");
    if (!ch_e.has_integral_shape()) {
      throw DomainError("NonCollidingLaw: G*mu of the eavesdropper link must be an integer");
    }
    const KMSCoeffs k = kms_coeffs(ch_e);
    const WeightTable full = kms_weight_table(k, std::min(ctl.rel_tol, 1e-13), ctl.max_terms);
    int f_count = full.size();
    tail_mass_ = full.tail_mass;
    if (f_count > opts.max_f1 + 1) {
      for (int f = opts.max_f1 + 1; f < f_count; ++f) tail_mass_ += full.weights[static_cast<std::size_t>(f)];
      f_count = opts.max_f1 + 1;
      if (tail_mass_ > opts.warn_tail) warnings_.push_back("non-colluding expansion truncated at f1 = " + std::to_string(opts.max_f1) +
                          " with neglected weight " + std::to_string(tail_mass_));
    }
    f1_count_ = f_count;
    const int base = static_cast<int>(std::lround(k.g_mu)) - 1;  // Ξ₆ at f = 0
    const int top = base + f_count - 1;                          // largest Ξ₆

    // T_p = Σ_{f : Ξ₆(f) ≥ p} w_f, then a_p = T_p / p!.
    std::vector<double> log_a(static_cast<std::size_t>(top + 1));
    {
      double tail = 0.0;
      std::vector<double> t(static_cast<std::size_t>(top + 1), 0.0);
      for (int p = top; p >= 0; --p) {
        const int f = p - base;
        if (f >= 0) tail += full.weights[static_cast<std::size_t>(f)];
        t[static_cast<std::size_t>(p)] = tail;
      }
      for (int p = 0; p <= top; ++p) {
        log_a[static_cast<std::size_t>(p)] = std::log(t[static_cast<std::size_t>(p)]) - specfun::ln_gamma(p + 1.0);
      }
    }

    // ĉ_{h,k}: coefficient of x^k in (Σ_p a_p x^p)^h, summed over compositions.
    std::vector<std::vector<double>> chat(static_cast<std::size_t>(n_eav));
    for (int h = 0; h < n_eav; ++h) {
      auto& row = chat[static_cast<std::size_t>(h)];
      row.assign(static_cast<std::size_t>(h * top + 1), 0.0);
      const double log_h_fact = specfun::ln_gamma(h + 1.0);
      for_each_composition(h, top + 1, opts.composition_budget, compositions_used_, [&](const std::vector<int>& q) {
        double log_term = log_h_fact;
        int degree = 0;
        for (int p = 0; p <= top; ++p) {
          const int qp = q[static_cast<std::size_t>(p)];
          if (qp == 0) continue;
          log_term += qp * log_a[static_cast<std::size_t>(p)] - specfun::ln_gamma(qp + 1.0);
          degree += p * qp;
        }
        row[static_cast<std::size_t>(degree)] += std::exp(log_term);
      });
    }

    // Aggregate components by (h, shape).
    std::map<std::pair<int, int>, double> acc;
    const double log_n = std::log(static_cast<double>(n_eav));
    for (int f = 0; f < f_count; ++f) {
      const double w = full.weights[static_cast<std::size_t>(f)];
      if (w <= 0.0) continue;
      const int j = base + f;
      for (int h = 0; h < n_eav; ++h) {
        const double sign = (h % 2 == 0) ? 1.0 : -1.0;
        const double log_binom = specfun::ln_binomial(n_eav - 1.0, h);
        const auto& row = chat[static_cast<std::size_t>(h)];
        for (std::size_t kk = 0; kk < row.size(); ++kk) {
          if (row[kk] <= 0.0) continue;
          const int s = j + static_cast<int>(kk);
          const double log_v = log_n + log_binom + std::log(w) + std::log(row[kk]) + specfun::ln_gamma(s + 1.0) -
                               specfun::ln_gamma(j + 1.0) - (s + 1.0) * std::log(h + 1.0);
          acc[{h, s}] += sign * std::exp(log_v);
        }
      }
    }
    for (const auto& [key, v] : acc) {
      mixture_.components.push_back({v, key.second + 1.0, (key.first + 1.0) * k.xi2});
    }
    mixture_.tail_mass = tail_mass_;
  }

  [[nodiscard]] const GammaMixture& mixture() const { return mixture_; }
  [[nodiscard]] double pdf(double gamma) const { return mixture_.pdf(gamma); }
  [[nodiscard]] double cdf(double gamma) const { return mixture_.cdf(gamma); }
  [[nodiscard]] const std::vector<std::string>& warnings() const { return warnings_; }
  [[nodiscard]] std::size_t compositions_used() const { return compositions_used_; }
  [[nodiscard]] int f1_count() const { return f1_count_; }
  [[nodiscard]] double tail_mass() const { return tail_mass_; }
  [[nodiscard]] int n_eav() const { return n_eav_; }
  [[nodiscard]] const KMSChannel& channel() const { return channel_; }

 private:
  KMSChannel channel_;
  int n_eav_;
  GammaMixture mixture_;
  std::vector<std::string> warnings_;
  std::size_t compositions_used_ = 0;
  int f1_count_ = 0;
  double tail_mass_ = 0.0;
};

/// PDF of the strongest of `n_eav` iid eavesdroppers, n F^{n−1} f.
inline double noncolluding_pdf(double gamma, const KMSChannel& ch_e, int n_eav, const SeriesControl& ctl = {}) {
  if (!(gamma > 0.0)) throw DomainError("noncolluding_pdf: gamma must be positive");
  if (n_eav < 1) throw DomainError("noncolluding_pdf: n_eav must be >= 1");
  const double f = kms_pdf(gamma, ch_e, ctl);
  if (n_eav == 1) return f;
  const double big_f = eav_cdf(gamma, ch_e, ctl);
  return n_eav * std::pow(big_f, n_eav - 1) * f;
}

/// Both evaluations of the non-colluding PDF.
struct NonCollidingCheck {
  double direct = 0.0;    // n F^{n−1} f
  double expanded = 0.0;  // signed gamma-mixture expansion
  double scale = 0.0;     // n f, the magnitude before cancellation
  [[nodiscard]] double discrepancy() const { return scale > 0.0 ? std::abs(direct - expanded) / scale : 0.0; }
};

inline NonCollidingCheck noncolluding_pdf_check(double gamma, const KMSChannel& ch_e, int n_eav,
                                                const SeriesControl& ctl = {},
                                                const NonCollidingOptions& opts = {}) {
  NonCollidingCheck c;
  c.direct = noncolluding_pdf(gamma, ch_e, n_eav, ctl);
  c.expanded = NonCollidingLaw(ch_e, n_eav, ctl, opts).pdf(gamma);
  c.scale = n_eav * kms_pdf(gamma, ch_e, ctl);
  return c;
}

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

/// Draws from a κ-μ shadowed law: mixture index by inverse CDF on the
/// weight table, then a gamma variate of shape Gμ + e and rate Ξ₂.
class KMSSampler {
 public:
  explicit KMSSampler(const KMSChannel& ch, double tail_tol = 1e-12, int max_terms = 10'000)
      : coeffs_(kms_coeffs(ch)), table_(kms_weight_table(coeffs_, tail_tol, max_terms)) {
    cumulative_.resize(table_.weights.size());
    std::partial_sum(table_.weights.begin(), table_.weights.end(), cumulative_.begin());
    const double total = cumulative_.back();
    for (double& v : cumulative_) v /= total;
    cumulative_.back() = 1.0;
  }

  double operator()(RandomStream& rng) const {
    std::size_t e = 0;
    if (cumulative_.size() > 1) {
      const double u = rng.uniform_open();
      e = static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin());
      e = std::min(e, cumulative_.size() - 1);
    }
    return rng.gamma(coeffs_.g_mu + static_cast<double>(e)) / coeffs_.xi2;
  }

  [[nodiscard]] const WeightTable& table() const { return table_; }
  [[nodiscard]] const KMSCoeffs& coeffs() const { return coeffs_; }

 private:
  KMSCoeffs coeffs_;
  WeightTable table_;
  std::vector<double> cumulative_;
};

/// One draw from a κ-μ shadowed law. Builds the weight table on every call;
/// use KMSSampler for repeated draws.
inline double sample_kms(const KMSChannel& ch, RandomStream& rng) { return KMSSampler(ch)(rng); }

}  // namespace uowcsec::channels
