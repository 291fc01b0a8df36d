// Copyright 2026 The uowcsec Authors
// SPDX-License-Identifier: Apache-2.0

//! \file specfun.hpp
//! Scalar special functions: log-gamma, incomplete gamma ratios, modified
//! Bessel K of real order (plain, exponentially scaled and logarithmic) and
//! the confluent hypergeometric series 1F1.

#pragma once

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "uowcsec/errors.hpp"

namespace uowcsec::specfun {

/// Truncation policy shared by every infinite series in the library.
///
/// A series stops once `consecutive_small` successive terms are each below
/// `rel_tol` times the magnitude of the running sum. Reaching `max_terms`
/// first is a ConvergenceError.
struct SeriesControl {
  double rel_tol = 1e-12;
  int max_terms = 10'000;
  int consecutive_small = 3;

  void validate() const {
    if (!(rel_tol > 0.0) || !std::isfinite(rel_tol)) {
      throw DomainError("SeriesControl.rel_tol must be positive");
    }
    if (max_terms < 1) {
      throw DomainError("SeriesControl.max_terms must be >= 1");
    }
    if (consecutive_small < 1) {
      throw DomainError("SeriesControl.consecutive_small must be >= 1");
    }
  }
};

/// A series value with its truncation diagnostics.
struct SeriesValue {
  double value = 0.0;
  int terms = 0;
  double tail_estimate = 0.0;
};

/// Same as SeriesValue, with the value held as a natural logarithm.
struct LogSeriesValue {
  double log_value = 0.0;
  int terms = 0;
  double tail_estimate = 0.0;  // relative to exp(log_value)
};

/// Tracks the "consecutive small terms" stopping rule.
class SeriesStopper {
 public:
  explicit SeriesStopper(const SeriesControl& ctl) : ctl_(ctl) {}

  /// Feed the term just added and the updated sum; true when the series may stop.
  bool update(double term, double sum) {
    if (std::abs(term) < ctl_.rel_tol * std::abs(sum) || term == 0.0) {
      ++run_;
    } else {
      run_ = 0;
    }
    return run_ >= ctl_.consecutive_small;
  }

 private:
  SeriesControl ctl_;
  int run_ = 0;
};

// ---------------------------------------------------------------------------
// Gamma family
// ---------------------------------------------------------------------------

/// ln Γ(x) for x > 0.
inline double ln_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("ln_gamma: argument must be positive and finite, got " +
                      std::to_string(x));
  }
  return boost::math::lgamma(x);
}

/// ln|Γ(x)| together with the sign of Γ(x), for any real x that is not a pole.
struct SignedLog {
  double log_abs = 0.0;
  int sign = 1;
};

inline SignedLog ln_gamma_signed(double x) {
  if (!std::isfinite(x) || (x <= 0.0 && x == std::floor(x))) {
    throw DomainError("ln_gamma_signed: pole of the gamma function at " + std::to_string(x));
  }
  int sign = 1;
  const double lg = boost::math::lgamma(x, &sign);
  return {lg, sign};
}

/// ln C(n, k) for real n >= k >= 0.
inline double ln_binomial(double n, double k) {
  return ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0);
}

/// Regularized lower incomplete gamma P(s, x) = γ(s, x) / Γ(s).
inline double reg_lower_gamma(double s, double x) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw DomainError("reg_lower_gamma: s must be positive");
  }
  if (!(x >= 0.0)) {
    throw DomainError("reg_lower_gamma: x must be non-negative");
  }
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(s, x);
}

/// Regularized upper incomplete gamma Q(s, x) = 1 - P(s, x), computed directly.
inline double reg_upper_gamma(double s, double x) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw DomainError("reg_upper_gamma: s must be positive");
  }
  if (!(x >= 0.0)) {
    throw DomainError("reg_upper_gamma: x must be non-negative");
  }
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(s, x);
}

// ---------------------------------------------------------------------------
// Modified Bessel function of the second kind
// ---------------------------------------------------------------------------

namespace detail {

struct BesselPair {
  double k_mu = 0.0;   // K_mu(x), scaled by e^x
  double k_mu1 = 0.0;  // K_{mu+1}(x), scaled by e^x
};

// Temme's method for |mu| <= 1/2: power series for x < 2, Steed's continued
// fraction otherwise. Both values are returned multiplied by e^x.
inline BesselPair bessel_k_temme_scaled(double mu, double x) {
  constexpr double kEps = 1e-16;
  constexpr int kMaxIter = 100'000;
  constexpr double kPi = std::numbers::pi;
  const double mu2 = mu * mu;

  if (x < 2.0) {
    const double x2 = 0.5 * x;
    const double pimu = kPi * mu;
    const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;

    // gam1 = (1/Γ(1-mu) - 1/Γ(1+mu)) / (2 mu), gam2 = (1/Γ(1-mu) + 1/Γ(1+mu)) / 2
    const double gp1 = boost::math::tgamma1pm1(mu);   // Γ(1+mu) - 1
    const double gm1 = boost::math::tgamma1pm1(-mu);  // Γ(1-mu) - 1
    const double gamma_plus = 1.0 + gp1;
    const double gamma_minus = 1.0 + gm1;
    const double gampl = 1.0 / gamma_plus;
    const double gammi = 1.0 / gamma_minus;
    const double gam1 = mu == 0.0 ? -std::numbers::egamma
                                  : (gp1 - gm1) / (2.0 * mu * gamma_plus * gamma_minus);
    const double gam2 = 0.5 * (gammi + gampl);

    double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / gampl;
    double q = 0.5 / (e * gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    int i = 1;
    for (; i <= kMaxIter; ++i) {
      const double di = static_cast<double>(i);
      ff = (di * ff + p + q) / (di * di - mu2);
      c *= d / di;
      p /= di - mu;
      q /= di + mu;
      const double del = c * ff;
      sum += del;
      sum1 += c * (p - di * ff);
      if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    if (i > kMaxIter) throw ConvergenceError("bessel_k: Temme series did not converge");
    const double scale = std::exp(x);
    return {sum * scale, sum1 * (2.0 / x) * scale};
  }

  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25 - mu2;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  int i = 2;
  for (; i <= kMaxIter; ++i) {
    const double di = static_cast<double>(i);
    a -= 2.0 * (di - 1.0);
    c = -a * c / di;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  if (i > kMaxIter) throw ConvergenceError("bessel_k: continued fraction did not converge");
  h = a1 * h;
  const double kmu = std::sqrt(kPi / (2.0 * x)) / s;
  const double k1 = kmu * (mu + x + 0.5 - h) / x;
  return {kmu, k1};
}

// Returns (mantissa, log_scale) with K_v(x) e^x = mantissa * exp(log_scale).
inline std::pair<double, double> bessel_k_scaled_split(double v, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("bessel_k: x must be positive and finite, got " + std::to_string(x));
  }
  if (!std::isfinite(v)) throw DomainError("bessel_k: order must be finite");
  const double order = std::abs(v);  // K_{-v} = K_v
  const auto nl = static_cast<long>(std::floor(order + 0.5));
  const double mu = order - static_cast<double>(nl);
  BesselPair start = bessel_k_temme_scaled(mu, x);
  double kmu = start.k_mu;
  double k1 = start.k_mu1;
  double log_scale = 0.0;
  const double two_over_x = 2.0 / x;
  for (long i = 1; i <= nl; ++i) {
    const double next = (mu + static_cast<double>(i)) * two_over_x * k1 + kmu;
    kmu = k1;
    k1 = next;
    if (k1 > 1e280) {
      log_scale += std::log(k1);
      kmu /= k1;
      k1 = 1.0;
    }
  }
  return {kmu, log_scale};
}

}  // namespace detail

/// e^x K_v(x). Defined for every real order v and x > 0.
inline double bessel_k_scaled(double v, double x) {
  auto [mant, log_scale] = detail::bessel_k_scaled_split(v, x);
  if (log_scale == 0.0) return mant;
  const double r = std::log(mant) + log_scale;
  if (r > 709.0) throw RangeError("bessel_k_scaled: result overflows double");
  return std::exp(r);
}

/// ln K_v(x). Never overflows; use for large orders or large x.
inline double log_bessel_k(double v, double x) {
  auto [mant, log_scale] = detail::bessel_k_scaled_split(v, x);
  return std::log(mant) + log_scale - x;
}

/// K_v(x) for real v and x > 0. Throws RangeError when the value is not
/// representable as a normal double; log_bessel_k covers those cases.
inline double bessel_k(double v, double x) {
  const double lk = log_bessel_k(v, x);
  if (lk > 709.0) throw RangeError("bessel_k: result overflows double");
  if (lk < -708.0) throw RangeError("bessel_k: result underflows double (use log_bessel_k)");
  return std::exp(lk);
}

// ---------------------------------------------------------------------------
// Confluent hypergeometric function
// ---------------------------------------------------------------------------

namespace detail {

inline bool is_non_positive_integer(double v) { return v <= 0.0 && v == std::floor(v); }

// Upper bound on the remaining tail after term t_k (index k) for positive
// a, b, x: the term ratio r_j = (a+j) x / ((b+j)(j+1)) is dominated by
// r_k when a >= b and by x/(k+1) otherwise.
inline double hyp1f1_tail_bound(double a, double b, double x, int k, double term) {
  const double dk = static_cast<double>(k);
  const double rk = (a + dk) * x / ((b + dk) * (dk + 1.0));
  const double ratio = a >= b ? rk : x / (dk + 1.0);
  if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
  return std::abs(term) * ratio / (1.0 - ratio);
}

// Large-x expansion ln[Γ(b)/Γ(a) eˣ x^{a−b} Σ_s (b−a)_s (1−a)_s / (s! xˢ)].
// The second exponential branch is O(e^{−x}) relative and is dropped. Returns
// false when the asymptotic terms stop shrinking before reaching rel_tol.
inline bool log_hyp1f1_asymptotic(double a, double b, double x, const SeriesControl& ctl, LogSeriesValue& out) {
  double term = 1.0;
  double sum = 1.0;
  for (int s = 0; s < 200; ++s) {
    const double ds = static_cast<double>(s);
    const double next = term * (b - a + ds) * (1.0 - a + ds) / ((ds + 1.0) * x);
    if (next == 0.0 || std::abs(next) <= ctl.rel_tol * std::abs(sum)) {
      sum += next;
      if (!(sum > 0.0)) return false;
      out.log_value = ln_gamma(b) - ln_gamma(a) + x + (a - b) * std::log(x) + std::log(sum);
      out.terms = s + 2;
      out.tail_estimate = std::abs(next) / sum;
      return true;
    }
    if (std::abs(next) >= std::abs(term)) return false;
    term = next;
    sum += term;
  }
  return false;
}

}  // namespace detail

/// ln 1F1(a; b; x) for a > 0, b > 0, x >= 0. The series is accumulated with
/// running rescaling so it never overflows.
inline LogSeriesValue log_hyp1f1(double a, double b, double x, const SeriesControl& ctl = {}) {
  ctl.validate();
  if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0) || !std::isfinite(x)) {
    throw DomainError("log_hyp1f1: requires a > 0, b > 0, x >= 0");
  }
  // The power series needs about x terms.
  if (LogSeriesValue asym; x > 500.0 && detail::log_hyp1f1_asymptotic(a, b, x, ctl, asym)) return asym;
  double term = 1.0;
  double sum = 1.0;
  double log_scale = 0.0;
  SeriesStopper stop(ctl);
  for (int k = 0; k < ctl.max_terms; ++k) {
    const double dk = static_cast<double>(k);
    term *= (a + dk) * x / ((b + dk) * (dk + 1.0));
    sum += term;
    if (sum > 1e280) {
      log_scale += std::log(sum);
      term /= sum;
      sum = 1.0;
    }
    if (stop.update(term, sum)) {
      const double tail = detail::hyp1f1_tail_bound(a, b, x, k + 1, term) / sum;
      return {std::log(sum) + log_scale, k + 2, tail};
    }
  }
  throw ConvergenceError("hyp1f1: series did not converge within " +
                         std::to_string(ctl.max_terms) + " terms (x = " + std::to_string(x) + ")");
}

/// 1F1(a; b; x) by direct summation of the defining power series.
/// tail_estimate bounds the neglected remainder when a, b, x > 0.
inline SeriesValue hyp1f1(double a, double b, double x, const SeriesControl& ctl = {}) {
  ctl.validate();
  if (detail::is_non_positive_integer(b)) {
    throw DomainError("hyp1f1: b must not be a non-positive integer");
  }
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(x)) {
    throw DomainError("hyp1f1: arguments must be finite");
  }
  double term = 1.0;
  double sum = 1.0;
  SeriesStopper stop(ctl);
  for (int k = 0; k < ctl.max_terms; ++k) {
    const double dk = static_cast<double>(k);
    term *= (a + dk) * x / ((b + dk) * (dk + 1.0));
    sum += term;
    if (!std::isfinite(sum)) throw RangeError("hyp1f1: value overflows double");
    if (term == 0.0) return {sum, k + 2, 0.0};  // terminating series
    if (stop.update(term, sum)) {
      double tail = std::abs(term);
      if (a > 0.0 && b > 0.0 && x > 0.0) {
        tail = detail::hyp1f1_tail_bound(a, b, x, k + 1, term);
      }
      return {sum, k + 2, tail};
    }
  }
  throw ConvergenceError("hyp1f1: series did not converge within " +
                         std::to_string(ctl.max_terms) + " terms (x = " + std::to_string(x) + ")");
}

}  // namespace uowcsec::specfun
