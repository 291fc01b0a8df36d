// Copyright 2026 The uowcsec Authors
// SPDX-License-Identifier: Apache-2.0

//! \file meijer_g.hpp
//! Meijer G-function of a positive real argument.
//!
//! `meijer_g` sums the residues at the poles of Γ(b_j - s), j = 1..m, which
//! turns G into m power series in z. For large z these series cancel
//! catastrophically, so the sum is attempted in double, then long double, then
//! 50- and 100-digit binary floating point until the observed cancellation
//! fits the working precision. Coinciding poles (lower parameters that differ
//! by an integer) are resolved by a symmetric ±1e-6 perturbation.
//!
//! `mellin_barnes_oracle` evaluates the defining contour integral directly,
//! on a vertical line through the saddle point of the integrand. It shares no
//! code with the residue path beyond MeijerGSpec.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "uowcsec/errors.hpp"
#include "uowcsec/specfun.hpp"

namespace uowcsec::specfun {

/// Orders and parameters of G^{m,n}_{p,q}(z | a_1..a_p ; b_1..b_q).
struct MeijerGSpec {
  int m = 0;
  int n = 0;
  int p = 0;
  int q = 0;
  std::vector<double> upper;  // a_1..a_p
  std::vector<double> lower;  // b_1..b_q

  void validate() const {
    if (m < 0 || n < 0 || p < 0 || q < 0) throw DomainError("MeijerGSpec: negative order");
    if (m > q || n > p) throw DomainError("MeijerGSpec: requires m <= q and n <= p");
    if (static_cast<int>(upper.size()) != p || static_cast<int>(lower.size()) != q) {
      throw DomainError("MeijerGSpec: parameter list lengths must equal p and q");
    }
    for (double v : upper) {
      if (!std::isfinite(v)) throw DomainError("MeijerGSpec: non-finite upper parameter");
    }
    for (double v : lower) {
      if (!std::isfinite(v)) throw DomainError("MeijerGSpec: non-finite lower parameter");
    }
  }

  /// The two instances the residue evaluator accepts: G^{2,0}_{1,2} and G^{2,1}_{2,3}.
  [[nodiscard]] bool is_residue_supported() const {
    return (m == 2 && n == 0 && p == 1 && q == 2) || (m == 2 && n == 1 && p == 2 && q == 3);
  }

  [[nodiscard]] std::string describe() const {
    std::ostringstream os;
    os << "G^{" << m << ',' << n << "}_{" << p << ',' << q << "}(";
    for (std::size_t i = 0; i < upper.size(); ++i) os << (i ? "," : "") << upper[i];
    os << ';';
    for (std::size_t i = 0; i < lower.size(); ++i) os << (i ? "," : "") << lower[i];
    os << ')';
    return os.str();
  }
};

/// G^{2,0}_{1,2}(z | w ; s, k)
inline MeijerGSpec meijer_g_2012(double w, double s, double k) {
  return {2, 0, 1, 2, {w}, {s, k}};
}

/// G^{2,1}_{2,3}(z | 1, w ; s, k, 0)
inline MeijerGSpec meijer_g_2123(double w, double s, double k) {
  return {2, 1, 2, 3, {1.0, w}, {s, k, 0.0}};
}

/// Value of a Meijer G evaluation with its diagnostics.
struct MeijerGResult {
  double value = 0.0;
  int terms = 0;               // residue-series terms summed (all families)
  double tail_estimate = 0.0;  // magnitude of the first neglected term
  int digits = 0;              // decimal digits of the arithmetic that was accepted
  bool perturbed = false;      // pole-collision perturbation was applied
  bool used_oracle = false;    // fell back to the contour integral
};

namespace detail {

using Float50 = boost::multiprecision::cpp_bin_float_50;
using Float100 = boost::multiprecision::cpp_bin_float_100;

inline bool near_integer(double v, double tol = 1e-9) {
  return std::abs(v - std::round(v)) <= tol * std::max(1.0, std::abs(v));
}

template <class Real>
Real real_abs(const Real& v) {
  using std::abs;
  return abs(v);
}

template <class Real>
bool is_pole(const Real& x) {
  using std::floor;
  return x <= 0 && floor(x) == x;
}

template <class Real>
Real gamma_fn(const Real& x) {
  if constexpr (std::is_floating_point_v<Real>) {
    return std::tgamma(x);
  } else {
    return boost::math::tgamma(x);
  }
}

// 1/Γ(x), zero at the poles.
template <class Real>
Real recip_gamma(const Real& x) {
  if (is_pole(x)) return Real(0);
  return Real(1) / gamma_fn(x);
}

template <class Real>
struct ResidueSum {
  Real sum = 0;
  Real max_abs_term = 0;
  Real last_term = 0;
  int terms = 0;
};

template <class Real>
ResidueSum<Real> residue_series(const MeijerGSpec& spec, double z, int max_terms,
                                int consecutive_small) {
  using std::pow;
  const Real zr(z);
  const Real eps = std::numeric_limits<Real>::epsilon();
  const int sign = ((spec.p - spec.m - spec.n) % 2 == 0) ? 1 : -1;
  ResidueSum<Real> out;

  for (int h = 0; h < spec.m; ++h) {
    const Real bh(spec.lower[h]);
    Real coef(1);
    for (int j = 0; j < spec.m; ++j) {
      if (j == h) continue;
      const Real arg = Real(spec.lower[j]) - bh;
      if (is_pole(arg)) throw NumericalError("meijer_g: coinciding poles in residue series");
      coef *= gamma_fn(arg);
    }
    for (int j = 0; j < spec.n; ++j) {
      const Real arg = Real(1) - Real(spec.upper[j]) + bh;
      if (is_pole(arg)) {
        throw DomainError("meijer_g: left and right pole families overlap for " + spec.describe());
      }
      coef *= gamma_fn(arg);
    }
    for (int j = spec.m; j < spec.q; ++j) coef *= recip_gamma(Real(1) - Real(spec.lower[j]) + bh);
    for (int j = spec.n; j < spec.p; ++j) coef *= recip_gamma(Real(spec.upper[j]) - bh);

    Real term = coef * pow(zr, bh);
    int run = 0;
    bool done = false;
    for (int k = 0; k < max_terms; ++k) {
      out.sum += term;
      ++out.terms;
      const Real mag = real_abs(term);
      if (mag > out.max_abs_term) out.max_abs_term = mag;
      out.last_term = mag;
      if (mag <= eps * out.max_abs_term) {
        if (++run >= consecutive_small) {
          done = true;
          break;
        }
      } else {
        run = 0;
      }
      const Real kk(k);
      Real num(1);
      for (int j = 0; j < spec.p; ++j) num *= Real(1) - Real(spec.upper[j]) + bh + kk;
      if (num == 0) {
        done = true;  // the family terminates
        break;
      }
      Real den = kk + 1;
      for (int j = 0; j < spec.q; ++j) {
        if (j == h) continue;
        den *= Real(1) - Real(spec.lower[j]) + bh + kk;
      }
      term *= Real(sign) * zr * num / den;
    }
    if (!done) {
      throw ConvergenceError("meijer_g: residue series for " + spec.describe() +
                             " did not converge within max_terms at z = " + std::to_string(z));
    }
  }
  return out;
}

// Attempts the residue sum in arithmetic `Real`; returns false when the
// cancellation between terms exceeds what the precision can absorb.
template <class Real>
bool residue_in_precision(const MeijerGSpec& spec, double z, const SeriesControl& ctl,
                          MeijerGResult& result) {
  const auto rs = residue_series<Real>(spec, z, ctl.max_terms, ctl.consecutive_small);
  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real mag = real_abs(rs.sum);
  result.terms = rs.terms;
  result.digits = std::numeric_limits<Real>::digits10;
  if (rs.max_abs_term == 0) {
    result.value = 0.0;
    result.tail_estimate = 0.0;
    return true;
  }
  if (mag == 0) return false;
  const Real loss = rs.max_abs_term / mag;
  if (eps * loss > Real(0.1 * ctl.rel_tol)) return false;
  result.value = static_cast<double>(rs.sum);
  result.tail_estimate = static_cast<double>(rs.last_term);
  return true;
}

inline bool has_pole_collision(const MeijerGSpec& spec, int& first, int& second) {
  for (int i = 0; i < spec.m; ++i) {
    for (int j = i + 1; j < spec.m; ++j) {
      if (near_integer(spec.lower[j] - spec.lower[i])) {
        first = i;
        second = j;
        return true;
      }
    }
  }
  return false;
}

// Decimal digits lost to cancellation, to leading order in z: the terms peak
// near e^{z} (one left family) or e^{2z} (no left family) while G itself is
// O(1) or O(e^{-z}).
inline double predicted_digit_loss(const MeijerGSpec& spec, double z) {
  return (spec.n == 0 ? 2.0 : 1.0) * z * std::numbers::log10e;
}

inline MeijerGResult meijer_g_unperturbed(const MeijerGSpec& spec, double z,
                                          const SeriesControl& ctl) {
  const double loss = predicted_digit_loss(spec, z);
  if (loss > 80.0) {
    throw NumericalError("meijer_g: argument beyond the residue-series range");
  }
  MeijerGResult r;
  if (loss < 1.5 && residue_in_precision<double>(spec, z, ctl, r)) return r;
  if (loss < 4.5 && residue_in_precision<long double>(spec, z, ctl, r)) return r;
  if (loss < 34.0 && residue_in_precision<Float50>(spec, z, ctl, r)) return r;
  if (residue_in_precision<Float100>(spec, z, ctl, r)) return r;
  throw NumericalError("meijer_g: cancellation in the residue series exceeds 100 digits at z = " +
                       std::to_string(z));
}

}  // namespace detail

double mellin_barnes_oracle(const MeijerGSpec& spec, double z);

/// Residue-series evaluation of one of the two supported G instances.
///
/// Lower parameters b_i, b_j (i, j <= m) that differ by an integer make the
/// residues logarithmic. In that case b_j and every upper parameter a_l
/// (l > n) tied to it by an integer offset are shifted by +1e-6 and -1e-6, and
/// the two evaluations are averaged (error O(1e-12) times the second parameter
/// derivative). If the residue path fails altogether the contour oracle is
/// used and `used_oracle` is set.
inline MeijerGResult meijer_g(const MeijerGSpec& spec, double z, const SeriesControl& ctl = {}) {
  spec.validate();
  ctl.validate();
  if (!spec.is_residue_supported()) {
    throw DomainError("meijer_g: residue evaluator supports G^{2,0}_{1,2} and G^{2,1}_{2,3} only, got " +
                      spec.describe());
  }
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw DomainError("meijer_g: z must be positive and finite");
  }

  constexpr double kShift = 1e-6;
  try {
    int i = 0;
    int j = 0;
    if (!detail::has_pole_collision(spec, i, j)) return detail::meijer_g_unperturbed(spec, z, ctl);

    auto shifted = [&](double delta) {
      MeijerGSpec s = spec;
      const double bj = spec.lower[j];
      s.lower[j] = bj + delta;
      for (int l = spec.n; l < spec.p; ++l) {
        if (detail::near_integer(spec.upper[l] - bj)) s.upper[l] += delta;
      }
      return s;
    };
    const MeijerGResult up = meijer_g(shifted(kShift), z, ctl);
    const MeijerGResult down = meijer_g(shifted(-kShift), z, ctl);
    MeijerGResult r;
    r.value = 0.5 * (up.value + down.value);
    r.terms = up.terms + down.terms;
    r.tail_estimate = std::max(up.tail_estimate, down.tail_estimate);
    r.digits = std::max(up.digits, down.digits);
    r.perturbed = true;
    r.used_oracle = up.used_oracle || down.used_oracle;
    return r;
  } catch (const DomainError&) {
    throw;
  } catch (const Error& residue_failure) {
    try {
      MeijerGResult r;
      r.value = mellin_barnes_oracle(spec, z);
      r.used_oracle = true;
      r.digits = std::numeric_limits<double>::digits10;
      return r;
    } catch (const Error& oracle_failure) {
      throw NumericalError(std::string("meijer_g: residue series failed (") + residue_failure.what() +
                           ") and contour fallback failed (" + oracle_failure.what() + ")");
    }
  }
}

// ---------------------------------------------------------------------------
// Mellin-Barnes contour oracle
// ---------------------------------------------------------------------------

namespace detail {

/// ln Γ(z) for complex z away from the poles (branch unspecified: only
/// exp(log_gamma) is meaningful).
inline std::complex<double> complex_log_gamma(std::complex<double> z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && std::floor(z.real()) == z.real()) {
    throw DomainError("complex_log_gamma: pole");
  }
  if (z.real() < -10.0) {
    // Reflection: lnΓ(z) = ln π − ln sin(πz) − lnΓ(1 − z), with
    // ln sin w = −iw + ln(e^{2iw} − 1) − ln 2i evaluated in the half plane
    // where e^{2iw} is bounded.
    const double pi = std::numbers::pi;
    const bool upper = z.imag() >= 0.0;
    const std::complex<double> w = pi * (upper ? z : std::conj(z));
    const std::complex<double> i(0.0, 1.0);
    std::complex<double> log_sin = -i * w + std::log(std::exp(2.0 * i * w) - 1.0) - std::log(2.0 * i);
    if (!upper) log_sin = std::conj(log_sin);
    return std::log(pi) - log_sin - complex_log_gamma(1.0 - z);
  }
  std::complex<double> shift(0.0, 0.0);
  while (z.real() < 15.0) {
    shift += std::log(z);
    z += 1.0;
  }
  static constexpr double kBernoulli[] = {1.0 / 6.0,   -1.0 / 30.0,     1.0 / 42.0, -1.0 / 30.0,
                                          5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0,  -3617.0 / 510.0};
  const std::complex<double> inv = 1.0 / z;
  const std::complex<double> inv2 = inv * inv;
  std::complex<double> series(0.0, 0.0);
  std::complex<double> power = inv;
  for (int k = 1; k <= 8; ++k) {
    series += kBernoulli[k - 1] / (2.0 * k * (2.0 * k - 1.0)) * power;
    power *= inv2;
  }
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  return (z - 0.5) * std::log(z) - z + half_log_2pi + series - shift;
}

class MellinBarnesIntegrand {
 public:
  MellinBarnesIntegrand(const MeijerGSpec& spec, double z) : spec_(spec), log_z_(std::log(z)) {}

  [[nodiscard]] std::complex<double> log_value(std::complex<double> s) const {
    std::complex<double> acc = s * log_z_;
    for (int j = 0; j < spec_.m; ++j) acc += complex_log_gamma(spec_.lower[j] - s);
    for (int j = 0; j < spec_.n; ++j) acc += complex_log_gamma(1.0 - spec_.upper[j] + s);
    for (int j = spec_.m; j < spec_.q; ++j) acc -= complex_log_gamma(1.0 - spec_.lower[j] + s);
    for (int j = spec_.n; j < spec_.p; ++j) acc -= complex_log_gamma(spec_.upper[j] - s);
    return acc;
  }

  /// Σ of the magnitudes of the individual log terms at real s; exp() of the
  /// log integrand carries a relative rounding error of about eps times this.
  [[nodiscard]] double log_term_magnitude(double c) const {
    double acc = std::abs(c * log_z_);
    for (int j = 0; j < spec_.m; ++j) acc += std::abs(complex_log_gamma(spec_.lower[j] - c).real());
    for (int j = 0; j < spec_.n; ++j) acc += std::abs(complex_log_gamma(1.0 - spec_.upper[j] + c).real());
    for (int j = spec_.m; j < spec_.q; ++j) acc += std::abs(complex_log_gamma(1.0 - spec_.lower[j] + c).real());
    for (int j = spec_.n; j < spec_.p; ++j) acc += std::abs(complex_log_gamma(spec_.upper[j] - c).real());
    return acc;
  }

  [[nodiscard]] double log_abs_on_real_axis(double c) const {
    return log_value({c, 0.0}).real();
  }

 private:
  const MeijerGSpec& spec_;
  double log_z_;
};

inline double golden_section_minimize(const auto& f, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200 && (b - a) > 1e-10 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

/// Direct numerical evaluation of the Mellin-Barnes integral
///   G = (1/2πi) ∫_{c-i∞}^{c+i∞} Πj≤m Γ(b_j - s) Πj≤n Γ(1 - a_j + s)
///        / (Πj>m Γ(1 - b_j + s) Πj>n Γ(a_j - s)) z^s ds
/// along the vertical line Re s = c that separates the two pole families.
/// Requires m + n > (p + q) / 2 so that the integrand decays exponentially.
inline double mellin_barnes_oracle(const MeijerGSpec& spec, double z) {
  spec.validate();
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("mellin_barnes_oracle: z must be positive");
  const double decay = spec.m + spec.n - 0.5 * (spec.p + spec.q);
  if (!(decay > 0.0)) {
    throw NumericalError("mellin_barnes_oracle: integrand does not decay for " + spec.describe());
  }
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (int j = 0; j < spec.n; ++j) lo = std::max(lo, spec.upper[j] - 1.0);
  for (int j = 0; j < spec.m; ++j) hi = std::min(hi, spec.lower[j]);
  if (!(lo < hi)) {
    throw NumericalError("mellin_barnes_oracle: contour placement failure, no line separates the "
                         "pole families of " + spec.describe());
  }

  const detail::MellinBarnesIntegrand integrand(spec, z);
  const double span = 2.0 * std::abs(std::log(z)) + 2.0 * z + 40.0;
  double left = std::isfinite(lo) ? lo : hi - span;
  double right = std::isfinite(hi) ? hi : lo + span;
  const double margin = 1e-3 * std::min(1.0, right - left);
  left += margin;
  right -= margin;
  const double c = detail::golden_section_minimize(
      [&](double x) { return integrand.log_abs_on_real_axis(x); }, left, right);
  const double log_scale = integrand.log_abs_on_real_axis(c);

  auto f = [&](double t) {
    return std::exp(integrand.log_value({c, t}) - log_scale).real();
  };
  auto envelope = [&](double t) { return std::exp(integrand.log_value({c, t}).real() - log_scale); };

  double upper = 8.0;
  while (envelope(upper) > 1e-18 && upper < 4096.0) upper *= 1.5;
  if (envelope(upper) > 1e-18) {
    throw NumericalError("mellin_barnes_oracle: integrand decays too slowly");
  }

  // Unit panels, each refined by bisection until its Gauss-Kronrod error
  // estimate is negligible against the magnitude scale of the integrand (1 at
  // the saddle point), so decayed tail panels cost a single rule. The target
  // sits above both the rule's roundoff floor and the evaluation noise.
  using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double abs_tol =
      std::max(1e-13, 100.0 * std::numeric_limits<double>::epsilon() * integrand.log_term_magnitude(c));
  double total = 0.0;
  const auto refine = [&](const auto& self, double a, double b, int depth) -> double {
    double err = 0.0;
    const double v = Quad::integrate(f, a, b, 0, 0.0, &err);
    if (err <= abs_tol * (b - a) || depth >= 12) return v;
    const double mid = 0.5 * (a + b);
    return self(self, a, mid, depth + 1) + self(self, mid, b, depth + 1);
  };
  for (double a = 0.0; a < upper; a += 1.0) total += refine(refine, a, std::min(upper, a + 1.0), 0);
  return std::exp(log_scale) * total / std::numbers::pi;
}

}  // namespace uowcsec::specfun
