#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/special_functions/expint.hpp>
#include <gtest/gtest.h>

#include "uowcsec/errors.hpp"
#include "uowcsec/meijer_g.hpp"
#include "uowcsec/specfun.hpp"

namespace {

using namespace uowcsec;
using namespace uowcsec::specfun;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Reference values from 40-digit mpmath evaluations.
constexpr double kLnGamma7p3 = 7.147892523022249032777057154428;
constexpr double kRegLower3p5At2 = 0.220222591524284079071761600081;
constexpr double kBesselK3At1p7 = 1.178315729871984296499334169796;
constexpr double kHyp1f1At2_3_1p5 = 2.880750697928028810045357982275;

TEST(LnGamma, KnownValues) {
  EXPECT_EQ(ln_gamma(1.0), 0.0);
  EXPECT_LT(rel(ln_gamma(0.5), 0.5 * std::log(std::numbers::pi)), 1e-14);
  EXPECT_LT(rel(ln_gamma(7.3), kLnGamma7p3), 1e-13);
}

TEST(LnGamma, RejectsNonPositive) {
  EXPECT_THROW(ln_gamma(0.0), DomainError);
  EXPECT_THROW(ln_gamma(-2.5), DomainError);
}

TEST(LnGamma, SignedTracksNegativeArguments) {
  const SignedLog r = ln_gamma_signed(-0.5);  // Γ(-1/2) = -2√π
  EXPECT_EQ(r.sign, -1);
  EXPECT_LT(rel(r.log_abs, std::log(2.0 * std::sqrt(std::numbers::pi))), 1e-14);
  EXPECT_THROW(ln_gamma_signed(-3.0), DomainError);
}

TEST(RegLowerGamma, KnownValues) {
  for (double x : {0.0, 0.1, 1.0, 5.0}) EXPECT_NEAR(reg_lower_gamma(1.0, x), -std::expm1(-x), 1e-15);
  EXPECT_EQ(reg_lower_gamma(2.7, 0.0), 0.0);
  EXPECT_LT(rel(reg_lower_gamma(3.5, 2.0), kRegLower3p5At2), 1e-13);
  EXPECT_NEAR(reg_lower_gamma(3.5, 2.0) + reg_upper_gamma(3.5, 2.0), 1.0, 1e-15);
}

TEST(RegLowerGamma, MonotoneAndBounded) {
  for (double s : {0.3, 1.0, 2.7, 9.0}) {
    double prev = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double v = reg_lower_gamma(s, 0.05 * i);
      EXPECT_GE(v, prev) << "s=" << s << " i=" << i;
      EXPECT_LE(v, 1.0);
      prev = v;
    }
    EXPECT_NEAR(reg_lower_gamma(s, 200.0), 1.0, 1e-15);
  }
  EXPECT_THROW(reg_lower_gamma(0.0, 1.0), DomainError);
  EXPECT_THROW(reg_lower_gamma(1.0, -1.0), DomainError);
}

TEST(BesselK, HalfIntegerClosedForm) {
  for (double x : {1e-3, 0.2, 1.0, 7.5, 40.0, 300.0}) {
    const double expect = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x);
    EXPECT_LT(rel(bessel_k(0.5, x), expect), 1e-12) << x;
  }
}

TEST(BesselK, ReferenceValue) { EXPECT_LT(rel(bessel_k(3.0, 1.7), kBesselK3At1p7), 1e-12); }

TEST(BesselK, OrderSymmetryExact) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> order(-20.0, 20.0);
  std::uniform_real_distribution<double> logx(std::log(1e-6), std::log(700.0));
  for (int i = 0; i < 100; ++i) {
    const double v = order(rng);
    const double x = std::exp(logx(rng));
    EXPECT_EQ(log_bessel_k(v, x), log_bessel_k(-v, x)) << v << ' ' << x;
  }
  EXPECT_EQ(bessel_k(-2.0, 0.9), bessel_k(2.0, 0.9));
}

TEST(BesselK, LargeArgumentsStayFinite) {
  // K_2(750) underflows; the scaled and log forms do not.
  EXPECT_THROW(bessel_k(2.0, 750.0), RangeError);
  EXPECT_TRUE(std::isfinite(bessel_k_scaled(2.0, 750.0)));
  EXPECT_LT(rel(log_bessel_k(0.5, 750.0), 0.5 * std::log(std::numbers::pi / 1500.0) - 750.0), 1e-14);
  EXPECT_THROW(bessel_k(1.0, 0.0), DomainError);
}

TEST(Hyp1F1, Identities) {
  EXPECT_EQ(hyp1f1(2.3, 4.1, 0.0).value, 1.0);
  for (double x : {0.3, 2.0, 11.0}) EXPECT_LT(rel(hyp1f1(1.7, 1.7, x).value, std::exp(x)), 1e-13);
  EXPECT_LT(rel(hyp1f1(2.0, 3.0, 1.5).value, kHyp1f1At2_3_1p5), 1e-13);
  EXPECT_THROW(hyp1f1(1.0, -2.0, 1.0), DomainError);
}

TEST(Hyp1F1, TruncationBoundCoversReference) {
  const double a = 3.5, b = 1.25, x = 9.0;
  SeriesControl loose;
  loose.rel_tol = 1e-6;
  const SeriesValue short_sum = hyp1f1(a, b, x, loose);
  // Reference with twice the terms.
  double term = 1.0, ref = 1.0;
  for (int k = 0; k < 2 * short_sum.terms; ++k) {
    term *= (a + k) * x / ((b + k) * (k + 1.0));
    ref += term;
  }
  EXPECT_LE(ref - short_sum.value, short_sum.tail_estimate * (1.0 + 1e-12));
  EXPECT_GE(ref, short_sum.value);
}

TEST(Hyp1F1, MaxTermsIsAConvergenceError) {
  SeriesControl ctl;
  ctl.max_terms = 5;
  EXPECT_THROW(hyp1f1(1.0, 1.0, 50.0, ctl), ConvergenceError);
}

TEST(LogHyp1F1, LargeArgument) {
  // 1F1(a; a; x) = e^x and 1F1(1; 2; x) = (e^x - 1) / x.
  EXPECT_LT(rel(log_hyp1f1(2.0, 2.0, 26263.0).log_value, 26263.0), 1e-14);
  for (double x : {501.0, 3000.0, 1e5}) {
    EXPECT_LT(rel(log_hyp1f1(1.0, 2.0, x).log_value, x - std::log(x)), 1e-14) << x;
  }
  // mpmath references past the switch to the asymptotic form.
  EXPECT_LT(rel(log_hyp1f1(2.3, 1.7, 501.0).log_value, 504.48152199753559191848), 1e-14);
  EXPECT_LT(rel(log_hyp1f1(4.0, 3.5, 2000.0).log_value, 2003.2104148944679482880), 1e-14);
  EXPECT_LT(rel(log_hyp1f1(6.5, 2.0, 1e4).log_value, 10035.786443501083174251), 1e-14);
}

TEST(SeriesControl, Validation) {
  SeriesControl ctl;
  ctl.rel_tol = 0.0;
  EXPECT_THROW(ctl.validate(), DomainError);
  ctl = {};
  ctl.consecutive_small = 0;
  EXPECT_THROW(ctl.validate(), DomainError);
}

// Optical-link instances at ξ = 0.8 and the fresh-water registry shape
// (a = 1.656, c = 1.648), evaluated at z = 0.7 with mpmath.
TEST(MeijerG, ReferenceValuesAtPointSeven) {
  const double xi2 = 0.64, a = 1.656, c = 1.648;
  EXPECT_LT(rel(meijer_g(meijer_g_2012(1 + xi2, 1, xi2), 0.7).value, 0.3217189552634886434), 1e-10);
  EXPECT_LT(rel(meijer_g(meijer_g_2123(1 + xi2, 1, xi2), 0.7).value, 1.2892713304251236386), 1e-10);
  EXPECT_LT(rel(meijer_g(meijer_g_2012(1 + xi2 / c, a, xi2 / c), 0.7).value, 0.4850914302508639915), 1e-10);
  EXPECT_LT(rel(meijer_g(meijer_g_2123(1 + xi2 / c, a, xi2 / c), 0.7).value, 1.8148780091215344032), 1e-10);
}

TEST(MeijerG, IncompleteGammaIdentity) {
  // G^{2,0}_{1,2}(z | k+1; 1, k) = z^k Γ(1-k, z)
  const double k = 0.64;
  for (double z : {0.01, 0.5, 3.0, 20.0}) {
    const double expect = std::pow(z, k) * std::tgamma(1.0 - k) * reg_upper_gamma(1.0 - k, z);
    EXPECT_LT(rel(meijer_g(meijer_g_2012(1.0 + k, 1.0, k), z).value, expect), 1e-11) << z;
  }
}

TEST(MeijerG, CdfInstanceVanishesAtOrigin) {
  const auto spec = meijer_g_2123(1.64, 1.0, 0.64);
  EXPECT_LT(meijer_g(spec, 1e-12).value, 1e-6);
  EXPECT_LT(meijer_g(spec, 1e-12).value, meijer_g(spec, 1e-9).value);
}

TEST(MeijerG, RejectsUnsupportedInstances) {
  EXPECT_THROW(meijer_g({1, 0, 0, 1, {}, {0.0}}, 1.0), DomainError);
  EXPECT_THROW(meijer_g(meijer_g_2012(1.5, 1.0, 0.5), 0.0), DomainError);
  EXPECT_THROW(meijer_g({2, 0, 1, 2, {1.0}, {1.0}}, 1.0), DomainError);
}

TEST(MeijerG, AgreesWithOracleOffCollision) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> xi(0.5, 3.0), shape(0.6, 4.0), power(0.6, 3.0);
  std::uniform_real_distribution<double> logz(std::log(1e-3), std::log(50.0));
  int checked = 0;
  while (checked < 12) {
    const double xi2 = std::pow(xi(rng), 2), a = shape(rng), c = power(rng);
    if (detail::near_integer(xi2 / c - a, 1e-3)) continue;
    const double z = std::exp(logz(rng));
    for (const auto& spec : {meijer_g_2012(1 + xi2 / c, a, xi2 / c), meijer_g_2123(1 + xi2 / c, a, xi2 / c)}) {
      const double series = meijer_g(spec, z).value;
      EXPECT_LT(rel(series, mellin_barnes_oracle(spec, z)), 1e-8) << spec.describe() << " z=" << z;
    }
    ++checked;
  }
}

TEST(MeijerG, CollisionUsesPerturbation) {
  // ξ = 1 makes S = K = 1.
  for (double z : {0.05, 1.0, 8.0}) {
    const auto spec = meijer_g_2012(2.0, 1.0, 1.0);
    const MeijerGResult r = meijer_g(spec, z);
    EXPECT_TRUE(r.perturbed);
    EXPECT_LT(rel(r.value, mellin_barnes_oracle(spec, z)), 1e-5) << z;
    // k = 1 in the incomplete-gamma identity: z E_1(z).
    EXPECT_LT(rel(r.value, z * boost::math::expint(1, z)), 1e-5) << z;
  }
}

TEST(MellinBarnesOracle, DefiningIdentities) {
  for (double z : {0.1, 1.0, 6.0}) {
    EXPECT_LT(rel(mellin_barnes_oracle({1, 0, 0, 1, {}, {0.0}}, z), std::exp(-z)), 1e-9) << z;
    const double s = 1.7;
    const double lower_gamma = std::tgamma(s) * reg_lower_gamma(s, z);
    EXPECT_LT(rel(mellin_barnes_oracle({1, 1, 1, 2, {1.0}, {s, 0.0}}, z), lower_gamma), 1e-9) << z;
  }
}

TEST(MellinBarnesOracle, ContourPlacementFailure) {
  // a_1 - 1 = 2 lies right of b_1 = 0.5: no separating line.
  EXPECT_THROW(mellin_barnes_oracle({1, 1, 1, 2, {3.0}, {0.5, 0.0}}, 1.0), NumericalError);
}

}  // namespace
