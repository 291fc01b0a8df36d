#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "uowcsec/errors.hpp"
#include "uowcsec/secrecy.hpp"

namespace {

using namespace uowcsec;
using namespace uowcsec::secrecy;

double db(double v) { return std::pow(10.0, v / 10.0); }

EGGChannel optical(int epsilon, double phi_db) {
  EGGChannel ch;
  ch.omega = 0.2082;
  ch.lambda_exp = 0.2688;
  ch.a = 1.656;
  ch.b = 0.9412038338;
  ch.c = 1.648;
  ch.xi = 0.8;
  ch.epsilon = epsilon;
  ch.phi_sr = db(phi_db);
  return ch;
}

KMSChannel rf(double phi_db, double kappa = 1.0, double mu = 1.0, double m = 2.0, int g = 2) {
  return {kappa, mu, m, g, db(phi_db)};
}

// Shared desk values: Φ_sr = 15 dB, Φ_rd = 15 dB, Φ_re = 0 dB, Φ_br = 1 dB, P_b = 20 dB.
Links desk_links(int epsilon = 1) { return {optical(epsilon, 15.0), rf(15.0), rf(0.0), rf(1.0)}; }

SystemConfig desk_system(Scenario s = Scenario::Colluding, int n_eav = 1) {
  SystemConfig cfg;
  cfg.p_b = db(20.0);
  cfg.scenario = s;
  cfg.n_eav = n_eav;
  return cfg;
}

TEST(SopDerived, ThresholdAndOffset) {
  SystemConfig cfg = desk_system();
  const SOPDerived d = sop_derived(cfg);
  EXPECT_DOUBLE_EQ(d.theta, std::pow(2.0, 2.0 * cfg.r_s));
  EXPECT_DOUBLE_EQ(d.d0, (d.theta - 1.0) * cfg.n_d / (cfg.eta_r * cfg.p_b));
  cfg.r_s = 1e-7;
  EXPECT_GT(sop_derived(cfg).theta, 1.0);
  EXPECT_LT(sop_derived(cfg).d0, 1e-8);
}

TEST(ProbCsrExceeds, Limits) {
  const EGGChannel ch = optical(1, 15.0);
  EXPECT_GT(prob_csr_exceeds(1e-12, ch), 1.0 - 1e-6);
  EXPECT_LT(prob_csr_exceeds(20.0, ch), 1e-12);
  EXPECT_THROW(prob_csr_exceeds(0.0, ch), DomainError);
}

TEST(ProbCsrExceeds, MatchesQuadrature) {
  const EGGChannel ch = optical(1, 15.0);
  const double threshold = std::expm1(0.1 * std::numbers::ln2);
  const double mass = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double g) { return g > 0.0 ? channels::uowc_pdf(g, ch) : 0.0; }, 0.0, threshold, 20, 1e-12);
  EXPECT_NEAR(prob_csr_exceeds(0.05, ch), 1.0 - mass, 1e-6);
}

TEST(Sop, BoundedBelowByFirstHopOutage) {
  for (int eps : {1, 2}) {
    const Links links = desk_links(eps);
    for (Scenario s : {Scenario::Colluding, Scenario::NonColluding}) {
      const SystemConfig cfg = desk_system(s, 2);
      const double v = sop(cfg, links).value;
      EXPECT_GE(v, 1.0 - prob_csr_exceeds(cfg.r_s, links.sr));
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Scenarios, AgreeForOneEavesdropper) {
  const Links links = desk_links();
  const SystemConfig c = desk_system(Scenario::Colluding, 1);
  const SystemConfig n = desk_system(Scenario::NonColluding, 1);
  EXPECT_NEAR(sop(c, links).value, sop(n, links).value, 1e-6);
  EXPECT_NEAR(spsc(c, links).value, spsc(n, links).value, 1e-6);
  EXPECT_NEAR(est_metric(c, links).value, est_metric(n, links).value, 1e-6);
  EXPECT_NEAR(sop_colluding(c, links.sr, links.rd, links.re, links.br).value,
              sop_noncolluding(n, links.sr, links.rd, links.re, links.br).value, 1e-6);
}

TEST(Spsc, SymmetricLinksGiveOneHalf) {
  const SystemConfig cfg = desk_system();
  const double v = spsc_colluding(cfg, rf(5.0), rf(5.0)).value;
  EXPECT_NEAR(v, 0.5, 1e-3);
}

TEST(Spsc, DominantMainChannel) {
  const SystemConfig cfg = desk_system();
  EXPECT_GE(spsc_colluding(cfg, rf(30.0), rf(-10.0)).value, 0.999);
}

TEST(Spsc, NonincreasingInEavesdroppers) {
  const Links links = desk_links();
  double prev = 1.0;
  for (int n = 1; n <= 4; ++n) {
    const double v = spsc(desk_system(Scenario::NonColluding, n), links).value;
    EXPECT_LE(v, prev) << n;
    prev = v;
  }
}

TEST(Spsc, IsTheZeroRateLimitOfNonOutage) {
  const std::vector<Links> configs = {desk_links(), {optical(1, 20.0), rf(10.0), rf(-10.0), rf(1.0)},
                                      {optical(1, 15.0), rf(25.0), rf(0.0), rf(1.0)}};
  for (const Links& links : configs) {
    SystemConfig cfg = desk_system();
    const double positive = spsc(cfg, links).value;
    cfg.r_s = 1e-6;
    EXPECT_LE(std::abs(positive - (1.0 - sop(cfg, links).value)), 5e-4);
  }
}

TEST(Sop, NoncolludingNotWorseThanColluding) {
  const Links links = desk_links();
  EXPECT_LE(sop(desk_system(Scenario::NonColluding, 2), links).value,
            sop(desk_system(Scenario::Colluding, 2), links).value);
}

// 20-point sweeps at the Φ_rd-sweep recipe configuration.
Links fig4_links(double rd_db, double re_db) {
  return {optical(1, 15.0), rf(rd_db, 1.0, 3.0, 2.0), rf(re_db, 1.0, 1.0, 1.0), rf(1.0, 1.0, 3.0, 2.0)};
}

TEST(Sop, MonotoneInMainAndEavesdropperSnr) {
  const SystemConfig cfg = desk_system();
  double prev = 1.0;
  for (int i = 0; i < 20; ++i) {
    const double v = sop(cfg, fig4_links(1.5 * i, 0.0)).value;
    EXPECT_LE(v, prev) << "rd " << 1.5 * i;
    prev = v;
  }
  prev = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double v = sop(cfg, fig4_links(15.0, -10.0 + i)).value;
    EXPECT_GE(v, prev) << "re " << -10.0 + i;
    prev = v;
  }
}

TEST(Sop, NondecreasingInTargetRate) {
  SystemConfig cfg = desk_system();
  double prev = 0.0;
  for (int i = 0; i < 20; ++i) {
    cfg.r_s = 0.05 + 0.1 * i;
    const double v = sop(cfg, desk_links()).value;
    EXPECT_GE(v, prev) << cfg.r_s;
    prev = v;
  }
}

TEST(Est, Definition) {
  SystemConfig cfg = desk_system();
  cfg.r_s = 1.5;
  EXPECT_EQ(est(cfg, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(est(cfg, 0.25), 1.125);
  EXPECT_THROW(est(cfg, 1.5), DomainError);
  cfg.r_s = 1e-9;
  EXPECT_LT(est_metric(cfg, desk_links()).value, 1e-9);
  cfg.r_s = 0.8;
  const MetricResult r = est_metric(cfg, desk_links());
  EXPECT_DOUBLE_EQ(r.value, est(cfg, sop(cfg, desk_links()).value));
}

TEST(Metrics, ReportDiagnostics) {
  const MetricResult r = sop(desk_system(Scenario::NonColluding, 3), desk_links());
  EXPECT_GT(r.terms_used.at("compositions"), 0);
  EXPECT_GT(r.terms_used.at("bessel"), 0);
  EXPECT_LT(r.tail_estimate, 1e-9);
}

TEST(Metrics, InvalidInputs) {
  SystemConfig cfg = desk_system();
  cfg.eta_r = 1.5;
  EXPECT_THROW(sop(cfg, desk_links()), ConfigError);
  cfg = desk_system();
  Links links = desk_links();
  links.rd.mu = 1.25;  // G μ = 2.5
  EXPECT_THROW(sop(cfg, links), ConfigError);
}

}  // namespace
