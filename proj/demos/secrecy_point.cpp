// Secrecy metrics at one operating point, closed form next to Monte Carlo.
//
//   ./secrecy_point [n_eav]

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "uowcsec/mcsim.hpp"
#include "uowcsec/secrecy.hpp"

using namespace uowcsec;

int main(int argc, char** argv) {
  const int n_eav = argc > 1 ? std::atoi(argv[1]) : 2;
  auto db = [](double v) { return std::pow(10.0, v / 10.0); };

  channels::EGGChannel sr;  // synthetic turbulence, not a measured water condition
  sr.omega = 0.2082;
  sr.lambda_exp = 0.2688;
  sr.a = 1.656;
  sr.b = 0.9412038338;
  sr.c = 1.648;
  sr.xi = 0.8;
  sr.epsilon = 1;
  sr.phi_sr = db(15.0);
  const channels::KMSChannel rd{1.0, 1.0, 2.0, 2, db(15.0)};
  const channels::KMSChannel re{1.0, 1.0, 2.0, 2, db(0.0)};
  const channels::KMSChannel br{1.0, 1.0, 2.0, 2, db(1.0)};
  const secrecy::Links links{sr, rd, re, br};

  for (auto scenario : {secrecy::Scenario::Colluding, secrecy::Scenario::NonColluding}) {
    secrecy::SystemConfig cfg;
    cfg.p_b = db(20.0);
    cfg.n_eav = n_eav;
    cfg.scenario = scenario;
    const auto sop = secrecy::sop(cfg, links);
    const auto spsc = secrecy::spsc(cfg, links);
    const auto est = secrecy::est_metric(cfg, links);
    const auto mode = mcsim::default_mode(scenario);
    const auto counts = mcsim::simulate(cfg, links, 1'000'000, 1, mode);
    const auto mc_sop = mcsim::sop_estimate(counts, 1, mode);
    const auto mc_spsc = mcsim::spsc_estimate(counts, 1, mode);
    std::printf("%s, %d eavesdroppers\n", secrecy::to_string(scenario), n_eav);
    std::printf("  SOP  %.6f   MC %.6f +- %.6f\n", sop.value, mc_sop.mean, mc_sop.ci_half_width);
    std::printf("  SPSC %.6f   MC %.6f +- %.6f\n", spsc.value, mc_spsc.mean, mc_spsc.ci_half_width);
    std::printf("  EST  %.6f bit/s/Hz\n", est.value);
  }
}
