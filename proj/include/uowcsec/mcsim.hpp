// Copyright 2026 The uowcsec Authors
// SPDX-License-Identifier: Apache-2.0

//! \file mcsim.hpp
//! Monte-Carlo simulation of the end-to-end signal model.
//!
//! Each trial draws the optical SNR and the beacon, destination and
//! eavesdropper fading gains, forms the instantaneous SNRs of the
//! wireless-powered relay, and records whether the decode-and-forward
//! secrecy capacity min(C_sr, C_rd) falls below R_s and whether C_rd > 0.
//!
//! Trials are split into fixed-size chunks; chunk c uses RandomStream(seed, c)
//! no matter which worker runs it, so results do not depend on --jobs.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "uowcsec/channels.hpp"
#include "uowcsec/errors.hpp"
#include "uowcsec/random.hpp"
#include "uowcsec/secrecy.hpp"

namespace uowcsec::mcsim {

using secrecy::Links;
using secrecy::Scenario;
using secrecy::SystemConfig;

/// How the eavesdroppers' receptions are combined.
enum class Mode {
  MRCSum,             // colluding: sum of per-eavesdropper SNRs sharing the beacon draw
  PaperSubstitution,  // colluding: one draw from the scaled colluding law
  MaxSelect,          // non-colluding: strongest eavesdropper
};

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::MRCSum: return "mrc";
    case Mode::PaperSubstitution: return "paper";
    case Mode::MaxSelect: return "max";
  }
  return "?";
}

/// The mode matching a scenario when none is given.
inline Mode default_mode(Scenario s) { return s == Scenario::Colluding ? Mode::MRCSum : Mode::MaxSelect; }

/// One trial's channel realization.
struct FadingDraw {
  double g_br = 0.0;
  double g_rd = 0.0;
  std::vector<double> g_re;
  double gamma_sr = 0.0;
};

struct MCEstimate {
  double mean = 0.0;
  double ci_half_width = 0.0;  // 95% normal approximation
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  Mode mode = Mode::MRCSum;
  std::int64_t events = 0;
  bool low_confidence = false;  // fewer than 10 events or non-events

  [[nodiscard]] double ci_low() const { return mean - ci_half_width; }
  [[nodiscard]] double ci_high() const { return mean + ci_half_width; }
  [[nodiscard]] double sigma() const { return ci_half_width / 1.959963984540054; }
};

struct MCOptions {
  int jobs = 1;
  std::int64_t chunk_size = 1 << 15;
  bool decouple_beacon = false;  // test hook: independent beacon draw for the eavesdroppers
};

/// Event counts of one simulation run.
struct Counts {
  std::int64_t trials = 0;
  std::int64_t outage = 0;    // min(C_sr, C_rd) < R_s
  std::int64_t positive = 0;  // C_rd > 0

  Counts& operator+=(const Counts& o) {
    trials += o.trials;
    outage += o.outage;
    positive += o.positive;
    return *this;
  }
  friend bool operator==(const Counts&, const Counts&) = default;
};

inline constexpr std::int64_t kMinTrials = 10'000;

namespace detail {

inline void check_mode(const SystemConfig& cfg, Mode mode) {
  if (cfg.n_eav == 1) return;
  const bool colluding = cfg.scenario == Scenario::Colluding;
  if (colluding && mode == Mode::MaxSelect) {
    throw ConfigError("mode 'max' models non-colluding eavesdroppers; the scenario is colluding");
  }
  if (!colluding && mode != Mode::MaxSelect) {
    throw ConfigError(std::string("mode '") + to_string(mode) +
                      "' models colluding eavesdroppers; the scenario is non-colluding");
  }
}

class TrialSampler {
 public:
  TrialSampler(const SystemConfig& cfg, const Links& links, Mode mode, bool decouple)
      : cfg_(cfg),
        links_(links),
        mode_(mode),
        decouple_(decouple),
        rd_(links.rd),
        re_(links.re),
        br_(links.br),
        colluding_(channels::colluding_channel(links.re, cfg.n_eav)),
        sr_coeffs_(channels::egg_coeffs(links.sr)) {}

  FadingDraw draw(RandomStream& rng) const {
    FadingDraw d;
    d.gamma_sr = channels::irradiance_to_snr(
        channels::sample_irradiance(links_.sr, rng) * channels::sample_pointing(links_.sr, rng), links_.sr,
        sr_coeffs_);
    d.g_br = br_(rng);
    d.g_rd = rd_(rng);
    if (mode_ == Mode::PaperSubstitution) {
      d.g_re.push_back(colluding_(rng));
    } else {
      d.g_re.reserve(static_cast<std::size_t>(cfg_.n_eav));
      for (int j = 0; j < cfg_.n_eav; ++j) d.g_re.push_back(re_(rng));
    }
    return d;
  }

  // Adds one trial to `c`.
  void trial(RandomStream& rng, Counts& c) const {
    const FadingDraw d = draw(rng);
    const double g_br_eav = decouple_ ? br_(rng) : d.g_br;
    const double gain = cfg_.eta_r * cfg_.p_b;
    const double gamma_rd = gain / cfg_.n_d * d.g_br * d.g_rd;
    double combined = 0.0;
    if (mode_ == Mode::MaxSelect) {
      combined = *std::max_element(d.g_re.begin(), d.g_re.end());
    } else {
      for (double g : d.g_re) combined += g;
    }
    const double gamma_re = gain / cfg_.n_e * g_br_eav * combined;

    const double c_sr = 0.5 * std::log1p(d.gamma_sr) / std::numbers::ln2;
    const double c_rd = std::max(0.0, 0.5 * (std::log1p(gamma_rd) - std::log1p(gamma_re)) / std::numbers::ln2);
    ++c.trials;
    if (std::min(c_sr, c_rd) < cfg_.r_s) ++c.outage;
    if (c_rd > 0.0) ++c.positive;
  }

 private:
  SystemConfig cfg_;
  Links links_;
  Mode mode_;
  bool decouple_;
  channels::KMSSampler rd_;
  channels::KMSSampler re_;
  channels::KMSSampler br_;
  channels::KMSSampler colluding_;
  channels::EGGCoeffs sr_coeffs_;
};

inline MCEstimate make_estimate(std::int64_t events, std::int64_t n, std::uint64_t seed, Mode mode) {
  MCEstimate e;
  e.n = n;
  e.seed = seed;
  e.mode = mode;
  e.events = events;
  e.mean = static_cast<double>(events) / static_cast<double>(n);
  e.ci_half_width = 1.959963984540054 * std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(n));
  e.low_confidence = events < 10 || (n - events) < 10;
  return e;
}

}  // namespace detail

/// Runs `n` trials and returns the event counts.
inline Counts simulate(const SystemConfig& cfg, const Links& links, std::int64_t n, std::uint64_t seed, Mode mode,
                       const MCOptions& opts = {}) {
  cfg.validate();
  links.sr.validate();
  if (n < kMinTrials) throw ConfigError("Monte-Carlo runs need at least 10000 trials");
  if (opts.chunk_size < 1) throw ConfigError("chunk size must be positive");
  detail::check_mode(cfg, mode);
  const detail::TrialSampler sampler(cfg, links, mode, opts.decouple_beacon);

  const std::int64_t chunks = (n + opts.chunk_size - 1) / opts.chunk_size;
  std::vector<Counts> per_chunk(static_cast<std::size_t>(chunks));
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (std::int64_t c = next++; c < chunks; c = next++) {
      RandomStream rng(seed, static_cast<std::uint64_t>(c));
      const std::int64_t begin = c * opts.chunk_size;
      const std::int64_t end = std::min(n, begin + opts.chunk_size);
      Counts local;
      for (std::int64_t i = begin; i < end; ++i) sampler.trial(rng, local);
      per_chunk[static_cast<std::size_t>(c)] = local;
    }
  };
  const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(chunks)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  Counts total;
  for (const auto& c : per_chunk) total += c;
  return total;
}

inline MCEstimate sop_estimate(const Counts& c, std::uint64_t seed, Mode mode) {
  return detail::make_estimate(c.outage, c.trials, seed, mode);
}

inline MCEstimate spsc_estimate(const Counts& c, std::uint64_t seed, Mode mode) {
  return detail::make_estimate(c.positive, c.trials, seed, mode);
}

inline MCEstimate est_estimate(const SystemConfig& cfg, const Counts& c, std::uint64_t seed, Mode mode) {
  MCEstimate e = sop_estimate(c, seed, mode);
  e.mean = cfg.r_s * (1.0 - e.mean);
  e.ci_half_width *= cfg.r_s;
  return e;
}

inline MCEstimate estimate_sop(const SystemConfig& cfg, const Links& links, std::int64_t n, std::uint64_t seed,
                               Mode mode, const MCOptions& opts = {}) {
  return sop_estimate(simulate(cfg, links, n, seed, mode, opts), seed, mode);
}

inline MCEstimate estimate_spsc(const SystemConfig& cfg, const Links& links, std::int64_t n, std::uint64_t seed,
                                Mode mode, const MCOptions& opts = {}) {
  return spsc_estimate(simulate(cfg, links, n, seed, mode, opts), seed, mode);
}

inline MCEstimate estimate_est(const SystemConfig& cfg, const Links& links, std::int64_t n, std::uint64_t seed,
                               Mode mode, const MCOptions& opts = {}) {
  return est_estimate(cfg, simulate(cfg, links, n, seed, mode, opts), seed, mode);
}

}  // namespace uowcsec::mcsim
