// Copyright 2026 The uowcsec Authors
// SPDX-License-Identifier: Apache-2.0

//! \file stats.hpp
//! One-sample Kolmogorov-Smirnov test.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace uowcsec::cli {

struct KSResult {
  double statistic = 0.0;  // sup |F_n - F|
  double p_value = 1.0;
  std::size_t n = 0;
};

/// Pr{K > t} for the limiting Kolmogorov distribution.
inline double kolmogorov_survival(double t) {
  if (t <= 0.0) return 1.0;
  if (t < 0.2) return 1.0;  // the alternating series is slow here and the value is 1 to double precision
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// KS test of `samples` against `cdf`; sorts `samples` in place.
/// The p-value uses Stephens' finite-sample correction of the limiting law.
inline KSResult ks_test(std::vector<double>& samples, const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  KSResult r;
  r.n = samples.size();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    r.statistic = std::max({r.statistic, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  const double root = std::sqrt(n);
  r.p_value = kolmogorov_survival((root + 0.12 + 0.11 / root) * r.statistic);
  return r;
}

}  // namespace uowcsec::cli
