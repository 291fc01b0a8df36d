// Histogram of κ-μ shadowed draws against the PDF.
//
//   ./fading_histogram [kappa mu m g phi_db]

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "uowcsec/channels.hpp"

using namespace uowcsec;

int main(int argc, char** argv) {
  channels::KMSChannel ch{1.0, 1.0, 2.0, 2, 10.0};
  if (argc == 6) {
    ch = {std::atof(argv[1]), std::atof(argv[2]), std::atof(argv[3]), std::atoi(argv[4]),
          std::pow(10.0, std::atof(argv[5]) / 10.0)};
  }
  const channels::KMSSampler sampler(ch);
  RandomStream rng(7, 0);
  const int n = 200'000, bins = 24;
  const double width = 3.0 * ch.phi / bins;
  std::vector<int> hist(bins, 0);
  for (int i = 0; i < n; ++i) {
    const auto b = static_cast<int>(sampler(rng) / width);
    if (b < bins) ++hist[static_cast<std::size_t>(b)];
  }
  std::printf("%10s %10s %10s\n", "snr", "empirical", "pdf");
  for (int b = 0; b < bins; ++b) {
    const double mid = (b + 0.5) * width;
    std::printf("%10.3f %10.5f %10.5f\n", mid, hist[static_cast<std::size_t>(b)] / (n * width), channels::kms_pdf(mid, ch));
  }
}
