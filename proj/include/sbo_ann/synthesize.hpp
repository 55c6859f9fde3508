#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "sbo_ann/dataset.hpp"
#include "sbo_ann/network.hpp"
#include "sbo_ann/random.hpp"

namespace sbo_ann {

struct SynthesisOptions {
  double noise_std = 2.0; // MPa
};

/// Raw frozen-network response for one sample after min-max scaling its
/// features with the summary's per-feature bounds.
inline double planted_response(const DatasetSummary &summary, const FeatureVector &x) {
  FeatureVector scaled{};
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    const auto &v = summary.variables[k];
    if (!(v.maximum > v.minimum))
      throw ValidationError("summary range of " + std::string(kColumnNames[k]) + " is empty");
    scaled[k] = (x[k] - v.minimum) / (v.maximum - v.minimum);
  }
  return forward(frozen_reference_model(), scaled);
}

/// Surrogate dataset with a learnable planted relation.
///
/// Features are uniform on each variable's [minimum, maximum]. The target is
/// the frozen reference network applied to the min-max scaled features,
/// mapped affinely so the smallest and largest responses in the sample land
/// on the summary's UCS minimum and maximum, plus Gaussian noise. A noise
/// draw that would make UCS non-positive is redrawn.
///
/// Draw order: all features row by row (column order CSC..SR), then one
/// normal draw per row (more on redraw).
inline Dataset synthesize(const DatasetSummary &summary, std::size_t n, std::uint64_t seed,
                          const SynthesisOptions &options = {}) {
  if (n < 2)
    throw InsufficientDataError("synthesize needs n >= 2, got " + std::to_string(n));
  if (!(options.noise_std >= 0.0))
    throw ValidationError("noise std must be non-negative");
  const auto &target = summary.ucs();
  if (!(target.maximum > target.minimum) || target.minimum <= 0.0)
    throw ValidationError("summary UCS range must be positive and non-empty");

  Rng rng = make_rng(seed, Stream::synthesize);
  std::vector<FeatureVector> features(n);
  std::vector<double> response(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < kFeatureCount; ++k) {
      const auto &v = summary.variables[k];
      features[i][k] = uniform_between(rng, v.minimum, v.maximum);
    }
    response[i] = planted_response(summary, features[i]);
  }

  const auto [lo_it, hi_it] = std::minmax_element(response.begin(), response.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo))
    throw ValidationError("planted responses are constant; cannot rescale");

  std::normal_distribution<double> noise(0.0, 1.0);
  Dataset data;
  data.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double clean =
        target.minimum + (response[i] - lo) / (hi - lo) * (target.maximum - target.minimum);
    double ucs = clean;
    if (options.noise_std > 0.0) {
      do {
        ucs = clean + options.noise_std * noise(rng);
      } while (ucs <= 0.0);
    }
    const auto &f = features[i];
    data.push_back({f[0], f[1], f[2], f[3], f[4], f[5], f[6], f[7], ucs});
  }
  return data;
}

} // namespace sbo_ann
