#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>

#include "sbo_ann/error.hpp"

namespace sbo_ann::metrics {

namespace detail {

inline void check_pairs(std::span<const double> expected, std::span<const double> predicted) {
  if (expected.size() != predicted.size())
    throw DimensionError("length mismatch: " + std::to_string(expected.size()) + " expected vs " +
                         std::to_string(predicted.size()) + " predicted");
  if (expected.empty())
    throw InsufficientDataError("metrics need at least one pair");
}

} // namespace detail

/// Mean absolute error, MPa.
inline double mae(std::span<const double> expected, std::span<const double> predicted) {
  detail::check_pairs(expected, predicted);
  double sum = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i)
    sum += std::abs(expected[i] - predicted[i]);
  return sum / static_cast<double>(expected.size());
}

/// Mean absolute percentage error, in percent.
inline double mape(std::span<const double> expected, std::span<const double> predicted) {
  detail::check_pairs(expected, predicted);
  double sum = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (expected[i] == 0.0)
      throw UndefinedMetricError("MAPE undefined: expected value at index " + std::to_string(i) + " is 0");
    sum += std::abs((expected[i] - predicted[i]) / expected[i]);
  }
  return sum / static_cast<double>(expected.size()) * 100.0;
}

inline double rmse(std::span<const double> expected, std::span<const double> predicted) {
  detail::check_pairs(expected, predicted);
  double sum = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double d = expected[i] - predicted[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(expected.size()));
}

/// Pearson correlation. Throws UndefinedMetricError when either side has
/// zero variance. Clamped to [-1, 1] against rounding.
inline double pearson_r(std::span<const double> expected, std::span<const double> predicted) {
  detail::check_pairs(expected, predicted);
  if (expected.size() < 2)
    throw InsufficientDataError("correlation needs at least two pairs");
  const auto n = static_cast<double>(expected.size());
  double mean_e = 0.0;
  double mean_p = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    mean_e += expected[i];
    mean_p += predicted[i];
  }
  mean_e /= n;
  mean_p /= n;
  double cross = 0.0;
  double ss_e = 0.0;
  double ss_p = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double de = expected[i] - mean_e;
    const double dp = predicted[i] - mean_p;
    cross += dp * de;
    ss_e += de * de;
    ss_p += dp * dp;
  }
  if (ss_e == 0.0 || ss_p == 0.0)
    throw UndefinedMetricError("correlation undefined: zero variance");
  const double r = cross / (std::sqrt(ss_p) * std::sqrt(ss_e));
  return std::fmax(-1.0, std::fmin(1.0, r));
}

/// The four indices for one phase, in table column order.
struct PhaseMetrics {
  double rmse = 0.0;
  double mape = 0.0;
  double mae = 0.0;
  double r = 0.0;
  std::size_t count = 0;

  friend bool operator==(const PhaseMetrics &, const PhaseMetrics &) = default;
};

inline PhaseMetrics phase_metrics(std::span<const double> expected, std::span<const double> predicted) {
  return {rmse(expected, predicted), mape(expected, predicted), mae(expected, predicted),
          pearson_r(expected, predicted), expected.size()};
}

/// Training and testing indices for one model. `testing` is empty when
/// the model was trained without a held-out split.
struct EvaluationReport {
  PhaseMetrics training;
  std::optional<PhaseMetrics> testing;

  friend bool operator==(const EvaluationReport &, const EvaluationReport &) = default;
};

} // namespace sbo_ann::metrics
