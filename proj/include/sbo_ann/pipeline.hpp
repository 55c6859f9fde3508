#pragma once

// End-to-end workflows: train one hybrid, sweep population sizes, compare
// algorithms on a shared split, and the CSV exports that go with them.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sbo_ann/dataset.hpp"
#include "sbo_ann/metrics.hpp"
#include "sbo_ann/model_io.hpp"
#include "sbo_ann/network.hpp"
#include "sbo_ann/optimizers.hpp"

namespace sbo_ann {

inline constexpr double kTrainFraction = 0.8;
inline constexpr std::size_t kDefaultIterations = 1000;
inline constexpr std::array<std::size_t, 7> kDefaultSweepSizes = {10, 50, 100, 200, 300, 400, 500};
inline constexpr double kWeightBound = 2.0;
inline constexpr std::size_t kMinTrainingRecords = 10;

inline SearchConfig default_search_config() {
  SearchConfig c;
  c.iterations = kDefaultIterations;
  return c;
}

inline NetworkShape ucs_network_shape() { return NetworkShape({kFeatureCount, 4, 1}); }

/// [-2, 2] on every weight and bias.
inline Bounds ann_bounds(const NetworkShape &shape) {
  return Bounds::uniform(shape.param_count(), -kWeightBound, kWeightBound);
}

/// UCS prediction in MPa for one raw record.
inline double predict_ucs(const NetworkShape &shape, std::span<const double> params, const MinMaxScaler &scaler,
                          const FeatureVector &raw) {
  const auto scaled = scaler.apply(raw);
  return scaler.target_to_mpa(forward_scalar(shape, params, scaled));
}

inline double predict_ucs(const NetworkParams &params, const MinMaxScaler &scaler, const FeatureVector &raw) {
  return predict_ucs(params.shape(), params.flatten(), scaler, raw);
}

/// Training-RMSE objective over the flat parameter vector. Scaled inputs are
/// precomputed; the prediction path is the same one `evaluate` uses, so the
/// final cost equals the reported training RMSE exactly.
inline ObjectiveSpec make_ann_objective(const Dataset &train, const MinMaxScaler &scaler,
                                        const NetworkShape &shape = ucs_network_shape()) {
  struct Data {
    NetworkShape shape;
    std::vector<FeatureVector> inputs;
    Vector targets;
    MinMaxScaler scaler;
  };
  auto data = std::make_shared<Data>();
  data->shape = shape;
  data->scaler = scaler;
  for (const auto &r : train) {
    data->inputs.push_back(scaler.apply(r.features()));
    data->targets.push_back(r.ucs);
  }
  CostFunction cost = [data](std::span<const double> params) {
    thread_local Vector predicted;
    predicted.resize(data->inputs.size());
    for (std::size_t i = 0; i < data->inputs.size(); ++i)
      predicted[i] = data->scaler.target_to_mpa(forward_scalar(data->shape, params, data->inputs[i]));
    return metrics::rmse(data->targets, predicted);
  };
  return {ann_bounds(shape), std::move(cost)};
}

/// Metrics for any predictor `record -> MPa` on both splits.
template <class Predictor>
metrics::EvaluationReport evaluate_predictor(Predictor &&predict, const Dataset &train, const Dataset &test) {
  auto phase = [&](const Dataset &data, const char *name) {
    Vector expected;
    Vector predicted;
    expected.reserve(data.size());
    predicted.reserve(data.size());
    for (const auto &r : data) {
      expected.push_back(r.ucs);
      predicted.push_back(predict(r));
    }
    try {
      return metrics::phase_metrics(expected, predicted);
    } catch (const Error &e) {
      throw Error(std::string(name) + " phase: " + e.what());
    }
  };
  metrics::EvaluationReport report;
  report.training = phase(train, "training");
  if (!test.empty())
    report.testing = phase(test, "testing");
  return report;
}

inline metrics::EvaluationReport evaluate(const NetworkParams &model, const MinMaxScaler &scaler,
                                          const Dataset &train, const Dataset &test) {
  return evaluate_predictor([&](const ConcreteRecord &r) { return predict_ucs(model, scaler, r.features()); },
                            train, test);
}

struct TrainedHybrid {
  Algorithm algorithm = Algorithm::sbo;
  NetworkParams params;
  MinMaxScaler scaler;
  SearchConfig config;
  ConvergenceTrace trace;
  metrics::EvaluationReport report;

  StoredModel stored() const {
    return {params, scaler, std::string(to_string(algorithm)), report.training.rmse};
  }
};

/// Trains on a given split. The scaler and objective see only `train`;
/// `test` is used for reporting alone.
inline TrainedHybrid train_on_split(const Dataset &train, const Dataset &test, Algorithm algorithm,
                                    const SearchConfig &config) {
  if (train.size() < 2)
    throw InsufficientDataError("training split needs at least 2 records");
  TrainedHybrid h;
  h.algorithm = algorithm;
  h.config = config;
  h.scaler = MinMaxScaler::fit(train);
  const auto shape = ucs_network_shape();
  h.trace = optimize(algorithm, make_ann_objective(train, h.scaler, shape), config);
  h.params = NetworkParams::unflatten(shape, h.trace.best_position);
  h.report = evaluate(h.params, h.scaler, train, test);
  return h;
}

/// 80/20 split by `seed`, then train. The optimizer runs on `seed` too, on
/// its own generator stream.
inline TrainedHybrid train_hybrid(const Dataset &data, Algorithm algorithm, SearchConfig config,
                                  std::uint64_t seed) {
  if (data.size() < kMinTrainingRecords)
    throw InsufficientDataError("training needs at least " + std::to_string(kMinTrainingRecords) +
                                " records, got " + std::to_string(data.size()));
  auto parts = split(data, kTrainFraction, seed);
  config.seed = seed;
  return train_on_split(parts.train, parts.test, algorithm, config);
}

// ---------------------------------------------------------------------------
// Population sweep
// ---------------------------------------------------------------------------

struct SweepEntry {
  std::size_t population_size = 0;
  TrainedHybrid hybrid;
};

struct SweepResult {
  std::size_t best_population_size = 0;
  std::vector<SweepEntry> entries;
};

/// Trains once per size on the same split and seed; the winner has the
/// lowest training RMSE, ties going to the smaller size.
inline SweepResult population_sweep(const Dataset &data, Algorithm algorithm, std::span<const std::size_t> sizes,
                                    const SearchConfig &config, std::uint64_t seed) {
  if (sizes.empty())
    throw ValidationError("population sweep needs at least one size");
  SweepResult result;
  for (auto size : sizes) {
    SearchConfig c = config;
    c.population_size = size;
    try {
      result.entries.push_back({size, train_hybrid(data, algorithm, c, seed)});
    } catch (const Error &e) {
      throw Error("population size " + std::to_string(size) + ": " + e.what());
    }
  }
  const SweepEntry *best = &result.entries.front();
  for (const auto &e : result.entries) {
    const double a = e.hybrid.report.training.rmse;
    const double b = best->hybrid.report.training.rmse;
    if (a < b || (a == b && e.population_size < best->population_size))
      best = &e;
  }
  result.best_population_size = best->population_size;
  return result;
}

// ---------------------------------------------------------------------------
// Algorithm comparison
// ---------------------------------------------------------------------------

struct ComparisonEntry {
  Algorithm algorithm = Algorithm::sbo;
  std::optional<TrainedHybrid> hybrid;
  std::string error; // set when training failed
};

struct Comparison {
  std::vector<ComparisonEntry> entries; // input order
  std::vector<std::size_t> ranking;     // entry indices, best testing RMSE first; failures excluded
  // true when the top-ranked hybrid is also best (or tied) on every index
  // in both phases; false means the indices disagree on the order
  bool leader_dominates = false;
};

namespace detail {

// Eight cells in table order with errors negated into "larger is better" R.
inline std::array<double, 8> cells(const metrics::EvaluationReport &r) {
  const auto &tr = r.training;
  const auto te = r.testing.value_or(metrics::PhaseMetrics{});
  return {tr.rmse, tr.mape, tr.mae, tr.r, te.rmse, te.mape, te.mae, te.r};
}

inline bool at_least_as_good(const metrics::EvaluationReport &a, const metrics::EvaluationReport &b) {
  auto x = cells(a);
  auto y = cells(b);
  for (std::size_t i = 0; i < 8; ++i) {
    const bool is_r = i % 4 == 3;
    if (is_r ? x[i] < y[i] : x[i] > y[i])
      return false;
  }
  return true;
}

} // namespace detail

inline Comparison compare_algorithms(const Dataset &data, const std::vector<std::pair<Algorithm, SearchConfig>> &runs,
                                     std::uint64_t seed) {
  if (runs.size() < 2)
    throw ValidationError("comparison needs at least two algorithms");
  if (data.size() < kMinTrainingRecords)
    throw InsufficientDataError("training needs at least " + std::to_string(kMinTrainingRecords) + " records");
  const auto parts = split(data, kTrainFraction, seed);

  Comparison cmp;
  for (const auto &[algorithm, config] : runs) {
    ComparisonEntry entry;
    entry.algorithm = algorithm;
    SearchConfig c = config;
    c.seed = seed;
    try {
      entry.hybrid = train_on_split(parts.train, parts.test, algorithm, c);
    } catch (const Error &e) {
      entry.error = e.what();
    }
    cmp.entries.push_back(std::move(entry));
  }

  for (std::size_t i = 0; i < cmp.entries.size(); ++i)
    if (cmp.entries[i].hybrid)
      cmp.ranking.push_back(i);
  auto testing_rmse = [&](std::size_t i) {
    const auto &rep = cmp.entries[i].hybrid->report;
    return rep.testing ? rep.testing->rmse : rep.training.rmse;
  };
  std::stable_sort(cmp.ranking.begin(), cmp.ranking.end(),
                   [&](std::size_t a, std::size_t b) { return testing_rmse(a) < testing_rmse(b); });

  if (!cmp.ranking.empty()) {
    const auto &leader = cmp.entries[cmp.ranking.front()].hybrid->report;
    cmp.leader_dominates = std::all_of(cmp.ranking.begin(), cmp.ranking.end(), [&](std::size_t i) {
      return detail::at_least_as_good(leader, cmp.entries[i].hybrid->report);
    });
  }
  return cmp;
}

// ---------------------------------------------------------------------------
// Exports
// ---------------------------------------------------------------------------

inline void write_trace_csv(std::ostream &os, const ConvergenceTrace &trace) {
  os << "iteration,best_cost\n";
  for (std::size_t t = 0; t < trace.best_cost.size(); ++t) {
    os << t + 1 << ',';
    detail::write_number(os, trace.best_cost[t]);
    os << '\n';
  }
}

inline constexpr std::string_view kReportHeader =
    "Hybrid,Training RMSE,Training MAPE,Training MAE,Training R,Testing RMSE,Testing MAPE,Testing MAE,Testing R";

struct PublishedRow {
  std::string_view hybrid;
  std::array<double, 8> values;
};

/// Published accuracy indicators on the original 323-sample dataset,
/// training then testing, each RMSE, MAPE, MAE, R.
inline constexpr std::array<PublishedRow, 4> kPublishedResults = {{
    {"ANN-HGSO", {9.5808, 19.8959, 7.5026, 0.85405, 9.5249, 15.9719, 7.8632, 0.87394}},
    {"ANN-SFO", {8.6609, 18.2992, 6.5996, 0.87083, 8.5728, 15.3845, 7.0550, 0.87936}},
    {"ANN-VSA", {5.8703, 12.4676, 4.4869, 0.94302, 5.3086, 9.4970, 4.4006, 0.95329}},
    {"ANN-SBO", {5.6826, 11.8997, 4.1476, 0.94703, 5.1679, 8.0629, 3.9068, 0.95663}},
}};

namespace detail {

inline void write_phase(std::ostream &os, const std::optional<metrics::PhaseMetrics> &m) {
  if (!m) {
    os << ",,,,";
    return;
  }
  for (double v : {m->rmse, m->mape, m->mae, m->r}) {
    os << ',';
    write_number(os, v);
  }
}

} // namespace detail

inline void write_report_row(std::ostream &os, std::string_view label, const metrics::EvaluationReport &r) {
  os << label;
  detail::write_phase(os, r.training);
  detail::write_phase(os, r.testing);
  os << '\n';
}

inline void write_reference_footer(std::ostream &os) {
  os << "# reference values on the original 323-sample dataset (documentation only)\n";
  for (const auto &row : kPublishedResults) {
    // default stream precision prints the values exactly as published
    std::ostringstream line;
    line << "# reference," << row.hybrid;
    for (double v : row.values)
      line << ',' << v;
    os << line.str() << '\n';
  }
}

/// Single-model report in the comparison table layout.
inline void write_report_csv(std::ostream &os, const TrainedHybrid &h) {
  os << kReportHeader << '\n';
  write_report_row(os, hybrid_label(h.algorithm), h.report);
}

inline void write_comparison_csv(std::ostream &os, const Comparison &cmp) {
  os << kReportHeader << '\n';
  for (const auto &e : cmp.entries) {
    if (e.hybrid)
      write_report_row(os, hybrid_label(e.algorithm), e.hybrid->report);
    else
      os << hybrid_label(e.algorithm) << ",,,,,,,,\n";
  }
  for (const auto &e : cmp.entries)
    if (!e.hybrid)
      os << "# failed," << hybrid_label(e.algorithm) << ',' << e.error << '\n';
  os << "# ranking by testing RMSE:";
  for (auto i : cmp.ranking)
    os << ' ' << hybrid_label(cmp.entries[i].algorithm);
  os << '\n';
  os << "# leader best on all indices: " << (cmp.leader_dominates ? "yes" : "no (indices disagree)") << '\n';
  write_reference_footer(os);
}

inline void write_sweep_csv(std::ostream &os, const SweepResult &sweep) {
  os << "Population," << kReportHeader.substr(kReportHeader.find(',') + 1) << '\n';
  for (const auto &e : sweep.entries)
    write_report_row(os, std::to_string(e.population_size), e.hybrid.report);
  os << "# best population size by training RMSE: " << sweep.best_population_size << '\n';
}

/// One prediction per input row. With `model` unset the frozen published
/// network is applied to the raw columns without any scaling.
inline void predict_csv(std::istream &in, std::ostream &out, const std::optional<StoredModel> &model) {
  const auto table = read_table(in, /*require_target=*/false);
  const auto frozen = frozen_reference_model();
  out << "UCS_PRED\n";
  for (const auto &row : table.rows) {
    FeatureVector x{};
    std::copy_n(row.begin(), kFeatureCount, x.begin());
    const double y = model ? predict_ucs(model->params, model->scaler, x) : forward(frozen, x);
    detail::write_number(out, y);
    out << '\n';
  }
}

} // namespace sbo_ann
