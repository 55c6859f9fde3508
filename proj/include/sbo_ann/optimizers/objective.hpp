#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "sbo_ann/error.hpp"
#include "sbo_ann/random.hpp"

namespace sbo_ann {

using Vector = std::vector<double>;
using CostFunction = std::function<double(std::span<const double>)>;

/// Per-coordinate box [lower, upper].
struct Bounds {
  Vector lower;
  Vector upper;

  static Bounds uniform(std::size_t dimension, double lo, double hi) {
    return {Vector(dimension, lo), Vector(dimension, hi)};
  }

  std::size_t dimension() const noexcept { return lower.size(); }

  void validate() const {
    if (lower.empty() || lower.size() != upper.size())
      throw DimensionError("bounds must be non-empty and of equal length");
    for (std::size_t k = 0; k < lower.size(); ++k)
      if (!(upper[k] > lower[k]) || !std::isfinite(lower[k]) || !std::isfinite(upper[k]))
        throw ValidationError("invalid bounds at coordinate " + std::to_string(k));
  }

  void clamp(std::span<double> x) const {
    for (std::size_t k = 0; k < x.size(); ++k)
      x[k] = std::clamp(x[k], lower[k], upper[k]);
  }

  bool contains(std::span<const double> x) const {
    for (std::size_t k = 0; k < x.size(); ++k)
      if (!(x[k] >= lower[k] && x[k] <= upper[k]))
        return false;
    return true;
  }
};

/// A box-bounded minimization problem. The cost must be deterministic and
/// re-entrant.
struct ObjectiveSpec {
  Bounds bounds;
  CostFunction cost;

  std::size_t dimension() const noexcept { return bounds.dimension(); }
};

struct SboParams {
  double step_size = 0.94;          // a, greatest step
  double mutation_probability = 0.05;
  double variance_factor = 0.02;    // z, sigma = z * (max - min)
};

struct HgsoParams {
  std::size_t clusters = 5;
  double l1 = 5e-3;  // initial Henry constant scale
  double l2 = 100.0; // partial pressure scale
  double l3 = 1e-2;  // cluster constant scale
  double alpha = 1.0;
  double beta = 1.0;
  double k = 1.0;
  double epsilon = 0.05;
  double worst_min = 0.1; // c1, fraction of agents re-initialised
  double worst_max = 0.2; // c2
};

struct SfoParams {
  double pollination_rate = 0.05;
  double mortality_rate = 0.1;
  double step_scale = 1.0; // lambda
};

struct VsaParams {
  double gamma_shape = 0.1; // x in the inverse incomplete gamma radius schedule
};

struct SearchConfig {
  std::size_t population_size = 50;
  std::size_t iterations = 1000;
  std::uint64_t seed = 0;
  SboParams sbo;
  HgsoParams hgso;
  SfoParams sfo;
  VsaParams vsa;

  void validate() const {
    if (population_size < 2)
      throw ValidationError("population size must be at least 2");
    if (iterations < 1)
      throw ValidationError("iterations must be at least 1");
    if (!(sbo.mutation_probability >= 0.0 && sbo.mutation_probability <= 1.0))
      throw ValidationError("mutation probability must lie in [0, 1]");
    if (!(sbo.variance_factor > 0.0))
      throw ValidationError("variance factor z must be positive");
    if (!(sbo.step_size > 0.0))
      throw ValidationError("step size a must be positive");
    if (hgso.clusters < 1)
      throw ValidationError("HGSO needs at least one cluster");
    if (!(hgso.worst_min >= 0.0 && hgso.worst_min <= hgso.worst_max && hgso.worst_max < 1.0))
      throw ValidationError("HGSO worst-agent fractions must satisfy 0 <= c1 <= c2 < 1");
    if (!(sfo.pollination_rate >= 0.0 && sfo.mortality_rate >= 0.0 &&
          sfo.pollination_rate + sfo.mortality_rate < 1.0))
      throw ValidationError("SFO pollination and mortality rates must be non-negative and sum below 1");
    if (!(sfo.step_scale > 0.0))
      throw ValidationError("SFO step scale must be positive");
    if (!(vsa.gamma_shape > 0.0 && vsa.gamma_shape < 1.0))
      throw ValidationError("VSA gamma shape must lie in (0, 1)");
  }
};

/// Best cost after each iteration plus the final incumbent.
struct ConvergenceTrace {
  Vector best_cost;
  Vector best_position;
  double final_cost = 0.0;
  double initial_best_cost = 0.0; // best of the random initial population
  std::size_t evaluations = 0;

  friend bool operator==(const ConvergenceTrace &, const ConvergenceTrace &) = default;
};

/// Deterministic population member.
struct Agent {
  Vector position;
  double cost = 0.0;
};

namespace detail {

/// Wraps the user cost: rejects non-finite values and tags failures with
/// the iteration in which they happened.
class Evaluator {
public:
  explicit Evaluator(const ObjectiveSpec &objective) : objective_(objective) {}

  double operator()(std::span<const double> x) {
    double c = 0.0;
    try {
      c = objective_.cost(x);
    } catch (const std::exception &e) {
      throw OptimizationError(context() + e.what());
    }
    if (!std::isfinite(c))
      throw OptimizationError(context() + "objective returned a non-finite cost");
    ++count_;
    return c;
  }

  void set_iteration(std::size_t t) noexcept { iteration_ = t; }
  std::size_t count() const noexcept { return count_; }

private:
  std::string context() const {
    return iteration_ == 0 ? std::string("initialisation: ")
                           : "iteration " + std::to_string(iteration_) + ": ";
  }

  const ObjectiveSpec &objective_;
  std::size_t iteration_ = 0;
  std::size_t count_ = 0;
};

inline void check_problem(const ObjectiveSpec &objective, const SearchConfig &config) {
  objective.bounds.validate();
  if (!objective.cost)
    throw ValidationError("objective has no cost function");
  config.validate();
}

/// Uniform random population; coordinates drawn agent by agent, then
/// evaluated in the same order.
inline std::vector<Agent> random_population(const Bounds &bounds, std::size_t n, Rng &rng,
                                            Evaluator &eval) {
  std::vector<Agent> pop(n);
  for (auto &a : pop) {
    a.position.resize(bounds.dimension());
    for (std::size_t k = 0; k < bounds.dimension(); ++k)
      a.position[k] = uniform_between(rng, bounds.lower[k], bounds.upper[k]);
  }
  for (auto &a : pop)
    a.cost = eval(a.position);
  return pop;
}

inline void sort_by_cost(std::vector<Agent> &pop) {
  std::stable_sort(pop.begin(), pop.end(), [](const Agent &a, const Agent &b) { return a.cost < b.cost; });
}

inline std::size_t argmin_cost(const std::vector<Agent> &pop) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < pop.size(); ++i)
    if (pop[i].cost < pop[best].cost)
      best = i;
  return best;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Benchmark functions
// ---------------------------------------------------------------------------

inline double benchmark_sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x)
    s += v * v;
  return s;
}

inline double benchmark_rastrigin(std::span<const double> x) {
  double s = 10.0 * static_cast<double>(x.size());
  for (double v : x)
    s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
  return s;
}

} // namespace sbo_ann
