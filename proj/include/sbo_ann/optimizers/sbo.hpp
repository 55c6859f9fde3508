#pragma once

// Satin bowerbird optimizer.
//
// Each iteration: costs -> fitness -> selection probabilities; for every
// coordinate of every bower a partner j is picked by roulette and the
// coordinate moves toward the midpoint of x_j and the elite with step
// a / (1 + P_j); it then mutates with probability p_mut by N(0, sigma^2),
// sigma = z * (max - min). Old and new bowers are merged, sorted by cost and
// truncated to the population size.
//
// RNG draw order per iteration, bower by bower and coordinate by coordinate:
// one uniform for the roulette, one uniform for the mutation test, and one
// normal draw only when that coordinate mutates.

#include <cmath>
#include <numeric>
#include <random>
#include <span>

#include "sbo_ann/optimizers/objective.hpp"

namespace sbo_ann {

/// 1 / (1 + cost) for cost >= 0; the negative branch is 1 / (1 + |cost|).
inline double sbo_fitness(double cost) {
  if (!std::isfinite(cost))
    throw ValidationError("fitness needs a finite cost");
  return cost >= 0.0 ? 1.0 / (1.0 + cost) : 1.0 / (1.0 + std::abs(cost));
}

inline Vector sbo_probabilities(std::span<const double> fitnesses) {
  if (fitnesses.empty())
    throw ValidationError("probabilities need at least one fitness");
  double total = 0.0;
  for (double f : fitnesses) {
    if (!(f > 0.0) || !std::isfinite(f))
      throw ValidationError("fitness values must be positive and finite");
    total += f;
  }
  Vector p(fitnesses.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    p[i] = fitnesses[i] / total;
  return p;
}

/// Smallest index whose cumulative probability exceeds u. Falls back to the
/// last index when rounding leaves the total just below u.
inline std::size_t roulette_select(std::span<const double> probabilities, double u) {
  double cumulative = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    cumulative += probabilities[i];
    if (cumulative > u)
      return i;
  }
  return probabilities.size() - 1;
}

/// One coordinate of the elite-guided move with lambda = a / (1 + p_j).
inline double sbo_step(double x_old, double x_j, double x_best, double p_j, double step_size) {
  const double lambda = step_size / (1.0 + p_j);
  return x_old + lambda * ((x_j + x_best) / 2.0 - x_old);
}

/// Move toward the midpoint of the chosen bower and the elite, then clamp.
inline Vector sbo_update_position(std::span<const double> x_old, std::span<const double> x_j,
                                  std::span<const double> x_best, double p_j, double step_size,
                                  const Bounds &bounds) {
  if (x_old.size() != x_j.size() || x_old.size() != x_best.size() || x_old.size() != bounds.dimension())
    throw DimensionError("position vectors and bounds must share one dimension");
  Vector x(x_old.size());
  for (std::size_t k = 0; k < x.size(); ++k)
    x[k] = sbo_step(x_old[k], x_j[k], x_best[k], p_j, step_size);
  bounds.clamp(x);
  return x;
}

/// Per-coordinate Gaussian mutation with sigma = z * (max - min), clamped.
template <class Normal>
void sbo_mutate(std::span<double> x, double z, const Bounds &bounds, double p_mut, Rng &rng,
                Normal &normal) {
  if (!(z > 0.0))
    throw ValidationError("variance factor z must be positive");
  if (x.size() != bounds.dimension())
    throw DimensionError("position and bounds dimension differ");
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (unit_uniform(rng) < p_mut) {
      const double sigma = z * (bounds.upper[k] - bounds.lower[k]);
      x[k] += sigma * normal(rng);
      x[k] = std::clamp(x[k], bounds.lower[k], bounds.upper[k]);
    }
  }
}

inline void sbo_mutate(std::span<double> x, double z, const Bounds &bounds, double p_mut, Rng &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  sbo_mutate(x, z, bounds, p_mut, rng, normal);
}

inline ConvergenceTrace optimize_sbo(const ObjectiveSpec &objective, const SearchConfig &config) {
  detail::check_problem(objective, config);
  const auto &bounds = objective.bounds;
  const auto &params = config.sbo;
  const std::size_t n = config.population_size;
  const std::size_t dim = objective.dimension();

  Rng rng = make_rng(config.seed, Stream::optimizer);
  std::normal_distribution<double> normal(0.0, 1.0);
  detail::Evaluator eval(objective);

  auto pop = detail::random_population(bounds, n, rng, eval);
  detail::sort_by_cost(pop);

  ConvergenceTrace trace;
  trace.initial_best_cost = pop.front().cost;
  trace.best_cost.reserve(config.iterations);

  Vector fitness(n);
  std::vector<Agent> merged;
  merged.reserve(2 * n);
  for (std::size_t t = 1; t <= config.iterations; ++t) {
    eval.set_iteration(t);
    for (std::size_t i = 0; i < n; ++i)
      fitness[i] = sbo_fitness(pop[i].cost);
    const Vector prob = sbo_probabilities(fitness);
    const Vector elite = pop.front().position;

    merged.assign(pop.begin(), pop.end());
    for (std::size_t i = 0; i < n; ++i) {
      Agent child;
      child.position = pop[i].position;
      for (std::size_t k = 0; k < dim; ++k) {
        const std::size_t j = roulette_select(prob, unit_uniform(rng));
        double x = sbo_step(pop[i].position[k], pop[j].position[k], elite[k], prob[j], params.step_size);
        if (unit_uniform(rng) < params.mutation_probability)
          x += params.variance_factor * (bounds.upper[k] - bounds.lower[k]) * normal(rng);
        child.position[k] = std::clamp(x, bounds.lower[k], bounds.upper[k]);
      }
      child.cost = eval(child.position);
      merged.push_back(std::move(child));
    }
    detail::sort_by_cost(merged);
    merged.resize(n);
    pop.swap(merged);
    trace.best_cost.push_back(pop.front().cost);
  }

  trace.best_position = pop.front().position;
  trace.final_cost = pop.front().cost;
  trace.evaluations = eval.count();
  return trace;
}

} // namespace sbo_ann
