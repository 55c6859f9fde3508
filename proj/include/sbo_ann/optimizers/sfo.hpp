#pragma once

// Sunflower optimization.
//
// The best plant is the sun. Each iteration, after sorting by cost:
//   * mortality: the worst floor(m * N) plants die;
//   * pollination: the next worst floor(p * N) plants are replaced as well;
//   * every other plant turns toward the sun, s_i = (x* - x_i) / |x* - x_i|,
//     and moves d_i = lambda * u * |x* - x_i| * I_i / I_max, where
//     I_i = 1 / (4 pi |x* - x_i|^2) is the received irradiance (inverse
//     square law) and I_max the largest irradiance among moving plants;
//   * replaced plants (dead or pollinated) are seeded by pollen landing
//     near the sun with the spread of two random survivors a, b:
//     x = x* + (2u - 1) (.) (x_b - x_a), u uniform per coordinate.
// The sun is never moved or replaced, which makes the search elitist.
//
// RNG draw order per iteration: one uniform per moving plant in rank
// order, then per replaced plant two uniform survivor picks followed by one
// uniform per coordinate.

#include <cmath>
#include <numbers>

#include "sbo_ann/optimizers/objective.hpp"

namespace sbo_ann {

inline ConvergenceTrace optimize_sfo(const ObjectiveSpec &objective, const SearchConfig &config) {
  detail::check_problem(objective, config);
  const auto &bounds = objective.bounds;
  const auto &sp = config.sfo;
  const std::size_t n = config.population_size;
  const std::size_t dim = objective.dimension();

  Rng rng = make_rng(config.seed, Stream::optimizer);
  detail::Evaluator eval(objective);

  auto pop = detail::random_population(bounds, n, rng, eval);
  detail::sort_by_cost(pop);

  ConvergenceTrace trace;
  trace.initial_best_cost = pop.front().cost;
  trace.best_cost.reserve(config.iterations);

  const auto n_dead = static_cast<std::size_t>(sp.mortality_rate * static_cast<double>(n));
  const auto n_pollinated = static_cast<std::size_t>(sp.pollination_rate * static_cast<double>(n));
  // the sun always survives
  const std::size_t survivors = std::max<std::size_t>(1, n - std::min(n - 1, n_dead + n_pollinated));

  Vector distance(n);
  Vector irradiance(n);
  for (std::size_t t = 1; t <= config.iterations; ++t) {
    eval.set_iteration(t);
    const Vector sun = pop.front().position;

    double max_irradiance = 0.0;
    for (std::size_t i = 1; i < survivors; ++i) {
      double d2 = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double diff = sun[k] - pop[i].position[k];
        d2 += diff * diff;
      }
      distance[i] = std::sqrt(d2);
      irradiance[i] = d2 > 0.0 ? 1.0 / (4.0 * std::numbers::pi * d2) : 0.0;
      max_irradiance = std::max(max_irradiance, irradiance[i]);
    }

    for (std::size_t i = 1; i < survivors; ++i) {
      const double u = unit_uniform(rng);
      if (distance[i] == 0.0)
        continue;
      // d_i / |x* - x_i| applied to the unnormalised direction
      const double fraction = sp.step_scale * u * irradiance[i] / max_irradiance;
      auto &x = pop[i].position;
      for (std::size_t k = 0; k < dim; ++k)
        x[k] += fraction * (sun[k] - x[k]);
      bounds.clamp(x);
    }

    for (std::size_t i = survivors; i < n; ++i) {
      const auto a = static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(survivors));
      const auto b = static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(survivors));
      auto &x = pop[i].position;
      for (std::size_t k = 0; k < dim; ++k)
        x[k] = sun[k] + (2.0 * unit_uniform(rng) - 1.0) * (pop[b].position[k] - pop[a].position[k]);
      bounds.clamp(x);
    }

    for (std::size_t i = 1; i < n; ++i)
      pop[i].cost = eval(pop[i].position);
    detail::sort_by_cost(pop);
    trace.best_cost.push_back(pop.front().cost);
  }

  trace.best_position = pop.front().position;
  trace.final_cost = pop.front().cost;
  trace.evaluations = eval.count();
  return trace;
}

} // namespace sbo_ann
