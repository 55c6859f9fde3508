#pragma once

// Henry gas solubility optimization.
//
// Gases are split into contiguous clusters. Each cluster j carries a Henry
// constant H_j and a constant C_j; each gas i a partial pressure P_i.
// Per iteration t of T:
//   H_j <- H_j * exp(-C_j * (1/T(t) - 1/T_theta)), T(t) = exp(-t/T), T_theta = 298.15
//   S_i  = K * H_j * P_i
//   gamma_i = beta * exp(-(F_best + eps) / (F_i + eps))
//   x_i <- x_i + F * r * gamma_i * (x_jbest - x_i) + F * r * alpha * (S_i * x_best - x_i)
// with F = +/-1 drawn per gas and r uniform per coordinate. Positions are
// clamped. After evaluation the N_w worst gases, N_w = N * U(c1, c2), are
// re-initialised uniformly and re-evaluated. Cluster and global bests are
// elitist.
//
// RNG draw order: H_j for all clusters, P_i for all gases, C_j for all
// clusters, initial population; then per iteration for each gas one uniform
// for the sign F followed by two uniforms per coordinate (r for the cluster
// term, then r for the global term); then one uniform for N_w and the
// coordinates of each re-initialised gas in worst-first order.

#include <cmath>
#include <limits>
#include <numeric>

#include "sbo_ann/optimizers/objective.hpp"

namespace sbo_ann {

inline ConvergenceTrace optimize_hgso(const ObjectiveSpec &objective, const SearchConfig &config) {
  detail::check_problem(objective, config);
  const auto &bounds = objective.bounds;
  const auto &hp = config.hgso;
  const std::size_t n = config.population_size;
  const std::size_t dim = objective.dimension();
  const std::size_t clusters = hp.clusters;
  if (clusters > n)
    throw ValidationError("HGSO cluster count must not exceed the population size");
  constexpr double kThetaTemperature = 298.15;

  Rng rng = make_rng(config.seed, Stream::optimizer);
  detail::Evaluator eval(objective);

  Vector henry(clusters);
  Vector pressure(n);
  Vector constant(clusters);
  for (auto &h : henry)
    h = hp.l1 * unit_uniform(rng);
  for (auto &p : pressure)
    p = hp.l2 * unit_uniform(rng);
  for (auto &c : constant)
    c = hp.l3 * unit_uniform(rng);

  auto cluster_of = [&](std::size_t i) { return i * clusters / n; };

  auto pop = detail::random_population(bounds, n, rng, eval);

  std::vector<Agent> cluster_best(clusters);
  for (std::size_t j = 0; j < clusters; ++j)
    cluster_best[j].cost = std::numeric_limits<double>::infinity();
  auto refresh_bests = [&](Agent &global) {
    for (std::size_t i = 0; i < n; ++i) {
      auto &cb = cluster_best[cluster_of(i)];
      if (pop[i].cost < cb.cost)
        cb = pop[i];
      if (pop[i].cost < global.cost)
        global = pop[i];
    }
  };

  Agent best;
  best.cost = std::numeric_limits<double>::infinity();
  refresh_bests(best);

  ConvergenceTrace trace;
  trace.initial_best_cost = best.cost;
  trace.best_cost.reserve(config.iterations);

  std::vector<std::size_t> order(n);
  for (std::size_t t = 1; t <= config.iterations; ++t) {
    eval.set_iteration(t);
    const double temperature = std::exp(-static_cast<double>(t) / static_cast<double>(config.iterations));
    for (std::size_t j = 0; j < clusters; ++j)
      henry[j] *= std::exp(-constant[j] * (1.0 / temperature - 1.0 / kThetaTemperature));

    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = cluster_of(i);
      const double solubility = hp.k * henry[j] * pressure[i];
      const double gamma = hp.beta * std::exp(-(best.cost + hp.epsilon) / (pop[i].cost + hp.epsilon));
      const double sign = unit_uniform(rng) < 0.5 ? -1.0 : 1.0;
      auto &x = pop[i].position;
      const auto &xc = cluster_best[j].position;
      for (std::size_t k = 0; k < dim; ++k) {
        const double r1 = unit_uniform(rng);
        const double r2 = unit_uniform(rng);
        x[k] += sign * r1 * gamma * (xc[k] - x[k]) + sign * r2 * hp.alpha * (solubility * best.position[k] - x[k]);
      }
      bounds.clamp(x);
    }
    for (auto &a : pop)
      a.cost = eval(a.position);

    // Re-initialise the worst agents.
    const double fraction = hp.worst_min + unit_uniform(rng) * (hp.worst_max - hp.worst_min);
    const auto n_worst = static_cast<std::size_t>(static_cast<double>(n) * fraction);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pop[a].cost > pop[b].cost; });
    for (std::size_t w = 0; w < n_worst; ++w) {
      auto &a = pop[order[w]];
      for (std::size_t k = 0; k < dim; ++k)
        a.position[k] = uniform_between(rng, bounds.lower[k], bounds.upper[k]);
      a.cost = eval(a.position);
    }

    refresh_bests(best);
    trace.best_cost.push_back(best.cost);
  }

  trace.best_position = best.position;
  trace.final_cost = best.cost;
  trace.evaluations = eval.count();
  return trace;
}

} // namespace sbo_ann
