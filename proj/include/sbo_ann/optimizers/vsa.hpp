#pragma once

// Vortex search algorithm.
//
// A single center starts at the middle of the box. Each iteration t
// (0-based) samples N candidates from N(center, r_t^2 I) coordinate-wise,
// where
//   r_t = sigma_0 * (1 / x) * P^{-1}(a_t, x),  a_t = 1 - t / T,
// P^{-1}(a, x) is the inverse of the regularised lower incomplete gamma
// function P(a, .) with shape a, evaluated at probability x = 0.1, and
// sigma_0 = (max - min) / 2 per coordinate. A coordinate falling outside the box is redrawn uniformly
// inside it. The center moves to the best solution found so far.
//
// RNG draw order per iteration, candidate by candidate and coordinate by
// coordinate: one normal draw, plus one uniform when the coordinate is out
// of bounds.

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <random>

#include "sbo_ann/optimizers/objective.hpp"

namespace sbo_ann {

/// Radius multiplier (1/x) * P^{-1}(a_t, x) for iteration t of T.
inline double vsa_radius_factor(std::size_t t, std::size_t iterations, double x) {
  const double a = 1.0 - static_cast<double>(t) / static_cast<double>(iterations);
  if (a <= 0.0)
    return 0.0;
  return boost::math::gamma_p_inv(a, x) / x;
}

inline ConvergenceTrace optimize_vsa(const ObjectiveSpec &objective, const SearchConfig &config) {
  detail::check_problem(objective, config);
  const auto &bounds = objective.bounds;
  const std::size_t n = config.population_size;
  const std::size_t dim = objective.dimension();

  Rng rng = make_rng(config.seed, Stream::optimizer);
  std::normal_distribution<double> normal(0.0, 1.0);
  detail::Evaluator eval(objective);

  Vector center(dim);
  Vector sigma0(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    center[k] = 0.5 * (bounds.lower[k] + bounds.upper[k]);
    sigma0[k] = 0.5 * (bounds.upper[k] - bounds.lower[k]);
  }

  // The center itself is never evaluated; the first batch of candidates
  // plays the role of the initial population.
  Agent best;
  best.cost = std::numeric_limits<double>::infinity();

  ConvergenceTrace trace;
  trace.best_cost.reserve(config.iterations);

  Vector candidate(dim);
  for (std::size_t t = 0; t < config.iterations; ++t) {
    eval.set_iteration(t + 1);
    const double factor = vsa_radius_factor(t, config.iterations, config.vsa.gamma_shape);
    Agent round_best;
    round_best.cost = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < dim; ++k) {
        double v = center[k] + factor * sigma0[k] * normal(rng);
        if (v < bounds.lower[k] || v > bounds.upper[k])
          v = uniform_between(rng, bounds.lower[k], bounds.upper[k]);
        candidate[k] = v;
      }
      const double c = eval(candidate);
      if (c < round_best.cost) {
        round_best.cost = c;
        round_best.position = candidate;
      }
    }
    if (t == 0)
      trace.initial_best_cost = round_best.cost;
    if (round_best.cost < best.cost)
      best = round_best;
    center = best.position;
    trace.best_cost.push_back(best.cost);
  }

  trace.best_position = best.position;
  trace.final_cost = best.cost;
  trace.evaluations = eval.count();
  return trace;
}

} // namespace sbo_ann
