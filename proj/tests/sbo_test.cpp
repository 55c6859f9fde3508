#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sbo_ann/optimizers/sbo.hpp"

using namespace sbo_ann;

namespace {

ObjectiveSpec sphere(std::size_t dim, double lo = -5.0, double hi = 5.0) {
  return {Bounds::uniform(dim, lo, hi), benchmark_sphere};
}

SearchConfig config(std::size_t pop, std::size_t iters, std::uint64_t seed) {
  SearchConfig c;
  c.population_size = pop;
  c.iterations = iters;
  c.seed = seed;
  return c;
}

} // namespace

TEST(SboFitness, Examples) {
  EXPECT_EQ(sbo_fitness(0.0), 1.0);
  EXPECT_EQ(sbo_fitness(1.0), 0.5);
  EXPECT_EQ(sbo_fitness(3.0), 0.25);
  EXPECT_EQ(sbo_fitness(-1.0), 0.5); // negative branch 1 / (1 + |cost|)
}

TEST(SboFitness, StrictlyDecreasingInCost) {
  for (double a = 0.0; a < 50.0; a += 0.37)
    EXPECT_GT(sbo_fitness(a), sbo_fitness(a + 0.01));
}

TEST(SboFitness, RejectsNonFinite) {
  EXPECT_THROW(sbo_fitness(std::nan("")), ValidationError);
  EXPECT_THROW(sbo_fitness(INFINITY), ValidationError);
}

TEST(SboProbabilities, Examples) {
  auto p = sbo_probabilities(std::vector<double>{1.0, 3.0});
  EXPECT_EQ(p, (Vector{0.25, 0.75}));
  EXPECT_EQ(sbo_probabilities(std::vector<double>{0.3}), Vector{1.0});
  auto u = sbo_probabilities(Vector(8, 0.2));
  for (double x : u)
    EXPECT_DOUBLE_EQ(x, 1.0 / 8.0);
}

TEST(SboProbabilities, SumToOneForLargePopulations) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> cost(0.0, 1e3);
  for (std::size_t n : {1u, 2u, 17u, 300u, 500u}) {
    Vector f(n);
    for (auto &x : f)
      x = sbo_fitness(cost(gen));
    auto p = sbo_probabilities(f);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
  }
}

TEST(SboProbabilities, Errors) {
  EXPECT_THROW(sbo_probabilities(Vector{}), ValidationError);
  EXPECT_THROW(sbo_probabilities(Vector{0.5, 0.0}), ValidationError);
  EXPECT_THROW(sbo_probabilities(Vector{0.5, -1.0}), ValidationError);
}

TEST(Roulette, FirstCumulativeCrossing) {
  const Vector p{0.25, 0.75};
  EXPECT_EQ(roulette_select(p, 0.1), 0u);
  EXPECT_EQ(roulette_select(p, 0.5), 1u);
  EXPECT_EQ(roulette_select(p, 0.0), 0u);
  EXPECT_EQ(roulette_select(p, 0.25), 1u); // boundary belongs to the next slot
  for (double u : {0.0, 0.3, 0.999999})
    EXPECT_EQ(roulette_select(Vector{1.0}, u), 0u);
}

TEST(Roulette, RoundingShortfallFallsBackToLast) {
  EXPECT_EQ(roulette_select(Vector{0.1, 0.2, 0.3}, 0.99), 2u);
}

TEST(Roulette, EmpiricalFrequenciesMatchProbabilities) {
  const Vector p{0.1, 0.2, 0.3, 0.4};
  Rng rng = make_rng(5, Stream::optimizer);
  std::vector<int> hits(4, 0);
  const int draws = 200000;
  for (int i = 0; i < draws; ++i)
    ++hits[roulette_select(p, unit_uniform(rng))];
  for (std::size_t i = 0; i < p.size(); ++i)
    EXPECT_NEAR(hits[i] / double(draws), p[i], 0.005);
}

TEST(SboUpdate, Examples) {
  const auto bounds = Bounds::uniform(3, -10, 10);
  const Vector zero(3, 0.0), two(3, 2.0), four(3, 4.0);
  EXPECT_EQ(sbo_update_position(zero, two, four, 0.0, 1.0, bounds), Vector(3, 3.0));
  const Vector x{1.5, -2.0, 0.25};
  EXPECT_EQ(sbo_update_position(x, x, x, 0.3, 0.94, bounds), x);
  // lambda = 0.94 when p_j = 0: step covers 94% of the distance to the midpoint
  EXPECT_DOUBLE_EQ(sbo_step(0.0, 1.0, 1.0, 0.0, 0.94), 0.94);
  EXPECT_DOUBLE_EQ(sbo_step(0.0, 1.0, 1.0, 1.0, 0.94), 0.47);
}

TEST(SboUpdate, ClampsToBounds) {
  const auto bounds = Bounds::uniform(2, -1, 1);
  auto x = sbo_update_position(Vector{-1, -1}, Vector{5, 5}, Vector{5, 5}, 0.0, 1.0, bounds);
  EXPECT_EQ(x, (Vector{1.0, 1.0}));
}

TEST(SboUpdate, DimensionMismatch) {
  const auto bounds = Bounds::uniform(2, -1, 1);
  EXPECT_THROW(sbo_update_position(Vector{0, 0}, Vector{0}, Vector{0, 0}, 0.0, 1.0, bounds), DimensionError);
}

TEST(SboMutate, SigmaAndNoOpCase) {
  const auto bounds = Bounds::uniform(4, -2, 2);
  EXPECT_DOUBLE_EQ(0.02 * (bounds.upper[0] - bounds.lower[0]), 0.08);
  Rng rng = make_rng(1, Stream::optimizer);
  Vector x{0.1, -0.2, 0.3, 1.9};
  const Vector before = x;
  sbo_mutate(x, 0.02, bounds, 0.0, rng);
  EXPECT_EQ(x, before);
}

TEST(SboMutate, GaussianStatistics) {
  // Wide bounds so clamping never fires: the statistics are those of
  // N(x, sigma^2) with sigma = 0.02 * 4 = 0.08.
  const auto bounds = Bounds::uniform(1, -2, 2);
  const double sigma = 0.08;
  const int n = 100000;
  Rng rng = make_rng(2, Stream::optimizer);
  std::normal_distribution<double> normal(0.0, 1.0);
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    Vector x{0.5};
    sbo_mutate(x, 0.02, bounds, 1.0, rng, normal);
    sum += x[0];
    sq += x[0] * x[0];
  }
  const double mean = sum / n;
  const double sd = std::sqrt((sq - n * mean * mean) / (n - 1));
  EXPECT_LT(std::abs(mean - 0.5), 3 * sigma / std::sqrt(double(n)));
  EXPECT_LT(std::abs(sd - sigma), 0.05 * sigma);
}

TEST(SboMutate, MutationRateAndBounds) {
  const auto bounds = Bounds::uniform(1, -1, 1);
  Rng rng = make_rng(3, Stream::optimizer);
  int changed = 0;
  for (int i = 0; i < 20000; ++i) {
    Vector x{0.99};
    sbo_mutate(x, 0.3, bounds, 0.25, rng);
    changed += x[0] != 0.99;
    ASSERT_LE(x[0], 1.0);
    ASSERT_GE(x[0], -1.0);
  }
  EXPECT_NEAR(changed / 20000.0, 0.25, 0.02);
}

TEST(SboMutate, Errors) {
  const auto bounds = Bounds::uniform(2, -1, 1);
  Rng rng = make_rng(3, Stream::optimizer);
  Vector x{0, 0};
  EXPECT_THROW(sbo_mutate(x, 0.0, bounds, 0.5, rng), ValidationError);
  Vector y{0};
  EXPECT_THROW(sbo_mutate(y, 0.02, bounds, 0.5, rng), DimensionError);
}

TEST(OptimizeSbo, SphereTwoDimensions) {
  Vector finals;
  for (std::uint64_t seed = 0; seed < 5; ++seed)
    finals.push_back(optimize_sbo(sphere(2), config(20, 100, seed)).final_cost);
  std::nth_element(finals.begin(), finals.begin() + 2, finals.end());
  EXPECT_LE(finals[2], 1e-2);
}

TEST(OptimizeSbo, SingleIterationIsElitist) {
  auto trace = optimize_sbo(sphere(3), config(10, 1, 4));
  ASSERT_EQ(trace.best_cost.size(), 1u);
  EXPECT_LE(trace.best_cost[0], trace.initial_best_cost);
  EXPECT_EQ(trace.evaluations, 20u);
}

TEST(OptimizeSbo, TraceIsMonotoneAndConsistent) {
  auto trace = optimize_sbo(sphere(5), config(15, 60, 6));
  ASSERT_EQ(trace.best_cost.size(), 60u);
  for (std::size_t t = 1; t < trace.best_cost.size(); ++t)
    EXPECT_LE(trace.best_cost[t], trace.best_cost[t - 1]);
  EXPECT_EQ(trace.final_cost, trace.best_cost.back());
  EXPECT_EQ(trace.final_cost, benchmark_sphere(trace.best_position));
}

TEST(OptimizeSbo, SeededDeterminism) {
  auto a = optimize_sbo(sphere(4), config(12, 40, 21));
  auto b = optimize_sbo(sphere(4), config(12, 40, 21));
  EXPECT_EQ(a, b);
  EXPECT_NE(a.best_cost, optimize_sbo(sphere(4), config(12, 40, 22)).best_cost);
}

TEST(SboUpdate, CollapsedPopulationIsAFixedPoint) {
  // With every bower and the elite at one point and no mutation, no step
  // moves anything whatever partner the roulette picks.
  const Vector point{0.3, -0.7};
  const auto bounds = Bounds::uniform(2, -1, 1);
  for (double p : {0.1, 0.5, 0.9})
    EXPECT_EQ(sbo_update_position(point, point, point, p, 0.94, bounds), point);
}

TEST(OptimizeSbo, EvaluationFailureCarriesIteration) {
  int calls = 0;
  ObjectiveSpec obj{Bounds::uniform(2, -1, 1), [&](std::span<const double>) {
                      if (++calls > 15)
                        throw std::runtime_error("boom");
                      return 1.0;
                    }};
  try {
    optimize_sbo(obj, config(10, 5, 1));
    FAIL() << "expected an optimization error";
  } catch (const OptimizationError &e) {
    EXPECT_NE(std::string(e.what()).find("iteration 1"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("boom"), std::string::npos);
  }
}

TEST(OptimizeSbo, NonFiniteCostIsRejected) {
  ObjectiveSpec obj{Bounds::uniform(2, -1, 1), [](std::span<const double>) { return std::nan(""); }};
  EXPECT_THROW(optimize_sbo(obj, config(10, 5, 1)), OptimizationError);
}

TEST(OptimizeSbo, InvalidConfiguration) {
  EXPECT_THROW(optimize_sbo(sphere(2), config(1, 5, 1)), ValidationError);
  EXPECT_THROW(optimize_sbo(sphere(2), config(10, 0, 1)), ValidationError);
  auto c = config(10, 5, 1);
  c.sbo.variance_factor = 0.0;
  EXPECT_THROW(optimize_sbo(sphere(2), c), ValidationError);
  ObjectiveSpec bad{Bounds{{1.0}, {0.0}}, benchmark_sphere};
  EXPECT_THROW(optimize_sbo(bad, config(10, 5, 1)), ValidationError);
}
